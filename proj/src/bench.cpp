#include "cliffmul/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

namespace cliffmul {

namespace {

template <class C>
C random_coeff(splitmix64& rng);

template <>
Rational random_coeff<Rational>(splitmix64& rng) {
  int num = static_cast<int>(rng.next() % 19) - 9;
  if (num == 0) num = 1;
  const int den = 1 + static_cast<int>(rng.next() % 4);
  return Rational(num) / den;
}

template <>
double random_coeff<double>(splitmix64& rng) {
  const double v = rng.next_double();
  return v == 0.0 ? 1.0 : v;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return (v[(n - 1) / 2] + v[n / 2]) / 2.0;
}

bool coeff_close(const Rational& a, const Rational& b, double) {
  return a == b;
}

bool coeff_close(double a, double b, double rel_tol) {
  if (rel_tol <= 0.0) return a == b;
  const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  return std::fabs(a - b) <= rel_tol * scale;
}

std::string format_seconds(double s) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", s);
  return buf;
}

std::string format_ratio(double r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", r);
  return buf;
}

}  // namespace

template <class C>
Multivector<C> general_polynomial(const Signature& sig, const CoeffSource& src,
                                  int dim_cap) {
  if (sig.dim() > dim_cap) {
    std::ostringstream msg;
    msg << "dimension " << sig.dim() << " exceeds the benchmark cap "
        << dim_cap << "; raise the cap explicitly to proceed";
    throw std::invalid_argument(msg.str());
  }
  const std::size_t count = std::size_t{1} << sig.dim();
  splitmix64 rng(src.seed);
  std::vector<Term<C>> terms;
  terms.reserve(count);
  for (std::size_t b = 0; b < count; ++b) {
    C coeff = src.seeded ? random_coeff<C>(rng) : C(1);
    terms.push_back({std::move(coeff), static_cast<blade_t>(b)});
  }
  return Multivector<C>::from_terms(sig, std::move(terms));
}

template <class C>
Multivector<C> random_multivector(const Signature& sig, splitmix64& rng,
                                  std::size_t max_terms) {
  const std::size_t space = std::size_t{1} << std::min(sig.dim(), 30);
  const std::size_t limit = std::min(space, max_terms);
  const std::size_t count = rng.next() % (limit + 1);
  std::vector<Term<C>> terms;
  terms.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const blade_t blade =
        static_cast<blade_t>(rng.next()) & blade_mask(sig.dim());
    terms.push_back({random_coeff<C>(rng), blade});
  }
  return Multivector<C>::from_terms(sig, std::move(terms));
}

template <class C>
std::uint64_t text_digest(const Multivector<C>& x) {
  const std::string text = to_text(x);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

template <class C>
std::optional<std::string> first_mismatch(const Multivector<C>& expect,
                                          const Multivector<C>& got,
                                          double rel_tol) {
  const auto a = expect.terms();
  const auto b = got.terms();
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (i < a.size() && j < b.size() && a[i].blade == b[j].blade) {
      if (!coeff_close(a[i].coeff, b[j].coeff, rel_tol))
        return "blade " + blade_to_name(a[i].blade) + ": expected " +
               coeff_to_text(a[i].coeff) + ", got " + coeff_to_text(b[j].coeff);
      ++i;
      ++j;
      continue;
    }
    const bool take_a =
        j >= b.size() ||
        (i < a.size() && canonical_key(a[i].blade) < canonical_key(b[j].blade));
    if (take_a)
      return "blade " + blade_to_name(a[i].blade) + ": expected " +
             coeff_to_text(a[i].coeff) + ", got nothing";
    return "blade " + blade_to_name(b[j].blade) + ": expected nothing, got " +
           coeff_to_text(b[j].coeff);
  }
  return std::nullopt;
}

double wall_now() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

double process_cpu_now(bool& ok) {
#if defined(CLOCK_PROCESS_CPUTIME_ID)
  timespec ts{};
  if (clock_gettime(CLOCK_PROCESS_CPUTIME_ID, &ts) == 0) {
    ok = true;
    return static_cast<double>(ts.tv_sec) + 1e-9 * ts.tv_nsec;
  }
#endif
  ok = false;
  return wall_now();
}

int hardware_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::optional<int> physical_cores() {
  std::ifstream in("/proc/cpuinfo");
  if (!in) return std::nullopt;
  std::set<std::pair<long, long>> cores;
  long physical_id = -1;
  std::string line;
  while (std::getline(in, line)) {
    const auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    if (line.compare(0, 11, "physical id") == 0)
      physical_id = std::strtol(line.c_str() + colon + 1, nullptr, 10);
    else if (line.compare(0, 7, "core id") == 0)
      cores.emplace(physical_id,
                    std::strtol(line.c_str() + colon + 1, nullptr, 10));
  }
  if (cores.empty()) return std::nullopt;
  return static_cast<int>(cores.size());
}

namespace {

struct DimInputs {
  Multivector<double> x;
  Multivector<double> y;
  std::uint64_t x_seed;
  std::uint64_t y_seed;
};

DimInputs make_inputs(int dim, std::uint64_t seed, int dim_cap) {
  const Signature sig(dim, 0);
  splitmix64 derive(seed ^ (static_cast<std::uint64_t>(dim) *
                            0x9E3779B97F4A7C15ull));
  const std::uint64_t xs = derive.next();
  const std::uint64_t ys = derive.next();
  return {general_polynomial<double>(sig, CoeffSource::from_seed(xs), dim_cap),
          general_polynomial<double>(sig, CoeffSource::from_seed(ys), dim_cap),
          xs, ys};
}

// The gate is exact on rational inputs up to dimension 9; beyond that the
// rational reference is impractically slow, so float outputs are compared
// with a small mixed absolute/relative tolerance instead.
constexpr int kExactGateMaxDim = 9;
constexpr double kFloatGateTol = 1e-9;

void run_gate(int dim, const DimInputs& in, const std::vector<EngineKind>& engines,
              const EngineConfig& base_cfg, int dim_cap) {
  const Signature sig(dim, 0);
  auto gate_fail = [&](EngineKind e, const std::string& diff) {
    throw std::runtime_error("correctness gate failed: engine " +
                             std::string(engine_name(e)) + " at dim " +
                             std::to_string(dim) + ": " + diff);
  };
  if (dim <= kExactGateMaxDim) {
    const auto xr = general_polynomial<Rational>(
        sig, CoeffSource::from_seed(in.x_seed), dim_cap);
    const auto yr = general_polynomial<Rational>(
        sig, CoeffSource::from_seed(in.y_seed), dim_cap);
    const auto ref = mul_sequential(xr, yr);
    for (EngineKind e : engines) {
      EngineConfig cfg = base_cfg;
      cfg.engine = e;
      const auto got = multiply(xr, yr, cfg);
      if (auto diff = first_mismatch(ref, got)) gate_fail(e, *diff);
    }
  } else {
    const auto ref = mul_sequential(in.x, in.y);
    for (EngineKind e : engines) {
      EngineConfig cfg = base_cfg;
      cfg.engine = e;
      const auto got = multiply(in.x, in.y, cfg);
      if (auto diff = first_mismatch(ref, got, kFloatGateTol))
        gate_fail(e, *diff);
    }
  }
}

bool is_parallel(EngineKind e) {
  return e == EngineKind::walsh_par_tasks || e == EngineKind::walsh_par_flat;
}

}  // namespace

BenchResult run_bench(const BenchOptions& options) {
  if (options.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (options.engines.empty())
    throw std::invalid_argument("at least one engine is required");
  BenchResult result;
  for (int dim : options.dims) {
    const DimInputs in = make_inputs(dim, options.seed, options.dim_cap);
    run_gate(dim, in, options.engines, options.cfg, options.dim_cap);

    for (EngineKind e : options.engines) {
      EngineConfig cfg = options.cfg;
      cfg.engine = e;
      multiply(in.x, in.y, cfg);  // warm-up, untimed
      std::vector<double> walls, cpus;
      bool cpu_ok_all = true;
      for (int t = 0; t < options.trials; ++t) {
        bool ok0 = false, ok1 = false;
        const double c0 = process_cpu_now(ok0);
        const double w0 = wall_now();
        const auto r = multiply(in.x, in.y, cfg);
        const double w1 = wall_now();
        const double c1 = process_cpu_now(ok1);
        (void)r;
        walls.push_back(std::max(w1 - w0, 1e-9));
        cpus.push_back(c1 - c0);
        cpu_ok_all = cpu_ok_all && ok0 && ok1;
      }
      BenchRecord rec;
      rec.dim = dim;
      rec.sig = Signature(dim, 0);
      rec.engine = e;
      rec.terms_x = in.x.term_count();
      rec.terms_y = in.y.term_count();
      rec.blade_products =
          static_cast<std::uint64_t>(rec.terms_x) * rec.terms_y;
      rec.wall_seconds = median(walls);
      rec.cpu_seconds = cpu_ok_all ? median(cpus) : rec.wall_seconds;
      rec.effective_cores = rec.cpu_seconds / rec.wall_seconds;
      rec.trials = options.trials;
      rec.packsize = options.cfg.packsize;
      rec.threads = is_parallel(e) ? resolve_threads(options.cfg.threads) : 1;
      rec.seed = options.seed;
      rec.cpu_measured = cpu_ok_all;
      result.records.push_back(rec);
    }

    // Overhead flag: a one-thread task run should stay within 2x of the
    // plain sequential engine.
    if (resolve_threads(options.cfg.threads) == 1) {
      const BenchRecord* seq = nullptr;
      const BenchRecord* par = nullptr;
      for (const auto& r : result.records) {
        if (r.dim != dim) continue;
        if (r.engine == EngineKind::walsh_seq) seq = &r;
        if (r.engine == EngineKind::walsh_par_tasks) par = &r;
      }
      if (seq && par && par->wall_seconds > 2.0 * seq->wall_seconds) {
        std::ostringstream w;
        w << "dim " << dim << ": walsh-par-tasks with 1 thread took "
          << format_seconds(par->wall_seconds) << " s vs "
          << format_seconds(seq->wall_seconds)
          << " s sequential (more than 2x overhead)";
        result.warnings.push_back(w.str());
      }
    }
  }
  return result;
}

std::string emit_table(const std::vector<BenchRecord>& records,
                       TableFormat format) {
  if (format == TableFormat::csv) {
    std::string out =
        "dim,engine,terms_x,terms_y,blade_products,wall_seconds,cpu_seconds,"
        "effective_cores,packsize,threads,trials,seed\n";
    for (const auto& r : records) {
      char buf[256];
      std::snprintf(buf, sizeof buf,
                    "%d,%s,%zu,%zu,%llu,%.6f,%.6f,%.3f,%d,%d,%d,%llu\n", r.dim,
                    std::string(engine_name(r.engine)).c_str(), r.terms_x,
                    r.terms_y, static_cast<unsigned long long>(r.blade_products),
                    r.wall_seconds, r.cpu_seconds, r.effective_cores,
                    r.packsize, r.threads, r.trials,
                    static_cast<unsigned long long>(r.seed));
      out += buf;
    }
    return out;
  }

  // Markdown, one row per dimension: reference engine first, then each
  // remaining engine's time followed by its ratio against the reference.
  std::vector<EngineKind> engines;
  std::vector<int> dims;
  for (const auto& r : records) {
    if (std::find(engines.begin(), engines.end(), r.engine) == engines.end())
      engines.push_back(r.engine);
    if (std::find(dims.begin(), dims.end(), r.dim) == dims.end())
      dims.push_back(r.dim);
  }
  std::sort(dims.begin(), dims.end());
  auto find_record = [&](int dim, EngineKind e) -> const BenchRecord* {
    for (const auto& r : records)
      if (r.dim == dim && r.engine == e) return &r;
    return nullptr;
  };

  std::string out = "| dim V |";
  if (!engines.empty())
    out += " t_" + std::string(engine_name(engines[0])) + " [sec] |";
  for (std::size_t i = 1; i < engines.size(); ++i) {
    const std::string name(engine_name(engines[i]));
    const std::string ref(engine_name(engines[0]));
    out += " t_" + name + " [sec] | t_" + name + "/t_" + ref + " |";
  }
  out += "\n|---|";
  const std::size_t value_columns =
      engines.empty() ? 0 : 1 + 2 * (engines.size() - 1);
  for (std::size_t i = 0; i < value_columns; ++i) out += "---:|";
  out += "\n";

  for (int dim : dims) {
    out += "| " + std::to_string(dim) + " |";
    const BenchRecord* ref =
        engines.empty() ? nullptr : find_record(dim, engines[0]);
    out += ref ? " " + format_seconds(ref->wall_seconds) + " |" : " NA |";
    for (std::size_t i = 1; i < engines.size(); ++i) {
      const BenchRecord* r = find_record(dim, engines[i]);
      out += r ? " " + format_seconds(r->wall_seconds) + " |" : " NA |";
      if (r && ref && ref->wall_seconds > 0.0)
        out += " " + format_ratio(r->wall_seconds / ref->wall_seconds) + " |";
      else
        out += " NA |";
    }
    out += "\n";
  }
  return out;
}

template Multivector<Rational> general_polynomial<Rational>(const Signature&,
                                                            const CoeffSource&,
                                                            int);
template Multivector<double> general_polynomial<double>(const Signature&,
                                                        const CoeffSource&,
                                                        int);
template Multivector<Rational> random_multivector<Rational>(const Signature&,
                                                            splitmix64&,
                                                            std::size_t);
template Multivector<double> random_multivector<double>(const Signature&,
                                                        splitmix64&,
                                                        std::size_t);
template std::uint64_t text_digest<Rational>(const Multivector<Rational>&);
template std::uint64_t text_digest<double>(const Multivector<double>&);
template std::optional<std::string> first_mismatch<Rational>(
    const Multivector<Rational>&, const Multivector<Rational>&, double);
template std::optional<std::string> first_mismatch<double>(
    const Multivector<double>&, const Multivector<double>&, double);

}  // namespace cliffmul
