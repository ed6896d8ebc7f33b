// Command-line front end: mul / verify / bench / selftest.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cliffmul/bench.hpp"
#include "cliffmul/engines.hpp"
#include "cliffmul/multivector.hpp"

namespace {

using namespace cliffmul;

struct GlobalOpts {
  std::string sig = "3,0";
  std::string engine = "walsh-seq";
  int packsize = 16;
  std::string threads = "auto";
  std::uint64_t seed = 42;
  std::string format = "text";
  bool dynamic_packsize = false;
  bool midpoint_split = false;
};

Signature parse_sig(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos)
    throw std::invalid_argument("--sig expects \"p,q\"");
  try {
    const int p = std::stoi(text.substr(0, comma));
    const int q = std::stoi(text.substr(comma + 1));
    return Signature(p, q);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("--sig expects \"p,q\" with integers");
  } catch (const std::out_of_range&) {
    throw std::invalid_argument("--sig values out of range");
  }
}

int parse_threads(const std::string& text) {
  if (text == "auto") return 0;
  std::size_t used = 0;
  int n = 0;
  try {
    n = std::stoi(text, &used);
  } catch (...) {
    throw std::invalid_argument("--threads expects a positive integer or \"auto\"");
  }
  if (used != text.size() || n < 1)
    throw std::invalid_argument("--threads expects a positive integer or \"auto\"");
  return n;
}

EngineConfig make_config(const GlobalOpts& g) {
  EngineConfig cfg;
  const auto kind = engine_from_name(g.engine);
  if (!kind) throw std::invalid_argument("unknown engine: " + g.engine);
  cfg.engine = *kind;
  if (g.packsize < 1) throw std::invalid_argument("--packsize must be >= 1");
  cfg.packsize = g.packsize;
  cfg.threads = parse_threads(g.threads);
  cfg.dynamic_packsize = g.dynamic_packsize;
  cfg.midpoint_split = g.midpoint_split;
  return cfg;
}

std::vector<int> parse_dims(const std::string& text) {
  std::vector<int> dims;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    const std::string piece = text.substr(start, end - start);
    const auto dots = piece.find("..");
    try {
      if (dots != std::string::npos) {
        const int lo = std::stoi(piece.substr(0, dots));
        const int hi = std::stoi(piece.substr(dots + 2));
        if (lo > hi) throw std::invalid_argument("");
        for (int d = lo; d <= hi; ++d) dims.push_back(d);
      } else {
        dims.push_back(std::stoi(piece));
      }
    } catch (...) {
      throw std::invalid_argument("--dims expects \"a..b\" or a comma list");
    }
    start = end + 1;
  }
  if (dims.empty()) throw std::invalid_argument("--dims is empty");
  return dims;
}

std::vector<EngineKind> parse_engines(const std::string& text) {
  std::vector<EngineKind> engines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    const std::string name = text.substr(start, end - start);
    const auto kind = engine_from_name(name);
    if (!kind) throw std::invalid_argument("unknown engine: " + name);
    engines.push_back(*kind);
    start = end + 1;
  }
  return engines;
}

int cmd_mul(const GlobalOpts& g, const std::string& expr_x,
            const std::string& expr_y, const std::string& coeff_kind) {
  const Signature sig = parse_sig(g.sig);
  const EngineConfig cfg = make_config(g);
  if (coeff_kind == "rational") {
    const auto x = parse<Rational>(expr_x, sig);
    const auto y = parse<Rational>(expr_y, sig);
    const auto r = multiply(x, y, cfg);
    std::cout << (g.format == "csv" ? to_term_lines(r) : to_text(r) + "\n");
  } else {
    const auto x = parse<double>(expr_x, sig);
    const auto y = parse<double>(expr_y, sig);
    const auto r = multiply(x, y, cfg);
    std::cout << (g.format == "csv" ? to_term_lines(r) : to_text(r) + "\n");
  }
  return 0;
}

int cmd_verify(const GlobalOpts& g, int max_dim, int samples,
               bool inject_fault) {
  if (max_dim < 0 || max_dim > 12)
    throw std::invalid_argument("--max-dim must be within 0..12");
  const EngineConfig base = make_config(g);

  // Exhaustive blade sign sweep against the transposition oracle.
  std::uint64_t pairs = 0, mismatches = 0;
  bool reported = false;
  for (int n = 0; n <= max_dim; ++n) {
    for (int p = 0; p <= n; ++p) {
      const Signature sig(p, n - p);
      const blade_t space = static_cast<blade_t>(std::uint64_t{1} << n);
      for (blade_t a = 0; a < space; ++a) {
        for (blade_t b = 0; b < space; ++b) {
          SignedBlade got = blade_product(a, b, sig);
          if (inject_fault && n == 0 && a == 0 && b == 0) got.sign = -got.sign;
          const SignedBlade expect = oracle_blade_product(a, b, sig);
          ++pairs;
          if (!(got == expect)) {
            ++mismatches;
            if (!reported) {
              reported = true;
              std::cerr << "FAIL: blade_product(a=" << blade_to_name(a)
                        << ", b=" << blade_to_name(b) << ", sig=(" << p << ","
                        << (n - p) << ")): expected sign " << expect.sign
                        << " blade " << blade_to_name(expect.blade)
                        << ", got sign " << got.sign << " blade "
                        << blade_to_name(got.blade) << "\n";
            }
          }
        }
      }
    }
  }
  std::cout << "exhaustive blade pairs (p+q <= " << max_dim << "): " << pairs
            << " verified, " << mismatches << " mismatches\n";

  // Random full-product cross-checks across every engine.
  std::uint64_t checks = 0, engine_mismatches = 0;
  splitmix64 rng(g.seed);
  for (int n = 0; n <= max_dim; ++n) {
    for (int p = 0; p <= n; ++p) {
      const Signature sig(p, n - p);
      for (int s = 0; s < samples; ++s) {
        const auto x = random_multivector<Rational>(sig, rng, 16);
        const auto y = random_multivector<Rational>(sig, rng, 16);
        const auto ref = mul_sequential(x, y);
        for (EngineKind e :
             {EngineKind::walsh_par_tasks, EngineKind::walsh_par_flat,
              EngineKind::chevalley, EngineKind::oracle}) {
          EngineConfig cfg = base;
          cfg.engine = e;
          ++checks;
          const auto got = multiply(x, y, cfg);
          if (auto diff = first_mismatch(ref, got)) {
            ++engine_mismatches;
            if (engine_mismatches == 1)
              std::cerr << "FAIL: engine " << engine_name(e) << " sig=(" << p
                        << "," << (n - p) << "): " << *diff << "\n";
          }
        }
      }
    }
  }
  std::cout << "engine cross-checks: " << checks << " products, "
            << engine_mismatches << " mismatches\n";

  const bool ok = mismatches == 0 && engine_mismatches == 0;
  std::cout << (ok ? "verify PASSED\n" : "verify FAILED\n");
  return ok ? 0 : 1;
}

int cmd_bench(const GlobalOpts& g, const std::string& dims_str,
              const std::string& engines_str, int trials, int dim_cap) {
  BenchOptions options;
  options.dims = parse_dims(dims_str);
  options.engines = parse_engines(engines_str);
  options.cfg = make_config(g);
  options.trials = trials;
  options.seed = g.seed;
  options.dim_cap = dim_cap;
  const BenchResult result = run_bench(options);
  const TableFormat fmt =
      g.format == "csv" ? TableFormat::csv : TableFormat::markdown;
  std::cout << emit_table(result.records, fmt);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
  return 0;
}

int cmd_selftest(const GlobalOpts& g) {
  constexpr std::int64_t kLo = 1, kHi = 10'000'000;
  constexpr std::int64_t kExpected = 50000005000000;

  std::cout << "hardware threads (logical): " << hardware_threads() << "\n";
  if (const auto phys = physical_cores())
    std::cout << "physical cores: " << *phys << "\n";
  else
    std::cout << "physical cores: unknown\n";

  std::int64_t sequential = 0;
  for (std::int64_t k = kLo; k <= kHi; ++k) sequential += k;
  std::cout << "sum 1.." << kHi << " sequential: " << sequential << "\n";

  bool ok = sequential == kExpected;
  std::vector<int> counts = {1, 2, 4};
  const int configured = resolve_threads(parse_threads(g.threads));
  if (std::find(counts.begin(), counts.end(), configured) == counts.end())
    counts.push_back(configured);
  for (int t : counts) {
    const std::int64_t sum = parallel_range_sum(kLo, kHi, t);
    const bool match = sum == kExpected && sum == sequential;
    ok = ok && match;
    std::cout << "threads=" << t << ": " << sum
              << (match ? " ok" : " MISMATCH") << "\n";
  }
  std::cout << (ok ? "selftest PASSED\n" : "selftest FAILED\n");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clifford algebra product kernel for Cl(p,q): Walsh-coded "
               "blade product, parallel polynomial product engines, and a "
               "benchmark harness"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--sig", g.sig, "Signature p,q (default 3,0)");
  app.add_option("--engine", g.engine,
                 "Engine: walsh-seq | walsh-par-tasks | walsh-par-flat | "
                 "chevalley | oracle");
  app.add_option("--packsize", g.packsize,
                 "Leaf threshold of the task engine (default 16)");
  app.add_option("--threads", g.threads, "Thread count or \"auto\"")
      ->envname("CLIFFMUL_THREADS");
  app.add_option("--seed", g.seed, "Seed for generated inputs (default 42)");
  app.add_option("--format", g.format, "Output format: text | csv | md")
      ->check(CLI::IsMember({"text", "csv", "md"}));
  app.add_flag("--dynamic-packsize", g.dynamic_packsize,
               "Compute packsize from input size and thread count");
  app.add_flag("--midpoint-split", g.midpoint_split,
               "Split the larger term list at its midpoint instead of at "
               "packsize");

  auto* mul = app.add_subcommand("mul", "Multiply two Clifford polynomials");
  mul->fallthrough();
  std::string expr_x, expr_y, coeff_kind = "rational";
  mul->add_option("x", expr_x, "Left factor expression")->required();
  mul->add_option("y", expr_y, "Right factor expression")->required();
  mul->add_option("--coeff", coeff_kind, "Coefficient kind")
      ->check(CLI::IsMember({"rational", "float"}));

  auto* verify = app.add_subcommand(
      "verify", "Check the Walsh product against the sign oracle and run "
                "engine cross-checks");
  verify->fallthrough();
  int max_dim = 8, samples = 20;
  bool inject_fault = false;
  verify->add_option("--max-dim", max_dim,
                     "Exhaustive sweep over all signatures with p+q <= N "
                     "(default 8, max 12)");
  verify->add_option("--samples", samples,
                     "Random cross-check products per signature (default 20)");
  verify->add_flag("--inject-sign-fault", inject_fault,
                   "Flip one checked sign to prove the harness detects faults")
      ->group("");  // hidden

  auto* bench = app.add_subcommand("bench", "Time engines on most general "
                                            "polynomials");
  bench->fallthrough();
  std::string dims_str = "2..7", engines_str = "walsh-seq,walsh-par-tasks";
  int trials = 5, dim_cap = kDefaultBenchDimCap;
  bench->add_option("--dims", dims_str, "Dimensions: \"a..b\" or comma list");
  bench->add_option("--engines", engines_str, "Comma list of engines; the "
                                              "first is the ratio reference");
  bench->add_option("--trials", trials, "Timed trials per cell (default 5)");
  bench->add_option("--dim-cap", dim_cap,
                    "Refuse generated inputs above this dimension");

  auto* selftest = app.add_subcommand(
      "selftest", "Parallel integer-summation smoke test");
  selftest->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*mul) return cmd_mul(g, expr_x, expr_y, coeff_kind);
    if (*verify) return cmd_verify(g, max_dim, samples, inject_fault);
    if (*bench) return cmd_bench(g, dims_str, engines_str, trials, dim_cap);
    if (*selftest) return cmd_selftest(g);
  } catch (const cliffmul::parse_error& e) {
    std::cerr << "error: " << e.what() << " (offset " << e.offset() << ")\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
