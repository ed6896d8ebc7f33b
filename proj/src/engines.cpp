#include "cliffmul/engines.hpp"

#include <atomic>
#include <bit>
#include <span>
#include <thread>
#include <unordered_map>

namespace cliffmul {

namespace {

// Largest blade space accumulated in a dense array; beyond this a hash map
// takes over.
constexpr std::size_t kDenseLimit = std::size_t{1} << 18;

std::size_t blade_space(const Signature& sig) {
  return std::size_t{1} << sig.dim();
}

void check_signatures(const Signature& a, const Signature& b) {
  if (!(a == b)) throw std::invalid_argument("signature mismatch");
}

void check_config(const EngineConfig& cfg) {
  if (cfg.packsize < 1) throw std::invalid_argument("packsize must be >= 1");
  if (cfg.threads < 0)
    throw std::invalid_argument("threads must be >= 1 (or 0 for auto)");
}

template <class C>
bool term_key_less(const Term<C>& a, const Term<C>& b) {
  return canonical_key(a.blade) < canonical_key(b.blade);
}

// ---------------------------------------------------------------------------
// Accumulation
// ---------------------------------------------------------------------------

/// Coefficient accumulator over the blade space: a dense array with a
/// touched list for small dimensions, a hash map otherwise. Per-blade sums
/// happen in insertion-encounter order either way.
template <class C>
class blade_accumulator {
 public:
  explicit blade_accumulator(const Signature& sig)
      : dense_(blade_space(sig) <= kDenseLimit) {
    if (dense_) {
      slots_.resize(blade_space(sig));
      used_.assign(slots_.size(), 0);
    }
  }

  void add(blade_t blade, C value) {
    if (dense_) {
      if (!used_[blade]) {
        used_[blade] = 1;
        touched_.push_back(blade);
        slots_[blade] = std::move(value);
      } else {
        slots_[blade] += value;
      }
    } else {
      auto [it, fresh] = map_.try_emplace(blade, std::move(value));
      if (!fresh) it->second += value;
    }
  }

  std::vector<Term<C>> extract_sorted() {
    std::vector<Term<C>> out;
    if (dense_) {
      std::sort(touched_.begin(), touched_.end(), [](blade_t a, blade_t b) {
        return canonical_key(a) < canonical_key(b);
      });
      out.reserve(touched_.size());
      for (blade_t b : touched_)
        if (!coeff_is_zero(slots_[b]))
          out.push_back({std::move(slots_[b]), b});
    } else {
      out.reserve(map_.size());
      for (auto& [b, v] : map_)
        if (!coeff_is_zero(v)) out.push_back({std::move(v), b});
      std::sort(out.begin(), out.end(), term_key_less<C>);
    }
    return out;
  }

 private:
  bool dense_;
  std::vector<C> slots_;
  std::vector<char> used_;
  std::vector<blade_t> touched_;
  std::unordered_map<blade_t, C> map_;
};

template <class C>
void accumulate_pair(blade_accumulator<C>& acc, const Term<C>& tx,
                     const Term<C>& ty, const Signature& sig) {
  const SignedBlade sb = blade_product(tx.blade, ty.blade, sig);
  C v = tx.coeff;
  v *= ty.coeff;
  if (sb.sign < 0) v = coeff_neg(std::move(v));
  acc.add(sb.blade, std::move(v));
}

// ---------------------------------------------------------------------------
// Leaf products for the task engine
// ---------------------------------------------------------------------------

/// Generic leaf: collect all contributions in (i, j) order, stable-sort by
/// blade key, combine. The stable sort keeps the per-blade addition order
/// equal to the encounter order.
template <class C>
std::vector<Term<C>> leaf_collect(std::span<const Term<C>> xs,
                                  std::span<const Term<C>> ys,
                                  const Signature& sig) {
  std::vector<Term<C>> out;
  out.reserve(xs.size() * ys.size());
  for (const auto& tx : xs)
    for (const auto& ty : ys) {
      const SignedBlade sb = blade_product(tx.blade, ty.blade, sig);
      C v = tx.coeff;
      v *= ty.coeff;
      if (sb.sign < 0) v = coeff_neg(std::move(v));
      out.push_back({std::move(v), sb.blade});
    }
  std::stable_sort(out.begin(), out.end(), term_key_less<C>);
  return detail::combine_sorted_terms(std::move(out));
}

/// Reusable per-thread scratch for float leaves: epoch-stamped dense slots
/// avoid clearing the array between leaves.
struct dense_scratch {
  std::vector<double> val;
  std::vector<std::uint32_t> epoch;
  std::vector<blade_t> touched;
  std::uint32_t cur = 0;

  void begin(std::size_t space) {
    if (val.size() < space) {
      val.resize(space, 0.0);
      epoch.assign(space, 0);
      cur = 0;
    }
    if (++cur == 0) {  // epoch counter wrapped
      std::fill(epoch.begin(), epoch.end(), 0);
      cur = 1;
    }
    touched.clear();
  }
};

thread_local dense_scratch g_leaf_scratch;

std::vector<Term<double>> leaf_dense(std::span<const Term<double>> xs,
                                     std::span<const Term<double>> ys,
                                     const Signature& sig) {
  dense_scratch& s = g_leaf_scratch;
  s.begin(blade_space(sig));
  for (const auto& tx : xs)
    for (const auto& ty : ys) {
      const SignedBlade sb = blade_product(tx.blade, ty.blade, sig);
      const double v =
          sb.sign < 0 ? -(tx.coeff * ty.coeff) : tx.coeff * ty.coeff;
      if (s.epoch[sb.blade] != s.cur) {
        s.epoch[sb.blade] = s.cur;
        s.val[sb.blade] = v;
        s.touched.push_back(sb.blade);
      } else {
        s.val[sb.blade] += v;
      }
    }
  std::sort(s.touched.begin(), s.touched.end(), [](blade_t a, blade_t b) {
    return canonical_key(a) < canonical_key(b);
  });
  std::vector<Term<double>> out;
  out.reserve(s.touched.size());
  for (blade_t b : s.touched)
    if (s.val[b] != 0.0) out.push_back({s.val[b], b});
  return out;
}

template <class C>
std::vector<Term<C>> leaf_product(std::span<const Term<C>> xs,
                                  std::span<const Term<C>> ys,
                                  const Signature& sig) {
  return leaf_collect<C>(xs, ys, sig);
}

template <>
std::vector<Term<double>> leaf_product<double>(std::span<const Term<double>> xs,
                                               std::span<const Term<double>> ys,
                                               const Signature& sig) {
  if (blade_space(sig) <= kDenseLimit) return leaf_dense(xs, ys, sig);
  return leaf_collect<double>(xs, ys, sig);
}

// ---------------------------------------------------------------------------
// Task-splitting engine
// ---------------------------------------------------------------------------

template <class C>
struct task_mul {
  Signature sig;
  std::size_t packsize;
  bool midpoint;
  task_pool& pool;
  std::atomic<std::uint64_t> leaves{0};
  std::atomic<std::uint64_t> splits{0};

  std::vector<Term<C>> run(std::span<const Term<C>> xs,
                           std::span<const Term<C>> ys) {
    if (std::max(xs.size(), ys.size()) <= packsize) {
      leaves.fetch_add(1, std::memory_order_relaxed);
      return leaf_product<C>(xs, ys, sig);
    }
    splits.fetch_add(1, std::memory_order_relaxed);
    std::vector<Term<C>> left, right;
    if (xs.size() < ys.size()) {
      const std::size_t cut = midpoint ? ys.size() / 2 : packsize;
      pool.fork_join([&] { left = run(xs, ys.first(cut)); },
                     [&] { right = run(xs, ys.subspan(cut)); });
    } else {
      const std::size_t cut = midpoint ? xs.size() / 2 : packsize;
      pool.fork_join([&] { left = run(xs.first(cut), ys); },
                     [&] { right = run(xs.subspan(cut), ys); });
    }
    return detail::merge_add_terms(std::move(left), std::move(right));
  }
};

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

std::size_t effective_packsize(const EngineConfig& cfg, std::size_t nx,
                               std::size_t ny, int threads) {
  if (!cfg.dynamic_packsize) return static_cast<std::size_t>(cfg.packsize);
  return std::max<std::size_t>(
      4, ceil_div(std::max(nx, ny), 4 * static_cast<std::size_t>(threads)));
}

}  // namespace

std::string_view engine_name(EngineKind kind) {
  switch (kind) {
    case EngineKind::walsh_seq: return "walsh-seq";
    case EngineKind::walsh_par_tasks: return "walsh-par-tasks";
    case EngineKind::walsh_par_flat: return "walsh-par-flat";
    case EngineKind::chevalley: return "chevalley";
    case EngineKind::oracle: return "oracle";
  }
  return "?";
}

std::optional<EngineKind> engine_from_name(std::string_view name) {
  for (EngineKind k : kAllEngines)
    if (engine_name(k) == name) return k;
  return std::nullopt;
}

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

template <class C>
Multivector<C> mul_sequential(const Multivector<C>& x,
                              const Multivector<C>& y) {
  check_signatures(x.sig(), y.sig());
  blade_accumulator<C> acc(x.sig());
  for (const auto& tx : x.terms())
    for (const auto& ty : y.terms()) accumulate_pair(acc, tx, ty, x.sig());
  return Multivector<C>::from_terms(x.sig(), acc.extract_sorted());
}

template <class C>
Multivector<C> mul_parallel_tasks(const Multivector<C>& x,
                                  const Multivector<C>& y,
                                  const EngineConfig& cfg, TaskStats* stats) {
  check_signatures(x.sig(), y.sig());
  check_config(cfg);
  if (stats) *stats = {};
  if (x.is_zero() || y.is_zero()) return Multivector<C>(x.sig());
  const int threads = resolve_threads(cfg.threads);
  const std::size_t packsize =
      effective_packsize(cfg, x.term_count(), y.term_count(), threads);
  task_pool pool(static_cast<unsigned>(threads - 1));
  task_mul<C> mul{x.sig(), packsize, cfg.midpoint_split, pool};
  auto terms = mul.run(x.terms(), y.terms());
  if (stats) {
    stats->leaves = mul.leaves.load();
    stats->splits = mul.splits.load();
  }
  return Multivector<C>::from_terms(x.sig(), std::move(terms));
}

template <class C>
Multivector<C> mul_parallel_flat(const Multivector<C>& x,
                                 const Multivector<C>& y,
                                 const EngineConfig& cfg) {
  check_signatures(x.sig(), y.sig());
  check_config(cfg);
  if (x.is_zero() || y.is_zero()) return Multivector<C>(x.sig());
  const auto xs = x.terms();
  const auto ys = y.terms();
  const std::size_t blocks = std::min<std::size_t>(
      static_cast<std::size_t>(resolve_threads(cfg.threads)), xs.size());
  const std::size_t rows = ceil_div(xs.size(), blocks);

  auto run_block = [&](std::size_t b) {
    const std::size_t lo = b * rows;
    const std::size_t hi = std::min(lo + rows, xs.size());
    blade_accumulator<C> acc(x.sig());
    for (std::size_t i = lo; i < hi; ++i)
      for (const auto& ty : ys) accumulate_pair(acc, xs[i], ty, x.sig());
    return acc.extract_sorted();
  };

  if (blocks == 1)
    return Multivector<C>::from_terms(x.sig(), run_block(0));

  std::vector<std::vector<Term<C>>> parts(blocks);
  std::vector<std::thread> threads;
  threads.reserve(blocks);
  for (std::size_t b = 0; b < blocks; ++b)
    threads.emplace_back([&, b] { parts[b] = run_block(b); });
  for (auto& t : threads) t.join();

  std::vector<Term<C>> sum = std::move(parts[0]);
  for (std::size_t b = 1; b < blocks; ++b)
    sum = detail::merge_add_terms(std::move(sum), std::move(parts[b]));
  return Multivector<C>::from_terms(x.sig(), std::move(sum));
}

template <class C>
Multivector<C> mul_chevalley(const Multivector<C>& x, const Multivector<C>& y) {
  check_signatures(x.sig(), y.sig());
  const Signature& sig = x.sig();
  std::vector<Term<C>> acc;
  for (const auto& tx : x.terms()) {
    std::vector<Term<C>> cur(y.terms().begin(), y.terms().end());
    // Apply the generators of tx.blade from the highest index down, so the
    // lowest generator acts last.
    blade_t rest = tx.blade;
    while (rest != 0) {
      const int top = std::bit_width(rest) - 1;  // 0-based bit position
      const blade_t bit = blade_t{1} << top;
      const blade_t below = bit - 1;
      const bool neg_metric = sig.metric_sign(top + 1) < 0;
      rest ^= bit;
      for (auto& t : cur) {
        bool flip = (std::popcount(t.blade & below) & 1) != 0;
        if ((t.blade & bit) && neg_metric) flip = !flip;
        if (flip) t.coeff = coeff_neg(std::move(t.coeff));
        t.blade ^= bit;
      }
    }
    std::sort(cur.begin(), cur.end(), term_key_less<C>);
    std::vector<Term<C>> scaled;
    scaled.reserve(cur.size());
    for (auto& t : cur) {
      C v = tx.coeff;
      v *= t.coeff;
      if (!coeff_is_zero(v)) scaled.push_back({std::move(v), t.blade});
    }
    acc = detail::merge_add_terms(std::move(acc), std::move(scaled));
  }
  return Multivector<C>::from_terms(sig, std::move(acc));
}

template <class C>
Multivector<C> mul_oracle(const Multivector<C>& x, const Multivector<C>& y) {
  check_signatures(x.sig(), y.sig());
  blade_accumulator<C> acc(x.sig());
  for (const auto& tx : x.terms())
    for (const auto& ty : y.terms()) {
      const SignedBlade sb = oracle_blade_product(tx.blade, ty.blade, x.sig());
      C v = tx.coeff;
      v *= ty.coeff;
      if (sb.sign < 0) v = coeff_neg(std::move(v));
      acc.add(sb.blade, std::move(v));
    }
  return Multivector<C>::from_terms(x.sig(), acc.extract_sorted());
}

template <class C>
Multivector<C> multiply(const Multivector<C>& x, const Multivector<C>& y,
                        const EngineConfig& cfg) {
  switch (cfg.engine) {
    case EngineKind::walsh_seq: return mul_sequential(x, y);
    case EngineKind::walsh_par_tasks: return mul_parallel_tasks(x, y, cfg);
    case EngineKind::walsh_par_flat: return mul_parallel_flat(x, y, cfg);
    case EngineKind::chevalley: return mul_chevalley(x, y);
    case EngineKind::oracle: return mul_oracle(x, y);
  }
  throw std::invalid_argument("unknown engine");
}

namespace {

std::int64_t range_sum_task(std::int64_t lo, std::int64_t hi,
                            std::int64_t grain, task_pool& pool) {
  if (hi - lo < grain) {  // small range: just add
    std::int64_t sum = 0;
    for (std::int64_t k = lo; k <= hi; ++k) sum += k;
    return sum;
  }
  const std::int64_t mid = lo + (hi - lo) / 2;
  std::int64_t left = 0, right = 0;
  pool.fork_join([&] { left = range_sum_task(lo, mid, grain, pool); },
                 [&] { right = range_sum_task(mid + 1, hi, grain, pool); });
  return left + right;
}

}  // namespace

std::int64_t parallel_range_sum(std::int64_t lo, std::int64_t hi, int threads,
                                std::int64_t grain) {
  if (lo > hi) return 0;
  if (grain < 1) grain = 1;
  task_pool pool(static_cast<unsigned>(resolve_threads(threads) - 1));
  return range_sum_task(lo, hi, grain, pool);
}

#define CLIFFMUL_INSTANTIATE(C)                                               \
  template Multivector<C> mul_sequential<C>(const Multivector<C>&,           \
                                            const Multivector<C>&);          \
  template Multivector<C> mul_parallel_tasks<C>(                             \
      const Multivector<C>&, const Multivector<C>&, const EngineConfig&,     \
      TaskStats*);                                                           \
  template Multivector<C> mul_parallel_flat<C>(                              \
      const Multivector<C>&, const Multivector<C>&, const EngineConfig&);    \
  template Multivector<C> mul_chevalley<C>(const Multivector<C>&,            \
                                           const Multivector<C>&);           \
  template Multivector<C> mul_oracle<C>(const Multivector<C>&,               \
                                        const Multivector<C>&);              \
  template Multivector<C> multiply<C>(const Multivector<C>&,                 \
                                      const Multivector<C>&,                 \
                                      const EngineConfig&);

CLIFFMUL_INSTANTIATE(Rational)
CLIFFMUL_INSTANTIATE(double)

#undef CLIFFMUL_INSTANTIATE

}  // namespace cliffmul
