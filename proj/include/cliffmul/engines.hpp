#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "cliffmul/multivector.hpp"
#include "cliffmul/task_pool.hpp"

namespace cliffmul {

enum class EngineKind {
  walsh_seq,
  walsh_par_tasks,
  walsh_par_flat,
  chevalley,
  oracle,
};

inline constexpr std::array<EngineKind, 5> kAllEngines = {
    EngineKind::walsh_seq, EngineKind::walsh_par_tasks,
    EngineKind::walsh_par_flat, EngineKind::chevalley, EngineKind::oracle};

std::string_view engine_name(EngineKind kind);
std::optional<EngineKind> engine_from_name(std::string_view name);

struct EngineConfig {
  EngineKind engine = EngineKind::walsh_seq;
  int packsize = 16;
  int threads = 0;  // 0 = auto (hardware threads)
  bool dynamic_packsize = false;
  bool midpoint_split = false;  // split the larger list at its midpoint
};

/// 0 (auto) resolves to the hardware thread count, never below 1.
int resolve_threads(int threads);

struct TaskStats {
  std::uint64_t leaves = 0;
  std::uint64_t splits = 0;
};

/// Plain double loop over both term lists, accumulated in canonical term
/// order.
template <class C>
Multivector<C> mul_sequential(const Multivector<C>& x, const Multivector<C>& y);

/// Recursive task-splitting product: when both term lists fit packsize the
/// leaf is computed directly, otherwise the larger list is split at
/// packsize and the two halves become child tasks whose results are added
/// in split order. The combine tree is a function of the term counts and
/// packsize alone, so results are identical for any thread count or
/// schedule, bit-for-bit with float coefficients.
template <class C>
Multivector<C> mul_parallel_tasks(const Multivector<C>& x,
                                  const Multivector<C>& y,
                                  const EngineConfig& cfg,
                                  TaskStats* stats = nullptr);

/// Flat fork: the Cartesian product is partitioned into contiguous
/// row-blocks of x's term list, one dedicated thread per block, block
/// results summed in block order after all threads are joined. With one
/// thread this is exactly the sequential execution.
template <class C>
Multivector<C> mul_parallel_flat(const Multivector<C>& x,
                                 const Multivector<C>& y,
                                 const EngineConfig& cfg);

/// Product through the generator-by-generator recursion: Id*y = y, and for
/// a blade with lowest generator i and remainder a', a*y = e_i*(a'*y).
template <class C>
Multivector<C> mul_chevalley(const Multivector<C>& x, const Multivector<C>& y);

/// Double loop over the transposition-counting sign oracle; ground truth
/// for tests and verification runs.
template <class C>
Multivector<C> mul_oracle(const Multivector<C>& x, const Multivector<C>& y);

template <class C>
Multivector<C> multiply(const Multivector<C>& x, const Multivector<C>& y,
                        const EngineConfig& cfg);

/// Recursive midpoint-split parallel sum of lo..hi; ranges under `grain`
/// are added directly. The threading smoke test.
std::int64_t parallel_range_sum(std::int64_t lo, std::int64_t hi, int threads,
                                std::int64_t grain = 1000);

}  // namespace cliffmul
