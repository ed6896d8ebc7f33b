#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cliffmul/engines.hpp"

namespace cliffmul {

inline constexpr int kDefaultBenchDimCap = 20;

/// splitmix64 stream; the documented source of all generated coefficients.
struct splitmix64 {
  std::uint64_t state;

  explicit splitmix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [-1, 1); platform-independent mapping from the raw stream.
  double next_double() {
    return static_cast<double>(next() >> 11) * 0x1p-52 - 1.0;
  }
};

struct CoeffSource {
  bool seeded = false;
  std::uint64_t seed = 0;

  static CoeffSource constant_one() { return {}; }
  static CoeffSource from_seed(std::uint64_t seed) { return {true, seed}; }
};

/// The most general element: every one of the 2^n basis monomials present
/// with a nonzero coefficient. Refuses dimensions above `dim_cap`.
template <class C>
Multivector<C> general_polynomial(const Signature& sig, const CoeffSource& src,
                                  int dim_cap = kDefaultBenchDimCap);

/// Sparse element with up to max_terms random terms (small coefficients,
/// blades drawn with replacement); used by cross-check and property runs.
template <class C>
Multivector<C> random_multivector(const Signature& sig, splitmix64& rng,
                                  std::size_t max_terms);

/// FNV-1a over the canonical text rendering; fingerprints generated inputs.
template <class C>
std::uint64_t text_digest(const Multivector<C>& x);

/// One timing measurement.
struct BenchRecord {
  int dim = 0;
  Signature sig{0, 0};
  EngineKind engine = EngineKind::walsh_seq;
  std::size_t terms_x = 0;
  std::size_t terms_y = 0;
  std::uint64_t blade_products = 0;  // terms_x * terms_y
  double wall_seconds = 0.0;         // median over trials
  double cpu_seconds = 0.0;          // process CPU, summed across threads
  double effective_cores = 0.0;      // cpu_seconds / wall_seconds
  int trials = 0;
  int packsize = 0;
  int threads = 0;  // resolved count actually used
  std::uint64_t seed = 0;
  bool cpu_measured = true;  // false -> cpu clock unavailable, wall recorded
};

struct BenchOptions {
  std::vector<int> dims;
  std::vector<EngineKind> engines;
  EngineConfig cfg;  // cfg.engine is ignored; engines come from the list
  int trials = 5;
  std::uint64_t seed = 42;
  int dim_cap = kDefaultBenchDimCap;
};

struct BenchResult {
  std::vector<BenchRecord> records;
  std::vector<std::string> warnings;
};

/// Runs the timing protocol: per dimension, generate one pair of most
/// general polynomials shared by every engine, verify each engine against
/// walsh-seq (exact rational inputs up to dimension 9, small-tolerance
/// float comparison above), then one untimed warm-up and `trials` timed
/// products per engine. Throws on a correctness-gate failure with the first
/// mismatching term. Timed trials never run concurrently with each other.
BenchResult run_bench(const BenchOptions& options);

enum class TableFormat { csv, markdown };

/// CSV: fixed header
/// dim,engine,terms_x,terms_y,blade_products,wall_seconds,cpu_seconds,
/// effective_cores,packsize,threads,trials,seed.
/// Markdown: one row per dimension, one time column per engine plus
/// t_engine/t_reference ratio columns against the first listed engine;
/// missing cells print "NA".
std::string emit_table(const std::vector<BenchRecord>& records,
                       TableFormat format);

/// First difference between two multivectors, rendered for diagnostics;
/// nullopt when equal. rel_tol > 0 compares coefficients with a relative
/// tolerance instead of exactly.
template <class C>
std::optional<std::string> first_mismatch(const Multivector<C>& expect,
                                          const Multivector<C>& got,
                                          double rel_tol = 0.0);

int hardware_threads();
std::optional<int> physical_cores();

/// Monotonic wall clock, seconds.
double wall_now();

/// Per-process CPU time, seconds; ok=false when not measurable here.
double process_cpu_now(bool& ok);

}  // namespace cliffmul
