#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cliffmul {

/// A basis monomial of Cl(p,q), coded as an n-bit mask: bit i-1 is set iff
/// the generator e_i is a factor. Mask 0 is the identity monomial "Id".
using blade_t = std::uint32_t;

/// Blades must fit one machine word.
inline constexpr int kMaxDim = 32;

constexpr blade_t blade_mask(int n) {
  return static_cast<blade_t>((std::uint64_t{1} << n) - 1);
}

/// Number of generators in a blade.
constexpr int grade(blade_t b) { return std::popcount(b); }

/// Sort key of the canonical term order: ascending grade, then ascending
/// bitmask.
constexpr std::uint64_t canonical_key(blade_t b) {
  return (static_cast<std::uint64_t>(grade(b)) << 32) | b;
}

/// Diagonal quadratic-form signature (p,q): generators 1..p square to +1,
/// generators p+1..p+q square to -1.
class Signature {
 public:
  constexpr Signature(int p, int q) : p_(p), q_(q) {
    if (p < 0 || q < 0 || p + q > kMaxDim)
      throw std::invalid_argument(
          "signature: need p >= 0, q >= 0 and p + q <= 32");
  }

  constexpr int p() const { return p_; }
  constexpr int q() const { return q_; }
  constexpr int dim() const { return p_ + q_; }

  /// Mask of the generators squaring to -1 (bits p .. p+q-1).
  constexpr blade_t qmask() const { return blade_mask(dim()) & ~blade_mask(p_); }

  /// Square of e_i: +1 or -1 (i is 1-based).
  constexpr int metric_sign(int i) const { return i <= p_ ? 1 : -1; }

  /// True iff the blade uses only generators of this signature.
  constexpr bool contains(blade_t b) const {
    return (b & ~blade_mask(dim())) == 0;
  }

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  int p_;
  int q_;
};

/// Index of the product monomial: mod-2 addition of the factor masks.
constexpr blade_t oplus(blade_t a, blade_t b) { return a ^ b; }

/// Gray map g(x) = x ^ (x << 1), truncated to n bits.
constexpr blade_t gray(blade_t x, int n) {
  return (x ^ static_cast<blade_t>(static_cast<std::uint64_t>(x) << 1)) &
         blade_mask(n);
}

/// Inverse Gray map: bit i of the result is the XOR of bits 0..i of b
/// (prefix parity from the least significant bit), truncated to n bits.
constexpr blade_t inverse_gray(blade_t b, int n) {
  std::uint64_t c = b;
  c ^= c << 1;
  c ^= c << 2;
  c ^= c << 4;
  c ^= c << 8;
  c ^= c << 16;
  return static_cast<blade_t>(c) & blade_mask(n);
}

/// Walsh function w_a evaluated at c: (-1)^popcount(a & c).
constexpr int walsh(blade_t a, blade_t c) {
  return (std::popcount(a & c) & 1) ? -1 : 1;
}

/// Grading and metric correction: (-1)^|a&b| * (-1)^|a&b&qmask|. Together
/// with the Walsh factor this yields the full product sign; the
/// decomposition is validated exhaustively against oracle_blade_product.
constexpr int twist(blade_t a, blade_t b, const Signature& sig) {
  const int repeated = std::popcount(a & b);
  const int negative = std::popcount(a & b & sig.qmask());
  return ((repeated + negative) & 1) ? -1 : 1;
}

struct SignedBlade {
  int sign;  // +1 or -1
  blade_t blade;
  friend bool operator==(const SignedBlade&, const SignedBlade&) = default;
};

/// Clifford product of two basis monomials via the Walsh-function route.
/// Pure function, no retained state.
inline SignedBlade blade_product(blade_t a, blade_t b, const Signature& sig) {
  const int sign = twist(a, b, sig) * walsh(a, inverse_gray(b, sig.dim()));
  return {sign, oplus(a, b)};
}

/// Ground-truth product of two basis monomials: concatenates the generator
/// lists, counts adjacent transpositions while sorting, and eliminates
/// repeated generators through the metric. Shares no code with the Walsh
/// route.
SignedBlade oracle_blade_product(blade_t a, blade_t b, const Signature& sig);

/// Malformed textual input; offset is the byte position of the problem.
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& what, std::size_t offset)
      : std::runtime_error(what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// "Id", or "e<k>" factors joined by "w" with strictly increasing k.
std::string blade_to_name(blade_t b);

/// Parse a monomial name for an n-dimensional algebra. Non-canonical input
/// (bad index, index out of range, non-increasing factor order) is rejected
/// with a parse_error, not normalized.
blade_t name_to_blade(std::string_view s, int n);

}  // namespace cliffmul
