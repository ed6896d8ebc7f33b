#include "cliffmul/blades.hpp"

#include <algorithm>
#include <cctype>

namespace cliffmul {

SignedBlade oracle_blade_product(blade_t a, blade_t b, const Signature& sig) {
  // Concatenated generator list: factors of a ascending, then factors of b.
  int gens[2 * kMaxDim];
  int len = 0;
  for (int i = 1; i <= sig.dim(); ++i)
    if (a & (blade_t{1} << (i - 1))) gens[len++] = i;
  for (int i = 1; i <= sig.dim(); ++i)
    if (b & (blade_t{1} << (i - 1))) gens[len++] = i;

  // Bubble sort counting adjacent transpositions. Equal neighbours are never
  // swapped, so the count is exactly the number of pairs (i in a, j in b)
  // with i > j.
  long swaps = 0;
  for (int pass = 0; pass + 1 < len; ++pass)
    for (int k = 0; k + 1 < len; ++k)
      if (gens[k] > gens[k + 1]) {
        std::swap(gens[k], gens[k + 1]);
        ++swaps;
      }
  int sign = (swaps % 2 == 0) ? 1 : -1;

  // Cancel adjacent e_k e_k pairs against the metric.
  int out[2 * kMaxDim];
  int outlen = 0;
  for (int k = 0; k < len; ++k) {
    if (outlen > 0 && out[outlen - 1] == gens[k]) {
      sign *= sig.metric_sign(gens[k]);
      --outlen;
    } else {
      out[outlen++] = gens[k];
    }
  }

  blade_t blade = 0;
  for (int k = 0; k < outlen; ++k) blade |= blade_t{1} << (out[k] - 1);
  return {sign, blade};
}

std::string blade_to_name(blade_t b) {
  if (b == 0) return "Id";
  std::string name;
  for (blade_t rest = b; rest != 0; rest &= rest - 1) {
    if (!name.empty()) name += 'w';
    name += 'e';
    name += std::to_string(std::countr_zero(rest) + 1);
  }
  return name;
}

blade_t name_to_blade(std::string_view s, int n) {
  if (n < 0 || n > kMaxDim)
    throw std::invalid_argument("dimension out of range");
  if (s == "Id") return 0;
  if (s.empty()) throw parse_error("empty monomial", 0);

  blade_t b = 0;
  int prev = 0;
  std::size_t pos = 0;
  for (;;) {
    if (pos >= s.size() || s[pos] != 'e')
      throw parse_error("expected 'e<k>' factor", pos);
    ++pos;
    const std::size_t digits_at = pos;
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
      throw parse_error("expected generator index after 'e'", pos);
    if (s[pos] == '0')
      throw parse_error("invalid generator index", digits_at);
    long k = 0;
    while (pos < s.size() &&
           std::isdigit(static_cast<unsigned char>(s[pos]))) {
      k = k * 10 + (s[pos] - '0');
      if (k > kMaxDim)
        throw parse_error("generator index out of range", digits_at);
      ++pos;
    }
    if (k > n)
      throw parse_error("generator index exceeds dimension", digits_at);
    if (k <= prev)
      throw parse_error("factors must be strictly increasing", digits_at);
    b |= blade_t{1} << (k - 1);
    prev = static_cast<int>(k);
    if (pos == s.size()) return b;
    if (s[pos] != 'w')
      throw parse_error("expected 'w' between factors", pos);
    ++pos;
  }
}

}  // namespace cliffmul
