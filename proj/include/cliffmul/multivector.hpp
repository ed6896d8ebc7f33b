#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cliffmul/blades.hpp"
#include "cliffmul/coefficient.hpp"

namespace cliffmul {

template <class C>
struct Term {
  C coeff;
  blade_t blade;
};

namespace detail {

/// Combine a key-sorted term list into canonical form: like terms are added
/// in their stored order, zero sums are dropped.
template <class C>
std::vector<Term<C>> combine_sorted_terms(std::vector<Term<C>>&& terms) {
  std::vector<Term<C>> canon;
  canon.reserve(terms.size());
  for (auto& t : terms) {
    if (!canon.empty() && canon.back().blade == t.blade)
      canon.back().coeff += t.coeff;
    else
      canon.push_back(std::move(t));
    if (!canon.empty() && coeff_is_zero(canon.back().coeff))
      canon.pop_back();
  }
  return canon;
}

/// Merge two term lists sorted by canonical_key, adding coefficients of
/// equal blades (left operand first) and dropping terms that cancel.
template <class C>
std::vector<Term<C>> merge_add_terms(std::vector<Term<C>>&& a,
                                     std::vector<Term<C>>&& b) {
  if (a.empty()) return std::move(b);
  if (b.empty()) return std::move(a);
  std::vector<Term<C>> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const auto ka = canonical_key(a[i].blade);
    const auto kb = canonical_key(b[j].blade);
    if (ka < kb) {
      out.push_back(std::move(a[i++]));
    } else if (kb < ka) {
      out.push_back(std::move(b[j++]));
    } else {
      C sum = std::move(a[i].coeff);
      sum += b[j].coeff;
      if (!coeff_is_zero(sum)) out.push_back({std::move(sum), a[i].blade});
      ++i;
      ++j;
    }
  }
  for (; i < a.size(); ++i) out.push_back(std::move(a[i]));
  for (; j < b.size(); ++j) out.push_back(std::move(b[j]));
  return out;
}

}  // namespace detail

/// Sparse Clifford polynomial: blades mapped to nonzero coefficients, kept
/// sorted by (grade, bitmask). Immutable value after construction; safe to
/// share across threads for reading.
template <class C>
class Multivector {
 public:
  explicit Multivector(Signature sig) : sig_(sig) {}

  /// Canonicalizes an arbitrary term list: combines like terms in input
  /// order, drops zeros, sorts. Throws if a blade does not fit `sig`.
  static Multivector from_terms(Signature sig, std::vector<Term<C>> terms) {
    for (const auto& t : terms)
      if (!sig.contains(t.blade))
        throw std::invalid_argument("blade out of range for signature");
    std::stable_sort(terms.begin(), terms.end(),
                     [](const Term<C>& x, const Term<C>& y) {
                       return canonical_key(x.blade) < canonical_key(y.blade);
                     });
    Multivector x(sig);
    x.terms_ = detail::combine_sorted_terms(std::move(terms));
    return x;
  }

  const Signature& sig() const { return sig_; }

  /// Terms in canonical order; the "[coeff, monom]" decomposition.
  std::span<const Term<C>> terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  friend bool operator==(const Multivector& a, const Multivector& b) {
    if (!(a.sig_ == b.sig_) || a.terms_.size() != b.terms_.size())
      return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (a.terms_[i].blade != b.terms_[i].blade ||
          !(a.terms_[i].coeff == b.terms_[i].coeff))
        return false;
    return true;
  }

 private:
  Signature sig_;
  std::vector<Term<C>> terms_;
};

template <class C>
Multivector<C> add(const Multivector<C>& x, const Multivector<C>& y) {
  if (!(x.sig() == y.sig()))
    throw std::invalid_argument("signature mismatch");
  std::vector<Term<C>> a(x.terms().begin(), x.terms().end());
  std::vector<Term<C>> b(y.terms().begin(), y.terms().end());
  return Multivector<C>::from_terms(
      x.sig(), detail::merge_add_terms(std::move(a), std::move(b)));
}

template <class C>
Multivector<C> scale(const C& c, const Multivector<C>& x) {
  std::vector<Term<C>> out;
  if (!coeff_is_zero(c)) {
    out.reserve(x.term_count());
    for (const auto& t : x.terms()) {
      C v = c;
      v *= t.coeff;
      if (!coeff_is_zero(v)) out.push_back({std::move(v), t.blade});
    }
  }
  return Multivector<C>::from_terms(x.sig(), std::move(out));
}

/// Parse "expr := [sign] term (('+'|'-') term)*" where
/// "term := coeff | monom | coeff '*' monom" and
/// "coeff := integer | integer '/' integer | decimal".
/// Whitespace is allowed between tokens. Throws parse_error with the byte
/// offset of the problem.
template <class C>
Multivector<C> parse(std::string_view text, Signature sig);

/// Deterministic canonical rendering; parse(to_text(x)) == x. The zero
/// multivector renders as "0".
template <class C>
std::string to_text(const Multivector<C>& x);

/// Line-oriented exchange format: one "<coeff> <monomial>" line per term,
/// canonical order. The zero multivector is an empty document.
template <class C>
std::string to_term_lines(const Multivector<C>& x);

template <class C>
Multivector<C> parse_term_lines(std::string_view text, Signature sig);

}  // namespace cliffmul
