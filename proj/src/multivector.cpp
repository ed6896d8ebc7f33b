#include "cliffmul/multivector.hpp"

#include <cctype>

namespace cliffmul {

namespace {

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }
bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)); }

constexpr long kMaxExp10 = 9999;

enum class Tok { end, plus, minus, star, slash, number, name };

struct Token {
  Tok kind = Tok::end;
  std::size_t pos = 0;
  std::string_view text;
  NumberLit lit;  // for Tok::number
};

/// Tokenizer for the expression grammar. Numbers are unsigned and may carry
/// a fraction part and a scientific exponent; "2e1" therefore lexes as the
/// number 20, never as 2*e1 (monomials always need an explicit '*').
class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    tok_ = Token{};
    tok_.pos = pos_;
    if (pos_ >= text_.size()) {
      tok_.kind = Tok::end;
      return;
    }
    const char c = text_[pos_];
    switch (c) {
      case '+': tok_.kind = Tok::plus; tok_.text = take_chars(1); return;
      case '-': tok_.kind = Tok::minus; tok_.text = take_chars(1); return;
      case '*': tok_.kind = Tok::star; tok_.text = take_chars(1); return;
      case '/': tok_.kind = Tok::slash; tok_.text = take_chars(1); return;
      default: break;
    }
    if (is_digit(c)) {
      lex_number();
      return;
    }
    if (is_alpha(c)) {
      std::size_t end = pos_;
      while (end < text_.size() && is_alnum(text_[end])) ++end;
      tok_.kind = Tok::name;
      tok_.text = take_chars(end - pos_);
      return;
    }
    throw parse_error(std::string("unexpected character '") + c + "'", pos_);
  }

  void lex_number() {
    const std::size_t start = pos_;
    NumberLit lit;
    std::size_t end = pos_;
    while (end < text_.size() && is_digit(text_[end])) ++end;
    lit.int_digits = text_.substr(start, end - start);
    if (end < text_.size() && text_[end] == '.') {
      const std::size_t frac_start = end + 1;
      std::size_t frac_end = frac_start;
      while (frac_end < text_.size() && is_digit(text_[frac_end])) ++frac_end;
      if (frac_end == frac_start)
        throw parse_error("expected digits after decimal point", frac_start);
      lit.frac_digits = text_.substr(frac_start, frac_end - frac_start);
      lit.plain_integer = false;
      end = frac_end;
    }
    // Exponent is consumed only when the full e[+-]digits pattern follows.
    if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
      std::size_t exp_end = end + 1;
      bool neg = false;
      if (exp_end < text_.size() &&
          (text_[exp_end] == '+' || text_[exp_end] == '-')) {
        neg = text_[exp_end] == '-';
        ++exp_end;
      }
      std::size_t digits_start = exp_end;
      long exp = 0;
      while (exp_end < text_.size() && is_digit(text_[exp_end])) {
        exp = exp * 10 + (text_[exp_end] - '0');
        if (exp > kMaxExp10)
          throw parse_error("exponent out of range", digits_start);
        ++exp_end;
      }
      if (exp_end > digits_start) {
        lit.exp10 = neg ? -exp : exp;
        lit.plain_integer = false;
        end = exp_end;
      }
    }
    lit.text = text_.substr(start, end - start);
    tok_.kind = Tok::number;
    tok_.text = lit.text;
    tok_.lit = lit;
    pos_ = end;
  }

  std::string_view take_chars(std::size_t n) {
    auto s = text_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Token tok_;
};

template <class C>
C parse_coeff(Lexer& lex) {
  const Token num = lex.take();
  try {
    if (lex.peek().kind == Tok::slash) {
      if (!num.lit.plain_integer)
        throw parse_error("fraction parts must be integers", num.pos);
      lex.take();
      const Token den = lex.take();
      if (den.kind != Tok::number || !den.lit.plain_integer)
        throw parse_error("expected integer denominator", den.pos);
      return coeff_ops<C>::from_fraction(num.lit, den.lit);
    }
    return coeff_ops<C>::from_literal(num.lit);
  } catch (const std::domain_error& e) {
    throw parse_error(e.what(), num.pos);
  }
}

template <class C>
Term<C> parse_term(Lexer& lex, const Signature& sig) {
  const Token& head = lex.peek();
  if (head.kind == Tok::name) {
    const Token name = lex.take();
    try {
      return {C(1), name_to_blade(name.text, sig.dim())};
    } catch (const parse_error& e) {
      throw parse_error(e.what(), name.pos + e.offset());
    }
  }
  if (head.kind != Tok::number)
    throw parse_error("expected a term", head.pos);
  C coeff = parse_coeff<C>(lex);
  if (lex.peek().kind != Tok::star) return {std::move(coeff), 0};
  lex.take();
  const Token name = lex.take();
  if (name.kind != Tok::name)
    throw parse_error("expected monomial after '*'", name.pos);
  try {
    return {std::move(coeff), name_to_blade(name.text, sig.dim())};
  } catch (const parse_error& e) {
    throw parse_error(e.what(), name.pos + e.offset());
  }
}

}  // namespace

template <class C>
Multivector<C> parse(std::string_view text, Signature sig) {
  Lexer lex(text);
  std::vector<Term<C>> terms;
  bool negate = false;
  if (lex.peek().kind == Tok::plus || lex.peek().kind == Tok::minus) {
    negate = lex.peek().kind == Tok::minus;
    lex.take();
  }
  for (;;) {
    Term<C> t = parse_term<C>(lex, sig);
    if (negate) t.coeff = coeff_neg(t.coeff);
    terms.push_back(std::move(t));
    const Token& sep = lex.peek();
    if (sep.kind == Tok::end) break;
    if (sep.kind != Tok::plus && sep.kind != Tok::minus)
      throw parse_error("expected '+', '-' or end of expression", sep.pos);
    negate = sep.kind == Tok::minus;
    lex.take();
  }
  return Multivector<C>::from_terms(sig, std::move(terms));
}

template <class C>
std::string to_text(const Multivector<C>& x) {
  if (x.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : x.terms()) {
    const bool neg = coeff_is_negative(t.coeff);
    if (first) {
      if (neg) out += '-';
      first = false;
    } else {
      out += neg ? " - " : " + ";
    }
    const C mag = neg ? coeff_neg(t.coeff) : t.coeff;
    if (t.blade == 0) {
      if (coeff_is_one(mag)) {
        out += "Id";
      } else {
        out += coeff_to_text(mag);
        out += "*Id";
      }
    } else {
      if (!coeff_is_one(mag)) {
        out += coeff_to_text(mag);
        out += '*';
      }
      out += blade_to_name(t.blade);
    }
  }
  return out;
}

template <class C>
std::string to_term_lines(const Multivector<C>& x) {
  std::string out;
  for (const auto& t : x.terms()) {
    out += coeff_to_text(t.coeff);
    out += ' ';
    out += blade_to_name(t.blade);
    out += '\n';
  }
  return out;
}

template <class C>
Multivector<C> parse_term_lines(std::string_view text, Signature sig) {
  std::vector<Term<C>> terms;
  std::size_t line_start = 0;
  while (line_start < text.size()) {
    std::size_t line_end = text.find('\n', line_start);
    if (line_end == std::string_view::npos) line_end = text.size();
    const std::string_view line = text.substr(line_start, line_end - line_start);
    if (!line.empty()) {
      const std::size_t space = line.find(' ');
      if (space == std::string_view::npos)
        throw parse_error("expected \"<coeff> <monomial>\"", line_start);
      Lexer lex(line.substr(0, space));
      bool negate = false;
      if (lex.peek().kind == Tok::minus) {
        negate = true;
        lex.take();
      }
      if (lex.peek().kind != Tok::number)
        throw parse_error("expected coefficient", line_start);
      C coeff;
      try {
        coeff = parse_coeff<C>(lex);
      } catch (const parse_error& e) {
        throw parse_error(e.what(), line_start + e.offset());
      }
      if (lex.peek().kind != Tok::end)
        throw parse_error("trailing characters after coefficient",
                          line_start + lex.peek().pos);
      if (negate) coeff = coeff_neg(coeff);
      blade_t blade;
      try {
        blade = name_to_blade(line.substr(space + 1), sig.dim());
      } catch (const parse_error& e) {
        throw parse_error(e.what(), line_start + space + 1 + e.offset());
      }
      terms.push_back({std::move(coeff), blade});
    }
    line_start = line_end + 1;
  }
  return Multivector<C>::from_terms(sig, std::move(terms));
}

template Multivector<Rational> parse<Rational>(std::string_view, Signature);
template Multivector<double> parse<double>(std::string_view, Signature);
template std::string to_text<Rational>(const Multivector<Rational>&);
template std::string to_text<double>(const Multivector<double>&);
template std::string to_term_lines<Rational>(const Multivector<Rational>&);
template std::string to_term_lines<double>(const Multivector<double>&);
template Multivector<Rational> parse_term_lines<Rational>(std::string_view,
                                                          Signature);
template Multivector<double> parse_term_lines<double>(std::string_view,
                                                      Signature);

}  // namespace cliffmul
