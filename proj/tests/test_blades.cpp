#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>

#include "cliffmul/blades.hpp"

using namespace cliffmul;

namespace {

struct rng64 {
  std::uint64_t state;
  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
};

}  // namespace

TEST_CASE("signature invariants") {
  const Signature sig(2, 3);
  CHECK(sig.dim() == 5);
  CHECK(sig.qmask() == 0b11100);
  CHECK(sig.metric_sign(2) == 1);
  CHECK(sig.metric_sign(3) == -1);
  CHECK(Signature(0, 0).qmask() == 0);
  CHECK(Signature(32, 0).dim() == 32);
  CHECK_THROWS_AS(Signature(-1, 0), std::invalid_argument);
  CHECK_THROWS_AS(Signature(0, -2), std::invalid_argument);
  CHECK_THROWS_AS(Signature(20, 13), std::invalid_argument);
}

TEST_CASE("oplus is xor with identity and self-inverse") {
  CHECK(oplus(0b011, 0b001) == 0b010);
  CHECK(oplus(0b10110, 0) == 0b10110);
  CHECK(oplus(0b10110, 0b10110) == 0);
}

TEST_CASE("inverse gray code is the prefix parity") {
  // Width matters: the same mask has different images at different n.
  CHECK(inverse_gray(0b001, 2) == 0b011);
  CHECK(inverse_gray(0b001, 3) == 0b111);
  CHECK(inverse_gray(0b110, 3) == 0b010);
  CHECK(inverse_gray(0b111, 3) == 0b101);
}

TEST_CASE("gray and inverse gray are mutually inverse up to n = 16") {
  for (int n = 0; n <= 16; ++n) {
    const blade_t space = static_cast<blade_t>(std::uint64_t{1} << n);
    for (blade_t x = 0; x < space; ++x) {
      CHECK(inverse_gray(gray(x, n), n) == x);
      CHECK(gray(inverse_gray(x, n), n) == x);
    }
  }
}

TEST_CASE("walsh examples and bilinearity") {
  CHECK(walsh(0b101, 0b110) == -1);
  CHECK(walsh(0b110101, 0) == 1);
  CHECK(walsh(0b11, 0b11) == 1);

  rng64 rng{7};
  for (int t = 0; t < 2000; ++t) {
    const blade_t a = static_cast<blade_t>(rng.next()) & blade_mask(16);
    const blade_t a2 = static_cast<blade_t>(rng.next()) & blade_mask(16);
    const blade_t c = static_cast<blade_t>(rng.next()) & blade_mask(16);
    CHECK(walsh(oplus(a, a2), c) == walsh(a, c) * walsh(a2, c));
  }
}

TEST_CASE("twist examples") {
  const Signature euclid(1, 0);
  const Signature anti(0, 1);
  CHECK(twist(0b0101, 0b1010, Signature(4, 0)) == 1);  // disjoint blades
  CHECK(twist(0b001, 0b001, euclid) == -1);
  CHECK(twist(0b001, 0b001, anti) == 1);
}

TEST_CASE("blade product examples") {
  const Signature sig(3, 0);
  CHECK(blade_product(0b001, 0b010, sig) == SignedBlade{1, 0b011});
  CHECK(blade_product(0b010, 0b001, sig) == SignedBlade{-1, 0b011});

  // Pseudoscalar square of Cl(3,0); value pinned through the oracle.
  const SignedBlade oracle = oracle_blade_product(0b111, 0b111, sig);
  CHECK(oracle == SignedBlade{-1, 0});
  CHECK(blade_product(0b111, 0b111, sig) == oracle);
}

TEST_CASE("oracle blade product examples") {
  CHECK(oracle_blade_product(0b010, 0b001, Signature(3, 0)) ==
        SignedBlade{-1, 0b011});
  CHECK(oracle_blade_product(0b001, 0b001, Signature(0, 1)) ==
        SignedBlade{-1, 0});
  CHECK(oracle_blade_product(0b110, 0b001, Signature(3, 0)) ==
        SignedBlade{1, 0b111});
}

TEST_CASE("walsh route equals the oracle on every pair up to p+q = 8") {
  std::uint64_t pairs = 0;
  for (int n = 0; n <= 8; ++n) {
    for (int p = 0; p <= n; ++p) {
      const Signature sig(p, n - p);
      const blade_t space = static_cast<blade_t>(std::uint64_t{1} << n);
      for (blade_t a = 0; a < space; ++a)
        for (blade_t b = 0; b < space; ++b) {
          const SignedBlade w = blade_product(a, b, sig);
          const SignedBlade o = oracle_blade_product(a, b, sig);
          ++pairs;
          if (!(w == o)) {
            CAPTURE(n);
            CAPTURE(p);
            CAPTURE(a);
            CAPTURE(b);
            REQUIRE(w == o);
          }
          // The blade component never depends on the signature.
          if (w.blade != oplus(a, b)) REQUIRE(w.blade == oplus(a, b));
        }
    }
  }
  CHECK(pairs == 757305);
}

TEST_CASE("randomized oracle spot checks at n = 10 and 12") {
  rng64 rng{12345};
  for (int n : {10, 12}) {
    for (int t = 0; t < 100000; ++t) {
      const int p = static_cast<int>(rng.next() % (n + 1));
      const Signature sig(p, n - p);
      const blade_t a = static_cast<blade_t>(rng.next()) & blade_mask(n);
      const blade_t b = static_cast<blade_t>(rng.next()) & blade_mask(n);
      const SignedBlade w = blade_product(a, b, sig);
      const SignedBlade o = oracle_blade_product(a, b, sig);
      if (!(w == o)) {
        CAPTURE(n);
        CAPTURE(p);
        CAPTURE(a);
        CAPTURE(b);
        REQUIRE(w == o);
      }
    }
  }
}

TEST_CASE("generator anticommutation and squares") {
  for (const Signature sig : {Signature(3, 0), Signature(2, 2), Signature(0, 4)}) {
    for (int i = 1; i <= sig.dim(); ++i) {
      const blade_t ei = blade_t{1} << (i - 1);
      for (int j = 1; j <= sig.dim(); ++j) {
        const blade_t ej = blade_t{1} << (j - 1);
        if (i != j) {
          CHECK(blade_product(ei, ej, sig).sign ==
                -blade_product(ej, ei, sig).sign);
        } else {
          const SignedBlade sq = blade_product(ei, ei, sig);
          CHECK(sq.blade == 0);
          CHECK(sq.sign == (i <= sig.p() ? 1 : -1));
        }
      }
    }
  }
}

TEST_CASE("product sign is a 2-cocycle for every signature up to n = 5") {
  for (int n = 0; n <= 5; ++n) {
    for (int p = 0; p <= n; ++p) {
      const Signature sig(p, n - p);
      const blade_t space = static_cast<blade_t>(std::uint64_t{1} << n);
      for (blade_t a = 0; a < space; ++a)
        for (blade_t b = 0; b < space; ++b)
          for (blade_t c = 0; c < space; ++c) {
            const int lhs = blade_product(a, b, sig).sign *
                            blade_product(oplus(a, b), c, sig).sign;
            const int rhs = blade_product(b, c, sig).sign *
                            blade_product(a, oplus(b, c), sig).sign;
            if (lhs != rhs) {
              CAPTURE(a);
              CAPTURE(b);
              CAPTURE(c);
              REQUIRE(lhs == rhs);
            }
          }
    }
  }
}

TEST_CASE("blade names") {
  CHECK(blade_to_name(0b101) == "e1we3");
  CHECK(blade_to_name(0) == "Id");
  CHECK(blade_to_name(0b1000000000) == "e10");

  CHECK(name_to_blade("Id", 0) == 0);
  CHECK(name_to_blade("e1we3", 3) == 0b101);
  CHECK(name_to_blade("e2", 3) == 0b010);

  for (int n : {0, 1, 3, 7, 10}) {
    const blade_t space = static_cast<blade_t>(std::uint64_t{1} << n);
    for (blade_t b = 0; b < space; ++b)
      CHECK(name_to_blade(blade_to_name(b), n) == b);
  }
}

TEST_CASE("non-canonical names are rejected, not normalized") {
  CHECK_THROWS_AS(name_to_blade("e2we1", 3), parse_error);
  CHECK_THROWS_AS(name_to_blade("e1we1", 3), parse_error);
  CHECK_THROWS_AS(name_to_blade("e0", 3), parse_error);
  CHECK_THROWS_AS(name_to_blade("e01", 3), parse_error);
  CHECK_THROWS_AS(name_to_blade("e4", 3), parse_error);
  CHECK_THROWS_AS(name_to_blade("", 3), parse_error);
  CHECK_THROWS_AS(name_to_blade("ex", 3), parse_error);
  CHECK_THROWS_AS(name_to_blade("e1w", 3), parse_error);
  CHECK_THROWS_AS(name_to_blade("e1wwe2", 3), parse_error);
  CHECK_THROWS_AS(name_to_blade("Idw", 3), parse_error);
  CHECK_THROWS_AS(name_to_blade("E1", 3), parse_error);
  CHECK_THROWS_AS(name_to_blade("e1 we2", 3), parse_error);

  try {
    name_to_blade("e1we5we2", 6);
    CHECK(false);
  } catch (const parse_error& e) {
    CHECK(e.offset() == 7);  // points at the offending index
  }
}
