#include <doctest.h>

#include <map>

#include "wolst/arith.hpp"
#include "wolst/congruence.hpp"
#include "wolst/error.hpp"

using namespace wolst;

namespace {

Natural pow_ui(std::uint64_t b, unsigned e) {
  Natural r;
  mpz_ui_pow_ui(r.get_mpz_t(), b, e);
  return r;
}

// w_n from the multiplicative formula, independent of the library's binomials.
Natural w_product(std::uint64_t n) {
  Rational r = 1;
  for (std::uint64_t k = 1; k < n; ++k) r *= Rational(static_cast<unsigned long>(n + k), static_cast<unsigned long>(k));
  r.canonicalize();
  return r.get_num();
}

Natural slow_factorial(std::uint64_t n) {
  Natural f = 1;
  for (std::uint64_t i = 2; i <= n; ++i) f *= static_cast<unsigned long>(i);
  return f;
}

}  // namespace

TEST_CASE("central binomial values") {
  CHECK(w_exact(1) == 1);
  CHECK(w_exact(5) == 126);
  CHECK(w_exact(13) == 5200300);
  for (std::uint64_t n = 1; n <= 150; ++n) {
    REQUIRE(w_exact(n) == w_product(n));
    REQUIRE(2 * w_exact(n) == binomial_exact(2 * n, n));
  }
}

TEST_CASE("w modulo m") {
  CHECK(w_mod(5, 125).value == 1);
  CHECK(w_mod(7, 5).value == 1);
  CHECK(w_mod(5, 7).value == 0);
  CHECK(w_mod(27173, 27173).value == 1);
  for (std::uint64_t n = 1; n <= 80; ++n) {
    const Natural w = w_exact(n);
    for (unsigned m = 2; m <= 400; m += 7) REQUIRE(w_mod(n, m).value == w % m);
  }
  CHECK(w_mod_uses_product(5, 7));
  CHECK(w_mod_uses_product(5, pow_ui(5, 4)));
  CHECK(w_mod(5, pow_ui(5, 4)).value == 126);
  CHECK_FALSE(w_mod_uses_product(5, 3));
}

TEST_CASE("modified binomial") {
  CHECK(wprime_exact(1) == 1);
  CHECK(wprime_exact(3) == 10);
  CHECK(wprime_exact(4) == Rational(35, 3));
  CHECK(wprime_exact(6) == Rational(77, 5));

  CHECK(wprime_mod(35, pow_ui(35, 3)).value == 1);
  CHECK(wprime_mod(25, pow_ui(5, 4)).value == 1);
  CHECK(wprime_mod(3, 9).value == 1);
  try {
    wprime_mod(35, 11);
    FAIL("expected PreconditionViolated");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PreconditionViolated);
  }
}

TEST_CASE("divisor product relation") {
  CHECK(divisor_product_check(6));
  CHECK(divisor_product_check(12));
  CHECK(wprime_exact(13) == Rational(w_exact(13)));
  for (std::uint64_t n = 1; n <= 300; ++n) REQUIRE(divisor_product_check(n));
}

TEST_CASE("wilson residues") {
  const CongruenceVerdict a = wilson_residue(5, Level::second);
  CHECK(a.holds);
  CHECK(a.residue.value == 24);
  CHECK(a.target == 24);
  const CongruenceVerdict b = wilson_residue(8, Level::first);
  CHECK_FALSE(b.holds);
  CHECK(b.residue.value == 0);
  CHECK(wilson_residue(563, Level::second).holds);
  for (std::uint64_t n = 2; n <= 200; ++n) {
    const Natural f = slow_factorial(n - 1);
    for (Level e : {Level::first, Level::second, Level::third}) {
      const Natural m = pow_ui(n, exponent(e));
      REQUIRE(wilson_residue(n, e).residue.value == f % m);
    }
  }
}

TEST_CASE("wilson restatement") {
  CHECK(wilson_restatement_check(5));
  CHECK(wilson_restatement_check(6));
  CHECK(wilson_restatement_check(2));
  for (std::uint64_t n = 2; n <= 500; ++n) REQUIRE(wilson_restatement_check(n));
}

TEST_CASE("jones congruence") {
  CHECK(jones_check(5).holds);
  const CongruenceVerdict four = jones_check(4);
  CHECK_FALSE(four.holds);
  CHECK(four.residue.value == 35);
  CHECK_FALSE(jones_check(25).holds);
  for (std::uint64_t n = 2; n <= 400; ++n) {
    const bool expected = (w_exact(n) % pow_ui(n, 3)) == 1;
    REQUIRE(jones_check(n).holds == expected);
  }
}

TEST_CASE("wolstenholme primes") {
  CHECK(is_wolstenholme_prime(16843));
  CHECK_FALSE(is_wolstenholme_prime(5));
  CHECK_FALSE(is_wolstenholme_prime(11));
}

TEST_CASE("prime square and prime power congruences") {
  CHECK(mcintosh_check(7).verdict.holds);
  const McIntoshVerdict sq = mcintosh_check(25);
  CHECK_FALSE(sq.verdict.holds);
  CHECK(sq.verdict.residue.value == 126);
  REQUIRE(sq.root_residue.has_value());
  CHECK(sq.root_residue->value == 126);
  const McIntoshVerdict four = mcintosh_check(4);
  CHECK_FALSE(four.verdict.holds);
  CHECK(four.verdict.residue.value == 3);
  CHECK(w_mod(9, 81).value == 10);
}

TEST_CASE("pair criterion") {
  CHECK(pair_criterion(29, 937, Level::first).combined);
  const PairCriterionResult small = pair_criterion(5, 7, Level::first);
  CHECK_FALSE(small.left);
  CHECK_FALSE(small.combined);
  CHECK(pair_criterion(787, 2543, Level::first).combined);

  CHECK(pair_direct_check(29, 937, Level::first));
  CHECK_FALSE(pair_direct_check(5, 7, Level::first));
  CHECK_FALSE(pair_direct_check(5, 7, Level::third));
  CHECK_THROWS_AS(pair_direct_check(787, 2543, Level::first), Error);
  CHECK_THROWS_AS(pair_criterion(7, 7, Level::first), Error);
  CHECK_THROWS_AS(pair_criterion(3, 7, Level::third), Error);

  for (std::uint64_t p : {5, 7, 11, 13, 17}) {
    for (std::uint64_t q : {19, 23, 29, 31}) {
      for (Level e : {Level::first, Level::second, Level::third}) {
        const Natural m = pow_ui(p * q, exponent(e));
        const bool direct = w_exact(p * q) % m == 1;
        REQUIRE(pair_criterion(p, q, e).combined == direct);
        REQUIRE(pair_direct_check(p, q, e) == direct);
      }
    }
  }
}

TEST_CASE("factor bands") {
  auto bands_for = [](std::uint64_t p) {
    std::map<std::uint64_t, std::pair<std::uint64_t, bool>> by_q;
    for (const FactorBand& b : factor_band_classify(p)) {
      CHECK(b.predicted_divides == b.actual_divides);
      CHECK(b.q != p);
      CHECK(b.interval_lo < Rational(static_cast<unsigned long>(b.q)));
      CHECK(Rational(static_cast<unsigned long>(b.q)) <= b.interval_hi);
      by_q[b.q] = {b.n, b.actual_divides};
    }
    return by_q;
  };
  auto eleven = bands_for(11);
  for (std::uint64_t q : {13, 17, 19}) {
    CHECK(eleven[q].first == 1);
    CHECK(eleven[q].second);
  }
  CHECK(eleven[7].first == 3);
  CHECK(eleven[7].second);
  CHECK(eleven[5].first == 4);
  CHECK_FALSE(eleven[5].second);

  auto seven = bands_for(7);
  CHECK(seven[11].second);
  CHECK(seven[13].second);
  CHECK(seven[5].first == 2);
  CHECK_FALSE(seven[5].second);

  auto five = bands_for(5);
  CHECK(five[7].first == 1);
  CHECK(five[3].first == 3);
  CHECK(five[3].second);
}
