#include "wolst/congruence.hpp"

#include <numeric>

#include "wolst/error.hpp"
#include "wolst/modring.hpp"

namespace wolst {
namespace {

Natural power(std::uint64_t base, unsigned e) {
  Natural out;
  mpz_ui_pow_ui(out.get_mpz_t(), base, e);
  return out;
}

std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    out.push_back(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) out.push_back(n);
  return out;
}

bool coprime_to(std::uint64_t k, const std::vector<std::uint64_t>& primes) {
  for (std::uint64_t p : primes) {
    if (k % p == 0) return false;
  }
  return true;
}

// Product of (2n-k)/k over k in [1, n] coprime to n, reduced mod m. Every
// such k must be invertible mod m.
ResidueClass coprime_quotient_mod(std::uint64_t n, const Natural& m) {
  const std::vector<std::uint64_t> primes = prime_divisors(n);
  auto [num, den] = detail::with_ring(m, [&](const auto& ring) {
    auto top = ring.one();
    auto bottom = ring.one();
    for (std::uint64_t k = 1; k <= n; ++k) {
      if (!coprime_to(k, primes)) continue;
      top = ring.mul(top, ring.from(2 * n - k));
      bottom = ring.mul(bottom, ring.from(k));
    }
    return std::pair{ring.lift(top), ring.lift(bottom)};
  });
  return {num * mod_inv(den, m).value, m};
}

void require_prime_at_least(std::uint64_t p, std::uint64_t floor, const char* what) {
  if (p < floor || !is_prime(p)) {
    throw Error(ErrorCode::PreconditionViolated,
                std::string(what) + " must be a prime >= " + std::to_string(floor));
  }
}

}  // namespace

Level level_from(unsigned e) {
  if (e < 1 || e > 3) throw Error(ErrorCode::PreconditionViolated, "level must be 1, 2 or 3");
  return static_cast<Level>(e);
}

Natural w_exact(std::uint64_t n) {
  if (n < 1) throw Error(ErrorCode::PreconditionViolated, "w_n needs n >= 1");
  return binomial_exact(2 * n - 1, n - 1);
}

bool w_mod_uses_product(std::uint64_t n, const Natural& m) {
  if (n <= 1) return true;
  Natural primorial;
  mpz_primorial_ui(primorial.get_mpz_t(), n - 1);
  Natural g;
  mpz_gcd(g.get_mpz_t(), m.get_mpz_t(), primorial.get_mpz_t());
  return g == 1;
}

ResidueClass w_mod(std::uint64_t n, const Natural& m, const BinomialModOptions& options) {
  if (n < 1) throw Error(ErrorCode::PreconditionViolated, "w_n needs n >= 1");
  if (m < 2) throw Error(ErrorCode::PreconditionViolated, "modulus must be >= 2");
  if (!w_mod_uses_product(n, m)) return binomial_mod(2 * n - 1, n - 1, m, options);

  auto [num, den] = detail::with_ring(m, [&](const auto& ring) {
    auto top = ring.one();
    auto bottom = ring.one();
    for (std::uint64_t k = 1; k < n; ++k) {
      top = ring.mul(top, ring.from(n + k));
      bottom = ring.mul(bottom, ring.from(k));
    }
    return std::pair{ring.lift(top), ring.lift(bottom)};
  });
  return {num * mod_inv(den, m).value, m};
}

Rational wprime_exact(std::uint64_t n) {
  if (n < 1) throw Error(ErrorCode::PreconditionViolated, "w'_n needs n >= 1");
  Integer num = 1;
  Integer den = 1;
  for (std::uint64_t k = 1; k <= n; ++k) {
    if (std::gcd(k, n) != 1) continue;
    num *= detail::from_u64(2 * n - k);
    den *= detail::from_u64(k);
  }
  return make_rational(num, den);
}

ResidueClass wprime_mod(std::uint64_t n, const Natural& m) {
  if (n < 1) throw Error(ErrorCode::PreconditionViolated, "w'_n needs n >= 1");
  if (m < 2) throw Error(ErrorCode::PreconditionViolated, "modulus must be >= 2");
  Natural rest = m;
  const Natural nn = detail::from_u64(n);
  for (;;) {
    Natural g;
    mpz_gcd(g.get_mpz_t(), rest.get_mpz_t(), nn.get_mpz_t());
    if (g == 1) break;
    rest /= g;
  }
  if (rest != 1) {
    throw Error(ErrorCode::PreconditionViolated,
                "modulus " + decimal(m) + " has a prime factor not dividing " + decimal(nn));
  }
  return coprime_quotient_mod(n, m);
}

bool divisor_product_check(std::uint64_t n, const std::vector<Rational>& wprime_table) {
  if (n < 1) throw Error(ErrorCode::PreconditionViolated, "n >= 1");
  if (wprime_table.size() <= n) throw Error(ErrorCode::PreconditionViolated, "table too short");
  Rational product = 1;
  for (std::uint64_t d = 1; d <= n; ++d) {
    if (n % d == 0) product *= wprime_table[d];
  }
  return product == Rational(w_exact(n));
}

bool divisor_product_check(std::uint64_t n) {
  std::vector<Rational> table(n + 1);
  for (std::uint64_t d = 1; d <= n; ++d) {
    if (n % d == 0) table[d] = wprime_exact(d);
  }
  return divisor_product_check(n, table);
}

CongruenceVerdict wilson_residue(std::uint64_t n, Level e) {
  if (n < 2) throw Error(ErrorCode::PreconditionViolated, "Wilson test needs n >= 2");
  const Natural modulus = power(n, exponent(e));
  const Natural value = detail::with_ring(modulus, [&](const auto& ring) {
    auto acc = ring.one();
    for (std::uint64_t k = 2; k < n && !ring.is_zero(acc); ++k) acc = ring.mul(acc, ring.from(k));
    return ring.lift(acc);
  });
  const Natural target = modulus - 1;
  ResidueClass residue(value, modulus);
  const bool holds = residue.value == target;
  return {detail::from_u64(n), modulus, residue, target, holds};
}

bool wilson_restatement_check(std::uint64_t n) {
  if (n < 2) throw Error(ErrorCode::PreconditionViolated, "needs n >= 2");
  const detail::WordRing ring{n};
  std::uint64_t rising = ring.one();
  std::uint64_t falling = ring.one();
  for (std::uint64_t k = 1; k < n; ++k) {
    rising = ring.mul(rising, ring.from(n + k));
    falling = ring.mul(falling, ring.from(k));
  }
  return rising == falling;
}

CongruenceVerdict jones_check(std::uint64_t n) {
  if (n < 2) throw Error(ErrorCode::PreconditionViolated, "Jones test needs n >= 2");
  const Natural modulus = power(n, 3);
  ResidueClass residue = w_mod(n, modulus);
  const bool holds = residue.value == 1;
  return {detail::from_u64(n), modulus, residue, 1, holds};
}

bool is_wolstenholme_prime(std::uint64_t p) {
  require_prime_at_least(p, 5, "p");
  return w_mod(p, power(p, 4)).value == 1;
}

McIntoshVerdict mcintosh_check(std::uint64_t n) {
  if (n < 2) throw Error(ErrorCode::PreconditionViolated, "McIntosh test needs n >= 2");
  const Natural modulus = power(n, 2);
  ResidueClass residue = w_mod(n, modulus);
  McIntoshVerdict out{{detail::from_u64(n), modulus, residue, 1, residue.value == 1}, std::nullopt};

  const Natural nn = detail::from_u64(n);
  if (mpz_perfect_square_p(nn.get_mpz_t())) {
    const std::uint64_t root = detail::to_u64(sqrt(nn));
    if (is_prime(root)) {
      ResidueClass root_residue = w_mod(root, modulus);
      if (!(root_residue == residue)) {
        throw Error(ErrorCode::AssertionFailure,
                    "w_n != w_p (mod n^2) at n = " + std::to_string(n) + ": " +
                        residue.to_string() + " vs " + root_residue.to_string());
      }
      out.root_residue = std::move(root_residue);
    }
  }
  return out;
}

PairCriterionResult pair_criterion(std::uint64_t p, std::uint64_t q, Level e) {
  const std::uint64_t floor = e == Level::third ? 5 : 3;
  require_prime_at_least(p, floor, "p");
  require_prime_at_least(q, floor, "q");
  if (p == q) throw Error(ErrorCode::PreconditionViolated, "p and q must be distinct");
  const unsigned k = exponent(e);
  const bool left = w_mod(p, power(q, k)).value == 1;
  const bool right = w_mod(q, power(p, k)).value == 1;
  return {p, q, e, left, right, left && right};
}

bool pair_direct_check(std::uint64_t p, std::uint64_t q, Level e, std::uint64_t budget) {
  if (p == q) throw Error(ErrorCode::PreconditionViolated, "p and q must be distinct");
  if (p == 0 || q == 0 || p > budget / q) {
    throw Error(ErrorCode::BudgetExceeded,
                "pq exceeds exact-binomial budget " + std::to_string(budget));
  }
  const std::uint64_t n = p * q;
  const ResidueClass r(w_exact(n), power(n, exponent(e)));
  return r.value == 1;
}

std::vector<FactorBand> factor_band_classify(std::uint64_t p) {
  require_prime_at_least(p, 5, "p");
  const std::uint64_t top = 2 * p - 1;
  std::vector<FactorBand> bands;
  for (std::uint64_t q : primes_in(2, top)) {
    if (q * q < top || q == p) continue;
    const std::uint64_t n = top / q;
    FactorBand band{p,
                    n,
                    make_rational(detail::from_u64(top), detail::from_u64(n + 1)),
                    make_rational(detail::from_u64(top), detail::from_u64(n)),
                    q,
                    n % 2 == 1,
                    w_mod(p, detail::from_u64(q)).value == 0};
    bands.push_back(std::move(band));
  }
  return bands;
}

}  // namespace wolst
