#include "wolst/arith.hpp"

#include <algorithm>
#include <sstream>

#include "wolst/error.hpp"
#include "wolst/modring.hpp"

namespace wolst {

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw Error(ErrorCode::PreconditionViolated, "zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

ResidueClass::ResidueClass(const Integer& v, const Natural& m) : modulus(m) {
  if (m < 1) throw Error(ErrorCode::PreconditionViolated, "modulus must be positive");
  mpz_fdiv_r(value.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
}

bool ResidueClass::is(const Integer& target) const {
  mpz_class t;
  mpz_fdiv_r(t.get_mpz_t(), target.get_mpz_t(), modulus.get_mpz_t());
  return t == value;
}

std::string ResidueClass::to_string() const {
  return decimal(value) + " (mod " + decimal(modulus) + ")";
}

std::string decimal(const Integer& x) { return x.get_str(10); }
std::string decimal(const Rational& x) { return x.get_str(10); }

ResidueClass mod_inv(const Natural& a, const Natural& m) {
  if (m < 2) throw Error(ErrorCode::PreconditionViolated, "modulus must be >= 2");
  mpz_class out;
  if (mpz_invert(out.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) {
    throw Error(ErrorCode::NotInvertible, decimal(a) + " mod " + decimal(m));
  }
  return {out, m};
}

ResidueClass crt(std::span<const ResidueClass> parts) {
  mpz_class x = 0;
  mpz_class modulus = 1;
  for (const ResidueClass& part : parts) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), modulus.get_mpz_t(), part.modulus.get_mpz_t());
    if (g != 1) throw Error(ErrorCode::PreconditionViolated, "crt moduli not coprime");
    if (part.modulus == 1) continue;
    const mpz_class inv = mod_inv(modulus, part.modulus).value;
    mpz_class t = (part.value - x) * inv;
    mpz_fdiv_r(t.get_mpz_t(), t.get_mpz_t(), part.modulus.get_mpz_t());
    x += modulus * t;
    modulus *= part.modulus;
  }
  return {x, modulus};
}

Natural factorial_exact(std::uint64_t n) {
  Natural out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

Natural double_factorial(std::uint64_t n) {
  Natural out;
  mpz_2fac_ui(out.get_mpz_t(), n);
  return out;
}

std::uint64_t legendre_valuation(std::uint64_t n, const Natural& q) {
  if (q < 2) throw Error(ErrorCode::PreconditionViolated, "valuation base must be prime");
  if (!detail::fits_u64(q) || detail::to_u64(q) > n) return 0;
  const std::uint64_t base = detail::to_u64(q);
  std::uint64_t total = 0;
  for (std::uint64_t m = n / base; m > 0; m /= base) total += m;
  return total;
}

namespace {

constexpr std::uint64_t kSmallPrimeBound = 1 << 16;

// Multiplies acc by every k in [1, hi] that is not a multiple of q.
template <class Ring>
void multiply_units(const Ring& ring, typename Ring::value_type& acc, std::uint64_t hi,
                    std::uint64_t q) {
  for (std::uint64_t start = 1; start <= hi; start += q) {
    const std::uint64_t end = (hi - start < q - 1) ? hi : start + q - 2;
    for (std::uint64_t k = start; k <= end; ++k) acc = ring.mul(acc, ring.from(k));
    if (end == hi) break;
  }
}

}  // namespace

FactorialUnit factorial_unit(std::uint64_t n, const Natural& q, unsigned e) {
  if (e < 1) throw Error(ErrorCode::PreconditionViolated, "exponent must be >= 1");
  Natural modulus;
  mpz_pow_ui(modulus.get_mpz_t(), q.get_mpz_t(), e);
  const std::uint64_t val = legendre_valuation(n, q);

  // q > n: no factor of n! is divisible by q.
  const bool q_small = detail::fits_u64(q) && detail::to_u64(q) <= n;
  const std::uint64_t q_word = q_small ? detail::to_u64(q) : ~std::uint64_t{0};

  // Product of all units below q^e is -1, except +1 for 2^e with e >= 3.
  const bool block_is_minus_one = !(q == 2 && e >= 3);

  Natural unit = detail::with_ring(modulus, [&](const auto& ring) {
    auto acc = ring.one();
    std::uint64_t cur = n;
    while (cur > 1) {
      std::uint64_t rem = cur;
      if (detail::fits_u64(modulus) && cur >= detail::to_u64(modulus)) {
        const std::uint64_t m = detail::to_u64(modulus);
        if ((cur / m) % 2 == 1 && block_is_minus_one) acc = ring.neg(acc);
        rem = cur % m;
      }
      multiply_units(ring, acc, rem, q_word);
      if (!q_small) break;
      cur /= q_word;
    }
    return ring.lift(acc);
  });
  return {val, ResidueClass(unit, modulus)};
}

Natural binomial_exact(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  Natural out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

std::uint64_t binomial_valuation(std::uint64_t n, std::uint64_t k, const Natural& q) {
  if (k > n) throw Error(ErrorCode::PreconditionViolated, "k > n");
  return legendre_valuation(n, q) - legendre_valuation(k, q) - legendre_valuation(n - k, q);
}

unsigned kummer_carries(std::uint64_t a, std::uint64_t b, std::uint64_t q) {
  unsigned carries = 0;
  std::uint64_t carry = 0;
  while (a > 0 || b > 0) {
    const std::uint64_t digit = a % q + b % q + carry;
    carry = digit >= q ? 1 : 0;
    carries += static_cast<unsigned>(carry);
    a /= q;
    b /= q;
  }
  return carries;
}

ResidueClass binomial_mod_prime_power(std::uint64_t n, std::uint64_t k, const Natural& q,
                                      unsigned e) {
  Natural modulus;
  mpz_pow_ui(modulus.get_mpz_t(), q.get_mpz_t(), e);
  if (k > n) return {0, modulus};
  const std::uint64_t v = binomial_valuation(n, k, q);
  if (v >= e) return {0, modulus};

  const FactorialUnit top = factorial_unit(n, q, e);
  const FactorialUnit left = factorial_unit(k, q, e);
  const FactorialUnit right = factorial_unit(n - k, q, e);
  const Natural denom = left.unit.value * right.unit.value % modulus;
  Natural result = top.unit.value * mod_inv(denom, modulus).value;
  Natural scale;
  mpz_pow_ui(scale.get_mpz_t(), q.get_mpz_t(), v);
  result *= scale;
  return {result, modulus};
}

std::string Factorization::to_string() const {
  std::ostringstream out;
  bool first = true;
  for (const PrimePower& f : factors) {
    out << (first ? "" : " * ") << decimal(f.prime);
    if (f.exponent > 1) out << '^' << f.exponent;
    first = false;
  }
  if (!complete()) out << (first ? "" : " * ") << "[" << decimal(cofactor) << "]";
  return out.str();
}

Factorization factor_with_budget(const Natural& m, std::uint64_t trial_limit) {
  if (m < 1) throw Error(ErrorCode::PreconditionViolated, "factor of non-positive value");
  static const std::vector<std::uint64_t> small = primes_in(2, kSmallPrimeBound);
  Factorization out;
  out.cofactor = m;
  bool exhausted_to_root = false;
  // returns false once trial division can stop
  auto try_divisor = [&](std::uint64_t p) {
    if (out.cofactor == 1 || p > trial_limit) return false;
    if (Natural(detail::from_u64(p)) * p > out.cofactor) {
      exhausted_to_root = true;
      return false;
    }
    if (mpz_divisible_ui_p(out.cofactor.get_mpz_t(), p)) {
      const Natural prime = detail::from_u64(p);
      const auto e = static_cast<unsigned>(
          mpz_remove(out.cofactor.get_mpz_t(), out.cofactor.get_mpz_t(), prime.get_mpz_t()));
      out.factors.push_back({prime, e});
    }
    return true;
  };
  bool more = true;
  for (std::uint64_t p : small) {
    if (!(more = try_divisor(p))) break;
  }
  if (more && trial_limit > kSmallPrimeBound) {
    PrimeStream stream(kSmallPrimeBound + 1, trial_limit);
    while (auto p = stream.next()) {
      if (!try_divisor(*p)) break;
    }
  }
  if (out.cofactor == 1) return out;
  if (exhausted_to_root || is_prime(out.cofactor)) {
    out.factors.push_back({out.cofactor, 1});
    out.cofactor = 1;
    return out;
  }
  if (mpz_perfect_power_p(out.cofactor.get_mpz_t())) {
    const std::size_t bits = mpz_sizeinbase(out.cofactor.get_mpz_t(), 2);
    for (unsigned long t = bits; t >= 2; --t) {
      Natural root;
      if (mpz_root(root.get_mpz_t(), out.cofactor.get_mpz_t(), t) != 0 && is_prime(root)) {
        out.factors.push_back({root, static_cast<unsigned>(t)});
        out.cofactor = 1;
        break;
      }
    }
  }
  std::sort(out.factors.begin(), out.factors.end(),
            [](const PrimePower& a, const PrimePower& b) { return a.prime < b.prime; });
  return out;
}

ResidueClass binomial_mod(std::uint64_t n, std::uint64_t k, const Natural& m,
                          const BinomialModOptions& options) {
  if (m < 2) throw Error(ErrorCode::PreconditionViolated, "modulus must be >= 2");
  const Factorization f = factor_with_budget(m, options.trial_limit);
  if (!f.complete()) {
    if (n <= options.exact_fallback_max_n) return {binomial_exact(n, k), m};
    throw Error(ErrorCode::FactoringBudgetExceeded, "partial factorization " + f.to_string());
  }
  std::vector<ResidueClass> parts;
  parts.reserve(f.factors.size());
  for (const PrimePower& pp : f.factors) {
    parts.push_back(binomial_mod_prime_power(n, k, pp.prime, pp.exponent));
  }
  return crt(parts);
}

std::uint64_t valuation(const Integer& x, const Natural& q) {
  if (x == 0) throw Error(ErrorCode::ZeroNumerator, "valuation of zero");
  if (q < 2) throw Error(ErrorCode::PreconditionViolated, "valuation base must be >= 2");
  mpz_class rest;
  return mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), q.get_mpz_t());
}

std::uint64_t num_valuation(const Rational& r, const Natural& q) {
  if (mpz_divisible_p(r.get_den_mpz_t(), q.get_mpz_t())) {
    throw Error(ErrorCode::DenominatorNotCoprime, decimal(r) + " at " + decimal(q));
  }
  if (r == 0) throw Error(ErrorCode::ZeroNumerator, "numerator is zero");
  return valuation(r.get_num(), q);
}

}  // namespace wolst
