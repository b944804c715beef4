#pragma once

// Exact integer and rational primitives: primality, prime enumeration,
// modular inverses, factorials and binomial coefficients modulo prime
// powers and composite moduli.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wolst {

/// Arbitrary-precision integers. Natural carries a nonnegativity contract.
using Natural = mpz_class;
using Integer = mpz_class;

/// Always canonical: gcd(|num|, den) = 1, den > 0, zero is 0/1.
using Rational = mpq_class;

Rational make_rational(const Integer& num, const Integer& den);

/// A residue with its modulus; value is reduced into [0, modulus).
struct ResidueClass {
  Natural value;
  Natural modulus;

  ResidueClass(const Integer& v, const Natural& m);

  bool operator==(const ResidueClass& other) const {
    return value == other.value && modulus == other.modulus;
  }
  bool is(const Integer& target) const;
  std::string to_string() const;
};

// ---------------------------------------------------------------------------
// Primes

struct PrimalityResult {
  bool prime = false;
  /// Set when n >= 2^64 and the verdict rests on a fixed strong-probable-prime
  /// base set rather than a proven deterministic witness set.
  bool probabilistic = false;
};

/// Deterministic Miller-Rabin below 2^64 (seven-base Sinclair set); above
/// that, strong probable-prime tests to the first 24 prime bases.
PrimalityResult primality(const Natural& n);
bool is_prime(const Natural& n);
bool is_prime(std::uint64_t n);

/// Streams the primes of [lo, hi] in ascending order from a segmented sieve
/// with bounded memory.
class PrimeStream {
 public:
  PrimeStream(std::uint64_t lo, std::uint64_t hi);

  std::optional<std::uint64_t> next();

 private:
  void fill_segment();

  std::uint64_t hi_;
  std::uint64_t segment_lo_;
  std::vector<std::uint32_t> base_primes_;
  std::vector<bool> composite_;
  std::size_t cursor_ = 0;
  bool done_ = false;
};

std::vector<std::uint64_t> primes_in(std::uint64_t lo, std::uint64_t hi);

// ---------------------------------------------------------------------------
// Modular arithmetic

/// Throws Error(NotInvertible) when gcd(a, m) != 1.
ResidueClass mod_inv(const Natural& a, const Natural& m);

/// Chinese remaindering of residues with pairwise coprime moduli.
ResidueClass crt(std::span<const ResidueClass> parts);

// ---------------------------------------------------------------------------
// Factorials and binomials

Natural factorial_exact(std::uint64_t n);
Natural double_factorial(std::uint64_t n);

/// Exponent of the prime q in n!.
std::uint64_t legendre_valuation(std::uint64_t n, const Natural& q);

struct FactorialUnit {
  std::uint64_t valuation;
  ResidueClass unit;  // (n! / q^valuation) mod q^e
};

/// n! = q^valuation * unit with q not dividing unit. Block recursion over
/// q^e: cost O(min(n, q^e)) per level of the base-q expansion of n.
FactorialUnit factorial_unit(std::uint64_t n, const Natural& q, unsigned e);

Natural binomial_exact(std::uint64_t n, std::uint64_t k);

/// Exponent of q in C(n, k) from Legendre's formula.
std::uint64_t binomial_valuation(std::uint64_t n, std::uint64_t k, const Natural& q);

/// Number of carries when adding a and b in base q.
unsigned kummer_carries(std::uint64_t a, std::uint64_t b, std::uint64_t q);

/// C(n, k) mod q^e from three generalized factorials.
ResidueClass binomial_mod_prime_power(std::uint64_t n, std::uint64_t k, const Natural& q,
                                      unsigned e);

struct PrimePower {
  Natural prime;
  unsigned exponent;
};

struct Factorization {
  std::vector<PrimePower> factors;
  Natural cofactor = 1;  // unresolved part; 1 when complete

  bool complete() const { return cofactor == 1; }
  std::string to_string() const;
};

/// Trial division up to trial_limit, then classifies the cofactor as
/// prime, prime power, or unresolved.
Factorization factor_with_budget(const Natural& m, std::uint64_t trial_limit);

struct BinomialModOptions {
  std::uint64_t trial_limit = 1'000'000;
  /// Largest n for which an unfactorable modulus falls back to the exact
  /// binomial; beyond it binomial_mod throws FactoringBudgetExceeded.
  std::uint64_t exact_fallback_max_n = 200'000;
};

/// C(n, k) mod m by prime-power decomposition and CRT.
ResidueClass binomial_mod(std::uint64_t n, std::uint64_t k, const Natural& m,
                          const BinomialModOptions& options = {});

// ---------------------------------------------------------------------------
// Valuations

/// Exponent of q in a nonzero integer.
std::uint64_t valuation(const Integer& x, const Natural& q);

/// Exponent of q in the numerator of r. Requires q not dividing the
/// denominator (DenominatorNotCoprime) and r != 0 (ZeroNumerator).
std::uint64_t num_valuation(const Rational& r, const Natural& q);

/// Decimal text of x (used by every serializer).
std::string decimal(const Integer& x);
std::string decimal(const Rational& x);

}  // namespace wolst
