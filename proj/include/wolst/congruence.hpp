#pragma once

// Congruence checks on w_n = C(2n-1, n-1) and the modified binomial
// coefficient w'_n: Wilson, Babbage/Wolstenholme, Jones, McIntosh, the
// two-prime criterion and the large-prime-factor band rule.

#include <cstdint>
#include <optional>
#include <vector>

#include "wolst/arith.hpp"

namespace wolst {

/// Exponent levels for pair and Wilson tests; the closed set {1, 2, 3}.
enum class Level : unsigned { first = 1, second = 2, third = 3 };

constexpr unsigned exponent(Level level) noexcept { return static_cast<unsigned>(level); }

/// Throws PreconditionViolated outside {1, 2, 3}.
Level level_from(unsigned e);

struct CongruenceVerdict {
  Natural subject;
  Natural modulus;
  ResidueClass residue;
  Natural target;  // 1 for w-type tests, modulus - 1 for Wilson-type
  bool holds;
};

struct PairCriterionResult {
  std::uint64_t p;
  std::uint64_t q;
  Level level;
  bool left;   // w_p == 1 (mod q^e)
  bool right;  // w_q == 1 (mod p^e)
  bool combined;
};

/// Prime q placed in the band (2p-1)/(n+1) < q <= (2p-1)/n.
struct FactorBand {
  std::uint64_t p;
  std::uint64_t n;
  Rational interval_lo;  // exclusive
  Rational interval_hi;  // inclusive
  std::uint64_t q;
  bool predicted_divides;  // n odd
  bool actual_divides;
};

Natural w_exact(std::uint64_t n);

/// w_n mod m. Uses the O(n) product of (n+k)/k when every prime factor of m
/// exceeds n-1, otherwise prime-power binomials with CRT.
ResidueClass w_mod(std::uint64_t n, const Natural& m, const BinomialModOptions& options = {});

/// True when w_mod(n, m) can take the direct product route.
bool w_mod_uses_product(std::uint64_t n, const Natural& m);

Rational wprime_exact(std::uint64_t n);

/// Requires every prime factor of m to divide n (PreconditionViolated).
ResidueClass wprime_mod(std::uint64_t n, const Natural& m);

/// w_n == product over d | n of w'_d, exactly.
bool divisor_product_check(std::uint64_t n);

/// Same check with w'_d supplied by the caller (indexed by d, entry 0 unused).
bool divisor_product_check(std::uint64_t n, const std::vector<Rational>& wprime_table);

/// (n-1)! == -1 (mod n^e), by modular product.
CongruenceVerdict wilson_residue(std::uint64_t n, Level e);

/// (2n-1)!/n! == (n-1)! (mod n); an identity for every n >= 2.
bool wilson_restatement_check(std::uint64_t n);

/// w_n == 1 (mod n^3).
CongruenceVerdict jones_check(std::uint64_t n);

/// w_p == 1 (mod p^4) for a prime p >= 5.
bool is_wolstenholme_prime(std::uint64_t p);

struct McIntoshVerdict {
  CongruenceVerdict verdict;  // w_n == 1 (mod n^2)
  /// For n = p^2: w_p mod n^2. The check asserts w_n == w_p (mod n^2).
  std::optional<ResidueClass> root_residue;
};

/// Throws AssertionFailure if the prime-square step w_{p^2} == w_p fails.
McIntoshVerdict mcintosh_check(std::uint64_t n);

PairCriterionResult pair_criterion(std::uint64_t p, std::uint64_t q, Level e);

/// Default bound on pq for the exact binomial route.
inline constexpr std::uint64_t kPairDirectBudget = 100'000;

/// w_{pq} mod (pq)^e from the exact binomial. Throws BudgetExceeded past
/// the budget on pq.
bool pair_direct_check(std::uint64_t p, std::uint64_t q, Level e,
                       std::uint64_t budget = kPairDirectBudget);

/// Bands for every prime q with q^2 >= 2p-1, q != p, q <= 2p-1.
std::vector<FactorBand> factor_band_classify(std::uint64_t p);

}  // namespace wolst
