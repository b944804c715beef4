#pragma once

// Elementary symmetric functions of {1, 1/2, ..., 1/n} and {1, ..., n},
// Stirling numbers of both kinds, and the identities that connect them to
// the expansion of w_p in powers of p.

#include <cstdint>
#include <vector>

#include "wolst/arith.hpp"

namespace wolst {

/// Row n of S(n, k): elementary symmetric polynomials of {1, 1/2, ..., 1/n}.
struct SymRationalTable {
  std::uint64_t n = 0;
  std::vector<Rational> entries;  // k = 0..n

  /// S(n, k); zero for k > n.
  Rational at(std::uint64_t k) const { return k < entries.size() ? entries[k] : Rational(0); }
};

/// Row n of P(n, k): elementary symmetric polynomials of {1, ..., n}.
struct IntSymTable {
  std::uint64_t n = 0;
  std::vector<Natural> entries;  // k = 0..n

  Natural at(std::uint64_t k) const { return k < entries.size() ? entries[k] : Natural(0); }
};

SymRationalTable sym_rational_row(std::uint64_t n);
/// Row n+1 from row n: S(n+1, m) = S(n, m) + S(n, m-1)/(n+1).
SymRationalTable next_row(const SymRationalTable& row);

IntSymTable perm_sym_row(std::uint64_t n);
/// P(n+1, k) = P(n, k) + (n+1) P(n, k-1).
IntSymTable next_row(const IntSymTable& row);

Rational elem_sym(std::uint64_t n, std::uint64_t k);
Natural perm_sym(std::uint64_t n, std::uint64_t k);

/// S(n, n-k) = P(n, k) / n! for every 0 <= k <= n.
bool check_form2(std::uint64_t n);
bool check_form2(const SymRationalTable& s_row, const IntSymTable& p_row);

/// Signed Stirling numbers of the first kind and Stirling numbers of the
/// second kind, 0 <= k <= n <= dimension.
class StirlingTables {
 public:
  explicit StirlingTables(std::uint64_t dimension);

  std::uint64_t dimension() const { return dimension_; }
  const Integer& first(std::uint64_t n, std::uint64_t k) const;
  const Natural& second(std::uint64_t n, std::uint64_t k) const;

  /// Both defining characterizations at x = 0..n for row n.
  bool check_characterizations(std::uint64_t n) const;

 private:
  std::uint64_t dimension_;
  std::vector<std::vector<Integer>> first_;
  std::vector<std::vector<Natural>> second_;
};

Integer stirling1(std::uint64_t n, std::uint64_t k);
Natural stirling2(std::uint64_t n, std::uint64_t k);

/// s(n, n-k) from second-kind numbers:
///   sum_{j=0..k} (-1)^j C(n+j-1, k+j) C(n+k, k-j) S(j+k, j).
/// The j = 0 term is asserted to vanish for k >= 1.
Integer stirling1_via_form3(std::uint64_t n, std::uint64_t k, const StirlingTables& tables);
Integer stirling1_via_form3(std::uint64_t n, std::uint64_t k);

/// P(n, k) = (-1)^k s(n+1, n+1-k) for every 0 <= k <= n.
bool check_sP_relation(std::uint64_t n, const StirlingTables& tables);
bool check_sP_relation(std::uint64_t n);

/// (2k-1)!! = sum_{j=0..k} (-1)^(j+k) C(2k, k+j) S(j+k, j).
bool ident_doublefact(std::uint64_t k, const StirlingTables& tables);
bool ident_doublefact(std::uint64_t k);

/// w_p = sum_{k=0..p-1} p^k S(p-1, k).
bool check_form(std::uint64_t p);
bool check_form(std::uint64_t p, const SymRationalTable& row_p_minus_1);

/// (w_p - 1)/p^3 = S(p,2)/p + p S(p,4) + ... + p^{p-4} S(p,p-1).
bool check_int_expansion(std::uint64_t p);
bool check_int_expansion(std::uint64_t p, const SymRationalTable& row_p);

struct ValuationFailure {
  std::uint64_t k;
  std::uint64_t observed;
  const char* clause;
};

struct BayatReport {
  std::uint64_t p = 0;
  std::vector<std::uint64_t> valuations;  // index k-1 for k = 1..p-1
  std::vector<ValuationFailure> failures;

  bool ok() const { return failures.empty(); }
};

/// p-adic valuations of the numerators of S(p-1, k): >= 1 for even
/// k <= p-3, >= 2 for odd k <= p-4, the ladder v(k) = 1 + v(k+1) for odd
/// k <= p-2, and S(p-1, p-2) == 0 (mod p).
BayatReport bayat_valuations(std::uint64_t p);
BayatReport bayat_valuations(std::uint64_t p, const SymRationalTable& row_p_minus_1);

/// S(p, p-k) through the closed form with C(p,k) = (p+2)...(p+1+k).
Rational form4_eval(std::uint64_t p, std::uint64_t k, const StirlingTables& tables);
Rational form4_eval(std::uint64_t p, std::uint64_t k);

/// p divides the numerator of S(p, m) for m = 2, 4, ..., p-3.
bool s_pm_mod_p(std::uint64_t p);
bool s_pm_mod_p(std::uint64_t p, const SymRationalTable& row_p);

}  // namespace wolst
