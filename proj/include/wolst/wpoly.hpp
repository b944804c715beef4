#pragma once

// Dense integer polynomials and the Wolstenholme polynomial W with
//   (w_p - 1)/p^3 = (p + 1) W(p) / ((2p-4)! (p-1)!).

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "wolst/arith.hpp"

namespace wolst {

/// Coefficients in ascending order, trailing zeros stripped; the zero
/// polynomial has no coefficients.
class IntPoly {
 public:
  IntPoly() = default;
  explicit IntPoly(std::vector<Integer> ascending);
  IntPoly(std::initializer_list<long> ascending);

  /// x + c
  static IntPoly linear(const Integer& c);

  const std::vector<Integer>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  /// -1 for the zero polynomial.
  long degree() const { return static_cast<long>(coeffs_.size()) - 1; }
  Integer coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : Integer(0); }
  const Integer& leading() const { return coeffs_.back(); }

  IntPoly& operator+=(const IntPoly& rhs);
  IntPoly& operator*=(const Integer& scalar);
  friend IntPoly operator+(IntPoly lhs, const IntPoly& rhs) { return lhs += rhs; }
  friend IntPoly operator*(IntPoly lhs, const Integer& scalar) { return lhs *= scalar; }
  friend IntPoly operator*(const IntPoly& lhs, const IntPoly& rhs);
  bool operator==(const IntPoly& rhs) const { return coeffs_ == rhs.coeffs_; }

  /// Multiplies by x^k.
  IntPoly shifted_up(std::size_t k) const;

  std::string to_string() const;

 private:
  void trim();

  std::vector<Integer> coeffs_;
};

Integer poly_eval(const IntPoly& f, const Integer& x);
/// f(x) mod r, reducing coefficients first.
Natural poly_eval_mod(const IntPoly& f, const Integer& x, const Natural& r);
IntPoly poly_derivative(const IntPoly& f);
/// Coefficients of f(x + n).
IntPoly poly_shift(const IntPoly& f, const Integer& n);
/// f / x; throws InexactDivision when the constant term is nonzero.
IntPoly poly_divexact_x(const IntPoly& f);
/// f / (x + c) for an exact linear divisor; throws InexactDivision otherwise.
IntPoly poly_divexact_linear(const IntPoly& f, const Integer& c);
/// gcd of the coefficients (0 for the zero polynomial).
Natural poly_content(const IntPoly& f);

/// basis(k, j) = D(x+1, k) / ((x+1+j) x (x+1)), D(n,k) = (n-k)(n-k+1)...(n+k).
struct TermBasis {
  std::uint64_t k;
  std::uint64_t j;
  IntPoly basis;
};

TermBasis term_basis(std::uint64_t k, std::uint64_t j);

/// W for a prime p >= 5. Throws ConstructionAssertFailure when an exact
/// division or the evaluation identity fails.
IntPoly construct_W(std::uint64_t p);

/// (p+1) W(p) and (w_p-1)/p^3 (2p-4)!(p-1)! computed independently.
bool w_evaluation_identity(std::uint64_t p, const IntPoly& w);

/// W(p) through the closed form with C(p,k)/(p+1+j), evaluated at x = p only.
Integer w_value_via_form4(std::uint64_t p);

struct WReport {
  std::uint64_t p = 0;
  long degree = 0;
  bool degree_ok = false;
  bool leading_ok = false;        // a_{2p-7} = (2p-5)!!
  bool constant_divisible = false;  // (p-3)! | a_0
  bool evaluation_ok = false;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

WReport verify_W(std::uint64_t p, const IntPoly& w);
WReport verify_W(std::uint64_t p);

struct CoeffProfile {
  std::uint64_t p = 0;
  std::size_t argmax = 0;          // index of the largest |a_i|
  bool argmax_is_p_minus_4 = false;
  std::vector<int> signs;          // a_{2p-7}, a_{2p-8}, ..., a_{p-4}
  bool alternating = false;
};

/// Reports, never throws on deviation: the pattern is observational.
CoeffProfile coeff_profile(std::uint64_t p, const IntPoly& w);
CoeffProfile coeff_profile(std::uint64_t p);

/// q | (w_p - 1)/p^3 for a prime q > p. Asserts (AssertionFailure) that a
/// prime q > p dividing w_p - 1 exceeds 2p, and when q > 2p that the answer
/// agrees with q | W(p).
bool large_prime_divisor_check(std::uint64_t p, std::uint64_t q, const IntPoly& w);
bool large_prime_divisor_check(std::uint64_t p, std::uint64_t q);

/// s mod r^2 with s == n (mod r) and r^2 | f(s). Throws NotApplicable when
/// r does not divide f(n) or r divides f'(n).
Integer hensel_lift(const IntPoly& f, const Natural& r, const Integer& n);

/// (p-n) | f(p) <=> (p-n) | f(n), and when (p-n) | f'(n) also
/// (p-n)^2 | f(p) <=> (p-n)^2 | f(n).
bool shift_divisibility_check(const IntPoly& f, const Integer& p, const Integer& n);

struct TrendRecord {
  std::uint64_t p;
  std::int64_t n;
  std::uint64_t r;  // p - n, prime
  bool divides_W;
  bool divides_W1;
  bool divides_content;  // r divides every coefficient of W
};

/// For n in [n_lo, n_hi] (n_hi < 0) with r = p - n prime and r | W(n), one
/// record; divides_W1 = true marks a departure from the observed trend.
std::vector<TrendRecord> trend_scan(std::uint64_t p, const IntPoly& w, std::int64_t n_lo,
                                    std::int64_t n_hi);
std::vector<TrendRecord> trend_scan(std::uint64_t p, std::int64_t n_lo, std::int64_t n_hi);

/// {"p": p, "coeffs_ascending": ["a0", "a1", ...]} with exact decimal strings.
std::string w_to_json(std::uint64_t p, const IntPoly& w);

}  // namespace wolst
