#include "wolst/wpoly.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>

#include "wolst/congruence.hpp"
#include "wolst/error.hpp"
#include "wolst/modring.hpp"
#include "wolst/symmetric.hpp"

namespace wolst {
namespace {

Integer sign(std::uint64_t exponent) { return exponent % 2 == 0 ? 1 : -1; }

Natural pow_ui(std::uint64_t base, std::uint64_t e) {
  Natural out;
  mpz_ui_pow_ui(out.get_mpz_t(), base, e);
  return out;
}

Integer from_i64(std::int64_t x) {
  return x < 0 ? Integer(-detail::from_u64(static_cast<std::uint64_t>(-(x + 1)) + 1))
               : detail::from_u64(static_cast<std::uint64_t>(x));
}

bool divides(const Natural& d, const Integer& x) {
  return mpz_divisible_p(x.get_mpz_t(), d.get_mpz_t()) != 0;
}

void require_prime(std::uint64_t p) {
  if (p < 5 || !is_prime(p)) throw Error(ErrorCode::PreconditionViolated, "p must be a prime >= 5");
}

}  // namespace

// ---------------------------------------------------------------------------
// IntPoly

IntPoly::IntPoly(std::vector<Integer> ascending) : coeffs_(std::move(ascending)) { trim(); }

IntPoly::IntPoly(std::initializer_list<long> ascending) {
  for (long c : ascending) coeffs_.emplace_back(c);
  trim();
}

IntPoly IntPoly::linear(const Integer& c) { return IntPoly(std::vector<Integer>{c, 1}); }

void IntPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

IntPoly& IntPoly::operator+=(const IntPoly& rhs) {
  if (coeffs_.size() < rhs.coeffs_.size()) coeffs_.resize(rhs.coeffs_.size());
  for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  trim();
  return *this;
}

IntPoly& IntPoly::operator*=(const Integer& scalar) {
  for (Integer& c : coeffs_) c *= scalar;
  trim();
  return *this;
}

IntPoly operator*(const IntPoly& lhs, const IntPoly& rhs) {
  if (lhs.is_zero() || rhs.is_zero()) return {};
  std::vector<Integer> out(lhs.coeffs_.size() + rhs.coeffs_.size() - 1);
  for (std::size_t i = 0; i < lhs.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) out[i + j] += lhs.coeffs_[i] * rhs.coeffs_[j];
  }
  return IntPoly(std::move(out));
}

IntPoly IntPoly::shifted_up(std::size_t k) const {
  if (is_zero()) return {};
  std::vector<Integer> out(k);
  out.insert(out.end(), coeffs_.begin(), coeffs_.end());
  return IntPoly(std::move(out));
}

std::string IntPoly::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = coeffs_.size(); i-- > 0;) {
    const Integer& c = coeffs_[i];
    if (c == 0) continue;
    const Integer mag = abs(c);
    out << (c < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
    if (mag != 1 || i == 0) out << decimal(mag);
    if (i >= 1) out << 'x';
    if (i >= 2) out << '^' << i;
    first = false;
  }
  return out.str();
}

Integer poly_eval(const IntPoly& f, const Integer& x) {
  Integer acc = 0;
  const auto& c = f.coeffs();
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
  return acc;
}

Natural poly_eval_mod(const IntPoly& f, const Integer& x, const Natural& r) {
  if (r < 1) throw Error(ErrorCode::PreconditionViolated, "modulus must be positive");
  const ResidueClass xr(x, r);
  Natural acc = 0;
  const auto& c = f.coeffs();
  for (std::size_t i = c.size(); i-- > 0;) {
    acc = acc * xr.value + c[i];
    mpz_fdiv_r(acc.get_mpz_t(), acc.get_mpz_t(), r.get_mpz_t());
  }
  return acc;
}

IntPoly poly_derivative(const IntPoly& f) {
  if (f.degree() < 1) return {};
  std::vector<Integer> out(f.coeffs().size() - 1);
  for (std::size_t i = 1; i < f.coeffs().size(); ++i) out[i - 1] = f.coeffs()[i] * static_cast<unsigned long>(i);
  return IntPoly(std::move(out));
}

IntPoly poly_shift(const IntPoly& f, const Integer& n) {
  std::vector<Integer> c = f.coeffs();
  if (c.size() < 2) return f;
  const std::size_t d = c.size() - 1;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = d; j-- > i;) c[j] += n * c[j + 1];
  }
  return IntPoly(std::move(c));
}

IntPoly poly_divexact_x(const IntPoly& f) {
  if (f.is_zero()) return {};
  if (f.coeffs()[0] != 0) throw Error(ErrorCode::InexactDivision, "constant term is nonzero");
  return IntPoly(std::vector<Integer>(f.coeffs().begin() + 1, f.coeffs().end()));
}

IntPoly poly_divexact_linear(const IntPoly& f, const Integer& c) {
  if (f.is_zero()) return {};
  // Synthetic division by x - root with root = -c.
  const Integer root = -c;
  const auto& a = f.coeffs();
  std::vector<Integer> q(a.size() - 1);
  Integer carry = 0;
  for (std::size_t i = a.size(); i-- > 1;) {
    carry = a[i] + carry * root;
    q[i - 1] = carry;
  }
  if (a[0] + carry * root != 0) {
    throw Error(ErrorCode::InexactDivision, "x + " + decimal(c) + " does not divide");
  }
  return IntPoly(std::move(q));
}

Natural poly_content(const IntPoly& f) {
  Natural g = 0;
  for (const Integer& c : f.coeffs()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g;
}

// ---------------------------------------------------------------------------
// Construction

namespace {

// D(x+1, k) / (x (x+1)) = product of (x + c) for c = 1-k..1+k, c not in {0, 1}.
IntPoly stripped_window(std::uint64_t k) {
  IntPoly out{1};
  const auto lo = 1 - static_cast<std::int64_t>(k);
  const auto hi = 1 + static_cast<std::int64_t>(k);
  for (std::int64_t c = lo; c <= hi; ++c) {
    if (c == 0 || c == 1) continue;
    out = out * IntPoly::linear(from_i64(c));
  }
  return out;
}

}  // namespace

TermBasis term_basis(std::uint64_t k, std::uint64_t j) {
  if (k < 1 || j < 1 || j > k) throw Error(ErrorCode::PreconditionViolated, "needs 1 <= j <= k");
  return {k, j, poly_divexact_linear(stripped_window(k), detail::from_u64(1 + j))};
}

IntPoly construct_W(std::uint64_t p) {
  require_prime(p);
  const StirlingTables stirling(2 * (p - 2));
  const Natural top_factorial = factorial_exact(2 * p - 4);

  IntPoly w;
  for (std::uint64_t k = 1; k <= p - 2; k += 2) {
    const IntPoly window = stripped_window(k);
    IntPoly inner;
    for (std::uint64_t j = 1; j <= k; ++j) {
      const Integer weight = sign(j + k) * binomial_exact(2 * k, k + j) * stirling.second(j + k, j);
      inner += poly_divexact_linear(window, detail::from_u64(1 + j)) * weight;
    }
    const Natural scale = top_factorial / factorial_exact(2 * k);
    if (k == p - 2) {
      if (inner.coeff(0) != 0) {
        throw Error(ErrorCode::ConstructionAssertFailure,
                    "constant term of the k = p-2 sum is " + decimal(inner.coeff(0)));
      }
      w += poly_divexact_x(inner) * scale;
    } else {
      w += inner.shifted_up(p - k - 3) * scale;
    }
  }
  if (!w_evaluation_identity(p, w)) {
    throw Error(ErrorCode::ConstructionAssertFailure,
                "evaluation identity fails at p = " + std::to_string(p));
  }
  return w;
}

bool w_evaluation_identity(std::uint64_t p, const IntPoly& w) {
  const Natural pp = detail::from_u64(p);
  const Integer lhs = poly_eval(w, pp) * (pp + 1) * pp * pp * pp;
  const Integer rhs = (w_exact(p) - 1) * factorial_exact(2 * p - 4) * factorial_exact(p - 1);
  return lhs == rhs;
}

Integer w_value_via_form4(std::uint64_t p) {
  require_prime(p);
  const StirlingTables stirling(2 * (p - 2));
  const Natural pp = detail::from_u64(p);
  Rational quotient = 0;  // (w_p - 1)/p^3
  for (std::uint64_t k = 1; k <= p - 2; k += 2) {
    const Rational s = form4_eval(p, k, stirling);
    if (k == p - 2) {
      quotient += s / Rational(pp);
    } else {
      quotient += Rational(pow_ui(p, p - k - 3)) * s;
    }
  }
  const Rational value = quotient * make_rational(factorial_exact(2 * p - 4) * factorial_exact(p - 1), pp + 1);
  if (value.get_den() != 1) throw Error(ErrorCode::ConstructionAssertFailure, "W(p) not integral");
  return value.get_num();
}

WReport verify_W(std::uint64_t p, const IntPoly& w) {
  require_prime(p);
  WReport r;
  r.p = p;
  r.degree = w.degree();
  const long expected_degree = 2 * static_cast<long>(p) - 7;
  r.degree_ok = r.degree == expected_degree;
  if (!r.degree_ok) r.failures.push_back("degree " + std::to_string(r.degree) + " != 2p-7");
  r.leading_ok = !w.is_zero() && w.coeff(static_cast<std::size_t>(expected_degree)) == double_factorial(2 * p - 5);
  if (!r.leading_ok) r.failures.push_back("a_{2p-7} != (2p-5)!!");
  r.constant_divisible = divides(factorial_exact(p - 3), w.coeff(0));
  if (!r.constant_divisible) r.failures.push_back("(p-3)! does not divide a_0");
  r.evaluation_ok = w_evaluation_identity(p, w);
  if (!r.evaluation_ok) r.failures.push_back("evaluation identity fails");
  return r;
}

WReport verify_W(std::uint64_t p) { return verify_W(p, construct_W(p)); }

CoeffProfile coeff_profile(std::uint64_t p, const IntPoly& w) {
  require_prime(p);
  if (w.is_zero()) throw Error(ErrorCode::PreconditionViolated, "zero polynomial");
  CoeffProfile out;
  out.p = p;
  const auto& c = w.coeffs();
  for (std::size_t i = 1; i < c.size(); ++i) {
    if (abs(c[i]) > abs(c[out.argmax])) out.argmax = i;
  }
  out.argmax_is_p_minus_4 = out.argmax == p - 4;
  for (std::size_t i = 2 * p - 7 + 1; i-- > p - 4;) out.signs.push_back(sgn(w.coeff(i)));
  out.alternating = std::all_of(out.signs.begin(), out.signs.end(), [](int s) { return s != 0; });
  for (std::size_t i = 1; i < out.signs.size(); ++i) {
    if (out.signs[i] == out.signs[i - 1]) out.alternating = false;
  }
  return out;
}

CoeffProfile coeff_profile(std::uint64_t p) { return coeff_profile(p, construct_W(p)); }

bool large_prime_divisor_check(std::uint64_t p, std::uint64_t q, const IntPoly& w) {
  require_prime(p);
  if (q <= p || !is_prime(q)) throw Error(ErrorCode::PreconditionViolated, "q must be a prime > p");
  const Natural qq = detail::from_u64(q);
  const Integer numerator = w_exact(p) - 1;
  const Integer quotient = numerator / pow_ui(p, 3);
  const bool answer = divides(qq, quotient);

  if (divides(qq, numerator) && q <= 2 * p) {
    throw Error(ErrorCode::AssertionFailure,
                std::to_string(q) + " divides w_p - 1 but is not > 2p for p = " + std::to_string(p));
  }
  if (q > 2 * p) {
    const bool via_poly = poly_eval_mod(w, detail::from_u64(p), qq) == 0;
    if (via_poly != answer) {
      throw Error(ErrorCode::AssertionFailure,
                  "q | (w_p-1)/p^3 and q | W(p) disagree at (p, q) = (" + std::to_string(p) + ", " +
                      std::to_string(q) + ")");
    }
  }
  return answer;
}

bool large_prime_divisor_check(std::uint64_t p, std::uint64_t q) {
  return large_prime_divisor_check(p, q, construct_W(p));
}

Integer hensel_lift(const IntPoly& f, const Natural& r, const Integer& n) {
  if (r < 2) throw Error(ErrorCode::PreconditionViolated, "r must be prime");
  if (poly_eval_mod(f, n, r) != 0) {
    throw Error(ErrorCode::NotApplicable, "r does not divide f(n)");
  }
  const IntPoly df = poly_derivative(f);
  if (poly_eval_mod(df, n, r) == 0) {
    throw Error(ErrorCode::NotApplicable, "r divides f'(n)");
  }
  const Natural r2 = r * r;
  const Natural slope_inv = mod_inv(poly_eval_mod(df, n, r2), r2).value;
  const ResidueClass s(n - poly_eval(f, n) * slope_inv, r2);
  return s.value;
}

bool shift_divisibility_check(const IntPoly& f, const Integer& p, const Integer& n) {
  if (p == n) throw Error(ErrorCode::PreconditionViolated, "p == n");
  const Natural d = abs(p - n);
  const Integer fp = poly_eval(f, p);
  const Integer fn = poly_eval(f, n);
  if (divides(d, fp) != divides(d, fn)) return false;
  if (divides(d, poly_eval(poly_derivative(f), n))) {
    const Natural d2 = d * d;
    if (divides(d2, fp) != divides(d2, fn)) return false;
  }
  return true;
}

std::vector<TrendRecord> trend_scan(std::uint64_t p, const IntPoly& w, std::int64_t n_lo,
                                    std::int64_t n_hi) {
  require_prime(p);
  if (n_hi >= 0 || n_lo > n_hi) throw Error(ErrorCode::PreconditionViolated, "needs n_lo <= n_hi < 0");
  const IntPoly dw = poly_derivative(w);
  const Natural content = poly_content(w);
  std::vector<TrendRecord> out;
  for (std::int64_t n = n_lo; n <= n_hi; ++n) {
    const std::uint64_t r = p + static_cast<std::uint64_t>(-n);
    if (!is_prime(r)) continue;
    const Natural rr = detail::from_u64(r);
    const Integer nn = from_i64(n);
    if (poly_eval_mod(w, nn, rr) != 0) continue;
    out.push_back({p, n, r, true, poly_eval_mod(dw, nn, rr) == 0, divides(rr, content)});
  }
  return out;
}

std::vector<TrendRecord> trend_scan(std::uint64_t p, std::int64_t n_lo, std::int64_t n_hi) {
  return trend_scan(p, construct_W(p), n_lo, n_hi);
}

std::string w_to_json(std::uint64_t p, const IntPoly& w) {
  nlohmann::ordered_json doc;
  doc["p"] = p;
  std::vector<std::string> coeffs;
  for (const Integer& c : w.coeffs()) coeffs.push_back(decimal(c));
  doc["coeffs_ascending"] = coeffs;
  return doc.dump();
}

}  // namespace wolst
