#include "wolst/symmetric.hpp"

#include "wolst/congruence.hpp"
#include "wolst/error.hpp"
#include "wolst/modring.hpp"

namespace wolst {
namespace {

Integer sign(std::uint64_t exponent) { return exponent % 2 == 0 ? 1 : -1; }

Natural pow_ui(std::uint64_t base, std::uint64_t e) {
  Natural out;
  mpz_ui_pow_ui(out.get_mpz_t(), base, e);
  return out;
}

void require_odd_prime(std::uint64_t p, std::uint64_t floor) {
  if (p < floor || !is_prime(p)) {
    throw Error(ErrorCode::PreconditionViolated, "p must be a prime >= " + std::to_string(floor));
  }
}

const StirlingTables& ensure_dimension(const StirlingTables& tables, std::uint64_t needed) {
  if (tables.dimension() < needed) {
    throw Error(ErrorCode::PreconditionViolated,
                "Stirling tables of dimension " + std::to_string(tables.dimension()) +
                    " but " + std::to_string(needed) + " needed");
  }
  return tables;
}

}  // namespace

SymRationalTable next_row(const SymRationalTable& row) {
  const std::uint64_t n = row.n + 1;
  const Rational inv_n = make_rational(1, detail::from_u64(n));
  SymRationalTable out{n, std::vector<Rational>(n + 1)};
  out.entries[0] = 1;
  for (std::uint64_t m = 1; m <= n; ++m) out.entries[m] = row.at(m) + row.at(m - 1) * inv_n;
  return out;
}

SymRationalTable sym_rational_row(std::uint64_t n) {
  SymRationalTable row{0, {Rational(1)}};
  while (row.n < n) row = next_row(row);
  return row;
}

IntSymTable next_row(const IntSymTable& row) {
  const std::uint64_t n = row.n + 1;
  const Natural scale = detail::from_u64(n);
  IntSymTable out{n, std::vector<Natural>(n + 1)};
  out.entries[0] = 1;
  for (std::uint64_t k = 1; k <= n; ++k) out.entries[k] = row.at(k) + scale * row.at(k - 1);
  return out;
}

IntSymTable perm_sym_row(std::uint64_t n) {
  IntSymTable row{0, {Natural(1)}};
  while (row.n < n) row = next_row(row);
  return row;
}

Rational elem_sym(std::uint64_t n, std::uint64_t k) { return sym_rational_row(n).at(k); }

Natural perm_sym(std::uint64_t n, std::uint64_t k) {
  if (k > n) throw Error(ErrorCode::PreconditionViolated, "k > n");
  return perm_sym_row(n).at(k);
}

bool check_form2(const SymRationalTable& s_row, const IntSymTable& p_row) {
  if (s_row.n != p_row.n) throw Error(ErrorCode::PreconditionViolated, "row mismatch");
  const std::uint64_t n = s_row.n;
  const Natural n_fact = factorial_exact(n);
  for (std::uint64_t k = 0; k <= n; ++k) {
    if (s_row.at(n - k) != make_rational(p_row.at(k), n_fact)) return false;
  }
  return true;
}

bool check_form2(std::uint64_t n) { return check_form2(sym_rational_row(n), perm_sym_row(n)); }

// ---------------------------------------------------------------------------
// Stirling numbers

StirlingTables::StirlingTables(std::uint64_t dimension) : dimension_(dimension) {
  first_.resize(dimension + 1);
  second_.resize(dimension + 1);
  first_[0] = {Integer(1)};
  second_[0] = {Natural(1)};
  for (std::uint64_t n = 0; n < dimension; ++n) {
    const Integer scale = detail::from_u64(n);
    std::vector<Integer>& f = first_[n + 1];
    std::vector<Natural>& s = second_[n + 1];
    f.assign(n + 2, 0);
    s.assign(n + 2, 0);
    for (std::uint64_t k = 1; k <= n + 1; ++k) {
      const Integer same = k <= n ? first_[n][k] : Integer(0);
      f[k] = first_[n][k - 1] - scale * same;
      const Natural same2 = k <= n ? second_[n][k] : Natural(0);
      s[k] = detail::from_u64(k) * same2 + second_[n][k - 1];
    }
  }
}

const Integer& StirlingTables::first(std::uint64_t n, std::uint64_t k) const {
  static const Integer zero = 0;
  if (n > dimension_) throw Error(ErrorCode::PreconditionViolated, "beyond table dimension");
  return k <= n ? first_[n][k] : zero;
}

const Natural& StirlingTables::second(std::uint64_t n, std::uint64_t k) const {
  static const Natural zero = 0;
  if (n > dimension_) throw Error(ErrorCode::PreconditionViolated, "beyond table dimension");
  return k <= n ? second_[n][k] : zero;
}

bool StirlingTables::check_characterizations(std::uint64_t n) const {
  if (n >= 1 && (first(n, 0) != 0 || second(n, 0) != 0)) return false;
  for (std::uint64_t x = 0; x <= n; ++x) {
    const Integer xx = detail::from_u64(x);
    Integer poly = 0;
    Integer xk = 1;
    for (std::uint64_t k = 0; k <= n; ++k) {
      poly += first(n, k) * xk;
      xk *= xx;
    }
    // n! C(x, n) is the falling factorial x(x-1)...(x-n+1).
    if (poly != factorial_exact(n) * binomial_exact(x, n)) return false;

    Integer total = 0;
    for (std::uint64_t k = 0; k <= n; ++k) {
      total += factorial_exact(k) * binomial_exact(x, k) * second(n, k);
    }
    if (total != pow_ui(x, n)) return false;
  }
  return true;
}

Integer stirling1(std::uint64_t n, std::uint64_t k) { return StirlingTables(n).first(n, k); }
Natural stirling2(std::uint64_t n, std::uint64_t k) { return StirlingTables(n).second(n, k); }

Integer stirling1_via_form3(std::uint64_t n, std::uint64_t k, const StirlingTables& tables) {
  if (n < 1 || k > n - 1) throw Error(ErrorCode::PreconditionViolated, "needs n >= 1, k <= n-1");
  ensure_dimension(tables, 2 * k);
  Integer total = 0;
  for (std::uint64_t j = 0; j <= k; ++j) {
    const Integer term = sign(j) * binomial_exact(n + j - 1, k + j) *
                         binomial_exact(n + k, k - j) * tables.second(j + k, j);
    if (j == 0 && k >= 1 && term != 0) {
      throw Error(ErrorCode::AssertionFailure, "j = 0 term of the Stirling conversion is nonzero");
    }
    total += term;
  }
  return total;
}

Integer stirling1_via_form3(std::uint64_t n, std::uint64_t k) {
  return stirling1_via_form3(n, k, StirlingTables(2 * k));
}

bool check_sP_relation(std::uint64_t n, const StirlingTables& tables) {
  ensure_dimension(tables, n + 1);
  const IntSymTable row = perm_sym_row(n);
  for (std::uint64_t k = 0; k <= n; ++k) {
    if (row.at(k) != sign(k) * tables.first(n + 1, n + 1 - k)) return false;
  }
  return true;
}

bool check_sP_relation(std::uint64_t n) { return check_sP_relation(n, StirlingTables(n + 1)); }

bool ident_doublefact(std::uint64_t k, const StirlingTables& tables) {
  if (k < 1) throw Error(ErrorCode::PreconditionViolated, "k >= 1");
  ensure_dimension(tables, 2 * k);
  Integer total = 0;
  for (std::uint64_t j = 0; j <= k; ++j) {
    total += sign(j + k) * binomial_exact(2 * k, k + j) * tables.second(j + k, j);
  }
  return total == double_factorial(2 * k - 1);
}

bool ident_doublefact(std::uint64_t k) { return ident_doublefact(k, StirlingTables(2 * k)); }

// ---------------------------------------------------------------------------
// Expansion of w_p

bool check_form(std::uint64_t p, const SymRationalTable& row) {
  require_odd_prime(p, 3);
  if (row.n != p - 1) throw Error(ErrorCode::PreconditionViolated, "expects row p-1");
  Rational total = 0;
  Natural pk = 1;
  for (std::uint64_t k = 0; k <= p - 1; ++k) {
    total += Rational(pk) * row.at(k);
    pk *= detail::from_u64(p);
  }
  return total == Rational(w_exact(p));
}

bool check_form(std::uint64_t p) { return check_form(p, sym_rational_row(p - 1)); }

bool check_int_expansion(std::uint64_t p, const SymRationalTable& row) {
  require_odd_prime(p, 5);
  if (row.n != p) throw Error(ErrorCode::PreconditionViolated, "expects row p");
  const Natural pp = detail::from_u64(p);
  const Rational lhs = make_rational(w_exact(p) - 1, pow_ui(p, 3));
  Rational rhs = row.at(2) / Rational(pp);
  for (std::uint64_t m = 4; m <= p - 1; m += 2) rhs += Rational(pow_ui(p, m - 3)) * row.at(m);
  return lhs == rhs;
}

bool check_int_expansion(std::uint64_t p) { return check_int_expansion(p, sym_rational_row(p)); }

BayatReport bayat_valuations(std::uint64_t p, const SymRationalTable& row) {
  require_odd_prime(p, 5);
  if (row.n != p - 1) throw Error(ErrorCode::PreconditionViolated, "expects row p-1");
  const Natural pp = detail::from_u64(p);
  BayatReport report;
  report.p = p;
  for (std::uint64_t k = 1; k <= p - 1; ++k) report.valuations.push_back(num_valuation(row.at(k), pp));
  const auto v = [&](std::uint64_t k) { return report.valuations[k - 1]; };

  for (std::uint64_t k = 1; k <= p - 1; ++k) {
    if (k % 2 == 0 && k <= p - 3 && v(k) < 1) report.failures.push_back({k, v(k), "even k: p | num"});
    if (k % 2 == 1 && k <= p - 4 && v(k) < 2) report.failures.push_back({k, v(k), "odd k: p^2 | num"});
    if (k % 2 == 1 && k <= p - 2 && v(k) != 1 + v(k + 1)) {
      report.failures.push_back({k, v(k), "ladder v(k) = 1 + v(k+1)"});
    }
  }
  if (v(p - 2) < 1) report.failures.push_back({p - 2, v(p - 2), "S(p-1,p-2) == 0 mod p"});
  return report;
}

BayatReport bayat_valuations(std::uint64_t p) { return bayat_valuations(p, sym_rational_row(p - 1)); }

Rational form4_eval(std::uint64_t p, std::uint64_t k, const StirlingTables& tables) {
  require_odd_prime(p, 5);
  if (k % 2 == 0 || k < 1 || k > p - 2) {
    throw Error(ErrorCode::PreconditionViolated, "k must be odd with 1 <= k <= p-2");
  }
  ensure_dimension(tables, 2 * k);
  Natural rising = 1;  // (p+2)(p+3)...(p+1+k)
  for (std::uint64_t i = 2; i <= k + 1; ++i) rising *= detail::from_u64(p + i);

  Rational sum = 0;
  for (std::uint64_t j = 0; j <= k; ++j) {
    const Integer weight = sign(j + 1) * binomial_exact(2 * k, k + j) * tables.second(j + k, j);
    if (weight == 0) continue;
    sum += Rational(weight) * make_rational(rising, detail::from_u64(p + 1 + j));
  }
  const Rational scale = make_rational(detail::from_u64(p + 1),
                                       factorial_exact(2 * k) * factorial_exact(p - k));
  return scale * sum;
}

Rational form4_eval(std::uint64_t p, std::uint64_t k) {
  return form4_eval(p, k, StirlingTables(2 * k));
}

bool s_pm_mod_p(std::uint64_t p, const SymRationalTable& row) {
  require_odd_prime(p, 5);
  if (row.n != p) throw Error(ErrorCode::PreconditionViolated, "expects row p");
  const Natural pp = detail::from_u64(p);
  for (std::uint64_t m = 2; m + 3 <= p; m += 2) {
    const Rational& s = row.entries[m];
    if (mpz_divisible_p(s.get_den_mpz_t(), pp.get_mpz_t())) return false;
    if (num_valuation(s, pp) < 1) return false;
  }
  return true;
}

bool s_pm_mod_p(std::uint64_t p) { return s_pm_mod_p(p, sym_rational_row(p)); }

}  // namespace wolst
