#include "wolst/verify.hpp"

#include <optional>

#include "wolst/arith.hpp"
#include "wolst/congruence.hpp"
#include "wolst/error.hpp"
#include "wolst/modring.hpp"
#include "wolst/search.hpp"
#include "wolst/symmetric.hpp"
#include "wolst/wpoly.hpp"

namespace wolst::verify {
namespace {

using Violations = std::vector<Json>;

std::string str(std::uint64_t x) { return std::to_string(x); }

Json violation(const std::string& subject, const std::string& detail) {
  return Json{{"subject", subject}, {"detail", detail}};
}

Natural pow_ui(std::uint64_t base, unsigned e) {
  Natural out;
  mpz_ui_pow_ui(out.get_mpz_t(), base, e);
  return out;
}

// Evaluates fn per subject on the worker pool and concatenates the
// violations in subject order.
template <class Fn>
void per_subject(SuiteOutcome& out, const std::vector<std::uint64_t>& subjects, unsigned threads,
                 Fn&& fn) {
  std::vector<Violations> found(subjects.size());
  search::parallel_for(subjects.size(), threads, [&](std::size_t i) {
    try {
      fn(subjects[i], found[i]);
    } catch (const Error& e) {
      found[i].push_back(violation(str(subjects[i]), e.what()));
    }
  });
  for (auto& group : found) {
    for (auto& v : group) out.violations.push_back(std::move(v));
  }
  out.checked += subjects.size();
}

std::vector<std::uint64_t> range(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = lo; n <= hi; ++n) out.push_back(n);
  return out;
}

void suite_equ(SuiteOutcome& out, unsigned threads) {
  per_subject(out, range(2, out.bound), threads, [](std::uint64_t n, Violations& v) {
    if (!wilson_restatement_check(n)) v.push_back(violation(str(n), "(2n-1)!/n! != (n-1)! mod n"));
  });
}

void suite_rel(SuiteOutcome& out, unsigned threads) {
  std::vector<Rational> table(out.bound + 1);
  search::parallel_for(out.bound, threads, [&](std::size_t i) { table[i + 1] = wprime_exact(i + 1); });
  per_subject(out, range(1, out.bound), threads, [&](std::uint64_t n, Violations& v) {
    if (!divisor_product_check(n, table)) v.push_back(violation(str(n), "w_n != prod w'_d"));
  });
}

void suite_wilson(SuiteOutcome& out, unsigned threads) {
  per_subject(out, range(2, out.bound), threads, [](std::uint64_t n, Violations& v) {
    if (wilson_residue(n, Level::first).holds != is_prime(n)) {
      v.push_back(violation(str(n), "Wilson criterion disagrees with primality"));
    }
  });
}

void suite_wolstenholme(SuiteOutcome& out, unsigned threads) {
  per_subject(out, primes_in(3, out.bound), threads, [](std::uint64_t p, Violations& v) {
    if (w_mod(p, pow_ui(p, 2)).value != 1) v.push_back(violation(str(p), "w_p != 1 mod p^2"));
    if (p >= 5 && !jones_check(p).holds) v.push_back(violation(str(p), "w_p != 1 mod p^3"));
  });
}

void suite_squares(SuiteOutcome& out, unsigned threads) {
  per_subject(out, primes_in(3, out.bound), threads, [](std::uint64_t p, Violations& v) {
    const std::uint64_t square = p * p;
    if (w_mod(square, detail::from_u64(square)).value != 1) {
      v.push_back(violation(str(p), "w_{p^2} != 1 mod p^2"));
    }
    if (p >= 5 && p <= 31) {
      const std::uint64_t cube = square * p;
      if (w_mod(cube, detail::from_u64(cube)).value != 1) {
        v.push_back(violation(str(p), "w_{p^3} != 1 mod p^3"));
      }
    }
  });
}

void suite_jones_composite(SuiteOutcome& out, unsigned threads) {
  std::vector<std::uint64_t> composites;
  for (std::uint64_t n = 4; n <= out.bound; ++n) {
    if (!is_prime(n)) composites.push_back(n);
  }
  per_subject(out, composites, threads, [](std::uint64_t n, Violations& v) {
    if (jones_check(n).holds) v.push_back(violation(str(n), "composite satisfies w_n == 1 mod n^3"));
  });
}

void suite_mcintosh(SuiteOutcome& out, unsigned threads) {
  per_subject(out, range(2, out.bound), threads, [](std::uint64_t n, Violations& v) {
    const McIntoshVerdict m = mcintosh_check(n);
    // No square of a Wolstenholme prime lies in desk range.
    const bool expected = n % 2 == 1 && is_prime(n);
    if (m.verdict.holds != expected) {
      v.push_back(violation(str(n), "w_n == 1 mod n^2 is " + std::string(m.verdict.holds ? "true" : "false")));
    }
  });
}

void suite_pairs(SuiteOutcome& out, unsigned threads) {
  const std::vector<std::uint64_t> ps = primes_in(5, out.bound);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
  for (std::uint64_t p : ps) {
    for (std::uint64_t q : ps) {
      if (p < q && p * q <= 10'000) pairs.emplace_back(p, q);
    }
  }
  std::vector<Violations> found(pairs.size());
  search::parallel_for(pairs.size(), threads, [&](std::size_t i) {
    const auto [p, q] = pairs[i];
    for (unsigned e = 1; e <= 3; ++e) {
      const Level level = level_from(e);
      if (pair_direct_check(p, q, level) != pair_criterion(p, q, level).combined) {
        found[i].push_back(violation(str(p) + "," + str(q), "criterion and direct check disagree at e = " + str(e)));
      }
    }
  });
  for (auto& group : found) {
    for (auto& v : group) out.violations.push_back(std::move(v));
  }
  out.checked += pairs.size();
}

void suite_bands(SuiteOutcome& out, unsigned threads) {
  per_subject(out, primes_in(5, out.bound), threads, [](std::uint64_t p, Violations& v) {
    for (const FactorBand& band : factor_band_classify(p)) {
      if (band.predicted_divides != band.actual_divides) {
        v.push_back(violation(str(p), "band n = " + str(band.n) + ", q = " + str(band.q)));
      }
    }
  });
}

// Walks rows S(n, .) for n = 0..bound+1 and hands each one to fn.
template <class Fn>
void walk_rows(std::uint64_t last, Fn&& fn) {
  SymRationalTable row = sym_rational_row(0);
  for (;;) {
    fn(row);
    if (row.n >= last) break;
    row = next_row(row);
  }
}

void suite_form(SuiteOutcome& out) {
  walk_rows(out.bound, [&](const SymRationalTable& row) {
    const std::uint64_t p = row.n + 1;
    if (p < 3 || p > out.bound || !is_prime(p)) return;
    ++out.checked;
    if (!check_form(p, row)) out.violations.push_back(violation(str(p), "sum p^k S(p-1,k) != w_p"));
  });
}

void suite_fra(SuiteOutcome& out) {
  walk_rows(out.bound, [&](const SymRationalTable& row) {
    const std::uint64_t p = row.n + 1;
    if (p < 5 || p > out.bound || !is_prime(p)) return;
    ++out.checked;
    const BayatReport report = bayat_valuations(p, row);
    for (const ValuationFailure& f : report.failures) {
      out.violations.push_back(violation(str(p), std::string(f.clause) + " at k = " + str(f.k) +
                                                     " (valuation " + str(f.observed) + ")"));
    }
  });
}

void suite_int(SuiteOutcome& out) {
  walk_rows(out.bound, [&](const SymRationalTable& row) {
    const std::uint64_t p = row.n;
    if (p < 5 || !is_prime(p)) return;
    ++out.checked;
    if (!check_int_expansion(p, row)) out.violations.push_back(violation(str(p), "(w_p-1)/p^3 expansion"));
  });
}

void suite_spm(SuiteOutcome& out) {
  walk_rows(out.bound, [&](const SymRationalTable& row) {
    const std::uint64_t p = row.n;
    if (p < 5 || !is_prime(p)) return;
    ++out.checked;
    if (!s_pm_mod_p(p, row)) out.violations.push_back(violation(str(p), "S(p,m) not 0 mod p"));
  });
}

void suite_form2(SuiteOutcome& out) {
  IntSymTable p_row = perm_sym_row(0);
  walk_rows(out.bound, [&](const SymRationalTable& row) {
    if (row.n > p_row.n) p_row = next_row(p_row);
    if (row.n < 1) return;
    ++out.checked;
    if (!check_form2(row, p_row)) out.violations.push_back(violation(str(row.n), "S(n,n-k) != P(n,k)/n!"));
  });
}

void suite_sp(SuiteOutcome& out, unsigned threads) {
  const StirlingTables tables(out.bound + 1);
  per_subject(out, range(1, out.bound), threads, [&](std::uint64_t n, Violations& v) {
    if (!check_sP_relation(n, tables)) v.push_back(violation(str(n), "P(n,k) != (-1)^k s(n+1,n+1-k)"));
  });
}

void suite_stirling(SuiteOutcome& out, unsigned threads) {
  const StirlingTables tables(out.bound);
  per_subject(out, range(0, out.bound), threads, [&](std::uint64_t n, Violations& v) {
    if (!tables.check_characterizations(n)) v.push_back(violation(str(n), "characterization fails"));
  });
}

void suite_form3(SuiteOutcome& out, unsigned threads) {
  const StirlingTables tables(2 * out.bound);
  per_subject(out, range(1, out.bound), threads, [&](std::uint64_t n, Violations& v) {
    for (std::uint64_t k = 0; k < n; ++k) {
      if (stirling1_via_form3(n, k, tables) != tables.first(n, n - k)) {
        v.push_back(violation(str(n), "s(n,n-k) mismatch at k = " + str(k)));
      }
    }
  });
}

void suite_ident(SuiteOutcome& out, unsigned threads) {
  const StirlingTables tables(2 * out.bound);
  per_subject(out, range(1, out.bound), threads, [&](std::uint64_t k, Violations& v) {
    if (!ident_doublefact(k, tables)) v.push_back(violation(str(k), "(2k-1)!! identity fails"));
  });
}

void suite_form4(SuiteOutcome& out, unsigned threads) {
  const StirlingTables tables(2 * out.bound);
  per_subject(out, primes_in(5, out.bound), threads, [&](std::uint64_t p, Violations& v) {
    const SymRationalTable row = sym_rational_row(p);
    for (std::uint64_t k = 1; k <= p - 2; k += 2) {
      if (form4_eval(p, k, tables) != row.at(p - k)) {
        v.push_back(violation(str(p), "closed form of S(p,p-k) fails at k = " + str(k)));
      }
    }
  });
}

void suite_wpoly(SuiteOutcome& out, unsigned threads) {
  const std::vector<std::uint64_t> ps = primes_in(5, out.bound);
  const std::vector<std::uint64_t> qs = primes_in(2, 100'000);
  std::vector<Json> profiles(ps.size());
  std::vector<Violations> found(ps.size());
  search::parallel_for(ps.size(), threads, [&](std::size_t i) {
    const std::uint64_t p = ps[i];
    Violations& v = found[i];
    try {
      const IntPoly w = construct_W(p);
      const WReport report = verify_W(p, w);
      for (const std::string& f : report.failures) v.push_back(violation(str(p), f));
      if (w_value_via_form4(p) != poly_eval(w, detail::from_u64(p))) {
        v.push_back(violation(str(p), "W(p) differs from the closed-form value"));
      }
      const Integer numerator = w_exact(p) - 1;
      const Integer quotient = numerator / pow_ui(p, 3);
      std::uint64_t large_divisors = 0;
      for (std::uint64_t q : qs) {
        if (q <= p) continue;
        const Natural qq = detail::from_u64(q);
        const bool divides = mpz_divisible_p(quotient.get_mpz_t(), qq.get_mpz_t()) != 0;
        if (!divides) continue;
        ++large_divisors;
        large_prime_divisor_check(p, q, w);
      }
      const CoeffProfile profile = coeff_profile(p, w);
      profiles[i] = Json{{"p", str(p)},
                         {"argmax", profile.argmax},
                         {"argmax_is_p_minus_4", profile.argmax_is_p_minus_4},
                         {"alternating", profile.alternating},
                         {"large_prime_divisors_checked", large_divisors}};
    } catch (const Error& e) {
      v.push_back(violation(str(p), e.what()));
    }
  });
  for (auto& group : found) {
    for (auto& v : group) out.violations.push_back(std::move(v));
  }
  out.notes["profiles"] = profiles;
  out.checked += ps.size();
}

void suite_trend(SuiteOutcome& out, unsigned threads) {
  const std::vector<std::uint64_t> ps = primes_in(5, out.bound);
  std::vector<std::vector<TrendRecord>> results(ps.size());
  search::parallel_for(ps.size(), threads, [&](std::size_t i) {
    const std::uint64_t p = ps[i];
    results[i] = trend_scan(p, -10 * static_cast<std::int64_t>(p * p), -1);
  });
  std::uint64_t records = 0;
  std::uint64_t content_explained = 0;
  for (const auto& group : results) {
    for (const TrendRecord& r : group) {
      ++records;
      if (!r.divides_W1) continue;
      if (r.divides_content) ++content_explained;
      out.violations.push_back(Json{{"subject", str(r.p)},
                                    {"detail", "r | W(n) and r | W'(n)"},
                                    {"n", r.n},
                                    {"r", str(r.r)},
                                    {"r_divides_content", r.divides_content}});
    }
  }
  out.checked += ps.size();
  out.notes["records"] = records;
  out.notes["violations"] = out.violations.size();
  out.notes["violations_with_r_dividing_content"] = content_explained;
  out.notes["violations_with_r_not_dividing_content"] = out.violations.size() - content_explained;
}

}  // namespace

const std::vector<SuiteInfo>& suites() {
  static const std::vector<SuiteInfo> all{
      {"equ", 2000, 2, "(2n-1)!/n! == (n-1)! (mod n)"},
      {"rel", 2000, 1, "w_n = product of w'_d over d | n"},
      {"wilson", 2000, 2, "(n-1)! == -1 (mod n) iff n prime"},
      {"wolstenholme", 2000, 3, "w_p == 1 mod p^2 (p >= 3) and mod p^3 (p >= 5)"},
      {"squares", 97, 3, "w_n == 1 (mod n) for n = p^2, and n = p^3 with 5 <= p <= 31"},
      {"jones-composite", 5000, 4, "no composite n has w_n == 1 (mod n^3)"},
      {"mcintosh", 1000, 2, "w_n == 1 (mod n^2) exactly for odd primes"},
      {"pairs", 150, 7, "pair criterion equals direct w_pq check, pq <= 10^4, e = 1..3"},
      {"bands", 500, 5, "parity rule for large prime factors of w_p"},
      {"form", 199, 3, "w_p = sum p^k S(p-1,k)"},
      {"form2", 200, 1, "S(n,n-k) = P(n,k)/n!"},
      {"sp", 200, 1, "P(n,k) = (-1)^k s(n+1,n+1-k)"},
      {"stirling", 60, 0, "Stirling characterizations"},
      {"form3", 60, 1, "s(n,n-k) from second-kind numbers"},
      {"ident", 200, 1, "(2k-1)!! from second-kind numbers"},
      {"int", 199, 5, "(w_p-1)/p^3 as a sum over S(p,m)"},
      {"fra", 199, 5, "p-adic valuations of S(p-1,k) and the ladder"},
      {"spm", 199, 5, "S(p,m) == 0 (mod p) for even m <= p-3"},
      {"form4", 61, 5, "closed form of S(p,p-k)"},
      {"wpoly", 61, 5, "W(p): degree, leading term, a_0, evaluation, large prime divisors"},
      {"trend", 61, 5, "r = p-n prime with r | W(n) never divides W'(n), n in [-10p^2, -1]"},
  };
  return all;
}

const SuiteInfo* find_suite(const std::string& name) {
  for (const SuiteInfo& s : suites()) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

SuiteOutcome run_suite(const std::string& name, std::uint64_t bound, unsigned threads) {
  const SuiteInfo* info = find_suite(name);
  if (info == nullptr) throw Error(ErrorCode::PreconditionViolated, "unknown suite " + name);
  if (bound < info->min_bound) {
    throw Error(ErrorCode::PreconditionViolated,
                "suite " + name + " needs bound >= " + std::to_string(info->min_bound));
  }
  SuiteOutcome out;
  out.suite = name;
  out.bound = bound;
  if (name == "equ") suite_equ(out, threads);
  else if (name == "rel") suite_rel(out, threads);
  else if (name == "wilson") suite_wilson(out, threads);
  else if (name == "wolstenholme") suite_wolstenholme(out, threads);
  else if (name == "squares") suite_squares(out, threads);
  else if (name == "jones-composite") suite_jones_composite(out, threads);
  else if (name == "mcintosh") suite_mcintosh(out, threads);
  else if (name == "pairs") suite_pairs(out, threads);
  else if (name == "bands") suite_bands(out, threads);
  else if (name == "form") suite_form(out);
  else if (name == "form2") suite_form2(out);
  else if (name == "sp") suite_sp(out, threads);
  else if (name == "stirling") suite_stirling(out, threads);
  else if (name == "form3") suite_form3(out, threads);
  else if (name == "ident") suite_ident(out, threads);
  else if (name == "int") suite_int(out);
  else if (name == "fra") suite_fra(out);
  else if (name == "spm") suite_spm(out);
  else if (name == "form4") suite_form4(out, threads);
  else if (name == "wpoly") suite_wpoly(out, threads);
  else if (name == "trend") suite_trend(out, threads);
  return out;
}

}  // namespace wolst::verify
