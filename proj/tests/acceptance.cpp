// Acceptance run: one PASS/FAIL line per criterion. --stretch enables the
// long-running cases (third published pair, scan through 16843, w'_{16843^2}).

#include <gmpxx.h>

#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "wolst/arith.hpp"
#include "wolst/congruence.hpp"
#include "wolst/error.hpp"
#include "wolst/search.hpp"
#include "wolst/verify.hpp"
#include "wolst/wpoly.hpp"

using namespace wolst;
namespace fs = std::filesystem;
using Json = search::Json;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back("violated: " + what);
    }
  }
  void note(const std::string& text) { notes.push_back(text); }
};

Natural pow_ui(std::uint64_t b, unsigned e) {
  Natural r;
  mpz_ui_pow_ui(r.get_mpz_t(), b, e);
  return r;
}

std::string join(const std::vector<std::uint64_t>& xs) {
  std::string s = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + std::to_string(xs[i]);
  return s + "]";
}

void require_suite(Outcome& out, const std::string& suite, std::uint64_t bound) {
  const verify::SuiteOutcome r = verify::run_suite(suite, bound);
  out.require(r.ok(), suite + " up to " + std::to_string(bound) + " (" + std::to_string(r.violations.size()) +
                          " violations" + (r.violations.empty() ? "" : ", first " + r.violations.front().dump()) +
                          ")");
  out.note(suite + ": " + std::to_string(r.checked) + " cases up to " + std::to_string(bound));
}

// ---------------------------------------------------------------------------

Outcome wolstenholme_babbage(bool) {
  Outcome out;
  std::uint64_t cubes = 0;
  std::uint64_t squares = 0;
  for (std::uint64_t p : primes_in(3, 2000)) {
    const Natural p2 = pow_ui(p, 2);
    out.require(w_mod(p, p2).value == 1, "w_p == 1 mod p^2 at p=" + std::to_string(p));
    ++squares;
    if (p >= 5) {
      out.require(jones_check(p).holds, "w_p == 1 mod p^3 at p=" + std::to_string(p));
      ++cubes;
    }
  }
  // exact reduction on the lower part of the range
  for (std::uint64_t p : primes_in(5, 400)) {
    out.require(w_exact(p) % pow_ui(p, 3) == 1, "exact w_p mod p^3 at p=" + std::to_string(p));
  }
  out.note(std::to_string(cubes) + " primes mod p^3, " + std::to_string(squares) + " primes mod p^2");
  return out;
}

Outcome wilson(bool) {
  Outcome out;
  const auto primes = search::subjects_of(search::scan_wilson(1000));
  out.require(primes == std::vector<std::uint64_t>{5, 13, 563}, "Wilson primes up to 1000 = " + join(primes));
  for (std::uint64_t n = 2; n <= 2000; ++n) {
    out.require(wilson_residue(n, Level::first).holds == is_prime(n), "Wilson converse at n=" + std::to_string(n));
  }
  const auto cube = search::scan_wilson_cube(5000);
  out.require(cube.empty(), "no n <= 5000 with (n-1)! == -1 mod n^3, got " + join(search::subjects_of(cube)));
  out.note("Wilson primes <= 1000: " + join(primes));
  return out;
}

Outcome jones(bool) {
  Outcome out;
  const auto records = search::scan_jones(5000);
  const auto hits = search::subjects_of(records);
  out.require(hits == primes_in(5, 5000), "hits of w_n == 1 mod n^3 equal the primes in [5, 5000]");
  for (const auto& r : records) out.require(r.verdict == search::Verdict::hit, "record " + search::to_jsonl(r));
  out.note(std::to_string(hits.size()) + " hits, all prime");
  return out;
}

Outcome known_pairs(bool stretch) {
  Outcome out;
  out.require(pair_criterion(29, 937, Level::first).combined, "(29, 937) combined");
  out.require(pair_criterion(787, 2543, Level::first).combined, "(787, 2543) combined");
  out.require(pair_direct_check(29, 937, Level::first), "w_27173 == 1 mod 27173 by exact binomial");
  if (stretch) {
    const auto t0 = std::chrono::steady_clock::now();
    out.require(pair_criterion(69239, 231433, Level::first).combined, "(69239, 231433) combined");
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.note("third pair checked in " + std::to_string(s) + " s");
  } else {
    out.note("third pair skipped (run with --stretch)");
  }
  return out;
}

Outcome wolstenholme_primes(bool stretch) {
  Outcome out;
  const auto low = search::subjects_of(search::scan_wolstenholme_primes(1000));
  out.require(low.empty(), "no Wolstenholme prime below 1000, got " + join(low));
  if (stretch) {
    const auto hits = search::subjects_of(search::scan_wolstenholme_primes(16843));
    out.require(hits == std::vector<std::uint64_t>{16843}, "scan to 16843 = " + join(hits));
    const auto t0 = std::chrono::steady_clock::now();
    const std::uint64_t n = 16843ULL * 16843ULL;
    const ResidueClass r = wprime_mod(n, Natural(pow_ui(n, 2)));
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.require(r.value == 1, "w'_n == 1 mod n^2 at n = 16843^2 (residue " + decimal(r.value) + ")");
    out.note("w'_{16843^2} mod n^2 = " + decimal(r.value) + " in " + std::to_string(s) + " s");
  } else {
    out.note("scan through 16843 skipped (run with --stretch)");
  }
  return out;
}

Outcome identities(bool) {
  Outcome out;
  require_suite(out, "equ", 2000);
  require_suite(out, "rel", 2000);
  require_suite(out, "form", 199);
  require_suite(out, "int", 199);
  require_suite(out, "fra", 199);
  require_suite(out, "spm", 199);
  require_suite(out, "form2", 200);
  require_suite(out, "sp", 200);
  require_suite(out, "form3", 60);
  require_suite(out, "ident", 200);
  require_suite(out, "form4", 61);
  return out;
}

Outcome polynomial(bool) {
  Outcome out;
  require_suite(out, "wpoly", 61);
  for (std::uint64_t p : primes_in(5, 61)) {
    const IntPoly w = construct_W(p);
    const Integer lhs = poly_eval(w, p) * static_cast<unsigned long>(p + 1) * pow_ui(p, 3);
    const Integer rhs = (w_exact(p) - 1) * factorial_exact(2 * p - 4) * factorial_exact(p - 1);
    out.require(lhs == rhs, "evaluation identity at p=" + std::to_string(p));
    out.require(w.degree() == static_cast<long>(2 * p - 7), "degree 2p-7 at p=" + std::to_string(p));
    out.require(w.leading() == double_factorial(2 * p - 5), "leading (2p-5)!! at p=" + std::to_string(p));
    out.require(mpz_divisible_p(w.coeff(0).get_mpz_t(), factorial_exact(p - 3).get_mpz_t()) != 0,
                "(p-3)! | a_0 at p=" + std::to_string(p));
  }
  const IntPoly w5 = construct_W(5);
  out.require(w5 == IntPoly{30, 345, -30, 15}, "W(5) coefficients " + w5.to_string());
  out.require(poly_eval(w5, 5) == 2880, "W(5) at 5 = 2880");
  // (w_5 - 1) (2p-4)! (p-1)! / ((p+1) p^3) with w_5 = 126
  out.require(Integer(125) * 720 * 24 == Integer(2880) * 6 * 125, "W(5) value from w_5 = 126");
  return out;
}

Outcome trend(bool) {
  Outcome out;
  const verify::SuiteOutcome r = verify::run_suite("trend", 61);
  out.require(r.ok(), "no r = p-n with r | W(n) and r | W'(n), primes 5..61, n in [-10p^2, -1]: " +
                          std::to_string(r.violations.size()) + " records with r | W'(n)");
  out.note("records: " + r.notes.value("records", Json()).dump() +
           ", with r | W'(n): " + r.notes.value("violations", Json()).dump());
  out.note("of those, r divides every coefficient of W: " +
           r.notes.value("violations_with_r_dividing_content", Json()).dump() +
           "; r coprime to the content of W: " +
           r.notes.value("violations_with_r_not_dividing_content", Json()).dump());
  std::vector<std::string> firsts;
  for (std::size_t i = 0; i < r.violations.size() && i < 4; ++i) firsts.push_back(r.violations[i].dump());
  for (const auto& f : firsts) out.note("e.g. " + f);
  return out;
}

Outcome new_conjecture(bool) {
  Outcome out;
  const auto records = search::scan_new_conjecture(2000, 100000);
  std::vector<Json> docs;
  bool has_13_3 = false;
  for (const auto& r : records) {
    docs.push_back(Json::parse(search::to_jsonl(r)));
    if (r.subject == Json("13") && r.witness.value("q", "") == "3") has_13_3 = true;
    out.require(r.verdict == search::Verdict::hit, "q < p on " + search::to_jsonl(r));
  }
  const auto report = search::new_conjecture_report(docs);
  out.require(report.violations == 0, "hits with q > p: " + std::to_string(report.violations));
  out.require(has_13_3, "hit (13, 3) present");
  std::ostringstream s;
  s << "hits " << report.hits << ", max q/p " << report.max_q_over_p << ", min p/q " << report.min_p_over_q;
  out.note(s.str());
  return out;
}

Outcome oracles(bool) {
  Outcome out;
  // binomial_mod against exact reduction: every modulus up to 10^4 on a seeded (n, k) sample,
  // and every (n, k) with n <= 300 for a set of structured moduli
  std::vector<std::vector<Natural>> pascal(301);
  for (std::uint64_t n = 0; n <= 300; ++n) {
    pascal[n].assign(n + 1, 1);
    for (std::uint64_t k = 1; k < n; ++k) pascal[n][k] = pascal[n - 1][k - 1] + pascal[n - 1][k];
  }
  std::mt19937_64 rng(12);
  std::uint64_t grid = 0;
  for (unsigned m = 2; m <= 10000; ++m) {
    for (int i = 0; i < 12; ++i) {
      const std::uint64_t n = rng() % 301;
      const std::uint64_t k = rng() % (n + 1);
      if (binomial_mod(n, k, m).value != pascal[n][k] % m) {
        out.require(false, "C(" + std::to_string(n) + "," + std::to_string(k) + ") mod " + std::to_string(m));
      }
      ++grid;
    }
  }
  for (unsigned m : {2U, 4U, 8U, 64U, 1024U, 9U, 27U, 243U, 125U, 625U, 343U, 2401U, 121U, 169U, 6U, 30U, 210U,
                     2310U, 9973U, 9991U, 10000U, 7776U, 5040U, 3600U, 8192U, 6561U}) {
    for (std::uint64_t n = 0; n <= 300; ++n) {
      for (std::uint64_t k = 0; k <= n; ++k) {
        if (binomial_mod(n, k, m).value != pascal[n][k] % m) {
          out.require(false, "C(" + std::to_string(n) + "," + std::to_string(k) + ") mod " + std::to_string(m));
        }
        ++grid;
      }
    }
  }
  out.note(std::to_string(grid) + " binomial residues");

  // factorial_unit reconstruction for n <= 2000, primes q <= 50, e <= 3
  const auto small_primes = primes_in(2, 50);
  Natural f = 1;
  std::uint64_t units = 0;
  for (std::uint64_t n = 0; n <= 2000; ++n) {
    if (n > 0) f *= static_cast<unsigned long>(n);
    for (std::uint64_t q : small_primes) {
      const std::uint64_t v = legendre_valuation(n, q);
      for (unsigned e = 1; e <= 3; ++e) {
        const FactorialUnit u = factorial_unit(n, q, e);
        const Natural qv = pow_ui(q, static_cast<unsigned>(v));
        const Natural m = qv * pow_ui(q, e);
        const bool ok = u.valuation == v && (qv * u.unit.value) % m == f % m && u.unit.value % q != 0;
        if (!ok) out.require(false, "factorial_unit(" + std::to_string(n) + "," + std::to_string(q) + "," +
                                        std::to_string(e) + ")");
        ++units;
      }
    }
  }
  out.note(std::to_string(units) + " factorial reconstructions");

  // Kummer carries against valuations of exact binomials, n <= 500
  std::uint64_t kummer = 0;
  for (std::uint64_t n = 0; n <= 500; ++n) {
    for (std::uint64_t k = 0; k <= n; ++k) {
      const Natural c = binomial_exact(n, k);
      for (std::uint64_t q : {2, 3, 5, 7, 11, 13}) {
        if (kummer_carries(k, n - k, q) != valuation(c, q)) {
          out.require(false, "carries of C(" + std::to_string(n) + "," + std::to_string(k) + ") at " +
                                 std::to_string(q));
        }
        ++kummer;
      }
    }
  }
  out.note(std::to_string(kummer) + " carry counts");

  require_suite(out, "pairs", 150);
  return out;
}

Outcome bands(bool) {
  Outcome out;
  require_suite(out, "bands", 500);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism(bool) {
  Outcome out;
  const fs::path dir = fs::temp_directory_path() / ("wolst_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::vector<search::ScanPlan> plans{search::plan_wilson(5000),          search::plan_wilson_cube(1500),
                                      search::plan_jones(1500),           search::plan_wolstenholme_primes(3000),
                                      search::plan_mod5(1200),            search::plan_new_conjecture(600, 20000),
                                      search::plan_pair_units(primes_in(5, 60), primes_in(5, 60)),
                                      search::plan_known_pairs(false)};
  std::mt19937_64 rng(7);
  std::uint64_t resumes = 0;
  for (const auto& plan : plans) {
    const fs::path ref = dir / "ref.out";
    search::RunOptions base;
    base.chunk_size = 1 + rng() % 20;
    search::run_scan_to_file(plan, ref, base);
    const std::string expected = slurp(ref);

    const std::size_t chunks = (plan.subject_count + base.chunk_size - 1) / base.chunk_size;
    for (int attempt = 0; attempt < 3; ++attempt) {
      const fs::path part = dir / "part.out";
      const fs::path ckpt = dir / "part.ckpt";
      fs::remove(part);
      fs::remove(ckpt);
      search::RunOptions opts = base;
      opts.checkpoint = ckpt;
      opts.threads = 1 + rng() % 4;
      // interrupt repeatedly at random chunk counts
      while (true) {
        opts.stop_after_chunks = 1 + rng() % std::max<std::size_t>(1, chunks / 2);
        const auto summary = search::run_scan_to_file(plan, part, opts);
        ++resumes;
        if (summary.completed) break;
        std::ofstream(part, std::ios::app) << "{\"torn\":";
      }
      if (slurp(part) != expected) out.require(false, "resumed " + plan.name + " differs from uninterrupted run");
    }
  }
  fs::remove_all(dir);
  out.note(std::to_string(plans.size()) + " scans, " + std::to_string(resumes) + " partial runs");
  return out;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome(bool)> run;
};

}  // namespace

int main(int argc, char** argv) {
  bool stretch = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--stretch") == 0) {
      stretch = true;
    } else {
      std::cerr << "usage: acceptance [--stretch]\n";
      return 2;
    }
  }

  const std::vector<Criterion> criteria{
      {1, "wolstenholme-babbage", wolstenholme_babbage},
      {2, "wilson", wilson},
      {3, "jones", jones},
      {4, "known-pairs", known_pairs},
      {5, "wolstenholme-primes", wolstenholme_primes},
      {6, "identity-suites", identities},
      {7, "wolstenholme-polynomial", polynomial},
      {8, "trend", trend},
      {9, "new-conjecture", new_conjecture},
      {10, "oracle-equivalences", oracles},
      {11, "factor-bands", bands},
      {12, "determinism", determinism},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run(stretch);
    } catch (const std::exception& e) {
      o.pass = false;
      o.notes.push_back(std::string("exception: ") + e.what());
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (o.pass ? "PASS" : "FAIL") << ' ' << c.id << ' ' << c.name << " (" << s << " s)\n";
    std::size_t shown = 0;
    for (const auto& n : o.notes) {
      if (++shown > 12) {
        std::cout << "    ... " << (o.notes.size() - 12) << " more\n";
        break;
      }
      std::cout << "    " << n << '\n';
    }
    std::cout.flush();
    if (!o.pass) ++failed;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
            << (stretch ? " (stretch)" : "") << '\n';
  return failed == 0 ? 0 : 1;
}
