// wolst: verification suites, resumable scans and W(p) export.
//
// Exit codes: 0 success, 1 a mathematical expectation was violated,
// 2 usage or configuration error. Records go to stdout (or --out);
// progress and timing go to stderr.

#include <CLI11.hpp>
#include <gmpxx.h>

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "wolst/arith.hpp"
#include "wolst/congruence.hpp"
#include "wolst/error.hpp"
#include "wolst/search.hpp"
#include "wolst/verify.hpp"
#include "wolst/wpoly.hpp"

namespace {

using wolst::search::Json;

constexpr int kOk = 0;
constexpr int kViolated = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numeric arguments are taken as decimal strings of any length and then
// narrowed to the word size the computation supports.
std::uint64_t parse_natural(const std::string& text, const std::string& what) {
  mpz_class value;
  if (text.empty() || value.set_str(text, 10) != 0 || value < 0) {
    throw UsageError(what + ": not a nonnegative decimal integer: '" + text + "'");
  }
  if (mpz_sizeinbase(value.get_mpz_t(), 2) > 63) {
    throw UsageError(what + ": " + text + " exceeds the supported range (< 2^63)");
  }
  return value.get_ui();
}

std::vector<std::uint64_t> parse_list(const std::string& text, const std::string& what) {
  std::vector<std::uint64_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_natural(item, what));
  return out;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string suite;
  std::string bound;
  unsigned threads = 1;
};

int cmd_verify(const VerifyArgs& args) {
  const wolst::verify::SuiteInfo* info = wolst::verify::find_suite(args.suite);
  if (info == nullptr) {
    std::ostringstream usage;
    usage << "unknown suite '" << args.suite << "'; available:";
    for (const auto& s : wolst::verify::suites()) usage << "\n  " << s.name << "  " << s.description;
    throw UsageError(usage.str());
  }
  const std::uint64_t bound = args.bound.empty() ? info->default_bound : parse_natural(args.bound, "--bound");
  if (bound < info->min_bound) {
    throw UsageError("--bound for " + info->name + " must be >= " + std::to_string(info->min_bound));
  }
  Stopwatch clock;
  const auto outcome = wolst::verify::run_suite(info->name, bound, args.threads);
  for (const Json& v : outcome.violations) {
    Json line{{"suite", outcome.suite}};
    for (const auto& [key, value] : v.items()) line[key] = value;
    std::cout << line.dump() << '\n';
  }
  std::cerr << "verify " << outcome.suite << " bound=" << bound << " checked=" << outcome.checked
            << " violations=" << outcome.violations.size() << " (" << clock.seconds() << " s)\n";
  if (!outcome.notes.empty()) std::cerr << outcome.notes.dump() << '\n';
  return outcome.ok() ? kOk : kViolated;
}

// ---------------------------------------------------------------------------

struct ScanArgs {
  std::string name;
  std::string limit;
  std::string start;
  std::string p_max;
  std::string q_max;
  std::string p_set;
  std::string q_set;
  bool known = false;
  bool stretch = false;
  std::string checkpoint;
  std::string out;
  std::string format = "jsonl";
  unsigned threads = 1;
  std::size_t chunk = 64;
  std::size_t stop_after_chunks = 0;
};

std::uint64_t required(const std::string& text, const std::string& flag, const std::string& scan) {
  if (text.empty()) throw UsageError("scan " + scan + " requires " + flag);
  return parse_natural(text, flag);
}

constexpr std::uint64_t kStretchLimit = 10'000;

wolst::search::ScanPlan make_plan(const ScanArgs& a) {
  namespace s = wolst::search;
  const auto limit_at_least = [&](std::uint64_t floor) {
    const std::uint64_t limit = required(a.limit, "--limit", a.name);
    if (limit < floor) throw UsageError("--limit must be >= " + std::to_string(floor));
    return limit;
  };
  if (a.name == "wilson") return s::plan_wilson(limit_at_least(2));
  if (a.name == "wilson-cube") return s::plan_wilson_cube(limit_at_least(2));
  if (a.name == "jones") return s::plan_jones(limit_at_least(4));
  if (a.name == "wolstenholme-primes") {
    const std::uint64_t limit = limit_at_least(5);
    if (limit > kStretchLimit && !a.stretch) {
      throw UsageError("wolstenholme-primes beyond " + std::to_string(kStretchLimit) + " needs --stretch");
    }
    const std::uint64_t start = a.start.empty() ? 5 : parse_natural(a.start, "--start");
    return s::plan_wolstenholme_primes(limit, start);
  }
  if (a.name == "mod5") {
    const std::uint64_t limit = limit_at_least(5);
    const std::uint64_t start = a.start.empty() ? 5 : parse_natural(a.start, "--start");
    return s::plan_mod5(limit, start);
  }
  if (a.name == "new-conjecture") {
    const std::uint64_t p_max = required(a.p_max, "--p-max", a.name);
    if (p_max < 5) throw UsageError("--p-max must be >= 5");
    return s::plan_new_conjecture(p_max, required(a.q_max, "--q-max", a.name));
  }
  if (a.name == "pairs") {
    if (a.known) return s::plan_known_pairs(a.stretch);
    std::vector<std::uint64_t> ps;
    std::vector<std::uint64_t> qs;
    if (!a.p_set.empty() || !a.q_set.empty()) {
      ps = parse_list(a.p_set, "--p-set");
      qs = a.q_set.empty() ? ps : parse_list(a.q_set, "--q-set");
    } else {
      ps = wolst::primes_in(5, limit_at_least(5));
      qs = ps;
    }
    for (std::uint64_t x : ps) {
      if (x < 5 || !wolst::is_prime(x)) throw UsageError("pair sets must hold primes >= 5");
    }
    for (std::uint64_t x : qs) {
      if (x < 5 || !wolst::is_prime(x)) throw UsageError("pair sets must hold primes >= 5");
    }
    return s::plan_pair_units(ps, qs);
  }
  throw UsageError("unknown scan '" + a.name +
                   "'; available: wilson, wilson-cube, jones, wolstenholme-primes, mod5, new-conjecture, pairs");
}

int cmd_scan(const ScanArgs& a) {
  namespace s = wolst::search;
  const s::ScanPlan plan = make_plan(a);
  s::RunOptions options;
  options.threads = std::max(1U, a.threads);
  options.chunk_size = std::max<std::size_t>(1, a.chunk);
  if (!a.checkpoint.empty()) options.checkpoint = a.checkpoint;
  if (a.format == "csv") options.format = s::OutputFormat::csv;
  else if (a.format != "jsonl") throw UsageError("--format must be jsonl or csv");
  if (a.stop_after_chunks > 0) options.stop_after_chunks = a.stop_after_chunks;

  Stopwatch clock;
  s::RunSummary summary;
  if (a.out.empty()) {
    summary = s::run_scan(plan, std::cout, options);
  } else {
    summary = s::run_scan_to_file(plan, a.out, options);
  }
  std::cerr << "scan " << plan.name << " subjects=" << summary.next_index << "/" << plan.subject_count
            << " records=" << summary.records << " hits=" << summary.hits << " failures=" << summary.failures
            << (summary.completed ? "" : " (stopped early, resume with the same --checkpoint)") << " ("
            << clock.seconds() << " s)\n";
  if (plan.name == "new-conjecture" && summary.completed && !a.out.empty()) {
    std::ifstream in(a.out);
    std::vector<Json> records;
    for (std::string line; std::getline(in, line);) {
      if (!line.empty() && line.front() == '{') records.push_back(Json::parse(line));
    }
    const auto report = s::new_conjecture_report(records);
    std::cerr << "new-conjecture hits=" << report.hits << " q>p=" << report.violations
              << " max q/p=" << report.max_q_over_p << " min p/q=" << report.min_p_over_q << '\n';
  }
  return summary.failures == 0 ? kOk : kViolated;
}

// ---------------------------------------------------------------------------

int cmd_wpoly(const std::string& p_text, const std::string& out_path) {
  const std::uint64_t p = parse_natural(p_text, "p");
  if (p < 5 || !wolst::is_prime(p)) throw UsageError("p must be a prime >= 5");
  const wolst::IntPoly w = wolst::construct_W(p);
  const std::string doc = wolst::w_to_json(p, w);
  if (out_path.empty()) {
    std::cout << doc << '\n';
  } else {
    std::ofstream out(out_path);
    out << doc << '\n';
    if (!out) throw UsageError("cannot write " + out_path);
  }
  const wolst::WReport report = wolst::verify_W(p, w);
  std::cerr << "W(" << p << "): degree " << report.degree << ", degree 2p-7 " << (report.degree_ok ? "ok" : "FAIL")
            << ", leading (2p-5)!! " << (report.leading_ok ? "ok" : "FAIL") << ", (p-3)! | a_0 "
            << (report.constant_divisible ? "ok" : "FAIL") << ", evaluation identity "
            << (report.evaluation_ok ? "ok" : "FAIL") << '\n';
  return report.ok() ? kOk : kViolated;
}

int cmd_classify(const std::string& p_text) {
  const std::uint64_t p = parse_natural(p_text, "p");
  if (p < 5 || !wolst::is_prime(p)) throw UsageError("p must be a prime >= 5");
  bool ok = true;
  for (const wolst::FactorBand& band : wolst::factor_band_classify(p)) {
    Json line{{"p", std::to_string(band.p)},
              {"n", std::to_string(band.n)},
              {"interval_lo_exclusive", wolst::decimal(band.interval_lo)},
              {"interval_hi_inclusive", wolst::decimal(band.interval_hi)},
              {"q", std::to_string(band.q)},
              {"predicted_divides", band.predicted_divides},
              {"actual_divides", band.actual_divides}};
    std::cout << line.dump() << '\n';
    ok = ok && band.predicted_divides == band.actual_divides;
  }
  return ok ? kOk : kViolated;
}

int cmd_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::vector<Json> records;
  std::map<std::string, std::map<std::string, std::uint64_t>> counts;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.empty()) continue;
    Json r = Json::parse(line, nullptr, false);
    if (r.is_discarded() || !r.is_object()) throw UsageError(path + ":" + std::to_string(line_no) + " is not JSON");
    ++counts[r.value("scan", "?")][r.value("verdict", "?")];
    records.push_back(std::move(r));
  }
  Json summary{{"file", path}, {"records", records.size()}, {"by_scan", counts}};
  const auto nc = wolst::search::new_conjecture_report(records);
  if (nc.hits > 0) {
    summary["new_conjecture"] = Json{{"hits", nc.hits},
                                     {"q_greater_than_p", nc.violations},
                                     {"max_q_over_p", nc.max_q_over_p},
                                     {"min_p_over_q", nc.min_p_over_q}};
  }
  std::cout << summary.dump(2) << '\n';
  std::uint64_t failures = 0;
  for (const auto& [scan, verdicts] : counts) {
    if (auto it = verdicts.find("fail"); it != verdicts.end()) failures += it->second;
  }
  return failures == 0 ? kOk : kViolated;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact verification and search for Wilson- and Wolstenholme-type congruences"};
  app.require_subcommand(1);

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "run an identity or congruence suite");
  verify_cmd->add_option("suite", verify.suite, "suite name")->required();
  verify_cmd->add_option("--bound", verify.bound, "upper bound (suite-specific default)");
  verify_cmd->add_option("--threads", verify.threads, "worker threads")->check(CLI::PositiveNumber);

  ScanArgs scan;
  auto* scan_cmd = app.add_subcommand("scan", "run a resumable scan, one record per line");
  scan_cmd->add_option("scan", scan.name, "wilson | wilson-cube | jones | wolstenholme-primes | mod5 | new-conjecture | pairs")
      ->required();
  scan_cmd->add_option("--limit", scan.limit, "upper bound on the subject");
  scan_cmd->add_option("--start", scan.start, "first subject (wolstenholme-primes, mod5)");
  scan_cmd->add_option("--p-max", scan.p_max, "largest p (new-conjecture)");
  scan_cmd->add_option("--q-max", scan.q_max, "largest q (new-conjecture)");
  scan_cmd->add_option("--p-set", scan.p_set, "comma-separated primes (pairs)");
  scan_cmd->add_option("--q-set", scan.q_set, "comma-separated primes (pairs)");
  scan_cmd->add_flag("--known", scan.known, "check the published pairs");
  scan_cmd->add_flag("--stretch", scan.stretch, "enable long-running cases");
  scan_cmd->add_option("--checkpoint", scan.checkpoint, "checkpoint file; resumes when present");
  scan_cmd->add_option("--out", scan.out, "record file (default stdout)");
  scan_cmd->add_option("--format", scan.format, "jsonl | csv");
  scan_cmd->add_option("--threads", scan.threads, "worker threads")->check(CLI::PositiveNumber);
  scan_cmd->add_option("--chunk", scan.chunk, "subjects per checkpointed chunk")->check(CLI::PositiveNumber);
  scan_cmd->add_option("--stop-after-chunks", scan.stop_after_chunks, "stop early (for resumption tests)")
      ->group("");

  std::string wpoly_p;
  std::string wpoly_out;
  auto* wpoly_cmd = app.add_subcommand("wpoly", "export W(p) as JSON and verify its structure");
  wpoly_cmd->add_option("p", wpoly_p, "prime >= 5")->required();
  wpoly_cmd->add_option("--out", wpoly_out, "output file (default stdout)");

  std::string classify_p;
  auto* classify_cmd = app.add_subcommand("classify", "band classification of large prime factors of w_p");
  classify_cmd->add_option("p", classify_p, "prime >= 5")->required();

  std::string report_path;
  auto* report_cmd = app.add_subcommand("report", "summarize a JSON-lines record file");
  report_cmd->add_option("file", report_path, "records file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*verify_cmd) return cmd_verify(verify);
    if (*scan_cmd) return cmd_scan(scan);
    if (*wpoly_cmd) return cmd_wpoly(wpoly_p, wpoly_out);
    if (*classify_cmd) return cmd_classify(classify_p);
    if (*report_cmd) return cmd_report(report_path);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const wolst::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.code()) {
      case wolst::ErrorCode::PreconditionViolated:
      case wolst::ErrorCode::ParamsMismatch:
      case wolst::ErrorCode::VersionMismatch:
      case wolst::ErrorCode::CorruptFile:
      case wolst::ErrorCode::Io:
      case wolst::ErrorCode::BudgetExceeded:
      case wolst::ErrorCode::FactoringBudgetExceeded:
        return kUsage;
      default:
        return kViolated;
    }
  }
  return kUsage;
}
