#include "wolst/search.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include "wolst/arith.hpp"
#include "wolst/congruence.hpp"
#include "wolst/error.hpp"
#include "wolst/modring.hpp"

namespace wolst::search {
namespace {

std::string str(std::uint64_t x) { return std::to_string(x); }

Natural pow_ui(std::uint64_t base, unsigned e) {
  Natural out;
  mpz_ui_pow_ui(out.get_mpz_t(), base, e);
  return out;
}

ScanRecord make_record(const ScanPlan& plan, Json subject, Json witness, Verdict verdict) {
  return {plan.name, std::move(subject), std::move(witness), verdict, plan.hash()};
}

// Plans share their subject lists through shared_ptr so copies stay cheap.
using Subjects = std::shared_ptr<const std::vector<std::uint64_t>>;

Subjects integers(std::uint64_t lo, std::uint64_t hi) {
  auto out = std::make_shared<std::vector<std::uint64_t>>();
  for (std::uint64_t n = lo; n <= hi && hi >= lo; ++n) out->push_back(n);
  return out;
}

Subjects primes(std::uint64_t lo, std::uint64_t hi) {
  return std::make_shared<const std::vector<std::uint64_t>>(primes_in(lo, hi));
}

void attach_single_subjects(ScanPlan& plan, const Subjects& subjects) {
  plan.subject_count = subjects->size();
  plan.subject = [subjects](std::size_t i) { return Json(str((*subjects)[i])); };
}

std::string csv_quote(const std::string& field) {
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::hit: return "hit";
    case Verdict::fail: return "fail";
  }
  return "fail";
}

std::string to_jsonl(const ScanRecord& r) {
  Json line;
  line["scan"] = r.scan;
  line["subject"] = r.subject;
  line["witness"] = r.witness;
  line["verdict"] = std::string(to_string(r.verdict));
  line["params_hash"] = r.params_hash;
  return line.dump() + "\n";
}

std::string csv_header() { return "scan,subject,witness,verdict,params_hash\n"; }

std::string to_csv(const ScanRecord& r) {
  const std::string subject = r.subject.is_string() ? r.subject.get<std::string>() : r.subject.dump();
  return csv_quote(r.scan) + "," + csv_quote(subject) + "," + csv_quote(r.witness.dump()) + "," +
         std::string(to_string(r.verdict)) + "," + r.params_hash + "\n";
}

std::string params_hash(const std::string& scan, const Json& params) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const std::string canonical = scan + "\n" + params.dump();
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << h;
  return out.str();
}

// ---------------------------------------------------------------------------
// Plans

ScanPlan plan_wilson(std::uint64_t limit) {
  ScanPlan plan{"wilson", Json{{"limit", str(limit)}}};
  const Subjects subjects = primes(2, limit);
  attach_single_subjects(plan, subjects);
  plan.evaluate = [plan_copy = plan, subjects](std::size_t i) {
    const std::uint64_t p = (*subjects)[i];
    const CongruenceVerdict v = wilson_residue(p, Level::second);
    std::vector<ScanRecord> out;
    if (!v.holds) return out;
    // Independent route: generalized factorial of p-1 modulo p^2.
    const FactorialUnit fu = factorial_unit(p - 1, detail::from_u64(p), 2);
    const bool confirmed = fu.valuation == 0 && fu.unit.value == v.target;
    out.push_back(make_record(plan_copy, str(p),
                              Json{{"residue", decimal(v.residue.value)},
                                   {"modulus", decimal(v.modulus)},
                                   {"rechecked", confirmed}},
                              confirmed ? Verdict::hit : Verdict::fail));
    return out;
  };
  return plan;
}

ScanPlan plan_wilson_cube(std::uint64_t limit) {
  ScanPlan plan{"wilson-cube", Json{{"limit", str(limit)}}};
  const Subjects subjects = integers(2, limit);
  attach_single_subjects(plan, subjects);
  plan.evaluate = [plan_copy = plan, subjects](std::size_t i) {
    const std::uint64_t n = (*subjects)[i];
    const CongruenceVerdict v = wilson_residue(n, Level::third);
    std::vector<ScanRecord> out;
    if (v.holds) {
      out.push_back(make_record(plan_copy, str(n),
                                Json{{"residue", decimal(v.residue.value)}, {"modulus", decimal(v.modulus)}},
                                Verdict::fail));
    }
    return out;
  };
  return plan;
}

ScanPlan plan_jones(std::uint64_t limit) {
  ScanPlan plan{"jones", Json{{"limit", str(limit)}}};
  const Subjects subjects = integers(2, limit);
  attach_single_subjects(plan, subjects);
  plan.evaluate = [plan_copy = plan, subjects](std::size_t i) {
    const std::uint64_t n = (*subjects)[i];
    const CongruenceVerdict v = jones_check(n);
    std::vector<ScanRecord> out;
    if (!v.holds) return out;
    const ResidueClass exact(w_exact(n), v.modulus);
    const bool prime = is_prime(n) && n >= 5;
    const bool confirmed = exact.value == 1;
    out.push_back(make_record(plan_copy, str(n),
                              Json{{"modulus", decimal(v.modulus)}, {"prime", prime}, {"rechecked", confirmed}},
                              prime && confirmed ? Verdict::hit : Verdict::fail));
    return out;
  };
  return plan;
}

ScanPlan plan_wolstenholme_primes(std::uint64_t limit, std::uint64_t start) {
  ScanPlan plan{"wolstenholme-primes", Json{{"limit", str(limit)}, {"start", str(start)}}};
  const Subjects subjects = primes(std::max<std::uint64_t>(start, 5), limit);
  attach_single_subjects(plan, subjects);
  plan.evaluate = [plan_copy = plan, subjects](std::size_t i) {
    const std::uint64_t p = (*subjects)[i];
    std::vector<ScanRecord> out;
    if (!is_wolstenholme_prime(p)) return out;
    // Independent route: generalized factorials modulo p^4 and p^5.
    const Natural pp = detail::from_u64(p);
    const ResidueClass mod4 = binomial_mod_prime_power(2 * p - 1, p - 1, pp, 4);
    const ResidueClass mod5 = binomial_mod_prime_power(2 * p - 1, p - 1, pp, 5);
    const bool confirmed = mod4.value == 1;
    out.push_back(make_record(plan_copy, str(p),
                              Json{{"residue_mod_p5", decimal(mod5.value)},
                                   {"holds_mod_p5", mod5.value == 1},
                                   {"rechecked", confirmed}},
                              confirmed ? Verdict::hit : Verdict::fail));
    return out;
  };
  return plan;
}

ScanPlan plan_mod5(std::uint64_t limit, std::uint64_t start) {
  ScanPlan plan{"mod5", Json{{"limit", str(limit)}, {"start", str(start)}}};
  const Subjects subjects = integers(std::max<std::uint64_t>(start, 2), limit);
  attach_single_subjects(plan, subjects);
  plan.evaluate = [plan_copy = plan, subjects](std::size_t i) {
    const std::uint64_t n = (*subjects)[i];
    const Natural modulus = pow_ui(n, 5);
    const ResidueClass r = w_mod(n, modulus);
    std::vector<ScanRecord> out;
    if (r.value == 1) {
      out.push_back(make_record(plan_copy, str(n), Json{{"modulus", decimal(modulus)}}, Verdict::fail));
    }
    return out;
  };
  return plan;
}

ScanPlan plan_new_conjecture(std::uint64_t p_max, std::uint64_t q_max) {
  ScanPlan plan{"new-conjecture", Json{{"p_max", str(p_max)}, {"q_max", str(q_max)}}};
  const Subjects subjects = primes(5, p_max);
  const Subjects qs = primes(2, q_max);
  attach_single_subjects(plan, subjects);
  plan.evaluate = [plan_copy = plan, subjects, qs](std::size_t i) {
    const std::uint64_t p = (*subjects)[i];
    const Natural numerator = w_exact(p) - 1;
    std::vector<ScanRecord> out;
    for (std::uint64_t q : *qs) {
      if (q == p) continue;
      const Natural qq = detail::from_u64(q);
      const Natural square = qq * qq;
      if (!mpz_divisible_p(numerator.get_mpz_t(), square.get_mpz_t())) continue;
      const Rational ratio = make_rational(detail::from_u64(p), qq);
      out.push_back(make_record(plan_copy, str(p),
                                Json{{"q", str(q)},
                                     {"valuation", valuation(numerator, qq)},
                                     {"p_over_q", decimal(ratio)}},
                                q < p ? Verdict::hit : Verdict::fail));
    }
    return out;
  };
  return plan;
}

namespace {

ScanPlan pair_plan(std::string name, Json params,
                   std::shared_ptr<const std::vector<std::pair<std::uint64_t, std::uint64_t>>> pairs,
                   bool record_misses) {
  ScanPlan plan{std::move(name), std::move(params)};
  plan.subject_count = pairs->size();
  plan.subject = [pairs](std::size_t i) {
    return Json{{"p", str((*pairs)[i].first)}, {"q", str((*pairs)[i].second)}};
  };
  plan.evaluate = [plan_copy = plan, pairs, record_misses](std::size_t i) {
    const auto [p, q] = (*pairs)[i];
    const PairCriterionResult r = pair_criterion(p, q, Level::first);
    std::vector<ScanRecord> out;
    Json witness{{"left", r.left}, {"right", r.right}};
    bool consistent = true;
    if (p <= kPairRecheckBudget / q) {
      const bool direct = pair_direct_check(p, q, Level::first);
      witness["direct"] = direct;
      consistent = direct == r.combined;
    }
    if (r.combined || !consistent) {
      out.push_back(make_record(plan_copy, plan_copy.subject(i), witness,
                                consistent ? Verdict::hit : Verdict::fail));
    } else if (record_misses) {
      out.push_back(make_record(plan_copy, plan_copy.subject(i), witness, Verdict::fail));
    }
    return out;
  };
  return plan;
}

}  // namespace

ScanPlan plan_pair_units(const std::vector<std::uint64_t>& p_set,
                         const std::vector<std::uint64_t>& q_set) {
  auto pairs = std::make_shared<std::vector<std::pair<std::uint64_t, std::uint64_t>>>();
  for (std::uint64_t p : p_set) {
    for (std::uint64_t q : q_set) {
      if (p < q) pairs->emplace_back(p, q);
    }
  }
  std::sort(pairs->begin(), pairs->end());
  pairs->erase(std::unique(pairs->begin(), pairs->end()), pairs->end());
  Json ps = Json::array();
  Json qs = Json::array();
  for (std::uint64_t p : p_set) ps.push_back(str(p));
  for (std::uint64_t q : q_set) qs.push_back(str(q));
  return pair_plan("pairs", Json{{"p_set", ps}, {"q_set", qs}}, pairs, false);
}

ScanPlan plan_known_pairs(bool stretch) {
  auto pairs = std::make_shared<std::vector<std::pair<std::uint64_t, std::uint64_t>>>(
      std::vector<std::pair<std::uint64_t, std::uint64_t>>{{29, 937}, {787, 2543}});
  if (stretch) pairs->emplace_back(69239, 231433);
  return pair_plan("pairs-known", Json{{"stretch", stretch}}, pairs, true);
}

// ---------------------------------------------------------------------------
// Running

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
  threads = std::max(1U, threads);
  if (threads == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> workers;
  const unsigned n_workers = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  for (unsigned t = 0; t < n_workers; ++t) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = count;
        }
      }
    });
  }
  workers.clear();
  if (error) std::rethrow_exception(error);
}

namespace {

struct Progress {
  Checkpoint state;
  std::uint64_t bytes_this_run = 0;
};

RunSummary drive(const ScanPlan& plan, std::ostream& out, const RunOptions& options,
                 std::optional<Checkpoint> resume_from) {
  Checkpoint state;
  state.scan = plan.name;
  state.params = plan.params;
  state.params_hash = plan.hash();
  if (resume_from) state = *resume_from;

  RunSummary summary;
  summary.records = state.records_emitted;
  summary.next_index = state.next_index;

  auto emit = [&](const std::string& text) {
    out << text;
    state.output_bytes += text.size();
  };
  if (state.next_index == 0 && state.output_bytes == 0 && options.format == OutputFormat::csv) {
    emit(csv_header());
  }

  const std::size_t chunk = std::max<std::size_t>(1, options.chunk_size);
  std::size_t chunks_done = 0;
  while (state.next_index < plan.subject_count) {
    if (options.stop_after_chunks && chunks_done >= *options.stop_after_chunks) break;
    const std::size_t begin = state.next_index;
    const std::size_t end = std::min(plan.subject_count, begin + chunk);
    std::vector<std::vector<ScanRecord>> results(end - begin);
    parallel_for(end - begin, options.threads,
                 [&](std::size_t i) { results[i] = plan.evaluate(begin + i); });

    for (const auto& group : results) {
      for (const ScanRecord& r : group) {
        emit(options.format == OutputFormat::csv ? to_csv(r) : to_jsonl(r));
        ++state.records_emitted;
        if (r.verdict == Verdict::hit) ++summary.hits;
        if (r.verdict == Verdict::fail) ++summary.failures;
      }
    }
    out.flush();
    if (!out) throw Error(ErrorCode::Io, "write to record stream failed");
    state.next_index = end;
    state.last_subject = plan.subject(end - 1);
    if (options.checkpoint) checkpoint_save(state, *options.checkpoint);
    ++chunks_done;
  }
  summary.records = state.records_emitted;
  summary.next_index = state.next_index;
  summary.completed = state.next_index >= plan.subject_count;
  return summary;
}

std::optional<Checkpoint> existing_checkpoint(const ScanPlan& plan, const RunOptions& options) {
  if (!options.checkpoint || !std::filesystem::exists(*options.checkpoint)) return std::nullopt;
  return checkpoint_load(*options.checkpoint, plan);
}

}  // namespace

RunSummary run_scan(const ScanPlan& plan, std::ostream& out, const RunOptions& options) {
  return drive(plan, out, options, existing_checkpoint(plan, options));
}

RunSummary run_scan_to_file(const ScanPlan& plan, const std::filesystem::path& path,
                            const RunOptions& options) {
  const std::optional<Checkpoint> resume = existing_checkpoint(plan, options);
  if (resume) {
    if (!std::filesystem::exists(path) || std::filesystem::file_size(path) < resume->output_bytes) {
      throw Error(ErrorCode::CorruptFile, "record file is shorter than its checkpoint");
    }
    std::filesystem::resize_file(path, resume->output_bytes);
  }
  std::ofstream out(path, resume ? std::ios::binary | std::ios::app : std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return drive(plan, out, options, resume);
}

std::vector<ScanRecord> collect(const ScanPlan& plan, unsigned threads) {
  std::vector<std::vector<ScanRecord>> results(plan.subject_count);
  parallel_for(plan.subject_count, threads, [&](std::size_t i) { results[i] = plan.evaluate(i); });
  std::vector<ScanRecord> out;
  for (auto& group : results) {
    for (auto& r : group) out.push_back(std::move(r));
  }
  return out;
}

std::vector<ScanRecord> scan_wilson(std::uint64_t limit) { return collect(plan_wilson(limit)); }
std::vector<ScanRecord> scan_wilson_cube(std::uint64_t limit) { return collect(plan_wilson_cube(limit)); }
std::vector<ScanRecord> scan_jones(std::uint64_t limit) { return collect(plan_jones(limit)); }
std::vector<ScanRecord> scan_wolstenholme_primes(std::uint64_t limit) {
  return collect(plan_wolstenholme_primes(limit));
}
std::vector<ScanRecord> scan_mod5(std::uint64_t limit, std::uint64_t start) {
  return collect(plan_mod5(limit, start));
}
std::vector<ScanRecord> scan_new_conjecture(std::uint64_t p_max, std::uint64_t q_max) {
  return collect(plan_new_conjecture(p_max, q_max));
}
std::vector<ScanRecord> scan_pair_units(const std::vector<std::uint64_t>& p_set,
                                        const std::vector<std::uint64_t>& q_set) {
  return collect(plan_pair_units(p_set, q_set));
}

std::vector<std::uint64_t> subjects_of(const std::vector<ScanRecord>& records) {
  std::vector<std::uint64_t> out;
  for (const ScanRecord& r : records) out.push_back(std::stoull(r.subject.get<std::string>()));
  return out;
}

NewConjectureReport new_conjecture_report(const std::vector<Json>& records) {
  NewConjectureReport report;
  std::optional<Rational> min_ratio;
  for (const Json& r : records) {
    if (r.value("scan", "") != "new-conjecture") continue;
    const std::string verdict = r.value("verdict", "");
    if (verdict != "hit" && verdict != "fail") continue;
    ++report.hits;
    if (verdict == "fail") ++report.violations;
    const Rational ratio(r["witness"]["p_over_q"].get<std::string>());
    if (!min_ratio || ratio < *min_ratio) min_ratio = ratio;
    report.max_q_over_p = std::max(report.max_q_over_p, 1.0 / ratio.get_d());
  }
  if (min_ratio) report.min_p_over_q = decimal(*min_ratio);
  return report;
}

}  // namespace wolst::search
