#pragma once

// Resumable desk-scale scans. A scan is a ScanPlan: an ordered list of
// subjects and a pure evaluator producing the records for one subject. The
// runner evaluates chunks of subjects (optionally on several threads),
// emits their records in subject order and checkpoints after each chunk.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace wolst::search {

using Json = nlohmann::ordered_json;

enum class Verdict { pass, hit, fail };

std::string_view to_string(Verdict v);

struct ScanRecord {
  std::string scan;
  Json subject;
  Json witness;
  Verdict verdict = Verdict::hit;
  std::string params_hash;

  bool operator==(const ScanRecord&) const = default;
};

/// One JSON object per line, keys in the order
/// scan, subject, witness, verdict, params_hash.
std::string to_jsonl(const ScanRecord& record);
std::string csv_header();
std::string to_csv(const ScanRecord& record);

/// FNV-1a 64 of the scan name and canonical params, as 16 hex digits.
std::string params_hash(const std::string& scan, const Json& params);

struct ScanPlan {
  std::string name;
  Json params;
  std::size_t subject_count = 0;
  std::function<Json(std::size_t)> subject{};
  std::function<std::vector<ScanRecord>(std::size_t)> evaluate{};

  std::string hash() const { return params_hash(name, params); }
};

// ---------------------------------------------------------------------------
// Plans

/// Primes p <= limit with (p-1)! == -1 (mod p^2).
ScanPlan plan_wilson(std::uint64_t limit);
/// n <= limit with (n-1)! == -1 (mod n^3); any record is a fail.
ScanPlan plan_wilson_cube(std::uint64_t limit);
/// n <= limit with w_n == 1 (mod n^3); composite hits are fails.
ScanPlan plan_jones(std::uint64_t limit);
/// Primes 5 <= p <= limit with w_p == 1 (mod p^4).
ScanPlan plan_wolstenholme_primes(std::uint64_t limit, std::uint64_t start = 5);
/// n in [start, limit] with w_n == 1 (mod n^5); any record is a fail.
ScanPlan plan_mod5(std::uint64_t limit, std::uint64_t start = 5);
/// Primes 5 <= p <= p_max and primes q <= q_max, q != p, with q^2 | w_p - 1.
ScanPlan plan_new_conjecture(std::uint64_t p_max, std::uint64_t q_max);
/// Every (p, q) with p in p_set, q in q_set, p < q, tested with the pair
/// criterion mod pq. Only hits are recorded.
ScanPlan plan_pair_units(const std::vector<std::uint64_t>& p_set,
                         const std::vector<std::uint64_t>& q_set);
/// The published pairs; the third only with stretch. Every pair yields a
/// record, fail when the criterion does not hold.
ScanPlan plan_known_pairs(bool stretch);

/// Pairs whose product is at most this bound are re-checked through the
/// exact binomial.
inline constexpr std::uint64_t kPairRecheckBudget = 100'000;

// ---------------------------------------------------------------------------
// Checkpoints

inline constexpr int kCheckpointFormat = 1;

struct Checkpoint {
  int format_version = kCheckpointFormat;
  std::string scan;
  Json params;
  std::string params_hash;
  std::size_t next_index = 0;
  Json last_subject;
  std::uint64_t records_emitted = 0;
  std::uint64_t output_bytes = 0;

  bool operator==(const Checkpoint&) const = default;
};

/// Temp file plus rename.
void checkpoint_save(const Checkpoint& state, const std::filesystem::path& path);
/// Throws CorruptFile or VersionMismatch.
Checkpoint checkpoint_load(const std::filesystem::path& path);
/// Additionally throws ParamsMismatch when the checkpoint belongs to another
/// scan or parameter set.
Checkpoint checkpoint_load(const std::filesystem::path& path, const ScanPlan& plan);

// ---------------------------------------------------------------------------
// Running

enum class OutputFormat { jsonl, csv };

struct RunOptions {
  unsigned threads = 1;
  std::size_t chunk_size = 64;
  std::optional<std::filesystem::path> checkpoint;
  OutputFormat format = OutputFormat::jsonl;
  /// Stops after this many chunks, leaving the checkpoint in place.
  std::optional<std::size_t> stop_after_chunks;
};

struct RunSummary {
  std::uint64_t records = 0;  // cumulative, including earlier runs
  std::uint64_t hits = 0;     // this run only
  std::uint64_t failures = 0; // this run only
  std::size_t next_index = 0;
  bool completed = false;
};

/// Streams records to out. With a checkpoint, resumes after the last
/// completed chunk; the stream then continues the earlier output.
RunSummary run_scan(const ScanPlan& plan, std::ostream& out, const RunOptions& options = {});

/// Writes to a file. A resumed run first truncates the file to the length
/// recorded in the checkpoint, so interrupted plus resumed output is
/// byte-identical to an uninterrupted run.
RunSummary run_scan_to_file(const ScanPlan& plan, const std::filesystem::path& out,
                            const RunOptions& options = {});

std::vector<ScanRecord> collect(const ScanPlan& plan, unsigned threads = 1);

// Convenience wrappers returning every record of the named scan.
std::vector<ScanRecord> scan_wilson(std::uint64_t limit);
std::vector<ScanRecord> scan_wilson_cube(std::uint64_t limit);
std::vector<ScanRecord> scan_jones(std::uint64_t limit);
std::vector<ScanRecord> scan_wolstenholme_primes(std::uint64_t limit);
std::vector<ScanRecord> scan_mod5(std::uint64_t limit, std::uint64_t start = 5);
std::vector<ScanRecord> scan_new_conjecture(std::uint64_t p_max, std::uint64_t q_max);
std::vector<ScanRecord> scan_pair_units(const std::vector<std::uint64_t>& p_set,
                                        const std::vector<std::uint64_t>& q_set);

/// Subjects of the records as integers (for single-integer subjects).
std::vector<std::uint64_t> subjects_of(const std::vector<ScanRecord>& records);

struct NewConjectureReport {
  std::uint64_t hits = 0;
  std::uint64_t violations = 0;  // hits with q > p
  double max_q_over_p = 0.0;
  std::string min_p_over_q;      // exact, "" when there are no hits
};

NewConjectureReport new_conjecture_report(const std::vector<Json>& records);

/// Applies fn(i) for i in [0, count) on up to `threads` workers; the first
/// exception is rethrown after all workers join.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace wolst::search
