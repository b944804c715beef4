#include <doctest.h>

#include <filesystem>
#include <functional>
#include <fstream>
#include <sstream>

#include "wolst/arith.hpp"
#include "wolst/error.hpp"
#include "wolst/search.hpp"

using namespace wolst;
using namespace wolst::search;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "wolst_test_search";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  fs::remove(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string run_all(const ScanPlan& plan, unsigned threads, std::size_t chunk) {
  std::ostringstream out;
  RunOptions opts;
  opts.threads = threads;
  opts.chunk_size = chunk;
  run_scan(plan, out, opts);
  return out.str();
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::AssertionFailure;
}

}  // namespace

TEST_CASE("record serialization") {
  ScanRecord r{"wilson", Json("5"), Json{{"residue", "24"}}, Verdict::hit, "abc"};
  CHECK(to_jsonl(r) == "{\"scan\":\"wilson\",\"subject\":\"5\",\"witness\":{\"residue\":\"24\"},\"verdict\":\"hit\",\"params_hash\":\"abc\"}\n");
  CHECK(csv_header().rfind("scan,subject,witness,verdict,params_hash", 0) == 0);
  CHECK(params_hash("a", Json{{"x", "1"}}) != params_hash("a", Json{{"x", "2"}}));
  CHECK(params_hash("a", Json{{"x", "1"}}) == params_hash("a", Json{{"x", "1"}}));
}

TEST_CASE("wilson scans") {
  CHECK(subjects_of(scan_wilson(1000)) == std::vector<std::uint64_t>{5, 13, 563});
  CHECK(scan_wilson(4).empty());
  CHECK(scan_wilson_cube(2000).empty());
}

TEST_CASE("jones scan at small scale") {
  CHECK(subjects_of(scan_jones(100)) == primes_in(5, 100));
  CHECK(scan_jones(4).empty());
  for (const ScanRecord& r : scan_jones(300)) CHECK(r.verdict == Verdict::hit);
}

TEST_CASE("wolstenholme and fifth-power scans") {
  CHECK(scan_wolstenholme_primes(1000).empty());
  CHECK(scan_wolstenholme_primes(5).empty());
  CHECK(scan_mod5(2000).empty());
  CHECK(scan_mod5(5).empty());
  CHECK(scan_mod5(16843, 16843).empty());
}

TEST_CASE("new conjecture scan") {
  const auto thirteen = scan_new_conjecture(13, 100);
  bool found = false;
  for (const ScanRecord& r : thirteen) {
    if (r.subject == Json("13") && r.witness["q"] == Json("3")) found = true;
  }
  CHECK(found);
  CHECK(scan_new_conjecture(5, 100).empty());
  CHECK(scan_new_conjecture(7, 100).empty());
}

TEST_CASE("pair scans") {
  const auto known = scan_pair_units({29}, {937});
  REQUIRE(known.size() == 1);
  CHECK(known[0].verdict == Verdict::hit);
  CHECK(scan_pair_units({5}, {7}).empty());
  const auto published = collect(plan_known_pairs(false));
  CHECK(published.size() == 2);
  for (const ScanRecord& r : published) CHECK(r.verdict == Verdict::hit);
}

TEST_CASE("thread count does not change output bytes") {
  const ScanPlan plan = plan_jones(700);
  const std::string one = run_all(plan, 1, 16);
  CHECK(one == run_all(plan, 4, 16));
  CHECK(one == run_all(plan, 3, 5));
  const ScanPlan nc = plan_new_conjecture(400, 2000);
  CHECK(run_all(nc, 1, 8) == run_all(nc, 4, 3));
}

TEST_CASE("checkpoint round trip") {
  const ScanPlan plan = plan_wilson(100);
  Checkpoint c;
  c.scan = plan.name;
  c.params = plan.params;
  c.params_hash = plan.hash();
  c.next_index = 7;
  c.last_subject = Json("17");
  c.records_emitted = 2;
  c.output_bytes = 321;
  const fs::path path = scratch("round.ckpt");
  checkpoint_save(c, path);
  CHECK(checkpoint_load(path) == c);
  CHECK(checkpoint_load(path, plan) == c);
  CHECK_FALSE(fs::exists(fs::path(path.string() + ".tmp")));

  CHECK(code_of([&] { checkpoint_load(path, plan_wilson(101)); }) == ErrorCode::ParamsMismatch);
  CHECK(code_of([&] { checkpoint_load(path, plan_jones(100)); }) == ErrorCode::ParamsMismatch);

  const std::string text = slurp(path);
  const fs::path cut = scratch("cut.ckpt");
  std::ofstream(cut, std::ios::binary) << text.substr(0, text.size() / 2);
  CHECK(code_of([&] { checkpoint_load(cut); }) == ErrorCode::CorruptFile);

  Json doc = Json::parse(text);
  doc["format_version"] = 2;
  const fs::path future = scratch("future.ckpt");
  std::ofstream(future) << doc.dump();
  CHECK(code_of([&] { checkpoint_load(future); }) == ErrorCode::VersionMismatch);

  doc["format_version"] = 1;
  doc["params"]["limit"] = "999";
  const fs::path tampered = scratch("tampered.ckpt");
  std::ofstream(tampered) << doc.dump();
  CHECK(code_of([&] { checkpoint_load(tampered); }) == ErrorCode::CorruptFile);
}

TEST_CASE("interrupted runs resume to the same stream") {
  for (const ScanPlan& plan : {plan_jones(500), plan_wilson(3000), plan_new_conjecture(300, 5000)}) {
    RunOptions straight;
    straight.chunk_size = 9;

    for (std::size_t stop : {1, 2, 5}) {
      for (OutputFormat fmt : {OutputFormat::jsonl, OutputFormat::csv}) {
        const fs::path part = scratch("part.out");
        const fs::path ckpt = scratch("part.ckpt");
        RunOptions opts;
        opts.chunk_size = 9;
        opts.format = fmt;
        opts.checkpoint = ckpt;
        opts.stop_after_chunks = stop;
        const RunSummary first = run_scan_to_file(plan, part, opts);
        CHECK_FALSE(first.completed);
        // simulate a crash that left bytes after the last checkpoint
        std::ofstream(part, std::ios::app) << "partial garbage";
        opts.stop_after_chunks.reset();
        opts.threads = 3;
        const RunSummary second = run_scan_to_file(plan, part, opts);
        CHECK(second.completed);

        const fs::path ref = scratch("ref.out");
        RunOptions ref_opts = straight;
        ref_opts.format = fmt;
        run_scan_to_file(plan, ref, ref_opts);
        REQUIRE(slurp(part) == slurp(ref));
      }
    }
  }
}
