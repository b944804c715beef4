#include <fstream>
#include <sstream>

#include "wolst/error.hpp"
#include "wolst/search.hpp"

namespace wolst::search {

void checkpoint_save(const Checkpoint& state, const std::filesystem::path& path) {
  Json doc;
  doc["format_version"] = state.format_version;
  doc["scan"] = state.scan;
  doc["params"] = state.params;
  doc["params_hash"] = state.params_hash;
  doc["next_index"] = state.next_index;
  doc["last_subject"] = state.last_subject;
  doc["records_emitted"] = state.records_emitted;
  doc["output_bytes"] = state.output_bytes;

  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << doc.dump(2) << '\n';
    out.flush();
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint checkpoint_load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();

  Json doc = Json::parse(buffer.str(), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorCode::CorruptFile, path.string() + " is not a JSON document");
  }
  if (!doc.contains("format_version") || !doc["format_version"].is_number_integer()) {
    throw Error(ErrorCode::CorruptFile, "format_version missing");
  }
  Checkpoint state;
  state.format_version = doc["format_version"].get<int>();
  if (state.format_version != kCheckpointFormat) {
    throw Error(ErrorCode::VersionMismatch, "checkpoint format " + std::to_string(state.format_version) +
                                                ", expected " + std::to_string(kCheckpointFormat));
  }
  try {
    state.scan = doc.at("scan").get<std::string>();
    state.params = doc.at("params");
    state.params_hash = doc.at("params_hash").get<std::string>();
    state.next_index = doc.at("next_index").get<std::size_t>();
    state.last_subject = doc.at("last_subject");
    state.records_emitted = doc.at("records_emitted").get<std::uint64_t>();
    state.output_bytes = doc.at("output_bytes").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::CorruptFile, e.what());
  }
  if (state.params_hash != params_hash(state.scan, state.params)) {
    throw Error(ErrorCode::CorruptFile, "params_hash does not match stored params");
  }
  return state;
}

Checkpoint checkpoint_load(const std::filesystem::path& path, const ScanPlan& plan) {
  Checkpoint state = checkpoint_load(path);
  if (state.scan != plan.name || state.params_hash != plan.hash()) {
    throw Error(ErrorCode::ParamsMismatch, "checkpoint is for " + state.scan + " " + state.params.dump() +
                                               ", not " + plan.name + " " + plan.params.dump());
  }
  if (state.next_index > plan.subject_count) {
    throw Error(ErrorCode::CorruptFile, "checkpoint index past end of scan");
  }
  return state;
}

}  // namespace wolst::search
