#include "manifest.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <spdlog/spdlog.h>

#include "report_json.hpp"

namespace phiproj::cli {

namespace fs = std::filesystem;

std::vector<ManifestJob> load_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path + ": invalid JSON: " + e.what());
  }
  if (!j.is_object() || !j.contains("jobs") || !j["jobs"].is_array()) {
    throw InputError(path + ": expected {\"jobs\": [...]}");
  }
  const fs::path base = fs::path(path).parent_path();
  auto resolve = [&](const std::string& p) {
    const fs::path fp(p);
    return (fp.is_absolute() ? fp : base / fp).string();
  };
  std::vector<ManifestJob> jobs;
  for (std::size_t i = 0; i < j["jobs"].size(); ++i) {
    const auto& e = j["jobs"][i];
    const std::string where = path + ": jobs[" + std::to_string(i) + "]";
    if (!e.is_object() || !e.contains("data") || !e["data"].is_string() ||
        !e.contains("config") || !e["config"].is_string()) {
      throw InputError(where + ": needs string fields 'data' and 'config'");
    }
    ManifestJob job{resolve(e["data"].get<std::string>()),
                    resolve(e["config"].get<std::string>()), {}};
    if (e.contains("output")) {
      if (!e["output"].is_string()) throw InputError(where + ": 'output' must be a string");
      job.output = resolve(e["output"].get<std::string>());
    }
    jobs.push_back(std::move(job));
  }
  return jobs;
}

namespace {

nlohmann::json run_one(const ManifestJob& job, const Overrides& overrides, int& exit_code) {
  nlohmann::json entry{{"data", job.data}, {"config", job.config}};
  try {
    auto cfg = load_config(job.config);
    overrides.apply(cfg);
    const auto result = cmd_project(read_csv_file(job.data), cfg);
    exit_code = result.exit_code;
    entry["status"] = result.report["status"];
    if (job.output.empty()) {
      entry["report"] = result.report;
    } else {
      std::ofstream out(job.output);
      if (!out) throw InputError(job.output + ": cannot write report");
      out << dump(result.report) << '\n';
      entry["output"] = job.output;
    }
  } catch (const std::exception& e) {
    spdlog::error("{}: {}", job.data, e.what());
    exit_code = kExitInputError;
    entry["error"] = error_json(e);
  }
  entry["exit_code"] = exit_code;
  return entry;
}

}  // namespace

ManifestOutcome run_manifest(const std::vector<ManifestJob>& jobs, unsigned workers,
                             const Overrides& overrides) {
  std::vector<nlohmann::json> entries(jobs.size());
  std::vector<int> codes(jobs.size(), kExitConverged);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      entries[i] = run_one(jobs[i], overrides, codes[i]);
    }
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(jobs.size())));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }
  ManifestOutcome out;
  out.summary = nlohmann::json::array();
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    out.summary.push_back(std::move(entries[i]));
    out.exit_code = std::max(out.exit_code, codes[i]);
  }
  return out;
}

}  // namespace phiproj::cli
