#include "sharp/trace_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "sharp/error.hpp"

namespace sharp {

namespace {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

void write_trace_csv(std::ostream& out, const Trace& trace) {
  out << "iter,f,gap,restart,eps_target\n";
  for (const TraceEntry& e : trace.entries) {
    out << e.iteration << ',' << format_number(e.f_value) << ',';
    if (e.gap) out << format_number(*e.gap);
    out << ',' << (e.restart ? 1 : 0) << ',';
    if (e.epsilon_target) out << format_number(*e.epsilon_target);
    out << '\n';
  }
}

std::string trace_to_json(const Trace& trace, const std::string& metadata_json) {
  nlohmann::json meta = nlohmann::json::object();
  if (!metadata_json.empty()) {
    try {
      meta = nlohmann::json::parse(metadata_json);
    } catch (const nlohmann::json::exception& e) {
      throw InvalidArgument(std::string("metadata is not valid JSON: ") + e.what());
    }
    if (!meta.is_object()) throw InvalidArgument("metadata must be a JSON object");
  }
  meta["final_L_hat"] = trace.final_L_hat;
  meta["oracle_calls"] = trace.oracle_calls;
  meta["backtracks"] = trace.backtracks;
  meta["iterations"] = trace.iterations();
  meta["initial_value"] = trace.initial_value;
  meta["final_value"] = trace.final_value();
  meta["final_gap"] = optional_number(trace.final_gap());
  meta["restarts"] = trace.restart_count();
  meta["stalled"] = trace.stalled;
  meta["truncated"] = trace.truncated;
  meta["diagnostics"] = trace.diagnostics;

  nlohmann::json entries = nlohmann::json::array();
  for (const TraceEntry& e : trace.entries) {
    entries.push_back({{"iter", e.iteration},
                       {"f", e.f_value},
                       {"gap", optional_number(e.gap)},
                       {"restart", e.restart},
                       {"eps_target", optional_number(e.epsilon_target)}});
  }
  nlohmann::json doc{{"metadata", std::move(meta)}, {"entries", std::move(entries)}};
  return doc.dump(1) + "\n";
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw IoError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move trace into place at '" + path + "'");
  }
}

}  // namespace sharp
