#include "circ4/report.hpp"

#include <cstdio>
#include <ctime>
#include <sstream>

#include <json.hpp>

namespace circ4 {

namespace {

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string sci3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2e", v);
  return buf;
}

}  // namespace

RunReport run(const ManifoldSpec& spec, const RunOptions& options) {
  RunReport out;
  out.label = spec.label();
  out.timestamp = utc_now();
  out.options = options;
  out.report = classify(spec, options.points, options.seed, options.tol,
                        options.check_identities);
  return out;
}

std::string format_text(const RunReport& r) {
  std::ostringstream out;
  out << "spec: " << r.label << "\n";
  out << "points: " << r.options.points << "  seed: " << r.options.seed
      << "  tol: " << sci3(r.options.tol) << "\n\n";

  out << "verdicts:\n";
  for (const auto& [name, verdict] : r.report.verdicts)
    out << "  " << name << ": " << to_string(verdict) << "\n";
  out << "  fs-equivalence: " << (r.report.fs_equivalent ? "consistent" : "INCONSISTENT")
      << "\n\n";

  out << "residual maxima over " << r.report.points.size() << " points:\n";
  for (const auto& [name, st] : r.report.aggregates)
    out << "  " << name << ": max " << sci3(st.max) << "  mean " << sci3(st.mean)
        << (st.count == static_cast<int>(r.report.points.size())
                ? std::string()
                : "  (" + std::to_string(st.count) + " points)")
        << "\n";
  return out.str();
}

std::string format_machine(const RunReport& r) {
  nlohmann::ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["timestamp"] = r.timestamp;
  j["label"] = r.label;
  j["points"] = r.options.points;
  j["seed"] = r.options.seed;
  j["tol"] = r.options.tol;
  j["check_identities"] = r.options.check_identities;

  nlohmann::ordered_json verdicts;
  for (const auto& [name, verdict] : r.report.verdicts) verdicts[name] = to_string(verdict);
  j["verdicts"] = verdicts;
  j["fs_equivalent"] = r.report.fs_equivalent;

  nlohmann::ordered_json aggregates;
  for (const auto& [name, st] : r.report.aggregates)
    aggregates[name] = {{"max", st.max}, {"mean", st.mean}, {"count", st.count}};
  j["aggregates"] = aggregates;

  nlohmann::ordered_json samples = nlohmann::ordered_json::array();
  for (const PointRecord& rec : r.report.points) {
    nlohmann::ordered_json p;
    p["point"] = rec.point;
    p["scale"] = rec.scale;
    p["degenerate"] = rec.degenerate;
    p["residuals"] = rec.residuals;
    samples.push_back(std::move(p));
  }
  j["samples"] = samples;
  return j.dump(2) + "\n";
}

}  // namespace circ4
