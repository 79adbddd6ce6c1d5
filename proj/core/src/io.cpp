#include "anelor/io.hpp"

#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

namespace anelor {

using nlohmann::ordered_json;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_line(std::span<const std::string> fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += fields[i];
  }
  line += '\n';
  return line;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = traj.coordinates == Coordinates::reduced ? "t,A,B,C\n" : "s,X,Y,Z\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const std::string row[] = {format_number(traj.times[i]), format_number(traj.states[i][0]),
                               format_number(traj.states[i][1]), format_number(traj.states[i][2])};
    out += csv_line(row);
  }
  return out;
}

std::string trajectory_json(const Trajectory& traj) {
  const bool reduced = traj.coordinates == Coordinates::reduced;
  ordered_json j;
  j["coordinates"] = reduced ? "abc" : "xyz";
  j["columns"] = reduced ? ordered_json::array({"t", "A", "B", "C"}) : ordered_json::array({"s", "X", "Y", "Z"});
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < traj.size(); ++i) {
    rows.push_back({traj.times[i], traj.states[i][0], traj.states[i][1], traj.states[i][2]});
  }
  j["samples"] = std::move(rows);
  j["integrator"] = {{"method", "dopri5"},
                     {"rtol", traj.stats.rtol},
                     {"atol", traj.stats.atol},
                     {"accepted_steps", traj.stats.accepted},
                     {"rejected_steps", traj.stats.rejected},
                     {"evaluations", traj.stats.evaluations}};
  return j.dump(2) + "\n";
}

std::string discrepancy_report_csv(const std::vector<ProjectionTermReport>& report) {
  std::string out = "term,oracle,closed_form,paper,rel_dev,paper_rel_dev\n";
  for (const auto& r : report) {
    const std::string row[] = {r.term,
                               format_number(r.oracle),
                               format_number(r.closed_form),
                               r.paper ? format_number(*r.paper) : "",
                               format_number(r.rel_dev),
                               r.paper_rel_dev ? format_number(*r.paper_rel_dev) : ""};
    out += csv_line(row);
  }
  return out;
}

std::string discrepancy_report_json(const std::vector<ProjectionTermReport>& report,
                                    const PhysicalParams& params) {
  ordered_json j;
  j["params"] = {{"beta", params.beta},
                 {"prandtl", params.prandtl},
                 {"rayleigh", params.rayleigh},
                 {"gamma", params.gamma},
                 {"length", params.length}};
  ordered_json rows = ordered_json::array();
  for (const auto& r : report) {
    ordered_json row;
    row["term"] = r.term;
    row["oracle"] = r.oracle;
    row["closed_form"] = r.closed_form;
    row["paper"] = r.paper ? ordered_json(*r.paper) : ordered_json(nullptr);
    row["rel_dev"] = r.rel_dev;
    row["paper_rel_dev"] = r.paper_rel_dev ? ordered_json(*r.paper_rel_dev) : ordered_json(nullptr);
    rows.push_back(std::move(row));
  }
  j["terms"] = std::move(rows);
  return j.dump(2) + "\n";
}

std::string convergence_csv(std::span<const ConvergenceRow> rows) {
  std::string out = "beta,m,N,Ra_critical\n";
  for (const auto& r : rows) {
    const std::string row[] = {format_number(r.beta), std::to_string(r.horizontal),
                               std::to_string(r.truncation), format_number(r.ra_critical)};
    out += csv_line(row);
  }
  return out;
}

}  // namespace anelor
