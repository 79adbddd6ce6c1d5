#pragma once

#include <span>
#include <string>
#include <vector>

#include "anelor/dynamics.hpp"
#include "anelor/projection.hpp"

namespace anelor {

/// %.17g, with "nan", "inf" and "-inf" spelled out. Round-trips every double.
std::string format_number(double v);

/// Comma-joined fields terminated by LF.
std::string csv_line(std::span<const std::string> fields);

/// Header "t,A,B,C" or "s,X,Y,Z", one row per sample.
std::string trajectory_csv(const Trajectory& traj);

std::string trajectory_json(const Trajectory& traj);

/// Fields term, oracle, closed_form, paper, rel_dev, paper_rel_dev.
std::string discrepancy_report_csv(const std::vector<ProjectionTermReport>& report);
std::string discrepancy_report_json(const std::vector<ProjectionTermReport>& report,
                                    const PhysicalParams& params);

struct ConvergenceRow {
  double beta = 0.0;
  int horizontal = 1;
  int truncation = 1;
  double ra_critical = 0.0;
};

/// Header "beta,m,N,Ra_critical".
std::string convergence_csv(std::span<const ConvergenceRow> rows);

}  // namespace anelor
