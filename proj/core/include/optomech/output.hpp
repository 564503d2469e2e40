#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "optomech/quantum.hpp"
#include "optomech/sweep.hpp"

namespace optomech {

/// Bumped whenever a column is added, removed, renamed or reordered.
inline constexpr int kSchemaVersion = 1;

struct Cell {
  enum class Kind { Number, Integer, Text, Bool, Null };
  Kind kind = Kind::Null;
  double number = 0.0;
  long long integer = 0;
  std::string text;
  bool flag = false;

  static Cell num(double v) { return {Kind::Number, v, 0, {}, false}; }
  static Cell num(const std::optional<double>& v) { return v ? num(*v) : null(); }
  static Cell whole(long long v) { return {Kind::Integer, 0.0, v, {}, false}; }
  static Cell str(std::string s) { return {Kind::Text, 0.0, 0, std::move(s), false}; }
  static Cell boolean(bool b) { return {Kind::Bool, 0.0, 0, {}, b}; }
  static Cell null() { return {}; }
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Header row plus one line per row. Numbers use 17 significant digits,
/// undefined values are empty fields.
void write_csv(std::ostream& os, const Table& t);

/// {"columns": [...], "rows": [[...], ...]} with undefined values as null.
void write_json(std::ostream& os, const Table& t);

std::vector<std::string> trajectory_columns(bool with_eps);
Table trajectory_table(const JointTrajectory& traj, bool with_eps);

/// Axis columns, then abs_alpha_max, E_N_max, q_em_count, q_em_1..q_em_4,
/// periodicity, periodicity_residual, lyapunov, stable, worst_real_part,
/// status, diagnostics.
Table sweep_table(const SweepResult& result);

/// Axis columns, then stable, worst_real_part, periodicity, status, diagnostics.
Table stability_table(const SweepResult& result);

/// lambda_gain, temperature, n_m, E_N_max, E_N_max_renormalized.
Table thermal_table(const ThermalRobustness& result);

/// E, then re_1, im_1 .. re_4, im_4 (roots sorted by real part).
Table roots_table(const std::vector<RootScanRow>& rows);

}  // namespace optomech
