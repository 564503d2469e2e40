#include "optomech/output.hpp"

#include <cmath>
#include <ostream>

#include "json.hpp"

#include "optomech/config.hpp"

namespace optomech {

namespace {

std::string csv_field(const Cell& c) {
  switch (c.kind) {
    case Cell::Kind::Number: return std::isfinite(c.number) ? format_number(c.number) : std::string();
    case Cell::Kind::Integer: return std::to_string(c.integer);
    case Cell::Kind::Bool: return c.flag ? "true" : "false";
    case Cell::Kind::Null: return {};
    case Cell::Kind::Text: {
      if (c.text.find_first_of(",\"\n") == std::string::npos) return c.text;
      std::string q = "\"";
      for (char ch : c.text) {
        if (ch == '"') q += '"';
        q += ch;
      }
      return q + '"';
    }
  }
  return {};
}

nlohmann::json json_value(const Cell& c) {
  switch (c.kind) {
    case Cell::Kind::Number: return std::isfinite(c.number) ? nlohmann::json(c.number) : nlohmann::json();
    case Cell::Kind::Integer: return c.integer;
    case Cell::Kind::Bool: return c.flag;
    case Cell::Kind::Text: return c.text;
    case Cell::Kind::Null: return nullptr;
  }
  return nullptr;
}

}  // namespace

void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
    os << '\n';
  }
}

void write_json(std::ostream& os, const Table& t) {
  nlohmann::json j;
  j["columns"] = t.columns;
  j["rows"] = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& c : row) r.push_back(json_value(c));
    j["rows"].push_back(std::move(r));
  }
  os << j.dump(1) << '\n';
}

std::vector<std::string> trajectory_columns(bool with_eps) {
  std::vector<std::string> c = {"t", "q", "p", "alpha_r", "alpha_i", "abs_alpha", "I_c"};
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) c.push_back("V" + std::to_string(i) + std::to_string(j));
  }
  for (const char* n : {"eta", "E_P", "E_N"}) c.push_back(n);
  if (with_eps) {
    for (const char* n : {"eps_q", "eps_p", "eps_ar", "eps_ai", "eps_Ic", "ln_eps_Ic"}) c.push_back(n);
  }
  return c;
}

Table trajectory_table(const JointTrajectory& traj, bool with_eps) {
  const auto& rec = traj.classical;
  with_eps = with_eps && rec.eps && rec.eps_ic;
  Table t;
  t.columns = trajectory_columns(with_eps);
  t.rows.reserve(rec.size());
  for (std::size_t k = 0; k < rec.size(); ++k) {
    const auto& s = rec.states[k];
    std::vector<Cell> row = {Cell::num(rec.times[k]), Cell::num(s.q), Cell::num(s.p),
                             Cell::num(s.alpha_r), Cell::num(s.alpha_i), Cell::num(s.abs_alpha()),
                             Cell::num(s.intensity())};
    const bool have_v = k < traj.covariances.size();
    for (int i = 0; i < 4; ++i) {
      for (int j = i; j < 4; ++j) {
        row.push_back(have_v ? Cell::num(traj.covariances[k].v(i, j)) : Cell::null());
      }
    }
    if (k < traj.entanglement.size()) {
      const auto& e = traj.entanglement[k];
      row.push_back(Cell::num(e.eta));
      row.push_back(Cell::num(e.e_p));
      row.push_back(Cell::num(e.e_n));
    } else {
      row.insert(row.end(), 3, Cell::null());
    }
    if (with_eps) {
      const auto& e = (*rec.eps)[k];
      const double ic = (*rec.eps_ic)[k];
      row.push_back(Cell::num(e.eps_q));
      row.push_back(Cell::num(e.eps_p));
      row.push_back(Cell::num(e.eps_ar));
      row.push_back(Cell::num(e.eps_ai));
      row.push_back(Cell::num(ic));
      row.push_back(ic != 0.0 ? Cell::num(std::log(std::abs(ic))) : Cell::null());
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

namespace {

void axis_cells(const SweepRow& r, std::vector<Cell>& row) {
  for (double v : r.axis_values) row.push_back(Cell::num(v));
}

}  // namespace

Table sweep_table(const SweepResult& result) {
  Table t;
  t.columns = result.axis_names;
  for (const char* n : {"abs_alpha_max", "E_N_max", "q_em_count", "q_em_1", "q_em_2", "q_em_3",
                        "q_em_4", "periodicity", "periodicity_residual", "lyapunov", "stable",
                        "worst_real_part", "status", "diagnostics"}) {
    t.columns.push_back(n);
  }
  for (const auto& r : result.rows) {
    std::vector<Cell> row;
    axis_cells(r, row);
    const auto& o = r.obs;
    row.push_back(Cell::num(o.abs_alpha_max));
    row.push_back(Cell::num(o.en_max));
    const auto q = o.q_em.all();
    row.push_back(Cell::whole(static_cast<long long>(q.size())));
    for (std::size_t i = 0; i < 4; ++i) row.push_back(i < q.size() ? Cell::num(q[i]) : Cell::null());
    row.push_back(Cell::str(to_string(o.periodicity.tag)));
    row.push_back(Cell::num(o.periodicity.residual));
    row.push_back(Cell::num(o.lyapunov));
    row.push_back(Cell::boolean(o.stability.stable));
    row.push_back(o.status == "divergent" ? Cell::null() : Cell::num(o.stability.worst_real_part));
    row.push_back(Cell::str(o.status));
    row.push_back(Cell::str(o.diagnostics));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table stability_table(const SweepResult& result) {
  Table t;
  t.columns = result.axis_names;
  for (const char* n : {"stable", "worst_real_part", "periodicity", "status", "diagnostics"}) {
    t.columns.push_back(n);
  }
  for (const auto& r : result.rows) {
    std::vector<Cell> row;
    axis_cells(r, row);
    const auto& o = r.obs;
    row.push_back(Cell::boolean(o.stability.stable));
    row.push_back(o.status == "divergent" ? Cell::null() : Cell::num(o.stability.worst_real_part));
    row.push_back(Cell::str(to_string(o.periodicity.tag)));
    row.push_back(Cell::str(o.status));
    row.push_back(Cell::str(o.diagnostics));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table thermal_table(const ThermalRobustness& result) {
  Table t;
  t.columns = {"lambda_gain", "temperature", "n_m", "E_N_max", "E_N_max_renormalized"};
  for (const auto& r : result.rows) {
    t.rows.push_back({Cell::num(r.lambda_gain), Cell::num(r.temperature), Cell::num(r.n_m),
                      Cell::num(r.en_max), Cell::num(r.renormalized)});
  }
  return t;
}

Table roots_table(const std::vector<RootScanRow>& rows) {
  Table t;
  t.columns = {"E"};
  for (int i = 1; i <= 4; ++i) {
    t.columns.push_back("re_" + std::to_string(i));
    t.columns.push_back("im_" + std::to_string(i));
  }
  for (const auto& r : rows) {
    std::vector<Cell> row = {Cell::num(r.E)};
    for (const auto& z : r.roots) {
      row.push_back(Cell::num(z.real()));
      row.push_back(Cell::num(z.imag()));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace optomech
