#include "mfg/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "mfg/errors.hpp"

namespace mfg {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string(), {});
  return out;
}

}  // namespace

void write_csv(const std::filesystem::path& path, const std::vector<CsvColumn>& columns) {
  auto out = open_for_write(path);
  for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c].name;
  out << '\n';
  const std::size_t rows = columns.empty() ? 0 : columns.front().values.size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << format_number(columns[c].values[r]);
    out << '\n';
  }
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  auto out = open_for_write(path);
  out << j.dump(2) << '\n';
}

void write_field_slice(const std::filesystem::path& path, std::span<const double> values, const Grid& g) {
  auto out = open_for_write(path);
  out << (g.dim == 1 ? "x,value\n" : "x,y,value\n");
  for (std::size_t k = 0; k < values.size(); ++k) {
    const Point p = g.point(k);
    out << format_number(p[0]) << ',';
    if (g.dim == 2) out << format_number(p[1]) << ',';
    out << format_number(values[k]) << '\n';
  }
}

nlohmann::json to_json(const Grid& g) {
  return {{"dim", g.dim}, {"half_width", g.half_width}, {"nx", g.nx}, {"nt", g.nt},
          {"T", g.horizon}, {"dx", g.dx()},           {"dt", g.dt()}, {"layout", "x-fastest"}};
}

namespace {

nlohmann::json point_json(const Point& p, int dim) {
  return dim == 1 ? nlohmann::json::array({p[0]}) : nlohmann::json::array({p[0], p[1]});
}

}  // namespace

nlohmann::json to_json(const ProblemSpec& p) {
  nlohmann::json m0 = nlohmann::json::array();
  for (const auto& c : p.data.m0)
    m0.push_back({{"weight", c.weight}, {"mean", point_json(c.mean, p.dim)}, {"stddev", c.stddev}});
  nlohmann::json potential{{"family", to_string(p.potential.family)}};
  if (p.potential.family == PotentialFamily::UserTable) {
    potential["table_start"] = p.potential.table_start;
    potential["table_step"] = p.potential.table_step;
    potential["table_values"] = p.potential.table_values;
  } else if (p.potential.family != PotentialFamily::Zero) {
    potential["amplitude"] = p.potential.amplitude;
    potential["width"] = p.potential.width;
    potential["center"] = point_json(p.potential.center, p.dim);
  }
  nlohmann::json uT{{"family", to_string(p.data.uT.family)}};
  if (p.data.uT.family != TerminalFamily::Zero) {
    uT["scale"] = p.data.uT.scale;
    uT["width"] = p.data.uT.width;
    uT["center"] = point_json(p.data.uT.center, p.dim);
  }
  return {{"dim", p.dim},
          {"T", p.horizon},
          {"sigma", p.coupling.sigma},
          {"alpha", p.coupling.alpha},
          {"potential", potential},
          {"m0", m0},
          {"uT", uT}};
}

nlohmann::json to_json(const SolverConfig& s) {
  return {{"damping", s.damping},
          {"tol", s.tol},
          {"max_iter", s.max_iter},
          {"divergence_cap", s.divergence_cap},
          {"time_scheme", s.parabolic.scheme == TimeScheme::ImplicitEuler ? "implicit_euler" : "crank_nicolson"}};
}

nlohmann::json to_json(const ConditionReport& r) {
  const auto one = [](const ConditionCheck& c) { return nlohmann::json{{"holds", c.holds}, {"margin", c.margin}}; };
  return {{"coupling", one(r.coupling)},
          {"potential", one(r.potential)},
          {"terminal", one(r.terminal)},
          {"density", one(r.density)},
          {"all", r.all()}};
}

nlohmann::json to_json(const Certificate& c) {
  nlohmann::json j{{"e0", c.e0},
                   {"h0", c.h0},
                   {"conditions", to_json(c.conditions)},
                   {"shift", {c.shift[0], c.shift[1]}},
                   {"shift_optimized", c.shift_optimized}};
  j["T_star"] = c.T_star ? nlohmann::json(*c.T_star) : nlohmann::json(nullptr);
  if (c.T_hat_planning || c.hT != 0.0) {
    j["hT"] = c.hT;
    j["T_hat_planning"] = c.T_hat_planning ? nlohmann::json(*c.T_hat_planning) : nlohmann::json(nullptr);
  }
  return j;
}

nlohmann::json to_json(const AprioriReport& a) {
  return {{"D", a.D},         {"two_over_q", a.two_over_q}, {"q", a.q},         {"delta", a.delta},
          {"beta", a.beta},   {"theta", a.theta},           {"m", a.m_exponent}, {"a", a.a},
          {"note", "exponents recorded for reference; the constant C of the a-priori bound is not explicit"}};
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create directory " + dir.string() + ": " + ec.message(), {});
}

}  // namespace mfg
