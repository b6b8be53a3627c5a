#include "mfg/config.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "mfg/errors.hpp"

namespace mfg {

namespace pt = boost::property_tree;

Grid GridSpec::for_horizon(int dim, double T, double reference_T) const {
  int steps = 0;
  if (dt) {
    steps = static_cast<int>(std::ceil(T / *dt - 1e-9));
  } else {
    const int base = nt.value_or(100);
    steps = static_cast<int>(std::lround(base * T / reference_T));
  }
  return Grid::make(dim, half_width, nx, std::max(steps, 1), T);
}

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"problem",
       {"dim", "T", "sigma", "alpha", "potential", "potential_amplitude", "potential_width", "potential_center",
        "potential_table_start", "potential_table_step", "potential_table_values", "m0_weights", "m0_means",
        "m0_stddevs", "uT", "uT_scale", "uT_width", "uT_center", "mT_weights", "mT_means", "mT_stddevs"}},
      {"grid", {"half_width", "nx", "nt", "dt"}},
      {"solver", {"damping", "tol", "max_iter", "divergence_cap", "time_scheme", "backend"}},
      {"sweep", {"sigma", "T", "workers", "refine", "max_refinements"}},
      {"longtime", {"T_list"}},
      {"output", {"field_snapshots", "optimize_shift"}},
  };
  return s;
}

// Collects every problem instead of stopping at the first one.
class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  const pt::ptree* section(const std::string& name) const {
    const auto it = tree_.find(name);
    return it == tree_.not_found() ? nullptr : &it->second;
  }

  std::optional<std::string> text(const std::string& sec, const std::string& key) const {
    const auto* s = section(sec);
    if (!s) return std::nullopt;
    const auto v = s->get_optional<std::string>(key);
    if (!v) return std::nullopt;
    return *v;
  }

  template <class T>
  void number(const std::string& sec, const std::string& key, T& out) {
    const auto t = text(sec, key);
    if (!t) return;
    std::istringstream is(*t);
    T v{};
    if (!(is >> v) || !(is >> std::ws).eof()) {
      bad(key);
      return;
    }
    out = v;
  }

  template <class T>
  void number(const std::string& sec, const std::string& key, std::optional<T>& out) {
    if (!text(sec, key)) return;
    T v{};
    number(sec, key, v);
    out = v;
  }

  void flag(const std::string& sec, const std::string& key, bool& out) {
    const auto t = text(sec, key);
    if (!t) return;
    if (*t == "true" || *t == "1" || *t == "yes") {
      out = true;
    } else if (*t == "false" || *t == "0" || *t == "no") {
      out = false;
    } else {
      bad(key);
    }
  }

  std::vector<double> list(const std::string& sec, const std::string& key) {
    const auto t = text(sec, key);
    if (!t) return {};
    return parse_list(*t, key);
  }

  // ';'-separated groups of coordinates.
  std::vector<Point> points(const std::string& sec, const std::string& key, int dim) {
    std::vector<Point> out;
    const auto t = text(sec, key);
    if (!t) return out;
    std::stringstream ss(*t);
    std::string group;
    while (std::getline(ss, group, ';')) {
      const auto v = parse_list(group, key);
      if (v.empty()) continue;
      if (static_cast<int>(v.size()) != dim) {
        bad(key);
        return {};
      }
      out.push_back({v[0], dim == 2 ? v[1] : 0.0});
    }
    return out;
  }

  std::optional<Point> point(const std::string& sec, const std::string& key, int dim) {
    const auto p = points(sec, key, dim);
    if (!text(sec, key)) return std::nullopt;
    if (p.size() != 1) {
      bad(key);
      return std::nullopt;
    }
    return p[0];
  }

  void bad(const std::string& key) { bad_.push_back(key); }
  const std::vector<std::string>& bad_keys() const { return bad_; }

 private:
  std::vector<double> parse_list(std::string s, const std::string& key) {
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream is(s);
    std::vector<double> v;
    std::string tok;
    while (is >> tok) {
      try {
        std::size_t used = 0;
        v.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        bad(key);
        return {};
      }
    }
    return v;
  }

  const pt::ptree& tree_;
  std::vector<std::string> bad_;
};

std::vector<GaussianComponent> mixture(Reader& r, const std::string& prefix, int dim) {
  const auto weights = r.list("problem", prefix + "_weights");
  const auto means = r.points("problem", prefix + "_means", dim);
  const auto stddevs = r.list("problem", prefix + "_stddevs");
  const std::size_t n = std::max({weights.size(), means.size(), stddevs.size()});
  if (n == 0) return {};
  // A single value is shared by every component.
  const auto fits = [&](std::size_t size) { return size == n || size <= 1; };
  if (!fits(weights.size())) r.bad(prefix + "_weights");
  if (!fits(means.size())) r.bad(prefix + "_means");
  if (!fits(stddevs.size())) r.bad(prefix + "_stddevs");
  if (!fits(weights.size()) || !fits(means.size()) || !fits(stddevs.size())) return {};
  std::vector<GaussianComponent> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!weights.empty()) out[i].weight = weights[weights.size() == 1 ? 0 : i];
    if (!means.empty()) out[i].mean = means[means.size() == 1 ? 0 : i];
    if (!stddevs.empty()) out[i].stddev = stddevs[stddevs.size() == 1 ? 0 : i];
  }
  return out;
}

bool ascending(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) return false;
  return true;
}

}  // namespace

RunConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
  }

  std::vector<std::string> unknown;
  for (const auto& [sec, body] : tree) {
    const auto it = schema().find(sec);
    if (it == schema().end()) {
      unknown.push_back(sec);
      continue;
    }
    for (const auto& [key, value] : body)
      if (!it->second.count(key)) unknown.push_back(key);
  }
  if (!unknown.empty()) {
    std::string msg = "unknown config keys:";
    for (const auto& k : unknown) msg += " " + k;
    throw ConfigError(msg, unknown);
  }

  Reader r(tree);
  RunConfig c;
  ProblemSpec& p = c.problem;
  r.number("problem", "dim", p.dim);
  r.number("problem", "T", p.horizon);
  r.number("problem", "sigma", p.coupling.sigma);
  r.number("problem", "alpha", p.coupling.alpha);
  const int dim = (p.dim == 2) ? 2 : 1;

  if (const auto fam = r.text("problem", "potential")) {
    static const std::map<std::string, PotentialFamily> families{{"zero", PotentialFamily::Zero},
                                                                 {"gaussian_well", PotentialFamily::GaussianWell},
                                                                 {"cosine_bump", PotentialFamily::CosineBump},
                                                                 {"user_table", PotentialFamily::UserTable}};
    const auto it = families.find(*fam);
    if (it == families.end()) {
      r.bad("potential");
    } else {
      p.potential.family = it->second;
    }
  }
  r.number("problem", "potential_amplitude", p.potential.amplitude);
  r.number("problem", "potential_width", p.potential.width);
  if (const auto pc = r.point("problem", "potential_center", dim)) p.potential.center = *pc;
  r.number("problem", "potential_table_start", p.potential.table_start);
  r.number("problem", "potential_table_step", p.potential.table_step);
  p.potential.table_values = r.list("problem", "potential_table_values");

  if (auto m0 = mixture(r, "m0", dim); !m0.empty()) p.data.m0 = std::move(m0);
  c.mT = mixture(r, "mT", dim);

  if (const auto fam = r.text("problem", "uT")) {
    static const std::map<std::string, TerminalFamily> families{
        {"zero", TerminalFamily::Zero}, {"log", TerminalFamily::Log}, {"gaussian", TerminalFamily::Gaussian}};
    const auto it = families.find(*fam);
    if (it == families.end()) {
      r.bad("uT");
    } else {
      p.data.uT.family = it->second;
    }
  }
  r.number("problem", "uT_scale", p.data.uT.scale);
  r.number("problem", "uT_width", p.data.uT.width);
  if (const auto uc = r.point("problem", "uT_center", dim)) p.data.uT.center = *uc;

  r.number("grid", "half_width", c.grid.half_width);
  r.number("grid", "nx", c.grid.nx);
  r.number("grid", "nt", c.grid.nt);
  r.number("grid", "dt", c.grid.dt);
  if (c.grid.nt && c.grid.dt) {
    r.bad("nt");
    r.bad("dt");
  }
  if (c.grid.nt && *c.grid.nt < 1) r.bad("nt");
  if (c.grid.dt && !(*c.grid.dt > 0.0)) r.bad("dt");

  r.number("solver", "damping", c.solver.damping);
  r.number("solver", "tol", c.solver.tol);
  r.number("solver", "max_iter", c.solver.max_iter);
  r.number("solver", "divergence_cap", c.solver.divergence_cap);
  if (const auto s = r.text("solver", "time_scheme")) {
    if (*s == "implicit_euler") {
      c.solver.parabolic.scheme = TimeScheme::ImplicitEuler;
    } else if (*s == "crank_nicolson") {
      c.solver.parabolic.scheme = TimeScheme::CrankNicolson;
    } else {
      r.bad("time_scheme");
    }
  }
  if (const auto b = r.text("solver", "backend")) {
    if (*b == "auto") {
      c.solver.parabolic.backend = kernels::Backend::Auto;
    } else if (*b == "serial") {
      c.solver.parabolic.backend = kernels::Backend::Serial;
    } else if (*b == "openmp") {
      c.solver.parabolic.backend = kernels::Backend::OpenMP;
    } else {
      r.bad("backend");
    }
  }

  c.sweep.sigma = r.list("sweep", "sigma");
  c.sweep.T = r.list("sweep", "T");
  r.number("sweep", "workers", c.sweep.workers);
  r.flag("sweep", "refine", c.sweep.refine);
  r.number("sweep", "max_refinements", c.sweep.max_refinements);
  if (!ascending(c.sweep.sigma)) r.bad("sigma");
  if (!ascending(c.sweep.T)) r.bad("T");
  if (c.sweep.workers < 0) r.bad("workers");
  if (c.sweep.max_refinements < 0) r.bad("max_refinements");

  c.longtime.T_list = r.list("longtime", "T_list");
  if (!ascending(c.longtime.T_list)) r.bad("T_list");
  for (double t : c.longtime.T_list)
    if (!(t > 0.0)) r.bad("T_list");

  r.number("output", "field_snapshots", c.output.field_snapshots);
  r.flag("output", "optimize_shift", c.output.optimize_shift);
  if (c.output.field_snapshots < 0) r.bad("field_snapshots");

  std::vector<std::string> bad = r.bad_keys();
  try {
    validate(p);
  } catch (const ConfigError& e) {
    bad.insert(bad.end(), e.keys().begin(), e.keys().end());
  }
  try {
    c.solver.validate();
  } catch (const ConfigError& e) {
    bad.insert(bad.end(), e.keys().begin(), e.keys().end());
  }
  if (!(c.grid.half_width > 0.0)) bad.emplace_back("half_width");
  if (c.grid.nx < 3 || c.grid.nx % 2 == 0) bad.emplace_back("nx");
  if (!c.mT.empty()) {
    ProblemSpec target = p;
    target.data.m0 = c.mT;
    try {
      validate(target);
    } catch (const ConfigError& e) {
      for (const auto& k : e.keys())
        if (k.rfind("m0_", 0) == 0) bad.push_back("mT_" + k.substr(3));
    }
  }

  if (!bad.empty()) {
    std::sort(bad.begin(), bad.end());
    bad.erase(std::unique(bad.begin(), bad.end()), bad.end());
    std::string msg = "invalid config keys:";
    for (const auto& k : bad) msg += " " + k;
    throw ConfigError(msg, bad);
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string(), {});
  return parse_config(in);
}

}  // namespace mfg
