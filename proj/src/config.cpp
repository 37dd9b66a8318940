#include "acspec/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "acspec/io.hpp"
#include "acspec/kernel.hpp"

namespace acspec {

namespace {

using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

void check_keys(const ordered_json& j, const std::set<std::string>& allowed,
                const std::string& section) {
  if (!j.is_object()) fail(section + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) fail(section + ": unknown key '" + it.key() + "'");
  }
}

template <class T>
T get_or(const ordered_json& j, const std::string& key, T def, const std::string& section) {
  if (!j.contains(key)) return def;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    fail(section + "." + key + ": wrong type");
  }
}

template <class T>
T get_req(const ordered_json& j, const std::string& key, const std::string& section) {
  if (!j.contains(key)) fail(section + ": missing required key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    fail(section + "." + key + ": wrong type");
  }
}

Family parse_family(const std::string& s) {
  if (s == "identity") return Family::Identity;
  if (s == "ma") return Family::MA;
  if (s == "ar1") return Family::AR1;
  if (s == "arma11") return Family::ARMA11;
  if (s == "block") return Family::Block;
  fail("model.family: unknown family '" + s + "'");
}

const char* family_name(Family f) {
  switch (f) {
    case Family::Identity: return "identity";
    case Family::MA: return "ma";
    case Family::AR1: return "ar1";
    case Family::ARMA11: return "arma11";
    case Family::Block: return "block";
  }
  return "?";
}

InnovationLaw parse_law(const std::string& s) {
  if (s == "gaussian") return InnovationLaw::Gaussian;
  if (s == "complex-gaussian") return InnovationLaw::ComplexGaussian;
  if (s == "rademacher") return InnovationLaw::Rademacher;
  if (s == "uniform") return InnovationLaw::Uniform;
  fail("model.innovation_law: unknown law '" + s + "'");
}

const char* law_name(InnovationLaw l) {
  switch (l) {
    case InnovationLaw::Gaussian: return "gaussian";
    case InnovationLaw::ComplexGaussian: return "complex-gaussian";
    case InnovationLaw::Rademacher: return "rademacher";
    case InnovationLaw::Uniform: return "uniform";
  }
  return "?";
}

NormKind parse_norm(const std::string& s) {
  if (s == "sup") return NormKind::Sup;
  if (s == "l1") return NormKind::L1;
  if (s == "l2") return NormKind::L2;
  fail("test.norm: unknown norm '" + s + "'");
}

SpectralAtomMeasure parse_atoms(const ordered_json& jm) {
  SpectralAtomMeasure measure;
  if (!jm.contains("atoms")) return measure;
  const auto& ja = jm.at("atoms");
  if (!ja.is_array() || ja.empty()) fail("model.atoms: expected a nonempty array");
  std::vector<double> weights, bvals;
  bool any_b = false;
  for (const auto& item : ja) {
    check_keys(item, {"coords", "weight", "b"}, "model.atoms[]");
    const auto& jc = item.at("coords");
    if (!jc.is_array() || jc.empty()) fail("model.atoms[].coords: expected a nonempty array");
    SpectralPoint pt(jc.size());
    for (std::size_t k = 0; k < jc.size(); ++k) pt[static_cast<Eigen::Index>(k)] = jc[k].get<double>();
    measure.atoms.push_back(pt);
    weights.push_back(get_req<double>(item, "weight", "model.atoms[]"));
    if (item.contains("b")) {
      any_b = true;
      bvals.push_back(item.at("b").get<double>());
    } else {
      bvals.push_back(-1.0);
    }
  }
  measure.weights = Eigen::Map<Eigen::VectorXd>(weights.data(), static_cast<Eigen::Index>(weights.size()));
  if (any_b) {
    for (double b : bvals)
      if (b < 0.0) fail("model.atoms: either every atom carries 'b' or none does");
    measure.b_values = Eigen::Map<Eigen::VectorXd>(bvals.data(), static_cast<Eigen::Index>(bvals.size()));
  }
  return measure;
}

}  // namespace

const char* norm_name(NormKind k) {
  switch (k) {
    case NormKind::Sup: return "sup";
    case NormKind::L1: return "l1";
    case NormKind::L2: return "l2";
  }
  return "?";
}

RunConfig parse_config(const ordered_json& j) {
  RunConfig cfg;
  check_keys(j, {"model", "sim", "solver", "density", "test", "output"}, "config");
  if (!j.contains("model")) fail("config: missing required section 'model'");
  if (!j.contains("sim")) fail("config: missing required section 'sim'");

  // --- model ---
  const auto& jm = j.at("model");
  check_keys(jm,
             {"family", "q", "atoms", "coefficients", "innovation_law", "field", "filter",
              "rho_epsilon"},
             "model");
  ProcessModel& model = cfg.model;
  model.family = parse_family(get_req<std::string>(jm, "family", "model"));
  model.measure = parse_atoms(jm);
  if (model.measure.atoms.empty()) {
    if (model.family != Family::Identity) fail("model: 'atoms' is required for this family");
    model.measure = single_atom(0.0);
  }
  const std::string field_s = get_or<std::string>(jm, "field", "real", "model");
  if (field_s != "real" && field_s != "complex") fail("model.field: expected 'real' or 'complex'");
  model.field = (field_s == "real") ? Field::Real : Field::Complex;
  model.law = parse_law(get_or<std::string>(
      jm, "innovation_law", model.field == Field::Complex ? "complex-gaussian" : "gaussian",
      "model"));
  model.filter = get_or<std::vector<double>>(jm, "filter", {1.0}, "model");
  const double rho_eps = get_or<double>(jm, "rho_epsilon", 1e-8, "model");
  if (rho_eps <= 0.0) fail("model.rho_epsilon: must be positive");

  // --- sim (parsed early: the p-dependent truncation cap needs it) ---
  const auto& js = j.at("sim");
  check_keys(js, {"p", "n", "taus", "seed", "replicates", "use_b", "dump_data"}, "sim");
  cfg.sim.p = get_req<int>(js, "p", "sim");
  cfg.sim.n = get_req<int>(js, "n", "sim");
  cfg.sim.taus = get_or<std::vector<int>>(js, "taus", {0}, "sim");
  cfg.sim.seed = get_or<std::uint64_t>(js, "seed", 1, "sim");
  cfg.sim.replicates = get_or<int>(js, "replicates", 1, "sim");
  cfg.sim.use_b = get_or<bool>(js, "use_b", false, "sim");
  cfg.sim.dump_data = get_or<bool>(js, "dump_data", false, "sim");

  if (cfg.sim.p < 1 || cfg.sim.n < 1) fail("sim: need p >= 1 and n >= 1");
  if (cfg.sim.p > cfg.sim.n) cfg.warnings.push_back("p > n: outside the p/n -> 0 regime");
  if (cfg.sim.taus.empty()) fail("sim.taus: need at least one lag");
  for (int t : cfg.sim.taus)
    if (t < 0 || t >= cfg.sim.n) fail("sim.taus: lags must satisfy 0 <= tau < n");
  if (cfg.sim.replicates < 1) fail("sim.replicates: need at least one replicate");

  // q: explicit, or derived (coordinate count for MA, table width for block,
  // epsilon-based truncation order for the rational families).
  int q = get_or<int>(jm, "q", -1, "model");
  switch (model.family) {
    case Family::Identity:
      if (q > 0) fail("model.q: identity model has order 0");
      q = 0;
      break;
    case Family::MA:
      if (q < 0) q = model.measure.m0();
      break;
    case Family::AR1:
    case Family::ARMA11: {
      ProcessModel probe = model;
      probe.q = 1;
      const double rho = [&] {
        double r = 0.0;
        for (const auto& a : probe.measure.atoms) r = std::max(r, std::abs(a[0]));
        return r;
      }();
      if (rho >= 1.0) fail("model.atoms: rational-family roots must satisfy |phi| < 1");
      if (q < 0) {
        bool capped = false;
        q = truncation_order(rho, rho_eps, cfg.sim.p, &capped);
        q = std::max(q, 1);
        if (capped)
          cfg.warnings.push_back("epsilon-based truncation order exceeds the p^{1/4} cap; capped");
      }
      break;
    }
    case Family::Block: {
      if (!jm.contains("coefficients")) fail("model: block family needs 'coefficients'");
      const auto& jc = jm.at("coefficients");
      if (!jc.is_array() || jc.size() != model.measure.atoms.size())
        fail("model.coefficients: need one row per atom");
      const int cols = static_cast<int>(jc.front().size());
      model.block_coeffs.resize(static_cast<Eigen::Index>(jc.size()), cols);
      for (std::size_t r = 0; r < jc.size(); ++r) {
        if (static_cast<int>(jc[r].size()) != cols)
          fail("model.coefficients: rows must have equal length");
        for (int c = 0; c < cols; ++c) model.block_coeffs(static_cast<Eigen::Index>(r), c) = jc[r][c].get<double>();
      }
      if (q >= 0 && q != cols) fail("model.q: disagrees with the coefficient table width");
      q = cols;
      break;
    }
  }
  if (model.family != Family::Block && jm.contains("coefficients"))
    fail("model.coefficients: only the block family is tabulated");
  model.q = q;
  try {
    model.validate();
  } catch (const std::invalid_argument& e) {
    fail(std::string("model: ") + e.what());
  }

  // --- solver ---
  const ordered_json jsolver = j.contains("solver") ? j.at("solver") : ordered_json::object();
  check_keys(jsolver, {"tol", "max_iter", "v_min", "damping", "n_quad", "v0", "descent"}, "solver");
  cfg.solver.opts.tol = get_or<double>(jsolver, "tol", 1e-10, "solver");
  cfg.solver.opts.max_iter = get_or<int>(jsolver, "max_iter", 20000, "solver");
  cfg.solver.opts.v_min = get_or<double>(jsolver, "v_min", 1e-4, "solver");
  cfg.solver.opts.damping = get_or<double>(jsolver, "damping", 0.5, "solver");
  cfg.solver.opts.v0 = get_or<double>(jsolver, "v0", 0.0, "solver");
  cfg.solver.opts.descent = get_or<double>(jsolver, "descent", 0.7, "solver");
  cfg.solver.n_quad = get_or<int>(jsolver, "n_quad", 0, "solver");
  if (cfg.solver.opts.tol <= 0.0) fail("solver.tol: must be positive");
  if (cfg.solver.opts.max_iter < 1) fail("solver.max_iter: must be positive");
  if (cfg.solver.opts.v_min <= 0.0) fail("solver.v_min: must be positive");
  if (cfg.solver.opts.damping <= 0.0 || cfg.solver.opts.damping > 1.0)
    fail("solver.damping: must lie in (0,1]");
  if (cfg.solver.opts.descent <= 0.0 || cfg.solver.opts.descent >= 1.0)
    fail("solver.descent: must lie in (0,1)");
  // The contraction threshold comes from the coefficient bounds unless pinned.
  if (cfg.solver.opts.v0 == 0.0)
    cfg.solver.opts.v0 = std::max(1.0, std::sqrt(2.0) * cfg.model.l1_bound());
  const int max_tau = *std::max_element(cfg.sim.taus.begin(), cfg.sim.taus.end());
  if (cfg.solver.n_quad > 0) {
    if (!model.rational() && cfg.solver.n_quad < min_quad_points(model, max_tau))
      fail("solver.n_quad: below the quadrature exactness threshold for this model");
    if (model.rational() && cfg.solver.n_quad < 256)
      cfg.warnings.push_back("solver.n_quad is coarse for a rational power transfer function");
  }

  // --- density ---
  const ordered_json jd = j.contains("density") ? j.at("density") : ordered_json::object();
  check_keys(jd, {"v", "dx", "x_min", "x_max"}, "density");
  cfg.density.v = get_or<double>(jd, "v", 1e-3, "density");
  cfg.density.dx = get_or<double>(jd, "dx", 0.0, "density");
  if (cfg.density.v < cfg.solver.opts.v_min) fail("density.v: below solver.v_min");
  if (cfg.density.dx < 0.0) fail("density.dx: must be positive");
  if (cfg.density.dx == 0.0) cfg.density.dx = cfg.density.v / 2.0;
  cfg.density.auto_grid = !(jd.contains("x_min") || jd.contains("x_max"));
  if (!cfg.density.auto_grid) {
    cfg.density.x_min = get_req<double>(jd, "x_min", "density");
    cfg.density.x_max = get_req<double>(jd, "x_max", "density");
    if (!(cfg.density.x_min < cfg.density.x_max)) fail("density: need x_min < x_max");
  }

  // --- test ---
  const ordered_json jt = j.contains("test") ? j.at("test") : ordered_json::object();
  check_keys(jt, {"grid", "norm", "M", "data_file"}, "test");
  cfg.test.norm = parse_norm(get_or<std::string>(jt, "norm", "sup", "test"));
  cfg.test.M = get_or<int>(jt, "M", 199, "test");
  cfg.test.data_file = get_or<std::string>(jt, "data_file", "", "test");
  if (cfg.test.M < 19) fail("test.M: need at least 19 null replicates");
  if (jt.contains("grid")) {
    const auto& jg = jt.at("grid");
    if (jg.is_string()) {
      if (jg.get<std::string>() != "auto") fail("test.grid: expected 'auto' or a list of [re,im]");
    } else if (jg.is_array()) {
      for (const auto& zp : jg) {
        if (!zp.is_array() || zp.size() != 2) fail("test.grid: entries must be [re, im] pairs");
        const Complex z(zp[0].get<double>(), zp[1].get<double>());
        if (z.imag() < cfg.solver.opts.v_min) fail("test.grid: points need Im z >= solver.v_min");
        cfg.test.grid.push_back(z);
      }
      if (cfg.test.grid.empty()) fail("test.grid: empty grid");
    } else {
      fail("test.grid: expected 'auto' or a list of [re,im]");
    }
  }
  if (static_cast<double>(cfg.sim.p) / cfg.sim.n > 0.25)
    cfg.warnings.push_back("p/n > 0.25: the moderately-high-dimensional approximation is doubtful");

  // --- output ---
  const ordered_json jo = j.contains("output") ? j.at("output") : ordered_json::object();
  check_keys(jo, {"directory", "formats"}, "output");
  cfg.output.directory = get_or<std::string>(jo, "directory", "out", "output");
  const std::vector<std::string> formats =
      get_or<std::vector<std::string>>(jo, "formats", {"csv", "json"}, "output");
  cfg.output.csv = cfg.output.json = false;
  for (const auto& f : formats) {
    if (f == "csv")
      cfg.output.csv = true;
    else if (f == "json")
      cfg.output.json = true;
    else
      fail("output.formats: unknown format '" + f + "'");
  }
  if (!cfg.output.csv && !cfg.output.json) fail("output.formats: need at least one format");

  // --- resolved config + hash ---
  ordered_json r;
  ordered_json rm;
  rm["family"] = family_name(model.family);
  rm["q"] = model.q;
  ordered_json atoms = ordered_json::array();
  for (int i = 0; i < model.measure.size(); ++i) {
    ordered_json a;
    a["coords"] = std::vector<double>(model.measure.atoms[i].data(),
                                      model.measure.atoms[i].data() + model.measure.atoms[i].size());
    a["weight"] = model.measure.weights[i];
    if (model.measure.has_b()) a["b"] = model.measure.b_values[i];
    atoms.push_back(a);
  }
  rm["atoms"] = atoms;
  if (model.family == Family::Block) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index i = 0; i < model.block_coeffs.rows(); ++i)
      rows.push_back(std::vector<double>(model.block_coeffs.row(i).data(),
                                         model.block_coeffs.row(i).data() + model.block_coeffs.cols()));
    rm["coefficients"] = rows;
  }
  rm["innovation_law"] = law_name(model.law);
  rm["field"] = field_s;
  rm["filter"] = model.filter;
  if (model.rational()) rm["rho_epsilon"] = rho_eps;
  r["model"] = rm;
  r["sim"] = {{"p", cfg.sim.p},
              {"n", cfg.sim.n},
              {"taus", cfg.sim.taus},
              {"seed", cfg.sim.seed},
              {"replicates", cfg.sim.replicates},
              {"use_b", cfg.sim.use_b},
              {"dump_data", cfg.sim.dump_data}};
  r["solver"] = {{"tol", cfg.solver.opts.tol},     {"max_iter", cfg.solver.opts.max_iter},
                 {"v_min", cfg.solver.opts.v_min}, {"damping", cfg.solver.opts.damping},
                 {"v0", cfg.solver.opts.v0},       {"descent", cfg.solver.opts.descent},
                 {"n_quad", cfg.solver.n_quad}};
  ordered_json rd = {{"v", cfg.density.v}, {"dx", cfg.density.dx}};
  if (cfg.density.auto_grid) {
    rd["x_min"] = "auto";
    rd["x_max"] = "auto";
  } else {
    rd["x_min"] = cfg.density.x_min;
    rd["x_max"] = cfg.density.x_max;
  }
  r["density"] = rd;
  ordered_json rt;
  if (cfg.test.grid.empty()) {
    rt["grid"] = "auto";
  } else {
    ordered_json g = ordered_json::array();
    for (Complex z : cfg.test.grid) g.push_back({z.real(), z.imag()});
    rt["grid"] = g;
  }
  rt["norm"] = norm_name(cfg.test.norm);
  rt["M"] = cfg.test.M;
  if (!cfg.test.data_file.empty()) rt["data_file"] = cfg.test.data_file;
  r["test"] = rt;
  // The hash identifies the scientific run content; where the artifacts land
  // does not change what was computed.
  cfg.hash = fnv1a64(r.dump());
  r["output"] = {{"directory", cfg.output.directory},
                 {"formats", formats}};
  cfg.resolved = r;
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config file " + path);
  ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail("config parse error: " + std::string(e.what()));
  }
  return parse_config(j);
}

std::string meta_line(const RunConfig& cfg) {
  return "seed=" + std::to_string(cfg.sim.seed) + " config=" + hex64(cfg.hash) + " tool=acspec";
}

}  // namespace acspec
