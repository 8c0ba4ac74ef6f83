#include "rpent/serialize.hpp"

#include <cstdint>
#include <cstdio>

namespace rpent {

Json to_json(const CMatrix& m) {
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json rr = Json::array();
    Json ir = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ir.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

Json to_json(const RMatrix& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

Json to_json(const RVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

CMatrix complex_matrix_from_json(const Json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  CMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = Complex(j.at("re").at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c)).get<double>(),
                        j.at("im").at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c)).get<double>());
    }
  }
  return m;
}

RMatrix real_matrix_from_json(const Json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(j.at(0).size());
  RMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = j.at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c)).get<double>();
    }
  }
  return m;
}

RVector real_vector_from_json(const Json& j) {
  RVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j.at(i).get<double>();
  return v;
}

Json to_json(const SubsystemSplit& s) {
  return Json{{"label", s.label}, {"dim_a", s.dim_a}, {"dim_b", s.dim_b}, {"beta", to_json(s.beta)}};
}

SubsystemSplit split_from_json(const Json& j) {
  SubsystemSplit s{j.at("label").get<std::string>(), j.at("dim_a").get<Eigen::Index>(),
                   j.at("dim_b").get<Eigen::Index>(), complex_matrix_from_json(j.at("beta"))};
  s.validate();
  return s;
}

Json to_json(const Instance& inst) {
  Json splits = Json::array();
  for (const auto& s : inst.splits) splits.push_back(to_json(s));
  return Json{{"trial", inst.trial},
              {"rho_eigenvalues", to_json(inst.eigenvalues)},
              {"rho_eigenvectors", to_json(inst.eigenvectors)},
              {"splits", std::move(splits)}};
}

Instance instance_from_json(const Json& j) {
  Instance inst;
  inst.trial = j.at("trial").get<std::uint64_t>();
  inst.eigenvalues = real_vector_from_json(j.at("rho_eigenvalues"));
  inst.eigenvectors = complex_matrix_from_json(j.at("rho_eigenvectors"));
  for (const auto& s : j.at("splits")) inst.splits.push_back(split_from_json(s));
  return inst;
}

Json to_json(const GramRecord& g) {
  return Json{{"n", g.n},
              {"lambda", g.lambda},
              {"entries", to_json(g.entries)},
              {"min_eigenvalue", g.min_eigenvalue},
              {"spectral_norm", g.spectral_norm},
              {"leading_minors", to_json(g.leading_minors)}};
}

Json to_json(const PsdVerdict& v) {
  return Json{{"verdict", v.pass ? "PASS" : "FAIL"},
              {"min_eigenvalue", v.min_eigenvalue},
              {"spectral_norm", v.spectral_norm},
              {"relative_min_eigenvalue", v.relative_min_eigenvalue},
              {"tolerance", v.tolerance},
              {"minors_ok", v.minors_ok},
              {"witness", to_json(v.witness)}};
}

Json to_json(const DivisibilityRecord& r) {
  return Json{{"b_matrix", to_json(r.b_matrix)},
              {"det_b", r.det_b},
              {"min_eigenvalue", r.min_eigenvalue},
              {"mutual_information_mismatch", r.mutual_information_mismatch}};
}

Json to_json(const SearchConfig& c) {
  Json dims = Json::array();
  for (const auto& [a, b] : c.dims) dims.push_back(Json::array({a, b}));
  return Json{{"dims", std::move(dims)},
              {"trials", c.trials},
              {"master_seed", c.master_seed},
              {"target", to_string(c.target)},
              {"tolerance", c.tolerance},
              {"violation_threshold", c.violation_threshold},
              {"lambda", c.lambda},
              {"n_values", c.n_values},
              {"literal_s", c.literal_s},
              {"concentration", c.concentration},
              {"min_eigenvalue", c.min_eigenvalue},
              {"jobs", c.jobs}};
}

SearchConfig search_config_from_json(const Json& j) {
  SearchConfig c;
  c.dims.clear();
  for (const auto& d : j.at("dims")) c.dims.emplace_back(d.at(0).get<Eigen::Index>(), d.at(1).get<Eigen::Index>());
  c.trials = j.at("trials").get<int>();
  c.master_seed = j.at("master_seed").get<std::uint64_t>();
  c.target = parse_search_target(j.at("target").get<std::string>());
  c.tolerance = j.at("tolerance").get<double>();
  c.violation_threshold = j.at("violation_threshold").get<double>();
  c.lambda = j.at("lambda").get<double>();
  c.n_values = j.at("n_values").get<std::vector<int>>();
  c.literal_s = j.at("literal_s").get<double>();
  c.concentration = j.at("concentration").get<double>();
  c.min_eigenvalue = j.at("min_eigenvalue").get<double>();
  c.jobs = j.value("jobs", 1);
  return c;
}

Json to_json(const Violation& v) {
  return Json{{"instance", to_json(v.instance)},
              {"n", v.n},
              {"entropies", to_json(v.entropies)},
              {"tested_matrix", to_json(v.tested_matrix)},
              {"min_eigenvalue", v.min_eigenvalue},
              {"scale", v.scale},
              {"normalized_slack", v.normalized_slack},
              {"witness", to_json(v.witness)}};
}

Violation violation_from_json(const Json& j) {
  Violation v;
  v.instance = instance_from_json(j.at("instance"));
  v.n = j.at("n").get<double>();
  v.entropies = real_matrix_from_json(j.at("entropies"));
  v.tested_matrix = real_matrix_from_json(j.at("tested_matrix"));
  v.min_eigenvalue = j.at("min_eigenvalue").get<double>();
  v.scale = j.at("scale").get<double>();
  v.normalized_slack = j.at("normalized_slack").get<double>();
  v.witness = real_vector_from_json(j.at("witness"));
  return v;
}

Json to_json(const SearchReport& r) {
  Json violations = Json::array();
  for (const auto& v : r.violations) violations.push_back(to_json(v));
  return Json{{"config", to_json(r.config)},
              {"trials_run", r.trials_run},
              {"instances_checked", r.instances_checked},
              {"violation_count", r.violations.size()},
              {"outcome", r.violations.empty() ? "none found" : "violations found"},
              {"min_normalized_slack", r.min_normalized_slack},
              {"mean_normalized_slack", r.mean_normalized_slack},
              {"violations", std::move(violations)}};
}

Json to_json(const SweepConfig& c) {
  Json fixed = Json::array();
  for (const auto& [a, b] : c.fixed_dims) fixed.push_back(Json::array({a, b}));
  return Json{{"trials", c.trials},
              {"master_seed", c.master_seed},
              {"dims", c.dims},
              {"fixed_dims", std::move(fixed)},
              {"min_subsystems", c.min_subsystems},
              {"max_subsystems", c.max_subsystems},
              {"n_values", c.n_values},
              {"tolerance", c.tolerance},
              {"concentration", c.concentration},
              {"min_eigenvalue", c.min_eigenvalue},
              {"jobs", c.jobs}};
}

Json to_json(const SweepReport& r) {
  Json failures = Json::array();
  for (const auto& f : r.failures) {
    failures.push_back(Json{{"trial", f.trial},
                            {"n", f.n},
                            {"dim", f.dim},
                            {"dim_a", f.dim_a},
                            {"relative_min_eigenvalue", f.relative_min_eigenvalue}});
  }
  Json by_size = Json::object();
  for (std::size_t k = 2; k < r.checks_by_size.size(); ++k) by_size[std::to_string(k)] = r.checks_by_size[k];
  return Json{{"config", to_json(r.config)},
              {"trials_run", r.trials_run},
              {"gram_checks", r.gram_checks},
              {"checks_by_subsystem_count", std::move(by_size)},
              {"failure_count", r.failures.size()},
              {"worst_relative_min_eigenvalue", r.worst_relative_min_eigenvalue},
              {"failures", std::move(failures)}};
}

Json to_json(const spectral::SpectralDensity& g) {
  return Json{{"grid_p2", g.grid},
              {"weights", g.weights},
              {"delta_mass", g.delta_mass},
              {"delta_momentum", g.delta_momentum}};
}

Json to_json(const spectral::FitResult& r) {
  return Json{{"density", to_json(r.density)},
              {"relative_residual", r.relative_residual},
              {"max_relative_error", r.max_relative_error},
              {"perturbed_residual", r.perturbed_residual},
              {"weight_amplification", r.weight_amplification},
              {"ill_conditioned", r.ill_conditioned},
              {"converged", r.converged},
              {"active_weights", r.active_weights}};
}

Json to_json(const spectral::DerivativeReport& r) {
  return Json{{"monotone", r.monotone},
              {"concave", r.concave},
              {"c_theorem", r.c_theorem},
              {"rp_compatible", r.rp_compatible()},
              {"min_first_derivative", r.min_first},
              {"max_second_derivative", r.max_second},
              {"max_c_function", r.max_c_function},
              {"min_c_function", r.min_c_function},
              {"relative_tolerance", r.relative_tolerance},
              {"x", r.x},
              {"first", r.first},
              {"second", r.second},
              {"c_function", r.c_function}};
}

Json to_json(const cft::DerivativeInequalityReport& r) {
  Json x = Json::array(), d = Json::array(), rich = Json::array();
  for (const auto& p : r.points) {
    x.push_back(p.x);
    d.push_back(p.derivative);
    rich.push_back(p.richardson);
  }
  return Json{{"verdict", r.pass ? "PASS" : "FAIL"},
              {"min_slack", r.min_slack},
              {"tolerance", r.tolerance},
              {"x", std::move(x)},
              {"derivative", std::move(d)},
              {"richardson", std::move(rich)}};
}

Json to_json(const cft::MidpointInequalityReport& r) {
  Json x = Json::array(), y = Json::array(), z = Json::array(), s = Json::array();
  for (const auto& p : r.samples) {
    x.push_back(p.x);
    y.push_back(p.y);
    z.push_back(p.z);
    s.push_back(p.slack);
  }
  return Json{{"verdict", r.pass ? "PASS" : "FAIL"},
              {"min_slack", r.min_slack},
              {"tolerance", r.tolerance},
              {"z_in_range", r.z_in_range},
              {"x", std::move(x)},
              {"y", std::move(y)},
              {"z", std::move(z)},
              {"slack", std::move(s)}};
}

std::string content_hash(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace rpent
