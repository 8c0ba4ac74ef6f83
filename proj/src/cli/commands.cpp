#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "rpent/bessel.hpp"
#include "rpent/cli.hpp"

namespace rpent::cli {

namespace fs = std::filesystem;

namespace {

struct Context {
  std::string subcommand;
  std::uint64_t seed = 42;
  fs::path out_dir;
  int jobs = 1;
  std::ostream* out = nullptr;
};

Context read_common(ConfigReader& r, const std::string& subcommand, std::ostream& out) {
  Context ctx;
  ctx.subcommand = subcommand;
  ctx.out = &out;
  const std::string declared = r.get_string("subcommand", subcommand);
  if (declared != subcommand) {
    throw ConfigError("config declares subcommand '" + declared + "' but '" + subcommand + "' was run");
  }
  ctx.seed = r.get_uint64("seed", 42);
  const char* env = std::getenv(kOutDirEnv);
  ctx.out_dir = r.get_string("out", env && *env ? env : "rpent-out");
  ctx.jobs = r.get_int("jobs", 1);
  if (ctx.jobs < 1) throw ConfigError("jobs must be >= 1");
  return ctx;
}

template <typename F>
void validated(F&& check) {
  try {
    check();
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
}

Json report_header(const Context& ctx, Json config) {
  if (!config.contains("master_seed")) config["seed"] = ctx.seed;
  config["jobs"] = ctx.jobs;
  return Json{{"tool", kToolName}, {"version", kToolVersion}, {"subcommand", ctx.subcommand}, {"config", config}};
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

fs::path write_report(const Context& ctx, const Json& report) {
  fs::create_directories(ctx.out_dir);
  const fs::path path = ctx.out_dir / (ctx.subcommand + ".json");
  write_text(path, report.dump(2) + "\n");
  const Json meta{{"report", path.filename().string()}, {"created_utc", utc_timestamp()}};
  write_text(ctx.out_dir / (ctx.subcommand + ".meta.json"), meta.dump(2) + "\n");
  *ctx.out << "report: " << path.string() << "\n";
  return path;
}

std::string fixed(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

// ---------------------------------------------------------------------------

int cmd_gram_sweep(ConfigReader& r, const Context& ctx) {
  SweepConfig c;
  c.master_seed = ctx.seed;
  c.jobs = ctx.jobs;
  c.trials = r.get_int("trials", c.trials);
  r.get_dims("dims", &c.dims, &c.fixed_dims);
  c.n_values = r.get_int_list("n", c.n_values);
  c.tolerance = r.get_double("tolerance", c.tolerance);
  c.min_subsystems = r.get_int("min_subsystems", c.min_subsystems);
  c.max_subsystems = r.get_int("max_subsystems", c.max_subsystems);
  c.concentration = r.get_double("concentration", c.concentration);
  c.min_eigenvalue = r.get_double("min_eigenvalue", c.min_eigenvalue);
  r.finish();
  validated([&] { c.validate(); });

  const SweepReport rep = theorem_sweep(c);
  Json report = report_header(ctx, to_json(c));
  Json result = to_json(rep);
  result.erase("config");
  report["outcome"] = rep.failures.empty() ? "all PSD" : "PSD violations found";
  report["result"] = std::move(result);
  write_report(ctx, report);
  *ctx.out << "gram-sweep: trials=" << rep.trials_run << " checks=" << rep.gram_checks
           << " failures=" << rep.failures.size()
           << " worst_relative_min_eigenvalue=" << fixed(rep.worst_relative_min_eigenvalue) << "\n";
  return rep.failures.empty() ? kExitPass : kExitCounterexample;
}

// ---------------------------------------------------------------------------

double search_threshold(const SearchConfig& c) {
  return c.target == SearchTarget::IntegerN ? c.tolerance : c.violation_threshold;
}

int replay_fixture(const std::string& path, const Context& ctx) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open fixture '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const Json fx = parse_config_text(buf.str(), path);
  SearchConfig config;
  Violation stored;
  validated([&] {
    try {
      config = search_config_from_json(fx.at("config"));
      stored = violation_from_json(fx.at("violation"));
    } catch (const Json::exception& e) {
      throw ConfigError(path + ": not a search fixture (" + e.what() + ")");
    }
    config.validate();
  });
  const Violation fresh = reverify(stored, config);
  const double drift = std::abs(fresh.normalized_slack - stored.normalized_slack);
  const bool reproduced = fresh.normalized_slack < -10.0 * config.tolerance &&
                          fresh.normalized_slack < -search_threshold(config) &&
                          drift <= 1e-9 * std::max(1.0, std::abs(stored.normalized_slack));
  Json report{{"tool", kToolName},
              {"version", kToolVersion},
              {"subcommand", ctx.subcommand},
              {"fixture", fs::path(path).filename().string()},
              {"config", to_json(config)},
              {"stored_normalized_slack", stored.normalized_slack},
              {"recomputed_normalized_slack", fresh.normalized_slack},
              {"drift", drift},
              {"reproduced", reproduced},
              {"witness", to_json(fresh.witness)}};
  Context replay_ctx = ctx;
  replay_ctx.subcommand = "search-replay";
  write_report(replay_ctx, report);
  *ctx.out << "search replay: slack=" << fixed(fresh.normalized_slack) << " reproduced=" << (reproduced ? "yes" : "no")
           << "\n";
  return reproduced ? kExitPass : kExitNumerics;
}

int cmd_search(ConfigReader& r, const Context& ctx) {
  const std::string replay = r.get_string("replay", "");
  SearchConfig c;
  c.master_seed = ctx.seed;
  c.jobs = ctx.jobs;
  c.dims = {{2, 2}, {2, 2}};
  c.trials = r.get_int("trials", c.trials);
  r.get_dims("dims", nullptr, &c.dims);
  validated([&] { c.target = parse_search_target(r.get_string("target", to_string(c.target))); });
  const auto lambdas = r.get_double_list("lambda", {c.lambda});
  if (lambdas.size() != 1) throw ConfigError("search takes a single lambda");
  c.lambda = lambdas.front();
  c.n_values = r.get_int_list("n", c.n_values);
  c.tolerance = r.get_double("tolerance", c.tolerance);
  c.violation_threshold = r.get_double("violation_threshold", c.violation_threshold);
  c.literal_s = r.get_double("literal_s", c.literal_s);
  c.concentration = r.get_double("concentration", c.concentration);
  c.min_eigenvalue = r.get_double("min_eigenvalue", c.min_eigenvalue);
  r.finish();
  if (!replay.empty()) return replay_fixture(replay, ctx);
  validated([&] { c.validate(); });

  const SearchReport rep = counterexample_search(c);
  const fs::path fixture_dir = ctx.out_dir / "fixtures";
  Json fixtures = Json::array();
  for (const auto& v : rep.violations) {
    const Json fx{{"kind", "search_violation"}, {"version", kToolVersion}, {"config", to_json(c)}, {"violation", to_json(v)}};
    const std::string text = fx.dump(2) + "\n";
    const std::string name = content_hash(text) + ".json";
    fs::create_directories(fixture_dir);
    write_text(fixture_dir / name, text);
    fixtures.push_back("fixtures/" + name);
  }
  Json report = report_header(ctx, to_json(c));
  Json result = to_json(rep);
  result.erase("config");
  report["result"] = std::move(result);
  report["fixtures"] = std::move(fixtures);
  write_report(ctx, report);
  *ctx.out << "search[" << to_string(c.target) << "]: trials=" << rep.trials_run
           << " violations=" << rep.violations.size() << " min_normalized_slack=" << fixed(rep.min_normalized_slack)
           << "\n";
  if (c.target == SearchTarget::IntegerN && !rep.violations.empty()) return kExitCounterexample;
  return kExitPass;
}

// ---------------------------------------------------------------------------

fermion::IntervalSet reference_set(std::size_t p, double cutoff) {
  std::vector<std::pair<double, double>> iv;
  for (std::size_t i = 0; i < p; ++i) iv.emplace_back(2.0 * static_cast<double>(i), 2.0 * static_cast<double>(i) + 1.0);
  return fermion::IntervalSet(std::move(iv), cutoff);
}

double vertex_offset(const fermion::IntervalSet& set, double lambda) {
  return fermion::gaussian_vertex_correlator(fermion::vertex_charges(set, lambda)) + lambda * fermion::entropy(set);
}

int cmd_fermion(ConfigReader& r, const Context& ctx) {
  const int trials = r.get_int("trials", 1000);
  const int max_intervals = r.get_int("max_intervals", 6);
  const int max_sets = r.get_int("max_sets", 4);
  const auto lambdas = r.get_double_list("lambda", {0.1, 1.0, 6.0, 10.0});
  const auto ns = r.get_double_list("n", {1.0, 2.0, 3.0, 4.0, 5.0});
  const double tolerance = r.get_double("tolerance", 1e-10);
  const double duality_tolerance = r.get_double("duality_tolerance", 1e-12);
  const double cutoff = r.get_double("cutoff", 1.0);
  const double span = r.get_double("span", 10.0);
  r.finish();
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (max_intervals < 1 || max_intervals > 8) throw ConfigError("max_intervals must be in 1..8");
  if (max_sets < 2) throw ConfigError("max_sets must be >= 2");
  if (!(span > 1.0)) throw ConfigError("span must be > 1");
  if (!(cutoff > 0.0)) throw ConfigError("cutoff must be positive");
  for (double l : lambdas) {
    if (!(l > 0.0)) throw ConfigError("lambda values must be positive");
  }
  for (double n : ns) {
    if (!(n > 0.0)) throw ConfigError("n values must be positive");
  }

  // One additive constant per (p, lambda), fixed on a reference configuration.
  std::map<std::pair<int, std::size_t>, double> calibration;
  for (int p = 1; p <= max_intervals; ++p) {
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
      calibration[{p, k}] = vertex_offset(reference_set(static_cast<std::size_t>(p), cutoff), lambdas[k]);
    }
  }

  std::ostringstream identities_csv;
  identities_csv << "trial,p,entropy,wick_cauchy_rel,duality_abs,renyi_abs,vertex_abs\n";
  identities_csv << std::setprecision(17);
  std::ostringstream divisibility_csv;
  divisibility_csv << "trial,sets,lambda,relative_min_eigenvalue,pass\n";
  divisibility_csv << std::setprecision(17);

  double max_wick = 0.0, max_duality = 0.0, max_renyi = 0.0, max_vertex = 0.0;
  double worst_gram = 0.0, worst_b = 0.0, min_three_set = 0.0;
  int gram_checks = 0, gram_failures = 0, three_set_checks = 0;
  bool have_three = false;
  for (int t = 0; t < trials; ++t) {
    Rng rng = trial_stream(ctx.seed, static_cast<std::uint64_t>(t));
    std::uniform_int_distribution<int> pick_p(1, max_intervals);
    const int p = pick_p(rng);
    const auto set = fermion::random_interval_set(static_cast<std::size_t>(p), rng, -span, span, 1e-3, cutoff);
    const double s = fermion::entropy(set);
    const double wick = fermion::correlator_wick(set);
    const double cauchy = fermion::correlator_cauchy(set);
    const double wick_rel = std::abs(wick - cauchy) / std::abs(cauchy);
    const double log_c = fermion::log_correlator_cauchy(set);
    const double duality = std::abs(log_c - fermion::log_correlator_from_entropy(set)) / std::max(1.0, std::abs(log_c));
    double renyi_res = 0.0;
    for (double n : ns) {
      renyi_res = std::max(renyi_res, std::abs(fermion::renyi(set, n) - (1.0 + n) / (2.0 * n) * s) /
                                          std::max(1.0, std::abs(s)));
    }
    double vertex_res = 0.0;
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
      const double off = vertex_offset(set, lambdas[k]) - calibration[{p, k}];
      vertex_res = std::max(vertex_res, std::abs(off) / std::max(1.0, std::abs(lambdas[k] * s)));
    }
    max_wick = std::max(max_wick, wick_rel);
    max_duality = std::max(max_duality, duality);
    max_renyi = std::max(max_renyi, renyi_res);
    max_vertex = std::max(max_vertex, vertex_res);
    identities_csv << t << "," << p << "," << s << "," << wick_rel << "," << duality << "," << renyi_res << ","
                   << vertex_res << "\n";

    std::uniform_int_distribution<int> pick_sets(2, max_sets);
    std::uniform_int_distribution<int> pick_pieces(1, 2);
    const int count = pick_sets(rng);
    std::vector<fermion::IntervalSet> sets;
    for (int k = 0; k < count; ++k) {
      sets.push_back(fermion::random_interval_set(static_cast<std::size_t>(pick_pieces(rng)), rng, 0.1, span, 1e-3, cutoff));
    }
    for (double lambda : lambdas) {
      const PsdVerdict verdict = check_psd(fermion::divisibility_witness(sets, lambda), tolerance);
      ++gram_checks;
      gram_failures += verdict.pass ? 0 : 1;
      worst_gram = std::min(worst_gram, verdict.relative_min_eigenvalue);
      divisibility_csv << t << "," << count << "," << lambda << "," << verdict.relative_min_eigenvalue << ","
                       << (verdict.pass ? 1 : 0) << "\n";
    }
    const RMatrix table = fermion::reflected_entropy_table(sets);
    const DivisibilityRecord rec = divisibility_matrix(table);
    const double scale = std::max(1.0, table.cwiseAbs().maxCoeff());
    worst_b = std::min(worst_b, rec.min_eigenvalue / scale);
    if (count == 3) {
      const double slack = three_set_inequality(table(0, 1), table(0, 2), table(1, 2), table(0, 0), table(1, 1), table(2, 2));
      const double rel = slack / (scale * scale);
      min_three_set = have_three ? std::min(min_three_set, rel) : rel;
      have_three = true;
      ++three_set_checks;
    }
  }

  const bool identities_ok = max_wick <= tolerance && max_duality <= duality_tolerance && max_renyi <= duality_tolerance &&
                             max_vertex <= duality_tolerance;
  const bool divisibility_ok = gram_failures == 0 && worst_b >= -tolerance && (!have_three || min_three_set >= -tolerance);

  Json config{{"trials", trials},       {"max_intervals", max_intervals}, {"max_sets", max_sets},
              {"lambda", lambdas},      {"n", ns},                        {"tolerance", tolerance},
              {"duality_tolerance", duality_tolerance}, {"cutoff", cutoff}, {"span", span}};
  Json report = report_header(ctx, config);
  report["identities"] = Json{{"max_wick_cauchy_relative", max_wick},
                              {"max_duality_residual", max_duality},
                              {"max_renyi_factor_residual", max_renyi},
                              {"max_vertex_residual", max_vertex},
                              {"verdict", identities_ok ? "PASS" : "FAIL"}};
  report["divisibility"] = Json{{"gram_checks", gram_checks},
                                {"gram_failures", gram_failures},
                                {"worst_relative_min_eigenvalue", worst_gram},
                                {"worst_b_min_eigenvalue", worst_b},
                                {"three_set_checks", three_set_checks},
                                {"min_three_set_slack", have_three ? Json(min_three_set) : Json(nullptr)},
                                {"verdict", divisibility_ok ? "PASS" : "FAIL"}};
  report["tables"] = Json::array({"fermion_identities.csv", "fermion_divisibility.csv"});
  write_report(ctx, report);
  write_text(ctx.out_dir / "fermion_identities.csv", identities_csv.str());
  write_text(ctx.out_dir / "fermion_divisibility.csv", divisibility_csv.str());
  *ctx.out << "fermion: trials=" << trials << " wick/cauchy=" << fixed(max_wick) << " duality=" << fixed(max_duality)
           << " vertex=" << fixed(max_vertex) << " gram_failures=" << gram_failures << "\n";
  return identities_ok && divisibility_ok ? kExitPass : kExitNumerics;
}

// ---------------------------------------------------------------------------

std::vector<double> logspace(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    out[i] = lo * std::pow(hi / lo, t);
  }
  return out;
}

spectral::SpectralDensity two_spike() {
  spectral::SpectralDensity g;
  // Both spikes sit on nodes of the 121-point fit grid over [1e-3, 1e3].
  g.grid = {1.0, 10.0};
  g.weights = {0.7, 0.3};
  return g;
}

spectral::EntropyCurve curve_from_density(const spectral::SpectralDensity& g, const std::vector<double>& x, double lambda) {
  spectral::EntropyCurve c;
  c.x = x;
  c.lambda = lambda;
  for (double xi : x) c.entropy.push_back(-spectral::log_forward(g, xi) / lambda);
  return c;
}

int cmd_kl(ConfigReader& r, const Context& ctx) {
  const std::string curve_path = r.get_string("curve", "");
  const auto lambdas = r.get_double_list("lambda", {1.0});
  const double p_min = r.get_double("p_min", 1e-5);
  const double p_max = r.get_double("p_max", 1e5);
  const int grid_size = r.get_int("grid_size", 120);
  const double tolerance = r.get_double("tolerance", 1e-6);
  const double derivative_tolerance = r.get_double("derivative_tolerance", 1e-3);
  const double ridge = r.get_double("ridge", 0.0);
  const auto resolutions = r.get_int_list("resolutions", {30, 60, 120});
  const double mass = r.get_double("mass", 1.0);
  r.finish();
  if (lambdas.size() != 1 || !(lambdas.front() > 0.0)) throw ConfigError("kl takes a single positive lambda");
  if (!(p_min > 0.0) || !(p_max > p_min) || grid_size < 2) throw ConfigError("bad momentum grid");
  if (!(mass > 0.0)) throw ConfigError("mass must be positive");
  for (int n : resolutions) {
    if (n < 2) throw ConfigError("resolutions must be >= 2");
  }
  spectral::FitOptions options;
  options.ridge = ridge;
  const auto p2 = spectral::log_momentum_grid(p_min, p_max, static_cast<std::size_t>(grid_size));

  Json config{{"curve", curve_path},     {"lambda", lambdas.front()},   {"p_min", p_min},
              {"p_max", p_max},          {"grid_size", grid_size},      {"tolerance", tolerance},
              {"derivative_tolerance", derivative_tolerance}, {"ridge", ridge}, {"resolutions", resolutions},
              {"mass", mass}};
  Json report = report_header(ctx, config);

  if (!curve_path.empty()) {
    spectral::EntropyCurve curve;
    validated([&] { curve = spectral::load_curve_csv(curve_path, lambdas.front()); });
    const auto fit = spectral::fit_spectral(curve, p2, options);
    std::vector<std::size_t> sizes(resolutions.begin(), resolutions.end());
    Json resolution = Json::array();
    for (const auto& pt : spectral::residual_vs_resolution(curve, p_min, p_max, sizes, options)) {
      resolution.push_back(Json{{"grid_size", pt.grid_size}, {"relative_residual", pt.relative_residual}});
    }
    report["fit"] = to_json(fit);
    report["residual_vs_resolution"] = std::move(resolution);
    report["derivatives"] = to_json(spectral::derivative_checks(curve, derivative_tolerance));
    write_report(ctx, report);
    *ctx.out << "kl: curve=" << curve_path << " relative_residual=" << fixed(fit.relative_residual) << "\n";
    return kExitPass;
  }

  bool ok = true;

  // Round trip: data from a known two-spike density, checked on held-out x.
  const auto x_fit = logspace(1e-2, 10.0, 80);
  std::vector<double> x_held;
  for (std::size_t i = 0; i + 1 < x_fit.size(); ++i) x_held.push_back(std::sqrt(x_fit[i] * x_fit[i + 1]));
  const auto g2 = two_spike();
  const auto fit = spectral::fit_spectral(curve_from_density(g2, x_fit, 1.0), spectral::log_momentum_grid(1e-3, 1e3, 121), options);
  std::vector<double> held_target;
  for (double x : x_held) held_target.push_back(spectral::forward(g2, x));
  const double held_error = spectral::data_space_error(fit.density, x_held, held_target);
  const bool round_trip_ok = held_error <= tolerance;
  ok = ok && round_trip_ok;
  report["round_trip"] = Json{{"spikes_p2", g2.grid},
                              {"spike_weights", g2.weights},
                              {"fit_relative_residual", fit.relative_residual},
                              {"held_out_max_relative_error", held_error},
                              {"ill_conditioned", fit.ill_conditioned},
                              {"verdict", round_trip_ok ? "PASS" : "FAIL"}};

  // Gapped decay: density on p >= 2M.
  spectral::SpectralDensity gapped;
  gapped.grid = spectral::log_momentum_grid(2.0 * mass, 40.0 * mass, 200);
  gapped.weights.assign(gapped.grid.size(), 1.0 / static_cast<double>(gapped.grid.size()));
  const double rate = spectral::decay_rate(gapped, 30.0 / mass, 80.0 / mass);
  const double rate_error = std::abs(rate - 2.0 * mass) / (2.0 * mass);
  const bool decay_ok = rate_error <= 0.02;
  ok = ok && decay_ok;
  report["decay"] = Json{{"mass", mass},
                         {"estimated_rate", rate},
                         {"expected_rate", 2.0 * mass},
                         {"relative_error", rate_error},
                         {"verdict", decay_ok ? "PASS" : "FAIL"}};

  // Derivative sign patterns.
  const auto x_d = logspace(0.1, 10.0, 400);
  struct Case {
    std::string name;
    spectral::EntropyCurve curve;
    bool expect_c_theorem;
  };
  std::vector<Case> cases;
  cases.push_back({"log", spectral::curve_from_function(x_d, 6.0, [](double x) { return std::log(x) / 6.0; }), true});
  cases.push_back({"single_mass", spectral::curve_from_function(x_d, 1.0, [](double x) { return -std::log(bessel::k0(x)); }), false});
  cases.push_back({"two_spike", curve_from_density(g2, x_d, 1.0), false});
  cases.push_back({"linear", spectral::curve_from_function(x_d, 1.0, [](double x) { return x; }), false});
  Json derivatives = Json::object();
  for (const auto& c : cases) {
    const auto rep = spectral::derivative_checks(c.curve, derivative_tolerance);
    const bool case_ok = rep.rp_compatible() && (c.name != "linear" || !rep.c_theorem);
    ok = ok && case_ok;
    Json j = to_json(rep);
    j["verdict"] = case_ok ? "PASS" : "FAIL";
    derivatives[c.name] = std::move(j);
  }
  report["derivatives"] = std::move(derivatives);

  // Power law: y = x^-(gamma + 2) with gamma + 2 = lambda (n + 1) C / (6 n).
  Json power = Json::array();
  const auto x_pow = logspace(1e-3, 1e3, 120);
  const std::vector<std::tuple<double, int, double>> triples = {{6.0, 2, 1.0}, {12.0, 1, 1.0}, {6.0, 3, 2.0}};
  for (const auto& [lambda, n, central] : triples) {
    const double a = lambda * (n + 1) * central / (6.0 * n);
    spectral::EntropyCurve curve;
    curve.x = x_pow;
    curve.lambda = lambda;
    for (double x : x_pow) curve.entropy.push_back(a * std::log(x) / lambda);
    const auto pfit = spectral::fit_spectral(curve, p2, options);
    const double gamma = spectral::power_law_exponent(pfit.density, 1e-2, 1e2);
    const double expected = a - 2.0;
    const double err = std::abs(gamma - expected) / std::max(std::abs(expected), 1e-12);
    const bool pok = err <= 0.05;
    ok = ok && pok;
    power.push_back(Json{{"lambda", lambda},
                         {"n", n},
                         {"central_charge", central},
                         {"expected_gamma", expected},
                         {"fitted_gamma", gamma},
                         {"relative_error", err},
                         {"fit_relative_residual", pfit.relative_residual},
                         {"verdict", pok ? "PASS" : "FAIL"}});
  }
  report["power_law"] = std::move(power);
  report["verdict"] = ok ? "PASS" : "FAIL";
  write_report(ctx, report);
  *ctx.out << "kl: round_trip=" << fixed(held_error) << " decay_error=" << fixed(rate_error)
           << " verdict=" << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? kExitPass : kExitNumerics;
}

// ---------------------------------------------------------------------------

int cmd_cft(ConfigReader& r, const Context& ctx) {
  const std::string f_name = r.get_string("f", "one");
  const std::string f_table = r.get_string("f_table", "");
  const double central = r.get_double("central_charge", 1.0);
  const auto n_list = r.get_int_list("n", {2});
  if (n_list.size() != 1) throw ConfigError("cft takes a single n");
  const int n = n_list.front();
  const int points = r.get_int("points", 1000);
  const int pairs = r.get_int("pairs", 1000);
  const double tolerance = r.get_double("tolerance", 1e-10);
  r.finish();
  if (points < 1 || pairs < 1) throw ConfigError("points and pairs must be >= 1");
  double q = 0.0;
  validated([&] { q = cft::exponent_q(central, n); });

  std::optional<cft::CrossRatioFunction> f;
  if (!f_table.empty()) {
    validated([&] { f = cft::CrossRatioFunction::load_csv(f_table); });
  } else if (f_name == "one") {
    f = cft::CrossRatioFunction::constant_one();
  } else if (f_name == "violator") {
    f = cft::CrossRatioFunction::power_of_complement(2.0 * q);
  } else {
    throw ConfigError("unknown built-in F '" + f_name + "' (expected one or violator)");
  }

  const auto grid = cft::uniform_open_grid(static_cast<std::size_t>(points));
  Rng rng = trial_stream(ctx.seed, 0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::pair<double, double>> xy;
  while (xy.size() < static_cast<std::size_t>(pairs)) {
    const double x = unif(rng), y = unif(rng);
    if (x > 0.0 && y > 0.0) xy.emplace_back(x, y);
  }
  const auto deriv = cft::check_derivative_inequality(*f, q, grid, tolerance);
  const auto mid = cft::check_midpoint_inequality(*f, q, xy, tolerance);
  bool diagonal_exact = true;
  for (double x : grid) diagonal_exact = diagonal_exact && cft::z_point(x, x) == x;
  const cft::TwoIntervalConfig sample{0.0, 1.0, 2.0, 3.0, central, n, 1.0};
  const bool ok = deriv.pass && mid.pass;

  Json config{{"f", f_table.empty() ? f_name : std::string("table")},
              {"f_table", f_table},
              {"central_charge", central},
              {"n", n},
              {"points", points},
              {"pairs", pairs},
              {"tolerance", tolerance}};
  Json report = report_header(ctx, config);
  report["q"] = q;
  report["function"] = Json{{"name", f->name()}, {"symmetry_defect", f->symmetry_defect()}, {"value_near_zero", (*f)(1e-9)}};
  report["sample_configuration"] = Json{{"intervals", Json::array({Json::array({0.0, 1.0}), Json::array({2.0, 3.0})})},
                                        {"cross_ratio", cft::cross_ratio(sample)},
                                        {"renyi", cft::renyi_two_interval(sample, *f)}};
  report["z_diagonal_exact"] = diagonal_exact;
  report["derivative_inequality"] = to_json(deriv);
  report["midpoint_inequality"] = to_json(mid);
  report["verdict"] = ok ? "PASS" : "FAIL";
  write_report(ctx, report);
  *ctx.out << "cft: F=" << f->name() << " q=" << fixed(q) << " derivative=" << (deriv.pass ? "PASS" : "FAIL")
           << " (min slack " << fixed(deriv.min_slack) << ") midpoint=" << (mid.pass ? "PASS" : "FAIL")
           << " (min slack " << fixed(mid.min_slack) << ")\n";
  return ok ? kExitPass : kExitNumerics;
}

// ---------------------------------------------------------------------------

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out, dims, lambda, n, target, curve, f_table, replay;
  std::optional<int> trials, jobs;
  std::optional<double> tolerance, concentration;
};

void add_common_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON config file");
  sub->add_option("--seed", f.seed, "master seed");
  sub->add_option("--out", f.out, std::string("output directory (default $") + kOutDirEnv + " or ./rpent-out)");
  sub->add_option("--trials", f.trials, "number of trials");
  sub->add_option("--dims", f.dims, "dimension list (4,6,8) or subsystem pairs (2x2,2x2)");
  sub->add_option("--lambda", f.lambda, "lambda list (0.1,1,10)");
  sub->add_option("--n", f.n, "Renyi index list (2,3)");
  sub->add_option("--tolerance", f.tolerance, "relative PSD tolerance");
  sub->add_option("--jobs", f.jobs, "worker threads");
}

Json overlay(Json cfg, const Flags& f) {
  if (f.seed) cfg["seed"] = *f.seed;
  if (f.out) cfg["out"] = *f.out;
  if (f.trials) cfg["trials"] = *f.trials;
  if (f.dims) cfg["dims"] = *f.dims;
  if (f.lambda) cfg["lambda"] = *f.lambda;
  if (f.n) cfg["n"] = *f.n;
  if (f.tolerance) cfg["tolerance"] = *f.tolerance;
  if (f.jobs) cfg["jobs"] = *f.jobs;
  if (f.target) cfg["target"] = *f.target;
  if (f.concentration) cfg["concentration"] = *f.concentration;
  if (f.curve) cfg["curve"] = *f.curve;
  if (f.f_table) cfg["f_table"] = *f.f_table;
  if (f.replay) cfg["replay"] = *f.replay;
  return cfg;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reflection positivity checks for entanglement entropies", kToolName};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  using Handler = int (*)(ConfigReader&, const Context&);
  const std::vector<std::tuple<std::string, std::string, Handler>> commands = {
      {"gram-sweep", "PSD sweep of integer-n Gram matrices", cmd_gram_sweep},
      {"search", "randomized counterexample search", cmd_search},
      {"fermion", "free-fermion identities and divisibility", cmd_fermion},
      {"kl", "Kallen-Lehmann fits and derivative checks", cmd_kl},
      {"cft", "two-interval inequalities on F(x)", cmd_cft},
  };
  std::vector<Flags> flags(commands.size());
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    CLI::App* sub = app.add_subcommand(std::get<0>(commands[i]), std::get<1>(commands[i]));
    add_common_flags(sub, flags[i]);
    subs.push_back(sub);
  }
  subs[1]->add_option("--target", flags[1].target, "integer_n, entropy_n1 or schur_s_fraction");
  subs[1]->add_option("--concentration", flags[1].concentration, "Dirichlet concentration of the spectrum");
  subs[1]->add_option("--replay", flags[1].replay, "re-verify a stored fixture");
  subs[0]->add_option("--concentration", flags[0].concentration, "Dirichlet concentration of the spectrum");
  subs[3]->add_option("--curve", flags[3].curve, "CSV of (x, S) pairs");
  subs[4]->add_option("--f-table", flags[4].f_table, "CSV of (x, F) pairs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  for (std::size_t i = 0; i < commands.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    const std::string& name = std::get<0>(commands[i]);
    try {
      Json cfg = flags[i].config.empty() ? Json::object() : load_config_file(flags[i].config);
      ConfigReader reader(overlay(std::move(cfg), flags[i]), flags[i].config.empty() ? "config" : flags[i].config);
      const Context ctx = read_common(reader, name, out);
      return std::get<2>(commands[i])(reader, ctx);
    } catch (const InvalidInput& e) {
      err << kToolName << " " << name << ": error: " << e.what() << "\n";
      return kExitUsage;
    } catch (const std::exception& e) {
      err << kToolName << " " << name << ": numerical failure: " << e.what() << "\n";
      return kExitNumerics;
    }
  }
  return kExitUsage;
}

}  // namespace rpent::cli
