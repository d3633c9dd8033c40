// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "chaintrick/errors.hpp"
#include "chaintrick/hopf.hpp"
#include "chaintrick/simulator.hpp"
#include "chaintrick/sweep.hpp"
#include "chaintrick/version.hpp"
#include "json_out.hpp"

namespace chaintrick::cli {

namespace {

// ---- configuration -------------------------------------------------------

Json to_json(const RunConfig& c) {
  Json j;
  j["version"] = kConfigVersion;
  j["command"] = c.command;
  j["investment"] = {{"a", c.investment.a}, {"c", c.investment.c}, {"d", c.investment.d},
                     {"v", c.investment.v}};
  j["macro"] = {{"alpha", c.macro.alpha}, {"gamma", c.macro.gamma}, {"delta", c.macro.delta},
                {"g", c.macro.g},         {"G0", c.macro.G0},       {"T", c.macro.T},
                {"m", c.macro.m}};
  j["options"] = {{"g_scan", c.g_scan},
                  {"vary", c.vary},
                  {"check_cycles", c.check_cycles},
                  {"horizon", c.horizon},
                  {"y0", c.y0},
                  {"k0", c.k0},
                  {"sample", c.sample},
                  {"rtol", c.rtol},
                  {"atol", c.atol},
                  {"transient", c.transient},
                  {"curve", c.curve},
                  {"alpha_lo", c.alpha_lo},
                  {"alpha_hi", c.alpha_hi},
                  {"alpha_count", c.alpha_count},
                  {"g_lo", c.g_lo},
                  {"g_hi", c.g_hi},
                  {"g_count", c.g_count},
                  {"orders", c.orders}};
  return j;
}

template <typename T>
void read_field(const nlohmann::json& obj, const char* key, T& into) {
  if (obj.contains(key)) into = obj.at(key).get<T>();
}

void apply_json(const nlohmann::json& j, RunConfig& c) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidParameter, "config must be a JSON object");
  if (!j.contains("version") || j.at("version") != kConfigVersion) {
    throw Error(ErrorCode::InvalidParameter,
                "config needs \"version\": " + std::to_string(kConfigVersion));
  }
  if (j.contains("investment")) {
    const auto& i = j.at("investment");
    read_field(i, "a", c.investment.a);
    read_field(i, "c", c.investment.c);
    read_field(i, "d", c.investment.d);
    read_field(i, "v", c.investment.v);
  }
  if (j.contains("macro")) {
    const auto& m = j.at("macro");
    read_field(m, "alpha", c.macro.alpha);
    read_field(m, "gamma", c.macro.gamma);
    read_field(m, "delta", c.macro.delta);
    read_field(m, "g", c.macro.g);
    read_field(m, "G0", c.macro.G0);
    read_field(m, "T", c.macro.T);
    read_field(m, "m", c.macro.m);
  }
  if (j.contains("options")) {
    const auto& o = j.at("options");
    read_field(o, "g_scan", c.g_scan);
    read_field(o, "vary", c.vary);
    read_field(o, "check_cycles", c.check_cycles);
    read_field(o, "horizon", c.horizon);
    read_field(o, "y0", c.y0);
    read_field(o, "k0", c.k0);
    read_field(o, "sample", c.sample);
    read_field(o, "rtol", c.rtol);
    read_field(o, "atol", c.atol);
    read_field(o, "transient", c.transient);
    read_field(o, "curve", c.curve);
    read_field(o, "alpha_lo", c.alpha_lo);
    read_field(o, "alpha_hi", c.alpha_hi);
    read_field(o, "alpha_count", c.alpha_count);
    read_field(o, "g_lo", c.g_lo);
    read_field(o, "g_hi", c.g_hi);
    read_field(o, "g_count", c.g_count);
    read_field(o, "orders", c.orders);
  }
}

/// Flag values are staged here so that only flags actually given override
/// the config file.
class Overrides {
 public:
  template <typename T>
  void add(CLI::App& app, const std::string& flag, T RunConfig::*field,
           const std::string& help) {
    auto holder = std::make_shared<T>();
    auto* opt = app.add_option(flag, *holder, help);
    apply_.push_back([opt, holder, field](RunConfig& c) {
      if (opt->count() > 0) c.*field = *holder;
    });
  }

  template <typename T, typename S>
  void add(CLI::App& app, const std::string& flag, S RunConfig::*section, T S::*field,
           const std::string& help) {
    auto holder = std::make_shared<T>();
    auto* opt = app.add_option(flag, *holder, help);
    apply_.push_back([opt, holder, section, field](RunConfig& c) {
      if (opt->count() > 0) (c.*section).*field = *holder;
    });
  }

  void add_flag(CLI::App& app, const std::string& flag, bool RunConfig::*field,
                const std::string& help) {
    auto* opt = app.add_flag(flag, help);
    apply_.push_back([opt, field](RunConfig& c) {
      if (opt->count() > 0) c.*field = true;
    });
  }

  void apply(RunConfig& c) const {
    for (const auto& f : apply_) f(c);
  }

 private:
  std::vector<std::function<void(RunConfig&)>> apply_;
};

// ---- report helpers ------------------------------------------------------

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json complex_list(const std::vector<Complex>& zs) {
  Json a = Json::array();
  for (const auto& z : zs) a.push_back({{"re", z.real()}, {"im", z.imag()}});
  return a;
}

Json conditions_json(const std::vector<Condition>& cs) {
  Json a = Json::array();
  for (const auto& c : cs) {
    a.push_back({{"name", c.name}, {"value", c.value}, {"satisfied", c.satisfied},
                 {"marginal", c.marginal}});
  }
  return a;
}

Json metrics_json(const CycleMetrics& m) {
  Json j;
  j["kind"] = std::string(to_string(m.kind));
  j["period"] = optional_number(m.period);
  j["amplitude"] = optional_number(m.amplitude);
  j["semi_amplitude"] = optional_number(m.semi_amplitude);
  j["decay_rate"] = optional_number(m.decay_rate);
  j["maxima"] = m.maxima;
  j["excursion_spread"] = m.excursion_spread;
  return j;
}

Json hopf_json(const HopfPoint& h) {
  Json j;
  j["parameter"] = std::string(to_string(h.parameter));
  j["value"] = h.value;
  j["omega"] = h.omega;
  j["crossing"] = std::string(to_string(h.crossing));
  j["transversality"] = h.transversality;
  j["supercritical"] = h.supercritical ? Json(*h.supercritical) : Json(nullptr);
  return j;
}

Json fit_json(const std::optional<CurveFit>& fit) {
  if (!fit) return nullptr;
  return {{"model", fit->model},
          {"coefficients", fit->coefficients},
          {"residual_norm", fit->residual_norm},
          {"relative_residual", fit->relative_residual},
          {"points_used", fit->points_used}};
}

Json axis_json(const Axis& a) {
  return {{"parameter", std::string(to_string(a.parameter))},
          {"lo", a.lo},
          {"hi", a.hi},
          {"count", a.count}};
}

// ---- commands ------------------------------------------------------------

Json cmd_equilibrium(const RunConfig& c) {
  c.macro.validate();
  const auto eq = equilibrium(c.macro, c.investment);
  return {{"x_star", eq.x_star},   {"y_star", eq.y_star},   {"k_star", eq.k_star},
          {"Iy_star", eq.Iy_star}, {"Ik_star", eq.Ik_star}, {"above_midpoint", eq.above_midpoint}};
}

Json stability_point(const RunConfig& c) {
  const auto r = assess_stability(c.macro, c.investment);
  Json j;
  j["m"] = c.macro.m;
  j["T"] = c.macro.T;
  j["alpha"] = c.macro.alpha;
  j["g"] = c.macro.g;
  j["coefficients"] = std::vector<double>(r.monic.begin() + 1, r.monic.end());
  j["conditions"] = conditions_json(r.verdict.conditions);
  j["side_conditions"] = conditions_json(r.verdict.side_conditions);
  j["eigenvalues"] = complex_list(r.verdict.eigenvalues);
  j["discriminant"] = optional_number(r.discriminant);
  j["verdict"] = r.verdict.stable ? "stable" : "unstable";
  j["marginal"] = r.verdict.marginal;
  j["signature"] = r.signature.describe();
  return j;
}

Json stability_scan(const RunConfig& c) {
  const auto [g_min, g_max] = admissible_growth(c.investment, c.macro.delta);
  const int n = c.g_scan;
  auto label = [&](double g) -> std::string {
    MacroParams p = c.macro;
    p.g = g;
    try {
      return assess_stability(p, c.investment).verdict.stable ? "stable" : "unstable";
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NonPositiveEquilibrium) return "no_equilibrium";
      throw;
    }
  };
  auto signature = [&](double g) -> std::string {
    MacroParams p = c.macro;
    p.g = g;
    try {
      return assess_stability(p, c.investment).signature.describe();
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NonPositiveEquilibrium) return "no positive equilibrium";
      throw;
    }
  };

  std::vector<double> grid(static_cast<std::size_t>(n));
  std::vector<std::string> labels(grid.size());
  for (int i = 0; i < n; ++i) {
    grid[static_cast<std::size_t>(i)] = g_min + (i + 1) * (g_max - g_min) / (n + 1);
    labels[static_cast<std::size_t>(i)] = label(grid[static_cast<std::size_t>(i)]);
  }

  Json regimes = Json::array();
  std::size_t start = 0;
  double lo = g_min;
  for (std::size_t i = 1; i <= grid.size(); ++i) {
    if (i < grid.size() && labels[i] == labels[start]) continue;
    double hi = g_max;
    if (i < grid.size()) {
      double a = grid[i - 1];
      double b = grid[i];
      while (b - a > 1e-13) {
        const double mid = 0.5 * (a + b);
        (label(mid) == labels[start] ? a : b) = mid;
      }
      hi = 0.5 * (a + b);
    }
    const std::size_t centre = (start + i - 1) / 2;
    regimes.push_back({{"lo", lo},
                       {"hi", hi},
                       {"verdict", labels[start]},
                       {"signature", signature(grid[centre])},
                       {"grid_points", i - start}});
    lo = hi;
    start = i;
  }
  Json j;
  j["m"] = c.macro.m;
  j["T"] = c.macro.T;
  j["alpha"] = c.macro.alpha;
  j["g_min"] = g_min;
  j["g_max"] = g_max;
  j["g_scan"] = n;
  j["regimes"] = regimes;
  return j;
}

Json cmd_stability(const RunConfig& c) {
  if (c.g_scan < 0) throw Error(ErrorCode::InvalidParameter, "--g-scan must be >= 0");
  return c.g_scan > 0 ? stability_scan(c) : stability_point(c);
}

Json cmd_hopf(const RunConfig& c) {
  Json j;
  j["vary"] = c.vary;
  j["m"] = c.macro.m;
  std::vector<HopfPoint> points;
  if (c.vary == "T") {
    points = hopf_in_T(c.macro, c.investment);
  } else if (c.vary == "g") {
    ScanOptions scan;
    scan.tolerance = 1e-11;
    const auto report = hopf_in_g(c.macro, c.investment, c.macro.m, scan);
    points = report.hopf_points();
    Json b = Json::array();
    for (const auto& x : report.boundaries) {
      b.push_back({{"g", x.g}, {"kind", std::string(to_string(x.kind))}});
    }
    Json cls = Json::array();
    for (const auto& s : report.classification) {
      cls.push_back({{"lo", s.lo}, {"hi", s.hi}, {"signature", s.signature.describe()}});
    }
    j["g_min"] = report.g_min;
    j["g_max"] = report.g_max;
    j["boundaries"] = b;
    j["classification"] = cls;
  } else if (c.vary == "alpha") {
    points = hopf_in_alpha(c.macro, c.investment, c.macro.m, c.alpha_lo, c.alpha_hi);
  } else {
    throw Error(ErrorCode::InvalidParameter, "--vary must be T, g or alpha");
  }

  Json list = Json::array();
  for (auto& h : points) {
    Json entry;
    if (c.check_cycles) {
      const auto check = check_hopf_cycle(h, c.macro, c.investment);
      entry = hopf_json(h);
      entry["cycle"] = {{"before", check.before},
                        {"after", check.after},
                        {"metrics_before", metrics_json(check.metrics_before)},
                        {"metrics_after", metrics_json(check.metrics_after)}};
    } else {
      entry = hopf_json(h);
    }
    list.push_back(entry);
  }
  j["points"] = list;
  return j;
}

Json cmd_simulate(const RunConfig& c, const std::string& out_path) {
  const auto sys = ChainSystem::build(c.macro, c.investment);
  const auto s0 = ChainState::from_history(c.macro.m, c.y0, c.k0);
  StepControl control;
  control.rtol = c.rtol;
  control.atol = c.atol;
  control.sample_interval = c.sample;
  const auto traj = integrate(sys, s0, c.horizon, control);
  if (!out_path.empty()) {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw Error(ErrorCode::InvalidParameter, "cannot open " + out_path);
    write_trajectory_csv(f, traj);
  }
  Json j;
  j["m"] = c.macro.m;
  j["horizon"] = c.horizon;
  j["status"] = traj.status == IntegrationStatus::Completed ? "completed" : "diverged";
  j["samples"] = traj.size();
  j["accepted_steps"] = traj.accepted_steps;
  j["rejected_steps"] = traj.rejected_steps;
  j["y_final"] = traj.states.back().y();
  j["k_final"] = traj.states.back().k();
  const auto metrics = cycle_metrics(traj, c.transient);
  j["metrics"] = metrics_json(metrics);
  if (metrics.kind == CycleKind::LimitCycle) {
    j["period_crossings"] = period_from_crossings(traj, c.transient);
  }
  return j;
}

template <typename Writer>
void write_csv(const std::string& out_path, std::ostream& out, Writer&& writer) {
  if (out_path.empty()) {
    writer(out);
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw Error(ErrorCode::InvalidParameter, "cannot open " + out_path);
  writer(f);
}

void write_sidecar(const std::string& out_path, const Json& meta) {
  std::ofstream f(out_path + ".json", std::ios::binary);
  if (!f) throw Error(ErrorCode::InvalidParameter, "cannot open " + out_path + ".json");
  write_json(f, meta);
}

Json sidecar_base(const RunConfig& c) {
  const Json cfg = to_json(c);
  Json meta;
  meta["artifact_version"] = kVersion;
  meta["command"] = c.command;
  meta["investment"] = cfg["investment"];
  meta["macro"] = cfg["macro"];
  return meta;
}

/// Returns the report, or null when the CSV went to stdout.
Json cmd_sweep(const RunConfig& c, const std::string& out_path, std::ostream& out) {
  const Axis alpha{BifurcationParameter::alpha, c.alpha_lo, c.alpha_hi, c.alpha_count};
  const Axis g{BifurcationParameter::g, c.g_lo, c.g_hi, c.g_count};
  Json meta = sidecar_base(c);
  meta["curve"] = c.curve;
  if (c.curve == "T-vs-alpha" || c.curve == "T-vs-g") {
    const bool by_alpha = c.curve == "T-vs-alpha";
    const auto curve = by_alpha ? curve_T_vs_alpha(c.macro, c.investment, alpha)
                                : curve_T_vs_g(c.macro, c.investment, g);
    write_csv(out_path, out, [&](std::ostream& os) { write_curve_csv(os, curve); });
    std::size_t gaps = 0;
    for (const auto& p : curve.points) gaps += p.T_bi ? 0 : 1;
    meta["grid"] = {axis_json(curve.axis)};
    meta["points"] = curve.points.size();
    meta["gaps"] = gaps;
    meta["fit"] = fit_json(curve.fit);
    meta["zero_crossing"] = optional_number(curve.zero_crossing);
  } else if (c.curve == "surface") {
    const auto surface = surface_T(c.macro, c.investment, alpha, g);
    write_csv(out_path, out, [&](std::ostream& os) { write_surface_csv(os, surface); });
    std::size_t gaps = 0;
    for (const auto& v : surface.T_bi) gaps += v ? 0 : 1;
    meta["grid"] = {axis_json(alpha), axis_json(g)};
    meta["points"] = surface.T_bi.size();
    meta["gaps"] = gaps;
  } else {
    throw Error(ErrorCode::InvalidParameter, "--curve must be T-vs-alpha, T-vs-g or surface");
  }
  if (out_path.empty()) return nullptr;
  write_sidecar(out_path, meta);
  return meta;
}

Json cmd_table2(const RunConfig& c, const std::string& out_path, std::ostream& out) {
  const auto rows = table_g_bifurcations(c.orders, c.macro, c.investment);
  write_csv(out_path, out, [&](std::ostream& os) { write_table_csv(os, rows); });
  if (out_path.empty()) return nullptr;
  Json meta = sidecar_base(c);
  Json list = Json::array();
  for (const auto& r : rows) list.push_back({{"m", r.m}, {"g_bi1", r.g_bi1}, {"g_bi2", r.g_bi2}});
  meta["rows"] = list;
  write_sidecar(out_path, meta);
  return meta;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kaldor-Kalecki growth model with a gamma-distributed investment delay"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Overrides ov;
  std::string config_path;
  std::string out_path;
  std::string emit_path;
  bool json = false;

  auto add_common = [&](CLI::App* sub) {
    ov.add(*sub, "--a", &RunConfig::investment, &InvestmentParams::a, "logistic steepness a");
    ov.add(*sub, "--c", &RunConfig::investment, &InvestmentParams::c, "investment floor c");
    ov.add(*sub, "--d", &RunConfig::investment, &InvestmentParams::d, "investment span d");
    ov.add(*sub, "--v", &RunConfig::investment, &InvestmentParams::v, "inverse capital-output scale v");
    ov.add(*sub, "--alpha", &RunConfig::macro, &MacroParams::alpha, "adjustment speed alpha");
    ov.add(*sub, "--gamma", &RunConfig::macro, &MacroParams::gamma, "savings rate gamma");
    ov.add(*sub, "--delta", &RunConfig::macro, &MacroParams::delta, "depreciation delta");
    ov.add(*sub, "--g", &RunConfig::macro, &MacroParams::g, "growth rate g");
    ov.add(*sub, "--G0", &RunConfig::macro, &MacroParams::G0, "autonomous spending G0");
    ov.add(*sub, "--T", &RunConfig::macro, &MacroParams::T, "mean delay T");
    ov.add(*sub, "--m", &RunConfig::macro, &MacroParams::m, "kernel order m");
    sub->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--out", out_path, "output file");
    sub->add_option("--emit-config", emit_path, "write the resolved config to this file");
    sub->add_flag("--json", json, "print the report as JSON");
  };

  auto* eq = app.add_subcommand("equilibrium", "equilibrium ratio, output, capital and slopes");
  auto* st = app.add_subcommand("stability", "Routh-Hurwitz conditions and eigenvalues");
  auto* hp = app.add_subcommand("hopf", "locate Hopf bifurcation points");
  auto* sim = app.add_subcommand("simulate", "integrate the chain system");
  auto* sw = app.add_subcommand("sweep", "bifurcation curves and surface");
  auto* t2 = app.add_subcommand("table2", "Hopf points in g for several kernel orders");
  for (auto* sub : {eq, st, hp, sim, sw, t2}) add_common(sub);

  ov.add(*st, "--g-scan", &RunConfig::g_scan, "classify N interior g grid points");
  ov.add(*hp, "--vary", &RunConfig::vary, "T, g or alpha");
  ov.add_flag(*hp, "--check-cycles", &RunConfig::check_cycles, "simulate 1% either side");
  ov.add(*sim, "--horizon", &RunConfig::horizon, "integration horizon");
  ov.add(*sim, "--y0", &RunConfig::y0, "initial output (also the chain stages)");
  ov.add(*sim, "--k0", &RunConfig::k0, "initial capital");
  ov.add(*sim, "--sample", &RunConfig::sample, "output sampling interval");
  ov.add(*sim, "--rtol", &RunConfig::rtol, "relative tolerance");
  ov.add(*sim, "--atol", &RunConfig::atol, "absolute tolerance");
  ov.add(*sim, "--transient", &RunConfig::transient, "discarded fraction of the horizon");
  ov.add(*sw, "--curve", &RunConfig::curve, "T-vs-alpha, T-vs-g or surface");
  for (auto* sub : {sw, hp}) {
    ov.add(*sub, "--alpha-lo", &RunConfig::alpha_lo, "lower alpha");
    ov.add(*sub, "--alpha-hi", &RunConfig::alpha_hi, "upper alpha");
  }
  ov.add(*sw, "--alpha-count", &RunConfig::alpha_count, "alpha grid points");
  ov.add(*sw, "--g-lo", &RunConfig::g_lo, "lower g");
  ov.add(*sw, "--g-hi", &RunConfig::g_hi, "upper g");
  ov.add(*sw, "--g-count", &RunConfig::g_count, "g grid points");
  ov.add(*t2, "--orders", &RunConfig::orders, "kernel orders");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(f);
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidParameter, std::string("config: ") + e.what());
      }
      try {
        apply_json(j, cfg);
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidParameter, std::string("config: ") + e.what());
      }
    }
    ov.apply(cfg);
    cfg.command = app.get_subcommands().front()->get_name();
    cfg.investment.validate();

    if (!emit_path.empty()) {
      std::ofstream f(emit_path, std::ios::binary);
      if (!f) throw Error(ErrorCode::InvalidParameter, "cannot open " + emit_path);
      write_json(f, to_json(cfg));
    }

    Json report;
    if (cfg.command == "equilibrium") {
      report = cmd_equilibrium(cfg);
    } else if (cfg.command == "stability") {
      report = cmd_stability(cfg);
    } else if (cfg.command == "hopf") {
      report = cmd_hopf(cfg);
    } else if (cfg.command == "simulate") {
      report = cmd_simulate(cfg, out_path);
    } else if (cfg.command == "sweep") {
      report = cmd_sweep(cfg, out_path, out);
    } else {
      report = cmd_table2(cfg, out_path, out);
    }
    if (!report.is_null()) {
      if (json) {
        write_json(out, report);
      } else {
        write_text(out, report);
      }
    }
    return kSuccess;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_domain_error(e.code()) ? kDomainError : kNumericFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumericFailure;
  }
}

}  // namespace chaintrick::cli
