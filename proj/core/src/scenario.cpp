#include "ichain/scenario.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "ichain/metrics.hpp"

namespace ichain {

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::Estimate: return "estimate";
    case ScenarioKind::Equivalence: return "equivalence";
    case ScenarioKind::EpsilonSweep: return "epsilon-sweep";
    case ScenarioKind::ConvergenceRace: return "convergence-race";
    case ScenarioKind::ClosedLoop: return "closed-loop";
    case ScenarioKind::ClosedLoopCompare: return "closed-loop-compare";
  }
  return "unknown";
}

ScenarioKind scenario_kind_from_string(const std::string& name) {
  if (name == "estimate") return ScenarioKind::Estimate;
  if (name == "equivalence") return ScenarioKind::Equivalence;
  if (name == "epsilon-sweep") return ScenarioKind::EpsilonSweep;
  if (name == "convergence-race") return ScenarioKind::ConvergenceRace;
  if (name == "closed-loop") return ScenarioKind::ClosedLoop;
  if (name == "closed-loop-compare") return ScenarioKind::ClosedLoopCompare;
  throw std::invalid_argument("unknown scenario kind: '" + name + "'");
}

namespace {

AnalyticSignal parse_signal(const ConfigFile& cfg, const std::string& section) {
  if (!cfg.has_section(section))
    throw std::invalid_argument(cfg.name() + ": missing [" + section + "] section");
  const std::string kind = cfg.get_string(section, "kind");
  if (kind == "sinusoid") {
    return AnalyticSignal::sinusoid(cfg.get_double(section, "amplitude"),
                                    cfg.get_double(section, "omega"),
                                    cfg.get_double_or(section, "phase", 0.0));
  }
  if (kind == "polynomial") {
    return AnalyticSignal::polynomial(cfg.get_double_list(section, "coefficients"));
  }
  if (kind == "constant") {
    return AnalyticSignal::constant(cfg.get_double(section, "level"));
  }
  if (kind == "sum") {
    const int terms = cfg.get_int(section, "terms");
    if (terms < 1)
      throw std::invalid_argument(cfg.name() + " [" + section + "]: terms must be >= 1");
    std::vector<AnalyticSignal> parts;
    parts.reserve(static_cast<std::size_t>(terms));
    for (int i = 1; i <= terms; ++i)
      parts.push_back(parse_signal(cfg, section + "." + std::to_string(i)));
    return AnalyticSignal::sum(std::move(parts));
  }
  throw std::invalid_argument(cfg.name() + " [" + section + "]: unknown signal kind '" + kind +
                              "'");
}

NoiseSpec parse_noise(const ConfigFile& cfg, const std::string& section) {
  if (!cfg.has_section(section)) return NoiseSpec::none();
  const std::string kind = cfg.get_string_or(section, "kind", "none");
  const std::uint64_t seed = cfg.get_uint64_or(section, "seed", 0);
  if (kind == "none") return NoiseSpec::none();
  if (kind == "uniform")
    return NoiseSpec::uniform_bounded(cfg.get_double(section, "bound"), seed);
  if (kind == "gaussian")
    return NoiseSpec::gaussian(cfg.get_double(section, "stddev"), seed);
  throw std::invalid_argument(cfg.name() + " [" + section + "]: unknown noise kind '" + kind +
                              "'");
}

SimConfig parse_sim(const ConfigFile& cfg, const std::string& section) {
  SimConfig sim;
  sim.t_end = cfg.get_double(section, "t_end");
  sim.h = cfg.get_double(section, "h");
  const std::string method = cfg.get_string_or(section, "method", "rk4");
  if (method == "rk4")
    sim.method = OdeMethod::Rk4;
  else if (method == "euler")
    sim.method = OdeMethod::Euler;
  else
    throw std::invalid_argument(cfg.name() + " [" + section + "]: unknown method '" + method +
                                "'");
  sim.record_stride = cfg.get_int_or(section, "record_stride", 1);
  sim.validate();
  return sim;
}

DiffVariant parse_variant(const ConfigFile& cfg, const std::string& section) {
  const std::string v = cfg.get_string(section, "variant");
  if (v == "high-gain-linear") return DiffVariant::HighGainLinear;
  if (v == "integral-chain-linear") return DiffVariant::IntegralChainLinear;
  if (v == "integral-chain-nonlinear") return DiffVariant::IntegralChainNonlinear;
  if (v == "hybrid") return DiffVariant::Hybrid;
  throw std::invalid_argument(cfg.name() + " [" + section + "]: unknown variant '" + v + "'");
}

DifferentiatorSpec parse_differentiator(const ConfigFile& cfg, const std::string& section) {
  const DiffVariant variant = parse_variant(cfg, section);
  std::vector<double> gains = cfg.get_double_list(section, "gains");
  const double epsilon = cfg.get_double(section, "epsilon");
  const double alpha1 = cfg.get_double_or(section, "alpha1", 0.0);
  std::vector<double> hybrid_gains;
  if (cfg.has_key(section, "hybrid_gains"))
    hybrid_gains = cfg.get_double_list(section, "hybrid_gains");
  return DifferentiatorSpec(variant, std::move(gains), epsilon, alpha1,
                            std::move(hybrid_gains));
}

PlantSpec parse_plant(const ConfigFile& cfg, const std::string& section) {
  PlantSpec plant;
  plant.b = cfg.get_double(section, "b");
  const std::string kind = cfg.get_string_or(section, "uncertainty", "none");
  if (kind == "none") {
    plant.uncertainty = PlantSpec::Uncertainty::None;
  } else if (kind == "linear-damping") {
    plant.uncertainty = PlantSpec::Uncertainty::LinearDamping;
    plant.damping = cfg.get_double(section, "damping");
  } else if (kind == "signal") {
    plant.uncertainty = PlantSpec::Uncertainty::TimeSignal;
    plant.f_of_t = parse_signal(cfg, section + ".signal");
  } else {
    throw std::invalid_argument(cfg.name() + " [" + section + "]: unknown uncertainty '" +
                                kind + "'");
  }
  plant.validate();
  return plant;
}

ControllerSpec parse_controller(const ConfigFile& cfg, const std::string& section,
                                const AnalyticSignal& reference) {
  ControllerSpec ctrl;
  ctrl.k_u = cfg.get_double(section, "k_u");
  ctrl.l = cfg.get_double(section, "l");
  const std::string mode = cfg.get_string_or(section, "mode", "estimated");
  if (mode == "known-bound")
    ctrl.mode = ControlMode::KnownBound;
  else if (mode == "estimated")
    ctrl.mode = ControlMode::Estimated;
  else
    throw std::invalid_argument(cfg.name() + " [" + section + "]: unknown mode '" + mode + "'");
  ctrl.boundary_layer = cfg.get_double_or(section, "boundary_layer", 0.0);
  ctrl.s_uses_measurement = cfg.get_bool_or(section, "s_uses_measurement", false);
  ctrl.reference = reference;
  ctrl.validate();
  return ctrl;
}

ClosedLoopConfig parse_closed_loop(const ConfigFile& cfg, const std::string& estimator_section) {
  ClosedLoopConfig loop;
  loop.plant = parse_plant(cfg, "plant");
  loop.controller = parse_controller(cfg, "controller", parse_signal(cfg, "reference"));
  loop.noise = parse_noise(cfg, "noise");
  loop.sim = parse_sim(cfg, "sim");
  loop.theta0 = cfg.get_double_or("init", "theta", 0.0);
  loop.omega0 = cfg.get_double_or("init", "omega", 0.0);
  if (loop.controller.mode == ControlMode::Estimated)
    loop.estimator = parse_differentiator(cfg, estimator_section);
  if (cfg.has_key("init", "estimator")) {
    const std::string value = cfg.get_string("init", "estimator");
    if (value != "auto") loop.estimator_init = cfg.get_double_list("init", "estimator");
  }
  loop.validate();
  return loop;
}

void apply_seed(NoiseSpec& noise, std::uint64_t seed) { noise.seed = seed; }

std::filesystem::path prepare_out_dir(const ScenarioConfig& scenario,
                                      const RunOptions& options) {
  const std::filesystem::path dir = options.out_dir.value_or(scenario.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec && !std::filesystem::is_directory(dir))
    throw std::invalid_argument("output directory is not writable: " + dir.string());
  return dir;
}

void note(const RunOptions& options, const std::string& message) {
  if (!options.quiet) std::cout << "[ichain] " << message << "\n";
}

void add(Summary& summary, const std::string& key, double value) {
  summary.emplace_back(key, format_double(value));
}

void add(Summary& summary, const std::string& key, const std::string& value) {
  summary.emplace_back(key, value);
}

void save_plotdata(const TimeSeries& series, const std::vector<std::string>& columns,
                   const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
  emit_plotdata(series, columns, os);
}

void write_summary(const Summary& summary, const std::filesystem::path& dir,
                   const RunOptions& options) {
  const auto path = dir / "summary.txt";
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
  for (const auto& [key, value] : summary) os << key << " = " << value << "\n";
  note(options, "wrote " + path.string());
}

Summary run_estimate(const EstimateScenario& sc, const std::filesystem::path& dir,
                     const RunOptions& options) {
  const TimeSeries series = simulate_estimator(sc.diff, sc.signal, sc.noise, sc.init, sc.sim);
  series.save_csv((dir / "estimate.csv").string());
  note(options, "wrote " + (dir / "estimate.csv").string());

  std::vector<std::string> plot_cols{"t"};
  for (int i = 1; i <= sc.diff.order; ++i) plot_cols.push_back("e" + std::to_string(i));
  save_plotdata(series, plot_cols, dir / "estimate_errors.dat");

  Summary summary;
  add(summary, "scenario", to_string(ScenarioKind::Estimate));
  add(summary, "variant", to_string(sc.diff.variant));
  add(summary, "signal", sc.signal.describe());
  const double t_half = 0.5 * sc.sim.t_end;
  const double t_tail = 0.8 * sc.sim.t_end;
  for (int i = 1; i <= sc.diff.order; ++i) {
    const std::string e = "e" + std::to_string(i);
    add(summary, "rmse_" + e + "_after_half",
        rmse_after(series, "x" + std::to_string(i), "v_d" + std::to_string(i - 1), t_half));
    add(summary, "max_abs_" + e + "_final_fifth", max_abs_after(series, e, t_tail));
  }
  const auto settle = settling_time(series, "e1", 1e-3);
  add(summary, "settling_e1_1e-3", settle ? format_double(*settle) : std::string("none"));
  return summary;
}

Summary run_equivalence(const EquivalenceScenario& sc, const std::filesystem::path& dir,
                        const RunOptions& options) {
  TimeSeries record;
  const EquivalenceReport report = verify_equivalence(sc.gains, sc.epsilon, sc.signal, sc.sim,
                                                      sc.init_w, sc.tolerance, &record);
  record.save_csv((dir / "equivalence.csv").string());
  note(options, "wrote " + (dir / "equivalence.csv").string());

  Summary summary;
  add(summary, "scenario", to_string(ScenarioKind::Equivalence));
  add(summary, "max_discrepancy", report.max_discrepancy);
  add(summary, "constraint_residual", report.constraint_residual);
  add(summary, "tolerance", report.tolerance);
  add(summary, "pass", report.pass ? std::string("true") : std::string("false"));
  return summary;
}

Summary run_sweep(const SweepScenario& sc, const std::filesystem::path& dir,
                  const RunOptions& options) {
  const int n = static_cast<int>(sc.gains.size());
  std::vector<std::string> columns{"epsilon"};
  for (int i = 1; i <= n; ++i) columns.push_back("steady_e" + std::to_string(i));
  TimeSeries table(columns);

  std::vector<std::vector<std::pair<double, double>>> sweeps(static_cast<std::size_t>(n));
  std::vector<double> zeros(static_cast<std::size_t>(n), 0.0);
  std::vector<double> row(columns.size());

  // The table rows must have increasing column 0; epsilons decrease, so fill
  // rows in reverse epsilon order after measuring.
  std::vector<std::vector<double>> measured;
  for (const double eps : sc.epsilons) {
    DifferentiatorSpec spec(sc.variant, sc.gains, eps, sc.alpha1, sc.hybrid_gains);
    const TimeSeries series =
        simulate_estimator(spec, sc.signal, NoiseSpec::none(), zeros, sc.sim);
    std::vector<double> entry{eps};
    for (int i = 1; i <= n; ++i) {
      const double steady =
          max_abs_after(series, "e" + std::to_string(i), 0.8 * sc.sim.t_end);
      entry.push_back(steady);
      sweeps[static_cast<std::size_t>(i - 1)].emplace_back(eps, steady);
    }
    measured.push_back(std::move(entry));
  }
  for (auto it = measured.rbegin(); it != measured.rend(); ++it) table.add_row(*it);
  table.save_csv((dir / "epsilon_sweep.csv").string());
  note(options, "wrote " + (dir / "epsilon_sweep.csv").string());

  Summary summary;
  add(summary, "scenario", to_string(ScenarioKind::EpsilonSweep));
  add(summary, "variant", to_string(sc.variant));
  add(summary, "signal", sc.signal.describe());
  add(summary, "steady_window", std::string("final 20% of horizon"));
  for (int i = 1; i <= n; ++i) {
    const auto fit = convergence_order(sweeps[static_cast<std::size_t>(i - 1)]);
    const std::string e = "e" + std::to_string(i);
    add(summary, "slope_" + e, fit.slope);
    add(summary, "intercept_" + e, fit.intercept);
    add(summary, "fit_residual_" + e, fit.residual);
    bool monotone = true;
    const auto& sweep = sweeps[static_cast<std::size_t>(i - 1)];
    for (std::size_t j = 1; j < sweep.size(); ++j)
      if (!(sweep[j].second < sweep[j - 1].second)) monotone = false;
    add(summary, "monotone_" + e, monotone ? std::string("true") : std::string("false"));
  }
  return summary;
}

Summary run_race(const RaceScenario& sc, const std::filesystem::path& dir,
                 const RunOptions& options) {
  const std::size_t n = sc.lin_gains.size();
  const std::vector<double> alphas = alpha_schedule(sc.alpha1, static_cast<int>(n));

  TimeSeries table(std::vector<std::string>{"offset", "settle_linear", "settle_nonlinear",
                                            "settle_hybrid"});
  int hybrid_wins = 0;
  int comparable = 0;

  for (int i = 0; i < sc.offset_count; ++i) {
    const double offset =
        sc.offset_count == 1
            ? sc.offset_min
            : sc.offset_min + (sc.offset_max - sc.offset_min) * static_cast<double>(i) /
                                  static_cast<double>(sc.offset_count - 1);
    std::vector<double> init(n, 0.0);
    init[0] = offset;

    std::array<std::optional<double>, 3> settles;
    const ErrorFieldKind kinds[3] = {ErrorFieldKind::Linear, ErrorFieldKind::Nonlinear,
                                     ErrorFieldKind::Hybrid};
    for (int k = 0; k < 3; ++k) {
      const TimeSeries series =
          simulate_error_system(kinds[k], sc.lin_gains, sc.nl_gains, alphas, init, sc.sim);
      settles[static_cast<std::size_t>(k)] = settling_time(series, "z1", sc.threshold);
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    table.add_row(std::vector<double>{offset, settles[0].value_or(nan),
                                      settles[1].value_or(nan), settles[2].value_or(nan)});

    if (settles[2]) {
      const double rival = std::min(settles[0].value_or(nan), settles[1].value_or(nan));
      ++comparable;
      if (!(rival < *settles[2])) ++hybrid_wins;  // hybrid <= min(linear, nonlinear)
    }
  }
  table.save_csv((dir / "race_settling.csv").string());
  note(options, "wrote " + (dir / "race_settling.csv").string());

  // Example trajectories from unit offset, for plotting.
  {
    std::vector<double> init(n, 0.0);
    init[0] = 1.0;
    const char* names[3] = {"race_linear.dat", "race_nonlinear.dat", "race_hybrid.dat"};
    const ErrorFieldKind kinds[3] = {ErrorFieldKind::Linear, ErrorFieldKind::Nonlinear,
                                     ErrorFieldKind::Hybrid};
    for (int k = 0; k < 3; ++k) {
      const TimeSeries series =
          simulate_error_system(kinds[k], sc.lin_gains, sc.nl_gains, alphas, init, sc.sim);
      save_plotdata(series, {"t", "z1"}, dir / names[k]);
    }
  }

  Summary summary;
  add(summary, "scenario", to_string(ScenarioKind::ConvergenceRace));
  add(summary, "threshold", sc.threshold);
  add(summary, "offsets", static_cast<double>(sc.offset_count));
  add(summary, "hybrid_not_slower_count", static_cast<double>(hybrid_wins));
  add(summary, "hybrid_settled_count", static_cast<double>(comparable));
  add(summary, "hybrid_not_slower_fraction",
      comparable > 0 ? static_cast<double>(hybrid_wins) / static_cast<double>(comparable)
                     : 0.0);
  return summary;
}

void closed_loop_outputs(const TimeSeries& series, const std::string& tag,
                         const std::filesystem::path& dir, Summary& summary,
                         const SimConfig& sim, const RunOptions& options) {
  const std::string csv = tag.empty() ? "closed_loop.csv" : "closed_loop_" + tag + ".csv";
  series.save_csv((dir / csv).string());
  note(options, "wrote " + (dir / csv).string());

  const std::string suffix = tag.empty() ? "" : "_" + tag;
  save_plotdata(series, {"t", "theta_d", "theta"}, dir / ("tracking" + suffix + ".dat"));
  save_plotdata(series, {"t", "f_true", "f_hat"}, dir / ("f_estimate" + suffix + ".dat"));
  save_plotdata(series, {"t", "u"}, dir / ("control" + suffix + ".dat"));

  add(summary, "rms_omega_err" + suffix, rmse_after(series, "omega_hat", "omega", 2.0));
  add(summary, "rms_f_err" + suffix, rmse_after(series, "f_hat", "f_true", 2.0));
  add(summary, "max_abs_u" + suffix, max_abs_after(series, "u", 0.0));
  add(summary, "max_abs_e1_final_half" + suffix,
      max_abs_after(series, "e1", 0.5 * sim.t_end));
}

Summary run_closed_loop(const ClosedLoopScenario& sc, const std::filesystem::path& dir,
                        const RunOptions& options) {
  const TimeSeries series = closed_loop_simulate(sc.loop);
  Summary summary;
  add(summary, "scenario", to_string(ScenarioKind::ClosedLoop));
  closed_loop_outputs(series, "", dir, summary, sc.loop.sim, options);
  return summary;
}

Summary run_compare(const CompareScenario& sc, const std::filesystem::path& dir,
                    const RunOptions& options) {
  Summary summary;
  add(summary, "scenario", to_string(ScenarioKind::ClosedLoopCompare));
  add(summary, "estimator_a", to_string(sc.run_a.estimator->variant));
  add(summary, "estimator_b", to_string(sc.run_b.estimator->variant));

  const TimeSeries series_a = closed_loop_simulate(sc.run_a);
  const TimeSeries series_b = closed_loop_simulate(sc.run_b);
  closed_loop_outputs(series_a, "a", dir, summary, sc.run_a.sim, options);
  closed_loop_outputs(series_b, "b", dir, summary, sc.run_b.sim, options);

  const double rms_omega_a = rmse_after(series_a, "omega_hat", "omega", 2.0);
  const double rms_omega_b = rmse_after(series_b, "omega_hat", "omega", 2.0);
  const double rms_f_a = rmse_after(series_a, "f_hat", "f_true", 2.0);
  const double rms_f_b = rmse_after(series_b, "f_hat", "f_true", 2.0);
  add(summary, "a_restrains_more_noise",
      (rms_omega_a < rms_omega_b && rms_f_a < rms_f_b) ? std::string("true")
                                                       : std::string("false"));
  return summary;
}

}  // namespace

ScenarioConfig parse_scenario(const ConfigFile& cfg) {
  if (!cfg.has_section("scenario"))
    throw std::invalid_argument(cfg.name() + ": missing [scenario] section");
  const ScenarioKind kind = scenario_kind_from_string(cfg.get_string("scenario", "kind"));

  const std::string out_dir = cfg.get_string_or("scenario", "out", "out");

  switch (kind) {
    case ScenarioKind::Estimate: {
      DifferentiatorSpec diff = parse_differentiator(cfg, "differentiator");
      std::vector<double> init(static_cast<std::size_t>(diff.order), 0.0);
      if (cfg.has_key("init", "x")) {
        init = cfg.get_double_list("init", "x");
        if (init.size() != static_cast<std::size_t>(diff.order))
          throw std::invalid_argument(cfg.name() +
                                      " [init] x: length must equal the differentiator order");
      }
      return ScenarioConfig{kind, out_dir,
                            EstimateScenario{std::move(diff), parse_signal(cfg, "signal"),
                                             parse_noise(cfg, "noise"), parse_sim(cfg, "sim"),
                                             std::move(init)}};
    }
    case ScenarioKind::Equivalence: {
      EquivalenceScenario sc{cfg.get_double_list("equivalence", "gains"),
                             cfg.get_double("equivalence", "epsilon"),
                             cfg.get_double_or("equivalence", "tolerance", 1e-8),
                             {},
                             parse_signal(cfg, "signal"),
                             parse_sim(cfg, "sim")};
      sc.init_w.assign(sc.gains.size(), 0.0);
      if (cfg.has_key("equivalence", "init_w")) {
        sc.init_w = cfg.get_double_list("equivalence", "init_w");
        if (sc.init_w.size() != sc.gains.size())
          throw std::invalid_argument(cfg.name() +
                                      " [equivalence] init_w: length must equal gains");
      }
      if (sc.gains.size() < 2)
        throw std::invalid_argument(cfg.name() + " [equivalence] gains: need order >= 2");
      return ScenarioConfig{kind, out_dir, std::move(sc)};
    }
    case ScenarioKind::EpsilonSweep: {
      SweepScenario sc{parse_variant(cfg, "differentiator"),
                       cfg.get_double_list("differentiator", "gains"),
                       cfg.get_double_or("differentiator", "alpha1", 0.0),
                       {},
                       cfg.get_double_list("sweep", "epsilons"),
                       parse_signal(cfg, "signal"),
                       parse_sim(cfg, "sim")};
      if (cfg.has_key("differentiator", "hybrid_gains"))
        sc.hybrid_gains = cfg.get_double_list("differentiator", "hybrid_gains");
      for (std::size_t i = 1; i < sc.epsilons.size(); ++i)
        if (!(sc.epsilons[i] < sc.epsilons[i - 1]))
          throw std::invalid_argument(cfg.name() +
                                      " [sweep] epsilons: must be strictly decreasing");
      if (sc.epsilons.size() < 3)
        throw std::invalid_argument(cfg.name() + " [sweep] epsilons: need at least 3 values");
      // Construct once to surface gain/alpha validation errors early.
      DifferentiatorSpec probe(sc.variant, sc.gains, sc.epsilons.front(), sc.alpha1,
                               sc.hybrid_gains);
      (void)probe;
      return ScenarioConfig{kind, out_dir, std::move(sc)};
    }
    case ScenarioKind::ConvergenceRace: {
      RaceScenario sc{cfg.get_double_list("race", "lin_gains"),
                      cfg.get_double_list("race", "nl_gains"),
                      cfg.get_double("race", "alpha1"),
                      cfg.get_double_or("race", "offset_min", 0.1),
                      cfg.get_double_or("race", "offset_max", 2.0),
                      cfg.get_int_or("race", "offset_count", 50),
                      cfg.get_double_or("race", "threshold", 1e-4),
                      parse_sim(cfg, "sim")};
      if (sc.lin_gains.size() != sc.nl_gains.size())
        throw std::invalid_argument(cfg.name() +
                                    " [race]: lin_gains and nl_gains must have equal length");
      if (!is_hurwitz(sc.lin_gains) || !is_hurwitz(sc.nl_gains))
        throw std::invalid_argument(
            cfg.name() + " [race]: gains must form a Hurwitz characteristic polynomial");
      if (sc.offset_count < 1)
        throw std::invalid_argument(cfg.name() + " [race]: offset_count must be >= 1");
      if (!(sc.threshold > 0.0))
        throw std::invalid_argument(cfg.name() + " [race]: threshold must be > 0");
      return ScenarioConfig{kind, out_dir, std::move(sc)};
    }
    case ScenarioKind::ClosedLoop: {
      return ScenarioConfig{kind, out_dir, ClosedLoopScenario{parse_closed_loop(cfg, "estimator")}};
    }
    case ScenarioKind::ClosedLoopCompare: {
      ClosedLoopConfig run_a = parse_closed_loop(cfg, "estimator");
      ClosedLoopConfig run_b = parse_closed_loop(cfg, "estimator_compare");
      if (run_a.controller.mode != ControlMode::Estimated)
        throw std::invalid_argument(cfg.name() +
                                    ": closed-loop-compare requires estimated mode");
      return ScenarioConfig{kind, out_dir, CompareScenario{std::move(run_a), std::move(run_b)}};
    }
  }
  throw std::invalid_argument("unreachable scenario kind");
}

Summary run_scenario(const ScenarioConfig& scenario_in, const RunOptions& options) {
  ScenarioConfig scenario = scenario_in;
  if (options.seed) {
    const std::uint64_t seed = *options.seed;
    std::visit(
        [seed](auto& payload) {
          using T = std::decay_t<decltype(payload)>;
          if constexpr (std::is_same_v<T, EstimateScenario>) {
            apply_seed(payload.noise, seed);
          } else if constexpr (std::is_same_v<T, ClosedLoopScenario>) {
            apply_seed(payload.loop.noise, seed);
          } else if constexpr (std::is_same_v<T, CompareScenario>) {
            apply_seed(payload.run_a.noise, seed);
            apply_seed(payload.run_b.noise, seed);
          }
        },
        scenario.payload);
  }

  const std::filesystem::path dir = prepare_out_dir(scenario, options);
  Summary summary = std::visit(
      [&](const auto& payload) -> Summary {
        using T = std::decay_t<decltype(payload)>;
        if constexpr (std::is_same_v<T, EstimateScenario>)
          return run_estimate(payload, dir, options);
        else if constexpr (std::is_same_v<T, EquivalenceScenario>)
          return run_equivalence(payload, dir, options);
        else if constexpr (std::is_same_v<T, SweepScenario>)
          return run_sweep(payload, dir, options);
        else if constexpr (std::is_same_v<T, RaceScenario>)
          return run_race(payload, dir, options);
        else if constexpr (std::is_same_v<T, ClosedLoopScenario>)
          return run_closed_loop(payload, dir, options);
        else
          return run_compare(payload, dir, options);
      },
      scenario.payload);

  write_summary(summary, dir, options);
  if (!options.quiet)
    for (const auto& [key, value] : summary) std::cout << "  " << key << " = " << value << "\n";
  return summary;
}

Summary run_scenario_file(const std::string& config_path, const RunOptions& options) {
  const ConfigFile cfg = ConfigFile::load(config_path);
  const ScenarioConfig scenario = parse_scenario(cfg);
  return run_scenario(scenario, options);
}

void emit_plotdata(const TimeSeries& series, std::span<const std::string> columns,
                   std::ostream& os) {
  if (columns.empty()) throw std::invalid_argument("emit_plotdata: empty column selection");
  std::vector<std::size_t> indices;
  indices.reserve(columns.size());
  for (const auto& name : columns) indices.push_back(series.column_index(name));

  os << "#";
  for (const auto& name : columns) os << " " << name;
  os << "\n";
  for (std::size_t r = 0; r < series.row_count(); ++r) {
    const auto& row = series.row(r);
    for (std::size_t i = 0; i < indices.size(); ++i) {
      if (i) os << " ";
      os << format_double(row[indices[i]]);
    }
    os << "\n";
  }
}

}  // namespace ichain
