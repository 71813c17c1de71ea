#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ichain/config.hpp"
#include "ichain/control.hpp"
#include "ichain/differentiator.hpp"
#include "ichain/equivalence.hpp"
#include "ichain/homogeneity.hpp"
#include "ichain/ode.hpp"
#include "ichain/signal.hpp"

namespace ichain {

enum class ScenarioKind {
  Estimate,          // open-loop differentiator run against an analytic signal
  Equivalence,       // high-gain vs integral-chain trajectory identity
  EpsilonSweep,      // steady-error order fit over a list of epsilons
  ConvergenceRace,   // linear / nonlinear / hybrid error-system settling times
  ClosedLoop,        // sliding-mode tracking loop
  ClosedLoopCompare, // same loop with two estimator variants, shared noise seed
};

std::string to_string(ScenarioKind kind);
ScenarioKind scenario_kind_from_string(const std::string& name);

struct EstimateScenario {
  DifferentiatorSpec diff;
  AnalyticSignal signal;
  NoiseSpec noise;
  SimConfig sim;
  std::vector<double> init;  // defaults to zeros
};

struct EquivalenceScenario {
  std::vector<double> gains;
  double epsilon;
  double tolerance;
  std::vector<double> init_w;
  AnalyticSignal signal;
  SimConfig sim;
};

struct SweepScenario {
  DiffVariant variant;
  std::vector<double> gains;
  double alpha1;
  std::vector<double> hybrid_gains;
  std::vector<double> epsilons;  // strictly decreasing
  AnalyticSignal signal;
  SimConfig sim;
};

struct RaceScenario {
  std::vector<double> lin_gains;
  std::vector<double> nl_gains;
  double alpha1;
  double offset_min;
  double offset_max;
  int offset_count;
  double threshold;
  SimConfig sim;
};

struct ClosedLoopScenario {
  ClosedLoopConfig loop;
};

struct CompareScenario {
  ClosedLoopConfig run_a;
  ClosedLoopConfig run_b;
};

struct ScenarioConfig {
  ScenarioKind kind;
  std::string out_dir = "out";
  std::variant<EstimateScenario, EquivalenceScenario, SweepScenario, RaceScenario,
               ClosedLoopScenario, CompareScenario>
      payload;
};

/// Build a validated scenario from a parsed config file. Schema problems are
/// reported as std::invalid_argument naming the offending section/key.
ScenarioConfig parse_scenario(const ConfigFile& cfg);

struct RunOptions {
  std::optional<std::string> out_dir;   // overrides the config's output directory
  std::optional<std::uint64_t> seed;    // overrides every noise seed
  bool quiet = false;
};

/// Ordered key/value metrics, also written to <out>/summary.txt.
using Summary = std::vector<std::pair<std::string, std::string>>;

/// Execute a scenario: write one CSV per trajectory, plot-ready .dat files
/// for the headline columns, and the summary file.
Summary run_scenario(const ScenarioConfig& scenario, const RunOptions& options = {});

/// Load + parse + run in one call (the CLI `run` subcommand).
Summary run_scenario_file(const std::string& config_path, const RunOptions& options = {});

/// Whitespace-separated plot data with a '#' header naming each column.
/// Rejects an empty selection and unknown columns.
void emit_plotdata(const TimeSeries& series, std::span<const std::string> columns,
                   std::ostream& os);

}  // namespace ichain
