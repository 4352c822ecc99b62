#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dl2u/ks.hpp"
#include "dl2u/rng.hpp"
#include "dl2u/sequences.hpp"

namespace dl2u {

/// One Monte Carlo design: R replications, each a KS test over B pivots.
/// Path j of replication r is simulated with seed (seed_base, r * B + j).
struct ExperimentSpec {
  ModelParams params;
  std::int64_t paths_per_test = 500;
  std::int64_t replications = 100;
  double alpha_level = 0.05;
  std::uint64_t seed_base = 0;
};

struct ExperimentSummary {
  double mean_ks = 0.0;
  double acceptance_proportion = 0.0;
  std::vector<KsResult> per_replication;

  friend bool operator==(const ExperimentSummary&, const ExperimentSummary&) = default;
};

/// Throws UsageError for B < 1, R < 1 or alpha_level outside (0, 1).
void validate(const ExperimentSpec& spec);

/// The B pivot values (T_n or S_n, by regime) of replication `rep`.
std::vector<double> replication_pivots(const ExperimentSpec& spec, std::int64_t rep);

KsResult run_replication(const ExperimentSpec& spec, std::int64_t rep);

/// Runs all replications on `threads` workers. The summary does not
/// depend on the thread count or the scheduling order.
ExperimentSummary run_experiment(const ExperimentSpec& spec, unsigned threads = 1);

/// Recomputes mean KS and acceptance proportion from per-replication results.
ExperimentSummary summarize(std::vector<KsResult> per_replication, double alpha_level);

// --- table reproduction ---------------------------------------------------

enum class TableId { T1a, T1b, T2a, T2b };

TableId parse_table_id(std::string_view text);
std::string_view to_string(TableId id);

struct TableOptions {
  std::int64_t n_near_stationary = 1000;
  std::int64_t n_explosive = 300;
  std::int64_t replications = 100;
  std::int64_t paths_per_test = 500;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  /// k_n used by the "constant" row of Table 1.
  double constant_kn = 5.0;
  /// c of the homoskedastic explosive design (Table 1b).
  double table1_explosive_c = 0.5;
  /// c of both stochastic-volatility designs (Table 2).
  double table2_c = 1.0;
};

/// Row design of a table: the k_n sequences and fixed parameters.
/// T1*: alpha = 0, k_n in {const, log n, n^0.1, n^0.25, n^0.5, n^0.75, n^0.99, n}.
/// T2*: c = d = 1, alpha = 0.5, k_n in {n^0.1, n^0.25, n^0.5, n^0.75, n^0.99, n}.
/// T1a/T2b are near-stationary (N(0, 2c) target), T1b/T2a mildly explosive (Cauchy).
std::vector<ExperimentSpec> table_specs(TableId id, const TableOptions& options);

struct TableRow {
  std::string kn;
  ExperimentSummary summary;
};

std::vector<TableRow> run_table(TableId id, const TableOptions& options);

// --- histograms -----------------------------------------------------------

struct Histogram {
  std::vector<double> edges;   // bins + 1
  std::vector<double> counts;  // bins
  std::vector<double> overlay_x;
  std::vector<double> overlay_density;    // target density at bin midpoints
  std::vector<double> empirical_density;  // counts / (total * width)
  TargetLaw target;
  std::size_t total = 0;    // sample size before clipping
  std::size_t clipped = 0;  // values outside [edges.front(), edges.back()]
};

/// Equal-width histogram over the empirical quantile window [q_lo, q_hi]
/// of `sample` (q_lo = 0, q_hi = 1 uses the full range).
Histogram histogram_from_sample(std::span<const double> sample, const TargetLaw& target, int bins,
                                double q_lo = 0.0, double q_hi = 1.0);

/// Equal-width histogram over the fixed range [lo, hi].
Histogram histogram_over_range(std::span<const double> sample, const TargetLaw& target, int bins,
                               double lo, double hi);

/// Histogram of the pivots of replication 0. The default window is the full
/// range for a normal target and [0.01, 0.99] for the Cauchy target.
Histogram emit_histogram(const ExperimentSpec& spec, int bins);
Histogram emit_histogram(const ExperimentSpec& spec, int bins, double q_lo, double q_hi);

/// Type-7 (linear interpolation) empirical quantile of a sorted sample.
double empirical_quantile(std::span<const double> sorted, double q);

}  // namespace dl2u
