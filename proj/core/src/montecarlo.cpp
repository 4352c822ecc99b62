#include "dl2u/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "dl2u/dgp.hpp"
#include "dl2u/errors.hpp"
#include "dl2u/estimator.hpp"

namespace dl2u {

void validate(const ExperimentSpec& spec) {
  if (spec.paths_per_test < 1) throw UsageError("paths per KS test must be >= 1");
  if (spec.replications < 1) throw UsageError("replications must be >= 1");
  if (!(spec.alpha_level > 0.0 && spec.alpha_level < 1.0)) {
    throw UsageError("significance level must lie in (0, 1)");
  }
}

std::vector<double> replication_pivots(const ExperimentSpec& spec, std::int64_t rep) {
  validate(spec);
  if (rep < 0 || rep >= spec.replications) throw UsageError("replication index out of range");
  const PathCoefficients coef = resolve_coefficients(spec.params);
  std::vector<double> pivots(static_cast<std::size_t>(spec.paths_per_test));
  for (std::int64_t j = 0; j < spec.paths_per_test; ++j) {
    const RngSeed seed{spec.seed_base,
                       static_cast<std::uint64_t>(rep * spec.paths_per_test + j)};
    try {
      const SimulatedPath path = simulate_path(coef, spec.params.n, seed);
      pivots[static_cast<std::size_t>(j)] = pivot(ols_rho(path), spec.params).value;
    } catch (const OverflowError& e) {
      throw OverflowError("path seed (" + std::to_string(seed.base) + ", " +
                              std::to_string(seed.stream) + "): " + e.what(),
                          e.index());
    }
  }
  return pivots;
}

KsResult run_replication(const ExperimentSpec& spec, std::int64_t rep) {
  const std::vector<double> pivots = replication_pivots(spec, rep);
  return ks_test(pivots, TargetLaw::for_params(spec.params));
}

ExperimentSummary summarize(std::vector<KsResult> per_replication, double alpha_level) {
  ExperimentSummary s;
  if (per_replication.empty()) return s;
  double sum_d = 0.0;
  std::size_t accepted = 0;
  for (const KsResult& r : per_replication) {
    sum_d += r.d_stat;
    if (r.p_value > alpha_level) ++accepted;
  }
  const auto r = static_cast<double>(per_replication.size());
  s.mean_ks = sum_d / r;
  s.acceptance_proportion = static_cast<double>(accepted) / r;
  s.per_replication = std::move(per_replication);
  return s;
}

ExperimentSummary run_experiment(const ExperimentSpec& spec, unsigned threads) {
  validate(spec);
  (void)resolve_coefficients(spec.params);  // surface domain errors before spawning
  (void)TargetLaw::for_params(spec.params);

  const auto reps = static_cast<std::size_t>(spec.replications);
  std::vector<KsResult> results(reps);
  std::vector<std::exception_ptr> errors(reps);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t rep = next++; rep < reps; rep = next++) {
      try {
        results[rep] = run_replication(spec, static_cast<std::int64_t>(rep));
      } catch (const OverflowError& e) {
        errors[rep] = std::make_exception_ptr(
            OverflowError("replication " + std::to_string(rep) + ": " + e.what(), e.index()));
      } catch (...) {
        errors[rep] = std::current_exception();
      }
    }
  };

  const unsigned workers = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(reps));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
  }

  // Lowest failing replication wins, whatever the schedule was.
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return summarize(std::move(results), spec.alpha_level);
}

TableId parse_table_id(std::string_view text) {
  if (text == "1a") return TableId::T1a;
  if (text == "1b") return TableId::T1b;
  if (text == "2a") return TableId::T2a;
  if (text == "2b") return TableId::T2b;
  throw UsageError("unknown table id '" + std::string(text) + "' (expected 1a|1b|2a|2b)");
}

std::string_view to_string(TableId id) {
  switch (id) {
    case TableId::T1a:
      return "1a";
    case TableId::T1b:
      return "1b";
    case TableId::T2a:
      return "2a";
    case TableId::T2b:
      return "2b";
  }
  return "";
}

std::vector<ExperimentSpec> table_specs(TableId id, const TableOptions& options) {
  const bool homoskedastic = id == TableId::T1a || id == TableId::T1b;
  const bool explosive = id == TableId::T1b || id == TableId::T2a;

  std::vector<SequenceSpec> rows;
  if (homoskedastic) {
    rows.push_back(SequenceSpec::constant(options.constant_kn));
    rows.push_back(SequenceSpec::log_of_n());
  }
  for (double a : {0.1, 0.25, 0.5, 0.75, 0.99}) rows.push_back(SequenceSpec::power_of_n(a));
  rows.push_back(SequenceSpec::linear_n());

  ModelParams base;
  base.regime = explosive ? Regime::MildlyExplosive : Regime::NearStationary;
  base.n = explosive ? options.n_explosive : options.n_near_stationary;
  base.d = 1.0;
  base.rn = SequenceSpec::log_of_n();
  if (homoskedastic) {
    base.alpha = 0.0;
    base.c = explosive ? options.table1_explosive_c : 1.0;
  } else {
    base.alpha = 0.5;
    base.c = options.table2_c;
  }

  std::vector<ExperimentSpec> specs;
  const auto table_tag = static_cast<std::uint64_t>(id) << 8;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ExperimentSpec spec;
    spec.params = base;
    spec.params.kn = rows[i];
    spec.paths_per_test = options.paths_per_test;
    spec.replications = options.replications;
    spec.seed_base = derive_seed(options.seed, table_tag | i);
    specs.push_back(spec);
  }
  return specs;
}

std::vector<TableRow> run_table(TableId id, const TableOptions& options) {
  std::vector<TableRow> rows;
  for (const ExperimentSpec& spec : table_specs(id, options)) {
    rows.push_back({spec.params.kn.to_string(), run_experiment(spec, options.threads)});
  }
  return rows;
}

double empirical_quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw InputError("quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * std::clamp(q, 0.0, 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

Histogram histogram_over_range(std::span<const double> sample, const TargetLaw& target, int bins,
                               double lo, double hi) {
  if (bins < 1) throw UsageError("histogram needs at least one bin");
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) {
    throw UsageError("histogram range must be finite with lo < hi");
  }
  if (sample.empty()) throw InputError("histogram of an empty sample");

  Histogram h;
  h.target = target;
  h.total = sample.size();
  const auto nb = static_cast<std::size_t>(bins);
  const double width = (hi - lo) / static_cast<double>(bins);
  h.edges.resize(nb + 1);
  for (std::size_t i = 0; i <= nb; ++i) h.edges[i] = lo + width * static_cast<double>(i);
  h.edges.back() = hi;
  h.counts.assign(nb, 0.0);
  for (double v : sample) {
    if (!(v >= lo && v <= hi)) {
      ++h.clipped;
      continue;
    }
    auto idx = static_cast<std::size_t>((v - lo) / width);
    h.counts[std::min(idx, nb - 1)] += 1.0;
  }
  for (std::size_t i = 0; i < nb; ++i) {
    const double mid = 0.5 * (h.edges[i] + h.edges[i + 1]);
    h.overlay_x.push_back(mid);
    h.overlay_density.push_back(density(target, mid));
    h.empirical_density.push_back(h.counts[i] / (static_cast<double>(h.total) * width));
  }
  return h;
}

Histogram histogram_from_sample(std::span<const double> sample, const TargetLaw& target, int bins,
                                double q_lo, double q_hi) {
  if (!(q_lo >= 0.0 && q_lo < q_hi && q_hi <= 1.0)) {
    throw UsageError("quantile window must satisfy 0 <= lo < hi <= 1");
  }
  std::vector<double> sorted(sample.begin(), sample.end());
  if (sorted.empty()) throw InputError("histogram of an empty sample");
  std::sort(sorted.begin(), sorted.end());

  double lo = empirical_quantile(sorted, q_lo);
  double hi = empirical_quantile(sorted, q_hi);
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  return histogram_over_range(sorted, target, bins, lo, hi);
}

Histogram emit_histogram(const ExperimentSpec& spec, int bins) {
  const bool cauchy = spec.params.regime == Regime::MildlyExplosive;
  return emit_histogram(spec, bins, cauchy ? 0.01 : 0.0, cauchy ? 0.99 : 1.0);
}

Histogram emit_histogram(const ExperimentSpec& spec, int bins, double q_lo, double q_hi) {
  const std::vector<double> pivots = replication_pivots(spec, 0);
  return histogram_from_sample(pivots, TargetLaw::for_params(spec.params), bins, q_lo, q_hi);
}

}  // namespace dl2u
