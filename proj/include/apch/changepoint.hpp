#pragma once

#include "apch/likelihood.hpp"
#include "apch/mle.hpp"
#include "apch/volmodel.hpp"

#include <cstddef>
#include <vector>

namespace apch {

/// Result of the supremum likelihood-ratio sweep over candidate break
/// positions tau inside one interval. A candidate tau splits I into
/// J = [start, tau] and Jc = [tau+1, end]; candidates leaving either segment
/// below the family minimum are filtered into `skipped` before the sweep, so
/// `stats` aligns with `candidates`.
struct BreakScan {
    Interval interval;
    std::vector<std::size_t> candidates;
    std::vector<double> stats;
    std::vector<std::size_t> skipped;
    double sup_stat = 0.0;
    std::size_t argmax_tau = 0;
};

/// Likelihood-ratio statistic L_J(fit_J) + L_Jc(fit_Jc) - L_I(fit_I) for one
/// break position; both segment recursions restart at their own segment
/// start. Nonnegative in exact arithmetic since the split nests the pooled
/// model.
double lr_stat(const ModelSpec& spec, const ReturnSeries& y, const Interval& I, std::size_t tau,
               InitRule init, const OptimizerConfig& opt);

/// Sweeps lr_stat over the candidate set, recording per-tau statistics and
/// their supremum. Segment fits are warm-started from the pooled fit and are
/// independent across tau, so jobs > 1 (OpenMP) reproduces the jobs == 1
/// serial reference exactly. Throws EstimationError::NoFeasibleCandidate when
/// filtering empties the candidate set. `pooled`, when given, must equal
/// fit(spec, y, I, init, opt) and skips recomputing it.
BreakScan scan(const ModelSpec& spec, const ReturnSeries& y, const Interval& I,
               const std::vector<std::size_t>& candidates, InitRule init,
               const OptimizerConfig& opt, int jobs = 1, const FitResult* pooled = nullptr);

/// True when tau leaves both segments at or above spec.min_obs().
bool split_feasible(const ModelSpec& spec, const Interval& I, std::size_t tau);

} // namespace apch
