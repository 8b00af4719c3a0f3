#pragma once

#include "apch/likelihood.hpp"
#include "apch/volmodel.hpp"

#include <vector>

namespace apch {

struct OptimizerConfig {
    double rel_tol = 1e-8;   // relative likelihood change declaring convergence
    long max_evals = 2000;   // likelihood evaluations per start
    bool gradient_polish = true;
};

struct FitResult {
    ParamVector theta_hat;
    double loglik = 0.0;
    bool converged = false;
    long n_evals = 0;
};

/// Quasi-MLE over the spec's compact parameter set. The constant family is
/// solved in closed form (mean squared return, clipped to bounds); ARCH and
/// GARCH run a box-bounded simplex search from five deterministic starts
/// followed by a projected-gradient polish. `hint`, when given, is an
/// additional start (used by the break scan to warm-start segment fits from
/// the pooled estimate). Ties across starts resolve to the highest likelihood
/// and then the lexicographically smallest parameter vector, so the result
/// does not depend on start ordering.
FitResult fit(const ModelSpec& spec, const ReturnSeries& y, const Interval& I, InitRule init,
              const OptimizerConfig& opt, const ParamVector* hint = nullptr);

/// fit(...).loglik - loglik(theta): the likelihood deficit of theta relative
/// to the interval's maximum. Nonnegative up to optimizer tolerance.
double fitted_loss(const ModelSpec& spec, const ReturnSeries& y, const Interval& I,
                   const ParamVector& theta, InitRule init, const OptimizerConfig& opt);

/// Membership test for the likelihood-ratio confidence set at level z_alpha.
bool confidence_set_contains(const ModelSpec& spec, const ReturnSeries& y, const Interval& I,
                             const ParamVector& theta, double z_alpha, InitRule init,
                             const OptimizerConfig& opt);

namespace detail {

/// Deterministic start list for the simplex search (moment-matched point,
/// bound midpoint, three spread points), projected into the feasible set.
std::vector<ParamVector> default_starts(const ModelSpec& spec, double mean_sq);

/// Retraction into the feasible set: box clamps plus proportional shrink of
/// (alpha, beta) onto the stationarity cap.
ParamVector project_to_feasible(const ModelSpec& spec, const ParamVector& theta);

/// fit() with an explicit start list; exposed for the start-order tests.
FitResult fit_from_starts(const ModelSpec& spec, const ReturnSeries& y, const Interval& I,
                          InitRule init, const OptimizerConfig& opt,
                          const std::vector<ParamVector>& starts);

} // namespace detail

} // namespace apch
