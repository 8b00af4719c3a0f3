#include "apch/changepoint.hpp"

#include "apch/errors.hpp"
#include "apch/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace apch {

bool split_feasible(const ModelSpec& spec, const Interval& I, std::size_t tau) {
    if (tau < I.start || tau >= I.end) return false;
    const std::size_t left = tau - I.start + 1;
    const std::size_t right = I.end - tau;
    return left >= spec.min_obs() && right >= spec.min_obs();
}

namespace {

double split_stat(const ModelSpec& spec, const ReturnSeries& y, const Interval& I,
                  std::size_t tau, InitRule init, const OptimizerConfig& opt,
                  double pooled_loglik, const ParamVector* hint) {
    const Interval J{I.start, tau};
    const Interval Jc{tau + 1, I.end};
    const FitResult left = fit(spec, y, J, init, opt, hint);
    const FitResult right = fit(spec, y, Jc, init, opt, hint);
    return left.loglik + right.loglik - pooled_loglik;
}

} // namespace

double lr_stat(const ModelSpec& spec, const ReturnSeries& y, const Interval& I, std::size_t tau,
               InitRule init, const OptimizerConfig& opt) {
    validate_interval(I, y.size());
    if (!split_feasible(spec, I, tau))
        throw EstimationError(EstimationError::Code::TooFewObservations,
                              "break at " + std::to_string(tau) + " leaves a segment of [" +
                                  std::to_string(I.start) + "," + std::to_string(I.end) +
                                  "] below the family minimum");
    const FitResult pooled = fit(spec, y, I, init, opt);
    return split_stat(spec, y, I, tau, init, opt, pooled.loglik, &pooled.theta_hat);
}

BreakScan scan(const ModelSpec& spec, const ReturnSeries& y, const Interval& I,
               const std::vector<std::size_t>& candidates, InitRule init,
               const OptimizerConfig& opt, int jobs, const FitResult* pooled) {
    validate_interval(I, y.size());
    if (candidates.empty())
        throw std::invalid_argument("scan: empty candidate set");

    BreakScan result;
    result.interval = I;
    for (std::size_t tau : candidates) {
        if (split_feasible(spec, I, tau))
            result.candidates.push_back(tau);
        else
            result.skipped.push_back(tau);
    }
    if (result.candidates.empty())
        throw EstimationError(EstimationError::Code::NoFeasibleCandidate,
                              "no feasible break candidate in [" + std::to_string(I.start) + "," +
                                  std::to_string(I.end) + "] for " + family_name(spec.family));

    FitResult pooled_local;
    if (!pooled) {
        pooled_local = fit(spec, y, I, init, opt);
        pooled = &pooled_local;
    }
    result.stats.resize(result.candidates.size());
    parallel_for(result.candidates.size(), jobs, [&](std::size_t i) {
        result.stats[i] = split_stat(spec, y, I, result.candidates[i], init, opt, pooled->loglik,
                                     &pooled->theta_hat);
    });

    std::size_t best = 0;
    for (std::size_t i = 1; i < result.stats.size(); ++i)
        if (result.stats[i] > result.stats[best]) best = i;
    result.sup_stat = result.stats[best];
    result.argmax_tau = result.candidates[best];
    return result;
}

} // namespace apch
