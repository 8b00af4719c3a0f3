#include "apch/adaptive.hpp"

#include "apch/errors.hpp"
#include "apch/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace apch {

IntervalGrid IntervalGrid::geometric(std::size_t m0, double a, std::size_t m_max) {
    if (m0 < 1) throw std::invalid_argument("grid m0 must be >= 1");
    if (!(a > 1.0)) throw std::invalid_argument("grid multiplier a must be > 1");
    if (m_max < m0) throw std::invalid_argument("grid m_max must be >= m0");
    IntervalGrid g;
    g.m0 = m0;
    g.a = a;
    double len = static_cast<double>(m0);
    for (;;) {
        const auto m = static_cast<std::size_t>(std::llround(len));
        if (m > m_max) break;
        if (g.lengths.empty() || m > g.lengths.back()) g.lengths.push_back(m);
        len *= a;
    }
    if (g.lengths.empty() || g.lengths.back() != m_max) g.lengths.push_back(m_max);
    return g;
}

IntervalGrid IntervalGrid::from_lengths(std::vector<std::size_t> lengths) {
    if (lengths.empty()) throw std::invalid_argument("grid needs at least one length");
    for (std::size_t i = 1; i < lengths.size(); ++i)
        if (lengths[i] <= lengths[i - 1])
            throw std::invalid_argument("grid lengths must be strictly increasing");
    IntervalGrid g;
    g.m0 = lengths.front();
    g.a = 0.0;
    g.lengths = std::move(lengths);
    return g;
}

Interval IntervalGrid::interval(std::size_t k, std::size_t n) const {
    const std::size_t m = lengths.at(k);
    if (n + 1 < m) throw std::invalid_argument("interval length exceeds history at endpoint");
    return Interval{n + 1 - m, n};
}

std::pair<std::size_t, std::size_t> IntervalGrid::candidate_range(std::size_t k,
                                                                  std::size_t n) const {
    if (k < 1 || k > K()) throw std::invalid_argument("candidate_range: step out of range");
    if (k == 1) {
        // No two prior grid lengths exist; scan the older half of I_0.
        const std::size_t half = (m0 + 1) / 2;
        return {n + 1 - m0, n - half};
    }
    return {n + 1 - lengths[k - 1], n - lengths[k - 2]};
}

IntervalGrid IntervalGrid::truncate_to_history(std::size_t history) const {
    IntervalGrid g;
    g.m0 = m0;
    g.a = a;
    for (std::size_t m : lengths)
        if (m <= history) g.lengths.push_back(m);
    if (g.lengths.empty())
        throw std::invalid_argument("history of " + std::to_string(history) +
                                    " observations is shorter than m0 = " + std::to_string(m0));
    return g;
}

std::string stop_reason_name(StopReason r) {
    switch (r) {
        case StopReason::BreakDetected: return "break-detected";
        case StopReason::GridExhausted: return "grid-exhausted";
        case StopReason::HistoryExhausted: return "history-exhausted";
    }
    return "unknown";
}

AdaptiveFit select_interval(const ModelSpec& spec, const ReturnSeries& y, std::size_t n,
                            const IntervalGrid& grid, const CriticalValueSchedule& cv,
                            InitRule init, const OptimizerConfig& opt, int jobs) {
    spec.validate();
    validate_returns(y);
    if (n >= y.size()) throw std::invalid_argument("endpoint outside series");
    if (grid.m0 < spec.min_obs())
        throw std::invalid_argument("grid m0 = " + std::to_string(grid.m0) +
                                    " is below the family minimum of " +
                                    std::to_string(spec.min_obs()));

    const IntervalGrid eff = grid.truncate_to_history(n + 1);
    const bool truncated = eff.lengths.size() < grid.lengths.size();

    AdaptiveFit result;
    result.endpoint = n;
    result.selected_k = eff.K();
    result.stopped_reason = truncated ? StopReason::HistoryExhausted : StopReason::GridExhausted;

    for (std::size_t k = 1; k <= eff.K(); ++k) {
        const Interval Ik = eff.interval(k, n);
        StepRecord step;
        step.k = k;
        step.m_k = eff.lengths[k];
        step.z_k = cv.z_at_length(eff.lengths[k]);

        const auto [lo, hi] = eff.candidate_range(k, n);
        std::vector<std::size_t> candidates;
        for (std::size_t tau = lo; tau <= hi; ++tau)
            if (split_feasible(spec, Ik, tau)) candidates.push_back(tau);
        step.n_candidates = candidates.size();

        if (candidates.empty()) {
            // Nothing testable at this window size; acceptance is vacuous.
            step.tested = false;
            step.accepted = true;
            result.trace.push_back(step);
            continue;
        }

        bool rejected;
        try {
            const BreakScan bs = scan(spec, y, Ik, candidates, init, opt, jobs);
            step.tested = true;
            step.sup_stat = bs.sup_stat;
            rejected = bs.sup_stat > step.z_k;
        } catch (const std::exception&) {
            step.tested = true;
            step.anomaly = true;
            step.sup_stat = std::numeric_limits<double>::quiet_NaN();
            rejected = true;
        }
        step.accepted = !rejected;
        result.trace.push_back(step);
        if (rejected) {
            result.selected_k = k - 1;
            result.stopped_reason = StopReason::BreakDetected;
            break;
        }
    }

    result.interval = eff.interval(result.selected_k, n);
    const FitResult refit = fit(spec, y, result.interval, init, opt);
    result.theta_hat = refit.theta_hat;
    result.loglik = refit.loglik;
    return result;
}

RollingResult rolling_fit(const ModelSpec& spec, const ReturnSeries& y,
                          const std::vector<std::size_t>& endpoints, const IntervalGrid& grid,
                          const CriticalValueSchedule& cv, InitRule init,
                          const OptimizerConfig& opt, int jobs) {
    RollingResult out;
    out.endpoints = endpoints;
    out.fits.resize(endpoints.size());
    out.errors.resize(endpoints.size());
    parallel_for(endpoints.size(), jobs, [&](std::size_t i) {
        try {
            out.fits[i] = select_interval(spec, y, endpoints[i], grid, cv, init, opt, 1);
        } catch (const std::exception& e) {
            out.errors[i] = e.what();
        }
    });
    for (const std::string& e : out.errors)
        if (!e.empty()) ++out.n_failures;
    return out;
}

} // namespace apch
