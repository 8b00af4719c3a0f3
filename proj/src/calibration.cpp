#include "apch/calibration.hpp"

#include "apch/changepoint.hpp"
#include "apch/errors.hpp"
#include "apch/parallel.hpp"
#include "apch/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace apch {

bool RiskReport::all_pass() const {
    for (bool p : pass)
        if (!p) return false;
    return !pass.empty();
}

std::string RiskReport::binding_steps() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < pass.size(); ++i) {
        if (pass[i]) continue;
        if (!first) os << ", ";
        os << (i + 1) << "(m=" << lengths[i] << ")";
        first = false;
    }
    return os.str();
}

std::size_t default_mc_reps(Family f) { return f == Family::Garch11 ? 400 : 1000; }

std::vector<double> default_c_grid() {
    std::vector<double> g(40);
    for (std::size_t i = 0; i < g.size(); ++i)
        g[i] = 2.0 + (120.0 - 2.0) * static_cast<double>(i) / 39.0;
    return g;
}

namespace {

// Everything a (C, D) evaluation needs from one simulated replicate: pooled
// fits, per-step supremum statistics, and the loss the procedure would incur
// on I_k after stopping at step j. sup_stats holds -inf for steps without a
// feasible candidate (they can never reject), mirroring select_interval.
struct ReplicateCore {
    std::vector<double> sup_stats;             // index k-1, k = 1..K
    std::vector<std::vector<double>> loss_pow; // [k-1][j-1] for j <= k
    double risk_pow = 0.0;
    bool failed = false;
};

std::vector<std::vector<std::size_t>> feasible_candidates(const ModelSpec& spec,
                                                          const IntervalGrid& grid,
                                                          std::size_t n) {
    std::vector<std::vector<std::size_t>> out(grid.K());
    for (std::size_t k = 1; k <= grid.K(); ++k) {
        const Interval Ik = grid.interval(k, n);
        const auto [lo, hi] = grid.candidate_range(k, n);
        for (std::size_t tau = lo; tau <= hi; ++tau)
            if (split_feasible(spec, Ik, tau)) out[k - 1].push_back(tau);
    }
    return out;
}

ReplicateCore run_replicate(const ModelSpec& spec, const ParamVector& theta0,
                            const IntervalGrid& grid, double r, InitRule init,
                            const OptimizerConfig& opt, std::uint64_t seed, std::size_t rep,
                            const std::vector<std::vector<std::size_t>>& candidates) {
    const std::size_t K = grid.K();
    const std::size_t n = grid.lengths.back() - 1;
    ReplicateCore core;
    core.sup_stats.assign(K, -std::numeric_limits<double>::infinity());
    core.loss_pow.resize(K);

    const SimulatedPath sim = simulate_path(spec, theta0, n + 1, derive_seed(seed, rep), init);
    const ReturnSeries& y = sim.y;

    std::vector<FitResult> pooled(K + 1);
    for (std::size_t k = 0; k <= K; ++k)
        pooled[k] = fit(spec, y, grid.interval(k, n), init, opt);

    for (std::size_t k = 1; k <= K; ++k) {
        if (!candidates[k - 1].empty()) {
            const BreakScan bs = scan(spec, y, grid.interval(k, n), candidates[k - 1], init, opt,
                                      /*jobs=*/1, &pooled[k]);
            core.sup_stats[k - 1] = bs.sup_stat;
        }
        core.loss_pow[k - 1].resize(k);
        for (std::size_t j = 1; j <= k; ++j) {
            const double l = pooled[k].loglik -
                             loglik(spec, pooled[j - 1].theta_hat, y, grid.interval(k, n), init);
            core.loss_pow[k - 1][j - 1] = std::pow(std::abs(l), r);
        }
    }
    const double risk =
        pooled[K].loglik - loglik(spec, theta0, y, grid.interval(K, n), init);
    core.risk_pow = std::pow(std::abs(risk), r);
    return core;
}

std::vector<ReplicateCore> precompute(const ModelSpec& spec, const ParamVector& theta0,
                                      const IntervalGrid& grid, double r, InitRule init,
                                      const OptimizerConfig& opt, std::size_t mc_reps,
                                      std::uint64_t seed, int jobs, double max_failure_rate,
                                      std::size_t* n_failures) {
    const std::size_t n = grid.lengths.back() - 1;
    const auto candidates = feasible_candidates(spec, grid, n);

    std::vector<ReplicateCore> cores(mc_reps);
    parallel_for(mc_reps, jobs, [&](std::size_t rep) {
        try {
            cores[rep] = run_replicate(spec, theta0, grid, r, init, opt, seed, rep, candidates);
        } catch (const std::exception&) {
            cores[rep].failed = true;
        }
    });

    std::size_t failures = 0;
    for (const ReplicateCore& c : cores)
        if (c.failed) ++failures;
    if (n_failures) *n_failures = failures;
    if (static_cast<double>(failures) > max_failure_rate * static_cast<double>(mc_reps))
        throw EstimationError(EstimationError::Code::CalibrationFailed,
                              std::to_string(failures) + " of " + std::to_string(mc_reps) +
                                  " calibration replicates failed to estimate; check model "
                                  "bounds against the simulated data");
    return cores;
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& v) {
    MeanSe ms;
    if (v.empty()) return ms;
    double s = 0.0;
    for (double x : v) s += x;
    ms.mean = s / static_cast<double>(v.size());
    double q = 0.0;
    for (double x : v) q += (x - ms.mean) * (x - ms.mean);
    if (v.size() > 1)
        ms.se = std::sqrt(q / static_cast<double>(v.size() - 1) /
                          static_cast<double>(v.size()));
    return ms;
}

// First rejection step under thresholds z (1-based; K+1 when never rejected).
std::size_t first_rejection(const ReplicateCore& core, const std::vector<double>& z) {
    for (std::size_t k = 1; k <= z.size(); ++k)
        if (core.sup_stats[k - 1] > z[k - 1]) return k;
    return z.size() + 1;
}

RiskReport evaluate_thresholds(const std::vector<ReplicateCore>& cores,
                               const IntervalGrid& grid, const std::vector<double>& z, double r,
                               double rho, double risk_hat, double risk_se) {
    const std::size_t K = grid.K();
    RiskReport report;
    report.r = r;
    report.rho = rho;
    report.risk_hat = risk_hat;
    report.risk_se = risk_se;
    report.lengths.assign(grid.lengths.begin() + 1, grid.lengths.end());
    report.z = z;

    std::vector<double> losses;
    for (std::size_t k = 1; k <= K; ++k) {
        losses.clear();
        for (const ReplicateCore& core : cores) {
            if (core.failed) continue;
            const std::size_t j = first_rejection(core, z);
            losses.push_back(j <= k ? core.loss_pow[k - 1][j - 1] : 0.0);
        }
        const MeanSe ms = mean_se(losses);
        const double target = rho * static_cast<double>(k) / static_cast<double>(K) * risk_hat;
        report.lhs.push_back(ms.mean);
        report.se.push_back(ms.se);
        report.target.push_back(target);
        report.pass.push_back(ms.mean <= target + 1.64 * ms.se);
        report.mc_reps = losses.size();
    }
    return report;
}

MeanSe risk_estimate(const std::vector<ReplicateCore>& cores) {
    std::vector<double> risks;
    for (const ReplicateCore& c : cores)
        if (!c.failed) risks.push_back(c.risk_pow);
    return mean_se(risks);
}

} // namespace

double estimate_parametric_risk(const ModelSpec& spec, const ParamVector& theta0,
                                const IntervalGrid& grid, double r, std::size_t mc_reps,
                                std::uint64_t seed, InitRule init, const OptimizerConfig& opt,
                                int jobs) {
    spec.validate();
    require_in_bounds(spec, theta0);
    if (!(r > 0.0)) throw std::invalid_argument("risk power r must be > 0");
    if (mc_reps < 100) throw std::invalid_argument("estimate_parametric_risk: mc_reps must be >= 100");

    const std::size_t n = grid.lengths.back() - 1;
    const Interval IK{0, n};
    std::vector<double> vals(mc_reps, 0.0);
    std::vector<char> failed(mc_reps, 0);
    parallel_for(mc_reps, jobs, [&](std::size_t rep) {
        try {
            const SimulatedPath sim = simulate_path(spec, theta0, n + 1, derive_seed(seed, rep), init);
            const FitResult fr = fit(spec, sim.y, IK, init, opt);
            const double l = fr.loglik - loglik(spec, theta0, sim.y, IK, init);
            vals[rep] = std::pow(std::abs(l), r);
        } catch (const std::exception&) {
            failed[rep] = 1;
        }
    });

    double sum = 0.0;
    std::size_t n_ok = 0, n_fail = 0;
    for (std::size_t i = 0; i < mc_reps; ++i) {
        if (failed[i]) {
            ++n_fail;
            continue;
        }
        sum += vals[i];
        ++n_ok;
    }
    if (static_cast<double>(n_fail) > 0.02 * static_cast<double>(mc_reps))
        throw EstimationError(EstimationError::Code::CalibrationFailed,
                              std::to_string(n_fail) + " of " + std::to_string(mc_reps) +
                                  " risk replicates failed to estimate");
    return sum / static_cast<double>(n_ok);
}

RiskReport check_schedule(const ModelSpec& spec, const ParamVector& theta0,
                          const IntervalGrid& grid, const CriticalValueSchedule& cv, double r,
                          double rho, std::size_t mc_reps, std::uint64_t seed, InitRule init,
                          const OptimizerConfig& opt, int jobs) {
    spec.validate();
    require_in_bounds(spec, theta0);
    if (!(r > 0.0)) throw std::invalid_argument("risk power r must be > 0");
    if (!(rho > 0.0)) throw std::invalid_argument("rho must be > 0");
    if (mc_reps < 100) throw std::invalid_argument("check_schedule: mc_reps must be >= 100");

    std::vector<double> z;
    for (std::size_t k = 1; k <= grid.K(); ++k) z.push_back(cv.z_at_length(grid.lengths[k]));

    std::size_t n_failures = 0;
    const std::vector<ReplicateCore> cores =
        precompute(spec, theta0, grid, r, init, opt, mc_reps, seed, jobs, 0.02, &n_failures);
    const MeanSe risk = risk_estimate(cores);
    RiskReport report = evaluate_thresholds(cores, grid, z, r, rho, risk.mean, risk.se);
    report.n_failures = n_failures;
    return report;
}

CriticalValueSchedule calibrate(const ModelSpec& spec, const ParamVector& theta0,
                                const IntervalGrid& grid, double r, double rho,
                                const CalibrationOptions& options) {
    spec.validate();
    require_in_bounds(spec, theta0);
    if (!(r > 0.0)) throw std::invalid_argument("risk power r must be > 0");
    if (!(rho > 0.0)) throw std::invalid_argument("rho must be > 0");

    const std::size_t mc_reps =
        options.mc_reps > 0 ? options.mc_reps : default_mc_reps(spec.family);
    if (mc_reps < 100) throw std::invalid_argument("calibrate: mc_reps must be >= 100");
    std::vector<double> c_grid = options.c_grid.empty() ? default_c_grid() : options.c_grid;
    std::sort(c_grid.begin(), c_grid.end());

    const std::size_t K = grid.K();
    if (K == 0)
        throw std::invalid_argument("calibrate: grid needs at least two lengths");

    std::size_t n_failures = 0;
    const std::vector<ReplicateCore> cores =
        precompute(spec, theta0, grid, r, options.init, options.opt, mc_reps, options.seed,
                   options.jobs, options.max_failure_rate, &n_failures);
    const MeanSe risk = risk_estimate(cores);

    // Stage 1: anchor C at the first step that can actually test anything
    // (the early GARCH windows are too short to split). A false alarm there
    // costs |L_{I_K}(fit_K, fit before the alarm)|^r; the threshold must keep
    // the mean cost below rho * risk / K.
    const std::size_t n = grid.lengths.back() - 1;
    const auto candidates = feasible_candidates(spec, grid, n);
    std::size_t k_first = 0;
    for (std::size_t k = 1; k <= K; ++k) {
        if (!candidates[k - 1].empty()) {
            k_first = k;
            break;
        }
    }
    if (k_first == 0)
        throw EstimationError(EstimationError::Code::CalibrationFailed,
                              "no grid step has a feasible break candidate");

    const double first_step_target =
        rho * risk.mean / static_cast<double>(K);
    auto first_step_cost = [&](double threshold) {
        std::vector<double> costs;
        for (const ReplicateCore& core : cores) {
            if (core.failed) continue;
            const bool alarm = core.sup_stats[k_first - 1] > threshold;
            costs.push_back(alarm ? core.loss_pow[K - 1][k_first - 1] : 0.0);
        }
        return mean_se(costs);
    };

    double C = std::numeric_limits<double>::quiet_NaN();
    for (double c : c_grid) {
        const MeanSe ms = first_step_cost(c);
        if (ms.mean <= first_step_target + 1.64 * ms.se) {
            C = c;
            break;
        }
    }
    if (!std::isfinite(C))
        throw EstimationError(EstimationError::Code::CalibrationFailed,
                              "first-step condition unsatisfied at step " +
                                  std::to_string(k_first) + " for every C in the grid");

    // Stage 2: steepest admissible slope. Smaller D lowers the later
    // thresholds and eventually breaks the propagation condition; bisect the
    // boundary.
    auto thresholds = [&](double d) {
        std::vector<double> z(K);
        for (std::size_t k = 1; k <= K; ++k)
            z[k - 1] = C + d * std::log(static_cast<double>(grid.lengths[k]));
        return z;
    };
    auto passes = [&](double d) {
        const std::vector<double> z = thresholds(d);
        if (z.back() <= 0.0) return std::make_pair(false, RiskReport{});
        RiskReport rep = evaluate_thresholds(cores, grid, z, r, rho, risk.mean, risk.se);
        return std::make_pair(rep.all_pass(), std::move(rep));
    };

    auto [ok_flat, report_flat] = passes(0.0);
    if (!ok_flat)
        throw EstimationError(EstimationError::Code::CalibrationFailed,
                              "propagation condition fails even with D = 0 at steps " +
                                  report_flat.binding_steps());
    double D = 0.0;
    if (passes(options.d_min).first) {
        D = options.d_min;
    } else {
        double lo = options.d_min, hi = 0.0; // lo fails, hi passes
        while (hi - lo > options.d_tol) {
            const double mid = 0.5 * (lo + hi);
            if (passes(mid).first)
                hi = mid;
            else
                lo = mid;
        }
        D = hi;
    }

    CriticalValueSchedule cv;
    cv.C = C;
    cv.D = D;
    cv.lengths = grid.lengths;
    cv.family = family_name(spec.family);
    cv.theta0 = theta0;
    cv.r = r;
    cv.rho = rho;
    cv.m0 = grid.m0;
    cv.a = grid.a;
    cv.mc_reps = mc_reps;
    cv.seed = options.seed;
    cv.refresh_values();
    return cv;
}

} // namespace apch
