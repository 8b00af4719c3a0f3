#pragma once

#include "apch/adaptive.hpp"
#include "apch/mle.hpp"
#include "apch/schedule.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace apch {

/// Per-step verdicts of the propagation condition
///   E |L_{I_k}(fit_k, estimate-after-k-steps)|^r  <=  (rho k / K) * risk_hat,
/// tested as Monte Carlo means with a one-sided slack of 1.64 standard
/// errors. risk_hat is the matched-replicate estimate of the parametric risk
/// bound E |L_{I_K}(fit_K, theta0)|^r.
struct RiskReport {
    double r = 1.0;
    double rho = 1.0;
    double risk_hat = 0.0;
    double risk_se = 0.0;
    std::size_t mc_reps = 0;
    std::size_t n_failures = 0;
    std::vector<std::size_t> lengths; // m_k for the tested steps k = 1..K
    std::vector<double> z;            // thresholds in force per step
    std::vector<double> lhs;          // estimated left side per step
    std::vector<double> se;           // MC standard error of lhs
    std::vector<double> target;       // rho_k * risk_hat
    std::vector<bool> pass;

    bool all_pass() const;
    /// Comma-separated list of failing steps as "k(m=length)"; empty if none.
    std::string binding_steps() const;
};

struct CalibrationOptions {
    std::size_t mc_reps = 0;          // 0 = family default (1000 const/ARCH, 400 GARCH)
    std::uint64_t seed = 0;
    InitRule init = InitRule::Unconditional;
    OptimizerConfig opt;
    std::vector<double> c_grid;       // empty = default 40 points on [2, 120]
    double d_min = -20.0;
    double d_tol = 0.05;
    int jobs = 1;
    double max_failure_rate = 0.02;
};

std::size_t default_mc_reps(Family f);
std::vector<double> default_c_grid();

/// Monte Carlo estimate of the parametric risk bound: the mean of
/// |fitted_loss at theta0|^r on the largest grid interval over mc_reps
/// simulated parametric samples. Reproducible from the seed; replicate
/// order does not affect the result.
double estimate_parametric_risk(const ModelSpec& spec, const ParamVector& theta0,
                                const IntervalGrid& grid, double r, std::size_t mc_reps,
                                std::uint64_t seed, InitRule init = InitRule::Unconditional,
                                const OptimizerConfig& opt = {}, int jobs = 1);

/// Runs the adaptive procedure on parametric simulations under the given
/// schedule and reports the propagation condition per step.
RiskReport check_schedule(const ModelSpec& spec, const ParamVector& theta0,
                          const IntervalGrid& grid, const CriticalValueSchedule& cv, double r,
                          double rho, std::size_t mc_reps, std::uint64_t seed,
                          InitRule init = InitRule::Unconditional,
                          const OptimizerConfig& opt = {}, int jobs = 1);

/// Two-stage Monte Carlo search for the schedule z_k = C + D log m_k:
/// C is the smallest grid value whose first-testable-step false alarms cost
/// at most a rho/K fraction of the parametric risk (all later tests
/// disabled); D is then the most negative value in [d_min, 0] keeping the
/// full propagation condition satisfied, located by bisection to d_tol.
/// Throws EstimationError::CalibrationFailed naming the binding step when no
/// admissible pair exists.
CriticalValueSchedule calibrate(const ModelSpec& spec, const ParamVector& theta0,
                                const IntervalGrid& grid, double r, double rho,
                                const CalibrationOptions& options);

} // namespace apch
