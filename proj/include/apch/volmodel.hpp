#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace apch {

enum class Family { Constant, Arch1, Garch11 };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

/// Parametric volatility family plus the compact parameter set it lives on.
/// omega is the variance intercept, alpha the squared-return loading, beta
/// the variance-lag loading; inactive loadings are pinned to zero by the
/// family. The stationarity margin keeps alpha + beta <= 1 - margin.
struct ModelSpec {
    Family family = Family::Garch11;
    double omega_min = 1e-8;
    double omega_max = 1e6;
    double alpha_max = 0.999;
    double beta_max = 0.999;
    double stationarity_margin = 1e-6;

    static ModelSpec constant();
    static ModelSpec arch1();
    static ModelSpec garch11();
    static ModelSpec make(Family f);

    bool alpha_active() const { return family != Family::Constant; }
    bool beta_active() const { return family == Family::Garch11; }
    int n_params() const;

    /// Smallest window a quasi-MLE fit accepts: 1 / 5 / 10 observations for
    /// constant / ARCH(1) / GARCH(1,1).
    std::size_t min_obs() const;

    /// Throws std::invalid_argument unless the bounds describe a nonempty
    /// compact set with omega_min > 0.
    void validate() const;
};

/// (omega, alpha, beta); components inactive for the family must be exactly 0.
struct ParamVector {
    double omega = 0.0;
    double alpha = 0.0;
    double beta = 0.0;

    bool operator==(const ParamVector&) const = default;
};

std::string to_string(const ParamVector& p);

bool in_bounds(const ModelSpec& spec, const ParamVector& theta);

/// Throws std::domain_error when theta violates the spec's bounds or has
/// nonzero inactive components.
void require_in_bounds(const ModelSpec& spec, const ParamVector& theta);

/// Observed returns; labels are opaque pass-through identifiers (timestamps
/// in CLI data) and never enter any computation.
struct ReturnSeries {
    std::vector<double> values;
    std::vector<std::string> labels;

    std::size_t size() const { return values.size(); }
};

/// Throws std::invalid_argument if the series is empty or has a non-finite
/// entry (names the index).
void validate_returns(const ReturnSeries& y);

struct VolatilityPath {
    std::vector<double> sigma2;
};

/// First value of the variance recursion on a window. Unconditional uses
/// omega / (1 - alpha - beta) (falling back to omega when alpha + beta >= 1),
/// SampleVariance uses the mean squared return of the window floored at
/// omega_min. The constant family ignores the rule: its recursion is sigma2
/// == omega everywhere.
enum class InitRule { Unconditional, Omega, SampleVariance };

std::string init_rule_name(InitRule r);
InitRule init_rule_from_name(const std::string& name);

double initial_variance(const ModelSpec& spec, const ParamVector& theta,
                        const double* window, std::size_t len, InitRule init);

/// Deterministic variance recursion over all of y, restarted at index 0 with
/// the init rule: sigma2_t = omega + alpha y_{t-1}^2 + beta sigma2_{t-1}.
VolatilityPath volatility_path(const ModelSpec& spec, const ParamVector& theta,
                               const ReturnSeries& y, InitRule init);

struct SimulatedPath {
    ReturnSeries y;
    VolatilityPath sigma2;
};

/// Simulates n observations of y_t = sigma_t * eps_t with standard normal
/// eps_t; bit-identical for identical (seed, theta, n).
SimulatedPath simulate_path(const ModelSpec& spec, const ParamVector& theta,
                            std::size_t n, std::uint64_t seed,
                            InitRule init = InitRule::Unconditional);

} // namespace apch
