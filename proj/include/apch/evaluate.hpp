#pragma once

#include "apch/adaptive.hpp"
#include "apch/schedule.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace apch {

/// Volatility stand-in used for prediction errors: the simulated true path,
/// or squared returns on real data (noisy but unbiased).
enum class Proxy { TrueSigma2, SquaredReturns };

std::string proxy_name(Proxy p);
Proxy proxy_from_name(const std::string& name);

/// h-step-ahead conditional variance from the state (sigma2_n, y_n):
/// one step is omega + alpha y_n^2 + beta sigma2_n, further steps iterate
/// the expectation recursion omega + (alpha + beta) * prev. The constant
/// family forecasts omega at every horizon.
double forecast_vol(const ModelSpec& spec, const ParamVector& theta, double sigma2_n, double y_n,
                    std::size_t h);

/// Per-endpoint volatility forecasts of one method over a shared horizon set.
struct MethodForecasts {
    std::string name;
    std::vector<std::size_t> endpoints;
    std::vector<std::vector<double>> sigma2_hat; // [endpoint index][horizon index]
    std::vector<std::string> errors;             // per endpoint; empty when ok
};

struct ApeResult {
    std::vector<double> ape; // per endpoint; NaN when excluded
    std::size_t n_excluded = 0;
    double global = 0.0;     // mean over included endpoints
};

/// Absolute prediction error per endpoint: mean over h in H of
/// |proxy[t+h] - forecast|. Endpoints whose proxy value is missing (t + h
/// beyond the series) or whose forecast failed are excluded and counted.
ApeResult ape(const std::vector<std::size_t>& endpoints,
              const std::vector<std::vector<double>>& forecasts,
              const std::vector<std::string>& errors, const std::vector<double>& proxy,
              const std::vector<std::size_t>& horizons);

/// Trailing mean of per-endpoint values over observation-time windows of w:
/// entry i averages the values at endpoints within (t_i - w, t_i].
std::vector<double> trailing_mean(const std::vector<std::size_t>& endpoints,
                                  const std::vector<double>& values, std::size_t w);

/// How a comparison method produces forecasts: the adaptive procedure under a
/// calibrated schedule, or a fixed-window rolling parametric refit.
struct MethodSpec {
    enum class Kind { Adaptive, RollingParametric };
    std::string name;
    ModelSpec model;
    Kind kind = Kind::Adaptive;
    CriticalValueSchedule schedule; // Adaptive only
    std::size_t window = 500;       // RollingParametric only
};

MethodForecasts run_method(const MethodSpec& method, const ReturnSeries& y,
                           const std::vector<std::size_t>& endpoints, const IntervalGrid& grid,
                           const std::vector<std::size_t>& horizons, InitRule init,
                           const OptimizerConfig& opt, int jobs = 1);

struct ComparisonReport {
    std::vector<std::size_t> endpoints;
    std::vector<std::string> methods;
    std::string baseline;
    std::size_t window = 21;
    std::vector<std::vector<double>> ape_w;  // [method][endpoint]
    std::vector<std::vector<double>> ratio;  // [method][endpoint], vs baseline
    std::vector<double> global_pe;           // [method]
    std::vector<double> global_ratio;        // [method]
    std::vector<std::size_t> n_excluded;     // [method]

    double global_for(const std::string& method) const;

    /// CSV rows t,method,ape_w,ratio_baseline followed by a commented summary
    /// block with the global prediction errors.
    std::string to_csv(const std::vector<std::string>& t_labels = {}) const;
};

/// w-averaged APE per method plus ratios against the named baseline. All
/// method forecast tables must share the endpoint range.
ComparisonReport compare_methods(const std::vector<MethodForecasts>& methods,
                                 const std::vector<double>& proxy,
                                 const std::vector<std::size_t>& horizons, std::size_t w,
                                 const std::string& baseline);

struct TuneCandidate {
    double r = 1.0;
    double rho = 1.0;
    CriticalValueSchedule schedule;
};

/// Data-driven (r, rho) selection: runs the adaptive procedure under each
/// candidate schedule and returns the pair minimizing the total forecast loss
/// sum_n sum_h |proxy_{n+h} - forecast|^lambda_exponent. Ties resolve to the
/// smaller r, then the smaller rho.
std::pair<double, double> tune_r_rho(const ModelSpec& spec, const ReturnSeries& y,
                                     const IntervalGrid& grid,
                                     const std::vector<TuneCandidate>& candidates,
                                     double lambda_exponent, const std::vector<std::size_t>& horizons,
                                     const std::vector<std::size_t>& endpoints,
                                     const std::vector<double>& proxy, InitRule init,
                                     const OptimizerConfig& opt, int jobs = 1);

} // namespace apch
