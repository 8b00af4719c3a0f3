#pragma once

#include "apch/volmodel.hpp"

#include <array>
#include <cstddef>

namespace apch {

/// Inclusive index window [start, end] into a ReturnSeries.
struct Interval {
    std::size_t start = 0;
    std::size_t end = 0;

    std::size_t length() const { return end - start + 1; }
    bool operator==(const Interval&) const = default;
};

/// Throws std::invalid_argument unless start <= end <= size-1.
void validate_interval(const Interval& I, std::size_t series_size);

/// Gaussian quasi-log-likelihood sum_{t in I} -0.5 (log s2_t + y_t^2 / s2_t),
/// with the variance recursion restarted at I.start under the init rule.
double loglik(const ModelSpec& spec, const ParamVector& theta, const ReturnSeries& y,
              const Interval& I, InitRule init);

struct LoglikWithGrad {
    double value = 0.0;
    std::array<double, 3> grad{0.0, 0.0, 0.0}; // d/d(omega, alpha, beta)
};

/// Likelihood and its analytic gradient from one pass of the recursion.
/// Components for inactive parameters are zero.
LoglikWithGrad loglik_with_grad(const ModelSpec& spec, const ParamVector& theta,
                                const ReturnSeries& y, const Interval& I, InitRule init);

/// loglik(theta_ref) - loglik(theta).
double loss(const ModelSpec& spec, const ParamVector& theta_ref, const ParamVector& theta,
            const ReturnSeries& y, const Interval& I, InitRule init);

/// Kullback-Leibler distance between centered normals with variances v and
/// v_prime, in the nonnegative orientation 0.5 (v/v' - 1 - log(v/v')).
double kl_gauss(double v, double v_prime);

/// Cumulative KL distance over I between a known true variance path and the
/// model-implied path for theta (recursion restarted at I.start).
double modeling_bias(const ModelSpec& spec, const ParamVector& theta, const ReturnSeries& y,
                     const Interval& I, const VolatilityPath& sigma2_true, InitRule init);

} // namespace apch
