#include "apch/likelihood.hpp"

#include "apch/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace apch {

void validate_interval(const Interval& I, std::size_t series_size) {
    if (I.start > I.end)
        throw std::invalid_argument("interval start " + std::to_string(I.start) +
                                    " exceeds end " + std::to_string(I.end));
    if (I.end >= series_size)
        throw std::invalid_argument("interval end " + std::to_string(I.end) +
                                    " outside series of length " + std::to_string(series_size));
}

double loglik(const ModelSpec& spec, const ParamVector& theta, const ReturnSeries& y,
              const Interval& I, InitRule init) {
    spec.validate();
    require_in_bounds(spec, theta);
    validate_interval(I, y.size());

    const double* w = y.values.data() + I.start;
    const std::size_t m = I.length();
    double s2 = initial_variance(spec, theta, w, m, init);
    double sum = 0.0;
    for (std::size_t t = 0; t < m; ++t) {
        if (t > 0) {
            const double y_prev = w[t - 1];
            s2 = theta.omega + theta.alpha * y_prev * y_prev + theta.beta * s2;
        }
        const double yt = w[t];
        const double term = -0.5 * (std::log(s2) + yt * yt / s2);
        if (!std::isfinite(term))
            throw NumericError(I.start + t,
                               "non-finite likelihood term at index " + std::to_string(I.start + t));
        sum += term;
    }
    return sum;
}

LoglikWithGrad loglik_with_grad(const ModelSpec& spec, const ParamVector& theta,
                                const ReturnSeries& y, const Interval& I, InitRule init) {
    spec.validate();
    require_in_bounds(spec, theta);
    validate_interval(I, y.size());

    const double* w = y.values.data() + I.start;
    const std::size_t m = I.length();

    // d sigma2_1 / d theta depends on the init rule.
    double ds_dw = 0.0, ds_da = 0.0, ds_db = 0.0;
    if (spec.family == Family::Constant) {
        ds_dw = 1.0;
    } else {
        switch (init) {
            case InitRule::Omega:
                ds_dw = 1.0;
                break;
            case InitRule::Unconditional: {
                const double persist = theta.alpha + theta.beta;
                if (persist < 1.0) {
                    const double inv = 1.0 / (1.0 - persist);
                    ds_dw = inv;
                    ds_da = theta.omega * inv * inv;
                    ds_db = ds_da;
                } else {
                    ds_dw = 1.0;
                }
                break;
            }
            case InitRule::SampleVariance:
                break; // data-determined start, no parameter dependence
        }
    }

    LoglikWithGrad out;
    double s2 = initial_variance(spec, theta, w, m, init);
    for (std::size_t t = 0; t < m; ++t) {
        if (t > 0) {
            const double y2_prev = w[t - 1] * w[t - 1];
            const double s2_prev = s2;
            s2 = theta.omega + theta.alpha * y2_prev + theta.beta * s2_prev;
            ds_dw = 1.0 + theta.beta * ds_dw;
            ds_da = y2_prev + theta.beta * ds_da;
            ds_db = s2_prev + theta.beta * ds_db;
        }
        const double yt = w[t];
        const double term = -0.5 * (std::log(s2) + yt * yt / s2);
        if (!std::isfinite(term))
            throw NumericError(I.start + t,
                               "non-finite likelihood term at index " + std::to_string(I.start + t));
        out.value += term;
        // d ell / d sigma2 = 0.5 (y^2 - sigma2) / sigma2^2
        const double dl_ds = 0.5 * (yt * yt - s2) / (s2 * s2);
        out.grad[0] += dl_ds * ds_dw;
        if (spec.alpha_active()) out.grad[1] += dl_ds * ds_da;
        if (spec.beta_active()) out.grad[2] += dl_ds * ds_db;
    }
    return out;
}

double loss(const ModelSpec& spec, const ParamVector& theta_ref, const ParamVector& theta,
            const ReturnSeries& y, const Interval& I, InitRule init) {
    return loglik(spec, theta_ref, y, I, init) - loglik(spec, theta, y, I, init);
}

double kl_gauss(double v, double v_prime) {
    if (!(v > 0.0) || !(v_prime > 0.0))
        throw std::domain_error("kl_gauss: variances must be positive");
    const double ratio = v / v_prime;
    return 0.5 * (ratio - 1.0 - std::log(ratio));
}

double modeling_bias(const ModelSpec& spec, const ParamVector& theta, const ReturnSeries& y,
                     const Interval& I, const VolatilityPath& sigma2_true, InitRule init) {
    validate_interval(I, y.size());
    if (sigma2_true.sigma2.size() != y.size())
        throw std::invalid_argument("modeling_bias: true variance path length " +
                                    std::to_string(sigma2_true.sigma2.size()) +
                                    " does not match series length " + std::to_string(y.size()));
    spec.validate();
    require_in_bounds(spec, theta);

    const double* w = y.values.data() + I.start;
    const std::size_t m = I.length();
    double s2 = initial_variance(spec, theta, w, m, init);
    double sum = 0.0;
    for (std::size_t t = 0; t < m; ++t) {
        if (t > 0) {
            const double y_prev = w[t - 1];
            s2 = theta.omega + theta.alpha * y_prev * y_prev + theta.beta * s2;
        }
        sum += kl_gauss(sigma2_true.sigma2[I.start + t], s2);
    }
    return sum;
}

} // namespace apch
