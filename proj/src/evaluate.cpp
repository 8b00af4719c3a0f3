#include "apch/evaluate.hpp"

#include "apch/errors.hpp"
#include "apch/mle.hpp"
#include "apch/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace apch {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::string proxy_name(Proxy p) {
    return p == Proxy::TrueSigma2 ? "true-sigma2" : "squared-returns";
}

Proxy proxy_from_name(const std::string& name) {
    if (name == "true-sigma2") return Proxy::TrueSigma2;
    if (name == "squared-returns") return Proxy::SquaredReturns;
    throw std::invalid_argument("unknown proxy: " + name);
}

double forecast_vol(const ModelSpec& spec, const ParamVector& theta, double sigma2_n, double y_n,
                    std::size_t h) {
    require_in_bounds(spec, theta);
    if (h < 1) throw std::invalid_argument("forecast horizon must be >= 1");
    if (!(sigma2_n > 0.0) || !std::isfinite(sigma2_n) || !std::isfinite(y_n))
        throw std::invalid_argument("forecast_vol: invalid state (sigma2_n, y_n)");
    if (spec.family == Family::Constant) return theta.omega;
    double s = theta.omega + theta.alpha * y_n * y_n + theta.beta * sigma2_n;
    for (std::size_t i = 2; i <= h; ++i) s = theta.omega + (theta.alpha + theta.beta) * s;
    return s;
}

ApeResult ape(const std::vector<std::size_t>& endpoints,
              const std::vector<std::vector<double>>& forecasts,
              const std::vector<std::string>& errors, const std::vector<double>& proxy,
              const std::vector<std::size_t>& horizons) {
    if (forecasts.size() != endpoints.size())
        throw std::invalid_argument("ape: forecasts not aligned with endpoints");
    ApeResult out;
    out.ape.assign(endpoints.size(), kNaN);
    double total = 0.0;
    std::size_t n_ok = 0;
    for (std::size_t i = 0; i < endpoints.size(); ++i) {
        if (!errors.empty() && !errors[i].empty()) {
            ++out.n_excluded;
            continue;
        }
        const std::size_t t = endpoints[i];
        double sum = 0.0;
        bool complete = true;
        for (std::size_t hi = 0; hi < horizons.size(); ++hi) {
            const std::size_t target = t + horizons[hi];
            if (target >= proxy.size()) {
                complete = false;
                break;
            }
            sum += std::abs(proxy[target] - forecasts[i][hi]);
        }
        if (!complete) {
            ++out.n_excluded;
            continue;
        }
        out.ape[i] = sum / static_cast<double>(horizons.size());
        total += out.ape[i];
        ++n_ok;
    }
    out.global = n_ok > 0 ? total / static_cast<double>(n_ok) : kNaN;
    return out;
}

std::vector<double> trailing_mean(const std::vector<std::size_t>& endpoints,
                                  const std::vector<double>& values, std::size_t w) {
    if (w < 1) throw std::invalid_argument("trailing window must be >= 1");
    std::vector<double> out(endpoints.size(), kNaN);
    for (std::size_t i = 0; i < endpoints.size(); ++i) {
        const std::size_t t = endpoints[i];
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t j = 0; j <= i; ++j) {
            if (endpoints[j] + w <= t) continue;
            if (std::isnan(values[j])) continue;
            sum += values[j];
            ++count;
        }
        if (count > 0) out[i] = sum / static_cast<double>(count);
    }
    return out;
}

MethodForecasts run_method(const MethodSpec& method, const ReturnSeries& y,
                           const std::vector<std::size_t>& endpoints, const IntervalGrid& grid,
                           const std::vector<std::size_t>& horizons, InitRule init,
                           const OptimizerConfig& opt, int jobs) {
    if (horizons.empty()) throw std::invalid_argument("run_method: empty horizon set");
    MethodForecasts out;
    out.name = method.name;
    out.endpoints = endpoints;
    out.sigma2_hat.assign(endpoints.size(), {});
    out.errors.assign(endpoints.size(), "");

    parallel_for(endpoints.size(), jobs, [&](std::size_t i) {
        const std::size_t n = endpoints[i];
        try {
            ParamVector theta;
            Interval I;
            if (method.kind == MethodSpec::Kind::Adaptive) {
                const AdaptiveFit af =
                    select_interval(method.model, y, n, grid, method.schedule, init, opt, 1);
                theta = af.theta_hat;
                I = af.interval;
            } else {
                if (n + 1 < method.model.min_obs())
                    throw EstimationError(EstimationError::Code::TooFewObservations,
                                          "not enough history at endpoint " + std::to_string(n));
                const std::size_t m = std::min(method.window, n + 1);
                I = Interval{n + 1 - m, n};
                theta = fit(method.model, y, I, init, opt).theta_hat;
            }
            // Variance state at the endpoint from the fitted recursion.
            const double* w = y.values.data() + I.start;
            const std::size_t m = I.length();
            double s2 = initial_variance(method.model, theta, w, m, init);
            for (std::size_t t = 1; t < m; ++t)
                s2 = theta.omega + theta.alpha * w[t - 1] * w[t - 1] + theta.beta * s2;
            std::vector<double> fc(horizons.size());
            for (std::size_t hi = 0; hi < horizons.size(); ++hi)
                fc[hi] = forecast_vol(method.model, theta, s2, y.values[n], horizons[hi]);
            out.sigma2_hat[i] = std::move(fc);
        } catch (const std::exception& e) {
            out.errors[i] = e.what();
        }
    });
    return out;
}

double ComparisonReport::global_for(const std::string& method) const {
    for (std::size_t i = 0; i < methods.size(); ++i)
        if (methods[i] == method) return global_pe[i];
    throw std::invalid_argument("no such method in report: " + method);
}

std::string ComparisonReport::to_csv(const std::vector<std::string>& t_labels) const {
    std::ostringstream os;
    os << "t,method,ape_w,ratio_baseline\n";
    for (std::size_t m = 0; m < methods.size(); ++m) {
        for (std::size_t i = 0; i < endpoints.size(); ++i) {
            const std::size_t t = endpoints[i];
            if (t < t_labels.size() && !t_labels[t].empty())
                os << t_labels[t];
            else
                os << t;
            os << "," << methods[m] << "," << fmt(ape_w[m][i]) << "," << fmt(ratio[m][i]) << "\n";
        }
    }
    os << "# summary: baseline=" << baseline << " window=" << window << "\n";
    for (std::size_t m = 0; m < methods.size(); ++m)
        os << "# global_pe," << methods[m] << "," << fmt(global_pe[m]) << ","
           << fmt(global_ratio[m]) << "," << n_excluded[m] << "\n";
    return os.str();
}

ComparisonReport compare_methods(const std::vector<MethodForecasts>& methods,
                                 const std::vector<double>& proxy,
                                 const std::vector<std::size_t>& horizons, std::size_t w,
                                 const std::string& baseline) {
    if (methods.empty()) throw std::invalid_argument("compare_methods: no methods");
    for (const MethodForecasts& m : methods)
        if (m.endpoints != methods.front().endpoints)
            throw std::invalid_argument("compare_methods: endpoint ranges differ between '" +
                                        methods.front().name + "' and '" + m.name + "'");

    std::size_t baseline_idx = methods.size();
    for (std::size_t i = 0; i < methods.size(); ++i)
        if (methods[i].name == baseline) baseline_idx = i;
    if (baseline_idx == methods.size())
        throw std::invalid_argument("compare_methods: baseline '" + baseline + "' not present");

    ComparisonReport report;
    report.endpoints = methods.front().endpoints;
    report.baseline = baseline;
    report.window = w;

    std::vector<ApeResult> apes;
    for (const MethodForecasts& m : methods) {
        apes.push_back(ape(m.endpoints, m.sigma2_hat, m.errors, proxy, horizons));
        report.methods.push_back(m.name);
    }

    const std::vector<double> base_w =
        trailing_mean(report.endpoints, apes[baseline_idx].ape, w);
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        std::vector<double> aw = trailing_mean(report.endpoints, apes[mi].ape, w);
        std::vector<double> ratio(aw.size(), kNaN);
        for (std::size_t i = 0; i < aw.size(); ++i)
            if (!std::isnan(aw[i]) && !std::isnan(base_w[i]) && base_w[i] > 0.0)
                ratio[i] = aw[i] / base_w[i];
        report.ape_w.push_back(std::move(aw));
        report.ratio.push_back(std::move(ratio));
        report.global_pe.push_back(apes[mi].global);
        report.global_ratio.push_back(apes[baseline_idx].global > 0.0
                                          ? apes[mi].global / apes[baseline_idx].global
                                          : kNaN);
        report.n_excluded.push_back(apes[mi].n_excluded);
    }
    return report;
}

std::pair<double, double> tune_r_rho(const ModelSpec& spec, const ReturnSeries& y,
                                     const IntervalGrid& grid,
                                     const std::vector<TuneCandidate>& candidates,
                                     double lambda_exponent,
                                     const std::vector<std::size_t>& horizons,
                                     const std::vector<std::size_t>& endpoints,
                                     const std::vector<double>& proxy, InitRule init,
                                     const OptimizerConfig& opt, int jobs) {
    if (candidates.empty()) throw std::invalid_argument("tune_r_rho: no candidates");
    if (endpoints.empty()) throw std::invalid_argument("tune_r_rho: empty endpoint set");
    if (horizons.empty()) throw std::invalid_argument("tune_r_rho: empty horizon set");
    if (!(lambda_exponent > 0.0))
        throw std::invalid_argument("tune_r_rho: loss exponent must be > 0");

    double best_obj = std::numeric_limits<double>::infinity();
    std::pair<double, double> best{candidates.front().r, candidates.front().rho};
    bool have_best = false;

    for (const TuneCandidate& cand : candidates) {
        MethodSpec method;
        method.name = "tune";
        method.model = spec;
        method.kind = MethodSpec::Kind::Adaptive;
        method.schedule = cand.schedule;
        const MethodForecasts mf =
            run_method(method, y, endpoints, grid, horizons, init, opt, jobs);

        double obj = 0.0;
        for (std::size_t i = 0; i < endpoints.size(); ++i) {
            if (!mf.errors[i].empty())
                throw EstimationError(EstimationError::Code::CalibrationFailed,
                                      "tune_r_rho: estimation failed at endpoint " +
                                          std::to_string(endpoints[i]) + ": " + mf.errors[i]);
            for (std::size_t hi = 0; hi < horizons.size(); ++hi) {
                const std::size_t target = endpoints[i] + horizons[hi];
                if (target >= proxy.size()) continue;
                obj += std::pow(std::abs(proxy[target] - mf.sigma2_hat[i][hi]), lambda_exponent);
            }
        }
        const bool better =
            !have_best || obj < best_obj ||
            (obj == best_obj &&
             (cand.r < best.first || (cand.r == best.first && cand.rho < best.second)));
        if (better) {
            best_obj = obj;
            best = {cand.r, cand.rho};
            have_best = true;
        }
    }
    return best;
}

} // namespace apch
