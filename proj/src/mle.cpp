#include "apch/mle.hpp"

#include "apch/errors.hpp"
#include "apch/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace apch {

namespace detail {

ParamVector project_to_feasible(const ModelSpec& spec, const ParamVector& theta) {
    ParamVector p = theta;
    p.omega = std::clamp(p.omega, spec.omega_min, spec.omega_max);
    p.alpha = spec.alpha_active() ? std::clamp(p.alpha, 0.0, spec.alpha_max) : 0.0;
    p.beta = spec.beta_active() ? std::clamp(p.beta, 0.0, spec.beta_max) : 0.0;
    const double cap = 1.0 - spec.stationarity_margin;
    const double persist = p.alpha + p.beta;
    if (persist > cap) {
        const double scale = cap / persist;
        p.alpha *= scale;
        p.beta *= scale;
        while (p.alpha + p.beta > cap) { // rounding can leave the sum an ulp high
            p.alpha = std::nextafter(p.alpha, 0.0);
            p.beta = std::nextafter(p.beta, 0.0);
        }
    }
    return p;
}

std::vector<ParamVector> default_starts(const ModelSpec& spec, double mean_sq) {
    const double v = std::max(mean_sq, spec.omega_min);
    std::vector<ParamVector> starts;
    auto moment = [&](double a, double b) {
        return ParamVector{v * std::max(1.0 - a - b, 0.05), a, b};
    };
    const double omega_mid = std::sqrt(spec.omega_min * spec.omega_max);
    if (spec.family == Family::Garch11) {
        starts.push_back(moment(0.10, 0.80));
        starts.push_back({omega_mid, 0.5 * spec.alpha_max, 0.5 * spec.beta_max});
        starts.push_back(moment(0.05, 0.90));
        starts.push_back(moment(0.30, 0.00));
        starts.push_back(moment(0.20, 0.40));
    } else {
        starts.push_back(moment(0.30, 0.0));
        starts.push_back({omega_mid, 0.5 * spec.alpha_max, 0.0});
        starts.push_back(moment(0.05, 0.0));
        starts.push_back(moment(0.15, 0.0));
        starts.push_back(moment(0.70, 0.0));
    }
    for (auto& s : starts) s = project_to_feasible(spec, s);
    return starts;
}

namespace {

struct ScaledProblem {
    const ModelSpec& spec;
    const ReturnSeries& y;
    const Interval& I;
    InitRule init;
    double v_scale; // omega divisor keeping all coordinates O(1)
    int dim;        // 2 for ARCH(1), 3 for GARCH(1,1)

    ParamVector decode(const std::vector<double>& x) const {
        ParamVector p;
        p.omega = x[0] * v_scale;
        p.alpha = x[1];
        p.beta = dim == 3 ? x[2] : 0.0;
        return p;
    }

    std::vector<double> encode(const ParamVector& p) const {
        std::vector<double> x(dim);
        x[0] = p.omega / v_scale;
        x[1] = p.alpha;
        if (dim == 3) x[2] = p.beta;
        return x;
    }

    // Negative likelihood at the retracted point plus a quadratic pull back
    // into the feasible set; +inf on numeric failure so the simplex backs off.
    double objective(const std::vector<double>& x) const {
        const ParamVector raw = decode(x);
        const ParamVector proj = project_to_feasible(spec, raw);
        const std::vector<double> xp = encode(proj);
        double dist2 = 0.0;
        for (int j = 0; j < dim; ++j) dist2 += (x[j] - xp[j]) * (x[j] - xp[j]);
        try {
            return -loglik(spec, proj, y, I, init) + 1e9 * dist2;
        } catch (const NumericError&) {
            return std::numeric_limits<double>::infinity();
        }
    }
};

double mean_squared(const ReturnSeries& y, const Interval& I) {
    double s = 0.0;
    for (std::size_t t = I.start; t <= I.end; ++t) s += y.values[t] * y.values[t];
    return s / static_cast<double>(I.length());
}

FitResult fit_constant(const ModelSpec& spec, const ReturnSeries& y, const Interval& I,
                       InitRule init) {
    FitResult r;
    const double v = mean_squared(y, I);
    r.theta_hat = ParamVector{std::clamp(v, spec.omega_min, spec.omega_max), 0.0, 0.0};
    r.loglik = loglik(spec, r.theta_hat, y, I, init);
    r.converged = true;
    r.n_evals = 1;
    return r;
}

// Projected steepest ascent in the scaled coordinates with backtracking.
// Only accepts strict improvements, so the multi-start guarantee survives.
std::pair<ParamVector, double> polish(const ScaledProblem& prob, const OptimizerConfig& opt,
                                      ParamVector theta, double value, long& n_evals) {
    for (int iter = 0; iter < 40 && n_evals < 4 * opt.max_evals; ++iter) {
        LoglikWithGrad lg;
        try {
            lg = loglik_with_grad(prob.spec, theta, prob.y, prob.I, prob.init);
        } catch (const NumericError&) {
            break;
        }
        ++n_evals;
        std::vector<double> g(prob.dim);
        g[0] = lg.grad[0] * prob.v_scale;
        g[1] = lg.grad[1];
        if (prob.dim == 3) g[2] = lg.grad[2];
        double norm = 0.0;
        for (double gi : g) norm += gi * gi;
        norm = std::sqrt(norm);
        if (norm < 1e-14) break;

        const std::vector<double> x = prob.encode(theta);
        double step = 0.1 / norm;
        bool improved = false;
        for (int half = 0; half < 30; ++half, step *= 0.5) {
            std::vector<double> xc(prob.dim);
            for (int j = 0; j < prob.dim; ++j) xc[j] = x[j] + step * g[j];
            const ParamVector cand = project_to_feasible(prob.spec, prob.decode(xc));
            double lc;
            try {
                lc = loglik(prob.spec, cand, prob.y, prob.I, prob.init);
            } catch (const NumericError&) {
                continue;
            }
            ++n_evals;
            if (lc > value) {
                const double gain = lc - value;
                theta = cand;
                value = lc;
                improved = true;
                if (gain <= opt.rel_tol * (std::abs(value) + 1.0)) return {theta, value};
                break;
            }
        }
        if (!improved) break;
    }
    return {theta, value};
}

} // namespace

FitResult fit_from_starts(const ModelSpec& spec, const ReturnSeries& y, const Interval& I,
                          InitRule init, const OptimizerConfig& opt,
                          const std::vector<ParamVector>& starts) {
    const ScaledProblem prob{spec, y, I, init,
                             std::max(mean_squared(y, I), spec.omega_min), spec.n_params()};

    struct Candidate {
        ParamVector theta;
        double value;
        bool converged;
    };
    std::vector<Candidate> cands;
    long n_evals = 0;
    for (const ParamVector& s : starts) {
        const ParamVector s_proj = project_to_feasible(spec, s);
        NelderMeadResult nm =
            nelder_mead([&prob](const std::vector<double>& x) { return prob.objective(x); },
                        prob.encode(s_proj), 0.08, opt.rel_tol, opt.max_evals);
        n_evals += nm.n_evals;
        const ParamVector theta = project_to_feasible(spec, prob.decode(nm.x));
        double value;
        try {
            value = loglik(spec, theta, y, I, init);
        } catch (const NumericError&) {
            continue;
        }
        ++n_evals;
        cands.push_back({theta, value, nm.converged});
    }
    if (cands.empty())
        throw EstimationError(EstimationError::Code::CalibrationFailed,
                              "all optimizer starts failed numerically");

    auto key = [](const Candidate& c) {
        return std::make_tuple(-c.value, c.theta.omega, c.theta.alpha, c.theta.beta);
    };
    const Candidate* best = &cands[0];
    for (const Candidate& c : cands)
        if (key(c) < key(*best)) best = &c;

    FitResult r;
    r.theta_hat = best->theta;
    r.loglik = best->value;
    r.converged = best->converged;
    if (opt.gradient_polish) {
        auto [theta, value] = polish(prob, opt, r.theta_hat, r.loglik, n_evals);
        r.theta_hat = theta;
        r.loglik = value;
    }
    r.n_evals = n_evals;
    return r;
}

} // namespace detail

FitResult fit(const ModelSpec& spec, const ReturnSeries& y, const Interval& I, InitRule init,
              const OptimizerConfig& opt, const ParamVector* hint) {
    spec.validate();
    validate_interval(I, y.size());
    if (I.length() < spec.min_obs())
        throw EstimationError(EstimationError::Code::TooFewObservations,
                              family_name(spec.family) + " fit needs at least " +
                                  std::to_string(spec.min_obs()) + " observations, got " +
                                  std::to_string(I.length()));
    if (spec.family == Family::Constant) return detail::fit_constant(spec, y, I, init);

    std::vector<ParamVector> starts =
        detail::default_starts(spec, detail::mean_squared(y, I));
    if (hint) starts.push_back(detail::project_to_feasible(spec, *hint));
    return detail::fit_from_starts(spec, y, I, init, opt, starts);
}

double fitted_loss(const ModelSpec& spec, const ReturnSeries& y, const Interval& I,
                   const ParamVector& theta, InitRule init, const OptimizerConfig& opt) {
    const FitResult r = fit(spec, y, I, init, opt);
    return r.loglik - loglik(spec, theta, y, I, init);
}

bool confidence_set_contains(const ModelSpec& spec, const ReturnSeries& y, const Interval& I,
                             const ParamVector& theta, double z_alpha, InitRule init,
                             const OptimizerConfig& opt) {
    if (!(z_alpha > 0.0)) throw std::invalid_argument("z_alpha must be > 0");
    return fitted_loss(spec, y, I, theta, init, opt) <= z_alpha;
}

} // namespace apch
