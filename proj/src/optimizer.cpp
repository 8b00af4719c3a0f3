#include "apch/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace apch {

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& x0, double step, double rel_tol,
                             long max_evals) {
    const std::size_t d = x0.size();
    NelderMeadResult res;

    std::vector<std::vector<double>> simplex(d + 1, x0);
    std::vector<double> fv(d + 1);
    for (std::size_t i = 0; i < d; ++i) simplex[i + 1][i] += step;
    for (std::size_t i = 0; i <= d; ++i) {
        fv[i] = f(simplex[i]);
        ++res.n_evals;
    }

    const double refl = 1.0, expd = 2.0, contr = 0.5, shrink = 0.5;
    std::vector<std::size_t> order(d + 1);

    while (res.n_evals < max_evals) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t best = order[0], worst = order[d], second_worst = order[d - 1];

        if (std::abs(fv[worst] - fv[best]) <= rel_tol * (std::abs(fv[best]) + 1.0)) {
            res.converged = true;
            break;
        }

        std::vector<double> centroid(d, 0.0);
        for (std::size_t i = 0; i <= d; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < d; ++j) centroid[j] += simplex[i][j];
        }
        for (double& c : centroid) c /= static_cast<double>(d);

        auto blend = [&](double coef) {
            std::vector<double> x(d);
            for (std::size_t j = 0; j < d; ++j)
                x[j] = centroid[j] + coef * (centroid[j] - simplex[worst][j]);
            return x;
        };

        std::vector<double> xr = blend(refl);
        const double fr = f(xr);
        ++res.n_evals;

        if (fr < fv[order[0]]) {
            std::vector<double> xe = blend(expd);
            const double fe = f(xe);
            ++res.n_evals;
            if (fe < fr) {
                simplex[worst] = std::move(xe);
                fv[worst] = fe;
            } else {
                simplex[worst] = std::move(xr);
                fv[worst] = fr;
            }
        } else if (fr < fv[second_worst]) {
            simplex[worst] = std::move(xr);
            fv[worst] = fr;
        } else {
            const bool outside = fr < fv[worst];
            std::vector<double> xc = blend(outside ? contr : -contr);
            const double fc = f(xc);
            ++res.n_evals;
            if (fc < std::min(fr, fv[worst])) {
                simplex[worst] = std::move(xc);
                fv[worst] = fc;
            } else {
                for (std::size_t i = 0; i <= d; ++i) {
                    if (i == best) continue;
                    for (std::size_t j = 0; j < d; ++j)
                        simplex[i][j] = simplex[best][j] + shrink * (simplex[i][j] - simplex[best][j]);
                    fv[i] = f(simplex[i]);
                    ++res.n_evals;
                }
            }
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i <= d; ++i)
        if (fv[i] < fv[best]) best = i;
    res.x = simplex[best];
    res.fmin = fv[best];
    return res;
}

} // namespace apch
