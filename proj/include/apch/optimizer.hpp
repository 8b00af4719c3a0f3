#pragma once

#include <functional>
#include <vector>

namespace apch {

struct NelderMeadResult {
    std::vector<double> x;
    double fmin = 0.0;
    bool converged = false;
    long n_evals = 0;
};

/// Derivative-free simplex minimization with standard reflect / expand /
/// contract / shrink coefficients. Coordinates are expected to be scaled to
/// O(1); the initial simplex offsets each coordinate by `step`. Stops when
/// the function spread across the simplex falls below rel_tol * (|f_best|+1)
/// or max_evals evaluations are spent.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& x0, double step, double rel_tol,
                             long max_evals);

} // namespace apch
