#pragma once

#include "ffdelay/series.hpp"

#include <functional>
#include <vector>

namespace ffdelay {

struct NelderMeadOptions {
    int max_iterations = 4000;
    /// Stop when f(worst) - f(best) <= f_tolerance.
    double f_tolerance = 1e-12;
    /// Stop when every vertex lies within x_tolerance (max-norm) of the best one.
    double x_tolerance = 1e-10;
    /// Edge length of the initial right-angled simplex.
    double initial_step = 0.5;
};

struct NelderMeadResult {
    Vector x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;  // false when max_iterations was hit
    std::vector<double> best_trace;  // best vertex value after each iteration
};

using Objective = std::function<double(const Vector&)>;

/// Downhill simplex minimisation with dimension-adaptive coefficients
/// (reflection 1, expansion 1 + 2/n, contraction 3/4 - 1/(2n), shrink 1 - 1/n).
/// Non-finite objective values inside the search count as +inf; a non-finite
/// value at `start` throws InputError.
[[nodiscard]] NelderMeadResult nelder_mead(const Objective& f, const Vector& start,
                                           const NelderMeadOptions& options = {});

} // namespace ffdelay
