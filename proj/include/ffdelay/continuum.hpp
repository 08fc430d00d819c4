#pragma once

// Method-of-steps integration of the delay equations on a sub-day grid
// t_j = j/m. Each panel [t_j, t_j + 1/m] applies left-endpoint quadrature to
// the forcing term and exact exponential attenuation:
//
//   g(t_{j+1}) = e^{-h/tau} [ g(t_j) + h (w(t_j) - sum_l g(t_j - l)/tau_{l+1}) ]
//
// The one-day delay is exactly m grid steps, so delayed values are read from
// the stored grid. With m = 1 this is the day-grid recursion.

#include "ffdelay/params.hpp"
#include "ffdelay/series.hpp"

#include <utility>
#include <variant>
#include <vector>

namespace ffdelay {

/// Daily loads read as a piecewise-constant function w(t) = w(floor(t)).
struct StepLoad {
    LoadSeries daily;

    [[nodiscard]] double operator()(double t) const;
};

struct GridSolution {
    int substeps_per_day = 1;
    Vector values;  // length days * m + 1
    std::variant<SingleDelayParams, ThreeDelayParams> params;

    /// Value at whole day `day`.
    [[nodiscard]] double at_day(Index day) const { return values[day * substeps_per_day]; }
    [[nodiscard]] Vector day_values() const;
};

[[nodiscard]] GridSolution integrate_single_delay(const StepLoad& w, const SingleDelayParams& p, Index days,
                                                  int substeps);
[[nodiscard]] GridSolution integrate_three_delay(const StepLoad& w, const ThreeDelayParams& p, Index days,
                                                 int substeps);

struct ConvergenceEntry {
    int substeps;
    double sup_diff;  // max over the coarse grid of |g_m - g_finest|
};

/// Solves on every grid in `m_list` and reports the distance of each coarser
/// grid to the finest one (the last entry of `m_list`, which is not reported).
/// `m_list` must be strictly increasing and every entry must divide the last.
[[nodiscard]] std::vector<ConvergenceEntry> convergence_probe(const StepLoad& w, const SingleDelayParams& p,
                                                              Index days, const std::vector<int>& m_list);

} // namespace ffdelay
