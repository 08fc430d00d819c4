#pragma once

// Day-grid evaluation of the fitness-fatigue state models. Every function is
// pure; `horizon` is the number of days returned (g(0..horizon-1)) and must
// not exceed the load length. History before day 0 is zero.

#include "ffdelay/params.hpp"
#include "ffdelay/series.hpp"

namespace ffdelay {

/// Direct sum g(n) = sum_{i<n} w(i) exp(-(n-i)/tau).
[[nodiscard]] StateSeries eval_classical(const LoadSeries& w, const FirstOrderParams& p, Index horizon);

/// g(k+1) = [w(k) + g(k) - g(k-1)/tau_lag1] exp(-1/tau_decay)
[[nodiscard]] StateSeries eval_single_delay_recursive(const LoadSeries& w, const SingleDelayParams& p,
                                                      Index horizon);

/// g(n) = sum_{i=1}^{n-1} [w(i) - g(i-1)/tau_lag1] exp(-(n-i)/tau_decay)
[[nodiscard]] StateSeries eval_single_delay_convolution(const LoadSeries& w, const SingleDelayParams& p,
                                                        Index horizon);

[[nodiscard]] StateSeries eval_three_delay_recursive(const LoadSeries& w, const ThreeDelayParams& p,
                                                     Index horizon);

/// Grouped closed form: the load sum, the history sum over i = 1..n-3 with the
/// combined bracket [1/tau2 + e^{1/tau1}/tau3 + e^{2/tau1}/tau4], and the two
/// boundary terms in g(n-3) and g(n-2).
[[nodiscard]] StateSeries eval_three_delay_convolution(const LoadSeries& w, const ThreeDelayParams& p,
                                                       Index horizon);

/// g(k+1) = [w(k) + g(k) + tau5 (w1 g(k-1) + w2 g(k-2) + w3 g(k-3))] exp(-1/tau_decay)
[[nodiscard]] StateSeries eval_kernel_recursive(const LoadSeries& w, const KernelParams& p, Index horizon);

struct KernelMapping {
    ThreeDelayParams params;
    /// Set when tau5 > 0: the lag constants come out negative. The mapped
    /// recursion still matches the kernel one term by term.
    bool sign_domain_warning = false;
};

/// Lag constants tau_{l+1} = -1 / (weights[l] * tau5); all infinite for tau5 = 0.
[[nodiscard]] KernelMapping kernel_to_three_delay(const KernelParams& p);

/// Recursive evaluation for any variant. Classical, single-delay, three-delay
/// and kernel share one lagged recursion, so reductions (tau5 = 0, infinite
/// lags) reproduce the classical trajectory bit for bit.
[[nodiscard]] StateSeries eval_state(const LoadSeries& w, const StateParams& p, Index horizon);

/// p(n) = p0 + k1 g(n) - k2 h(n), with g and h from eval_state.
[[nodiscard]] Vector eval_performance(const LoadSeries& w, const PerformanceParams& p, Index horizon);

} // namespace ffdelay
