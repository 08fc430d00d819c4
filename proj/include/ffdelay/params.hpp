#pragma once

#include "ffdelay/series.hpp"

#include <array>
#include <limits>
#include <variant>

namespace ffdelay {

/// Lag constant meaning 1/tau = 0: the delayed term is switched off exactly.
inline constexpr double kInfiniteLag = std::numeric_limits<double>::infinity();

/// g' = -g/tau_decay + w
struct FirstOrderParams {
    double tau_decay = 1.0;
};

/// g' = -g/tau_decay - g(t-1)/tau_lag1 + w
struct SingleDelayParams {
    double tau_decay = 1.0;
    double tau_lag1 = kInfiniteLag;
};

/// g' = -g/tau_decay - g(t-1)/tau_lag1 - g(t-2)/tau_lag2 - g(t-3)/tau_lag3 + w
struct ThreeDelayParams {
    double tau_decay = 1.0;
    double tau_lag1 = kInfiniteLag;
    double tau_lag2 = kInfiniteLag;
    double tau_lag3 = kInfiniteLag;
};

/// g' = -g/tau_decay + tau5 * sum_l weights[l] g(t-l-1) + w, finite three-day memory.
struct KernelParams {
    double tau_decay = 1.0;
    double tau5 = 0.0;
    std::array<double, 3> weights{0.5, 0.3, 0.2};
};

using StateParams = std::variant<FirstOrderParams, SingleDelayParams, ThreeDelayParams, KernelParams>;

// Domain checks; each throws ParameterError. Lag constants must be non-zero
// and not NaN; +inf is the "no delay" sentinel. Negative lag constants are
// accepted (they arise from kernel_to_three_delay with tau5 > 0).
void validate(const FirstOrderParams& p);
void validate(const SingleDelayParams& p);
void validate(const ThreeDelayParams& p);
void validate(const KernelParams& p);
void validate(const StateParams& p);

[[nodiscard]] ModelVariant variant_of(const StateParams& p) noexcept;
[[nodiscard]] double decay_of(const StateParams& p) noexcept;

/// p(n) = p0 + k1 g(n) - k2 h(n). `fitness` and `fatigue` must be the same
/// variant; the default is the single-delay model.
struct PerformanceParams {
    double p0 = 0.0;
    double k1 = 1.0;
    double k2 = 1.0;
    StateParams fitness = SingleDelayParams{};
    StateParams fatigue = SingleDelayParams{};

    [[nodiscard]] ModelVariant variant() const noexcept { return variant_of(fitness); }
};

void validate(const PerformanceParams& p);

/// Free parameters of the performance model for a variant (p0 included).
[[nodiscard]] int parameter_count(ModelVariant v) noexcept;

} // namespace ffdelay
