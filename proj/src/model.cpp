#include "ffdelay/model.hpp"

#include "ffdelay/errors.hpp"

#include <cmath>
#include <string>

namespace ffdelay {

namespace {

void check_decay(double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw ParameterError("decay time constant must be positive and finite, got " + std::to_string(tau));
    }
}

void check_lag(double tau) {
    if (std::isnan(tau) || tau == 0.0) {
        throw ParameterError("lag time constant must be non-zero (use +inf to disable the lag)");
    }
}

void check_horizon(const LoadSeries& w, Index horizon) {
    if (horizon < 0) throw InputLengthError("horizon must be non-negative");
    if (horizon > w.size()) {
        throw InputLengthError("horizon " + std::to_string(horizon) + " exceeds load series length " +
                               std::to_string(w.size()));
    }
}

// exp(-m / tau) for m = 0..count-1, each computed directly.
Vector decay_powers(double tau, Index count) {
    Vector out(count);
    for (Index m = 0; m < count; ++m) out[m] = std::exp(-static_cast<double>(m) / tau);
    return out;
}

// g(k+1) = a [w(k) + g(k) + c0 g(k-1) + c1 g(k-2) + c2 g(k-3)], zero history.
Vector lagged_recursion(const Vector& w, double tau_decay, const std::array<double, 3>& coeff, Index horizon) {
    Vector g = Vector::Zero(horizon);
    const double a = std::exp(-1.0 / tau_decay);
    auto at = [&g](Index k) { return k >= 0 ? g[k] : 0.0; };
    for (Index k = 0; k + 1 < horizon; ++k) {
        g[k + 1] = a * (w[k] + g[k] + coeff[0] * at(k - 1) + coeff[1] * at(k - 2) + coeff[2] * at(k - 3));
    }
    return g;
}

double neg_rate(double tau_lag) { return -1.0 / tau_lag; }

} // namespace

void validate(const FirstOrderParams& p) { check_decay(p.tau_decay); }

void validate(const SingleDelayParams& p) {
    check_decay(p.tau_decay);
    check_lag(p.tau_lag1);
}

void validate(const ThreeDelayParams& p) {
    check_decay(p.tau_decay);
    check_lag(p.tau_lag1);
    check_lag(p.tau_lag2);
    check_lag(p.tau_lag3);
}

void validate(const KernelParams& p) {
    check_decay(p.tau_decay);
    if (!std::isfinite(p.tau5)) throw ParameterError("kernel gain tau5 must be finite");
    double sum = 0.0;
    for (double wt : p.weights) {
        if (!(wt > 0.0 && wt < 1.0)) throw ParameterError("kernel weights must lie in (0, 1)");
        sum += wt;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw ParameterError("kernel weights must sum to 1");
}

void validate(const StateParams& p) {
    std::visit([](const auto& q) { validate(q); }, p);
}

ModelVariant variant_of(const StateParams& p) noexcept {
    switch (p.index()) {
    case 0: return ModelVariant::classical;
    case 1: return ModelVariant::single_delay;
    case 2: return ModelVariant::three_delay;
    default: return ModelVariant::kernel;
    }
}

double decay_of(const StateParams& p) noexcept {
    return std::visit([](const auto& q) { return q.tau_decay; }, p);
}

void validate(const PerformanceParams& p) {
    if (!std::isfinite(p.p0)) throw ParameterError("p0 must be finite");
    if (!(p.k1 > 0.0) || !std::isfinite(p.k1)) throw ParameterError("k1 must be positive and finite");
    if (!(p.k2 > 0.0) || !std::isfinite(p.k2)) throw ParameterError("k2 must be positive and finite");
    if (p.fitness.index() != p.fatigue.index()) {
        throw ParameterError("fitness and fatigue must use the same model variant");
    }
    validate(p.fitness);
    validate(p.fatigue);
}

int parameter_count(ModelVariant v) noexcept {
    switch (v) {
    case ModelVariant::classical: return 5;
    case ModelVariant::single_delay: return 7;
    case ModelVariant::three_delay: return 11;
    case ModelVariant::kernel: return 7;
    }
    return 0;
}

StateSeries eval_classical(const LoadSeries& w, const FirstOrderParams& p, Index horizon) {
    validate(p);
    check_horizon(w, horizon);
    const Vector e = decay_powers(p.tau_decay, horizon + 1);
    Vector g = Vector::Zero(horizon);
    for (Index n = 1; n < horizon; ++n) {
        double sum = 0.0;
        for (Index i = 0; i < n; ++i) sum += w[i] * e[n - i];
        g[n] = sum;
    }
    return {std::move(g), ModelVariant::classical};
}

StateSeries eval_single_delay_recursive(const LoadSeries& w, const SingleDelayParams& p, Index horizon) {
    validate(p);
    check_horizon(w, horizon);
    return {lagged_recursion(w.values(), p.tau_decay, {neg_rate(p.tau_lag1), 0.0, 0.0}, horizon),
            ModelVariant::single_delay};
}

StateSeries eval_single_delay_convolution(const LoadSeries& w, const SingleDelayParams& p, Index horizon) {
    validate(p);
    check_horizon(w, horizon);
    const double rate = 1.0 / p.tau_lag1;
    const Vector e = decay_powers(p.tau_decay, horizon + 1);
    Vector g = Vector::Zero(horizon);
    for (Index n = 2; n < horizon; ++n) {
        double sum = 0.0;
        for (Index i = 1; i <= n - 1; ++i) sum += (w[i] - rate * g[i - 1]) * e[n - i];
        g[n] = sum;
    }
    return {std::move(g), ModelVariant::single_delay};
}

StateSeries eval_three_delay_recursive(const LoadSeries& w, const ThreeDelayParams& p, Index horizon) {
    validate(p);
    check_horizon(w, horizon);
    return {lagged_recursion(w.values(), p.tau_decay,
                             {neg_rate(p.tau_lag1), neg_rate(p.tau_lag2), neg_rate(p.tau_lag3)}, horizon),
            ModelVariant::three_delay};
}

StateSeries eval_three_delay_convolution(const LoadSeries& w, const ThreeDelayParams& p, Index horizon) {
    validate(p);
    check_horizon(w, horizon);
    const double r2 = 1.0 / p.tau_lag1;
    const double r3 = 1.0 / p.tau_lag2;
    const double r4 = 1.0 / p.tau_lag3;
    const double inv = 1.0 / p.tau_decay;
    const double bracket = r2 + r3 * std::exp(inv) + r4 * std::exp(2.0 * inv);
    const double edge3 = r2 * std::exp(-2.0 * inv) + r3 * std::exp(-inv);
    const double edge2 = r2 * std::exp(-inv);
    const Vector e = decay_powers(p.tau_decay, horizon + 1);

    Vector g = Vector::Zero(horizon);
    for (Index n = 1; n < horizon; ++n) {
        double load = 0.0;
        for (Index i = 1; i <= n - 1; ++i) load += w[i] * e[n - i];
        double history = 0.0;
        for (Index i = 1; i <= n - 3; ++i) history += g[i - 1] * bracket * e[n - i];
        const double g3 = n >= 3 ? g[n - 3] : 0.0;
        const double g2 = n >= 2 ? g[n - 2] : 0.0;
        g[n] = load - history - g3 * edge3 - g2 * edge2;
    }
    return {std::move(g), ModelVariant::three_delay};
}

StateSeries eval_kernel_recursive(const LoadSeries& w, const KernelParams& p, Index horizon) {
    validate(p);
    check_horizon(w, horizon);
    const std::array<double, 3> coeff{p.weights[0] * p.tau5, p.weights[1] * p.tau5, p.weights[2] * p.tau5};
    return {lagged_recursion(w.values(), p.tau_decay, coeff, horizon), ModelVariant::kernel};
}

KernelMapping kernel_to_three_delay(const KernelParams& p) {
    validate(p);
    KernelMapping out;
    out.params.tau_decay = p.tau_decay;
    if (p.tau5 == 0.0) return out;
    out.params.tau_lag1 = -1.0 / (p.weights[0] * p.tau5);
    out.params.tau_lag2 = -1.0 / (p.weights[1] * p.tau5);
    out.params.tau_lag3 = -1.0 / (p.weights[2] * p.tau5);
    out.sign_domain_warning = p.tau5 > 0.0;
    return out;
}

StateSeries eval_state(const LoadSeries& w, const StateParams& p, Index horizon) {
    struct Visitor {
        const LoadSeries& w;
        Index horizon;
        StateSeries operator()(const FirstOrderParams& q) const {
            validate(q);
            check_horizon(w, horizon);
            return {lagged_recursion(w.values(), q.tau_decay, {0.0, 0.0, 0.0}, horizon),
                    ModelVariant::classical};
        }
        StateSeries operator()(const SingleDelayParams& q) const {
            return eval_single_delay_recursive(w, q, horizon);
        }
        StateSeries operator()(const ThreeDelayParams& q) const {
            return eval_three_delay_recursive(w, q, horizon);
        }
        StateSeries operator()(const KernelParams& q) const { return eval_kernel_recursive(w, q, horizon); }
    };
    return std::visit(Visitor{w, horizon}, p);
}

Vector eval_performance(const LoadSeries& w, const PerformanceParams& p, Index horizon) {
    validate(p);
    const StateSeries g = eval_state(w, p.fitness, horizon);
    const StateSeries h = eval_state(w, p.fatigue, horizon);
    return (p.p0 + (p.k1 * g.values.array() - p.k2 * h.values.array())).matrix();
}

} // namespace ffdelay
