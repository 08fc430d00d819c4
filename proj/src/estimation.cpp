#include "ffdelay/estimation.hpp"

#include "ffdelay/errors.hpp"
#include "ffdelay/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace ffdelay {

ObservationSet::ObservationSet(std::vector<Observation> entries) : entries_(std::move(entries)) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        if (e.day < 0) throw InputError("observation day must be non-negative");
        if (!std::isfinite(e.performance)) {
            throw InputError("observation at day " + std::to_string(e.day) + " is not finite");
        }
        if (i > 0 && e.day <= entries_[i - 1].day) {
            throw InputError("observation days must be strictly increasing");
        }
    }
}

namespace {

void check_box(const Bounds& b, const char* name, bool positive) {
    if (std::isnan(b.lower) || std::isnan(b.upper) || !(b.lower < b.upper)) {
        throw InputError(std::string("bounds for ") + name + " must satisfy lower < upper");
    }
    if (positive && !(b.lower > 0.0)) throw InputError(std::string("bounds for ") + name + " must be positive");
}

void check_finite_box(const Bounds& b, const char* name) {
    if (!std::isfinite(b.lower) || !std::isfinite(b.upper)) {
        throw InputError(std::string("bounds for ") + name + " must be finite");
    }
}

} // namespace

void validate(const ParamBounds& b) {
    if (b.p0) {
        check_box(*b.p0, "p0", false);
        check_finite_box(*b.p0, "p0");
    }
    check_box(b.k1, "k1", true);
    check_finite_box(b.k1, "k1");
    check_box(b.k2, "k2", true);
    check_finite_box(b.k2, "k2");
    check_box(b.tau1, "tau1", true);
    check_finite_box(b.tau1, "tau1");
    check_box(b.tau3, "tau3", true);
    check_finite_box(b.tau3, "tau3");
    check_box(b.tau2, "tau2", true);
    check_box(b.tau4, "tau4", true);
    check_box(b.tau5, "tau5", false);
    check_finite_box(b.tau5, "tau5");
}

Bounds default_p0_bounds(const ObservationSet& obs) {
    if (obs.empty()) return {-1.0, 1.0};
    double lo = obs.entries().front().performance;
    double hi = lo;
    for (const auto& e : obs) {
        lo = std::min(lo, e.performance);
        hi = std::max(hi, e.performance);
    }
    const double pad = std::max({hi - lo, 1e-3 * std::max(std::abs(lo), std::abs(hi)), 1.0});
    return {lo - pad, hi + pad};
}

void validate(const FitConfig& c) {
    if (c.starts < 1) throw InputError("fit.starts must be at least 1");
    if (c.restarts < 0) throw InputError("fit.restarts must be non-negative");
    if (c.simplex.max_iterations < 1) throw InputError("fit.max_iterations must be at least 1");
    if (!(c.simplex.f_tolerance > 0.0)) throw InputError("fit.tolerance must be positive");
    if (!(c.simplex.x_tolerance > 0.0)) throw InputError("fit.simplex_tolerance must be positive");
    if (c.fix_p0 && !std::isfinite(*c.fix_p0)) throw InputError("fit.fix_p0 must be finite");
}

namespace {

Index required_horizon(const LoadSeries& w, const ObservationSet& obs) {
    if (obs.empty()) return 0;
    if (obs.last_day() >= w.size()) {
        throw InputError("observation at day " + std::to_string(obs.last_day()) +
                         " lies outside the load series (" + std::to_string(w.size()) + " days)");
    }
    return obs.last_day() + 1;
}

double sse_at(const Vector& p, const ObservationSet& obs) {
    double sse = 0.0;
    for (const auto& e : obs) {
        const double r = p[e.day] - e.performance;
        sse += r * r;
    }
    return sse;
}

} // namespace

double sse_objective(const PerformanceParams& params, const LoadSeries& w, const ObservationSet& obs) {
    const Index horizon = required_horizon(w, obs);
    return sse_at(eval_performance(w, params, horizon), obs);
}

double r_squared(std::span<const double> predicted, const ObservationSet& obs) {
    if (obs.size() < 2) throw UndefinedMetricError("R^2 needs at least 2 observations");
    double mean = 0.0;
    double scale = 0.0;
    for (const auto& e : obs) {
        if (e.day >= static_cast<Index>(predicted.size())) {
            throw InputError("observation at day " + std::to_string(e.day) + " lies outside the prediction");
        }
        mean += e.performance;
        scale = std::max(scale, std::abs(e.performance));
    }
    mean /= static_cast<double>(obs.size());
    double sst = 0.0;
    double sse = 0.0;
    for (const auto& e : obs) {
        const double d = e.performance - mean;
        const double r = predicted[static_cast<std::size_t>(e.day)] - e.performance;
        sst += d * d;
        sse += r * r;
    }
    // Rounding in the mean leaves a residue of a few ulps when all values agree.
    const double floor = static_cast<double>(obs.size()) * std::pow(8.0 * std::numeric_limits<double>::epsilon() * scale, 2);
    if (sst <= floor) throw UndefinedMetricError("R^2 is undefined: observations have zero variance");
    return 1.0 - sse / sst;
}

double r_squared(const Vector& predicted, const ObservationSet& obs) {
    return r_squared(std::span<const double>(predicted.data(), static_cast<std::size_t>(predicted.size())), obs);
}

Vector predict(const PerformanceParams& params, const LoadSeries& w, Index horizon) {
    return eval_performance(w, params, horizon);
}

namespace {

constexpr double kSaturation = 1000.0;

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double logit(double u) {
    if (!(u > 0.0)) return -kSaturation;
    if (!(u < 1.0)) return kSaturation;
    return std::clamp(std::log(u / (1.0 - u)), -kSaturation, kSaturation);
}

// One search coordinate mapped onto a closed interval. `lo`/`hi` live in the
// scaled domain (value, log value, or rate); `box` is the interval in value
// space that results are clamped to, since exp/log and 1/x round.
struct Axis {
    enum class Scale { linear, log, rate } scale;
    double lo;
    double hi;
    Bounds box;

    static Axis linear(const Bounds& b) { return {Scale::linear, b.lower, b.upper, b}; }
    static Axis logarithmic(const Bounds& b) { return {Scale::log, std::log(b.lower), std::log(b.upper), b}; }
    // tau in [lower, upper] <=> rate 1/tau in [1/upper, 1/lower].
    static Axis rate(const Bounds& b) { return {Scale::rate, 1.0 / b.upper, 1.0 / b.lower, b}; }

    [[nodiscard]] double to_value(double x) const {
        const double s = std::clamp(lo + (hi - lo) * logistic(x), lo, hi);
        double v = s;
        if (scale == Scale::log) v = std::exp(s);
        if (scale == Scale::rate) v = s == 0.0 ? kInfiniteLag : 1.0 / s;
        return std::clamp(v, box.lower, box.upper);
    }

    [[nodiscard]] double to_search(double value) const {
        double s = value;
        if (scale == Scale::log) s = std::log(value);
        if (scale == Scale::rate) s = 1.0 / value;
        return logit((s - lo) / (hi - lo));
    }
};

// Maps a flat search vector onto PerformanceParams of one variant.
class ParameterMap {
public:
    ParameterMap(ModelVariant variant, const ParamBounds& b, std::optional<double> fixed_p0)
        : variant_(variant), fixed_p0_(fixed_p0) {
        if (!fixed_p0_) axes_.push_back(Axis::linear(*b.p0));
        axes_.push_back(Axis::logarithmic(b.k1));
        axes_.push_back(Axis::logarithmic(b.k2));
        add_state_axes(b.tau1, b.tau2, b.tau5);
        state_offset_ = axes_.size();
        add_state_axes(b.tau3, b.tau4, b.tau5);
    }

    [[nodiscard]] Index dimension() const noexcept { return static_cast<Index>(axes_.size()); }

    [[nodiscard]] PerformanceParams to_params(const Vector& x) const {
        PerformanceParams p;
        std::size_t i = 0;
        p.p0 = fixed_p0_ ? *fixed_p0_ : axes_[i].to_value(x[static_cast<Index>(i)]);
        if (!fixed_p0_) ++i;
        p.k1 = value(x, i++);
        p.k2 = value(x, i++);
        p.fitness = state(x, i);
        i = state_offset_;
        p.fatigue = state(x, i);
        return p;
    }

    [[nodiscard]] Vector to_search(const PerformanceParams& p) const {
        std::vector<double> v;
        if (!fixed_p0_) v.push_back(p.p0);
        v.push_back(p.k1);
        v.push_back(p.k2);
        append_state(v, p.fitness);
        append_state(v, p.fatigue);
        Vector x(dimension());
        for (Index i = 0; i < x.size(); ++i) x[i] = axes_[static_cast<std::size_t>(i)].to_search(v[static_cast<std::size_t>(i)]);
        return x;
    }

private:
    void add_state_axes(const Bounds& decay, const Bounds& lag, const Bounds& gain) {
        axes_.push_back(Axis::logarithmic(decay));
        switch (variant_) {
        case ModelVariant::classical: break;
        case ModelVariant::single_delay: axes_.push_back(Axis::rate(lag)); break;
        case ModelVariant::three_delay:
            for (int l = 0; l < 3; ++l) axes_.push_back(Axis::rate(lag));
            break;
        case ModelVariant::kernel: axes_.push_back(Axis::linear(gain)); break;
        }
    }

    double value(const Vector& x, std::size_t i) const { return axes_[i].to_value(x[static_cast<Index>(i)]); }

    StateParams state(const Vector& x, std::size_t& i) const {
        const double decay = value(x, i++);
        switch (variant_) {
        case ModelVariant::classical: return FirstOrderParams{decay};
        case ModelVariant::single_delay: return SingleDelayParams{decay, value(x, i++)};
        case ModelVariant::three_delay: {
            ThreeDelayParams q{decay};
            q.tau_lag1 = value(x, i++);
            q.tau_lag2 = value(x, i++);
            q.tau_lag3 = value(x, i++);
            return q;
        }
        case ModelVariant::kernel: return KernelParams{decay, value(x, i++)};
        }
        return FirstOrderParams{decay};
    }

    void append_state(std::vector<double>& v, const StateParams& s) const {
        v.push_back(decay_of(s));
        if (const auto* q = std::get_if<SingleDelayParams>(&s)) v.push_back(q->tau_lag1);
        if (const auto* q = std::get_if<ThreeDelayParams>(&s)) {
            v.push_back(q->tau_lag1);
            v.push_back(q->tau_lag2);
            v.push_back(q->tau_lag3);
        }
        if (const auto* q = std::get_if<KernelParams>(&s)) v.push_back(q->tau5);
    }

    ModelVariant variant_;
    std::optional<double> fixed_p0_;
    std::vector<Axis> axes_;
    std::size_t state_offset_ = 0;
};

// Uniform double in [0, 1) from the top 53 bits; keeps sampling identical
// across standard libraries.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Latin hypercube in (0,1)^dim, pushed through the logit so each stratum of
// every bounded coordinate is visited once.
std::vector<Vector> stratified_starts(Index dim, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Vector> pts(static_cast<std::size_t>(count), Vector(dim));
    std::vector<int> perm(static_cast<std::size_t>(count));
    for (Index d = 0; d < dim; ++d) {
        for (int s = 0; s < count; ++s) perm[static_cast<std::size_t>(s)] = s;
        for (int s = count - 1; s > 0; --s) {
            const auto j = static_cast<int>(rng() % static_cast<std::uint64_t>(s + 1));
            std::swap(perm[static_cast<std::size_t>(s)], perm[static_cast<std::size_t>(j)]);
        }
        for (int s = 0; s < count; ++s) {
            // Keep away from the box edges; the logit is unbounded there.
            const double u = (perm[static_cast<std::size_t>(s)] + 0.05 + 0.9 * unit(rng)) / count;
            pts[static_cast<std::size_t>(s)][d] = logit(u);
        }
    }
    return pts;
}

bool load_is_zero(const LoadSeries& w, Index horizon) {
    for (Index i = 0; i < horizon; ++i) {
        if (w[i] != 0.0) return false;
    }
    return true;
}

} // namespace

FitResult fit(const LoadSeries& w, const ObservationSet& obs, const ParamBounds& bounds, const FitConfig& config,
              Index horizon) {
    validate(config);
    if (obs.empty()) throw InputError("no observations to fit");
    ParamBounds box = bounds;
    if (!box.p0) box.p0 = default_p0_bounds(obs);
    validate(box);

    const Index fit_horizon = required_horizon(w, obs);
    if (horizon < 0) horizon = w.size();
    if (horizon > w.size()) throw InputLengthError("horizon exceeds load series length");
    if (horizon < fit_horizon) throw InputError("observations extend past the requested horizon");

    const ParameterMap map(config.variant, box, config.fix_p0);
    const Objective objective = [&](const Vector& x) {
        return sse_at(eval_performance(w, map.to_params(x), fit_horizon), obs);
    };

    std::vector<Vector> starts = stratified_starts(map.dimension(), config.starts, config.seed);
    for (const auto& warm : config.warm_starts) {
        if (warm.variant() != config.variant) throw InputError("warm start variant does not match the fit variant");
        starts.push_back(map.to_search(warm));
    }

    FitResult result;
    result.variant = config.variant;
    result.starts_run = static_cast<int>(starts.size());
    double best_value = std::numeric_limits<double>::infinity();
    Vector best_x;
    for (std::size_t s = 0; s < starts.size(); ++s) {
        if (!std::isfinite(objective(starts[s]))) continue;
        NelderMeadResult run = nelder_mead(objective, starts[s], config.simplex);
        int iterations = run.iterations;
        for (int r = 0; r < config.restarts; ++r) {
            NelderMeadResult again = nelder_mead(objective, run.x, config.simplex);
            iterations += again.iterations;
            const double gain = run.value - again.value;
            if (again.value <= run.value) run = std::move(again);
            if (!(gain > config.simplex.f_tolerance)) break;
        }
        if (run.converged) ++result.starts_converged;
        if (run.value < best_value) {
            best_value = run.value;
            best_x = run.x;
            result.best_start_index = static_cast<int>(s);
            result.iterations_used = iterations;
        }
    }
    if (!std::isfinite(best_value)) throw NumericalError("objective is not finite at any starting point");

    result.params = map.to_params(best_x);
    result.predicted = eval_performance(w, result.params, horizon);
    result.sse = sse_at(result.predicted, obs);
    try {
        result.r2 = r_squared(result.predicted, obs);
    } catch (const UndefinedMetricError&) {
        result.r2.reset();
    }
    result.underdetermined = static_cast<int>(obs.size()) < static_cast<int>(map.dimension());
    result.non_identifiable = load_is_zero(w, obs.last_day());
    return result;
}

std::optional<PerformanceParams> embed(const PerformanceParams& params, ModelVariant to) {
    auto lift = [to](const StateParams& s) -> std::optional<StateParams> {
        const ModelVariant from = variant_of(s);
        if (from == to) return s;
        const double decay = decay_of(s);
        if (from == ModelVariant::classical) {
            switch (to) {
            case ModelVariant::single_delay: return SingleDelayParams{decay, kInfiniteLag};
            case ModelVariant::three_delay: return ThreeDelayParams{decay};
            case ModelVariant::kernel: return KernelParams{decay, 0.0};
            default: return std::nullopt;
            }
        }
        if (from == ModelVariant::single_delay && to == ModelVariant::three_delay) {
            return ThreeDelayParams{decay, std::get<SingleDelayParams>(s).tau_lag1};
        }
        if (from == ModelVariant::kernel && to == ModelVariant::three_delay) {
            const KernelMapping m = kernel_to_three_delay(std::get<KernelParams>(s));
            if (m.sign_domain_warning) return std::nullopt;
            return m.params;
        }
        return std::nullopt;
    };
    auto fitness = lift(params.fitness);
    auto fatigue = lift(params.fatigue);
    if (!fitness || !fatigue) return std::nullopt;
    PerformanceParams out = params;
    out.fitness = *fitness;
    out.fatigue = *fatigue;
    return out;
}

std::vector<ComparisonRow> compare_variants(const LoadSeries& w, const ObservationSet& obs,
                                            const ParamBounds& bounds, const FitConfig& config, Index horizon) {
    // Fitted in nesting order so every variant can start from the optima it contains.
    constexpr ModelVariant order[] = {ModelVariant::classical, ModelVariant::single_delay, ModelVariant::kernel,
                                      ModelVariant::three_delay};
    std::vector<ComparisonRow> rows;
    for (ModelVariant v : order) {
        FitConfig cfg = config;
        cfg.variant = v;
        cfg.warm_starts.clear();
        for (const auto& row : rows) {
            if (auto lifted = embed(row.result.params, v)) cfg.warm_starts.push_back(*lifted);
        }
        rows.push_back({v, parameter_count(v) - (config.fix_p0 ? 1 : 0), fit(w, obs, bounds, cfg, horizon)});
    }
    std::sort(rows.begin(), rows.end(), [](const ComparisonRow& a, const ComparisonRow& b) {
        return static_cast<int>(a.variant) < static_cast<int>(b.variant);
    });
    return rows;
}

} // namespace ffdelay
