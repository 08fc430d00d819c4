#pragma once

#include "ffdelay/nelder_mead.hpp"
#include "ffdelay/params.hpp"
#include "ffdelay/series.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ffdelay {

struct Observation {
    Index day = 0;
    double performance = 0.0;

    friend bool operator==(const Observation&, const Observation&) = default;
};

/// Sparse measured performance, strictly increasing in day.
class ObservationSet {
public:
    ObservationSet() = default;
    /// Throws InputError unless days are non-negative and strictly increasing
    /// and every performance value is finite.
    explicit ObservationSet(std::vector<Observation> entries);

    [[nodiscard]] const std::vector<Observation>& entries() const noexcept { return entries_; }
    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
    [[nodiscard]] bool empty() const noexcept { return entries_.empty(); }
    [[nodiscard]] Index last_day() const { return entries_.back().day; }

    auto begin() const noexcept { return entries_.begin(); }
    auto end() const noexcept { return entries_.end(); }

    friend bool operator==(const ObservationSet&, const ObservationSet&) = default;

private:
    std::vector<Observation> entries_;
};

struct Bounds {
    double lower = 0.0;
    double upper = 0.0;

    friend bool operator==(const Bounds&, const Bounds&) = default;
};

/// Search box. Decay constants and gains are searched on a log scale, lag
/// constants through their rate 1/tau (so `upper = +inf` lets a lag switch
/// off), p0 and tau5 linearly. An unset p0 box is derived from the data.
struct ParamBounds {
    std::optional<Bounds> p0;
    Bounds k1{1e-4, 10.0};
    Bounds k2{1e-4, 10.0};
    Bounds tau1{1.0, 200.0};          // fitness decay
    Bounds tau2{1.0, kInfiniteLag};   // fitness lags
    Bounds tau3{1.0, 200.0};          // fatigue decay
    Bounds tau4{1.0, kInfiniteLag};   // fatigue lags
    Bounds tau5{-1.0, 0.5};           // kernel gain (both states)

    friend bool operator==(const ParamBounds&, const ParamBounds&) = default;
};

/// Throws InputError on lower >= upper, NaN, or non-positive k/tau bounds.
void validate(const ParamBounds& b);

/// p0 box used when none is configured: the observation span widened by its
/// own range on either side.
[[nodiscard]] Bounds default_p0_bounds(const ObservationSet& obs);

struct FitConfig {
    ModelVariant variant = ModelVariant::single_delay;
    int starts = 20;
    /// Polishing re-runs of the simplex from each start's optimum.
    int restarts = 3;
    NelderMeadOptions simplex{};
    std::uint64_t seed = 42;
    std::optional<double> fix_p0;
    /// Extra starting points tried after the sampled ones (e.g. the optimum
    /// of a nested variant). Clamped into the box.
    std::vector<PerformanceParams> warm_starts;
};

void validate(const FitConfig& c);

struct FitResult {
    ModelVariant variant = ModelVariant::single_delay;
    PerformanceParams params;
    double sse = 0.0;
    std::optional<double> r2;  // empty when the observations have no variance
    Vector predicted;
    int starts_run = 0;  // sampled plus warm starts
    int starts_converged = 0;
    int best_start_index = 0;
    int iterations_used = 0;
    /// Fewer observations than free parameters.
    bool underdetermined = false;
    /// Load is identically zero before the last observation, so the gains and
    /// time constants have no effect on the fit.
    bool non_identifiable = false;
};

/// Sum over observations of (p_model(day) - p_obs)^2. Days must lie inside
/// the load series.
[[nodiscard]] double sse_objective(const PerformanceParams& params, const LoadSeries& w,
                                   const ObservationSet& obs);

/// 1 - SSE/SST with SST about the observation mean; `predicted` is indexed by
/// day. Throws UndefinedMetricError when the observations have zero variance.
[[nodiscard]] double r_squared(std::span<const double> predicted, const ObservationSet& obs);
[[nodiscard]] double r_squared(const Vector& predicted, const ObservationSet& obs);

/// Multi-start least squares. Deterministic given config.seed.
[[nodiscard]] FitResult fit(const LoadSeries& w, const ObservationSet& obs, const ParamBounds& bounds,
                            const FitConfig& config, Index horizon = -1);

[[nodiscard]] Vector predict(const PerformanceParams& params, const LoadSeries& w, Index horizon);

/// Re-expresses `params` in a richer variant (infinite lags, zero kernel
/// gain). Returns nothing when `to` does not contain the source variant.
[[nodiscard]] std::optional<PerformanceParams> embed(const PerformanceParams& params, ModelVariant to);

struct ComparisonRow {
    ModelVariant variant;
    int parameter_count;
    FitResult result;
};

/// Fits all four variants. Each richer variant is also started from the
/// embedded optima of the variants it contains, so its SSE never exceeds
/// theirs.
[[nodiscard]] std::vector<ComparisonRow> compare_variants(const LoadSeries& w, const ObservationSet& obs,
                                                          const ParamBounds& bounds, const FitConfig& config,
                                                          Index horizon = -1);

} // namespace ffdelay
