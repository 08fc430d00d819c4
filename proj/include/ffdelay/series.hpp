#pragma once

#include <Eigen/Dense>

#include <span>
#include <string_view>
#include <vector>

namespace ffdelay {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;

enum class ModelVariant { classical, single_delay, three_delay, kernel };

[[nodiscard]] std::string_view to_string(ModelVariant v) noexcept;
/// Throws InputError listing the valid names when `name` is unknown.
[[nodiscard]] ModelVariant parse_variant(std::string_view name);

inline constexpr ModelVariant kAllVariants[] = {
    ModelVariant::classical, ModelVariant::single_delay,
    ModelVariant::three_delay, ModelVariant::kernel};

/// Daily training impulses w(0..N-1). Finite, non-negative, and w(0) = 0;
/// construction rejects anything else with ConstraintError.
class LoadSeries {
public:
    LoadSeries() = default;
    explicit LoadSeries(Vector values);
    explicit LoadSeries(std::span<const double> values);
    LoadSeries(std::initializer_list<double> values);

    [[nodiscard]] const Vector& values() const noexcept { return values_; }
    [[nodiscard]] Index size() const noexcept { return values_.size(); }
    [[nodiscard]] bool empty() const noexcept { return values_.size() == 0; }
    [[nodiscard]] double operator[](Index day) const { return values_[day]; }

    friend bool operator==(const LoadSeries& a, const LoadSeries& b) {
        return a.values_.size() == b.values_.size() && a.values_ == b.values_;
    }

private:
    Vector values_;
};

/// Discrete trajectory of a fitness or fatigue state, g(0) = 0.
struct StateSeries {
    Vector values;
    ModelVariant variant = ModelVariant::classical;

    [[nodiscard]] Index size() const noexcept { return values.size(); }
    [[nodiscard]] double operator[](Index day) const { return values[day]; }
};

} // namespace ffdelay
