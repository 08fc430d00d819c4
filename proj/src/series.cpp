#include "ffdelay/series.hpp"

#include "ffdelay/errors.hpp"

#include <cmath>
#include <string>

namespace ffdelay {

std::string_view to_string(ModelVariant v) noexcept {
    switch (v) {
    case ModelVariant::classical: return "classical";
    case ModelVariant::single_delay: return "single_delay";
    case ModelVariant::three_delay: return "three_delay";
    case ModelVariant::kernel: return "kernel";
    }
    return "unknown";
}

ModelVariant parse_variant(std::string_view name) {
    for (auto v : kAllVariants) {
        if (to_string(v) == name) return v;
    }
    throw InputError("unknown model variant '" + std::string(name) +
                     "' (valid: classical, single_delay, three_delay, kernel)");
}

LoadSeries::LoadSeries(Vector values) : values_(std::move(values)) {
    for (Index i = 0; i < values_.size(); ++i) {
        const double v = values_[i];
        if (!std::isfinite(v)) {
            throw ConstraintError("load at day " + std::to_string(i) + " is not finite");
        }
        if (v < 0.0) {
            throw ConstraintError("load at day " + std::to_string(i) + " is negative");
        }
    }
    if (values_.size() > 0 && values_[0] != 0.0) {
        throw ConstraintError("load at day 0 must be 0 (the model assumes w(0) = 0)");
    }
}

LoadSeries::LoadSeries(std::span<const double> values)
    : LoadSeries(Vector(Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size())))) {}

LoadSeries::LoadSeries(std::initializer_list<double> values)
    : LoadSeries(std::span<const double>(values.begin(), values.size())) {}

} // namespace ffdelay
