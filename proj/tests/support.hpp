#pragma once

#include "ffdelay/estimation.hpp"
#include "ffdelay/model.hpp"
#include "ffdelay/series.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace ffdelay::testing {

inline double max_rel_diff(const Vector& a, const Vector& b) {
    // Elementwise relative difference; exact zeros on both sides count as equal.
    double worst = 0.0;
    for (Index i = 0; i < a.size(); ++i) {
        const double d = std::abs(a[i] - b[i]);
        if (d == 0.0) continue;
        worst = std::max(worst, d / std::max(std::abs(a[i]), std::abs(b[i])));
    }
    return worst;
}

inline bool rel_close(const Vector& a, const Vector& b, double rtol) {
    return a.size() == b.size() && max_rel_diff(a, b) <= rtol;
}

class Generator {
public:
    explicit Generator(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    bool chance(double p) { return uniform(0.0, 1.0) < p; }
    Index index(Index lo, Index hi) { return std::uniform_int_distribution<Index>(lo, hi)(rng_); }

    /// Training-log-like load: rest days mixed with sessions, w(0) = 0.
    LoadSeries load(Index length) {
        Vector w = Vector::Zero(length);
        for (Index i = 1; i < length; ++i) w[i] = chance(0.3) ? 0.0 : uniform(10.0, 200.0);
        return LoadSeries(std::move(w));
    }

    double decay() { return log_uniform(1.0, 60.0); }
    double lag() { return chance(0.15) ? kInfiniteLag : log_uniform(2.0, 100.0); }

    SingleDelayParams single() { return {decay(), lag()}; }
    ThreeDelayParams three() { return {decay(), lag(), lag(), lag()}; }
    KernelParams kernel() {
        KernelParams k{decay(), -uniform(0.01, 0.9)};
        const double a = uniform(0.1, 0.6);
        const double b = uniform(0.1, 0.9 - a);
        k.weights = {a, b, 1.0 - a - b};
        return k;
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

/// Reference performance model used across estimation, CLI and acceptance tests.
inline PerformanceParams fixture_params() {
    PerformanceParams p;
    p.p0 = 500.0;
    p.k1 = 0.10;
    p.k2 = 0.12;
    p.fitness = SingleDelayParams{45.0, 20.0};
    p.fatigue = SingleDelayParams{15.0, 10.0};
    return p;
}

/// 120 days of block periodisation: three loading weeks with rising volume,
/// then a recovery week, repeated; Sundays off.
inline LoadSeries block_load(Index days = 120) {
    Vector w = Vector::Zero(days);
    for (Index d = 1; d < days; ++d) {
        const Index week = (d - 1) / 7;
        const Index dow = (d - 1) % 7;
        if (dow == 6) continue;
        const Index phase = week % 4;
        const double base = phase == 3 ? 30.0 : 70.0 + 20.0 * static_cast<double>(phase);
        w[d] = base + 10.0 * static_cast<double>(dow % 3);
    }
    return LoadSeries(std::move(w));
}

/// Every sixth day from day 5: 20 observations inside 120 days.
inline std::vector<Index> observation_days() {
    std::vector<Index> days;
    for (Index d = 5; d < 120; d += 6) days.push_back(d);
    return days;
}

inline ObservationSet sample(const Vector& p, const std::vector<Index>& days) {
    std::vector<Observation> e;
    for (Index d : days) e.push_back({d, p[d]});
    return ObservationSet(std::move(e));
}

/// Minimal XML well-formedness check: balanced, properly nested tags and a
/// single root element. Enough to catch broken SVG output.
inline bool well_formed_xml(std::string_view doc) {
    std::vector<std::string> stack;
    std::size_t pos = 0;
    int roots = 0;
    while ((pos = doc.find('<', pos)) != std::string_view::npos) {
        const auto close = doc.find('>', pos);
        if (close == std::string_view::npos) return false;
        std::string_view tag = doc.substr(pos + 1, close - pos - 1);
        pos = close + 1;
        if (tag.empty()) return false;
        if (tag.front() == '?' || tag.front() == '!') continue;
        if (tag.front() == '/') {
            const std::string name(tag.substr(1));
            if (stack.empty() || stack.back() != name) return false;
            stack.pop_back();
            continue;
        }
        const bool self_closing = tag.back() == '/';
        const std::string name(tag.substr(0, tag.find_first_of(" \t\n/")));
        if (stack.empty()) ++roots;
        if (!self_closing) stack.push_back(name);
    }
    return stack.empty() && roots == 1;
}

inline std::size_t count(std::string_view doc, std::string_view needle) {
    std::size_t n = 0;
    for (std::size_t pos = doc.find(needle); pos != std::string_view::npos; pos = doc.find(needle, pos + 1)) ++n;
    return n;
}

} // namespace ffdelay::testing
