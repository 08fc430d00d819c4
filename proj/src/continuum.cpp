#include "ffdelay/continuum.hpp"

#include "ffdelay/errors.hpp"

#include <array>
#include <cmath>
#include <string>

namespace ffdelay {

double StepLoad::operator()(double t) const {
    if (t < 0.0) return 0.0;
    const auto day = static_cast<Index>(std::floor(t));
    return day < daily.size() ? daily[day] : 0.0;
}

Vector GridSolution::day_values() const {
    const Index days = (values.size() - 1) / substeps_per_day;
    Vector out(days + 1);
    for (Index d = 0; d <= days; ++d) out[d] = at_day(d);
    return out;
}

namespace {

Vector integrate(const LoadSeries& w, double tau_decay, const std::array<double, 3>& rates, Index days, int m) {
    if (m < 1) throw ParameterError("substeps per day must be at least 1");
    if (days < 0 || days > w.size()) {
        throw InputLengthError("integration span of " + std::to_string(days) + " days exceeds load length " +
                               std::to_string(w.size()));
    }
    const double h = 1.0 / m;
    const double atten = std::exp(-h / tau_decay);
    const Index steps = days * m;
    Vector g = Vector::Zero(steps + 1);
    auto delayed = [&](Index j, int lag) {
        const Index k = j - static_cast<Index>(lag) * m;
        return k >= 0 ? g[k] : 0.0;
    };
    for (Index j = 0; j < steps; ++j) {
        const double load = w[j / m];
        // Explicit Euler; summed in the same order as the day recursion so m = 1 reproduces it exactly.
        g[j + 1] = atten * (h * load + g[j] - h * rates[0] * delayed(j, 1) - h * rates[1] * delayed(j, 2) -
                            h * rates[2] * delayed(j, 3));
    }
    return g;
}

} // namespace

GridSolution integrate_single_delay(const StepLoad& w, const SingleDelayParams& p, Index days, int substeps) {
    validate(p);
    Vector g = integrate(w.daily, p.tau_decay, {1.0 / p.tau_lag1, 0.0, 0.0}, days, substeps);
    return {substeps, std::move(g), p};
}

GridSolution integrate_three_delay(const StepLoad& w, const ThreeDelayParams& p, Index days, int substeps) {
    validate(p);
    Vector g = integrate(w.daily, p.tau_decay, {1.0 / p.tau_lag1, 1.0 / p.tau_lag2, 1.0 / p.tau_lag3}, days,
                         substeps);
    return {substeps, std::move(g), p};
}

std::vector<ConvergenceEntry> convergence_probe(const StepLoad& w, const SingleDelayParams& p, Index days,
                                                const std::vector<int>& m_list) {
    if (m_list.size() < 2) throw ParameterError("convergence probe needs at least two grids");
    for (std::size_t i = 0; i < m_list.size(); ++i) {
        if (m_list[i] < 1) throw ParameterError("substeps per day must be at least 1");
        if (i > 0 && m_list[i] <= m_list[i - 1]) throw ParameterError("grid list must be strictly increasing");
    }
    const int finest = m_list.back();
    for (int m : m_list) {
        if (finest % m != 0) {
            throw ParameterError("grid " + std::to_string(m) + " does not divide finest grid " +
                                 std::to_string(finest));
        }
    }

    const GridSolution reference = integrate_single_delay(w, p, days, finest);
    std::vector<ConvergenceEntry> out;
    out.reserve(m_list.size() - 1);
    for (std::size_t i = 0; i + 1 < m_list.size(); ++i) {
        const int m = m_list[i];
        const GridSolution coarse = integrate_single_delay(w, p, days, m);
        const Index stride = finest / m;
        double sup = 0.0;
        for (Index j = 0; j < coarse.values.size(); ++j) {
            sup = std::max(sup, std::abs(coarse.values[j] - reference.values[j * stride]));
        }
        out.push_back({m, sup});
    }
    return out;
}

} // namespace ffdelay
