#include "ffdelay/nelder_mead.hpp"

#include "ffdelay/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ffdelay {

namespace {

double guarded(const Objective& f, const Vector& x) {
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

} // namespace

NelderMeadResult nelder_mead(const Objective& f, const Vector& start, const NelderMeadOptions& options) {
    const Index n = start.size();
    const double f0 = f(start);
    if (!std::isfinite(f0)) throw InputError("objective is not finite at the starting point");

    NelderMeadResult result;
    if (n == 0) {
        result.x = start;
        result.value = f0;
        result.converged = true;
        return result;
    }

    const double dim = static_cast<double>(n);
    const double alpha = 1.0;
    const double gamma = 1.0 + 2.0 / dim;
    const double rho = 0.75 - 0.5 / dim;
    const double sigma = n > 1 ? 1.0 - 1.0 / dim : 0.5;

    std::vector<Vector> vertex(static_cast<std::size_t>(n + 1), start);
    std::vector<double> value(static_cast<std::size_t>(n + 1), f0);
    for (Index i = 0; i < n; ++i) {
        auto& v = vertex[static_cast<std::size_t>(i + 1)];
        v[i] += options.initial_step;
        value[static_cast<std::size_t>(i + 1)] = guarded(f, v);
    }

    std::vector<std::size_t> order(vertex.size());
    auto sort_vertices = [&] {
        std::iota(order.begin(), order.end(), std::size_t{0});
        // Stable: ties keep the older vertex first.
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return value[a] < value[b]; });
    };

    auto converged = [&] {
        const double spread = value[order.back()] - value[order.front()];
        if (spread <= options.f_tolerance) return true;
        const Vector& best = vertex[order.front()];
        double size = 0.0;
        for (const auto& v : vertex) size = std::max(size, (v - best).cwiseAbs().maxCoeff());
        return size <= options.x_tolerance;
    };

    sort_vertices();
    int iter = 0;
    bool done = converged();
    while (!done && iter < options.max_iterations) {
        ++iter;
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second = order[order.size() - 2];

        Vector centroid = Vector::Zero(n);
        for (std::size_t k = 0; k + 1 < order.size(); ++k) centroid += vertex[order[k]];
        centroid /= dim;

        const Vector reflected = centroid + alpha * (centroid - vertex[worst]);
        const double f_reflected = guarded(f, reflected);

        if (f_reflected < value[best]) {
            const Vector expanded = centroid + gamma * (reflected - centroid);
            const double f_expanded = guarded(f, expanded);
            if (f_expanded < f_reflected) {
                vertex[worst] = expanded;
                value[worst] = f_expanded;
            } else {
                vertex[worst] = reflected;
                value[worst] = f_reflected;
            }
        } else if (f_reflected < value[second]) {
            vertex[worst] = reflected;
            value[worst] = f_reflected;
        } else {
            const bool outside = f_reflected < value[worst];
            const Vector contracted = outside ? Vector(centroid + rho * (reflected - centroid))
                                              : Vector(centroid + rho * (vertex[worst] - centroid));
            const double f_contracted = guarded(f, contracted);
            if (f_contracted < (outside ? f_reflected : value[worst])) {
                vertex[worst] = contracted;
                value[worst] = f_contracted;
            } else {
                for (std::size_t k = 0; k < vertex.size(); ++k) {
                    if (k == best) continue;
                    vertex[k] = vertex[best] + sigma * (vertex[k] - vertex[best]);
                    value[k] = guarded(f, vertex[k]);
                }
            }
        }
        sort_vertices();
        result.best_trace.push_back(value[order.front()]);
        done = converged();
    }

    result.x = vertex[order.front()];
    result.value = value[order.front()];
    result.iterations = iter;
    result.converged = done;
    return result;
}

} // namespace ffdelay
