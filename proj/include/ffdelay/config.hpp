#pragma once

// YAML run configuration and fitted-parameter documents.
//
// Run configuration (every key optional except `variant`; unknown keys are
// rejected):
//
//   variant: single_delay        # classical | single_delay | three_delay | kernel
//   horizon: 120                 # days to predict; default = load length
//   bounds:                      # [lower, upper]; .inf allowed for tau2/tau4
//     p0: [400, 600]             # default: derived from the observations
//     k1: [1.0e-4, 10]
//     k2: [1.0e-4, 10]
//     tau1: [1, 200]             # fitness decay
//     tau2: [1, .inf]            # fitness lag(s)
//     tau3: [1, 200]             # fatigue decay
//     tau4: [1, .inf]            # fatigue lag(s)
//     tau5: [-1, 0.5]            # kernel gain
//   fit:
//     starts: 20
//     restarts: 3
//     seed: 42
//     max_iterations: 4000
//     tolerance: 1.0e-12         # absolute SSE spread across the simplex
//     simplex_tolerance: 1.0e-10
//     fix_p0: 500                # omit to estimate p0
//   chart:
//     width: 900
//     height: 600
//     fit_title: "..."
//     load_title: "..."
//     y_label: performance

#include "ffdelay/chart.hpp"
#include "ffdelay/estimation.hpp"
#include "ffdelay/params.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace ffdelay {

struct RunConfig {
    ModelVariant variant = ModelVariant::single_delay;
    std::optional<Index> horizon;
    ParamBounds bounds;
    FitConfig fit;
    ChartOptions chart;
};

/// Throws ParseError (YAML syntax, wrong types, unknown keys) or InputError
/// (unknown variant, inverted bounds, invalid settings).
[[nodiscard]] RunConfig load_config(std::string_view text);

/// Params document consumed by `ffdelay predict`:
///
///   variant: single_delay
///   p0: 500
///   k1: 0.1
///   k2: 0.12
///   fitness: {decay: 45, lag1: 20}
///   fatigue: {decay: 15, lag1: 10}
///
/// three_delay states carry lag1..lag3; kernel states carry tau5 and weights;
/// classical states only decay. Numbers are written in shortest round-trip
/// form, so parse(emit(p)) == p exactly.
[[nodiscard]] std::string emit_params_document(const PerformanceParams& params);
[[nodiscard]] PerformanceParams parse_params_document(std::string_view text);

} // namespace ffdelay
