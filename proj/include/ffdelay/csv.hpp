#pragma once

#include "ffdelay/estimation.hpp"
#include "ffdelay/series.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ffdelay {

/// Shortest decimal text that parses back to exactly `value`.
[[nodiscard]] std::string format_number(double value);

/// `day,load` CSV. Days missing from the file are rest days (load 0). Rejects
/// negative loads, duplicate days and a non-zero load on day 0.
[[nodiscard]] LoadSeries parse_load_csv(std::string_view text);

/// `day,performance` CSV. Rows may come in any order; output is sorted.
[[nodiscard]] ObservationSet parse_performance_csv(std::string_view text);

struct PredictionRow {
    Index day = 0;
    double load = 0.0;
    double predicted = 0.0;
    std::optional<double> observed;

    friend bool operator==(const PredictionRow&, const PredictionRow&) = default;
};

/// One row per day, days contiguous from 0.
struct PredictionTable {
    std::vector<PredictionRow> rows;

    friend bool operator==(const PredictionTable&, const PredictionTable&) = default;
};

/// Combines load, model output and (optional) observations. `predicted` sets
/// the table length and must not exceed the load length.
[[nodiscard]] PredictionTable make_prediction_table(const LoadSeries& w, const Vector& predicted,
                                                    const ObservationSet* obs = nullptr);

/// Header `day,load,predicted,observed`; missing observations are empty fields.
[[nodiscard]] std::string emit_prediction_csv(const PredictionTable& table);
[[nodiscard]] PredictionTable parse_prediction_csv(std::string_view text);

/// Header `day,load,state`.
[[nodiscard]] std::string emit_state_csv(const LoadSeries& w, const StateSeries& g);

} // namespace ffdelay
