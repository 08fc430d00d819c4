#include "ffdelay/csv.hpp"

#include "ffdelay/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <system_error>

namespace ffdelay {

std::string format_number(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

struct Line {
    std::size_t number;
    std::vector<std::string_view> fields;
};

// Splits into trimmed comma-separated fields, skipping blank lines. The first
// non-blank line must equal `header`.
std::vector<Line> read_table(std::string_view text, std::string_view header) {
    std::vector<Line> lines;
    std::size_t number = 0;
    bool seen_header = false;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view raw = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++number;
        const std::string_view line = trim(raw);
        if (line.empty()) continue;
        if (!seen_header) {
            std::string compact;
            for (char c : line) {
                if (c != ' ' && c != '\t') compact.push_back(c);
            }
            if (number == 1 && compact.size() >= 3 && compact.compare(0, 3, "\xEF\xBB\xBF") == 0) {
                compact.erase(0, 3);
            }
            if (compact != header) {
                throw ParseError("expected header '" + std::string(header) + "'", number);
            }
            seen_header = true;
            continue;
        }
        Line parsed{number, {}};
        std::string_view rest = line;
        while (true) {
            const auto comma = rest.find(',');
            parsed.fields.push_back(trim(rest.substr(0, comma)));
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
        lines.push_back(std::move(parsed));
    }
    if (!seen_header) throw ParseError("missing header '" + std::string(header) + "'", 0);
    return lines;
}

Index parse_day(std::string_view s, std::size_t line) {
    long long v = 0;
    const auto* end = s.data() + s.size();
    const auto res = std::from_chars(s.data(), end, v);
    if (s.empty() || res.ec != std::errc{} || res.ptr != end || v < 0) {
        throw ParseError("day must be a non-negative integer, got '" + std::string(s) + "'", line);
    }
    return static_cast<Index>(v);
}

double parse_value(std::string_view s, std::size_t line, const char* what) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto res = std::from_chars(s.data(), end, v);
    if (s.empty() || res.ec != std::errc{} || res.ptr != end || !std::isfinite(v)) {
        throw ParseError(std::string(what) + " must be a finite number, got '" + std::string(s) + "'", line);
    }
    return v;
}

void expect_fields(const Line& l, std::size_t count) {
    if (l.fields.size() != count) {
        throw ParseError("expected " + std::to_string(count) + " fields, got " + std::to_string(l.fields.size()),
                         l.number);
    }
}

// Guards the dense fill against absurd day numbers.
constexpr Index kMaxDay = 10'000'000;

} // namespace

LoadSeries parse_load_csv(std::string_view text) {
    std::map<Index, double> loads;
    for (const Line& l : read_table(text, "day,load")) {
        expect_fields(l, 2);
        const Index day = parse_day(l.fields[0], l.number);
        if (day > kMaxDay) throw ParseError("day " + std::to_string(day) + " is out of range", l.number);
        const double load = parse_value(l.fields[1], l.number, "load");
        if (load < 0.0) {
            throw ConstraintError("line " + std::to_string(l.number) + ": load must be non-negative");
        }
        if (day == 0 && load != 0.0) {
            throw ConstraintError("line " + std::to_string(l.number) +
                                  ": load at day 0 must be 0 (the model assumes w(0) = 0)");
        }
        if (!loads.emplace(day, load).second) {
            throw DuplicateKeyError("line " + std::to_string(l.number) + ": duplicate day " + std::to_string(day));
        }
    }
    if (loads.empty()) return LoadSeries{};
    Vector dense = Vector::Zero(loads.rbegin()->first + 1);
    for (const auto& [day, load] : loads) dense[day] = load;
    return LoadSeries(std::move(dense));
}

ObservationSet parse_performance_csv(std::string_view text) {
    std::map<Index, double> values;
    for (const Line& l : read_table(text, "day,performance")) {
        expect_fields(l, 2);
        const Index day = parse_day(l.fields[0], l.number);
        const double perf = parse_value(l.fields[1], l.number, "performance");
        if (!values.emplace(day, perf).second) {
            throw DuplicateKeyError("line " + std::to_string(l.number) + ": duplicate day " + std::to_string(day));
        }
    }
    std::vector<Observation> entries;
    entries.reserve(values.size());
    for (const auto& [day, perf] : values) entries.push_back({day, perf});
    return ObservationSet(std::move(entries));
}

PredictionTable make_prediction_table(const LoadSeries& w, const Vector& predicted, const ObservationSet* obs) {
    if (predicted.size() > w.size()) throw InputLengthError("prediction is longer than the load series");
    PredictionTable table;
    table.rows.reserve(static_cast<std::size_t>(predicted.size()));
    for (Index d = 0; d < predicted.size(); ++d) table.rows.push_back({d, w[d], predicted[d], std::nullopt});
    if (obs) {
        for (const auto& e : *obs) {
            if (e.day < predicted.size()) table.rows[static_cast<std::size_t>(e.day)].observed = e.performance;
        }
    }
    return table;
}

std::string emit_prediction_csv(const PredictionTable& table) {
    std::string out = "day,load,predicted,observed\n";
    for (const auto& r : table.rows) {
        out += std::to_string(r.day);
        out += ',';
        out += format_number(r.load);
        out += ',';
        out += format_number(r.predicted);
        out += ',';
        if (r.observed) out += format_number(*r.observed);
        out += '\n';
    }
    return out;
}

PredictionTable parse_prediction_csv(std::string_view text) {
    PredictionTable table;
    for (const Line& l : read_table(text, "day,load,predicted,observed")) {
        expect_fields(l, 4);
        PredictionRow row;
        row.day = parse_day(l.fields[0], l.number);
        if (row.day != static_cast<Index>(table.rows.size())) {
            throw ParseError("days must be contiguous from 0", l.number);
        }
        row.load = parse_value(l.fields[1], l.number, "load");
        row.predicted = parse_value(l.fields[2], l.number, "predicted");
        if (!l.fields[3].empty()) row.observed = parse_value(l.fields[3], l.number, "observed");
        table.rows.push_back(row);
    }
    return table;
}

std::string emit_state_csv(const LoadSeries& w, const StateSeries& g) {
    if (g.size() > w.size()) throw InputLengthError("state series is longer than the load series");
    std::string out = "day,load,state\n";
    for (Index d = 0; d < g.size(); ++d) {
        out += std::to_string(d);
        out += ',';
        out += format_number(w[d]);
        out += ',';
        out += format_number(g[d]);
        out += '\n';
    }
    return out;
}

} // namespace ffdelay
