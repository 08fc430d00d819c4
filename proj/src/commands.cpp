#include "ffdelay/commands.hpp"

#include "ffdelay/chart.hpp"
#include "ffdelay/config.hpp"
#include "ffdelay/csv.hpp"
#include "ffdelay/errors.hpp"
#include "ffdelay/estimation.hpp"
#include "ffdelay/model.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <utility>

namespace ffdelay {

namespace fs = std::filesystem;

namespace {

// Failure carrying its exit code; caught once per command.
struct CommandFailure {
    int code;
    std::string message;
};

std::string read_file(const fs::path& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CommandFailure{kExitData, std::string("cannot read ") + what + " file '" + path.string() + "'"};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Collects artifacts in memory, then writes each to a temporary sibling and
// renames them all into place. A failure removes every temporary.
class ArtifactSet {
public:
    explicit ArtifactSet(fs::path dir) : dir_(std::move(dir)) {}

    void add(const std::string& name, std::string content) { files_.emplace_back(name, std::move(content)); }

    std::vector<fs::path> commit() {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw CommandFailure{kExitData, "cannot create output directory '" + dir_.string() + "'"};
        std::vector<fs::path> temps;
        auto cleanup = [&] {
            for (const auto& t : temps) fs::remove(t, ec);
        };
        for (const auto& [name, content] : files_) {
            const fs::path tmp = dir_ / ("." + name + ".tmp");
            temps.push_back(tmp);
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            out << content;
            out.close();
            if (!out) {
                cleanup();
                throw CommandFailure{kExitData, "cannot write '" + tmp.string() + "'"};
            }
        }
        std::vector<fs::path> written;
        for (std::size_t i = 0; i < files_.size(); ++i) {
            const fs::path target = dir_ / files_[i].first;
            fs::rename(temps[i], target, ec);
            if (ec) {
                cleanup();
                for (const auto& w : written) fs::remove(w, ec);
                throw CommandFailure{kExitData, "cannot move artifact into '" + target.string() + "'"};
            }
            written.push_back(target);
        }
        return written;
    }

private:
    fs::path dir_;
    std::vector<std::pair<std::string, std::string>> files_;
};

template <typename Body>
CommandOutcome run_guarded(Body&& body) {
    try {
        return body();
    } catch (const CommandFailure& f) {
        return {f.code, f.message, {}};
    } catch (const NumericalError& e) {
        return {kExitNumerical, e.what(), {}};
    } catch (const Error& e) {
        return {kExitData, e.what(), {}};
    } catch (const std::exception& e) {
        return {kExitNumerical, std::string("unexpected failure: ") + e.what(), {}};
    }
}

LoadSeries read_load(const fs::path& path) {
    const std::string text = read_file(path, "load");
    try {
        return parse_load_csv(text);
    } catch (const Error& e) {
        throw CommandFailure{kExitData, path.string() + ": " + e.what()};
    }
}

ObservationSet read_observations(const fs::path& path) {
    const std::string text = read_file(path, "performance");
    try {
        return parse_performance_csv(text);
    } catch (const Error& e) {
        throw CommandFailure{kExitData, path.string() + ": " + e.what()};
    }
}

RunConfig read_config(const fs::path& path, const std::optional<std::uint64_t>& seed) {
    const std::string text = read_file(path, "config");
    RunConfig cfg;
    try {
        cfg = load_config(text);
    } catch (const Error& e) {
        throw CommandFailure{kExitData, path.string() + ": " + e.what()};
    }
    if (seed) cfg.fit.seed = *seed;
    return cfg;
}

// Shared input checks for fit and compare.
Index checked_horizon(const RunConfig& cfg, const LoadSeries& w, const ObservationSet& obs) {
    if (obs.size() < 2) {
        throw CommandFailure{kExitData, "at least 2 observations are required (R^2 is undefined otherwise)"};
    }
    const Index horizon = cfg.horizon.value_or(w.size());
    if (horizon > w.size()) {
        throw CommandFailure{kExitData, "horizon " + std::to_string(horizon) + " exceeds the " +
                                            std::to_string(w.size()) + " days of load data"};
    }
    if (obs.last_day() >= horizon) {
        throw CommandFailure{kExitData, "observation at day " + std::to_string(obs.last_day()) +
                                            " lies beyond the horizon of " + std::to_string(horizon) + " days"};
    }
    std::vector<double> flat(static_cast<std::size_t>(horizon), 0.0);
    try {
        (void)r_squared(flat, obs);
    } catch (const UndefinedMetricError&) {
        throw CommandFailure{kExitData, "observations have zero variance; R^2 is undefined"};
    }
    return horizon;
}

std::string describe(const FitResult& r) {
    std::string s = std::string(to_string(r.variant)) + ": R^2 = " + (r.r2 ? format_number(*r.r2) : "undefined") +
                    ", SSE = " + format_number(r.sse) + ", starts converged " + std::to_string(r.starts_converged) +
                    "/" + std::to_string(r.starts_run);
    if (r.underdetermined) s += " [warning: fewer observations than parameters]";
    if (r.non_identifiable) s += " [warning: zero load, parameters not identifiable]";
    return s;
}

} // namespace

std::optional<double> parse_tau(const std::string& text) {
    if (text == "inf" || text == "+inf" || text == ".inf" || text == "infinity") {
        return std::numeric_limits<double>::infinity();
    }
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (text.empty() || res.ec != std::errc{} || res.ptr != end || std::isnan(v)) return std::nullopt;
    return v;
}

std::string simulate_usage() {
    return "required flags per variant:\n"
           "  classical     --tau1\n"
           "  single_delay  --tau1 --tau2\n"
           "  three_delay   --tau1 --tau2 --tau3 --tau4\n"
           "  kernel        --tau1 --tau5\n"
           "time constants accept 'inf' to disable a lag";
}

CommandOutcome cmd_fit(const FitArgs& args) {
    return run_guarded([&]() -> CommandOutcome {
        const LoadSeries w = read_load(args.load);
        const ObservationSet obs = read_observations(args.perf);
        const RunConfig cfg = read_config(args.config, args.seed);
        const Index horizon = checked_horizon(cfg, w, obs);

        const FitResult r = fit(w, obs, cfg.bounds, cfg.fit, horizon);
        if (r.starts_converged == 0) {
            return {kExitNumerical, "no start converged within fit.max_iterations; " + describe(r), {}};
        }

        const PredictionTable table = make_prediction_table(w, r.predicted, &obs);
        ArtifactSet out(args.out);
        out.add("params.yaml", emit_params_document(r.params));
        out.add("predictions.csv", emit_prediction_csv(table));
        out.add("fit_chart.svg", render_fit_chart(table, cfg.chart));
        out.add("load_chart.svg", render_load_chart(w, cfg.chart));
        auto written = out.commit();
        return {kExitSuccess, describe(r), std::move(written)};
    });
}

CommandOutcome cmd_predict(const PredictArgs& args) {
    return run_guarded([&]() -> CommandOutcome {
        const LoadSeries w = read_load(args.load);
        const std::string text = read_file(args.params, "params");
        PerformanceParams params;
        try {
            params = parse_params_document(text);
        } catch (const Error& e) {
            throw CommandFailure{kExitData, args.params.string() + ": " + e.what()};
        }
        if (args.horizon < 1) throw CommandFailure{kExitUsage, "--horizon must be at least 1"};
        if (args.horizon > w.size()) {
            throw CommandFailure{kExitData, "horizon " + std::to_string(args.horizon) + " exceeds the " +
                                                std::to_string(w.size()) + " days of load data"};
        }
        const Vector p = predict(params, w, args.horizon);
        const PredictionTable table = make_prediction_table(w, p);
        ArtifactSet out(args.out);
        out.add("predictions.csv", emit_prediction_csv(table));
        out.add("prediction_chart.svg", render_fit_chart(table));
        auto written = out.commit();
        return {kExitSuccess,
                "predicted " + std::to_string(args.horizon) + " days with the " +
                    std::string(to_string(params.variant())) + " model",
                std::move(written)};
    });
}

CommandOutcome cmd_simulate(const SimulateArgs& args) {
    return run_guarded([&]() -> CommandOutcome {
        ModelVariant variant{};
        try {
            variant = parse_variant(args.variant);
        } catch (const Error& e) {
            throw CommandFailure{kExitUsage, std::string(e.what()) + "\n" + simulate_usage()};
        }
        auto need = [&](const std::optional<double>& v, const char* flag) {
            if (!v) {
                throw CommandFailure{kExitUsage, "variant " + args.variant + " requires " + flag + "\n" +
                                                     simulate_usage()};
            }
            return *v;
        };
        StateParams params;
        switch (variant) {
        case ModelVariant::classical: params = FirstOrderParams{need(args.tau1, "--tau1")}; break;
        case ModelVariant::single_delay:
            params = SingleDelayParams{need(args.tau1, "--tau1"), need(args.tau2, "--tau2")};
            break;
        case ModelVariant::three_delay:
            params = ThreeDelayParams{need(args.tau1, "--tau1"), need(args.tau2, "--tau2"),
                                      need(args.tau3, "--tau3"), need(args.tau4, "--tau4")};
            break;
        case ModelVariant::kernel: params = KernelParams{need(args.tau1, "--tau1"), need(args.tau5, "--tau5")}; break;
        }

        const LoadSeries w = read_load(args.load);
        const Index horizon = args.horizon.value_or(w.size());
        if (horizon > w.size()) {
            throw CommandFailure{kExitData, "horizon " + std::to_string(horizon) + " exceeds the " +
                                                std::to_string(w.size()) + " days of load data"};
        }
        const StateSeries g = eval_state(w, params, horizon);

        std::string note;
        if (const auto* k = std::get_if<KernelParams>(&params)) {
            const KernelMapping m = kernel_to_three_delay(*k);
            note = "; equivalent three-delay lags " + format_number(m.params.tau_lag1) + ", " +
                   format_number(m.params.tau_lag2) + ", " + format_number(m.params.tau_lag3);
            if (m.sign_domain_warning) note += " (negative: tau5 > 0)";
        }

        ChartOptions chart;
        chart.fit_title = "State trajectory (" + std::string(to_string(variant)) + ")";
        chart.y_label = "state";
        ArtifactSet out(args.out);
        out.add("trajectory.csv", emit_state_csv(w, g));
        if (horizon > 0) out.add("trajectory_chart.svg", render_fit_chart(make_prediction_table(w, g.values), chart));
        auto written = out.commit();
        return {kExitSuccess,
                "simulated " + std::to_string(horizon) + " days with the " + std::string(to_string(variant)) +
                    " model" + note,
                std::move(written)};
    });
}

CommandOutcome cmd_compare(const FitArgs& args) {
    return run_guarded([&]() -> CommandOutcome {
        const LoadSeries w = read_load(args.load);
        const ObservationSet obs = read_observations(args.perf);
        const RunConfig cfg = read_config(args.config, args.seed);
        const Index horizon = checked_horizon(cfg, w, obs);

        const auto rows = compare_variants(w, obs, cfg.bounds, cfg.fit, horizon);
        std::string csv = "variant,parameters,sse,r2\n";
        std::string summary;
        bool any_converged = false;
        for (const auto& row : rows) {
            csv += std::string(to_string(row.variant)) + "," + std::to_string(row.parameter_count) + "," +
                   format_number(row.result.sse) + "," + (row.result.r2 ? format_number(*row.result.r2) : "") + "\n";
            if (!summary.empty()) summary += "\n";
            summary += describe(row.result);
            any_converged = any_converged || row.result.starts_converged > 0;
        }
        if (!any_converged) return {kExitNumerical, "no start converged for any variant\n" + summary, {}};
        ArtifactSet out(args.out);
        out.add("comparison.csv", std::move(csv));
        auto written = out.commit();
        return {kExitSuccess, std::move(summary), std::move(written)};
    });
}

} // namespace ffdelay
