#include "ffdelay/config.hpp"

#include "ffdelay/csv.hpp"
#include "ffdelay/errors.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <set>
#include <string>

namespace ffdelay {

namespace {

std::size_t line_of(const YAML::Node& n) { return static_cast<std::size_t>(n.Mark().line + 1); }

[[noreturn]] void fail(const YAML::Node& n, const std::string& what) { throw ParseError(what, line_of(n)); }

YAML::Node parse_document(std::string_view text) {
    try {
        return YAML::Load(std::string(text));
    } catch (const YAML::Exception& e) {
        throw ParseError(e.msg, static_cast<std::size_t>(e.mark.line + 1));
    }
}

void require_map(const YAML::Node& n, const std::string& where) {
    if (!n.IsMap()) fail(n, where + " must be a mapping");
}

void reject_unknown(const YAML::Node& map, std::initializer_list<std::string_view> allowed, const std::string& where) {
    for (const auto& kv : map) {
        const std::string key = kv.first.as<std::string>();
        bool ok = false;
        for (auto a : allowed) ok = ok || key == a;
        if (!ok) {
            std::string list;
            for (auto a : allowed) {
                if (!list.empty()) list += ", ";
                list += a;
            }
            fail(kv.first, "unknown key '" + where + key + "' (allowed: " + list + ")");
        }
    }
}

double as_number(const YAML::Node& n, const std::string& key) {
    if (!n.IsScalar()) fail(n, key + " must be a number");
    const std::string& s = n.Scalar();
    if (s == ".inf" || s == ".Inf" || s == ".INF" || s == "inf" || s == "+.inf") {
        return std::numeric_limits<double>::infinity();
    }
    if (s == "-.inf" || s == "-.Inf" || s == "-.INF" || s == "-inf") return -std::numeric_limits<double>::infinity();
    std::string_view v = s;
    if (!v.empty() && v.front() == '+') v.remove_prefix(1);
    double out = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || res.ec != std::errc{} || res.ptr != v.data() + v.size() || std::isnan(out)) {
        fail(n, key + " must be a number, got '" + s + "'");
    }
    return out;
}

template <typename Int>
Int as_integer(const YAML::Node& n, const std::string& key) {
    if (!n.IsScalar()) fail(n, key + " must be an integer");
    const std::string& s = n.Scalar();
    Int out{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        fail(n, key + " must be an integer, got '" + s + "'");
    }
    return out;
}

std::string as_text(const YAML::Node& n, const std::string& key) {
    if (!n.IsScalar()) fail(n, key + " must be a string");
    return n.Scalar();
}

Bounds as_bounds(const YAML::Node& n, const std::string& key) {
    if (!n.IsSequence() || n.size() != 2) fail(n, key + " must be a [lower, upper] pair");
    Bounds b{as_number(n[0], key + "[0]"), as_number(n[1], key + "[1]")};
    if (!(b.lower < b.upper)) fail(n, key + ": lower bound must be below upper bound");
    return b;
}

} // namespace

static RunConfig load_config_impl(std::string_view text) {
    const YAML::Node root = parse_document(text);
    if (!root.IsDefined() || root.IsNull()) throw ParseError("configuration is empty", 0);
    require_map(root, "configuration");
    reject_unknown(root, {"variant", "horizon", "bounds", "fit", "chart"}, "");

    RunConfig cfg;
    if (!root["variant"]) throw ParseError("configuration must set 'variant'", 0);
    cfg.variant = parse_variant(as_text(root["variant"], "variant"));
    cfg.fit.variant = cfg.variant;

    if (const auto h = root["horizon"]) {
        const auto v = as_integer<long long>(h, "horizon");
        if (v < 1) fail(h, "horizon must be at least 1");
        cfg.horizon = static_cast<Index>(v);
    }

    if (const auto b = root["bounds"]) {
        require_map(b, "bounds");
        reject_unknown(b, {"p0", "k1", "k2", "tau1", "tau2", "tau3", "tau4", "tau5"}, "bounds.");
        if (b["p0"]) cfg.bounds.p0 = as_bounds(b["p0"], "bounds.p0");
        if (b["k1"]) cfg.bounds.k1 = as_bounds(b["k1"], "bounds.k1");
        if (b["k2"]) cfg.bounds.k2 = as_bounds(b["k2"], "bounds.k2");
        if (b["tau1"]) cfg.bounds.tau1 = as_bounds(b["tau1"], "bounds.tau1");
        if (b["tau2"]) cfg.bounds.tau2 = as_bounds(b["tau2"], "bounds.tau2");
        if (b["tau3"]) cfg.bounds.tau3 = as_bounds(b["tau3"], "bounds.tau3");
        if (b["tau4"]) cfg.bounds.tau4 = as_bounds(b["tau4"], "bounds.tau4");
        if (b["tau5"]) cfg.bounds.tau5 = as_bounds(b["tau5"], "bounds.tau5");
    }
    validate(cfg.bounds);

    if (const auto f = root["fit"]) {
        require_map(f, "fit");
        reject_unknown(f, {"starts", "restarts", "seed", "max_iterations", "tolerance", "simplex_tolerance", "fix_p0"},
                       "fit.");
        if (f["starts"]) cfg.fit.starts = as_integer<int>(f["starts"], "fit.starts");
        if (f["restarts"]) cfg.fit.restarts = as_integer<int>(f["restarts"], "fit.restarts");
        if (f["seed"]) cfg.fit.seed = as_integer<std::uint64_t>(f["seed"], "fit.seed");
        if (f["max_iterations"]) {
            cfg.fit.simplex.max_iterations = as_integer<int>(f["max_iterations"], "fit.max_iterations");
        }
        if (f["tolerance"]) cfg.fit.simplex.f_tolerance = as_number(f["tolerance"], "fit.tolerance");
        if (f["simplex_tolerance"]) {
            cfg.fit.simplex.x_tolerance = as_number(f["simplex_tolerance"], "fit.simplex_tolerance");
        }
        if (f["fix_p0"] && !f["fix_p0"].IsNull()) cfg.fit.fix_p0 = as_number(f["fix_p0"], "fit.fix_p0");
    }
    validate(cfg.fit);

    if (const auto c = root["chart"]) {
        require_map(c, "chart");
        reject_unknown(c, {"width", "height", "fit_title", "load_title", "y_label"}, "chart.");
        if (c["width"]) cfg.chart.width = as_number(c["width"], "chart.width");
        if (c["height"]) cfg.chart.height = as_number(c["height"], "chart.height");
        if (c["fit_title"]) cfg.chart.fit_title = as_text(c["fit_title"], "chart.fit_title");
        if (c["load_title"]) cfg.chart.load_title = as_text(c["load_title"], "chart.load_title");
        if (c["y_label"]) cfg.chart.y_label = as_text(c["y_label"], "chart.y_label");
        if (!(cfg.chart.width >= 200.0 && cfg.chart.width <= 20000.0) ||
            !(cfg.chart.height >= 150.0 && cfg.chart.height <= 20000.0)) {
            fail(c, "chart dimensions must be within 200..20000 x 150..20000");
        }
    }
    return cfg;
}

namespace {

std::string yaml_number(double v) {
    if (std::isinf(v)) return v > 0 ? ".inf" : "-.inf";
    return format_number(v);
}

void emit_state(std::string& out, const char* name, const StateParams& s) {
    out += name;
    out += ":\n  decay: " + yaml_number(decay_of(s)) + "\n";
    if (const auto* q = std::get_if<SingleDelayParams>(&s)) out += "  lag1: " + yaml_number(q->tau_lag1) + "\n";
    if (const auto* q = std::get_if<ThreeDelayParams>(&s)) {
        out += "  lag1: " + yaml_number(q->tau_lag1) + "\n";
        out += "  lag2: " + yaml_number(q->tau_lag2) + "\n";
        out += "  lag3: " + yaml_number(q->tau_lag3) + "\n";
    }
    if (const auto* q = std::get_if<KernelParams>(&s)) {
        out += "  tau5: " + yaml_number(q->tau5) + "\n";
        out += "  weights: [" + yaml_number(q->weights[0]) + ", " + yaml_number(q->weights[1]) + ", " +
               yaml_number(q->weights[2]) + "]\n";
    }
}

StateParams parse_state(const YAML::Node& n, ModelVariant v, const std::string& name) {
    if (!n) throw ParseError("params document must contain '" + name + "'", 0);
    require_map(n, name);
    auto need = [&](const char* key) {
        if (!n[key]) fail(n, name + " must set '" + key + "' for variant " + std::string(to_string(v)));
        return as_number(n[key], name + "." + key);
    };
    switch (v) {
    case ModelVariant::classical:
        reject_unknown(n, {"decay"}, name + ".");
        return FirstOrderParams{need("decay")};
    case ModelVariant::single_delay:
        reject_unknown(n, {"decay", "lag1"}, name + ".");
        return SingleDelayParams{need("decay"), need("lag1")};
    case ModelVariant::three_delay:
        reject_unknown(n, {"decay", "lag1", "lag2", "lag3"}, name + ".");
        return ThreeDelayParams{need("decay"), need("lag1"), need("lag2"), need("lag3")};
    case ModelVariant::kernel: {
        reject_unknown(n, {"decay", "tau5", "weights"}, name + ".");
        KernelParams k{need("decay"), need("tau5")};
        if (const auto wts = n["weights"]) {
            if (!wts.IsSequence() || wts.size() != 3) fail(wts, name + ".weights must be a list of 3 numbers");
            for (std::size_t i = 0; i < 3; ++i) k.weights[i] = as_number(wts[i], name + ".weights");
        }
        return k;
    }
    }
    return FirstOrderParams{};
}

} // namespace

std::string emit_params_document(const PerformanceParams& params) {
    std::string out;
    out += "variant: " + std::string(to_string(params.variant())) + "\n";
    out += "p0: " + yaml_number(params.p0) + "\n";
    out += "k1: " + yaml_number(params.k1) + "\n";
    out += "k2: " + yaml_number(params.k2) + "\n";
    emit_state(out, "fitness", params.fitness);
    emit_state(out, "fatigue", params.fatigue);
    return out;
}

static PerformanceParams parse_params_impl(std::string_view text) {
    const YAML::Node root = parse_document(text);
    if (!root.IsDefined() || root.IsNull()) throw ParseError("params document is empty", 0);
    require_map(root, "params document");
    reject_unknown(root, {"variant", "p0", "k1", "k2", "fitness", "fatigue"}, "");
    for (const char* key : {"variant", "p0", "k1", "k2"}) {
        if (!root[key]) throw ParseError(std::string("params document must set '") + key + "'", 0);
    }
    PerformanceParams p;
    const ModelVariant v = parse_variant(as_text(root["variant"], "variant"));
    p.p0 = as_number(root["p0"], "p0");
    p.k1 = as_number(root["k1"], "k1");
    p.k2 = as_number(root["k2"], "k2");
    p.fitness = parse_state(root["fitness"], v, "fitness");
    p.fatigue = parse_state(root["fatigue"], v, "fatigue");
    validate(p);
    return p;
}

namespace {

template <typename Body>
auto translate_yaml_errors(Body&& body) {
    try {
        return body();
    } catch (const YAML::Exception& e) {
        throw ParseError(e.msg, e.mark.is_null() ? 0 : static_cast<std::size_t>(e.mark.line + 1));
    }
}

} // namespace

RunConfig load_config(std::string_view text) {
    return translate_yaml_errors([&] { return load_config_impl(text); });
}

PerformanceParams parse_params_document(std::string_view text) {
    return translate_yaml_errors([&] { return parse_params_impl(text); });
}

} // namespace ffdelay
