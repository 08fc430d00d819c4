// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include "support.hpp"

#include "ffdelay/commands.hpp"
#include "ffdelay/continuum.hpp"
#include "ffdelay/estimation.hpp"
#include "ffdelay/model.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <unistd.h>

using namespace ffdelay;
using namespace ffdelay::testing;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

Verdict equivalence() {
    const auto t0 = Clock::now();
    Generator gen(20240601);
    double conv = 0.0, kern = 0.0, chain = 0.0;
    const int instances = 250;
    for (int i = 0; i < instances; ++i) {
        const Index n = gen.index(2, 365);
        const LoadSeries w = gen.load(n);

        const auto s = gen.single();
        conv = std::max(conv, max_rel_diff(eval_single_delay_convolution(w, s, n).values,
                                           eval_single_delay_recursive(w, s, n).values));
        const auto t = gen.three();
        conv = std::max(conv, max_rel_diff(eval_three_delay_convolution(w, t, n).values,
                                           eval_three_delay_recursive(w, t, n).values));

        const auto k = gen.kernel();
        kern = std::max(kern, max_rel_diff(eval_kernel_recursive(w, k, n).values,
                                           eval_three_delay_recursive(w, kernel_to_three_delay(k).params, n).values));

        const double tau = gen.decay();
        const Vector classical = eval_classical(w, {tau}, n).values;
        const Vector single_inf = eval_single_delay_recursive(w, {tau}, n).values;
        const Vector three_inf = eval_three_delay_recursive(w, {tau}, n).values;
        const Vector kernel_zero = eval_kernel_recursive(w, {tau, 0.0, k.weights}, n).values;
        const Vector single_conv_inf = eval_single_delay_convolution(w, {tau}, n).values;
        const Vector three_conv_inf = eval_three_delay_convolution(w, {tau}, n).values;
        const double lag = gen.log_uniform(2.0, 100.0);
        const Vector single_lag = eval_single_delay_recursive(w, {tau, lag}, n).values;
        const Vector three_one = eval_three_delay_recursive(w, {tau, lag}, n).values;
        for (const Vector* v : {&single_inf, &three_inf, &kernel_zero, &single_conv_inf, &three_conv_inf}) {
            chain = std::max(chain, max_rel_diff(*v, classical));
        }
        chain = std::max(chain, max_rel_diff(three_one, single_lag));
    }
    const double elapsed = seconds_since(t0);
    const bool pass = conv <= 1e-9 && kern <= 1e-12 && chain <= 1e-12 && elapsed < 5.0;
    return {pass, std::to_string(instances) + " instances, " +
                      fmt("convolution %.2e, kernel %.2e, reductions %.2e", conv, kern, chain) +
                      fmt(", %.2f s", elapsed)};
}

Verdict oracle() {
    const auto t0 = Clock::now();
    Generator gen(777);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const Index n = gen.index(2, 365);
        const LoadSeries w = gen.load(n);
        const StepLoad step{w};
        const auto s = gen.single();
        worst = std::max(worst, max_rel_diff(integrate_single_delay(step, s, n - 1, 1).day_values(),
                                             eval_single_delay_recursive(w, s, n).values));
        const auto t = gen.three();
        worst = std::max(worst, max_rel_diff(integrate_three_delay(step, t, n - 1, 1).day_values(),
                                             eval_three_delay_recursive(w, t, n).values));
    }

    int ratios = 0, inside = 0;
    for (int i = 0; i < 40; ++i) {
        const Index days = gen.index(20, 60);
        const double base = gen.uniform(40.0, 120.0);
        const double swing = gen.uniform(0.1, 0.9) * base;
        const double period = gen.uniform(3.0, 10.0);
        const double phase = gen.uniform(0.0, 6.3);
        Vector w = Vector::Zero(days + 1);
        for (Index d = 1; d <= days; ++d) w[d] = base + swing * std::sin(static_cast<double>(d) / period + phase);
        const SingleDelayParams p{gen.decay(), gen.log_uniform(2.0, 100.0)};
        const auto probe = convergence_probe({LoadSeries(w)}, p, days, {1, 2, 4, 8, 16, 64});
        for (std::size_t j = 0; j + 1 < probe.size(); ++j) {
            const double r = probe[j + 1].sup_diff / probe[j].sup_diff;
            ++ratios;
            if (r >= 0.3 && r <= 0.8) ++inside;
        }
    }
    const double share = static_cast<double>(inside) / ratios;
    const double elapsed = seconds_since(t0);
    const bool pass = worst <= 1e-12 && share >= 0.9 && elapsed < 10.0;
    return {pass, fmt("m=1 max rel %.2e, halving ratios in range %.1f%%, %.2f s", worst, 100.0 * share, elapsed)};
}

struct Recovery {
    FitResult result;
    double range;
    Vector truth;
    double elapsed;
};

Recovery recover(double noise_fraction) {
    const LoadSeries w = block_load(120);
    const Vector truth = eval_performance(w, fixture_params(), 120);
    const auto days = observation_days();
    double lo = truth[days.front()], hi = lo;
    for (Index d : days) {
        lo = std::min(lo, truth[d]);
        hi = std::max(hi, truth[d]);
    }
    const double range = hi - lo;
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> noise(0.0, noise_fraction * range);
    std::vector<Observation> e;
    for (Index d : days) e.push_back({d, truth[d] + (noise_fraction > 0.0 ? noise(rng) : 0.0)});

    FitConfig cfg;
    cfg.starts = 20;
    const auto t0 = Clock::now();
    auto result = fit(w, ObservationSet(std::move(e)), ParamBounds{}, cfg);
    return {std::move(result), range, truth, seconds_since(t0)};
}

Verdict recovery() {
    const auto clean = recover(0.0);
    double err = 0.0;
    for (Index d = 0; d < clean.truth.size(); ++d) err = std::max(err, std::abs(clean.result.predicted[d] - clean.truth[d]));
    const auto noisy = recover(0.01);
    const double r2_clean = clean.result.r2.value_or(-1.0);
    const double r2_noisy = noisy.result.r2.value_or(-1.0);
    const bool pass = r2_clean >= 0.9999 && err <= 1e-3 * clean.range && r2_noisy >= 0.98 && clean.elapsed < 10.0 &&
                      noisy.elapsed < 10.0;
    return {pass, fmt("noiseless R^2 %.8f, max error %.2e of range, ", r2_clean, err / clean.range) +
                      fmt("noisy R^2 %.5f, fits %.2f s / %.2f s", r2_noisy, clean.elapsed, noisy.elapsed)};
}

Verdict nested() {
    const LoadSeries w = block_load(120);
    PerformanceParams truth;
    truth.p0 = 300.0;
    truth.k1 = 0.8;
    truth.k2 = 1.6;
    truth.fitness = FirstOrderParams{40.0};
    truth.fatigue = FirstOrderParams{8.0};
    const auto obs = sample(eval_performance(w, truth, 120), observation_days());
    FitConfig cfg;
    cfg.starts = 8;
    const auto rows = compare_variants(w, obs, ParamBounds{}, cfg);
    double classical = 0.0;
    for (const auto& r : rows) {
        if (r.variant == ModelVariant::classical) classical = r.result.sse;
    }
    bool pass = true;
    std::string detail = fmt("classical SSE %.3e", classical);
    for (const auto& r : rows) {
        if (r.variant == ModelVariant::classical) continue;
        pass = pass && r.result.sse <= classical + 1e-9;
        detail += ", " + std::string(to_string(r.variant)) + fmt(" %.3e", r.result.sse);
    }
    return {pass, detail};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool same_tree(const fs::path& a, const fs::path& b, int& files) {
    files = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
        const auto other = b / entry.path().filename();
        if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) return false;
        ++files;
    }
    for (const auto& entry : fs::directory_iterator(b)) {
        if (!fs::exists(a / entry.path().filename())) return false;
    }
    return files > 0;
}

Verdict determinism() {
    const fs::path data = FFDELAY_DATA_DIR;
    const fs::path root = fs::temp_directory_path() / ("ffdelay_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(root);
    FitArgs args{data / "synthetic_load.csv", data / "synthetic_perf.csv", data / "config.yaml", {}, std::nullopt};
    bool ok = true;
    int fit_files = 0, compare_files = 0;
    for (const char* run : {"fit1", "fit2"}) {
        args.out = root / run;
        ok = ok && cmd_fit(args).exit_code == kExitSuccess;
    }
    for (const char* run : {"cmp1", "cmp2"}) {
        args.out = root / run;
        ok = ok && cmd_compare(args).exit_code == kExitSuccess;
    }
    ok = ok && same_tree(root / "fit1", root / "fit2", fit_files) && same_tree(root / "cmp1", root / "cmp2", compare_files);
    fs::remove_all(root);
    return {ok, std::to_string(fit_files) + " fit and " + std::to_string(compare_files) +
                    " compare artifacts identical across two runs"};
}

Verdict load_rest_alternation() {
    // Four cycles of a loading week followed by six rest weeks.
    const Index on = 7, cycle = 49, days = 4 * cycle;
    Vector w = Vector::Zero(days);
    for (Index d = 1; d < days; ++d) w[d] = (d - 1) % cycle < on ? 100.0 : 0.0;
    const auto params = fixture_params();
    const Vector p = eval_performance(LoadSeries(w), params, days);

    int sign_changes = 0, below_loading = 0, above_rest = 0;
    int prev = 0;
    for (Index d = 1; d < days; ++d) {
        const double x = p[d] - params.p0;
        const int s = x > 0.0 ? 1 : (x < 0.0 ? -1 : 0);
        if (s != 0 && prev != 0 && s != prev) ++sign_changes;
        if (s != 0) prev = s;
        const bool loading = w[d] > 0.0;
        if (loading && s < 0) ++below_loading;
        if (!loading && s > 0) ++above_rest;
    }
    // Every loading block must open below baseline and every rest block must
    // contain above-baseline days.
    bool each_cycle = true;
    for (Index start = 1; start < days; start += cycle) {
        bool dip = false, rise = false;
        for (Index d = start; d < start + on; ++d) dip = dip || p[d] < params.p0;
        for (Index d = start + on; d < std::min(days, start + cycle); ++d) rise = rise || p[d] > params.p0;
        each_cycle = each_cycle && dip && rise;
    }
    const bool pass = each_cycle && sign_changes >= 7;
    return {pass, std::to_string(sign_changes) + " sign changes of p - p0, " + std::to_string(below_loading) +
                      " loading days below and " + std::to_string(above_rest) + " rest days above baseline"};
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
        {"equivalence of recursive, convolution, kernel and reduced forms", equivalence},
        {"continuum oracle agreement and first-order convergence", oracle},
        {"synthetic parameter recovery, noiseless and noisy", recovery},
        {"nested variants never fit worse than classical", nested},
        {"fit and compare artifacts are deterministic", determinism},
        {"load/rest alternation swings performance around baseline", load_rest_alternation},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        Verdict v{false, ""};
        try {
            v = check();
        } catch (const std::exception& e) {
            v.detail = std::string("exception: ") + e.what();
        }
        if (!v.pass) ++failures;
        std::printf("%s  %s (%s)\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.c_str());
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
