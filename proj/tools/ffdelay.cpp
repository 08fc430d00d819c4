// ffdelay: fit, predict and simulate fitness-fatigue models with delays.

#include "ffdelay/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

// CLI11 validator that accepts numbers and "inf".
const CLI::Validator kTau(
    [](std::string& s) { return ffdelay::parse_tau(s) ? std::string{} : "'" + s + "' is not a number or inf"; },
    "NUMBER|inf");

int report(const ffdelay::CommandOutcome& outcome) {
    if (outcome.exit_code == ffdelay::kExitSuccess) {
        std::cout << outcome.message << '\n';
        for (const auto& p : outcome.artifacts) std::cout << "  wrote " << p.string() << '\n';
    } else {
        std::cerr << "error: " << outcome.message << '\n';
    }
    return outcome.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fitness-fatigue performance modelling with delayed and kernel memory terms"};
    app.require_subcommand(1);

    ffdelay::FitArgs fit_args;
    auto* fit = app.add_subcommand("fit", "Estimate model parameters from load and performance data");
    fit->add_option("--load", fit_args.load, "Load CSV (day,load)")->required();
    fit->add_option("--perf", fit_args.perf, "Performance CSV (day,performance)")->required();
    fit->add_option("--config", fit_args.config, "YAML run configuration")->required();
    fit->add_option("--out", fit_args.out, "Output directory")->required();
    fit->add_option("--seed", fit_args.seed, "Override fit.seed");

    ffdelay::FitArgs compare_args;
    auto* compare = app.add_subcommand("compare", "Fit every model variant and tabulate SSE and R^2");
    compare->add_option("--load", compare_args.load, "Load CSV (day,load)")->required();
    compare->add_option("--perf", compare_args.perf, "Performance CSV (day,performance)")->required();
    compare->add_option("--config", compare_args.config, "YAML run configuration")->required();
    compare->add_option("--out", compare_args.out, "Output directory")->required();
    compare->add_option("--seed", compare_args.seed, "Override fit.seed");

    ffdelay::PredictArgs predict_args;
    auto* predict = app.add_subcommand("predict", "Predict performance from a params document");
    predict->add_option("--load", predict_args.load, "Load CSV (day,load)")->required();
    predict->add_option("--params", predict_args.params, "Params YAML written by fit")->required();
    predict->add_option("--horizon", predict_args.horizon, "Days to predict")->required();
    predict->add_option("--out", predict_args.out, "Output directory")->required();

    ffdelay::SimulateArgs sim_args;
    std::string tau[5];
    long long sim_horizon = -1;
    auto* simulate = app.add_subcommand("simulate", "Evaluate one state model on a load series");
    simulate->footer(ffdelay::simulate_usage());
    simulate->add_option("--load", sim_args.load, "Load CSV (day,load)")->required();
    simulate->add_option("--variant", sim_args.variant, "classical | single_delay | three_delay | kernel")
        ->required();
    simulate->add_option("--tau1", tau[0], "Decay time constant (days)")->check(kTau);
    simulate->add_option("--tau2", tau[1], "Lag constant for g(t-1)")->check(kTau);
    simulate->add_option("--tau3", tau[2], "Lag constant for g(t-2)")->check(kTau);
    simulate->add_option("--tau4", tau[3], "Lag constant for g(t-3)")->check(kTau);
    simulate->add_option("--tau5", tau[4], "Kernel gain")->check(kTau);
    simulate->add_option("--horizon", sim_horizon, "Days to simulate (default: whole load series)");
    simulate->add_option("--out", sim_args.out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : ffdelay::kExitUsage;
    }

    if (*fit) return report(ffdelay::cmd_fit(fit_args));
    if (*compare) return report(ffdelay::cmd_compare(compare_args));
    if (*predict) return report(ffdelay::cmd_predict(predict_args));

    std::optional<double>* slots[5] = {&sim_args.tau1, &sim_args.tau2, &sim_args.tau3, &sim_args.tau4,
                                       &sim_args.tau5};
    for (int i = 0; i < 5; ++i) {
        if (!tau[i].empty()) *slots[i] = ffdelay::parse_tau(tau[i]);
    }
    if (sim_horizon >= 0) sim_args.horizon = static_cast<ffdelay::Index>(sim_horizon);
    return report(ffdelay::cmd_simulate(sim_args));
}
