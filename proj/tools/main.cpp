#include <CLI11.hpp>

#include "sunlink/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"sunlink - deterministic simulator of solar-harvesting batteryless "
                 "long-range sensor links"};
    app.require_subcommand(1);

    sunlink::CommonOpts opts;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out", opts.out_dir, "Output directory")->capture_default_str();
        cmd->add_option_function<std::uint64_t>(
            "--seed", [&](std::uint64_t v) { opts.seed = v; }, "Override the scenario seed");
        cmd->add_option("--set", opts.sets,
                        "Override a scenario key (dotted path), e.g. "
                        "--set radio.tx_power_dbm=11");
    };

    std::string scenario_ref, scenario_b, param_path, values_spec;
    std::string targets_path = "calib-nlos-targets.csv";
    std::string grid_spec = "n=2.0:0.25:4.0,sigma=2:1:10";
    int seeds = 3;

    CLI::App* run = app.add_subcommand("run", "Run one scenario and write its metrics");
    run->add_option("scenario", scenario_ref, "Scenario file or preset name")->required();
    add_common(run);

    CLI::App* sweep = app.add_subcommand("sweep", "Sweep one numeric scenario field");
    sweep->add_option("scenario", scenario_ref, "Scenario file or preset name")->required();
    sweep->add_option("--param", param_path, "Dotted path of the field to sweep")
        ->required();
    sweep->add_option("--values", values_spec, "Comma list or start:step:stop")->required();
    sweep->add_option("--seeds", seeds, "Independent runs per value")
        ->capture_default_str();
    add_common(sweep);

    CLI::App* compare = app.add_subcommand(
        "compare", "Compare two scenarios that differ only in their radio");
    compare->add_option("scenario_a", scenario_ref, "First scenario (file or preset)")
        ->required();
    compare->add_option("scenario_b", scenario_b, "Second scenario (file or preset)")
        ->required();
    add_common(compare);

    CLI::App* calibrate =
        app.add_subcommand("calibrate", "Fit the channel to observed delivery ratios");
    calibrate->add_option("targets", targets_path, "Target CSV (radio,d_m,tx_dbm,pdr)")
        ->capture_default_str();
    calibrate->add_option("--grid", grid_spec, "Search grid ranges")->capture_default_str();
    add_common(calibrate);

    CLI::App* feasibility = app.add_subcommand(
        "feasibility", "Check whether the radio bank can carry one whole packet");
    feasibility->add_option("scenario", scenario_ref, "Scenario file or preset name")
        ->required();
    add_common(feasibility);

    CLI::App* presets =
        app.add_subcommand("presets", "Write the built-in presets as editable files");
    presets->add_option("--out", opts.out_dir, "Output directory")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return sunlink::cmd_run(scenario_ref, opts);
    if (sweep->parsed())
        return sunlink::cmd_sweep(scenario_ref, param_path, values_spec, seeds, opts);
    if (compare->parsed()) return sunlink::cmd_compare(scenario_ref, scenario_b, opts);
    if (calibrate->parsed()) return sunlink::cmd_calibrate(targets_path, grid_spec, opts);
    if (feasibility->parsed()) return sunlink::cmd_feasibility(scenario_ref, opts);
    if (presets->parsed()) return sunlink::cmd_presets(opts.out_dir);
    return 1;
}
