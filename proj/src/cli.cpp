#include "pcmrbm/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pcmrbm/analysis.hpp"
#include "pcmrbm/config.hpp"
#include "pcmrbm/errors.hpp"
#include "pcmrbm/experiments.hpp"

namespace pcmrbm {

namespace {

using nlohmann::json;

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::string out_dir;
    bool verbose = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON experiment config");
    cmd->add_option("--override", args.overrides,
                    "dotted config override, e.g. train.epochs=30 (repeatable)");
    cmd->add_option("--seed", args.seed, "master seed");
    cmd->add_option("--trials", args.trials, "number of trials");
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_flag("-v,--verbose", args.verbose, "progress output");
}

ExperimentConfig resolve_config(const CommonArgs& args, const std::string& kind) {
    json j = json::object();
    bool file_has_out = false;
    if (!args.config_path.empty()) {
        std::ifstream in(args.config_path);
        if (!in) throw ConfigError("config: cannot open file: " + args.config_path);
        try {
            in >> j;
        } catch (const json::parse_error& e) {
            throw ConfigError("config: invalid JSON in " + args.config_path + ": " + e.what());
        }
        file_has_out = j.contains("out_dir");
    }
    for (const auto& ov : args.overrides) {
        apply_override(j, ov);
        if (ov.rfind("out_dir=", 0) == 0) file_has_out = true;
    }
    ExperimentConfig cfg = config_from_json(j);
    cfg.experiment = kind;
    if (args.seed) cfg.seed = *args.seed;
    if (args.trials) cfg.trials = *args.trials;
    if (!args.out_dir.empty()) {
        cfg.out_dir = args.out_dir;
    } else if (!file_has_out) {
        if (const char* env = std::getenv("PCM_RBM_OUT"); env && *env) cfg.out_dir = env;
    }
    cfg.validate();
    return cfg;
}

void print_summary(const ExperimentConfig& cfg, const char* what) {
    std::printf("%s: %d trial(s), master seed %llu, output in %s/\n", what, cfg.trials,
                static_cast<unsigned long long>(cfg.seed), cfg.out_dir.c_str());
}

int cmd_train(const CommonArgs& args) {
    const ExperimentConfig cfg = resolve_config(args, "train");
    const TrainingExperimentResult r = run_training_experiment(cfg);
    print_summary(cfg, "train");
    if (args.verbose) {
        for (std::size_t t = 0; t < r.trials.size(); ++t) {
            const auto& rows = r.trials[t].hardware;
            std::printf("  trial %zu: KL %.4f -> %.4f nats over %zu epochs\n", t,
                        rows.front().kl_exact, rows.back().kl_exact, rows.size() - 1);
        }
    }
    return 0;
}

int cmd_sweep_patterns(const CommonArgs& args) {
    const ExperimentConfig cfg = resolve_config(args, "sweep-patterns");
    run_pattern_sweep(cfg);
    print_summary(cfg, "sweep-patterns");
    return 0;
}

int cmd_sweep_device(const CommonArgs& args) {
    const ExperimentConfig cfg = resolve_config(args, "sweep-device");
    run_device_sweep(cfg);
    print_summary(cfg, "sweep-device");
    return 0;
}

int cmd_energy_report(const CommonArgs& args, bool simulate) {
    const ExperimentConfig cfg = resolve_config(args, "energy-report");
    const EnergyReportResult r = run_energy_report(cfg, simulate);
    const HeadlineComparison& h = r.headline;

    std::printf("energy per training epoch\n");
    std::printf("  %-34s %12s %12s\n", "preset", "estimate", "reference");
    std::printf("  %-34s %9.1f nJ %9.1f nJ\n", "vector processor, 64-bit",
                h.conventional_64bit.total_j * 1e9, h.ref_conventional_64bit_j * 1e9);
    std::printf("  %-34s %9.1f nJ %9.1f nJ\n", "vector processor, 16-bit",
                h.conventional_16bit.total_j * 1e9, h.ref_conventional_16bit_j * 1e9);
    std::printf("  %-34s %9.1f nJ %9.1f nJ\n", "1 Gb array as conventional store",
                h.conv_1gb_total_j * 1e9, h.ref_conv_1gb_j * 1e9);
    std::printf("  %-34s %9.1f nJ %9.1f nJ\n", "1 Gb array, in-array training",
                h.pcm_1gb.total_j * 1e9, h.ref_pcm_1gb_j * 1e9);
    if (r.sim_trials > 0)
        std::printf("  %-34s %9.2f nJ  (%.2f programming + %.2f read)\n",
                    "simulated array (this config)", r.sim_total_mean_j * 1e9,
                    r.sim_prog_mean_j * 1e9, r.sim_read_mean_j * 1e9);
    std::printf("residuals vs the reference figures come from op counts the references do\n"
                "not itemize; see energy_report.json for every assumed count.\n");
    return 0;
}

int cmd_infer(const std::string& pattern_str, const std::string& mask_str,
              const std::string& array_path, const std::string& out_dir) {
    const Pattern observed = Pattern::from_string(pattern_str);
    const Pattern mask = Pattern::from_string(mask_str);
    if (observed.size() != mask.size())
        throw ConfigError("infer: pattern and mask lengths differ");

    RbmModel model;
    if (!array_path.empty()) {
        std::ifstream in(array_path);
        if (!in) throw ConfigError("infer: cannot open array snapshot: " + array_path);
        json j;
        in >> j;
        const SynapseArray array = array_from_json(j);
        if (array.n_visible() != observed.size())
            throw ConfigError("infer: array size does not match the pattern");
        model = RbmModel::from_weights(array.weights());
    } else {
        model = RbmModel::zero(observed.size(), 5);
    }

    const PixelPosterior post = infer_missing_pixels(model, observed, mask);

    json out;
    out["pattern"] = pattern_str;
    out["mask"] = mask_str;
    out["observed"] = pattern_str; // masked positions are ignored by the conditional
    out["posterior"] = json::array();
    for (const auto& [code, p] : post.assignments) {
        Pattern completed = observed;
        for (std::size_t b = 0; b < post.missing_pixels.size(); ++b)
            completed.pixels[post.missing_pixels[b]] = (code >> b) & 1u;
        std::string assignment(post.missing_pixels.size(), '0');
        for (std::size_t b = 0; b < post.missing_pixels.size(); ++b)
            if ((code >> b) & 1u) assignment[b] = '1';
        out["posterior"].push_back(
            {{"assignment", assignment}, {"completed", completed.to_string()}, {"p", p}});
    }
    out["p_white_per_pixel"] = json::array();
    for (std::size_t b = 0; b < post.missing_pixels.size(); ++b)
        out["p_white_per_pixel"].push_back(
            {{"pixel", post.missing_pixels[b]}, {"p_white", post.p_white[b]}});

    std::cout << out.dump(2) << "\n";
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        std::ofstream f(std::filesystem::path(out_dir) / "inference.json");
        f << out.dump(2) << "\n";
    }
    return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"behavioral simulator for RBM training on 2-PCM synapse arrays"};
    app.require_subcommand(1);

    CommonArgs train_args, swp_args, swd_args, er_args;
    CLI::App* train = app.add_subcommand("train", "KL/error/energy curves for one configuration");
    add_common(train, train_args);
    CLI::App* swp = app.add_subcommand("sweep-patterns",
                                       "recovery error vs number of stored patterns");
    add_common(swp, swp_args);
    CLI::App* swd = app.add_subcommand("sweep-device",
                                       "final KL and error over device parameter grids");
    add_common(swd, swd_args);
    CLI::App* er = app.add_subcommand("energy-report",
                                      "hardware energy presets and simulated epoch energy");
    add_common(er, er_args);
    bool no_simulate = false;
    er->add_flag("--no-simulate", no_simulate, "skip the simulated training run");

    std::string pattern_str, mask_str, array_path, infer_out;
    CLI::App* infer = app.add_subcommand("infer", "exact posterior over masked pixels");
    infer->add_option("--pattern", pattern_str, "pixels as 0/1 string, row-major")->required();
    infer->add_option("--mask", mask_str, "mask as 0/1 string, 1 = missing")->required();
    infer->add_option("--array", array_path, "array snapshot JSON (default: zero weights)");
    infer->add_option("--out", infer_out, "directory for inference.json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (train->parsed()) return cmd_train(train_args);
        if (swp->parsed()) return cmd_sweep_patterns(swp_args);
        if (swd->parsed()) return cmd_sweep_device(swd_args);
        if (er->parsed()) return cmd_energy_report(er_args, !no_simulate);
        if (infer->parsed()) return cmd_infer(pattern_str, mask_str, array_path, infer_out);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const OutOfRange& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}

} // namespace pcmrbm
