#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "pcmrbm/analysis.hpp"
#include "pcmrbm/experiments.hpp"

using namespace pcmrbm;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("pcmrbm_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// fast settings: tiny AIS, short runs
ExperimentConfig small_config(const fs::path& dir) {
    ExperimentConfig cfg;
    cfg.trials = 2;
    cfg.train.epochs = 3;
    cfg.ais.n_temperatures = 50;
    cfg.ais.n_chains = 10;
    cfg.out_dir = dir.string();
    return cfg;
}

std::vector<std::map<std::string, std::string>> read_csv(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in);
    std::string line;
    REQUIRE(std::getline(in, line));
    std::vector<std::string> cols;
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) cols.push_back(cell);
    std::vector<std::map<std::string, std::string>> rows;
    while (std::getline(in, line)) {
        std::stringstream ls(line);
        std::map<std::string, std::string> row;
        for (const auto& c : cols) {
            std::getline(ls, cell, ',');
            row[c] = cell;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

TEST_CASE("zero epochs leaves only the untrained row at the closed-form KL") {
    const fs::path dir = fresh_dir("untrained");
    ExperimentConfig cfg = small_config(dir);
    cfg.trials = 1;
    cfg.train.epochs = 0;
    cfg.device.sigma_d2d = 0.0;
    cfg.s_norm_override = 1e-6; // all weights exactly zero
    const TrainingExperimentResult r = run_training_experiment(cfg);
    REQUIRE(r.trials.size() == 1);
    REQUIRE(r.trials[0].hardware.size() == 1);
    const EpochMetrics& m = r.trials[0].hardware[0];
    CHECK(m.epoch == 0);
    CHECK(m.kl_exact == doctest::Approx(std::log(512.0 / 5.0)).epsilon(1e-9));
    CHECK(m.err_rate == 0.5);
    CHECK(m.mean_w == 0.0);
}

TEST_CASE("rerunning the same experiment produces byte-identical outputs") {
    const fs::path dir = fresh_dir("determinism");
    ExperimentConfig cfg = small_config(dir);
    run_training_experiment(cfg);
    std::map<std::string, std::string> first;
    for (const auto& entry : fs::directory_iterator(dir))
        first[entry.path().filename().string()] = slurp(entry.path());
    CHECK(first.size() >= 7); // config + per-trial files + aggregate

    run_training_experiment(cfg);
    for (const auto& entry : fs::directory_iterator(dir)) {
        REQUIRE(first.contains(entry.path().filename().string()));
        CHECK(slurp(entry.path()) == first[entry.path().filename().string()]);
    }
}

TEST_CASE("trials are independent of execution order") {
    const fs::path dir = fresh_dir("isolation");
    ExperimentConfig cfg = small_config(dir);
    cfg.trials = 3;
    const TrainingExperimentResult all = run_training_experiment(cfg);

    TrialOptions opt;
    opt.log_conductances = true;
    opt.snapshot_final_array = true;
    for (int t = 2; t >= 0; --t) { // reverse order
        const TrialOutput solo = run_trial(cfg, t, opt);
        REQUIRE(solo.hardware.size() == all.trials[t].hardware.size());
        for (std::size_t e = 0; e < solo.hardware.size(); ++e) {
            CHECK(solo.hardware[e].kl_exact == all.trials[t].hardware[e].kl_exact);
            CHECK(solo.hardware[e].kl_ais == all.trials[t].hardware[e].kl_ais);
            CHECK(solo.hardware[e].err_rate == all.trials[t].hardware[e].err_rate);
            CHECK(solo.hardware[e].read_energy_j == all.trials[t].hardware[e].read_energy_j);
        }
        for (std::size_t e = 0; e < solo.baseline.size(); ++e)
            CHECK(solo.baseline[e].kl_exact == all.trials[t].baseline[e].kl_exact);
    }
}

TEST_CASE("aggregates are recomputable from the per-trial files") {
    const fs::path dir = fresh_dir("aggregate");
    ExperimentConfig cfg = small_config(dir);
    cfg.trials = 3;
    run_training_experiment(cfg);

    std::vector<std::vector<std::map<std::string, std::string>>> trial_rows;
    for (int t = 0; t < 3; ++t)
        trial_rows.push_back(read_csv(dir / ("trial_" + std::to_string(t) + ".csv")));

    const auto agg = read_csv(dir / "aggregate.csv");
    for (const auto& row : agg) {
        if (row.at("synapse") != "pcm") continue;
        const std::size_t epoch = std::stoul(row.at("epoch"));
        std::vector<double> kl;
        for (int t = 0; t < 3; ++t)
            kl.push_back(std::stod(trial_rows[t].at(epoch).at("kl_exact_nats")));
        CHECK(csv_double(vec_mean(kl)) == row.at("kl_exact_mean"));
        CHECK(csv_double(vec_sample_std(kl)) == row.at("kl_exact_std"));
    }
}

TEST_CASE("trial CSV carries the fixed column set") {
    const fs::path dir = fresh_dir("columns");
    ExperimentConfig cfg = small_config(dir);
    cfg.trials = 1;
    run_training_experiment(cfg);
    std::ifstream in(dir / "trial_0.csv");
    std::string header;
    REQUIRE(std::getline(in, header));
    CHECK(header == "epoch,kl_exact_nats,kl_ais_nats,err_rate,prog_energy_j,read_energy_j");

    std::ifstream log(dir / "train_log_0.csv");
    REQUIRE(std::getline(log, header));
    CHECK(header ==
          "epoch,kl_estimate,kl_exact,programming_energy_j,read_energy_j,mean_w,min_w,max_w");
}

TEST_CASE("the drawn training set is recorded as 0/1 strings") {
    const fs::path dir = fresh_dir("dataset_echo");
    ExperimentConfig cfg = small_config(dir);
    cfg.trials = 1;
    const TrainingExperimentResult r = run_training_experiment(cfg);
    REQUIRE(r.trials[0].dataset_patterns.size() == 5);
    for (const auto& s : r.trials[0].dataset_patterns) {
        CHECK(s.size() == 9);
        CHECK(s.find_first_not_of("01") == std::string::npos);
    }
    std::ifstream in(dir / "dataset_0.json");
    REQUIRE(in);
    nlohmann::json j;
    in >> j;
    CHECK(j.at("patterns").size() == 5);
    CHECK(j.at("patterns")[0].get<std::string>() == r.trials[0].dataset_patterns[0]);
}

TEST_CASE("a degenerate device sweep reduces to the training experiment") {
    const fs::path dir1 = fresh_dir("sweep1");
    ExperimentConfig cfg = small_config(dir1);
    cfg.sweep.sigma_c2c = {cfg.device.sigma_c2c};
    cfg.sweep.n_levels = {cfg.device.n_levels};
    const DeviceSweepResult sweep = run_device_sweep(cfg);
    REQUIRE(sweep.cells.size() == 1);

    const fs::path dir2 = fresh_dir("sweep2");
    cfg.out_dir = dir2.string();
    const TrainingExperimentResult train = run_training_experiment(cfg);

    for (int t = 0; t < cfg.trials; ++t) {
        const auto& sweep_rows = sweep.cells[0].trials[t].hardware;
        const auto& train_rows = train.trials[t].hardware;
        // sweep logs epochs {0, final}; compare the final row bit-exactly
        CHECK(sweep_rows.back().kl_exact == train_rows.back().kl_exact);
        CHECK(sweep_rows.back().err_rate == train_rows.back().err_rate);
        CHECK(sweep_rows.back().read_energy_j == train_rows.back().read_energy_j);
    }
}

TEST_CASE("pattern sweep: untrained column is one half under the zero override") {
    const fs::path dir = fresh_dir("psweep");
    ExperimentConfig cfg = small_config(dir);
    cfg.n_patterns = {2, 3};
    cfg.checkpoints = {2};
    cfg.device.sigma_d2d = 0.0;
    cfg.s_norm_override = 1e-6;
    const PatternSweepResult r = run_pattern_sweep(cfg);
    REQUIRE(r.cells.size() == 2);
    for (const auto& cell : r.cells)
        for (const auto& trial : cell.trials) {
            CHECK(trial.hardware.front().epoch == 0);
            CHECK(trial.hardware.front().err_rate == 0.5);
            CHECK(trial.baseline.front().err_rate == 0.5);
        }
    CHECK(fs::exists(dir / "n2" / "trial_0.csv"));
    CHECK(fs::exists(dir / "n3" / "baseline_1.csv"));
    CHECK(fs::exists(dir / "aggregate.csv"));
}

TEST_CASE("per-epoch programming energy is constant, read energy trends upward") {
    const fs::path dir = fresh_dir("energy_cols");
    ExperimentConfig cfg = small_config(dir);
    cfg.trials = 1;
    cfg.train.epochs = 30;
    TrialOptions opt;
    opt.compute_ais = false;
    opt.run_baseline = false;
    const TrialOutput out = run_trial(cfg, 0, opt);
    REQUIRE(out.epoch_energy.size() == 31);
    // epoch 0 holds the 90 initialization RESETs
    CHECK(out.epoch_energy[0].resets == 90);
    CHECK(out.epoch_energy[0].programming_j == 90 * cfg.device.e_reset);
    double first5 = 0.0, last5 = 0.0;
    for (int e = 1; e <= 30; ++e) {
        CHECK(out.epoch_energy[e].programming_j == 45 * cfg.device.e_partial_set);
        CHECK(out.epoch_energy[e].set_pulses == 45);
        if (e <= 5) first5 += out.epoch_energy[e].read_j;
        if (e > 25) last5 += out.epoch_energy[e].read_j;
    }
    CHECK(last5 > first5);
}

TEST_CASE("binary devices learn worse, quasi-continuous noiseless ones at least as well") {
    ExperimentConfig cfg;
    cfg.trials = 5;
    cfg.train.epochs = 30;
    TrialOptions opt;
    opt.log_epochs = {30};
    opt.compute_ais = false;
    opt.run_baseline = false;

    auto final_metrics = [&](double sigma_c2c, int n_levels) {
        ExperimentConfig c = cfg;
        c.device.sigma_c2c = sigma_c2c;
        c.device.n_levels = n_levels;
        std::vector<std::pair<double, double>> out; // (kl, err) per trial
        for (int t = 0; t < c.trials; ++t) {
            const TrialOutput trial = run_trial(c, t, opt);
            out.emplace_back(trial.hardware.back().kl_exact, trial.hardware.back().err_rate);
        }
        return out;
    };

    const auto defaults = final_metrics(cfg.device.sigma_c2c, cfg.device.n_levels);
    const auto binary = final_metrics(cfg.device.sigma_c2c, 1);
    const auto fine = final_metrics(0.0, 400);

    int binary_worse = 0, fine_not_worse = 0;
    for (int t = 0; t < cfg.trials; ++t) {
        if (binary[t].second > defaults[t].second) ++binary_worse;
        if (fine[t].first <= defaults[t].first) ++fine_not_worse;
    }
    CHECK(binary_worse >= 3);
    CHECK(fine_not_worse >= 3);
}

TEST_CASE("energy report carries presets and the simulated means") {
    const fs::path dir = fresh_dir("ereport");
    ExperimentConfig cfg = small_config(dir);
    cfg.trials = 2;
    cfg.train.epochs = 5;
    const EnergyReportResult r = run_energy_report(cfg);
    CHECK(r.sim_trials == 2);
    CHECK(r.sim_prog_mean_j ==
          doctest::Approx(45 * cfg.device.e_partial_set).epsilon(1e-14));
    CHECK(r.sim_read_mean_j > 0.0);
    CHECK(fs::exists(dir / "energy_report.json"));

    const auto j = energy_report_json(r);
    CHECK(j.at("presets").at("vector_processor_64bit").at("logic_j").get<double>() == 433.5e-9);
    CHECK(j.at("presets").at("pcm_1gb_array").at("neuromorphic").at("total_j").get<double>() ==
          r.headline.pcm_1gb.total_j);
    CHECK(j.at("simulated").at("total_mean_j_per_epoch").get<double>() == r.sim_total_mean_j);
}
