#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <json.hpp>

#include "pcmrbm/config.hpp"
#include "pcmrbm/energy.hpp"

namespace pcmrbm {

struct EpochMetrics {
    int epoch = 0;
    double kl_exact = 0.0;
    double kl_ais = 0.0;
    double err_rate = 0.0;
    double prog_energy_j = 0.0;
    double read_energy_j = 0.0;
    double mean_w = 0.0;
    double min_w = 0.0;
    double max_w = 0.0;
};

struct ConductanceRow {
    int epoch = 0;
    int row = 0;
    int col = 0;
    double g_plus = 0.0;
    double g_minus = 0.0;
    double weight = 0.0;
};

// One trial: a hardware training run and (optionally) the 64-bit reference
// trainer driven from the same seed and the same initial weights.
struct TrialOutput {
    std::vector<std::string> dataset_patterns; // stored patterns as 0/1 strings
    std::vector<EpochMetrics> hardware;
    std::vector<EpochMetrics> baseline;
    std::vector<ConductanceRow> conductances;
    nlohmann::json final_array;
    std::vector<EpochEnergy> epoch_energy; // index = epoch (0 is initialization)
};

struct TrialOptions {
    std::vector<int> log_epochs; // empty = every epoch from 0 to epochs
    bool compute_ais = true;
    bool log_conductances = false;
    bool run_baseline = true;
    bool snapshot_final_array = false;
};

// Deterministic given (config, trial index); trials are independent, so the
// order they run in cannot change any result.
TrialOutput run_trial(const ExperimentConfig& cfg, int trial, const TrialOptions& opt);

struct TrainingExperimentResult {
    std::vector<TrialOutput> trials;
};

struct PatternSweepResult {
    struct Cell {
        int n_patterns = 0;
        std::vector<TrialOutput> trials;
    };
    std::vector<Cell> cells;
};

struct DeviceSweepResult {
    struct Cell {
        double sigma_c2c = 0.0;
        int n_levels = 0;
        std::vector<TrialOutput> trials;
    };
    std::vector<Cell> cells;
};

struct EnergyReportResult {
    HeadlineComparison headline;
    // simulated per-epoch means over training epochs (initialization epoch
    // excluded), averaged across trials
    int sim_trials = 0;
    int sim_epochs = 0;
    double sim_prog_mean_j = 0.0;
    double sim_read_mean_j = 0.0;
    double sim_total_mean_j = 0.0;
};

// Per-epoch KL/error/energy curves for hardware and baseline, all epochs,
// with conductance evolution and final array snapshots on disk.
TrainingExperimentResult run_training_experiment(const ExperimentConfig& cfg);

// Error rate at the configured checkpoint epochs for every stored-pattern
// count, hardware vs baseline.
PatternSweepResult run_pattern_sweep(const ExperimentConfig& cfg);

// Final KL and error rate over the sigma_c2c x n_levels grid.
DeviceSweepResult run_device_sweep(const ExperimentConfig& cfg);

// Analytical hardware presets plus a simulated run with the configured
// device. Writes energy_report.json when out_dir is non-empty.
EnergyReportResult run_energy_report(const ExperimentConfig& cfg, bool simulate = true);

nlohmann::json energy_report_json(const EnergyReportResult& r);

// %.17g rendering used for every floating-point value written to CSV, so
// identical runs produce byte-identical files.
std::string csv_double(double x);

double vec_mean(const std::vector<double>& xs);
double vec_sample_std(const std::vector<double>& xs);

} // namespace pcmrbm
