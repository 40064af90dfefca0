#include "pcmrbm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <string>

#include "pcmrbm/analysis.hpp"
#include "pcmrbm/errors.hpp"
#include "pcmrbm/rbm.hpp"

namespace pcmrbm {

namespace {

namespace fs = std::filesystem;

// stream indices for deriving the per-trial substreams; stable across
// versions, reproducibility depends on them
constexpr std::uint64_t kStreamDataset = 1;
constexpr std::uint64_t kStreamTraining = 2; // shared start for hardware and baseline
constexpr std::uint64_t kStreamAis = 3;
constexpr std::uint64_t kStreamArrayInit = 4;

std::uint64_t trial_seed(const ExperimentConfig& cfg, int trial) {
    return mix_seed(cfg.seed, 1000 + static_cast<std::uint64_t>(trial));
}

struct CsvFile {
    std::ofstream out;

    CsvFile(const fs::path& path, const std::string& header) : out(path) {
        if (!out) throw ConfigError("experiments: cannot write " + path.string());
        out << header << "\n";
    }
    void row(const std::string& line) { out << line << "\n"; }
};

std::string metrics_line_fixed(const EpochMetrics& m) {
    return std::to_string(m.epoch) + "," + csv_double(m.kl_exact) + "," +
           csv_double(m.kl_ais) + "," + csv_double(m.err_rate) + "," +
           csv_double(m.prog_energy_j) + "," + csv_double(m.read_energy_j);
}

const char* kFixedHeader = "epoch,kl_exact_nats,kl_ais_nats,err_rate,prog_energy_j,read_energy_j";

void write_trial_csv(const fs::path& path, const std::vector<EpochMetrics>& rows) {
    CsvFile csv(path, kFixedHeader);
    for (const auto& m : rows) csv.row(metrics_line_fixed(m));
}

void write_train_log_csv(const fs::path& path, const std::vector<EpochMetrics>& rows) {
    CsvFile csv(path,
                "epoch,kl_estimate,kl_exact,programming_energy_j,read_energy_j,mean_w,min_w,max_w");
    for (const auto& m : rows)
        csv.row(std::to_string(m.epoch) + "," + csv_double(m.kl_ais) + "," +
                csv_double(m.kl_exact) + "," + csv_double(m.prog_energy_j) + "," +
                csv_double(m.read_energy_j) + "," + csv_double(m.mean_w) + "," +
                csv_double(m.min_w) + "," + csv_double(m.max_w));
}

void write_conductances_csv(const fs::path& path, const std::vector<ConductanceRow>& rows) {
    CsvFile csv(path, "epoch,row,col,g_plus,g_minus,weight");
    for (const auto& r : rows)
        csv.row(std::to_string(r.epoch) + "," + std::to_string(r.row) + "," +
                std::to_string(r.col) + "," + csv_double(r.g_plus) + "," +
                csv_double(r.g_minus) + "," + csv_double(r.weight));
}

fs::path prepare_out_dir(const ExperimentConfig& cfg) {
    fs::path dir(cfg.out_dir);
    fs::create_directories(dir);
    save_config(cfg, dir / "config.json");
    return dir;
}

// metric rows at the logged epochs, pulled out per synapse kind for the
// aggregate files
std::vector<double> column(const std::vector<TrialOutput>& trials, bool baseline, int epoch,
                           double EpochMetrics::* field) {
    std::vector<double> xs;
    xs.reserve(trials.size());
    for (const auto& t : trials) {
        const auto& rows = baseline ? t.baseline : t.hardware;
        for (const auto& m : rows)
            if (m.epoch == epoch) {
                xs.push_back(m.*field);
                break;
            }
    }
    return xs;
}

std::vector<int> logged_epochs(const std::vector<TrialOutput>& trials, bool baseline) {
    std::vector<int> out;
    if (trials.empty()) return out;
    for (const auto& m : (baseline ? trials.front().baseline : trials.front().hardware))
        out.push_back(m.epoch);
    return out;
}

} // namespace

std::string csv_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double vec_mean(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

double vec_sample_std(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    const double m = vec_mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

TrialOutput run_trial(const ExperimentConfig& cfg, int trial, const TrialOptions& opt) {
    cfg.validate();
    const std::uint64_t ts = trial_seed(cfg, trial);

    Rng dataset_rng(mix_seed(ts, kStreamDataset));
    Rng init_rng(mix_seed(ts, kStreamArrayInit));
    Rng hw_rng(mix_seed(ts, kStreamTraining));
    Rng bl_rng(mix_seed(ts, kStreamTraining)); // same stream: both trainers see
                                               // identical sampling noise
    const std::uint64_t ais_base = mix_seed(ts, kStreamAis) + cfg.ais.seed;

    int side = 3;
    if (cfg.n_visible != 9) {
        side = static_cast<int>(std::lround(std::sqrt(cfg.n_visible)));
        if (side * side != cfg.n_visible)
            throw ConfigError("experiments: n_visible must be a square for bars-and-stripes");
    }
    const DataSet data =
        make_training_set(cfg.single_n_patterns(), dataset_rng, side, cfg.multiset_sampling);

    EnergyLedger ledger;
    SynapseArray array = SynapseArray::initialize(cfg.n_visible, cfg.n_hidden, cfg.device,
                                                  init_rng, &ledger, cfg.s_norm_override);
    ledger.end_epoch(); // epoch 0 bucket: the initialization RESETs

    Matrix bl_w = array.weights();
    const double eta = cfg.train.baseline_learning_rate > 0.0
                           ? cfg.train.baseline_learning_rate
                           : default_baseline_learning_rate(cfg.device, array.s_norm());

    std::set<int> log_set(opt.log_epochs.begin(), opt.log_epochs.end());
    auto should_log = [&](int epoch) { return log_set.empty() || log_set.contains(epoch); };

    TrialOutput out;
    for (const Pattern& p : data.patterns) out.dataset_patterns.push_back(p.to_string());
    const CdOptions cd{cfg.train.k, cfg.train.mean_field_data_term};

    auto log_epoch = [&](int epoch) {
        if (!should_log(epoch)) return;
        const EpochEnergy energy = ledger.history().at(epoch);

        // hardware
        {
            const Matrix w = array.weights();
            const RbmModel model = RbmModel::from_weights(w);
            const ModelDistribution dist = exact_distribution(model);
            EpochMetrics m;
            m.epoch = epoch;
            m.kl_exact = kl_divergence(data.empirical, dist);
            if (opt.compute_ais) {
                Rng ais_rng(mix_seed(ais_base, static_cast<std::uint64_t>(epoch) * 2));
                m.kl_ais = kl_divergence_ais(model, data, ais_log_z(model, cfg.ais, ais_rng));
            }
            m.err_rate = recovery_error_rate(dist, data.patterns);
            m.prog_energy_j = energy.programming_j;
            m.read_energy_j = energy.read_j;
            m.mean_w = w.mean();
            m.min_w = w.min();
            m.max_w = w.max();
            out.hardware.push_back(m);
        }
        if (opt.run_baseline) {
            const RbmModel model = RbmModel::from_weights(bl_w);
            const ModelDistribution dist = exact_distribution(model);
            EpochMetrics m;
            m.epoch = epoch;
            m.kl_exact = kl_divergence(data.empirical, dist);
            if (opt.compute_ais) {
                Rng ais_rng(mix_seed(ais_base, static_cast<std::uint64_t>(epoch) * 2 + 1));
                m.kl_ais = kl_divergence_ais(model, data, ais_log_z(model, cfg.ais, ais_rng));
            }
            m.err_rate = recovery_error_rate(dist, data.patterns);
            m.mean_w = bl_w.mean();
            m.min_w = bl_w.min();
            m.max_w = bl_w.max();
            out.baseline.push_back(m);
        }
        if (opt.log_conductances) {
            const Matrix w = array.weights();
            for (int i = 0; i < array.n_visible(); ++i)
                for (int j = 0; j < array.n_hidden(); ++j)
                    out.conductances.push_back(
                        {epoch, i, j, array.plus(i, j).g, array.minus(i, j).g, w(i, j)});
        }
    };

    log_epoch(0);
    for (int epoch = 1; epoch <= cfg.train.epochs; ++epoch) {
        train_epoch_hardware(array, data, cd, hw_rng, ledger);
        ledger.end_epoch();
        if (opt.run_baseline) train_epoch_baseline(bl_w, data, cd, eta, bl_rng);
        log_epoch(epoch);
    }

    out.epoch_energy = ledger.history();
    if (opt.snapshot_final_array) out.final_array = array_to_json(array);
    return out;
}

TrainingExperimentResult run_training_experiment(const ExperimentConfig& cfg) {
    ExperimentConfig c = cfg;
    c.experiment = "train";
    c.validate();
    const fs::path dir = prepare_out_dir(c);

    TrialOptions opt;
    opt.log_conductances = true;
    opt.snapshot_final_array = true;

    TrainingExperimentResult result;
    for (int t = 0; t < c.trials; ++t) {
        TrialOutput trial = run_trial(c, t, opt);
        const std::string i = std::to_string(t);
        write_trial_csv(dir / ("trial_" + i + ".csv"), trial.hardware);
        write_trial_csv(dir / ("baseline_" + i + ".csv"), trial.baseline);
        write_train_log_csv(dir / ("train_log_" + i + ".csv"), trial.hardware);
        write_conductances_csv(dir / ("conductances_" + i + ".csv"), trial.conductances);
        std::ofstream snap(dir / ("array_final_" + i + ".json"));
        snap << trial.final_array.dump(2) << "\n";
        std::ofstream ds(dir / ("dataset_" + i + ".json"));
        ds << nlohmann::json{{"patterns", trial.dataset_patterns}}.dump(2) << "\n";
        result.trials.push_back(std::move(trial));
    }

    CsvFile agg(dir / "aggregate.csv",
                "synapse,epoch,kl_exact_mean,kl_exact_std,kl_ais_mean,kl_ais_std,"
                "err_rate_mean,err_rate_std,prog_energy_mean_j,read_energy_mean_j");
    for (const bool baseline : {false, true}) {
        for (int epoch : logged_epochs(result.trials, baseline)) {
            const auto kl = column(result.trials, baseline, epoch, &EpochMetrics::kl_exact);
            const auto kla = column(result.trials, baseline, epoch, &EpochMetrics::kl_ais);
            const auto err = column(result.trials, baseline, epoch, &EpochMetrics::err_rate);
            const auto prog = column(result.trials, baseline, epoch, &EpochMetrics::prog_energy_j);
            const auto read = column(result.trials, baseline, epoch, &EpochMetrics::read_energy_j);
            agg.row(std::string(baseline ? "baseline" : "pcm") + "," + std::to_string(epoch) +
                    "," + csv_double(vec_mean(kl)) + "," + csv_double(vec_sample_std(kl)) + "," +
                    csv_double(vec_mean(kla)) + "," + csv_double(vec_sample_std(kla)) + "," +
                    csv_double(vec_mean(err)) + "," + csv_double(vec_sample_std(err)) + "," +
                    csv_double(vec_mean(prog)) + "," + csv_double(vec_mean(read)));
        }
    }
    return result;
}

PatternSweepResult run_pattern_sweep(const ExperimentConfig& cfg) {
    ExperimentConfig c = cfg;
    c.experiment = "sweep-patterns";
    c.validate();
    if (c.checkpoints.empty()) throw ConfigError("sweep-patterns: checkpoints must not be empty");
    const fs::path dir = prepare_out_dir(c);

    std::vector<int> log_epochs = {0};
    log_epochs.insert(log_epochs.end(), c.checkpoints.begin(), c.checkpoints.end());

    PatternSweepResult result;
    for (int n : c.n_patterns) {
        ExperimentConfig sub = c;
        sub.n_patterns = {n};
        sub.train.epochs = *std::max_element(c.checkpoints.begin(), c.checkpoints.end());

        TrialOptions opt;
        opt.log_epochs = log_epochs;

        PatternSweepResult::Cell cell;
        cell.n_patterns = n;
        const fs::path cell_dir = dir / ("n" + std::to_string(n));
        fs::create_directories(cell_dir);
        for (int t = 0; t < c.trials; ++t) {
            TrialOutput trial = run_trial(sub, t, opt);
            const std::string i = std::to_string(t);
            write_trial_csv(cell_dir / ("trial_" + i + ".csv"), trial.hardware);
            write_trial_csv(cell_dir / ("baseline_" + i + ".csv"), trial.baseline);
            cell.trials.push_back(std::move(trial));
        }
        result.cells.push_back(std::move(cell));
    }

    CsvFile agg(dir / "aggregate.csv",
                "n_patterns,synapse,epoch,err_rate_mean,err_rate_std,kl_exact_mean,kl_exact_std");
    for (const auto& cell : result.cells)
        for (const bool baseline : {false, true})
            for (int epoch : logged_epochs(cell.trials, baseline)) {
                const auto err = column(cell.trials, baseline, epoch, &EpochMetrics::err_rate);
                const auto kl = column(cell.trials, baseline, epoch, &EpochMetrics::kl_exact);
                agg.row(std::to_string(cell.n_patterns) + "," +
                        (baseline ? "baseline" : "pcm") + "," + std::to_string(epoch) + "," +
                        csv_double(vec_mean(err)) + "," + csv_double(vec_sample_std(err)) + "," +
                        csv_double(vec_mean(kl)) + "," + csv_double(vec_sample_std(kl)));
            }
    return result;
}

DeviceSweepResult run_device_sweep(const ExperimentConfig& cfg) {
    ExperimentConfig c = cfg;
    c.experiment = "sweep-device";
    c.validate();
    const fs::path dir = prepare_out_dir(c);

    DeviceSweepResult result;
    for (double sigma : c.sweep.sigma_c2c)
        for (int levels : c.sweep.n_levels) {
            ExperimentConfig sub = c;
            sub.device.sigma_c2c = sigma;
            sub.device.n_levels = levels;

            TrialOptions opt;
            opt.log_epochs = {0, sub.train.epochs};
            opt.run_baseline = false;

            DeviceSweepResult::Cell cell;
            cell.sigma_c2c = sigma;
            cell.n_levels = levels;

            char name[64];
            std::snprintf(name, sizeof name, "s%g_l%d", sigma, levels);
            const fs::path cell_dir = dir / name;
            fs::create_directories(cell_dir);
            for (int t = 0; t < c.trials; ++t) {
                TrialOutput trial = run_trial(sub, t, opt);
                write_trial_csv(cell_dir / ("trial_" + std::to_string(t) + ".csv"),
                                trial.hardware);
                cell.trials.push_back(std::move(trial));
            }
            result.cells.push_back(std::move(cell));
        }

    CsvFile agg(dir / "aggregate.csv",
                "sigma_c2c,n_levels,epoch,kl_exact_mean,kl_exact_std,err_rate_mean,err_rate_std");
    for (const auto& cell : result.cells)
        for (int epoch : logged_epochs(cell.trials, false)) {
            const auto kl = column(cell.trials, false, epoch, &EpochMetrics::kl_exact);
            const auto err = column(cell.trials, false, epoch, &EpochMetrics::err_rate);
            agg.row(csv_double(cell.sigma_c2c) + "," + std::to_string(cell.n_levels) + "," +
                    std::to_string(epoch) + "," + csv_double(vec_mean(kl)) + "," +
                    csv_double(vec_sample_std(kl)) + "," + csv_double(vec_mean(err)) + "," +
                    csv_double(vec_sample_std(err)));
        }
    return result;
}

EnergyReportResult run_energy_report(const ExperimentConfig& cfg, bool simulate) {
    ExperimentConfig c = cfg;
    c.experiment = "energy-report";
    c.validate();

    EnergyReportResult r;
    ConventionalHwModel conv;
    conv.dataset_size = c.single_n_patterns();
    conv.n_visible = c.n_visible;
    conv.n_hidden = c.n_hidden;
    conv.k = c.train.k;
    r.headline = headline_comparison(conv);

    if (simulate) {
        TrialOptions opt;
        opt.compute_ais = false;
        opt.run_baseline = false;
        std::vector<double> prog, read, total;
        for (int t = 0; t < c.trials; ++t) {
            const TrialOutput trial = run_trial(c, t, opt);
            // epoch 0 is the initialization bucket; average training epochs
            for (std::size_t e = 1; e < trial.epoch_energy.size(); ++e) {
                prog.push_back(trial.epoch_energy[e].programming_j);
                read.push_back(trial.epoch_energy[e].read_j);
                total.push_back(trial.epoch_energy[e].total_j());
            }
        }
        r.sim_trials = c.trials;
        r.sim_epochs = c.train.epochs;
        r.sim_prog_mean_j = vec_mean(prog);
        r.sim_read_mean_j = vec_mean(read);
        r.sim_total_mean_j = vec_mean(total);
    }

    if (!c.out_dir.empty()) {
        const fs::path dir = prepare_out_dir(c);
        std::ofstream out(dir / "energy_report.json");
        out << energy_report_json(r).dump(2) << "\n";
    }
    return r;
}

nlohmann::json energy_report_json(const EnergyReportResult& r) {
    using nlohmann::json;
    auto conv = [](const ConventionalBreakdown& b) {
        return json{{"v2h_ops", b.v2h_ops},     {"h2v_ops", b.h2v_ops},
                    {"update_ops", b.update_ops}, {"logic_ops", b.logic_ops},
                    {"logic_j", b.logic_j},       {"memory_j", b.memory_j},
                    {"total_j", b.total_j}};
    };
    const HeadlineComparison& h = r.headline;
    json j;
    j["presets"]["vector_processor_64bit"] = conv(h.conventional_64bit);
    j["presets"]["vector_processor_64bit"]["reference_total_j"] = h.ref_conventional_64bit_j;
    j["presets"]["vector_processor_16bit"] = conv(h.conventional_16bit);
    j["presets"]["vector_processor_16bit"]["reference_total_j"] = h.ref_conventional_16bit_j;
    j["presets"]["pcm_1gb_array"] = {
        {"assumptions",
         {{"n_weights", h.n_weights},
          {"bits_per_weight", h.bits_per_weight},
          {"bits_moved", h.bits_moved},
          {"set_pulses", h.set_pulses},
          {"full_array_reads", h.full_array_reads},
          {"devices", h.devices},
          {"adc_t_read_s", h.adc_t_read}}},
        {"conventional",
         {{"logic_j", h.conv_1gb_logic_j},
          {"write_j", h.conv_1gb_write_j},
          {"read_j", h.conv_1gb_read_j},
          {"total_j", h.conv_1gb_total_j},
          {"reference_total_j", h.ref_conv_1gb_j},
          {"residual_vs_reference",
           h.conv_1gb_total_j / h.ref_conv_1gb_j - 1.0}}},
        {"neuromorphic",
         {{"set_j", h.pcm_1gb.set_j},
          {"read_j", h.pcm_1gb.read_j},
          {"total_j", h.pcm_1gb.total_j},
          {"reference_total_j", h.ref_pcm_1gb_j},
          {"residual_vs_reference", h.pcm_1gb.total_j / h.ref_pcm_1gb_j - 1.0}}},
        {"note", "residuals reflect op counts the reference figures do not itemize; "
                 "adjust the assumption fields to explore them"}};
    if (r.sim_trials > 0) {
        j["simulated"] = {{"trials", r.sim_trials},
                          {"epochs", r.sim_epochs},
                          {"programming_mean_j_per_epoch", r.sim_prog_mean_j},
                          {"read_mean_j_per_epoch", r.sim_read_mean_j},
                          {"total_mean_j_per_epoch", r.sim_total_mean_j}};
    }
    return j;
}

} // namespace pcmrbm
