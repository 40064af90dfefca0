// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit code 0 iff all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "pcmrbm/analysis.hpp"
#include "pcmrbm/config.hpp"
#include "pcmrbm/dataset.hpp"
#include "pcmrbm/energy.hpp"
#include "pcmrbm/experiments.hpp"
#include "pcmrbm/rbm.hpp"

using namespace pcmrbm;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what, const std::string& detail) {
    std::printf("[%s] criterion %d: %s  (%s)\n", pass ? "PASS" : "FAIL", criterion, what.c_str(),
                detail.c_str());
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof buf, f, args);
    va_end(args);
    return buf;
}

// ---- criterion 1: exact distribution vs brute-force enumeration ----------

std::pair<double, std::vector<double>> naive_enumeration(const RbmModel& m) {
    const std::uint32_t nv_states = 1u << m.n_visible;
    const std::uint32_t nh_states = 1u << m.n_hidden;
    std::vector<double> pv(nv_states, 0.0);
    double z = 0.0;
    for (std::uint32_t vi = 0; vi < nv_states; ++vi) {
        const Pattern v = Pattern::from_index(vi, m.n_visible);
        for (std::uint32_t hi = 0; hi < nh_states; ++hi) {
            const Pattern h = Pattern::from_index(hi, m.n_hidden);
            const double boltz = std::exp(-rbm_energy(m, v.pixels, h.pixels));
            z += boltz;
            pv[vi] += boltz;
        }
    }
    for (double& x : pv) x /= z;
    return {z, pv};
}

void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(31415);
    double worst = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        const int nv = 1 + static_cast<int>(rng.below(4));
        const int nh = 1 + static_cast<int>(rng.below(4));
        RbmModel m = RbmModel::zero(nv, nh);
        for (auto& x : m.w.data) x = 1.5 * rng.normal();
        for (auto& x : m.visible_bias) x = 0.5 * rng.normal();
        for (auto& x : m.hidden_bias) x = 0.5 * rng.normal();
        const ModelDistribution d = exact_distribution(m);
        const auto [z, pv] = naive_enumeration(m);
        worst = std::max(worst, std::abs(std::exp(d.log_z) - z) / z);
        for (std::size_t v = 0; v < pv.size(); ++v)
            worst = std::max(worst, std::abs(d.p_v[v] - pv[v]) / pv[v]);
    }
    const double dt = seconds_since(t0);
    report(1, worst < 1e-10 && dt < 10.0,
           "exact distribution matches 2^(Nv+Nh) enumeration on 50 random models",
           fmt("worst relative error %.3g, %.2fs", worst, dt));
}

// ---- criterion 2: AIS accuracy on trained models --------------------------

SynapseArray trained_array(const ExperimentConfig& cfg, int trial) {
    TrialOptions opt;
    opt.log_epochs = {cfg.train.epochs};
    opt.compute_ais = false;
    opt.run_baseline = false;
    opt.snapshot_final_array = true;
    return array_from_json(run_trial(cfg, trial, opt).final_array);
}

void criterion_2() {
    const auto t0 = std::chrono::steady_clock::now();

    const RbmModel zero = RbmModel::zero(9, 5);
    Rng zrng(1);
    const double ais_zero = ais_log_z(zero, AisConfig{}, zrng);
    const bool zero_exact = std::abs(ais_zero - 14.0 * std::log(2.0)) < 1e-12;

    ExperimentConfig cfg;
    cfg.train.epochs = 10;
    double worst = 0.0;
    for (int s = 0; s < 20; ++s) {
        const SynapseArray arr = trained_array(cfg, s);
        const RbmModel m = RbmModel::from_weights(arr.weights());
        const ModelDistribution d = exact_distribution(m);
        Rng rng(7000 + s);
        worst = std::max(worst, std::abs(ais_log_z(m, AisConfig{}, rng) - d.log_z));
    }
    const double dt = seconds_since(t0);
    report(2, zero_exact && worst < 0.1 && dt < 60.0,
           "AIS log Z within 0.1 nats of exact on 20 trained models, zero-coupling exact",
           fmt("worst |ais-exact| %.4f nats, zero-case offset %.2g, %.1fs", worst,
               std::abs(ais_zero - 14.0 * std::log(2.0)), dt));
}

// ---- criterion 3: untrained closed forms ----------------------------------

void criterion_3() {
    ExperimentConfig cfg;
    cfg.trials = 1;
    cfg.train.epochs = 0;
    cfg.device.sigma_d2d = 0.0;
    cfg.s_norm_override = 1e-6;
    TrialOptions opt;
    opt.compute_ais = false;
    opt.run_baseline = false;
    const TrialOutput out = run_trial(cfg, 0, opt);
    const double kl = out.hardware.at(0).kl_exact;
    const double err = out.hardware.at(0).err_rate;
    const double expect = std::log(512.0 / 5.0);
    report(3, std::abs(kl - expect) < 1e-9 && err == 0.5,
           "zero-weight override: KL = ln(512/5), recovery error = 1/2 exactly",
           fmt("KL %.12f vs %.12f, err %.17g", kl, expect, err));
}

// ---- criterion 4: KL improves by epoch 10 ----------------------------------

void criterion_4() {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentConfig cfg;
    cfg.train.epochs = 10;
    TrialOptions opt;
    opt.log_epochs = {0, 10};
    opt.compute_ais = false;
    opt.run_baseline = false;
    double kl0 = 0.0, kl10 = 0.0;
    for (int t = 0; t < cfg.trials; ++t) {
        const TrialOutput out = run_trial(cfg, t, opt);
        kl0 += out.hardware.at(0).kl_exact / cfg.trials;
        kl10 += out.hardware.at(1).kl_exact / cfg.trials;
    }
    const double dt = seconds_since(t0);
    report(4, kl10 < kl0 && dt < 60.0,
           "mean exact KL at epoch 10 below epoch 0 (5 patterns, 5 trials, defaults)",
           fmt("KL %.3f -> %.3f nats, %.1fs", kl0, kl10, dt));
}

// ---- criteria 5 & 6: error reduction, success, unlearning ------------------

double argmax_success(const ModelDistribution& dist, const std::vector<Pattern>& pats) {
    int ok = 0, total = 0;
    for (const Pattern& p : pats)
        for (int px = 0; px < p.size(); ++px) {
            Pattern mask = Pattern::from_index(0, p.size());
            mask.pixels[px] = 1;
            const PixelPosterior post = infer_missing_pixels(dist, p, mask);
            ok += ((post.p_white[0] > 0.5) == (p.pixels[px] != 0));
            ++total;
        }
    return static_cast<double>(ok) / total;
}

struct SweepData {
    std::map<int, double> err0, err30, success30; // per pattern count
    int worse_at_70 = 0;                          // n=5 trials with err70 > err10
    double pcm_err10 = 0.0, pcm_err30 = 0.0, pcm_err70 = 0.0;
    double baseline_err70 = 0.0;
    std::vector<EpochEnergy> epoch_energy_30; // training epochs of the n=5 runs
};

SweepData run_claims_sweep() {
    SweepData data;
    ExperimentConfig base;

    for (int np : {2, 3, 4, 5}) {
        ExperimentConfig cfg = base;
        cfg.n_patterns = {np};
        cfg.train.epochs = 30;
        TrialOptions opt;
        opt.log_epochs = {0, 30};
        opt.compute_ais = false;
        opt.run_baseline = false;
        opt.snapshot_final_array = true;
        for (int t = 0; t < cfg.trials; ++t) {
            const TrialOutput out = run_trial(cfg, t, opt);
            data.err0[np] += out.hardware.at(0).err_rate / cfg.trials;
            data.err30[np] += out.hardware.at(1).err_rate / cfg.trials;
            const SynapseArray arr = array_from_json(out.final_array);
            const ModelDistribution dist = exact_distribution(RbmModel::from_weights(arr.weights()));
            Rng drng(mix_seed(mix_seed(cfg.seed, 1000 + t), 1));
            const DataSet ds = make_training_set(np, drng);
            data.success30[np] += argmax_success(dist, ds.patterns) / cfg.trials;
        }
    }

    ExperimentConfig cfg = base;
    cfg.n_patterns = {5};
    cfg.train.epochs = 70;
    TrialOptions opt;
    opt.log_epochs = {0, 10, 30, 70};
    opt.compute_ais = false;
    for (int t = 0; t < cfg.trials; ++t) {
        const TrialOutput out = run_trial(cfg, t, opt);
        if (out.hardware.at(3).err_rate > out.hardware.at(1).err_rate) ++data.worse_at_70;
        data.pcm_err10 += out.hardware.at(1).err_rate / cfg.trials;
        data.pcm_err30 += out.hardware.at(2).err_rate / cfg.trials;
        data.pcm_err70 += out.hardware.at(3).err_rate / cfg.trials;
        data.baseline_err70 += out.baseline.at(3).err_rate / cfg.trials;
        for (std::size_t e = 1; e <= 30; ++e)
            data.epoch_energy_30.push_back(out.epoch_energy.at(e));
    }
    return data;
}

void criterion_5(const SweepData& d) {
    bool band = true, success = true;
    std::string detail;
    for (int np : {2, 3, 4, 5}) {
        const double ratio = d.err0.at(np) / d.err30.at(np);
        band &= ratio >= 2.0 && ratio <= 10.0;
        success &= d.success30.at(np) > 0.8;
        detail += fmt("n=%d ratio %.2f succ %.3f; ", np, ratio, d.success30.at(np));
    }
    report(5, band && success,
           "untrained/trained error ratio in [2,10] and completion success > 0.8 at 30 epochs",
           detail + "band target [2,10], success target >0.8");
}

void criterion_6(const SweepData& d) {
    const double pcm_best = std::min({d.pcm_err10, d.pcm_err30, d.pcm_err70});
    const bool unlearning = d.worse_at_70 >= 3;
    const bool ordering = d.baseline_err70 < pcm_best;
    report(6, unlearning && ordering,
           "error at 70 epochs exceeds epoch 10 (majority), 64-bit at 70 beats best 2-PCM",
           fmt("worse@70 in %d/5 trials; pcm err 10/30/70 = %.3f/%.3f/%.3f; baseline@70 %.3f",
               d.worse_at_70, d.pcm_err10, d.pcm_err30, d.pcm_err70, d.baseline_err70));
}

// ---- criterion 7: energy arithmetic ----------------------------------------

void criterion_7(const SweepData& d) {
    const ConventionalBreakdown conv = conventional_epoch_energy(ConventionalHwModel{});
    const bool conv_exact = conv.v2h_ops == 73.125 && conv.h2v_ops == 45.0 &&
                            4 * conv.v2h_ops + 3 * conv.h2v_ops == 427.5 &&
                            conv.update_ops == 6.0 && conv.logic_ops == 433.5 &&
                            conv.logic_j == 433.5e-9;
    const bool conv_total = std::abs(conv.total_j - 910e-9) <= 0.01 * 910e-9;
    const bool set_exact = set_pulse_energy(PcmArrayModel{}) == 72e-12;

    const DeviceParams dev;
    bool prog_exact = !d.epoch_energy_30.empty();
    double total_mean = 0.0;
    for (const EpochEnergy& e : d.epoch_energy_30) {
        prog_exact &= e.programming_j == 45 * dev.e_partial_set && e.programming_j == 3.24e-9;
        total_mean += e.total_j();
    }
    total_mean /= static_cast<double>(d.epoch_energy_30.size());
    const bool band = total_mean >= 4e-9 && total_mean <= 9e-9;

    report(7, conv_exact && conv_total && set_exact && prog_exact && band,
           "energy regression: op counts exact, 910 nJ within 1%, 72 pJ and 3.24 nJ exact, "
           "simulated epoch mean in [4,9] nJ",
           fmt("logic %.4g nJ, total %.4g nJ, set %.4g pJ, simulated mean %.3f nJ/epoch",
               conv.logic_j * 1e9, conv.total_j * 1e9, set_pulse_energy(PcmArrayModel{}) * 1e12,
               total_mean * 1e9));
}

// ---- criterion 8: byte-identical reruns ------------------------------------

void criterion_8() {
    const fs::path dir = fs::temp_directory_path() / "pcmrbm_acceptance_determinism";
    fs::remove_all(dir);
    ExperimentConfig cfg;
    cfg.trials = 2;
    cfg.train.epochs = 3;
    cfg.ais.n_temperatures = 200;
    cfg.ais.n_chains = 20;
    cfg.out_dir = dir.string();

    auto slurp_all = [&]() {
        std::map<std::string, std::string> files;
        for (const auto& entry : fs::directory_iterator(dir)) {
            std::ifstream in(entry.path(), std::ios::binary);
            std::ostringstream ss;
            ss << in.rdbuf();
            files[entry.path().filename().string()] = ss.str();
        }
        return files;
    };

    run_training_experiment(cfg);
    const auto first = slurp_all();
    run_training_experiment(cfg);
    const auto second = slurp_all();

    bool identical = first.size() == second.size() && !first.empty();
    for (const auto& [name, bytes] : first)
        identical = identical && second.contains(name) && second.at(name) == bytes;
    report(8, identical, "rerun with the same master seed is byte-identical",
           fmt("%zu output files compared", first.size()));
    fs::remove_all(dir);
}

} // namespace

int main() {
    std::printf("acceptance suite (defaults: 9x5 network, 5 trials, master seed %llu)\n",
                static_cast<unsigned long long>(ExperimentConfig{}.seed));
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    const SweepData sweep = run_claims_sweep();
    criterion_5(sweep);
    criterion_6(sweep);
    criterion_7(sweep);
    criterion_8();
    std::printf("%d/8 criteria passed\n", 8 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
