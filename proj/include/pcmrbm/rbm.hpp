#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pcmrbm/crossbar.hpp"
#include "pcmrbm/dataset.hpp"
#include "pcmrbm/energy.hpp"
#include "pcmrbm/matrix.hpp"
#include "pcmrbm/rng.hpp"

namespace pcmrbm {

// Two-layer binary RBM. Biases exist for generality in the exact-analysis
// code but stay fixed at zero during all training here.
struct RbmModel {
    int n_visible = 0;
    int n_hidden = 0;
    std::vector<double> visible_bias;
    std::vector<double> hidden_bias;
    Matrix w;

    static RbmModel zero(int n_visible, int n_hidden);
    static RbmModel from_weights(Matrix w);
};

// E(v,h) = -a.v - b.h - v^T W h
double rbm_energy(const RbmModel& m, std::span<const std::uint8_t> v,
                  std::span<const std::uint8_t> h);

std::vector<double> hidden_preactivation(const RbmModel& m, std::span<const std::uint8_t> v);
std::vector<double> visible_preactivation(const RbmModel& m, std::span<const std::uint8_t> h);

// component j is sigmoid(b_j + sum_i w_ij v_i)
std::vector<double> p_hidden_given_visible(const RbmModel& m, std::span<const std::uint8_t> v);
std::vector<double> p_visible_given_hidden(const RbmModel& m, std::span<const std::uint8_t> h);

std::vector<std::uint8_t> sample_hidden(const RbmModel& m, std::span<const std::uint8_t> v,
                                        Rng& rng);
std::vector<std::uint8_t> sample_visible(const RbmModel& m, std::span<const std::uint8_t> h,
                                         Rng& rng);

double sigmoid(double x);

// Contrastive-divergence statistics: <v h>_data from the clamped data pass,
// <v h>_model from the chain state after k alternating Gibbs steps seeded at
// each data vector, both averaged over the dataset. The model term pairs the
// final sampled visibles with the hidden conditionals p(h|v) of the last
// pass; the chain itself propagates binary samples throughout.
struct CdStats {
    Matrix data_term;
    Matrix model_term;

    Matrix delta() const;
};

struct CdOptions {
    int k = 3;
    bool mean_field_data_term = false; // accumulate p(h|v) instead of sampled h
};

// Software path: weights live in the model, no energy is accrued.
CdStats cd_statistics(const RbmModel& m, const DataSet& data, const CdOptions& opt, Rng& rng);

// Hardware path: weights are the array's mapped snapshot and each of the
// 2k+1 sampling passes per epoch is charged one array-read energy (the
// physical reads of a pass across the dataset, averaged).
CdStats cd_statistics(const SynapseArray& array, const DataSet& data, const CdOptions& opt,
                      Rng& rng, EnergyLedger& ledger);

// Sign-only update rule: one pulse per synapse, to G+ when the CD gradient
// is positive and to G- otherwise (zero routes to G-).
void apply_sign_updates(SynapseArray& array, const CdStats& stats, Rng& rng,
                        EnergyLedger& ledger);

// One hardware epoch: CD statistics at the current mapped weights, then 45
// (Nv*Nh) sign-routed pulses. Returns the statistics for logging.
CdStats train_epoch_hardware(SynapseArray& array, const DataSet& data, const CdOptions& opt,
                             Rng& rng, EnergyLedger& ledger);

// Full-magnitude gradient step on unbounded weights:
// w += eta * (data_term - model_term).
void apply_baseline_update(Matrix& w, const CdStats& stats, double eta);

// Reference trainer with 64-bit software weights.
CdStats train_epoch_baseline(Matrix& w, const DataSet& data, const CdOptions& opt, double eta,
                             Rng& rng);

// Learning rate that matches the hardware's first noiseless pulse:
// (G(1) - G(0)) / s_norm at the nominal endpoints.
double default_baseline_learning_rate(const DeviceParams& params, double s_norm);

} // namespace pcmrbm
