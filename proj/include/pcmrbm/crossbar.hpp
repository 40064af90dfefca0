#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pcmrbm/device.hpp"
#include "pcmrbm/energy.hpp"
#include "pcmrbm/matrix.hpp"
#include "pcmrbm/rng.hpp"

namespace pcmrbm {

// Crossbar of differential 2-PCM synapses. Weight (i,j) is encoded as the
// conductance difference of a plus and a minus cell, standardized by the
// normalization constants m_norm / s_norm that are computed once from the
// freshly initialized array and frozen for the rest of training.
class SynapseArray {
public:
    // Resets all 2*Nv*Nh cells, then computes m_norm = mean(G+ - G-) and
    // s_norm = population stddev of the same. Throws ZeroSpread when the
    // computed spread is zero and no override is given.
    static SynapseArray initialize(int n_visible, int n_hidden, const DeviceParams& params,
                                   Rng& rng, EnergyLedger* ledger = nullptr,
                                   std::optional<double> s_norm_override = std::nullopt);

    // Rebuilds an array from checkpointed state.
    static SynapseArray from_state(int n_visible, int n_hidden, const DeviceParams& params,
                                   std::vector<PcmCell> plus, std::vector<PcmCell> minus,
                                   double m_norm, double s_norm);

    int n_visible() const { return nv_; }
    int n_hidden() const { return nh_; }
    double m_norm() const { return m_norm_; }
    double s_norm() const { return s_norm_; }
    const DeviceParams& params() const { return params_; }

    const PcmCell& plus(int i, int j) const { return plus_[idx(i, j)]; }
    const PcmCell& minus(int i, int j) const { return minus_[idx(i, j)]; }

    // Mapped weight snapshot: w_ij = ((G+ij - G-ij) - m_norm) / s_norm.
    // Pure read; no energy accrual.
    Matrix weights() const;

    // Routes exactly one gradual SET pulse to the plus cell (direction > 0)
    // or the minus cell (direction < 0) of synapse (i,j).
    void apply_update(int i, int j, int direction, Rng& rng, EnergyLedger& ledger);

    // Physical read of the hidden-side preactivation W^T v for a binary
    // visible vector. Both differential cells of every synapse on an active
    // row conduct, so both are charged read energy.
    std::vector<double> read_hidden_preactivation(std::span<const std::uint8_t> v,
                                                  EnergyLedger& ledger) const;
    // Symmetric visible-side read, W h over active columns.
    std::vector<double> read_visible_preactivation(std::span<const std::uint8_t> h,
                                                   EnergyLedger& ledger) const;

    // Read energy of one pass without performing it; used by the trainer to
    // attribute per-pass charges.
    double row_read_energy(std::span<const std::uint8_t> v) const;
    double col_read_energy(std::span<const std::uint8_t> h) const;

    // Sum of (G+ + G-) per row / per column, for energy accounting.
    std::vector<double> row_conductance_sums() const;
    std::vector<double> col_conductance_sums() const;

private:
    SynapseArray() = default;

    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(nh_) + j;
    }

    int nv_ = 0;
    int nh_ = 0;
    DeviceParams params_;
    std::vector<PcmCell> plus_;  // row-major [nv x nh]
    std::vector<PcmCell> minus_;
    double m_norm_ = 0.0;
    double s_norm_ = 0.0;
};

} // namespace pcmrbm
