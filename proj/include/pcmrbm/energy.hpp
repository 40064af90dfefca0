#pragma once

#include <cstdint>
#include <vector>

namespace pcmrbm {

struct EpochEnergy {
    double programming_j = 0.0;
    double read_j = 0.0;
    std::uint64_t set_pulses = 0;
    std::uint64_t resets = 0;

    double total_j() const { return programming_j + read_j; }
};

// Accumulates per-event energy and buckets it into epochs.
//
// Programming energy is tracked as pulse counts times the per-pulse unit
// energy, not as a running float sum: the bookkeeping contract is
// programming_j == n_set * e_set + n_reset * e_reset with no accumulated
// rounding, and repeated addition of a double does not satisfy that.
class EnergyLedger {
public:
    void add_set_pulse(double unit_j) { accrue(set_, unit_j); }
    void add_reset(double unit_j) { accrue(reset_, unit_j); }
    void add_read(double joules) { read_j_ += joules; }

    // Closes the current epoch bucket and starts a new one.
    void end_epoch() {
        history_.push_back(current());
        set_ = Group{};
        reset_ = Group{};
        read_j_ = 0.0;
    }

    EpochEnergy current() const {
        EpochEnergy e;
        e.programming_j = group_j(set_) + group_j(reset_);
        e.read_j = read_j_;
        e.set_pulses = set_.count;
        e.resets = reset_.count;
        return e;
    }

    const std::vector<EpochEnergy>& history() const { return history_; }

    std::size_t epochs() const { return history_.size(); }

    double total_programming_j() const {
        double s = group_j(set_) + group_j(reset_);
        for (const auto& e : history_) s += e.programming_j;
        return s;
    }
    double total_read_j() const {
        double s = read_j_;
        for (const auto& e : history_) s += e.read_j;
        return s;
    }

private:
    struct Group {
        std::uint64_t count = 0;
        double unit = 0.0;
        double folded = 0.0; // closed-out sums from earlier unit values
    };

    static void accrue(Group& g, double unit) {
        if (g.count > 0 && g.unit != unit) {
            g.folded += static_cast<double>(g.count) * g.unit;
            g.count = 0;
        }
        g.unit = unit;
        ++g.count;
    }
    static double group_j(const Group& g) {
        return g.folded + static_cast<double>(g.count) * g.unit;
    }

    Group set_;
    Group reset_;
    double read_j_ = 0.0;
    std::vector<EpochEnergy> history_;
};

// One CD epoch on a conventional processor: vector-op counts for the
// matrix passes plus a flat non-volatile memory access cost.
struct ConventionalHwModel {
    double e_vector_op = 1e-9;
    int dataset_size = 5;
    int n_visible = 9;
    int n_hidden = 5;
    int k = 3;
    double memory_access_j = 480e-9;
    int synapse_bits = 64;
};

struct ConventionalBreakdown {
    double v2h_ops = 0.0;    // one visible-to-hidden pass
    double h2v_ops = 0.0;    // one hidden-to-visible pass
    double update_ops = 0.0; // weight-update additions
    double logic_ops = 0.0;  // (k+1) v2h + k h2v + update
    double logic_j = 0.0;
    double memory_j = 0.0;
    double total_j = 0.0;
};

ConventionalBreakdown conventional_epoch_energy(const ConventionalHwModel& m);

// Electrical parameters of a large PCM array, used for the scaled-up
// hardware estimate.
struct PcmArrayModel {
    double v_set = 1.8;
    double i_set = 100e-6;
    double t_set = 400e-9;
    double v_reset = 2.2;
    double i_reset = 200e-6;
    double t_reset = 50e-9;
    double v_read = 0.1;
    double t_read = 20e-9;
    double r_low = 10e3;
    double r_high = 2e6;
};

inline double set_pulse_energy(const PcmArrayModel& m) {
    return m.v_set * m.i_set * m.t_set;
}
inline double reset_pulse_energy(const PcmArrayModel& m) {
    return m.v_reset * m.i_reset * m.t_reset;
}
inline double mean_conductance(const PcmArrayModel& m) {
    return (1.0 / m.r_low + 1.0 / m.r_high) / 2.0;
}

struct PcmBreakdown {
    double set_j = 0.0;
    double reset_j = 0.0;
    double read_j = 0.0;
    double total_j = 0.0;
};

PcmBreakdown pcm_epoch_energy_estimate(const PcmArrayModel& m,
                                       std::uint64_t set_pulses_per_epoch,
                                       std::uint64_t device_reads_per_epoch,
                                       std::uint64_t reset_pulses_per_epoch = 0);

struct SimulatedEpochRow {
    int epoch = 0;
    double programming_j = 0.0;
    double read_j = 0.0;
    double total_j = 0.0;
};

std::vector<SimulatedEpochRow> simulated_epoch_report(const EnergyLedger& ledger);

// Side-by-side estimate of one training epoch on conventional hardware vs
// an in-array PCM implementation, at two technology presets, with every
// assumed count exposed so it can be adjusted.
struct HeadlineComparison {
    // vector-processor preset, 64-bit and 16-bit weights
    ConventionalBreakdown conventional_64bit;
    ConventionalBreakdown conventional_16bit;

    // large-array preset assumptions
    int n_weights = 45;
    int bits_per_weight = 64;
    std::uint64_t bits_moved = 0;           // weights * bits, read and written back
    std::uint64_t set_pulses = 45;          // one programming pulse per weight
    std::uint64_t full_array_reads = 7;     // sampling passes per epoch
    std::uint64_t devices = 90;             // two cells per weight
    double adc_t_read = 50e-6;              // integration window of the array read

    double conv_1gb_logic_j = 0.0;
    double conv_1gb_write_j = 0.0;
    double conv_1gb_read_j = 0.0;
    double conv_1gb_total_j = 0.0;
    PcmBreakdown pcm_1gb;

    // published reference figures the presets are compared against
    double ref_conventional_64bit_j = 910e-9;
    double ref_conventional_16bit_j = 230e-9;
    double ref_conv_1gb_j = 590e-9;
    double ref_pcm_1gb_j = 19e-9;
};

HeadlineComparison headline_comparison(const ConventionalHwModel& conv = {},
                                       const PcmArrayModel& array = {});

} // namespace pcmrbm
