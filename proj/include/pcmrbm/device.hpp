#pragma once

#include <cstdint>

#include "pcmrbm/energy.hpp"
#include "pcmrbm/rng.hpp"

namespace pcmrbm {

// Behavioral parameters of one PCM cell. Conductances in siemens, energies
// in joules, times in seconds.
struct DeviceParams {
    double g_min = 5e-6;          // RESET target conductance (mean)
    double g_max = 50e-6;         // saturated SET ceiling (mean)
    int n_levels = 55;            // nominal gradual steps from g_min to g_max
    double sigma_c2c = 0.3;       // cycle-to-cycle step noise, lognormal sigma
    double sigma_d2d = 0.3;       // device-to-device endpoint spread, lognormal sigma
    double e_partial_set = 72e-12;
    double e_reset = 100e-12;
    double v_read = 0.1;
    double t_read = 50e-6;        // ADC integration window
    double e_wire_per_read = 0.0; // optional wire cost per array read

    // time constant of the saturating pulse response; n_levels pulses cover
    // ~95% of the conductance range
    double tau() const { return static_cast<double>(n_levels) / 3.0; }

    void validate() const; // throws ConfigError
};

// State of one cell. g_min_i / g_max_i are this device's endpoints after
// device-to-device variation; g never decreases except through reset.
struct PcmCell {
    double g = 0.0;
    std::uint64_t pulses_applied = 0;
    double g_min_i = 0.0;
    double g_max_i = 0.0;
};

// Noiseless pulse-response curve for this cell's sampled endpoints:
// G(n) = g_min_i + (g_max_i - g_min_i) * (1 - exp(-n / tau)).
double target_conductance(const PcmCell& cell, const DeviceParams& p, std::uint64_t n);

// Samples the saturation ceiling once (device lifetime), then resets.
PcmCell make_cell(const DeviceParams& p, Rng& rng, EnergyLedger* ledger = nullptr);

// Strong RESET: resamples the low endpoint, returns the cell there and
// clears the pulse counter.
void reset(PcmCell& cell, const DeviceParams& p, Rng& rng, EnergyLedger* ledger = nullptr);

// One gradual SET pulse. The increment follows the target curve at the
// current pulse count, scaled by multiplicative lognormal cycle-to-cycle
// noise, clamped so conductance never decreases and never exceeds g_max_i.
// Saturated cells keep accepting pulses with a vanishing increment.
void partial_set(PcmCell& cell, const DeviceParams& p, Rng& rng, EnergyLedger* ledger = nullptr);

inline double read_current(const PcmCell& cell, const DeviceParams& p) {
    return cell.g * p.v_read;
}

// Energy of reading this single cell once; accrued at the array level.
inline double read_energy(const PcmCell& cell, const DeviceParams& p) {
    return cell.g * p.v_read * p.v_read * p.t_read;
}

} // namespace pcmrbm
