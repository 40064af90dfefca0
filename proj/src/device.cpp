#include "pcmrbm/device.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pcmrbm/errors.hpp"

namespace pcmrbm {

void DeviceParams::validate() const {
    if (!(g_max > g_min) || !(g_min > 0.0))
        throw ConfigError("device: requires g_max > g_min > 0");
    if (n_levels < 1) throw ConfigError("device: n_levels must be >= 1");
    if (sigma_c2c < 0.0 || sigma_d2d < 0.0)
        throw ConfigError("device: noise sigmas must be >= 0");
    if (e_partial_set < 0.0 || e_reset < 0.0 || e_wire_per_read < 0.0)
        throw ConfigError("device: energies must be >= 0");
    if (v_read <= 0.0 || t_read <= 0.0)
        throw ConfigError("device: v_read and t_read must be > 0");
}

double target_conductance(const PcmCell& cell, const DeviceParams& p, std::uint64_t n) {
    const double range = cell.g_max_i - cell.g_min_i;
    return cell.g_min_i + range * (1.0 - std::exp(-static_cast<double>(n) / p.tau()));
}

PcmCell make_cell(const DeviceParams& p, Rng& rng, EnergyLedger* ledger) {
    PcmCell cell;
    cell.g_max_i = p.g_max * std::exp(p.sigma_d2d * rng.normal());
    reset(cell, p, rng, ledger);
    return cell;
}

void reset(PcmCell& cell, const DeviceParams& p, Rng& rng, EnergyLedger* ledger) {
    double g_low = p.g_min * std::exp(p.sigma_d2d * rng.normal());
    // endpoint overlap is possible only for extreme sigma_d2d sweeps
    cell.g_min_i = std::min(g_low, cell.g_max_i);
    cell.g = cell.g_min_i;
    cell.pulses_applied = 0;
    if (ledger) ledger->add_reset(p.e_reset);
}

void partial_set(PcmCell& cell, const DeviceParams& p, Rng& rng, EnergyLedger* ledger) {
    const double ideal = target_conductance(cell, p, cell.pulses_applied + 1) -
                         target_conductance(cell, p, cell.pulses_applied);
    const double step = ideal * std::exp(p.sigma_c2c * rng.normal());
    cell.g = std::min(cell.g + std::max(step, 0.0), cell.g_max_i);
    ++cell.pulses_applied;
    if (ledger) ledger->add_set_pulse(p.e_partial_set);
}

} // namespace pcmrbm
