#include "pcmrbm/crossbar.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "pcmrbm/errors.hpp"

namespace pcmrbm {

SynapseArray SynapseArray::initialize(int n_visible, int n_hidden, const DeviceParams& params,
                                      Rng& rng, EnergyLedger* ledger,
                                      std::optional<double> s_norm_override) {
    if (n_visible < 1 || n_hidden < 1)
        throw ConfigError("array: n_visible and n_hidden must be >= 1");
    params.validate();

    SynapseArray a;
    a.nv_ = n_visible;
    a.nh_ = n_hidden;
    a.params_ = params;
    const std::size_t n = static_cast<std::size_t>(n_visible) * n_hidden;
    a.plus_.reserve(n);
    a.minus_.reserve(n);
    for (std::size_t s = 0; s < n; ++s) a.plus_.push_back(make_cell(params, rng, ledger));
    for (std::size_t s = 0; s < n; ++s) a.minus_.push_back(make_cell(params, rng, ledger));

    double mean = 0.0;
    for (std::size_t s = 0; s < n; ++s) mean += a.plus_[s].g - a.minus_[s].g;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
        const double d = (a.plus_[s].g - a.minus_[s].g) - mean;
        var += d * d;
    }
    var /= static_cast<double>(n); // population variance, fixed by definition

    a.m_norm_ = mean;
    a.s_norm_ = std::sqrt(var);
    if (s_norm_override) {
        if (*s_norm_override <= 0.0)
            throw ConfigError("array: s_norm override must be > 0");
        a.s_norm_ = *s_norm_override;
    } else if (a.s_norm_ == 0.0) {
        throw ZeroSpread("array: zero spread in initial G+ - G-; set s_norm_override");
    }
    return a;
}

SynapseArray SynapseArray::from_state(int n_visible, int n_hidden, const DeviceParams& params,
                                      std::vector<PcmCell> plus, std::vector<PcmCell> minus,
                                      double m_norm, double s_norm) {
    const std::size_t n = static_cast<std::size_t>(n_visible) * n_hidden;
    if (plus.size() != n || minus.size() != n)
        throw ConfigError("array: cell grid size does not match dimensions");
    if (s_norm <= 0.0) throw ConfigError("array: s_norm must be > 0");
    SynapseArray a;
    a.nv_ = n_visible;
    a.nh_ = n_hidden;
    a.params_ = params;
    a.plus_ = std::move(plus);
    a.minus_ = std::move(minus);
    a.m_norm_ = m_norm;
    a.s_norm_ = s_norm;
    return a;
}

Matrix SynapseArray::weights() const {
    Matrix w(nv_, nh_);
    for (int i = 0; i < nv_; ++i)
        for (int j = 0; j < nh_; ++j)
            w(i, j) = ((plus_[idx(i, j)].g - minus_[idx(i, j)].g) - m_norm_) / s_norm_;
    return w;
}

void SynapseArray::apply_update(int i, int j, int direction, Rng& rng, EnergyLedger& ledger) {
    if (i < 0 || i >= nv_ || j < 0 || j >= nh_)
        throw std::out_of_range("array: synapse index out of range");
    if (direction > 0)
        partial_set(plus_[idx(i, j)], params_, rng, &ledger);
    else
        partial_set(minus_[idx(i, j)], params_, rng, &ledger);
}

std::vector<double> SynapseArray::read_hidden_preactivation(std::span<const std::uint8_t> v,
                                                            EnergyLedger& ledger) const {
    if (static_cast<int>(v.size()) != nv_)
        throw std::invalid_argument("array: visible vector length mismatch");
    std::vector<double> pre(static_cast<std::size_t>(nh_), 0.0);
    const Matrix w = weights();
    bool any_active = false;
    for (int i = 0; i < nv_; ++i) {
        if (!v[i]) continue;
        any_active = true;
        for (int j = 0; j < nh_; ++j) pre[j] += w(i, j);
    }
    if (any_active) ledger.add_read(row_read_energy(v));
    return pre;
}

std::vector<double> SynapseArray::read_visible_preactivation(std::span<const std::uint8_t> h,
                                                             EnergyLedger& ledger) const {
    if (static_cast<int>(h.size()) != nh_)
        throw std::invalid_argument("array: hidden vector length mismatch");
    std::vector<double> pre(static_cast<std::size_t>(nv_), 0.0);
    const Matrix w = weights();
    bool any_active = false;
    for (int j = 0; j < nh_; ++j) {
        if (!h[j]) continue;
        any_active = true;
        for (int i = 0; i < nv_; ++i) pre[i] += w(i, j);
    }
    if (any_active) ledger.add_read(col_read_energy(h));
    return pre;
}

double SynapseArray::row_read_energy(std::span<const std::uint8_t> v) const {
    double e = 0.0;
    bool any_active = false;
    for (int i = 0; i < nv_; ++i) {
        if (!v[i]) continue;
        any_active = true;
        for (int j = 0; j < nh_; ++j)
            e += read_energy(plus_[idx(i, j)], params_) + read_energy(minus_[idx(i, j)], params_);
    }
    return any_active ? e + params_.e_wire_per_read : 0.0;
}

double SynapseArray::col_read_energy(std::span<const std::uint8_t> h) const {
    double e = 0.0;
    bool any_active = false;
    for (int j = 0; j < nh_; ++j) {
        if (!h[j]) continue;
        any_active = true;
        for (int i = 0; i < nv_; ++i)
            e += read_energy(plus_[idx(i, j)], params_) + read_energy(minus_[idx(i, j)], params_);
    }
    return any_active ? e + params_.e_wire_per_read : 0.0;
}

std::vector<double> SynapseArray::row_conductance_sums() const {
    std::vector<double> sums(static_cast<std::size_t>(nv_), 0.0);
    for (int i = 0; i < nv_; ++i)
        for (int j = 0; j < nh_; ++j)
            sums[i] += plus_[idx(i, j)].g + minus_[idx(i, j)].g;
    return sums;
}

std::vector<double> SynapseArray::col_conductance_sums() const {
    std::vector<double> sums(static_cast<std::size_t>(nh_), 0.0);
    for (int i = 0; i < nv_; ++i)
        for (int j = 0; j < nh_; ++j)
            sums[j] += plus_[idx(i, j)].g + minus_[idx(i, j)].g;
    return sums;
}

} // namespace pcmrbm
