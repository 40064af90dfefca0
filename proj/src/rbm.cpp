#include "pcmrbm/rbm.hpp"

#include <cmath>
#include <stdexcept>

#include "pcmrbm/errors.hpp"

namespace pcmrbm {

RbmModel RbmModel::zero(int n_visible, int n_hidden) {
    RbmModel m;
    m.n_visible = n_visible;
    m.n_hidden = n_hidden;
    m.visible_bias.assign(n_visible, 0.0);
    m.hidden_bias.assign(n_hidden, 0.0);
    m.w = Matrix(n_visible, n_hidden);
    return m;
}

RbmModel RbmModel::from_weights(Matrix w) {
    RbmModel m = zero(w.rows, w.cols);
    m.w = std::move(w);
    return m;
}

double rbm_energy(const RbmModel& m, std::span<const std::uint8_t> v,
                  std::span<const std::uint8_t> h) {
    double e = 0.0;
    for (int i = 0; i < m.n_visible; ++i)
        if (v[i]) e -= m.visible_bias[i];
    for (int j = 0; j < m.n_hidden; ++j)
        if (h[j]) e -= m.hidden_bias[j];
    for (int i = 0; i < m.n_visible; ++i) {
        if (!v[i]) continue;
        for (int j = 0; j < m.n_hidden; ++j)
            if (h[j]) e -= m.w(i, j);
    }
    return e;
}

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

std::vector<double> hidden_preactivation(const RbmModel& m, std::span<const std::uint8_t> v) {
    std::vector<double> pre(m.hidden_bias);
    for (int i = 0; i < m.n_visible; ++i) {
        if (!v[i]) continue;
        for (int j = 0; j < m.n_hidden; ++j) pre[j] += m.w(i, j);
    }
    return pre;
}

std::vector<double> visible_preactivation(const RbmModel& m, std::span<const std::uint8_t> h) {
    std::vector<double> pre(m.visible_bias);
    for (int j = 0; j < m.n_hidden; ++j) {
        if (!h[j]) continue;
        for (int i = 0; i < m.n_visible; ++i) pre[i] += m.w(i, j);
    }
    return pre;
}

std::vector<double> p_hidden_given_visible(const RbmModel& m, std::span<const std::uint8_t> v) {
    std::vector<double> p = hidden_preactivation(m, v);
    for (double& x : p) x = sigmoid(x);
    return p;
}

std::vector<double> p_visible_given_hidden(const RbmModel& m, std::span<const std::uint8_t> h) {
    std::vector<double> p = visible_preactivation(m, h);
    for (double& x : p) x = sigmoid(x);
    return p;
}

namespace {

std::vector<std::uint8_t> sample_bernoulli(const std::vector<double>& p, Rng& rng) {
    std::vector<std::uint8_t> s(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) s[i] = rng.bernoulli(p[i]) ? 1 : 0;
    return s;
}

} // namespace

std::vector<std::uint8_t> sample_hidden(const RbmModel& m, std::span<const std::uint8_t> v,
                                        Rng& rng) {
    return sample_bernoulli(p_hidden_given_visible(m, v), rng);
}

std::vector<std::uint8_t> sample_visible(const RbmModel& m, std::span<const std::uint8_t> h,
                                         Rng& rng) {
    return sample_bernoulli(p_visible_given_hidden(m, h), rng);
}

namespace {

// Shared CD core. When `array` is non-null the per-pass physical read
// energies are summed and the dataset-averaged total is accrued to the
// ledger, attributing one read charge to each of the 2k+1 sampling passes.
CdStats cd_statistics_core(const RbmModel& m, const DataSet& data, const CdOptions& opt,
                           Rng& rng, const SynapseArray* array, EnergyLedger* ledger) {
    if (opt.k < 1) throw ConfigError("cd: k must be >= 1");
    if (data.patterns.empty()) throw ConfigError("cd: dataset is empty");
    if (data.n_visible != m.n_visible)
        throw ConfigError("cd: dataset and model visible sizes differ");

    CdStats stats;
    stats.data_term = Matrix(m.n_visible, m.n_hidden);
    stats.model_term = Matrix(m.n_visible, m.n_hidden);

    std::vector<double> row_e, col_e;
    if (array) {
        const auto row_sums = array->row_conductance_sums();
        const auto col_sums = array->col_conductance_sums();
        const DeviceParams& dp = array->params();
        const double per_g = dp.v_read * dp.v_read * dp.t_read;
        row_e.resize(row_sums.size());
        col_e.resize(col_sums.size());
        for (std::size_t i = 0; i < row_sums.size(); ++i) row_e[i] = row_sums[i] * per_g;
        for (std::size_t j = 0; j < col_sums.size(); ++j) col_e[j] = col_sums[j] * per_g;
    }
    double raw_read_j = 0.0;
    auto charge_rows = [&](std::span<const std::uint8_t> v) {
        if (!array) return;
        double e = 0.0;
        bool active = false;
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i]) {
                e += row_e[i];
                active = true;
            }
        if (active) raw_read_j += e + array->params().e_wire_per_read;
    };
    auto charge_cols = [&](std::span<const std::uint8_t> h) {
        if (!array) return;
        double e = 0.0;
        bool active = false;
        for (std::size_t j = 0; j < h.size(); ++j)
            if (h[j]) {
                e += col_e[j];
                active = true;
            }
        if (active) raw_read_j += e + array->params().e_wire_per_read;
    };

    for (const Pattern& pat : data.patterns) {
        std::span<const std::uint8_t> v0(pat.pixels);
        const std::vector<double> p_h0 = p_hidden_given_visible(m, v0);
        charge_rows(v0);
        std::vector<std::uint8_t> h = sample_bernoulli(p_h0, rng);

        for (int i = 0; i < m.n_visible; ++i) {
            if (!v0[i]) continue;
            for (int j = 0; j < m.n_hidden; ++j)
                stats.data_term(i, j) += opt.mean_field_data_term
                                             ? p_h0[j]
                                             : static_cast<double>(h[j]);
        }

        // chain seeded at the data vector; input clamped only at step 0
        std::vector<std::uint8_t> v(pat.pixels);
        std::vector<double> p_h(p_h0);
        for (int step = 0; step < opt.k; ++step) {
            charge_cols(h);
            v = sample_bernoulli(p_visible_given_hidden(m, h), rng);
            charge_rows(v);
            p_h = p_hidden_given_visible(m, v);
            h = sample_bernoulli(p_h, rng);
        }
        // the product uses the final hidden conditionals rather than one
        // more binary sample; an exact zero of data_term - model_term would
        // otherwise misroute the update pulse systematically
        for (int i = 0; i < m.n_visible; ++i) {
            if (!v[i]) continue;
            for (int j = 0; j < m.n_hidden; ++j) stats.model_term(i, j) += p_h[j];
        }
    }

    const double n = static_cast<double>(data.patterns.size());
    for (double& x : stats.data_term.data) x /= n;
    for (double& x : stats.model_term.data) x /= n;
    if (array && ledger) ledger->add_read(raw_read_j / n);
    return stats;
}

} // namespace

Matrix CdStats::delta() const {
    Matrix d = data_term;
    for (std::size_t i = 0; i < d.data.size(); ++i) d.data[i] -= model_term.data[i];
    return d;
}

CdStats cd_statistics(const RbmModel& m, const DataSet& data, const CdOptions& opt, Rng& rng) {
    return cd_statistics_core(m, data, opt, rng, nullptr, nullptr);
}

CdStats cd_statistics(const SynapseArray& array, const DataSet& data, const CdOptions& opt,
                      Rng& rng, EnergyLedger& ledger) {
    const RbmModel m = RbmModel::from_weights(array.weights());
    return cd_statistics_core(m, data, opt, rng, &array, &ledger);
}

void apply_sign_updates(SynapseArray& array, const CdStats& stats, Rng& rng,
                        EnergyLedger& ledger) {
    for (int i = 0; i < array.n_visible(); ++i)
        for (int j = 0; j < array.n_hidden(); ++j) {
            const double d = stats.data_term(i, j) - stats.model_term(i, j);
            array.apply_update(i, j, d > 0.0 ? +1 : -1, rng, ledger);
        }
}

CdStats train_epoch_hardware(SynapseArray& array, const DataSet& data, const CdOptions& opt,
                             Rng& rng, EnergyLedger& ledger) {
    CdStats stats = cd_statistics(array, data, opt, rng, ledger);
    apply_sign_updates(array, stats, rng, ledger);
    return stats;
}

void apply_baseline_update(Matrix& w, const CdStats& stats, double eta) {
    for (int i = 0; i < w.rows; ++i)
        for (int j = 0; j < w.cols; ++j)
            w(i, j) += eta * (stats.data_term(i, j) - stats.model_term(i, j));
}

CdStats train_epoch_baseline(Matrix& w, const DataSet& data, const CdOptions& opt, double eta,
                             Rng& rng) {
    if (eta <= 0.0) throw ConfigError("baseline: learning rate must be > 0");
    const RbmModel m = RbmModel::from_weights(w);
    CdStats stats = cd_statistics(m, data, opt, rng);
    apply_baseline_update(w, stats, eta);
    return stats;
}

double default_baseline_learning_rate(const DeviceParams& params, double s_norm) {
    PcmCell nominal;
    nominal.g_min_i = params.g_min;
    nominal.g_max_i = params.g_max;
    const double first_step =
        target_conductance(nominal, params, 1) - target_conductance(nominal, params, 0);
    return first_step / s_norm;
}

} // namespace pcmrbm
