#include "pcmrbm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "pcmrbm/errors.hpp"

namespace pcmrbm {

double softplus(double x) {
    if (x > 0.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

double log_unnormalized_marginal(const RbmModel& m, std::uint32_t v_index, double beta) {
    double log_p = 0.0;
    for (int i = 0; i < m.n_visible; ++i)
        if ((v_index >> i) & 1u) log_p += m.visible_bias[i];
    for (int j = 0; j < m.n_hidden; ++j) {
        double pre = m.hidden_bias[j];
        for (int i = 0; i < m.n_visible; ++i)
            if ((v_index >> i) & 1u) pre += beta * m.w(i, j);
        log_p += softplus(pre);
    }
    return log_p;
}

ModelDistribution exact_distribution(const RbmModel& m) {
    if (m.n_visible > 20 || m.n_hidden > 20)
        throw TooLarge("analysis: model too large to enumerate (guard Nv, Nh <= 20)");

    ModelDistribution d;
    d.n_visible = m.n_visible;
    const std::size_t n_states = 1ull << m.n_visible;
    d.log_p_v.resize(n_states);

    for (std::size_t v = 0; v < n_states; ++v)
        d.log_p_v[v] = log_unnormalized_marginal(m, static_cast<std::uint32_t>(v));

    const double max_log = *std::max_element(d.log_p_v.begin(), d.log_p_v.end());
    double sum = 0.0;
    for (double lp : d.log_p_v) sum += std::exp(lp - max_log);
    d.log_z = max_log + std::log(sum);

    d.p_v.resize(n_states);
    for (std::size_t v = 0; v < n_states; ++v) {
        d.log_p_v[v] -= d.log_z;
        d.p_v[v] = std::exp(d.log_p_v[v]);
    }
    return d;
}

double kl_divergence(const std::vector<double>& data_dist, const ModelDistribution& model_dist) {
    if (data_dist.size() != model_dist.p_v.size())
        throw std::invalid_argument("kl: distribution sizes differ");
    double total = 0.0;
    double kl = 0.0;
    for (std::size_t v = 0; v < data_dist.size(); ++v) {
        const double pd = data_dist[v];
        if (pd <= 0.0) continue;
        total += pd;
        kl += pd * (std::log(pd) - model_dist.log_p_v[v]);
    }
    if (std::abs(total - 1.0) > 1e-6)
        throw std::invalid_argument("kl: data distribution does not sum to 1");
    return kl;
}

double ais_log_z(const RbmModel& m, const AisConfig& cfg, Rng& rng) {
    if (cfg.n_temperatures < 2) throw ConfigError("ais: n_temperatures must be >= 2");
    if (cfg.n_chains < 1) throw ConfigError("ais: n_chains must be >= 1");

    // base: zero coupling, so units are independent given the biases
    double log_z_base = 0.0;
    for (double a : m.visible_bias) log_z_base += softplus(a);
    for (double b : m.hidden_bias) log_z_base += softplus(b);

    const int n_temps = cfg.n_temperatures;
    std::vector<double> log_w(cfg.n_chains, 0.0);
    std::vector<std::uint8_t> v(m.n_visible), h(m.n_hidden);
    std::vector<double> coupling(m.n_hidden); // (W^T v)_j, unscaled

    auto refresh_coupling = [&]() {
        std::fill(coupling.begin(), coupling.end(), 0.0);
        for (int i = 0; i < m.n_visible; ++i) {
            if (!v[i]) continue;
            for (int j = 0; j < m.n_hidden; ++j) coupling[j] += m.w(i, j);
        }
    };

    for (int c = 0; c < cfg.n_chains; ++c) {
        for (int i = 0; i < m.n_visible; ++i)
            v[i] = rng.bernoulli(sigmoid(m.visible_bias[i])) ? 1 : 0;
        refresh_coupling();

        double beta_prev = 0.0;
        for (int t = 1; t < n_temps; ++t) {
            const double beta = static_cast<double>(t) / (n_temps - 1);
            // the visible-bias term of log p* is shared by both temperatures
            // and cancels in the weight update
            for (int j = 0; j < m.n_hidden; ++j)
                log_w[c] += softplus(m.hidden_bias[j] + beta * coupling[j]) -
                            softplus(m.hidden_bias[j] + beta_prev * coupling[j]);

            // one Gibbs sweep at the new temperature: h | v, then v | h
            for (int j = 0; j < m.n_hidden; ++j)
                h[j] = rng.bernoulli(sigmoid(m.hidden_bias[j] + beta * coupling[j])) ? 1 : 0;
            for (int i = 0; i < m.n_visible; ++i) {
                double pre = m.visible_bias[i];
                for (int j = 0; j < m.n_hidden; ++j)
                    if (h[j]) pre += beta * m.w(i, j);
                v[i] = rng.bernoulli(sigmoid(pre)) ? 1 : 0;
            }
            refresh_coupling();
            beta_prev = beta;
        }
    }

    // log of the mean importance weight
    const double max_lw = *std::max_element(log_w.begin(), log_w.end());
    double sum = 0.0;
    for (double lw : log_w) sum += std::exp(lw - max_lw);
    return max_lw + std::log(sum) - std::log(static_cast<double>(cfg.n_chains)) + log_z_base;
}

double kl_divergence_ais(const RbmModel& m, const DataSet& data, double ais_log_z_estimate) {
    double kl = 0.0;
    double total = 0.0;
    for (std::size_t v = 0; v < data.empirical.size(); ++v) {
        const double pd = data.empirical[v];
        if (pd <= 0.0) continue;
        total += pd;
        const double log_pm =
            log_unnormalized_marginal(m, static_cast<std::uint32_t>(v)) - ais_log_z_estimate;
        kl += pd * (std::log(pd) - log_pm);
    }
    if (std::abs(total - 1.0) > 1e-6)
        throw std::invalid_argument("kl: data distribution does not sum to 1");
    return kl;
}

PixelPosterior infer_missing_pixels(const ModelDistribution& dist, const Pattern& observed,
                                    const Pattern& mask) {
    if (observed.size() != dist.n_visible || mask.size() != dist.n_visible)
        throw std::invalid_argument("infer: pattern/mask length mismatch");

    PixelPosterior post;
    for (int i = 0; i < mask.size(); ++i)
        if (mask.pixels[i]) post.missing_pixels.push_back(i);
    const int n_missing = static_cast<int>(post.missing_pixels.size());
    if (n_missing > 12)
        throw TooManyMissing("infer: more than 12 missing pixels (guard 2^missing <= 4096)");

    std::uint32_t base = 0;
    for (int i = 0; i < observed.size(); ++i)
        if (!mask.pixels[i] && observed.pixels[i]) base |= 1u << i;

    // normalize in the log domain; linear p_v can underflow for extreme
    // weights even though Boltzmann probabilities are strictly positive
    const std::uint32_t n_assignments = 1u << n_missing;
    std::vector<double> log_p(n_assignments);
    double max_lp = -std::numeric_limits<double>::infinity();
    for (std::uint32_t code = 0; code < n_assignments; ++code) {
        std::uint32_t full = base;
        for (int b = 0; b < n_missing; ++b)
            if ((code >> b) & 1u) full |= 1u << post.missing_pixels[b];
        log_p[code] = dist.log_p_v[full];
        max_lp = std::max(max_lp, log_p[code]);
    }
    double total = 0.0;
    for (double lp : log_p) total += std::exp(lp - max_lp);
    post.assignments.reserve(n_assignments);
    for (std::uint32_t code = 0; code < n_assignments; ++code)
        post.assignments.emplace_back(code, std::exp(log_p[code] - max_lp) / total);

    post.p_white.assign(n_missing, 0.0);
    for (const auto& [code, p] : post.assignments)
        for (int b = 0; b < n_missing; ++b)
            if ((code >> b) & 1u) post.p_white[b] += p;
    return post;
}

PixelPosterior infer_missing_pixels(const RbmModel& m, const Pattern& observed,
                                    const Pattern& mask) {
    return infer_missing_pixels(exact_distribution(m), observed, mask);
}

double recovery_error_rate(const ModelDistribution& dist, const std::vector<Pattern>& patterns) {
    if (patterns.empty()) throw ConfigError("recovery: needs at least one pattern");
    double p_correct_sum = 0.0;
    std::size_t cases = 0;
    for (const Pattern& pat : patterns) {
        for (int px = 0; px < pat.size(); ++px) {
            Pattern mask = Pattern::from_index(0, pat.size());
            mask.pixels[px] = 1;
            const PixelPosterior post = infer_missing_pixels(dist, pat, mask);
            const double p_white = post.p_white[0];
            p_correct_sum += pat.pixels[px] ? p_white : 1.0 - p_white;
            ++cases;
        }
    }
    return 1.0 - p_correct_sum / static_cast<double>(cases);
}

double recovery_error_rate(const RbmModel& m, const std::vector<Pattern>& patterns) {
    return recovery_error_rate(exact_distribution(m), patterns);
}

} // namespace pcmrbm
