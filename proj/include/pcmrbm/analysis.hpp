#pragma once

#include <cstdint>
#include <vector>

#include "pcmrbm/dataset.hpp"
#include "pcmrbm/rbm.hpp"
#include "pcmrbm/rng.hpp"

namespace pcmrbm {

// Exact model distribution over all 2^Nv visible configurations.
struct ModelDistribution {
    int n_visible = 0;
    double log_z = 0.0;
    std::vector<double> p_v;
    std::vector<double> log_p_v;
};

struct AisConfig {
    int n_temperatures = 1000; // linear beta schedule 0 -> 1
    int n_chains = 100;
    std::uint64_t seed = 0;
};

// log(1 + e^x) without overflow
double softplus(double x);

// Unnormalized log marginal log p*(v) = a.v + sum_j softplus(b_j + (W^T v)_j),
// with the coupling term scaled by beta.
double log_unnormalized_marginal(const RbmModel& m, std::uint32_t v_index, double beta = 1.0);

// Enumerates the 2^Nv visible configurations with the hidden layer summed
// out analytically; log-domain throughout. Guarded at Nv, Nh <= 20.
ModelDistribution exact_distribution(const RbmModel& m);

// KL(data || model) in nats over the enumerated visible space.
double kl_divergence(const std::vector<double>& data_dist, const ModelDistribution& model_dist);

// Annealed importance sampling estimate of log Z. The base distribution is
// the same RBM with zero coupling (independent units), one Gibbs sweep per
// temperature per chain, importance weights combined in the log domain.
double ais_log_z(const RbmModel& m, const AisConfig& cfg, Rng& rng);

// KL(data || model) using an AIS log Z in place of the exact one.
double kl_divergence_ais(const RbmModel& m, const DataSet& data, double ais_log_z_estimate);

// Exact posterior over the masked pixels, conditioning the enumerated
// distribution on the observed ones. Mask pixel 1 = missing.
struct PixelPosterior {
    std::vector<int> missing_pixels; // ascending pixel indices
    // (assignment code over missing pixels, LSB = first missing pixel) -> p
    std::vector<std::pair<std::uint32_t, double>> assignments;
    std::vector<double> p_white; // marginal P(pixel = 1) per missing pixel
};

PixelPosterior infer_missing_pixels(const ModelDistribution& dist, const Pattern& observed,
                                    const Pattern& mask);
PixelPosterior infer_missing_pixels(const RbmModel& m, const Pattern& observed,
                                    const Pattern& mask);

// Missing-pixel recovery error: for every stored pattern and every
// single-pixel mask, the probability assigned to the wrong pixel value,
// averaged over masks and patterns.
double recovery_error_rate(const ModelDistribution& dist, const std::vector<Pattern>& patterns);
double recovery_error_rate(const RbmModel& m, const std::vector<Pattern>& patterns);

} // namespace pcmrbm
