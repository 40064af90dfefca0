#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pcmrbm/analysis.hpp"
#include "pcmrbm/crossbar.hpp"
#include "pcmrbm/device.hpp"

namespace pcmrbm {

struct TrainConfig {
    int epochs = 30;
    int k = 3;
    double baseline_learning_rate = 0.0; // 0 = derive from the hardware step
    bool mean_field_data_term = false;
};

struct SweepGrid {
    std::vector<double> sigma_c2c = {0.0, 0.15, 0.3, 0.6};
    std::vector<int> n_levels = {1, 10, 30, 100};
};

// Full experiment description; serializes to/from the JSON config with
// strict key checking (unknown keys are rejected).
struct ExperimentConfig {
    std::string experiment = "train"; // train | sweep-patterns | sweep-device | energy-report
    int trials = 5;
    std::vector<int> n_patterns = {5};           // list form drives sweep-patterns
    std::vector<int> checkpoints = {10, 30, 70}; // sweep logging epochs
    std::uint64_t seed = 99;
    std::string out_dir = "out";
    bool multiset_sampling = false;
    std::optional<double> s_norm_override;
    int n_visible = 9;
    int n_hidden = 5;
    DeviceParams device;
    TrainConfig train;
    AisConfig ais;
    SweepGrid sweep;

    void validate() const; // throws ConfigError

    int single_n_patterns() const; // throws if the list form was given
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

ExperimentConfig load_config(const std::filesystem::path& path);
void save_config(const ExperimentConfig& cfg, const std::filesystem::path& path);

// Applies one "dotted.path=value" override onto the raw JSON document; the
// value is parsed as JSON when possible and treated as a string otherwise.
void apply_override(nlohmann::json& j, std::string_view dotted_kv);

// Array checkpoint: every conductance, pulse count, sampled endpoint pair,
// plus the frozen normalization constants.
nlohmann::json array_to_json(const SynapseArray& array);
SynapseArray array_from_json(const nlohmann::json& j);

} // namespace pcmrbm
