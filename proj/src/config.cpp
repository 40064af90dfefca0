#include "pcmrbm/config.hpp"

#include <fstream>
#include <set>

#include "pcmrbm/errors.hpp"

namespace pcmrbm {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& j, const std::set<std::string>& known,
                         const std::string& context) {
    for (const auto& [key, value] : j.items())
        if (!known.contains(key))
            throw ConfigError("config: unknown key '" + context + key + "'");
}

template <typename T>
void get_if_present(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

DeviceParams device_from_json(const json& j) {
    reject_unknown_keys(j,
                        {"g_min", "g_max", "n_levels", "sigma_c2c", "sigma_d2d", "e_partial_set",
                         "e_reset", "v_read", "t_read", "e_wire_per_read"},
                        "device.");
    DeviceParams p;
    get_if_present(j, "g_min", p.g_min);
    get_if_present(j, "g_max", p.g_max);
    get_if_present(j, "n_levels", p.n_levels);
    get_if_present(j, "sigma_c2c", p.sigma_c2c);
    get_if_present(j, "sigma_d2d", p.sigma_d2d);
    get_if_present(j, "e_partial_set", p.e_partial_set);
    get_if_present(j, "e_reset", p.e_reset);
    get_if_present(j, "v_read", p.v_read);
    get_if_present(j, "t_read", p.t_read);
    get_if_present(j, "e_wire_per_read", p.e_wire_per_read);
    return p;
}

json device_to_json(const DeviceParams& p) {
    return json{{"g_min", p.g_min},
                {"g_max", p.g_max},
                {"n_levels", p.n_levels},
                {"sigma_c2c", p.sigma_c2c},
                {"sigma_d2d", p.sigma_d2d},
                {"e_partial_set", p.e_partial_set},
                {"e_reset", p.e_reset},
                {"v_read", p.v_read},
                {"t_read", p.t_read},
                {"e_wire_per_read", p.e_wire_per_read}};
}

} // namespace

void ExperimentConfig::validate() const {
    static const std::set<std::string> kinds = {"train", "sweep-patterns", "sweep-device",
                                                "energy-report"};
    if (!kinds.contains(experiment))
        throw ConfigError("config: unknown experiment kind '" + experiment + "'");
    if (trials < 1) throw ConfigError("config: trials must be >= 1");
    if (n_patterns.empty()) throw ConfigError("config: n_patterns must not be empty");
    if (n_visible < 1 || n_hidden < 1)
        throw ConfigError("config: n_visible and n_hidden must be >= 1");
    if (train.epochs < 0) throw ConfigError("config: train.epochs must be >= 0");
    if (train.k < 1) throw ConfigError("config: train.k must be >= 1");
    if (ais.n_temperatures < 2) throw ConfigError("config: ais.n_temperatures must be >= 2");
    if (ais.n_chains < 1) throw ConfigError("config: ais.n_chains must be >= 1");
    if (s_norm_override && *s_norm_override <= 0.0)
        throw ConfigError("config: s_norm_override must be > 0");
    if (sweep.sigma_c2c.empty() || sweep.n_levels.empty())
        throw ConfigError("config: sweep grids must not be empty");
    device.validate();
}

int ExperimentConfig::single_n_patterns() const {
    if (n_patterns.size() != 1)
        throw ConfigError("config: this experiment takes a single n_patterns count");
    return n_patterns.front();
}

ExperimentConfig config_from_json(const json& j) {
    reject_unknown_keys(j,
                        {"experiment", "trials", "n_patterns", "checkpoints", "seed", "out_dir",
                         "multiset_sampling", "s_norm_override", "n_visible", "n_hidden",
                         "device", "train", "ais", "sweep"},
                        "");
    ExperimentConfig cfg;
    get_if_present(j, "experiment", cfg.experiment);
    get_if_present(j, "trials", cfg.trials);
    if (j.contains("n_patterns")) {
        const auto& np = j.at("n_patterns");
        if (np.is_array())
            cfg.n_patterns = np.get<std::vector<int>>();
        else
            cfg.n_patterns = {np.get<int>()};
    }
    get_if_present(j, "checkpoints", cfg.checkpoints);
    get_if_present(j, "seed", cfg.seed);
    get_if_present(j, "out_dir", cfg.out_dir);
    get_if_present(j, "multiset_sampling", cfg.multiset_sampling);
    if (j.contains("s_norm_override") && !j.at("s_norm_override").is_null())
        cfg.s_norm_override = j.at("s_norm_override").get<double>();
    get_if_present(j, "n_visible", cfg.n_visible);
    get_if_present(j, "n_hidden", cfg.n_hidden);
    if (j.contains("device")) cfg.device = device_from_json(j.at("device"));
    if (j.contains("train")) {
        const auto& t = j.at("train");
        reject_unknown_keys(t, {"epochs", "k", "baseline_learning_rate", "mean_field_data_term"},
                            "train.");
        get_if_present(t, "epochs", cfg.train.epochs);
        get_if_present(t, "k", cfg.train.k);
        get_if_present(t, "baseline_learning_rate", cfg.train.baseline_learning_rate);
        get_if_present(t, "mean_field_data_term", cfg.train.mean_field_data_term);
    }
    if (j.contains("ais")) {
        const auto& a = j.at("ais");
        reject_unknown_keys(a, {"n_temperatures", "n_chains", "seed"}, "ais.");
        get_if_present(a, "n_temperatures", cfg.ais.n_temperatures);
        get_if_present(a, "n_chains", cfg.ais.n_chains);
        get_if_present(a, "seed", cfg.ais.seed);
    }
    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        reject_unknown_keys(s, {"sigma_c2c", "n_levels"}, "sweep.");
        get_if_present(s, "sigma_c2c", cfg.sweep.sigma_c2c);
        get_if_present(s, "n_levels", cfg.sweep.n_levels);
    }
    cfg.validate();
    return cfg;
}

json config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["experiment"] = cfg.experiment;
    j["trials"] = cfg.trials;
    if (cfg.n_patterns.size() == 1)
        j["n_patterns"] = cfg.n_patterns.front();
    else
        j["n_patterns"] = cfg.n_patterns;
    j["checkpoints"] = cfg.checkpoints;
    j["seed"] = cfg.seed;
    j["out_dir"] = cfg.out_dir;
    j["multiset_sampling"] = cfg.multiset_sampling;
    j["s_norm_override"] = cfg.s_norm_override ? json(*cfg.s_norm_override) : json(nullptr);
    j["n_visible"] = cfg.n_visible;
    j["n_hidden"] = cfg.n_hidden;
    j["device"] = device_to_json(cfg.device);
    j["train"] = json{{"epochs", cfg.train.epochs},
                      {"k", cfg.train.k},
                      {"baseline_learning_rate", cfg.train.baseline_learning_rate},
                      {"mean_field_data_term", cfg.train.mean_field_data_term}};
    j["ais"] = json{{"n_temperatures", cfg.ais.n_temperatures},
                    {"n_chains", cfg.ais.n_chains},
                    {"seed", cfg.ais.seed}};
    j["sweep"] = json{{"sigma_c2c", cfg.sweep.sigma_c2c}, {"n_levels", cfg.sweep.n_levels}};
    return j;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open file: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config: invalid JSON in " + path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

void save_config(const ExperimentConfig& cfg, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("config: cannot write file: " + path.string());
    out << config_to_json(cfg).dump(2) << "\n";
}

void apply_override(json& j, std::string_view dotted_kv) {
    const auto eq = dotted_kv.find('=');
    if (eq == std::string_view::npos || eq == 0)
        throw ConfigError("config: override must look like key.path=value, got '" +
                          std::string(dotted_kv) + "'");
    std::string path(dotted_kv.substr(0, eq));
    const std::string value(dotted_kv.substr(eq + 1));

    json parsed;
    try {
        parsed = json::parse(value);
    } catch (const json::parse_error&) {
        parsed = value; // bare strings are allowed unquoted
    }

    json* node = &j;
    std::size_t start = 0;
    while (true) {
        const std::size_t dot = path.find('.', start);
        const std::string key = path.substr(start, dot - start);
        if (key.empty()) throw ConfigError("config: empty key in override path '" + path + "'");
        if (dot == std::string::npos) {
            (*node)[key] = parsed;
            break;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

json array_to_json(const SynapseArray& array) {
    auto cells = [](const SynapseArray& a, bool plus) {
        json out = json::array();
        for (int i = 0; i < a.n_visible(); ++i)
            for (int j = 0; j < a.n_hidden(); ++j) {
                const PcmCell& c = plus ? a.plus(i, j) : a.minus(i, j);
                out.push_back(json{{"g", c.g},
                                   {"pulses_applied", c.pulses_applied},
                                   {"g_min_i", c.g_min_i},
                                   {"g_max_i", c.g_max_i}});
            }
        return out;
    };
    json j;
    j["n_visible"] = array.n_visible();
    j["n_hidden"] = array.n_hidden();
    j["m_norm"] = array.m_norm();
    j["s_norm"] = array.s_norm();
    j["device"] = device_to_json(array.params());
    j["cells_plus"] = cells(array, true);
    j["cells_minus"] = cells(array, false);
    return j;
}

SynapseArray array_from_json(const json& j) {
    reject_unknown_keys(
        j, {"n_visible", "n_hidden", "m_norm", "s_norm", "device", "cells_plus", "cells_minus"},
        "array.");
    const int nv = j.at("n_visible").get<int>();
    const int nh = j.at("n_hidden").get<int>();
    const DeviceParams params = device_from_json(j.at("device"));
    auto cells = [](const json& arr) {
        std::vector<PcmCell> out;
        out.reserve(arr.size());
        for (const auto& cj : arr) {
            PcmCell c;
            c.g = cj.at("g").get<double>();
            c.pulses_applied = cj.at("pulses_applied").get<std::uint64_t>();
            c.g_min_i = cj.at("g_min_i").get<double>();
            c.g_max_i = cj.at("g_max_i").get<double>();
            out.push_back(c);
        }
        return out;
    };
    return SynapseArray::from_state(nv, nh, params, cells(j.at("cells_plus")),
                                    cells(j.at("cells_minus")), j.at("m_norm").get<double>(),
                                    j.at("s_norm").get<double>());
}

} // namespace pcmrbm
