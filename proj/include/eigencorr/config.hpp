// config.hpp — JSON run configuration with strict validation

#pragma once

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eigencorr/models.hpp"

namespace eigencorr {

struct SignFlipConfig {
    double fraction = 0.0;
    std::uint64_t seed = 0;
};

// Either an explicit detuning grid or "auto", which sizes a symmetric grid
// from the data.
struct GridConfig {
    bool automatic = true;
    double eps_min = 0.0;
    double eps_max = 0.0;
    int n_bins = 81;
};

enum class Analysis { efshape, corr1, corr2, corr1_signed, corr_sign, all_pairs, dynamics, spacings };

struct DynamicsConfig {
    bool median_initial = true;
    int initial = 0;
    double t_max_over_tau = 1000.0;
    int steps = 1000;
};

struct RunConfig {
    ModelSpec model;
    std::optional<SignFlipConfig> sign_flip;
    int window_count = 50;
    GridConfig grid;
    std::vector<Analysis> analyses;
    DynamicsConfig dynamics;
    std::string output_dir = "out";
};

inline std::string analysis_name(Analysis a) {
    switch (a) {
        case Analysis::efshape: return "efshape";
        case Analysis::corr1: return "corr1";
        case Analysis::corr2: return "corr2";
        case Analysis::corr1_signed: return "corr1_signed";
        case Analysis::corr_sign: return "corr_sign";
        case Analysis::all_pairs: return "all_pairs";
        case Analysis::dynamics: return "dynamics";
        case Analysis::spacings: return "spacings";
    }
    throw std::logic_error("analysis_name: unhandled value");
}

namespace detail {

using json = nlohmann::json;

[[noreturn]] inline void config_fail(const std::string& message) {
    throw std::runtime_error("config: " + message);
}

inline void require_keys(const json& obj, const std::string& where,
                         std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            config_fail("unknown key '" + key + "' in " + where);
    }
}

inline double get_number(const json& obj, const std::string& where, const std::string& key,
                         double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) config_fail(where + "." + key + " must be a number");
    return obj[key].get<double>();
}

inline int get_int(const json& obj, const std::string& where, const std::string& key, int fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer()) config_fail(where + "." + key + " must be an integer");
    return obj[key].get<int>();
}

inline ModelSpec parse_model(const json& node) {
    if (!node.is_object()) config_fail("model must be an object");
    if (!node.contains("type") || !node["type"].is_string()) config_fail("model.type must be a string");
    const std::string type = node["type"].get<std::string>();
    if (type == "lmg") {
        require_keys(node, "model", {"type", "omega", "eps1", "eps2", "mu1", "mu2", "mu3", "mu4"});
        LmgSpec spec;
        spec.omega = get_int(node, "model", "omega", spec.omega);
        spec.eps1 = get_number(node, "model", "eps1", spec.eps1);
        spec.eps2 = get_number(node, "model", "eps2", spec.eps2);
        spec.mu1 = get_number(node, "model", "mu1", spec.mu1);
        spec.mu2 = get_number(node, "model", "mu2", spec.mu2);
        spec.mu3 = get_number(node, "model", "mu3", spec.mu3);
        spec.mu4 = get_number(node, "model", "mu4", spec.mu4);
        return spec;
    }
    if (type == "dicke") {
        require_keys(node, "model", {"type", "n_atoms", "omega0", "omega", "lambda", "n_max"});
        DickeSpec spec;
        spec.n_atoms = get_int(node, "model", "n_atoms", spec.n_atoms);
        spec.omega0 = get_number(node, "model", "omega0", spec.omega0);
        spec.omega = get_number(node, "model", "omega", spec.omega);
        spec.lambda = get_number(node, "model", "lambda", spec.lambda);
        spec.n_max = get_int(node, "model", "n_max", spec.n_max);
        return spec;
    }
    if (type == "defect_xxz") {
        require_keys(node, "model", {"type", "n_sites", "j_flip", "mu_zz", "mu1", "mu4", "sz_sector"});
        DefectXxzSpec spec;
        spec.n_sites = get_int(node, "model", "n_sites", spec.n_sites);
        spec.j_flip = get_number(node, "model", "j_flip", spec.j_flip);
        spec.mu_zz = get_number(node, "model", "mu_zz", spec.mu_zz);
        spec.mu1 = get_number(node, "model", "mu1", spec.mu1);
        spec.mu4 = get_number(node, "model", "mu4", spec.mu4);
        spec.sz_sector = get_number(node, "model", "sz_sector", spec.sz_sector);
        return spec;
    }
    if (type == "defect_ising") {
        require_keys(node, "model", {"type", "n_sites", "jz", "lambda_x", "mu1", "mu4", "boundary"});
        DefectIsingSpec spec;
        spec.n_sites = get_int(node, "model", "n_sites", spec.n_sites);
        spec.jz = get_number(node, "model", "jz", spec.jz);
        spec.lambda_x = get_number(node, "model", "lambda_x", spec.lambda_x);
        spec.mu1 = get_number(node, "model", "mu1", spec.mu1);
        spec.mu4 = get_number(node, "model", "mu4", spec.mu4);
        if (node.contains("boundary")) {
            if (!node["boundary"].is_string()) config_fail("model.boundary must be a string");
            const std::string b = node["boundary"].get<std::string>();
            if (b == "open") spec.boundary = Boundary::open;
            else if (b == "periodic") spec.boundary = Boundary::periodic;
            else config_fail("model.boundary must be 'open' or 'periodic'");
        }
        return spec;
    }
    config_fail("model.type must be one of 'lmg', 'dicke', 'defect_xxz', 'defect_ising'");
}

inline Analysis parse_analysis(const std::string& name) {
    for (const auto a : {Analysis::efshape, Analysis::corr1, Analysis::corr2, Analysis::corr1_signed,
                         Analysis::corr_sign, Analysis::all_pairs, Analysis::dynamics, Analysis::spacings})
        if (analysis_name(a) == name) return a;
    config_fail("unknown analysis '" + name + "'");
}

}  // namespace detail

inline RunConfig parse_config(const std::string& text) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& err) {
        const std::size_t upto = std::min<std::size_t>(err.byte, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
        detail::config_fail("parse error at line " + std::to_string(line) + ": " + err.what());
    }
    if (!root.is_object()) detail::config_fail("top level must be an object");
    detail::require_keys(root, "config",
                         {"model", "sign_flip", "window_count", "grid", "analyses", "dynamics", "output_dir"});
    if (!root.contains("model")) detail::config_fail("missing required key 'model'");
    if (!root.contains("analyses")) detail::config_fail("missing required key 'analyses'");

    RunConfig cfg;
    cfg.model = detail::parse_model(root["model"]);

    if (root.contains("sign_flip")) {
        const auto& node = root["sign_flip"];
        if (!node.is_object()) detail::config_fail("sign_flip must be an object");
        detail::require_keys(node, "sign_flip", {"fraction", "seed"});
        SignFlipConfig flip;
        flip.fraction = detail::get_number(node, "sign_flip", "fraction", 0.0);
        if (!(flip.fraction >= 0.0 && flip.fraction <= 1.0))
            detail::config_fail("sign_flip.fraction must lie in [0, 1]");
        if (node.contains("seed")) {
            if (!node["seed"].is_number_unsigned() && !node["seed"].is_number_integer())
                detail::config_fail("sign_flip.seed must be a nonnegative integer");
            if (node["seed"].is_number_integer() && node["seed"].get<std::int64_t>() < 0)
                detail::config_fail("sign_flip.seed must be a nonnegative integer");
            flip.seed = node["seed"].get<std::uint64_t>();
        }
        cfg.sign_flip = flip;
    }

    cfg.window_count = detail::get_int(root, "config", "window_count", cfg.window_count);
    if (cfg.window_count < 2) detail::config_fail("window_count must be at least 2");

    if (root.contains("grid")) {
        const auto& node = root["grid"];
        if (node.is_string()) {
            if (node.get<std::string>() != "auto") detail::config_fail("grid must be 'auto' or an object");
        } else if (node.is_object()) {
            detail::require_keys(node, "grid", {"eps_min", "eps_max", "n_bins"});
            if (!node.contains("eps_min") || !node.contains("eps_max"))
                detail::config_fail("grid requires eps_min and eps_max");
            cfg.grid.automatic = false;
            cfg.grid.eps_min = detail::get_number(node, "grid", "eps_min", 0.0);
            cfg.grid.eps_max = detail::get_number(node, "grid", "eps_max", 0.0);
            cfg.grid.n_bins = detail::get_int(node, "grid", "n_bins", cfg.grid.n_bins);
            if (!(cfg.grid.eps_min < cfg.grid.eps_max)) detail::config_fail("grid.eps_min must be below grid.eps_max");
            if (cfg.grid.n_bins < 1) detail::config_fail("grid.n_bins must be at least 1");
        } else {
            detail::config_fail("grid must be 'auto' or an object");
        }
    }

    const auto& analyses = root["analyses"];
    if (!analyses.is_array() || analyses.empty()) detail::config_fail("analyses must be a nonempty array");
    for (const auto& item : analyses) {
        if (!item.is_string()) detail::config_fail("analyses entries must be strings");
        const auto a = detail::parse_analysis(item.get<std::string>());
        if (std::find(cfg.analyses.begin(), cfg.analyses.end(), a) != cfg.analyses.end())
            detail::config_fail("duplicate analysis '" + item.get<std::string>() + "'");
        cfg.analyses.push_back(a);
    }

    if (root.contains("dynamics")) {
        const auto& node = root["dynamics"];
        if (!node.is_object()) detail::config_fail("dynamics must be an object");
        detail::require_keys(node, "dynamics", {"initial", "t_max_over_tau", "steps"});
        if (node.contains("initial")) {
            const auto& init = node["initial"];
            if (init.is_string()) {
                if (init.get<std::string>() != "median")
                    detail::config_fail("dynamics.initial must be 'median' or a basis index");
            } else if (init.is_number_integer()) {
                cfg.dynamics.median_initial = false;
                cfg.dynamics.initial = init.get<int>();
                if (cfg.dynamics.initial < 0) detail::config_fail("dynamics.initial must be nonnegative");
            } else {
                detail::config_fail("dynamics.initial must be 'median' or a basis index");
            }
        }
        cfg.dynamics.t_max_over_tau =
            detail::get_number(node, "dynamics", "t_max_over_tau", cfg.dynamics.t_max_over_tau);
        if (!(cfg.dynamics.t_max_over_tau > 0.0)) detail::config_fail("dynamics.t_max_over_tau must be positive");
        cfg.dynamics.steps = detail::get_int(node, "dynamics", "steps", cfg.dynamics.steps);
        if (cfg.dynamics.steps < 1) detail::config_fail("dynamics.steps must be at least 1");
    }

    if (root.contains("output_dir")) {
        if (!root["output_dir"].is_string()) detail::config_fail("output_dir must be a string");
        cfg.output_dir = root["output_dir"].get<std::string>();
        if (cfg.output_dir.empty()) detail::config_fail("output_dir must not be empty");
    }
    return cfg;
}

inline nlohmann::json model_to_json(const ModelSpec& model) {
    nlohmann::json node;
    node["type"] = model_name(model);
    std::visit(
        [&node](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, LmgSpec>) {
                node["omega"] = s.omega;
                node["eps1"] = s.eps1;
                node["eps2"] = s.eps2;
                node["mu1"] = s.mu1;
                node["mu2"] = s.mu2;
                node["mu3"] = s.mu3;
                node["mu4"] = s.mu4;
            } else if constexpr (std::is_same_v<T, DickeSpec>) {
                node["n_atoms"] = s.n_atoms;
                node["omega0"] = s.omega0;
                node["omega"] = s.omega;
                node["lambda"] = s.lambda;
                node["n_max"] = s.n_max;
            } else if constexpr (std::is_same_v<T, DefectXxzSpec>) {
                node["n_sites"] = s.n_sites;
                node["j_flip"] = s.j_flip;
                node["mu_zz"] = s.mu_zz;
                node["mu1"] = s.mu1;
                node["mu4"] = s.mu4;
                node["sz_sector"] = s.sz_sector;
            } else {
                node["n_sites"] = s.n_sites;
                node["jz"] = s.jz;
                node["lambda_x"] = s.lambda_x;
                node["mu1"] = s.mu1;
                node["mu4"] = s.mu4;
                node["boundary"] = s.boundary == Boundary::open ? "open" : "periodic";
            }
        },
        model);
    return node;
}

// Canonical echo of a parsed configuration with all defaults applied.
inline nlohmann::json config_to_json(const RunConfig& cfg) {
    nlohmann::json root;
    root["model"] = model_to_json(cfg.model);
    if (cfg.sign_flip)
        root["sign_flip"] = {{"fraction", cfg.sign_flip->fraction}, {"seed", cfg.sign_flip->seed}};
    root["window_count"] = cfg.window_count;
    if (cfg.grid.automatic)
        root["grid"] = "auto";
    else
        root["grid"] = {{"eps_min", cfg.grid.eps_min}, {"eps_max", cfg.grid.eps_max}, {"n_bins", cfg.grid.n_bins}};
    root["analyses"] = nlohmann::json::array();
    for (const auto a : cfg.analyses) root["analyses"].push_back(analysis_name(a));
    if (cfg.dynamics.median_initial)
        root["dynamics"] = {{"initial", "median"},
                            {"t_max_over_tau", cfg.dynamics.t_max_over_tau},
                            {"steps", cfg.dynamics.steps}};
    else
        root["dynamics"] = {{"initial", cfg.dynamics.initial},
                            {"t_max_over_tau", cfg.dynamics.t_max_over_tau},
                            {"steps", cfg.dynamics.steps}};
    root["output_dir"] = cfg.output_dir;
    return root;
}

}  // namespace eigencorr
