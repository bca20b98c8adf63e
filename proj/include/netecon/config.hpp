#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "netecon/evolution.hpp"
#include "netecon/sweep.hpp"

namespace netecon {

using json = nlohmann::json;

/// Config validation failure; carries the field path of the offender.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

namespace cfg {

inline json load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
}

/// Unknown keys are a hard error: no silent typo tolerance.
inline void check_keys(const json& obj, const std::set<std::string>& allowed,
                       const std::string& path) {
    if (!obj.is_object()) throw ConfigError(path + ": expected an object");
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key))
            throw ConfigError(path + ": unknown key '" + key + "'");
}

inline const json& require(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key)) throw ConfigError(path + ": missing key '" + key + "'");
    return obj.at(key);
}

inline double number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path + ": expected a number");
    return j.get<double>();
}

inline double non_negative(const json& j, const std::string& path) {
    const double x = number(j, path);
    if (x < 0) throw ConfigError(path + ": must be non-negative");
    return x;
}

inline int integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ConfigError(path + ": expected an integer");
    return j.get<int>();
}

inline std::vector<double> number_list(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path + ": expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

inline DiscreteDistribution parse_distribution(const json& j, const std::string& path) {
    check_keys(j, {"kind", "p", "ratio"}, path);
    const std::string kind = require(j, "kind", path).get<std::string>();
    DiscreteDistribution d;
    if (kind == "uniform") {
        d.kind = DistributionKind::Uniform;
    } else if (kind == "geometric") {
        d.kind = DistributionKind::Geometric;
    } else if (kind == "reversed_geometric") {
        d.kind = DistributionKind::ReversedGeometric;
    } else if (kind == "binomial") {
        d.kind = DistributionKind::Binomial;
        d.p = number(require(j, "p", path), path + ".p");
    } else {
        throw ConfigError(path + ".kind: unknown distribution '" + kind + "'");
    }
    if (j.contains("ratio")) d.ratio = number(j["ratio"], path + ".ratio");
    return d;
}

inline SystemSpec parse_system(const json& config) {
    SystemSpec spec;
    const json& model = require(config, "model", "config");
    check_keys(model, {"qualities", "mu", "sigma", "rho", "p_min", "grid_step"}, "model");
    spec.qualities = number_list(require(model, "qualities", "model"), "model.qualities");
    if (model.contains("mu")) {
        spec.mu = number_list(model["mu"], "model.mu");
        for (std::size_t i = 0; i < spec.mu.size(); ++i)
            if (spec.mu[i] < 0) throw ConfigError("model.mu[" + std::to_string(i) +
                                                  "]: capacity must be non-negative");
    }
    if (model.contains("sigma")) spec.sigma = number_list(model["sigma"], "model.sigma");
    if (model.contains("rho")) spec.rho = non_negative(model["rho"], "model.rho");
    if (model.contains("p_min")) spec.p_min = number_list(model["p_min"], "model.p_min");
    if (model.contains("grid_step"))
        spec.grid_step = non_negative(model["grid_step"], "model.grid_step");
    if (spec.mu.empty() == spec.sigma.empty())
        throw ConfigError("model: exactly one of 'mu' or 'sigma' is required");

    const json& pop = require(config, "population", "config");
    check_keys(pop, {"f_beta", "f_v", "levels", "total_alpha"}, "population");
    spec.f_beta = parse_distribution(require(pop, "f_beta", "population"), "population.f_beta");
    spec.f_v = parse_distribution(require(pop, "f_v", "population"), "population.f_v");
    if (pop.contains("levels")) {
        spec.levels = integer(pop["levels"], "population.levels");
        if (spec.levels < 1) throw ConfigError("population.levels: must be >= 1");
    }
    if (pop.contains("total_alpha")) {
        spec.total_alpha = number(pop["total_alpha"], "population.total_alpha");
        if (!(spec.total_alpha > 0)) throw ConfigError("population.total_alpha: must be positive");
    }
    return spec;
}

inline Scenario parse_scenario(const json& config) {
    const json& sc = require(config, "scenario", "config");
    check_keys(sc,
               {"anchor_year", "start_year", "end_year", "nu_anchor_tbps", "r_nu", "eta",
                "alpha_start_tbps", "r_alpha", "weights_start", "weight_growth", "betas",
                "qualities", "v_max_usd_per_mbps_month", "v_levels",
                "p_min_usd_per_mbps_month", "grid_step_usd_per_mbps_month"},
               "scenario");
    Scenario s;
    s.anchor_year = integer(require(sc, "anchor_year", "scenario"), "scenario.anchor_year");
    s.start_year = integer(require(sc, "start_year", "scenario"), "scenario.start_year");
    s.end_year = integer(require(sc, "end_year", "scenario"), "scenario.end_year");

    auto pair = [&](const char* key, std::array<double, 2>& out, bool required) {
        if (!sc.contains(key)) {
            if (required) throw ConfigError(std::string("scenario: missing key '") + key + "'");
            return;
        }
        const auto v = number_list(sc[key], std::string("scenario.") + key);
        if (v.size() != 2)
            throw ConfigError(std::string("scenario.") + key + ": expected two entries (A, B)");
        out = {v[0], v[1]};
    };
    auto triple = [&](const char* key, std::array<double, 3>& out) {
        if (!sc.contains(key)) return;
        const auto v = number_list(sc[key], std::string("scenario.") + key);
        if (v.size() != 3)
            throw ConfigError(std::string("scenario.") + key + ": expected three entries (a, b, c)");
        out = {v[0], v[1], v[2]};
    };

    pair("nu_anchor_tbps", s.nu_anchor_tbps, true);
    pair("eta", s.eta, true);
    pair("qualities", s.qualities, false);
    pair("p_min_usd_per_mbps_month", s.p_min, false);
    triple("weights_start", s.weights_start);
    triple("weight_growth", s.weight_growth);
    triple("betas", s.betas);
    if (sc.contains("r_nu")) s.r_nu = number(sc["r_nu"], "scenario.r_nu");
    if (sc.contains("r_alpha")) s.r_alpha = number(sc["r_alpha"], "scenario.r_alpha");
    if (sc.contains("alpha_start_tbps"))
        s.alpha_start_tbps = non_negative(sc["alpha_start_tbps"], "scenario.alpha_start_tbps");
    if (sc.contains("v_max_usd_per_mbps_month"))
        s.v_max = non_negative(sc["v_max_usd_per_mbps_month"],
                               "scenario.v_max_usd_per_mbps_month");
    if (sc.contains("v_levels")) s.v_levels = integer(sc["v_levels"], "scenario.v_levels");
    if (sc.contains("grid_step_usd_per_mbps_month"))
        s.grid_step = non_negative(sc["grid_step_usd_per_mbps_month"],
                                   "scenario.grid_step_usd_per_mbps_month");
    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("scenario: ") + e.what());
    }
    return s;
}

/// Sweep points: either an explicit array or {"from", "to", "count"}.
inline std::vector<double> parse_points(const json& j, const std::string& path) {
    if (j.is_array()) return number_list(j, path);
    check_keys(j, {"from", "to", "count"}, path);
    const double from = number(require(j, "from", path), path + ".from");
    const double to = number(require(j, "to", path), path + ".to");
    const int count = integer(require(j, "count", path), path + ".count");
    if (count < 1) throw ConfigError(path + ".count: must be >= 1");
    std::vector<double> out;
    for (int i = 0; i < count; ++i)
        out.push_back(count == 1 ? from : from + (to - from) * i / (count - 1));
    return out;
}

/// Named sweep axis -> (axis, mu index). Segment letters follow the
/// canonical quality order (A is the best quality).
inline std::pair<SweepAxis, std::size_t> parse_axis(const std::string& name) {
    if (name == "rho") return {SweepAxis::Rho, 0};
    if (name == "f_beta_p") return {SweepAxis::FBetaBinomialP, 0};
    if (name.size() == 4 && name.rfind("mu_", 0) == 0 && name[3] >= 'A' && name[3] <= 'Z')
        return {SweepAxis::MuSegment, static_cast<std::size_t>(name[3] - 'A')};
    throw ConfigError("run.axis: unknown axis '" + name + "'");
}

/// Variant labels paired with RFC 7386 merge patches over the base config.
struct Variant {
    std::string label;
    json overrides;
};

inline std::vector<Variant> parse_variants(const json& run) {
    std::vector<Variant> out;
    if (!run.contains("variants")) {
        out.push_back({"base", json::object()});
        return out;
    }
    const json& vs = run["variants"];
    if (!vs.is_array()) throw ConfigError("run.variants: expected an array");
    for (std::size_t i = 0; i < vs.size(); ++i) {
        const std::string path = "run.variants[" + std::to_string(i) + "]";
        check_keys(vs[i], {"label", "overrides"}, path);
        Variant v;
        v.label = require(vs[i], "label", path).get<std::string>();
        v.overrides = require(vs[i], "overrides", path);
        out.push_back(std::move(v));
    }
    return out;
}

inline json apply_variant(const json& config, const Variant& v) {
    json merged = config;
    merged.merge_patch(v.overrides);
    return merged;
}

}  // namespace cfg
}  // namespace netecon
