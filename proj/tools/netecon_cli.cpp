#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "netecon/config.hpp"
#include "netecon/csv.hpp"
#include "netecon/equilibrium.hpp"
#include "netecon/evolution.hpp"
#include "netecon/sweep.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitCertificate = 3;

using namespace netecon;

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    double grid_step = 0.0;      // 0 -> config / default
    bool competitive = true;
};

std::string sanitize(const std::string& label) {
    std::string out;
    for (char c : label)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.') ? c : '_';
    return out;
}

std::string out_path(const CommonOpts& opts, const std::string& name) {
    return opts.out_dir + "/" + name;
}

json load_config(const CommonOpts& opts) {
    json config = cfg::load_file(opts.config_path);
    cfg::check_keys(config, {"model", "population", "scenario", "run"}, "config");
    return config;
}

const json& run_section(const json& config) {
    static const json empty = json::object();
    if (!config.contains("run")) return empty;
    cfg::check_keys(config["run"],
                    {"axis", "points", "menu", "price_index", "levels", "knob", "values",
                     "mode", "r_nu_values", "ratios", "variants"},
                    "run");
    return config["run"];
}

SystemSpec system_for(const json& config, const CommonOpts& opts) {
    SystemSpec spec = cfg::parse_system(config);
    if (opts.grid_step > 0.0) spec.grid_step = opts.grid_step;
    return spec;
}

Scenario scenario_for(const json& config, const CommonOpts& opts) {
    Scenario s = cfg::parse_scenario(config);
    if (opts.grid_step > 0.0) s.grid_step = opts.grid_step;
    return s;
}

EquilibriumResult solve_checked(const Market& market, const APPopulation& population,
                                const PriceGrid& grid, bool competitive) {
    const auto result = competitive ? solve(market, population, grid)
                                    : solve_ascending(market, population, grid);
    const auto rep = verify(result, market, population, grid, competitive);
    if (!rep.ok(competitive))
        throw std::runtime_error("equilibrium certificate failed: " + rep.message);
    return result;
}

int cmd_solve(const CommonOpts& opts) {
    const json config = load_config(opts);
    run_section(config);
    for (const auto& variant : cfg::parse_variants(run_section(config))) {
        const json merged = cfg::apply_variant(config, variant);
        const std::string label = sanitize(variant.label);

        // A market without any real segment still has the dummy option.
        const json& model = cfg::require(merged, "model", "config");
        if (model.contains("qualities") && model["qualities"].is_array() &&
            model["qualities"].empty()) {
            std::cout << label << ": market contains only the dummy segment; "
                      << "all traffic stays off-net at price 0\n";
            CsvWriter csv(out_path(opts, "solve_" + label + ".csv"));
            csv.row({"segment", "quality", "mu", "price", "load", "share_alpha"});
            continue;
        }

        const SystemSpec spec = system_for(merged, opts);
        const BuiltSystem sys = build_system(spec);
        const auto result =
            solve_checked(sys.market, sys.population, sys.grid, opts.competitive);

        CsvWriter csv(out_path(opts, "solve_" + label + ".csv"));
        csv.row({"segment", "quality", "mu", "price", "load", "share_alpha"});
        for (std::size_t i = 0; i < sys.market.size(); ++i) {
            double share = 0.0;
            for (std::size_t ap : result.assignment.shares[i])
                share += sys.population[ap].alpha;
            const bool dummy = sys.market[i].is_dummy;
            csv.row({dummy ? "dummy" : std::string(1, static_cast<char>('A' + i)),
                     dummy ? "inf" : format_number(sys.market[i].q),
                     dummy ? "inf" : format_number(sys.market[i].mu),
                     format_number(result.prices[i]), format_number(result.loads[i]),
                     format_number(share)});
        }
        std::cout << label << ": feasible=" << (result.feasible ? "yes" : "no")
                  << " competitive=" << (result.competitive ? "yes" : "no") << " prices=";
        for (std::size_t i = 0; i < sys.market.non_dummy_count(); ++i)
            std::cout << (i ? "," : "") << format_number(result.prices[i]);
        std::cout << "\n";
    }
    return 0;
}

int cmd_sweep(const CommonOpts& opts) {
    const json config = load_config(opts);
    const json& run = run_section(config);
    const std::string axis_name =
        cfg::require(run, "axis", "run").get<std::string>();
    const auto [axis, mu_index] = cfg::parse_axis(axis_name);
    const auto points = cfg::parse_points(cfg::require(run, "points", "run"), "run.points");

    for (const auto& variant : cfg::parse_variants(run)) {
        const json merged = cfg::apply_variant(config, variant);
        SweepSpec spec;
        spec.base = system_for(merged, opts);
        spec.axis = axis;
        spec.mu_index = mu_index;
        spec.points = points;
        const SweepTable table = run_sweep(spec);

        CsvWriter csv(out_path(opts, "sweep_" + sanitize(variant.label) + ".csv"));
        std::vector<std::string> header{axis_name};
        header.insert(header.end(), table.segment_names.begin(), table.segment_names.end());
        csv.row(header);
        bool any_failed = false;
        for (const auto& row : table.rows) {
            std::vector<std::string> cells{format_number(row.axis_value)};
            for (double p : row.prices) cells.push_back(row.ok ? format_number(p) : "nan");
            csv.row(cells);
            any_failed |= !row.ok;
        }
        if (any_failed)
            throw std::runtime_error("equilibrium certificate failed: sweep variant '" +
                                     variant.label + "' has failed points");
    }
    return 0;
}

int cmd_partition(const CommonOpts& opts) {
    const json config = load_config(opts);
    const json& run = run_section(config);
    const json& menu = cfg::require(run, "menu", "run");
    cfg::check_keys(menu, {"qualities", "prices"}, "run.menu");

    PartitionSweepSpec spec;
    spec.qualities = cfg::number_list(cfg::require(menu, "qualities", "run.menu"),
                                      "run.menu.qualities");
    spec.prices = cfg::number_list(cfg::require(menu, "prices", "run.menu"),
                                   "run.menu.prices");
    const std::string axis = cfg::require(run, "axis", "run").get<std::string>();
    if (axis == "price")
        spec.axis = PartitionAxis::MenuPrice;
    else if (axis == "quality_scale")
        spec.axis = PartitionAxis::QualityScale;
    else
        throw ConfigError("run.axis: unknown axis '" + axis + "'");
    if (run.contains("price_index")) {
        const int idx = cfg::integer(run["price_index"], "run.price_index");
        if (idx < 0 || static_cast<std::size_t>(idx) >= spec.prices.size())
            throw ConfigError("run.price_index: out of range");
        spec.price_index = static_cast<std::size_t>(idx);
    }
    spec.points = cfg::parse_points(cfg::require(run, "points", "run"), "run.points");
    if (run.contains("levels")) spec.levels = cfg::integer(run["levels"], "run.levels");

    const auto rasters = run_partition_sweep(spec);
    for (std::size_t k = 0; k < rasters.size(); ++k) {
        CsvWriter csv(out_path(opts, "partition_point" + std::to_string(k) + ".csv"));
        csv.row({"axis_value", "beta", "v", "segment_index"});
        for (std::size_t i = 0; i < rasters[k].beta.size(); ++i)
            csv.row({format_number(rasters[k].axis_value), format_number(rasters[k].beta[i]),
                     format_number(rasters[k].v[i]), std::to_string(rasters[k].segment[i])});
    }
    return 0;
}

void write_projection(const CommonOpts& opts, const std::string& name,
                      const std::vector<YearlyState>& proj) {
    CsvWriter csv(out_path(opts, name));
    csv.row({"year", "mu_A", "mu_B", "alpha_a", "alpha_b", "alpha_c", "p_A", "p_B",
             "pct_change_A", "pct_change_B", "p_A_usd_per_terabit", "p_B_usd_per_terabit"});
    for (std::size_t i = 0; i < proj.size(); ++i) {
        const auto& st = proj[i];
        if (!st.ok) throw std::runtime_error("equilibrium certificate failed in year " +
                                             std::to_string(st.year));
        auto pct = [&](double prev, double cur) -> std::string {
            if (i == 0 || !(prev > 0.0)) return "";
            return format_number((cur - prev) / prev * 100.0);
        };
        const double prev_a = i ? proj[i - 1].p_A : 0.0;
        const double prev_b = i ? proj[i - 1].p_B : 0.0;
        csv.row({std::to_string(st.year), format_number(st.mu_A), format_number(st.mu_B),
                 format_number(st.alpha_a), format_number(st.alpha_b),
                 format_number(st.alpha_c), format_number(st.p_A), format_number(st.p_B),
                 pct(prev_a, st.p_A), pct(prev_b, st.p_B),
                 format_number(convert_price(st.p_A)), format_number(convert_price(st.p_B))});
    }
}

int cmd_project(const CommonOpts& opts) {
    const json config = load_config(opts);
    const json& run = run_section(config);
    for (const auto& variant : cfg::parse_variants(run)) {
        const json merged = cfg::apply_variant(config, variant);
        const Scenario s = scenario_for(merged, opts);
        const auto proj = project(s);
        const std::string label = sanitize(variant.label);
        write_projection(opts, "project_" + label + ".csv", proj);

        for (const auto& st : proj) {
            if (st.year != s.anchor_year) continue;
            std::cout << label << ": " << st.year
                      << " CDN price " << format_number(st.p_A)
                      << " $/Mbps-month, transit price " << format_number(st.p_B)
                      << " $/Mbps-month\n";
        }
        const double drop_a = mean_annual_drop(proj, s.start_year, s.anchor_year, 0);
        const double drop_b = mean_annual_drop(proj, s.start_year, s.anchor_year, 1);
        std::cout << label << ": mean annual drop " << s.start_year << "-" << s.anchor_year
                  << ": CDN " << format_number(drop_a * 100.0) << "%, transit "
                  << format_number(drop_b * 100.0) << "%\n";
    }
    return 0;
}

int cmd_sensitivity(const CommonOpts& opts) {
    const json config = load_config(opts);
    const json& run = run_section(config);
    const Scenario s = scenario_for(config, opts);
    const std::string knob_name = cfg::require(run, "knob", "run").get<std::string>();
    SensitivityKnob knob;
    if (knob_name == "alpha_start") knob = SensitivityKnob::AlphaStart;
    else if (knob_name == "r_alpha") knob = SensitivityKnob::RAlpha;
    else if (knob_name == "eta_A") knob = SensitivityKnob::EtaA;
    else if (knob_name == "eta_B") knob = SensitivityKnob::EtaB;
    else throw ConfigError("run.knob: unknown knob '" + knob_name + "'");
    const auto values = cfg::parse_points(cfg::require(run, "values", "run"), "run.values");

    const auto fam = sensitivity(s, knob, values);
    for (std::size_t i = 0; i < fam.values.size(); ++i)
        write_projection(opts, "sensitivity_" + sanitize(knob_name) + "_" +
                                   sanitize(format_number(fam.values[i])) + ".csv",
                         fam.projections[i]);
    return 0;
}

int cmd_decide(const CommonOpts& opts) {
    const json config = load_config(opts);
    const json& run = run_section(config);
    const Scenario s = scenario_for(config, opts);
    const std::string mode = cfg::require(run, "mode", "run").get<std::string>();
    if (mode == "growth") {
        const auto values =
            cfg::parse_points(cfg::require(run, "r_nu_values", "run"), "run.r_nu_values");
        const auto fam = decision_growth(s, values);
        for (std::size_t i = 0; i < fam.values.size(); ++i)
            write_projection(opts, "decide_growth_" + sanitize(format_number(fam.values[i])) +
                                       ".csv",
                             fam.projections[i]);
    } else if (mode == "ratio") {
        const json& ratios = cfg::require(run, "ratios", "run");
        if (!ratios.is_array()) throw ConfigError("run.ratios: expected an array of pairs");
        std::vector<std::pair<double, double>> rs;
        std::vector<std::string> names;
        for (std::size_t i = 0; i < ratios.size(); ++i) {
            const auto pair = cfg::number_list(ratios[i],
                                               "run.ratios[" + std::to_string(i) + "]");
            if (pair.size() != 2)
                throw ConfigError("run.ratios[" + std::to_string(i) + "]: expected [a, b]");
            rs.emplace_back(pair[0], pair[1]);
            names.push_back(sanitize(format_number(pair[0])) + "to" +
                            sanitize(format_number(pair[1])));
        }
        ProjectionFamily fam;
        try {
            fam = decision_ratio(s, rs);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("run.ratios: ") + e.what());
        }
        for (std::size_t i = 0; i < fam.projections.size(); ++i)
            write_projection(opts, "decide_ratio_" + names[i] + ".csv", fam.projections[i]);
    } else {
        throw ConfigError("run.mode: unknown mode '" + mode + "'");
    }
    return 0;
}

int cmd_convert(double value, const std::string& from, const std::string& to) {
    double out;
    if (from == "mbps-month" && to == "terabit")
        out = convert_price(value);
    else if (from == "terabit" && to == "mbps-month")
        out = value * kTerabitsPerMbpsMonth;
    else
        throw ConfigError("unsupported conversion: " + from + " -> " + to);
    std::cout << format_number(out) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Market-equilibrium pricing model for transport services"};
    app.require_subcommand(1);

    CommonOpts opts;
    auto add_common = [&](CLI::App* sub, bool needs_config = true) {
        auto* c = sub->add_option("--config", opts.config_path, "JSON config file");
        if (needs_config) c->required();
        sub->add_option("--out", opts.out_dir, "output directory");
        sub->add_option("--grid-step", opts.grid_step, "price grid step override");
        sub->add_flag("--competitive,!--no-competitive", opts.competitive,
                      "require the competitive refinement (default on)");
    };

    auto* solve_cmd = app.add_subcommand("solve", "solve one market for equilibrium prices");
    add_common(solve_cmd);
    auto* sweep_cmd = app.add_subcommand("sweep", "equilibrium prices along a parameter axis");
    add_common(sweep_cmd);
    auto* partition_cmd =
        app.add_subcommand("partition", "market-share rasters for a fixed price/quality menu");
    add_common(partition_cmd);
    auto* project_cmd = app.add_subcommand("project", "yearly price-evolution projection");
    add_common(project_cmd);
    auto* sensitivity_cmd =
        app.add_subcommand("sensitivity", "projection family across one scenario knob");
    add_common(sensitivity_cmd);
    auto* decide_cmd =
        app.add_subcommand("decide", "projection family for capacity decisions");
    add_common(decide_cmd);

    double convert_value = 0.0;
    std::string convert_from, convert_to;
    auto* convert_cmd = app.add_subcommand("convert", "price unit conversion");
    convert_cmd->add_option("value", convert_value, "price value")->required();
    convert_cmd->add_option("--from", convert_from, "source unit")->required();
    convert_cmd->add_option("--to", convert_to, "target unit")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve_cmd->parsed()) return cmd_solve(opts);
        if (sweep_cmd->parsed()) return cmd_sweep(opts);
        if (partition_cmd->parsed()) return cmd_partition(opts);
        if (project_cmd->parsed()) return cmd_project(opts);
        if (sensitivity_cmd->parsed()) return cmd_sensitivity(opts);
        if (decide_cmd->parsed()) return cmd_decide(opts);
        if (convert_cmd->parsed()) return cmd_convert(convert_value, convert_from, convert_to);
    } catch (const netecon::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::runtime_error& e) {
        const std::string msg = e.what();
        std::cerr << "error: " << msg << "\n";
        return msg.find("certificate") != std::string::npos ? kExitCertificate : kExitConfig;
    }
    return 0;
}
