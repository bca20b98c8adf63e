#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "netecon/core.hpp"
#include "netecon/equilibrium.hpp"

namespace netecon {

/// Terabits delivered by 1 Mbps sustained over a 30-day month.
inline constexpr double kTerabitsPerMbpsMonth = 2.592;

/// $/Mbps-month -> $/terabit at full sustained utilization.
inline double convert_price(double usd_per_mbps_month) {
    if (usd_per_mbps_month < 0.0) throw std::invalid_argument("price must be >= 0");
    return usd_per_mbps_month / kTerabitsPerMbpsMonth;
}

/// Two-service (A = CDN/private peering, B = IP transit), three-AP-class
/// (a = video, b = web, c = inelastic) yearly growth model.
struct Scenario {
    int anchor_year = 2011;       // year the raw capacities are pinned to
    int start_year = 2007;
    int end_year = 2014;
    std::array<double, 2> nu_anchor_tbps = {14.0, 7.0};   // (A, B)
    double r_nu = 1.5;            // capacity annual growth multiplier
    std::array<double, 2> eta = {0.3, 0.9};               // (eta_A, eta_B)
    double alpha_start_tbps = 10.0;
    double r_alpha = 1.22;        // demand annual growth multiplier
    std::array<double, 3> weights_start = {0.02, 0.75, 0.23};  // (a, b, c)
    std::array<double, 3> weight_growth = {2.5, 1.5, 1.2};
    std::array<double, 3> betas = {10.0, 1.0, 0.1};
    std::array<double, 2> qualities = {0.01, 1.0};        // (q_A, q_B)
    double v_max = 10.0;          // $/Mbps-month revenue ceiling
    int v_levels = 100;
    std::array<double, 2> p_min = {0.0, 0.0};             // per-service floor
    double grid_step = 0.01;      // $/Mbps-month

    // Decision-scenario overlay: when horizon_share_a >= 0 the A-share of
    // total raw capacity moves linearly from its anchor value to this
    // target at end_year, with the total capacity path preserved.
    double horizon_share_a = -1.0;

    void validate() const {
        if (end_year < start_year) throw std::invalid_argument("end_year before start_year");
        if (!(r_nu > 0.0) || !(r_alpha > 0.0))
            throw std::invalid_argument("growth multipliers must be positive");
        for (double w : weights_start)
            if (!(w > 0.0)) throw std::invalid_argument("start weights must be positive");
        for (double g : weight_growth)
            if (!(g > 0.0)) throw std::invalid_argument("weight growth must be positive");
        for (double e : eta)
            if (!(e > 0.0 && e <= 1.0)) throw std::invalid_argument("eta must lie in (0, 1]");
        if (!(qualities[0] < qualities[1]))
            throw std::invalid_argument("q_A must be better (smaller) than q_B");
        if (v_levels < 1) throw std::invalid_argument("v_levels must be >= 1");
        if (!(v_max > 0.0)) throw std::invalid_argument("v_max must be positive");
    }
};

struct YearlyState {
    int year = 0;
    double mu_A = 0.0, mu_B = 0.0;
    double alpha_a = 0.0, alpha_b = 0.0, alpha_c = 0.0;
    double p_A = 0.0, p_B = 0.0;        // $/Mbps-month
    bool ok = false;
};

namespace detail {

inline std::array<double, 2> raw_capacity(const Scenario& s, int year) {
    const double g = std::pow(s.r_nu, year - s.anchor_year);
    double share_a = s.nu_anchor_tbps[0] / (s.nu_anchor_tbps[0] + s.nu_anchor_tbps[1]);
    if (s.horizon_share_a >= 0.0 && year > s.anchor_year && s.end_year > s.anchor_year) {
        const double t = std::min(1.0, static_cast<double>(year - s.anchor_year) /
                                           (s.end_year - s.anchor_year));
        share_a = share_a + t * (s.horizon_share_a - share_a);
    }
    const double total = (s.nu_anchor_tbps[0] + s.nu_anchor_tbps[1]) * g;
    return {share_a * total, (1.0 - share_a) * total};
}

}  // namespace detail

/// Builds one year's market and population from the growth model.
inline std::pair<Market, APPopulation> build_year(const Scenario& s, int year) {
    s.validate();
    const auto nu = detail::raw_capacity(s, year);

    std::vector<TPSegment> segs;
    for (std::size_t i = 0; i < 2; ++i) {
        TPSegment seg;
        seg.q = s.qualities[i];
        seg.mu = s.eta[i] * nu[i];
        seg.p_min = s.p_min[i];
        segs.push_back(seg);
    }
    Market market(std::move(segs));

    const double alpha = s.alpha_start_tbps * std::pow(s.r_alpha, year - s.start_year);
    std::array<double, 3> w{};
    double wsum = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        w[i] = s.weights_start[i] * std::pow(s.weight_growth[i], year - s.start_year);
        wsum += w[i];
    }
    std::vector<APType> types;
    types.reserve(3 * static_cast<std::size_t>(s.v_levels));
    for (std::size_t i = 0; i < 3; ++i) {
        const double class_alpha = w[i] / wsum * alpha;
        for (int j = 1; j <= s.v_levels; ++j)
            types.push_back({class_alpha / s.v_levels, s.betas[i],
                             s.v_max * j / s.v_levels});
    }
    return {std::move(market), APPopulation(std::move(types))};
}

/// One competitive solve per year; prices in $/Mbps-month.
inline std::vector<YearlyState> project(const Scenario& s) {
    s.validate();
    std::vector<YearlyState> out;
    for (int year = s.start_year; year <= s.end_year; ++year) {
        YearlyState st;
        st.year = year;
        try {
            auto [market, population] = build_year(s, year);
            st.mu_A = market[0].mu;
            st.mu_B = market[1].mu;
            st.alpha_a = 0.0;
            const auto& types = population.types();
            for (const auto& t : types) {
                if (t.beta == s.betas[0]) st.alpha_a += t.alpha;
                else if (t.beta == s.betas[1]) st.alpha_b += t.alpha;
                else st.alpha_c += t.alpha;
            }
            const PriceGrid grid = PriceGrid::make(market, population, s.grid_step);
            const auto result = solve(market, population, grid);
            if (!result.feasible || !result.competitive)
                throw std::runtime_error("equilibrium certificate failed");
            st.p_A = result.prices[0];
            st.p_B = result.prices[1];
            st.ok = true;
        } catch (const std::exception&) {
            st.ok = false;
        }
        out.push_back(st);
    }
    return out;
}

/// Mean of the annual fractional drops (p(y-1) - p(y)) / p(y-1) between
/// two years of a projection, for the given service (0 = A, 1 = B).
inline double mean_annual_drop(const std::vector<YearlyState>& proj, int from_year,
                               int to_year, int service) {
    double sum = 0.0;
    int n = 0;
    for (std::size_t i = 1; i < proj.size(); ++i) {
        if (proj[i].year <= from_year || proj[i].year > to_year) continue;
        const double prev = service == 0 ? proj[i - 1].p_A : proj[i - 1].p_B;
        const double cur = service == 0 ? proj[i].p_A : proj[i].p_B;
        if (!(prev > 0.0)) throw std::runtime_error("price drop undefined at zero price");
        sum += (prev - cur) / prev;
        ++n;
    }
    if (n == 0) throw std::invalid_argument("no year pairs in range");
    return sum / n;
}

enum class SensitivityKnob { AlphaStart, RAlpha, EtaA, EtaB };

struct ProjectionFamily {
    std::vector<double> values;
    std::vector<std::vector<YearlyState>> projections;
};

inline ProjectionFamily sensitivity(const Scenario& s, SensitivityKnob knob,
                                    const std::vector<double>& values) {
    ProjectionFamily fam;
    fam.values = values;
    for (double v : values) {
        Scenario t = s;
        switch (knob) {
            case SensitivityKnob::AlphaStart: t.alpha_start_tbps = v; break;
            case SensitivityKnob::RAlpha: t.r_alpha = v; break;
            case SensitivityKnob::EtaA: t.eta[0] = v; break;
            case SensitivityKnob::EtaB: t.eta[1] = v; break;
        }
        fam.projections.push_back(project(t));
    }
    return fam;
}

/// Capacity-expansion decision: projections under alternative r_nu values.
inline ProjectionFamily decision_growth(const Scenario& s, const std::vector<double>& r_nus) {
    ProjectionFamily fam;
    fam.values = r_nus;
    for (double r : r_nus) {
        Scenario t = s;
        t.r_nu = r;
        fam.projections.push_back(project(t));
    }
    return fam;
}

/// Peering decision: re-split the horizon-year capacity to the given
/// nu_A : nu_B ratios while preserving the total capacity growth path.
inline ProjectionFamily decision_ratio(const Scenario& s,
                                       const std::vector<std::pair<double, double>>& ratios) {
    ProjectionFamily fam;
    for (const auto& [a, b] : ratios) {
        if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("ratio parts must be positive");
        Scenario t = s;
        t.horizon_share_a = a / (a + b);
        fam.values.push_back(a / b);
        fam.projections.push_back(project(t));
    }
    return fam;
}

}  // namespace netecon
