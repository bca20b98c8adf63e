#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "netecon/core.hpp"
#include "netecon/equilibrium.hpp"

namespace netecon {

/// Normalized three-tier (or n-tier) system: qualities, capacities either
/// direct or as shares of rho, AP grid distributions.
struct SystemSpec {
    std::vector<double> qualities;        // ascending, one per non-dummy segment
    std::vector<double> mu;               // direct effective capacities, or
    std::vector<double> sigma;            // capacity shares combined with rho
    double rho = 0.5;
    std::vector<double> p_min;            // defaults to zeros
    DiscreteDistribution f_beta = DiscreteDistribution::geometric();
    DiscreteDistribution f_v = DiscreteDistribution::uniform();
    int levels = 50;
    double total_alpha = 1.0;
    double grid_step = 0.0;               // 0 -> PriceGrid default
};

struct BuiltSystem {
    Market market;
    APPopulation population;
    PriceGrid grid;
};

inline BuiltSystem build_system(const SystemSpec& spec) {
    if (spec.qualities.empty()) throw std::invalid_argument("system needs at least one quality");
    std::vector<double> mus;
    if (!spec.mu.empty()) {
        if (spec.mu.size() != spec.qualities.size())
            throw std::invalid_argument("mu list must match qualities");
        mus = spec.mu;
    } else {
        if (spec.sigma.size() != spec.qualities.size())
            throw std::invalid_argument("sigma list must match qualities");
        double sum = 0.0;
        for (double s : spec.sigma) sum += s;
        if (!(sum > 0.0)) throw std::invalid_argument("capacity shares must be positive");
        for (double s : spec.sigma)
            mus.push_back(s / sum * spec.rho * spec.total_alpha);
    }
    std::vector<TPSegment> segs;
    for (std::size_t i = 0; i < spec.qualities.size(); ++i) {
        TPSegment s;
        s.q = spec.qualities[i];
        s.mu = mus[i];
        s.p_min = i < spec.p_min.size() ? spec.p_min[i] : 0.0;
        segs.push_back(s);
    }
    Market market(std::move(segs));
    APPopulation population =
        build_population(spec.f_beta, spec.f_v, spec.levels, spec.total_alpha);
    PriceGrid grid = PriceGrid::make(market, population, spec.grid_step);
    return {std::move(market), std::move(population), std::move(grid)};
}

enum class SweepAxis {
    MuSegment,      // effective capacity of one segment
    Rho,            // aggregate capacity / demand ratio
    FBetaBinomialP  // binomial parameter of the sensitivity distribution
};

struct SweepSpec {
    SystemSpec base;
    SweepAxis axis = SweepAxis::Rho;
    std::size_t mu_index = 0;       // segment for MuSegment
    std::vector<double> points;     // strictly monotone, non-empty
};

struct SweepRow {
    double axis_value = 0.0;
    std::vector<double> prices;  // per non-dummy segment, normalized units
    bool ok = false;
};

struct SweepTable {
    std::vector<std::string> segment_names;  // "p_A", "p_B", ...
    std::vector<SweepRow> rows;
};

namespace detail {

inline void check_points(const std::vector<double>& pts) {
    if (pts.empty()) throw std::invalid_argument("sweep needs at least one point");
    const bool increasing = pts.size() < 2 || pts[1] > pts[0];
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (increasing ? !(pts[i] > pts[i - 1]) : !(pts[i] < pts[i - 1]))
            throw std::invalid_argument("sweep points must be strictly monotone");
}

inline std::vector<std::string> segment_names(std::size_t n) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i)
        names.push_back(std::string("p_") + static_cast<char>('A' + (i % 26)));
    return names;
}

inline SystemSpec at_point(const SweepSpec& spec, double x) {
    SystemSpec s = spec.base;
    switch (spec.axis) {
        case SweepAxis::MuSegment:
            if (s.mu.empty()) throw std::invalid_argument("MuSegment axis needs direct mu list");
            s.mu.at(spec.mu_index) = x;
            break;
        case SweepAxis::Rho:
            if (s.sigma.empty()) throw std::invalid_argument("Rho axis needs capacity shares");
            s.rho = x;
            break;
        case SweepAxis::FBetaBinomialP:
            s.f_beta = DiscreteDistribution::binomial(x, s.levels);
            break;
    }
    return s;
}

}  // namespace detail

/// One competitive solve per point, rows ordered by axis value. Failed
/// points carry ok = false and are never interpolated.
inline SweepTable run_sweep(const SweepSpec& spec) {
    detail::check_points(spec.points);
    SweepTable table;
    table.segment_names = detail::segment_names(spec.base.qualities.size());
    for (double x : spec.points) {
        SweepRow row;
        row.axis_value = x;
        try {
            const auto sys = build_system(detail::at_point(spec, x));
            const auto result = solve(sys.market, sys.population, sys.grid);
            if (!result.feasible || !result.competitive)
                throw std::runtime_error("equilibrium certificate failed");
            row.prices.assign(result.prices.begin(),
                              result.prices.begin() +
                                  static_cast<std::ptrdiff_t>(sys.market.non_dummy_count()));
            row.ok = true;
        } catch (const std::exception&) {
            row.prices.assign(spec.base.qualities.size(),
                              std::numeric_limits<double>::quiet_NaN());
            row.ok = false;
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

// ---------------------------------------------------------------------------
// Fixed-menu partition sweeps (market-share rasters over the (beta, v) grid).
// ---------------------------------------------------------------------------

enum class PartitionAxis {
    MenuPrice,    // price of one menu entry
    QualityScale  // common factor on all menu qualities
};

struct PartitionSweepSpec {
    std::vector<double> qualities;  // fixed menu, ascending
    std::vector<double> prices;     // aligned with qualities
    PartitionAxis axis = PartitionAxis::MenuPrice;
    std::size_t price_index = 0;
    std::vector<double> points;
    int levels = 50;  // raster resolution on the (beta, v) grid
};

struct PartitionRaster {
    double axis_value = 0.0;
    std::vector<double> beta;     // per AP type
    std::vector<double> v;        // per AP type
    std::vector<int> segment;     // chosen segment, -1 for the dummy
};

inline std::vector<PartitionRaster> run_partition_sweep(const PartitionSweepSpec& spec) {
    detail::check_points(spec.points);
    if (spec.qualities.size() != spec.prices.size())
        throw std::invalid_argument("menu prices must match qualities");
    std::vector<PartitionRaster> out;
    const APPopulation pop = build_population(DiscreteDistribution::uniform(),
                                              DiscreteDistribution::uniform(),
                                              spec.levels, 1.0);
    for (double x : spec.points) {
        std::vector<double> qs = spec.qualities;
        std::vector<double> ps = spec.prices;
        if (spec.axis == PartitionAxis::MenuPrice)
            ps.at(spec.price_index) = x;
        else
            for (auto& q : qs) q *= x;

        std::vector<TPSegment> segs;
        for (std::size_t i = 0; i < qs.size(); ++i) {
            TPSegment s;
            s.q = qs[i];
            s.mu = std::numeric_limits<double>::infinity();
            segs.push_back(s);
        }
        const Market market{std::move(segs)};
        // canonical order may differ from menu order only if qualities tie
        std::vector<double> prices(market.size(), 0.0);
        for (std::size_t i = 0; i < qs.size(); ++i) {
            for (std::size_t j = 0; j + 1 < market.size(); ++j)
                if (market[j].q == qs[i]) prices[j] = ps[i];
        }
        const Assignment a = partition(pop, prices, market);

        PartitionRaster raster;
        raster.axis_value = x;
        for (std::size_t i = 0; i < pop.size(); ++i) {
            raster.beta.push_back(pop[i].beta);
            raster.v.push_back(pop[i].v);
            raster.segment.push_back(a.choice[i] + 1 == market.size()
                                         ? -1
                                         : static_cast<int>(a.choice[i]));
        }
        out.push_back(std::move(raster));
    }
    return out;
}

}  // namespace netecon
