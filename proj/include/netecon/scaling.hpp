#pragma once

#include <stdexcept>
#include <vector>

#include "netecon/core.hpp"
#include "netecon/equilibrium.hpp"

namespace netecon {

/// Affine system transformation: prices and revenues map through
/// x -> k1 * x - k2, qualities through q -> q / k3 (sensitivities pick up
/// the inverse factor), traffic and capacities scale by kappa. The argmax
/// choices of every AP are invariant under any such transformation.
struct ScalingFactors {
    double k1 = 1.0;     // price scale
    double k2 = 0.0;     // price offset (scaled = k1 * x - k2)
    double k3 = 1.0;     // quality scale (scaled q = q / k3)
    double kappa = 1.0;  // throughput scale
};

inline double scale_price(double p, const ScalingFactors& f) { return f.k1 * p - f.k2; }

/// Recovers a real price from its normalized value.
inline double denormalize_price(double p_scaled, const ScalingFactors& f) {
    return (p_scaled + f.k2) / f.k1;
}

inline APPopulation apply_scaling(const APPopulation& population, const ScalingFactors& f) {
    std::vector<APType> types;
    types.reserve(population.size());
    for (const auto& t : population.types())
        types.push_back({f.kappa * t.alpha, f.k3 * t.beta, scale_price(t.v, f)});
    return APPopulation(std::move(types));
}

inline Market apply_scaling(const Market& market, const ScalingFactors& f) {
    std::vector<TPSegment> segs;
    for (const auto& s : market.segments()) {
        if (s.is_dummy) continue;
        TPSegment t = s;
        t.p_min = scale_price(s.p_min, f);
        t.q = s.q / f.k3;
        t.mu = f.kappa * s.mu;
        segs.push_back(t);
    }
    return Market(std::move(segs));
}

/// Transforms a price grid with (k1, k2) so grid alignment is preserved:
/// the k-th candidate of every segment maps onto the k-th candidate of
/// the scaled grid.
inline PriceGrid apply_scaling(const PriceGrid& grid, const ScalingFactors& f) {
    PriceGrid g;
    g.step = f.k1 * grid.step;
    g.ceiling = scale_price(grid.ceiling, f);
    for (std::size_t i = 0; i + 1 < grid.floors.size(); ++i)
        g.floors.push_back(scale_price(grid.floors[i], f));
    g.floors.push_back(0.0);  // dummy
    return g;
}

struct NormalizedSystem {
    Market market;
    APPopulation population;
    ScalingFactors factors;
};

/// System normalization: beta and v land in [0, 1], total alpha becomes 1
/// and each mu_I becomes sigma_I * rho. Prices of the normalized system
/// recover through denormalize_price.
inline NormalizedSystem normalize(const Market& market, const APPopulation& population) {
    const double v_max = population.v_max();
    const double beta_max = population.beta_max();
    double p_min = std::numeric_limits<double>::infinity();
    for (const auto& s : market.segments())
        if (!s.is_dummy) p_min = std::min(p_min, s.p_min);
    if (market.non_dummy_count() == 0) p_min = 0.0;
    if (!(v_max > p_min))
        throw std::invalid_argument("degenerate population: v_max must exceed p_min");
    if (!(beta_max > 0.0))
        throw std::invalid_argument("degenerate population: beta_max must be positive");

    ScalingFactors f;
    f.k1 = 1.0 / (v_max - p_min);
    f.k2 = p_min / (v_max - p_min);
    f.k3 = 1.0 / beta_max;
    f.kappa = 1.0 / population.total_alpha();
    return {apply_scaling(market, f), apply_scaling(population, f), f};
}

}  // namespace netecon
