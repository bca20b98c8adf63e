#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "netecon/choice.hpp"
#include "netecon/core.hpp"

namespace netecon {

/// Discretized price space. Candidate prices for segment I are
/// floor_I + k * step, k = 0..count(I)-1, all <= ceiling. The default
/// ceiling sits strictly above v_max so an unaffordable price always
/// exists (the finite stand-in for initializing prices at infinity).
struct PriceGrid {
    double step = 0.0;
    std::vector<double> floors;  // per canonical segment, dummy entry 0
    double ceiling = 0.0;

    static PriceGrid make(const Market& market, const APPopulation& population,
                          double step = 0.0, double ceiling = 0.0) {
        PriceGrid g;
        double min_floor = std::numeric_limits<double>::infinity();
        for (const auto& s : market.segments()) {
            g.floors.push_back(s.is_dummy ? 0.0 : s.p_min);
            if (!s.is_dummy) min_floor = std::min(min_floor, s.p_min);
        }
        if (market.non_dummy_count() == 0) min_floor = 0.0;
        const double v_max = population.v_max();
        g.step = step > 0.0 ? step : 1e-3 * std::max(v_max - min_floor, 1e-12);
        g.ceiling = ceiling > 0.0 ? ceiling : v_max + 2.0 * g.step;
        if (g.ceiling < v_max)
            throw std::invalid_argument("price grid must cover [p_min, v_max]");
        for (std::size_t i = 0; i + 1 < g.floors.size(); ++i)
            if (g.floors[i] > g.ceiling)
                throw std::invalid_argument("segment price floor exceeds grid ceiling");
        return g;
    }

    int count(std::size_t seg) const {
        return static_cast<int>(std::floor((ceiling - floors[seg]) / step)) + 1;
    }

    double price(std::size_t seg, int k) const { return floors[seg] + k * step; }
};

/// Precomputes the per-(type, segment) throughput weights so repeated
/// demand evaluations reduce to an argmax over (v_i - p_I) * w.
class DemandEvaluator {
public:
    DemandEvaluator(const Market& market, const APPopulation& population)
        : market_(&market), population_(&population) {
        const std::size_t n = population.size();
        const std::size_t m = market.size();
        weights_.resize(n * m);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < m; ++j)
                weights_[i * m + j] = throughput(population[i], market[j].q);
    }

    std::size_t choose(std::size_t i, std::span<const double> prices) const {
        const std::size_t m = market_->size();
        const double* w = &weights_[i * m];
        const APType& ap = (*population_)[i];
        std::size_t best = 0;
        double best_u = (ap.v - prices[0]) * w[0];
        for (std::size_t j = 1; j < m; ++j) {
            const double u = (ap.v - prices[j]) * w[j];
            if (detail::strictly_better(u, best_u)) {
                best = j;
                best_u = u;
            }
        }
        return best;
    }

    const Market& market() const { return *market_; }
    const APPopulation& population() const { return *population_; }

    std::vector<double> segment_loads(std::span<const double> prices) const {
        const std::size_t m = market_->size();
        std::vector<double> out(m, 0.0);
        for (std::size_t i = 0; i < population_->size(); ++i) {
            const std::size_t j = choose(i, prices);
            out[j] += weights_[i * m + j];
        }
        return out;
    }

    double segment_load(std::size_t seg, std::span<const double> prices) const {
        const std::size_t m = market_->size();
        double out = 0.0;
        for (std::size_t i = 0; i < population_->size(); ++i)
            if (choose(i, prices) == seg) out += weights_[i * m + seg];
        return out;
    }

private:
    const Market* market_;
    const APPopulation* population_;
    std::vector<double> weights_;
};

/// Per-segment demand lambda_I at the given prices (dummy load included,
/// never capacity-checked).
inline std::vector<double> demand(std::span<const double> prices, const Market& market,
                                  const APPopulation& population) {
    return DemandEvaluator(market, population).segment_loads(prices);
}

struct EquilibriumResult {
    std::vector<double> prices;
    Assignment assignment;
    std::vector<double> loads;
    bool feasible = false;
    bool competitive = false;
    int iterations = 0;
};

struct VerifyReport {
    bool feasible = true;      // Definition 8 clause 1
    bool maximal = true;       // no unilateral price with larger feasible load
    bool competitive = true;   // no lower unilateral feasible price
    std::size_t segment = static_cast<std::size_t>(-1);
    double price = std::numeric_limits<double>::quiet_NaN();
    std::string message;

    bool ok(bool require_competitive) const {
        return feasible && maximal && (!require_competitive || competitive);
    }
};

inline double load_tolerance(const APPopulation& population) {
    return 1e-12 * population.total_alpha();
}

/// Scans the full grid per segment, other prices fixed, checking the
/// equilibrium clauses against an independent demand recomputation.
inline VerifyReport verify(const EquilibriumResult& result, const Market& market,
                           const APPopulation& population, const PriceGrid& grid,
                           bool competitive) {
    VerifyReport rep;
    DemandEvaluator ev(market, population);
    const double tol = load_tolerance(population);
    const auto loads = ev.segment_loads(result.prices);

    for (std::size_t seg = 0; seg + 1 < market.size(); ++seg) {
        if (loads[seg] > market[seg].mu + tol) {
            rep.feasible = false;
            rep.segment = seg;
            rep.price = result.prices[seg];
            rep.message = "infeasible load at segment " + std::to_string(seg);
            return rep;
        }
    }

    std::vector<double> prices(result.prices.begin(), result.prices.end());
    for (std::size_t seg = 0; seg + 1 < market.size(); ++seg) {
        const double original = prices[seg];
        for (int k = 0; k < grid.count(seg); ++k) {
            const double p = grid.price(seg, k);
            if (p == original) continue;
            prices[seg] = p;
            const double load = ev.segment_load(seg, prices);
            prices[seg] = original;
            if (load > market[seg].mu + tol) continue;
            if (load > loads[seg] + tol) {
                rep.maximal = false;
                rep.segment = seg;
                rep.price = p;
                rep.message = "larger feasible load exists at segment " +
                              std::to_string(seg);
                return rep;
            }
            if (competitive && p < original) {
                rep.competitive = false;
                rep.segment = seg;
                rep.price = p;
                rep.message = "lower feasible price exists at segment " +
                              std::to_string(seg);
                return rep;
            }
        }
    }
    return rep;
}

namespace detail {

inline EquilibriumResult finish(const Market& market, const APPopulation& population,
                                const PriceGrid& grid, std::vector<double> prices,
                                int iterations, const DemandEvaluator& ev) {
    EquilibriumResult r;
    r.prices = std::move(prices);
    r.assignment = partition(population, r.prices, market);
    r.loads = ev.segment_loads(r.prices);
    r.iterations = iterations;
    const auto rep = verify(r, market, population, grid, true);
    r.feasible = rep.feasible;
    r.competitive = rep.feasible && rep.maximal && rep.competitive;
    return r;
}

}  // namespace detail

/// Competitive price-equilibrium solver: start every price at the grid
/// ceiling, round-robin over segments in quality order, each time moving
/// to the lowest grid price keeping the segment's own load within mu.
/// Prices never increase, so the finite grid forces termination.
inline EquilibriumResult solve(const Market& market, const APPopulation& population,
                               const PriceGrid& grid) {
    DemandEvaluator ev(market, population);
    const double tol = load_tolerance(population);
    const std::size_t n = market.non_dummy_count();

    std::vector<int> idx(n);
    std::vector<double> prices(market.size(), 0.0);
    for (std::size_t s = 0; s < n; ++s) {
        idx[s] = grid.count(s) - 1;
        prices[s] = grid.price(s, idx[s]);
    }

    int passes = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        ++passes;
        for (std::size_t s = 0; s < n; ++s) {
            // Own load is non-increasing in own price, so the feasible
            // candidates form an upper interval; binary search its edge.
            int lo = 0, hi = idx[s];
            while (lo < hi) {
                const int mid = lo + (hi - lo) / 2;
                prices[s] = grid.price(s, mid);
                if (ev.segment_load(s, prices) <= market[s].mu + tol)
                    hi = mid;
                else
                    lo = mid + 1;
            }
            prices[s] = grid.price(s, lo);
            if (lo != idx[s]) {
                idx[s] = lo;
                changed = true;
            }
        }
    }
    return detail::finish(market, population, grid, std::move(prices), passes, ev);
}

/// Constructive existence variant: start at the floors and raise each
/// overloaded segment until feasible. Monotone non-decreasing; satisfies
/// the feasibility and no-larger-load clauses but not necessarily the
/// competitive refinement.
inline EquilibriumResult solve_ascending(const Market& market,
                                         const APPopulation& population,
                                         const PriceGrid& grid) {
    DemandEvaluator ev(market, population);
    const double tol = load_tolerance(population);
    const std::size_t n = market.non_dummy_count();

    std::vector<int> idx(n, 0);
    std::vector<double> prices(market.size(), 0.0);
    for (std::size_t s = 0; s < n; ++s) prices[s] = grid.price(s, 0);

    int passes = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        ++passes;
        for (std::size_t s = 0; s < n; ++s) {
            if (ev.segment_load(s, prices) <= market[s].mu + tol) continue;
            int lo = idx[s], hi = grid.count(s) - 1;
            while (lo < hi) {
                const int mid = lo + (hi - lo) / 2;
                prices[s] = grid.price(s, mid);
                if (ev.segment_load(s, prices) <= market[s].mu + tol)
                    hi = mid;
                else
                    lo = mid + 1;
            }
            idx[s] = lo;
            prices[s] = grid.price(s, lo);
            changed = true;
        }
    }
    return detail::finish(market, population, grid, std::move(prices), passes, ev);
}

}  // namespace netecon
