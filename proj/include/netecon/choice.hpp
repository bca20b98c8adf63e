#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "netecon/core.hpp"

namespace netecon {

/// Relative tolerance under which two utilities count as a tie.
inline constexpr double kTieTolerance = 1e-12;

/// Throughput alpha * exp(-beta * q); exactly zero at the dummy quality.
inline double throughput(const APType& ap, double q) {
    if (std::isinf(q)) return 0.0;
    if (q < 0.0) throw std::invalid_argument("quality must be non-negative");
    return ap.alpha * std::exp(-ap.beta * q);
}

/// Total-profit utility alpha * (v - p) * exp(-beta * q).
inline double utility(const APType& ap, double p, double q) {
    if (!std::isfinite(p)) throw std::invalid_argument("price must be finite");
    if (std::isinf(q)) return 0.0;
    return (ap.v - p) * throughput(ap, q);
}

/// The unique price making utility(ap, p, q) equal alpha * U.
inline double indifference_price(const APType& ap, double normalized_utility, double q) {
    if (normalized_utility < 0.0) throw std::invalid_argument("normalized utility must be >= 0");
    if (!std::isfinite(q)) throw std::invalid_argument("quality must be finite");
    return ap.v - normalized_utility * std::exp(ap.beta * q);
}

namespace detail {

inline bool strictly_better(double candidate, double best) {
    if (!(candidate > best)) return false;
    const double scale = std::max(std::abs(candidate), std::abs(best));
    return candidate - best > kTieTolerance * scale;
}

}  // namespace detail

/// Utility argmax over the market's segments. Ties go to the smaller q
/// (segments are quality-sorted, dummy last), so the first strict maximum
/// in canonical order wins.
inline std::size_t best_tp(const APType& ap, std::span<const double> prices,
                           const Market& market) {
    if (prices.size() != market.size())
        throw std::invalid_argument("price vector does not match market segments");
    std::size_t best = 0;
    double best_u = utility(ap, prices[0], market[0].q);
    for (std::size_t i = 1; i < market.size(); ++i) {
        const double u = utility(ap, prices[i], market[i].q);
        if (detail::strictly_better(u, best_u)) {
            best = i;
            best_u = u;
        }
    }
    return best;
}

/// Per-AP choices I_i and the inverse market-share sets N_I.
struct Assignment {
    std::vector<std::size_t> choice;             // AP index -> segment index
    std::vector<std::vector<std::size_t>> shares;  // segment index -> AP indices
};

inline Assignment partition(const APPopulation& population, std::span<const double> prices,
                            const Market& market) {
    Assignment a;
    a.choice.resize(population.size());
    a.shares.assign(market.size(), {});
    for (std::size_t i = 0; i < population.size(); ++i) {
        const std::size_t seg = best_tp(population[i], prices, market);
        a.choice[i] = seg;
        a.shares[seg].push_back(i);
    }
    return a;
}

}  // namespace netecon
