#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace netecon {

inline constexpr double kInfiniteQuality = std::numeric_limits<double>::infinity();

/// One application-provider market segment: maximum traffic intensity,
/// quality sensitivity and per-unit-traffic revenue.
struct APType {
    double alpha = 0.0;  // maximum traffic intensity (e.g. Tbps)
    double beta = 0.0;   // quality sensitivity, >= 0
    double v = 0.0;      // per-unit-traffic revenue (e.g. $/Mbps-month)
};

/// One transport-service market segment. Capacity is stored as the
/// effective capacity (the maximum load that honors the advertised
/// quality); conversion from raw capacity lives in quality.hpp.
struct TPSegment {
    double p_min = 0.0;  // price floor / cost
    double q = 0.0;      // quality level, smaller is better
    double mu = 0.0;     // effective capacity
    bool is_dummy = false;

    static TPSegment dummy() {
        TPSegment s;
        s.p_min = 0.0;
        s.q = kInfiniteQuality;
        s.mu = std::numeric_limits<double>::infinity();
        s.is_dummy = true;
        return s;
    }
};

/// Ordered collection of AP types. Types with equal (beta, v) are merged
/// at construction by summing their alpha.
class APPopulation {
public:
    APPopulation() = default;

    explicit APPopulation(std::vector<APType> types) {
        for (const auto& t : types) {
            if (t.alpha < 0 || t.beta < 0 || t.v < 0)
                throw std::invalid_argument("APType fields must be non-negative");
        }
        for (const auto& t : types) {
            bool merged = false;
            for (auto& u : types_) {
                if (u.beta == t.beta && u.v == t.v) {
                    u.alpha += t.alpha;
                    merged = true;
                    break;
                }
            }
            if (!merged) types_.push_back(t);
        }
    }

    const std::vector<APType>& types() const { return types_; }
    std::size_t size() const { return types_.size(); }
    const APType& operator[](std::size_t i) const { return types_[i]; }

    double total_alpha() const {
        double s = 0.0;
        for (const auto& t : types_) s += t.alpha;
        return s;
    }

    double v_max() const {
        double m = 0.0;
        for (const auto& t : types_) m = std::max(m, t.v);
        return m;
    }

    double beta_max() const {
        double m = 0.0;
        for (const auto& t : types_) m = std::max(m, t.beta);
        return m;
    }

private:
    std::vector<APType> types_;
};

/// Canonicalized market: non-dummy segments strictly increasing in q,
/// equal-q segments merged, the mandatory dummy segment last.
class Market {
public:
    Market() { segments_.push_back(TPSegment::dummy()); }

    /// Builds a canonical market from an arbitrary segment list.
    explicit Market(std::vector<TPSegment> segments) {
        std::vector<TPSegment> nondummy;
        for (auto& s : segments) {
            if (s.is_dummy) continue;
            if (s.q < 0) throw std::invalid_argument("segment quality must be >= 0");
            if (s.mu < 0) throw std::invalid_argument("segment capacity must be >= 0");
            if (s.p_min < 0) throw std::invalid_argument("segment price floor must be >= 0");
            nondummy.push_back(s);
        }
        std::stable_sort(nondummy.begin(), nondummy.end(),
                         [](const TPSegment& a, const TPSegment& b) { return a.q < b.q; });
        for (const auto& s : nondummy) {
            if (!segments_.empty() && segments_.back().q == s.q) {
                segments_.back().mu += s.mu;
                segments_.back().p_min = std::min(segments_.back().p_min, s.p_min);
            } else {
                segments_.push_back(s);
            }
        }
        segments_.push_back(TPSegment::dummy());
    }

    const std::vector<TPSegment>& segments() const { return segments_; }
    std::size_t size() const { return segments_.size(); }
    const TPSegment& operator[](std::size_t i) const { return segments_[i]; }

    std::size_t dummy_index() const { return segments_.size() - 1; }
    std::size_t non_dummy_count() const { return segments_.size() - 1; }

    /// Sum of non-dummy effective capacities (mu in the normalization).
    double total_mu() const {
        double s = 0.0;
        for (const auto& seg : segments_)
            if (!seg.is_dummy) s += seg.mu;
        return s;
    }

    /// Supply/demand ratio rho = mu / alpha; recomputed, never cached.
    double rho(const APPopulation& pop) const { return total_mu() / pop.total_alpha(); }

    /// Capacity share sigma_I = mu_I / mu.
    double sigma(std::size_t i) const { return segments_.at(i).mu / total_mu(); }

private:
    std::vector<TPSegment> segments_;
};

/// Re-canonicalizes a segment list (merge equal q, sort, append dummy).
inline Market canonicalize(const Market& m) {
    std::vector<TPSegment> segs(m.segments().begin(), m.segments().end());
    return Market(std::move(segs));
}

// ---------------------------------------------------------------------------
// Discrete distribution families used for the AP population grids.
// ---------------------------------------------------------------------------

enum class DistributionKind { Geometric, Uniform, ReversedGeometric, Binomial };

struct DiscreteDistribution {
    DistributionKind kind = DistributionKind::Uniform;
    int levels = 50;
    double p = 0.5;      // binomial success parameter
    double ratio = 0.9;  // per-level geometric decay, truncated and renormalized

    static DiscreteDistribution uniform(int levels = 50) {
        return {DistributionKind::Uniform, levels, 0.5, 0.9};
    }
    static DiscreteDistribution geometric(int levels = 50, double ratio = 0.9) {
        return {DistributionKind::Geometric, levels, 0.5, ratio};
    }
    static DiscreteDistribution reversed_geometric(int levels = 50, double ratio = 0.9) {
        return {DistributionKind::ReversedGeometric, levels, 0.5, ratio};
    }
    static DiscreteDistribution binomial(double p, int levels = 50) {
        return {DistributionKind::Binomial, levels, p, 0.9};
    }
};

namespace detail {

inline void validate_distribution(const DiscreteDistribution& d) {
    if (d.levels < 1) throw std::invalid_argument("distribution needs at least one level");
    switch (d.kind) {
        case DistributionKind::Geometric:
        case DistributionKind::ReversedGeometric:
            if (!(d.ratio > 0.0) || !std::isfinite(d.ratio))
                throw std::invalid_argument("geometric ratio must be positive and finite");
            break;
        case DistributionKind::Binomial:
            if (!(d.p >= 0.0 && d.p <= 1.0))
                throw std::invalid_argument("binomial parameter must lie in [0, 1]");
            break;
        case DistributionKind::Uniform:
            break;
    }
}

inline std::vector<double> geometric_masses(int levels, double ratio) {
    std::vector<double> m(static_cast<std::size_t>(levels));
    double w = 1.0, sum = 0.0;
    for (int k = 0; k < levels; ++k) {
        m[static_cast<std::size_t>(k)] = w;
        sum += w;
        w *= ratio;
    }
    for (auto& x : m) x /= sum;
    return m;
}

inline std::vector<double> binomial_masses(int levels, double p) {
    // BN(p) over L levels is Binomial(L-1, p) shifted to levels 1..L.
    const int n = levels - 1;
    std::vector<double> m(static_cast<std::size_t>(levels));
    if (n == 0) {
        m[0] = 1.0;
        return m;
    }
    double sum = 0.0;
    for (int k = 0; k <= n; ++k) {
        double logc = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
        double logterm = logc;
        if (k > 0) logterm += k * std::log(p);
        if (k < n) logterm += (n - k) * std::log1p(-p);
        double val;
        if ((k > 0 && p == 0.0) || (k < n && p == 1.0))
            val = 0.0;
        else
            val = std::exp(logterm);
        m[static_cast<std::size_t>(k)] = val;
        sum += val;
    }
    for (auto& x : m) x /= sum;
    return m;
}

}  // namespace detail

/// Probability masses over support levels 1..levels, summing to one.
inline std::vector<double> distribution_masses(const DiscreteDistribution& d) {
    detail::validate_distribution(d);
    switch (d.kind) {
        case DistributionKind::Uniform:
            return std::vector<double>(static_cast<std::size_t>(d.levels), 1.0 / d.levels);
        case DistributionKind::Geometric:
            return detail::geometric_masses(d.levels, d.ratio);
        case DistributionKind::ReversedGeometric: {
            auto m = detail::geometric_masses(d.levels, d.ratio);
            std::reverse(m.begin(), m.end());
            return m;
        }
        case DistributionKind::Binomial:
            return detail::binomial_masses(d.levels, d.p);
    }
    throw std::logic_error("unreachable");
}

/// Mass of a single support level (1-based).
inline double distribution_pmf(const DiscreteDistribution& d, int level) {
    detail::validate_distribution(d);
    if (level < 1 || level > d.levels)
        throw std::out_of_range("distribution level out of range");
    return distribution_masses(d)[static_cast<std::size_t>(level - 1)];
}

/// Builds the levels^2 AP grid with beta_k = (k-0.5)/levels and
/// v_m = (m-0.5)/levels, alpha split as the product of the two marginals.
inline APPopulation build_population(const DiscreteDistribution& f_beta,
                                     const DiscreteDistribution& f_v, int levels,
                                     double total_alpha) {
    if (levels < 1) throw std::invalid_argument("levels must be >= 1");
    if (!(total_alpha > 0.0)) throw std::invalid_argument("total_alpha must be positive");
    DiscreteDistribution fb = f_beta;
    DiscreteDistribution fv = f_v;
    fb.levels = levels;
    fv.levels = levels;
    const auto mb = distribution_masses(fb);
    const auto mv = distribution_masses(fv);

    std::vector<APType> types;
    types.reserve(static_cast<std::size_t>(levels) * static_cast<std::size_t>(levels));
    for (int k = 1; k <= levels; ++k) {
        const double beta = (k - 0.5) / levels;
        for (int m = 1; m <= levels; ++m) {
            const double v = (m - 0.5) / levels;
            types.push_back({total_alpha * mb[static_cast<std::size_t>(k - 1)] *
                                 mv[static_cast<std::size_t>(m - 1)],
                             beta, v});
        }
    }
    return APPopulation(std::move(types));
}

}  // namespace netecon
