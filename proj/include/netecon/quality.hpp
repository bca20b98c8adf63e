#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "netecon/core.hpp"

namespace netecon {

/// Raw-to-effective capacity model. MG1FIFO uses the Pollaczek-Khinchine
/// mean delay of an M/G/1 FIFO queue; DirectEta pins the utilization
/// factor mu/nu directly (how the calibrated benchmark specifies it).
struct QualityModel {
    enum class Kind { MG1FIFO, DirectEta };

    Kind kind = Kind::MG1FIFO;
    double er = 1.0;   // expected residual service time E[R], MG1FIFO
    double eta = 1.0;  // utilization factor in (0, 1], DirectEta

    static QualityModel mg1_fifo(double er = 1.0) {
        if (!(er > 0.0)) throw std::invalid_argument("E[R] must be positive");
        QualityModel m;
        m.kind = Kind::MG1FIFO;
        m.er = er;
        return m;
    }

    static QualityModel direct_eta(double eta) {
        if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in (0, 1]");
        QualityModel m;
        m.kind = Kind::DirectEta;
        m.eta = eta;
        return m;
    }
};

/// Mean delay at load lambda and capacity nu. For DirectEta there is no
/// closed-form curve: the nominal quality q is returned while lambda is
/// within the effective capacity, +inf otherwise.
inline double achieved_quality(const QualityModel& model, double lambda, double nu,
                               double nominal_q = 0.0) {
    if (!(nu > 0.0)) throw std::invalid_argument("capacity must be positive");
    if (lambda < 0.0) throw std::invalid_argument("load must be non-negative");
    if (model.kind == QualityModel::Kind::MG1FIFO) {
        if (lambda >= nu) return std::numeric_limits<double>::infinity();
        return lambda * model.er / (nu - lambda);
    }
    return lambda <= model.eta * nu ? nominal_q : std::numeric_limits<double>::infinity();
}

/// The largest lambda whose achieved quality stays within q.
inline double max_throughput(const QualityModel& model, double q, double nu) {
    if (!(nu > 0.0)) throw std::invalid_argument("capacity must be positive");
    if (model.kind == QualityModel::Kind::MG1FIFO) {
        if (!(q > 0.0)) throw std::invalid_argument("quality bound must be positive");
        if (std::isinf(q)) return nu;
        return nu * q / (model.er + q);
    }
    return model.eta * nu;
}

/// Maximum acceptable throughput per unit capacity, eta = mu / nu.
inline double eta(const QualityModel& model, double q) {
    if (model.kind == QualityModel::Kind::MG1FIFO) {
        if (!(q > 0.0)) throw std::invalid_argument("quality bound must be positive");
        if (std::isinf(q)) return 1.0;
        return q / (model.er + q);
    }
    return model.eta;
}

/// Segment with effective capacity derived from raw capacity nu.
inline TPSegment effective_segment(double p_min, double q, double nu,
                                   const QualityModel& model) {
    TPSegment s;
    s.p_min = p_min;
    s.q = q;
    s.mu = max_throughput(model, q, nu);
    return s;
}

}  // namespace netecon
