// Weighted entrywise metric emulating weak-operator convergence at a fixed
// truncation. Weights decay geometrically with the basis index, so sequences
// whose matrix entries drift to high indices converge here while keeping
// operator norm one.
#pragma once

#include "grasstool/core.hpp"

#include <cmath>

namespace grasstool {

struct WeakMetric {
    Eigen::Index dim = 0;
    rvec weights;  // strictly positive, strictly decreasing

    static WeakMetric standard(Eigen::Index d) {
        if (d < 1) throw DimensionMismatch("WeakMetric: dim >= 1 required");
        WeakMetric m;
        m.dim = d;
        m.weights.resize(d);
        for (Eigen::Index i = 0; i < d; ++i) m.weights(i) = std::ldexp(1.0, -static_cast<int>(i + 1));
        return m;
    }

    void validate() const {
        if (weights.size() != dim) throw DimensionMismatch("WeakMetric: weight count != dim");
        for (Eigen::Index i = 0; i < dim; ++i) {
            if (!(weights(i) > 0.0)) throw std::invalid_argument("WeakMetric: weights must be positive");
            if (i > 0 && !(weights(i) < weights(i - 1)))
                throw std::invalid_argument("WeakMetric: weights must be strictly decreasing");
        }
    }
};

// d(A,B) = ( sum_{ij} w_i^2 w_j^2 |(A-B)_{ij}|^2 )^{1/2}.
// stableNorm keeps the heavily damped high-index tail from underflowing the
// accumulation.
inline double weak_dist(const cmat& a, const cmat& b, const WeakMetric& metric) {
    require_same_shape(a, b, "weak_dist");
    if (a.rows() != metric.dim || a.cols() != metric.dim)
        throw DimensionMismatch("weak_dist: operator dim != metric dim");
    require_finite(a, "weak_dist");
    require_finite(b, "weak_dist");
    const rvec& w = metric.weights;
    Eigen::MatrixXd weighted = (w * w.transpose()).cwiseProduct((a - b).cwiseAbs());
    return weighted.stableNorm();
}

inline double weak_dist_to_zero(const cmat& a, const WeakMetric& metric) {
    return weak_dist(a, cmat::Zero(a.rows(), a.cols()), metric);
}

}  // namespace grasstool
