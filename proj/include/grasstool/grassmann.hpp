// Rank-n projection manifolds at finite truncation: certification of
// projections, the base-point neighbourhood used by the local section of the
// unitary bundle U(h) -> G_n(h), the section itself via polar decomposition,
// principal-angle paths and norm rank separation.
#pragma once

#include "grasstool/core.hpp"
#include "grasstool/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace grasstool {

// An operator certified to satisfy P* = P = P^2 with integer rank = trace(P).
struct GrassmannPoint {
    cmat op;
    Eigen::Index rank = 0;
    Tolerances tol;

    Eigen::Index dim() const { return op.rows(); }
};

// Checks self-adjointness, idempotence, integrality of the trace and the
// eigenvalue clustering at {0,1}; throws NotAProjection / RankAmbiguous.
inline GrassmannPoint certify(const cmat& a, const Tolerances& tol = {}) {
    tol.validate();
    require_finite(a, "certify");
    if (a.rows() != a.cols()) throw DimensionMismatch("certify: square input required");

    const double herm = op_norm((a.adjoint() - a).eval());
    if (herm >= tol.algebraic)
        throw NotAProjection("certify: self-adjointness residual " + std::to_string(herm));

    const double tr = a.trace().real();
    const double nearest = std::round(tr);
    if (std::abs(tr - nearest) >= tol.rank_gap)
        throw RankAmbiguous("certify: trace " + std::to_string(tr) + " not near an integer");

    const double idem = op_norm((a * a - a).eval());
    if (idem >= tol.algebraic)
        throw NotAProjection("certify: idempotence residual " + std::to_string(idem));
    if (std::abs(tr - nearest) >= tol.algebraic)
        throw NotAProjection("certify: trace " + std::to_string(tr) + " misses integer rank");

    const Eigen::VectorXd ev = hermitian_eigenvalues(a);
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        const double dist01 = std::min(std::abs(ev(i)), std::abs(ev(i) - 1.0));
        if (dist01 >= tol.spectral)
            throw NotAProjection("certify: eigenvalue " + std::to_string(ev(i)) + " away from {0,1}");
    }

    GrassmannPoint p;
    p.op = a;
    p.rank = static_cast<Eigen::Index>(nearest);
    p.tol = tol;
    return p;
}

// P |-> 1 - P. Exact; complement is an involution.
inline GrassmannPoint complement(const GrassmannPoint& p) {
    GrassmannPoint q;
    q.op = cmat::Identity(p.dim(), p.dim()) - p.op;
    q.rank = p.dim() - p.rank;
    q.tol = p.tol;
    return q;
}

// Orthonormal columns spanning Ran(P), deterministic: eigenvectors of P
// ordered by descending eigenvalue, each column's largest entry rotated to
// the positive real axis, ties broken lexicographically on entries.
inline cmat range_frame(const GrassmannPoint& p) {
    Eigen::SelfAdjointEigenSolver<cmat> es(p.op);
    if (es.info() != Eigen::Success) throw Error("range_frame: eigendecomposition failed");
    const Eigen::Index d = p.dim();
    const Eigen::Index n = p.rank;
    // SelfAdjointEigenSolver sorts ascending; take the top n.
    cmat frame(d, n);
    for (Eigen::Index k = 0; k < n; ++k) frame.col(k) = es.eigenvectors().col(d - 1 - k);
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::Index imax = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < d; ++i) {
            const double m = std::abs(frame(i, k));
            if (m > best + 1e-15) {
                best = m;
                imax = i;
            }
        }
        const complexd pivot = frame(imax, k);
        if (std::abs(pivot) > 0.0) frame.col(k) *= std::conj(pivot) / std::abs(pivot);
    }
    auto col_less = [&](Eigen::Index a, Eigen::Index b) {
        for (Eigen::Index i = 0; i < d; ++i) {
            const complexd x = frame(i, a), y = frame(i, b);
            if (x.real() != y.real()) return x.real() < y.real();
            if (x.imag() != y.imag()) return x.imag() < y.imag();
        }
        return false;
    };
    std::vector<Eigen::Index> order(static_cast<size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) order[static_cast<size_t>(k)] = k;
    std::stable_sort(order.begin(), order.end(), col_less);
    cmat sorted(d, n);
    for (Eigen::Index k = 0; k < n; ++k) sorted.col(k) = frame.col(order[static_cast<size_t>(k)]);
    return sorted;
}

// Neighbourhood O_0 of a base projection: all equal-rank P with
// max_j ||(P - P0) b_j|| < eps over an orthonormal frame {b_j} of Ran(P0).
// Construction enforces sqrt(k) * eps < 1 so the alignment operator below
// stays invertible on the whole neighbourhood.
struct Neighbourhood {
    GrassmannPoint base;
    cmat frame;  // d x k, orthonormal columns spanning Ran(base)
    double eps = 0.0;

    Eigen::Index rank() const { return base.rank; }
};

inline double default_eps(Eigen::Index k) { return 0.5 / std::sqrt(static_cast<double>(k)); }

inline Neighbourhood make_neighbourhood(const GrassmannPoint& base, double eps) {
    if (base.rank < 1) throw RankZero("make_neighbourhood: base rank >= 1 required");
    if (!(eps > 0.0)) throw std::invalid_argument("make_neighbourhood: eps > 0 required");
    if (!(std::sqrt(static_cast<double>(base.rank)) * eps < 1.0))
        throw std::invalid_argument("make_neighbourhood: sqrt(k) * eps < 1 required");
    Neighbourhood n;
    n.base = base;
    n.frame = range_frame(base);
    n.eps = eps;
    return n;
}

inline Neighbourhood make_neighbourhood(const GrassmannPoint& base) {
    return make_neighbourhood(base, default_eps(base.rank));
}

// Vector criterion: max_j ||(P - P0) b_j|| < eps.
inline double neighbourhood_deviation(const GrassmannPoint& p, const Neighbourhood& n) {
    if (p.rank != n.rank()) throw RankMismatch("in_neighbourhood: rank mismatch");
    require_same_shape(p.op, n.base.op, "in_neighbourhood");
    cmat moved = (p.op - n.base.op) * n.frame;
    return moved.colwise().norm().maxCoeff();
}

inline bool in_neighbourhood(const GrassmannPoint& p, const Neighbourhood& n) {
    return neighbourhood_deviation(p, n) < n.eps;
}

// Entrywise criterion: max_ij |<b_i, (P - P0) b_j>| < eps. Membership
// verdicts agree with the vector criterion away from the band where a column
// norm lies in [eps^2, eps); the diagonal entries equal the squared column
// norms, which pins the two sets against each other.
inline bool in_neighbourhood_entrywise(const GrassmannPoint& p, const Neighbourhood& n) {
    if (p.rank != n.rank()) throw RankMismatch("in_neighbourhood_entrywise: rank mismatch");
    require_same_shape(p.op, n.base.op, "in_neighbourhood_entrywise");
    cmat block = n.frame.adjoint() * (p.op - n.base.op) * n.frame;
    return block.cwiseAbs().maxCoeff() < n.eps;
}

// Alignment operator A = P P0 + (1-P)(1-P0). It maps Ran(P0) -> Ran(P) and
// the complements accordingly; inside O_0 its smallest singular value is at
// least c_k = sqrt(1 - k eps^2).
inline cmat alignment_operator(const GrassmannPoint& p, const GrassmannPoint& p0) {
    require_same_shape(p.op, p0.op, "alignment_operator");
    const cmat id = cmat::Identity(p.dim(), p.dim());
    return p.op * p0.op + (id - p.op) * (id - p0.op);
}

// Local section of the bundle projection pi(U) = U P0 U*: the unitary polar
// factor of the alignment operator. Satisfies U P0 U* = P on O_0.
inline cmat section(const GrassmannPoint& p, const Neighbourhood& n, const Tolerances& tol = {}) {
    if (!in_neighbourhood(p, n))
        throw OutsideNeighbourhood("section: point outside the base neighbourhood");
    cmat a = alignment_operator(p, n.base);
    return polar_decompose(a, tol).unitary;
}

// pi(U) = U P0 U*, certified at the rank of P0.
inline GrassmannPoint bundle_projection(const cmat& u, const GrassmannPoint& p0) {
    require_same_shape(u, p0.op, "bundle_projection");
    if (!is_unitary(u, p0.tol.algebraic * 10.0))
        throw NotUnitary("bundle_projection: input is not unitary within tolerance");
    return certify(cmat(u * p0.op * u.adjoint()), p0.tol);
}

inline double rank_separation(const GrassmannPoint& p, const GrassmannPoint& q) {
    require_same_shape(p.op, q.op, "rank_separation");
    return op_norm((p.op - q.op).eval());
}

// Geodesic between equal-rank projections through the principal angles of
// their ranges (CS decomposition). Always defined; the returned list has
// steps+1 certified points with the inputs themselves at the ends.
inline std::vector<GrassmannPoint> connect(const GrassmannPoint& p, const GrassmannPoint& q,
                                           int steps) {
    if (steps < 1) throw std::invalid_argument("connect: steps >= 1 required");
    require_same_shape(p.op, q.op, "connect");
    if (p.rank != q.rank) throw RankMismatch("connect: ranks differ");

    std::vector<GrassmannPoint> path;
    path.reserve(static_cast<size_t>(steps) + 1);
    path.push_back(p);
    if (p.rank == 0 || p.rank == p.dim()) {
        for (int s = 1; s < steps; ++s) path.push_back(p);
        path.push_back(q);
        return path;
    }

    const cmat x = range_frame(p);
    const cmat y = range_frame(q);
    Eigen::JacobiSVD<cmat> svd(x.adjoint() * y, Eigen::ComputeFullU | Eigen::ComputeFullV);
    cmat xa = x * svd.matrixU();  // aligned frames: <xa_i, ya_j> = cos(theta_i) delta_ij
    cmat ya = y * svd.matrixV();
    const Eigen::Index n = p.rank;
    Eigen::VectorXd theta(n);
    for (Eigen::Index i = 0; i < n; ++i)
        theta(i) = std::acos(std::clamp(svd.singularValues()(i), 0.0, 1.0));

    // Unit normals completing each rotation plane; zero angle needs none.
    cmat normals = cmat::Zero(p.dim(), n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double s = std::sin(theta(i));
        if (s > 1e-12) normals.col(i) = (ya.col(i) - std::cos(theta(i)) * xa.col(i)) / s;
    }

    for (int s = 1; s < steps; ++s) {
        const double tau = static_cast<double>(s) / static_cast<double>(steps);
        cmat w(p.dim(), n);
        for (Eigen::Index i = 0; i < n; ++i)
            w.col(i) = std::cos(tau * theta(i)) * xa.col(i) + std::sin(tau * theta(i)) * normals.col(i);
        path.push_back(certify(cmat(w * w.adjoint()), p.tol));
    }
    path.push_back(q);
    return path;
}

}  // namespace grasstool
