// Trace states omega(A) = Tr(P A) / Tr(P) over rank-M projections, the
// decomposition of a bounded operator into at most four unitaries, and the
// numerical certificate for state continuity along trace-norm convergence.
#pragma once

#include "grasstool/core.hpp"
#include "grasstool/grassmann.hpp"
#include "grasstool/linalg.hpp"

#include <cmath>
#include <utility>
#include <vector>

namespace grasstool {

struct TraceState {
    GrassmannPoint projection;

    Eigen::Index rank() const { return projection.rank; }
};

inline TraceState make_state(const GrassmannPoint& p) {
    if (p.rank < 1) throw RankZero("make_state: the null-projection carries no state");
    return TraceState{p};
}

// omega(A) = Tr(P A) / rank(P). Linear, omega(1) = 1, positive on A*A.
inline complexd state_eval(const TraceState& s, const cmat& a) {
    require_same_shape(s.projection.op, a, "state_eval");
    require_finite(a, "state_eval");
    return (s.projection.op * a).trace() / static_cast<double>(s.projection.rank);
}

struct UnitaryDecomposition {
    // coefficient, unitary pairs with A = sum a_j U_j
    std::vector<std::pair<complexd, cmat>> terms;

    cmat reconstruct(Eigen::Index dim) const {
        cmat sum = cmat::Zero(dim, dim);
        for (const auto& [a, u] : terms) sum += a * u;
        return sum;
    }
};

namespace detail {

// B self-adjoint contraction -> unitaries B +/- i sqrt(1 - B^2) via spectral
// calculus; eigenvalues clamped to [-1,1] so rounding cannot leak outside the
// square root's domain.
inline std::pair<cmat, cmat> cayley_pair(const cmat& b) {
    Eigen::SelfAdjointEigenSolver<cmat> es(b);
    const Eigen::Index d = b.rows();
    cvec up(d), down(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const double lambda = std::clamp(es.eigenvalues()(i), -1.0, 1.0);
        const double root = std::sqrt(std::max(0.0, 1.0 - lambda * lambda));
        up(i) = complexd(lambda, root);
        down(i) = complexd(lambda, -root);
    }
    const cmat v = es.eigenvectors();
    return {cmat(v * up.asDiagonal() * v.adjoint()), cmat(v * down.asDiagonal() * v.adjoint())};
}

}  // namespace detail

// A = sum_j a_j U_j with at most four unitaries and |a_j| <= ||A||/2 on the
// generic path: A/||A|| splits into self-adjoint contractions B + iC, each of
// which is the mean of two unitaries. A unitary A (up to scale) short-cuts to
// the single merged term (||A||, A/||A||); A = 0 returns no terms.
inline UnitaryDecomposition four_unitaries(const cmat& a, const Tolerances& tol = {}) {
    require_finite(a, "four_unitaries");
    if (a.rows() != a.cols()) throw DimensionMismatch("four_unitaries: square input required");
    UnitaryDecomposition out;
    const double norm = op_norm(a);
    if (norm <= tol.algebraic) return out;

    cmat n = a / norm;
    if (is_unitary(n, tol.algebraic)) {
        out.terms.emplace_back(complexd(norm, 0.0), n);
        return out;
    }

    cmat b = 0.5 * (n + n.adjoint());
    cmat c = complexd(0.0, -0.5) * (n - n.adjoint());
    auto [bu, bd] = detail::cayley_pair(b);
    auto [cu, cd] = detail::cayley_pair(c);
    const double half = 0.5 * norm;
    out.terms.emplace_back(complexd(half, 0.0), bu);
    out.terms.emplace_back(complexd(half, 0.0), bd);
    out.terms.emplace_back(complexd(0.0, half), cu);
    out.terms.emplace_back(complexd(0.0, half), cd);
    return out;
}

struct ContinuityCertificate {
    complexd omega_p;
    complexd omega_q;
    double lhs = 0.0;                    // |omega_P(A) - omega_Q(A)|
    double bound = 0.0;                  // (1/M) sum_j |a_j| ||(P-Q) U_j||_1
    std::vector<double> per_term;        // per-unitary trace-norm contributions
    double trace_norm_gap = 0.0;         // ||P - Q||_1
    double op_norm_gap = 0.0;            // ||P - Q||
    bool verdict = false;                // lhs <= bound + slack
};

// Certifies |omega_P(A) - omega_Q(A)| <= (1/M) sum |a_j| ||(P-Q) U_j||_1
// built from the four-unitary decomposition, and tabulates the trace-norm
// versus operator-norm gap of the projections.
inline ContinuityCertificate continuity_certificate(const GrassmannPoint& p,
                                                    const GrassmannPoint& q, const cmat& a,
                                                    double slack = 1e-9) {
    require_same_shape(p.op, q.op, "continuity_certificate");
    require_same_shape(p.op, a, "continuity_certificate");
    if (p.rank != q.rank) throw RankMismatch("continuity_certificate: ranks differ");
    if (p.rank < 1) throw RankZero("continuity_certificate: rank >= 1 required");

    const double m = static_cast<double>(p.rank);
    ContinuityCertificate cert;
    cert.omega_p = state_eval(make_state(p), a);
    cert.omega_q = state_eval(make_state(q), a);
    cert.lhs = std::abs(cert.omega_p - cert.omega_q);

    const cmat diff = p.op - q.op;
    const UnitaryDecomposition dec = four_unitaries(a);
    double bound = 0.0;
    for (const auto& [coeff, u] : dec.terms) {
        const double contribution = std::abs(coeff) * trace_norm((diff * u).eval()) / m;
        cert.per_term.push_back(contribution);
        bound += contribution;
    }
    cert.bound = bound;
    cert.trace_norm_gap = trace_norm(diff);
    cert.op_norm_gap = op_norm(diff);
    cert.verdict = cert.lhs <= cert.bound + slack;
    return cert;
}

// Rotates one occupied direction of P towards an unoccupied one by theta;
// the resulting projection differs from P in a single plane, so
// ||P - Q|| = sin(theta) exactly. Used to drive decay scans with pinned gaps.
inline GrassmannPoint rotate_in_plane(const GrassmannPoint& p, double theta) {
    if (p.rank < 1 || p.rank >= p.dim())
        throw RankMismatch("rotate_in_plane: need 0 < rank < dim");
    const cmat frame = range_frame(p);
    const cmat co_frame = range_frame(complement(p));
    const cvec u = frame.col(0);
    const cvec w = co_frame.col(0);
    const cvec rotated = std::cos(theta) * u + std::sin(theta) * w;
    cmat q = p.op - u * u.adjoint() + rotated * rotated.adjoint();
    return certify(q, p.tol);
}

struct DecayRow {
    int k = 0;
    double op_norm_gap = 0.0;
    double trace_norm_gap = 0.0;
    double lhs = 0.0;
};

// lhs decay along a family Q_k -> P with operator-norm gaps 2^-k.
inline std::vector<DecayRow> continuity_decay_scan(const GrassmannPoint& p, const cmat& a,
                                                   int k_max) {
    std::vector<DecayRow> rows;
    rows.reserve(static_cast<size_t>(k_max) + 1);
    const TraceState sp = make_state(p);
    for (int k = 0; k <= k_max; ++k) {
        const double gap = std::ldexp(1.0, -k);
        const GrassmannPoint q = rotate_in_plane(p, std::asin(gap));
        DecayRow row;
        row.k = k;
        row.op_norm_gap = op_norm((p.op - q.op).eval());
        row.trace_norm_gap = trace_norm((p.op - q.op).eval());
        row.lhs = std::abs(state_eval(sp, a) - state_eval(make_state(q), a));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace grasstool
