// Dense spectral building blocks: operator/trace norms, polar decomposition,
// zero-padding embeddings. Everything works on Eigen expressions and is
// evaluated through SVD / self-adjoint eigendecompositions.
#pragma once

#include "grasstool/core.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace grasstool {

template <typename Derived>
Eigen::VectorXd singular_values(const Eigen::MatrixBase<Derived>& a) {
    using Mat = dense_matrix<typename Eigen::NumTraits<typename Derived::Scalar>::Real>;
    Eigen::JacobiSVD<Mat> svd(a.derived());
    return svd.singularValues();
}

// Largest singular value.
template <typename Derived>
double op_norm(const Eigen::MatrixBase<Derived>& a) {
    require_finite(a, "op_norm");
    if (a.rows() == 0 || a.cols() == 0) return 0.0;
    return singular_values(a)(0);
}

// Sum of singular values (Schatten-1 norm).
template <typename Derived>
double trace_norm(const Eigen::MatrixBase<Derived>& a) {
    require_finite(a, "trace_norm");
    if (a.rows() == 0 || a.cols() == 0) return 0.0;
    return singular_values(a).sum();
}

struct PolarFactors {
    cmat unitary;   // U in A = U H
    cmat positive;  // H = (A*A)^{1/2}
};

// Polar decomposition on the invertible branch. A = U H with U unitary and
// H positive definite; inputs whose smallest singular value does not clear
// tol.spectral are rejected as NearSingular rather than resolved through a
// partial isometry.
inline PolarFactors polar_decompose(const cmat& a, const Tolerances& tol = {}) {
    require_finite(a, "polar_decompose");
    if (a.rows() != a.cols()) throw DimensionMismatch("polar_decompose: square input required");
    tol.validate();
    Eigen::JacobiSVD<cmat> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd s = svd.singularValues();
    if (a.rows() == 0) return {cmat(0, 0), cmat(0, 0)};
    if (s(s.size() - 1) <= tol.spectral)
        throw NearSingular("polar_decompose: smallest singular value " +
                           std::to_string(s(s.size() - 1)) + " <= spectral tolerance");
    PolarFactors out;
    out.unitary = svd.matrixU() * svd.matrixV().adjoint();
    out.positive = svd.matrixV() * s.asDiagonal() * svd.matrixV().adjoint();
    return out;
}

// A |-> A (+) 0 on a larger space. Preserves rank, trace, singular values.
inline cmat embed(const cmat& a, Eigen::Index dim) {
    if (a.rows() != a.cols()) throw DimensionMismatch("embed: square input required");
    if (dim < a.rows()) throw DimensionMismatch("embed: target dimension smaller than input");
    cmat out = cmat::Zero(dim, dim);
    out.topLeftCorner(a.rows(), a.cols()) = a;
    return out;
}

// Eigenvalues of the self-adjoint part, ascending.
inline Eigen::VectorXd hermitian_eigenvalues(const cmat& a) {
    Eigen::SelfAdjointEigenSolver<cmat> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

inline bool is_unitary(const cmat& u, double tol) {
    if (u.rows() != u.cols()) return false;
    return op_norm((u.adjoint() * u - cmat::Identity(u.rows(), u.cols())).eval()) < tol;
}

// exp(i s H) for self-adjoint H, through its spectral decomposition.
inline cmat hermitian_exponential(const cmat& h, double scale) {
    Eigen::SelfAdjointEigenSolver<cmat> es(h);
    const Eigen::Index d = h.rows();
    cvec phases(d);
    for (Eigen::Index i = 0; i < d; ++i)
        phases(i) = std::exp(complexd(0.0, scale * es.eigenvalues()(i)));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace grasstool
