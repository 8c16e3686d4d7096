// Core aliases, tolerances and error types shared by every module.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace grasstool {

inline constexpr const char* version = "0.1.0";

template <typename Scalar>
using dense_matrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using dense_vector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

using cmat = dense_matrix<double>;
using cvec = dense_vector<double>;
using rvec = Eigen::VectorXd;
using complexd = std::complex<double>;

// Numeric thresholds used when certifying algebraic identities.
//   algebraic: identities such as P* = P = P^2, U*U = 1
//   spectral : gaps (smallest singular value, eigenvalue clustering)
//   rank_gap : how far a trace may sit from the nearest integer before the
//              rank is considered ambiguous
struct Tolerances {
    double algebraic = 1e-10;
    double spectral = 1e-8;
    double rank_gap = 0.5;

    void validate() const {
        if (!(algebraic > 0.0) || !(spectral > 0.0) || !(rank_gap > 0.0) || !(rank_gap < 1.0))
            throw std::invalid_argument("Tolerances: need algebraic, spectral, rank_gap > 0 and rank_gap < 1");
    }
};

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error { using Error::Error; };
struct NonFiniteOperator : Error { using Error::Error; };
struct NearSingular : Error { using Error::Error; };
struct NotAProjection : Error { using Error::Error; };
struct RankAmbiguous : Error { using Error::Error; };
struct OutsideNeighbourhood : Error { using Error::Error; };
struct NotUnitary : Error { using Error::Error; };
struct RankMismatch : Error { using Error::Error; };
struct RankZero : Error { using Error::Error; };
struct InadmissibleScale : Error { using Error::Error; };
struct SingularOverlap : Error { using Error::Error; };
struct CoarseMesh : Error { using Error::Error; };

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& a, const char* what) {
    if (!a.allFinite())
        throw NonFiniteOperator(std::string(what) + ": non-finite entries");
}

template <typename DerivedA, typename DerivedB>
void require_same_shape(const Eigen::MatrixBase<DerivedA>& a,
                        const Eigen::MatrixBase<DerivedB>& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch(std::string(what) + ": shape mismatch " + std::to_string(a.rows()) +
                                "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                                "x" + std::to_string(b.cols()));
}

}  // namespace grasstool
