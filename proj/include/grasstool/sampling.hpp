// Seeded random inputs: Haar unitaries (QR of a complex Gaussian with the
// triangular factor's diagonal phases normalised), random rank-n projections,
// Gaussian operators. Everything is a pure function of an explicit 64-bit
// seed.
#pragma once

#include "grasstool/core.hpp"
#include "grasstool/linalg.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace grasstool {

// splitmix64, used to derive independent stream seeds from a base seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : base_(seed), gen_(seed) {}

    double normal() { return normal_(gen_); }
    double uniform() { return uniform_(gen_); }
    complexd complex_normal() {
        return {normal() * M_SQRT1_2, normal() * M_SQRT1_2};
    }

    // Independent deterministic substream, e.g. one per sample index.
    Rng child(std::uint64_t stream) const { return Rng(mix_seed(base_, stream)); }

  private:
    std::uint64_t base_;
    std::mt19937_64 gen_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

inline cmat ginibre(Eigen::Index d, Rng& rng) {
    cmat a(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) a(i, j) = rng.complex_normal();
    return a;
}

inline cmat random_operator(Eigen::Index d, std::uint64_t seed) {
    Rng rng(seed);
    return ginibre(d, rng);
}

inline cmat random_hermitian(Eigen::Index d, std::uint64_t seed) {
    Rng rng(seed);
    cmat a = ginibre(d, rng);
    return cmat(0.5 * (a + a.adjoint()));
}

// Haar-distributed unitary. The QR phase fix makes the distribution exactly
// Haar instead of depending on Eigen's Householder sign conventions.
inline cmat random_unitary(Eigen::Index d, std::uint64_t seed) {
    if (d < 1) throw DimensionMismatch("random_unitary: d >= 1 required");
    Rng rng(seed);
    cmat a = ginibre(d, rng);
    Eigen::HouseholderQR<cmat> qr(a);
    cmat q = qr.householderQ();
    cmat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < d; ++k) {
        complexd rkk = r(k, k);
        double mag = std::abs(rkk);
        q.col(k) *= (mag > 0.0) ? rkk / mag : complexd(1.0, 0.0);
    }
    return q;
}

// P = U diag(1^n, 0^{d-n}) U* with U Haar.
inline cmat random_projection(Eigen::Index d, Eigen::Index n, std::uint64_t seed) {
    if (d < 1) throw DimensionMismatch("random_projection: d >= 1 required");
    if (n < 0 || n > d) throw DimensionMismatch("random_projection: need 0 <= n <= d");
    if (n == 0) return cmat::Zero(d, d);
    if (n == d) return cmat::Identity(d, d);
    cmat u = random_unitary(d, seed);
    cmat cols = u.leftCols(n);
    return cols * cols.adjoint();
}

}  // namespace grasstool
