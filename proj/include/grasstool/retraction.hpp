// Dyadic piecewise-constant model of L^2([0,1]) and the compression operators
// D_t = sigma_t pi_t realising the deformation retraction Phi(t, P) of the
// trace-class projection space onto {0}.
//
// The dilation sigma_t changes resolution: at a dyadic scale t = 2^-j it maps
// level-L grid functions on [0,t] exactly onto level-(L-j) grid functions on
// [0,1]. D_t is therefore realised exactly as a rectangular partial isometry
// between two truncations of L^2([0,1]),
//
//     D_t : grid(J) -> grid(J-j),   D_t = sqrt(t) [ I | 0 ],
//
// for which both defining identities hold to rounding error:
//     D_t D_t^* = 1   on the coarse grid,
//     D_t^* D_t = R_t on the fine grid.
// A single square matrix cannot carry both (their ranks differ), which is why
// the conjugation phi_t(A) = D_t^* A D_t takes operators at the coarse
// truncation to operators at the fine one. The square m x m stretch matrix
// (refinement of the rectangular form) is kept as the fixed-resolution
// representation of D_t acting inside grid(J).
#pragma once

#include "grasstool/core.hpp"
#include "grasstool/grassmann.hpp"
#include "grasstool/linalg.hpp"
#include "grasstool/weak.hpp"

#include <cmath>
#include <optional>
#include <vector>

namespace grasstool {

// 2^J cells of exact width 1/m; inner product <f,g> = (1/m) sum conj(f_i) g_i
// so grid norms approximate L^2([0,1]) norms.
struct DyadicGrid {
    int level = 0;
    Eigen::Index cells = 0;
};

inline DyadicGrid make_grid(int level) {
    if (level < 1 || level > 20) throw std::invalid_argument("make_grid: level in [1,20] required");
    return DyadicGrid{level, Eigen::Index(1) << level};
}

// Is t = 2^-j for some 0 <= j <= max_shift? Returns j.
inline std::optional<int> dyadic_shift(double t, int max_shift) {
    for (int j = 0; j <= max_shift; ++j) {
        if (t == std::ldexp(1.0, -j)) return j;
    }
    return std::nullopt;
}

// R_t: multiplication by the indicator of [0,t]; cells entirely inside [0,t]
// survive. Exact 0/1 projection for cell-aligned t.
inline cmat restriction(const DyadicGrid& grid, double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw InadmissibleScale("restriction: t in [0,1] required");
    const Eigen::Index m = grid.cells;
    cmat r = cmat::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        if (static_cast<double>(i + 1) <= t * static_cast<double>(m) + 1e-12) r(i, i) = 1.0;
    }
    return r;
}

enum class CompressionMode { exact, approximate };

struct CompressionOperator {
    DyadicGrid grid;
    double t = 1.0;
    CompressionMode mode = CompressionMode::exact;
    int shift = 0;             // j with t = 2^-j (exact mode)
    Eigen::Index coarse = 0;   // t*m, the coarse truncation dimension (exact mode)
    cmat matrix;               // m x m stretch: (D f)_i = sqrt(t) f_{ceil(i t)}

    // Rectangular realisation grid(J) -> grid(J-j); carries both partial
    // isometry identities exactly.
    cmat rectangular() const {
        cmat d = cmat::Zero(coarse, grid.cells);
        const double root = std::sqrt(t);
        for (Eigen::Index i = 0; i < coarse; ++i) d(i, i) = root;
        return d;
    }

    // Adjoint of the rectangular form w.r.t. the 1/m and 1/m' weighted inner
    // products; the weight ratio contributes the factor 1/t.
    cmat rectangular_adjoint() const { return cmat((1.0 / t) * rectangular().adjoint()); }
};

namespace detail {

// Square stretch at a dyadic scale: output cell i reads source cell
// floor(i t) and scales by sqrt(t); each source cell fans out to 1/t cells.
inline cmat stretch_matrix(Eigen::Index m, int shift) {
    cmat d = cmat::Zero(m, m);
    const double root = std::sqrt(std::ldexp(1.0, -shift));
    const Eigen::Index fan = Eigen::Index(1) << shift;
    for (Eigen::Index i = 0; i < m; ++i) d(i, i / fan) = root;
    return d;
}

// General-t stretch: exact dilation of piecewise-constant data followed by
// L^2-orthogonal averaging back onto the grid. Cell i of the output averages
// sqrt(t) f(t x) over x in [i/m, (i+1)/m).
inline cmat averaged_stretch_matrix(Eigen::Index m, double t) {
    cmat d = cmat::Zero(m, m);
    const double root = std::sqrt(t);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double lo = t * static_cast<double>(i) / static_cast<double>(m);
        const double hi = t * static_cast<double>(i + 1) / static_cast<double>(m);
        // overlap of [lo, hi) with each source cell, in units of the x-variable
        const Eigen::Index s_first = static_cast<Eigen::Index>(std::floor(lo * m));
        const Eigen::Index s_last =
            std::min<Eigen::Index>(m - 1, static_cast<Eigen::Index>(std::ceil(hi * m)) - 1);
        for (Eigen::Index s = s_first; s <= s_last; ++s) {
            const double a = std::max(lo, static_cast<double>(s) / static_cast<double>(m));
            const double b = std::min(hi, static_cast<double>(s + 1) / static_cast<double>(m));
            if (b > a) d(i, s) += root * (b - a) / (hi - lo);
        }
    }
    return d;
}

}  // namespace detail

inline CompressionOperator compression(const DyadicGrid& grid, double t,
                                       CompressionMode mode = CompressionMode::exact) {
    if (!(t > 0.0 && t <= 1.0)) throw InadmissibleScale("compression: t in (0,1] required");
    CompressionOperator c;
    c.grid = grid;
    c.t = t;
    c.mode = mode;
    if (mode == CompressionMode::exact) {
        auto j = dyadic_shift(t, grid.level);
        if (!j) throw InadmissibleScale("compression: exact mode needs t = 2^-j, j <= level");
        c.shift = *j;
        c.coarse = grid.cells >> *j;
        c.matrix = detail::stretch_matrix(grid.cells, *j);
    } else {
        c.shift = -1;
        c.coarse = grid.cells;
        c.matrix = detail::averaged_stretch_matrix(grid.cells, t);
    }
    return c;
}

// phi_t(A) = D_t^* A D_t.
//
// Exact mode: A is an operator on L^2([0,1]) at the coarse truncation t*m and
// the result lives at the grid truncation m; the conjugation is an exact
// *-homomorphism there. phi_1(A) = A, phi_t(1) = R_t. t = 0 maps everything
// to 0 (the weak limit endpoint has this closed form).
//
// Approximate mode: any t in (0,1], A at the grid truncation, identities hold
// to O(1/m) through the averaging step.
inline cmat compress(const DyadicGrid& grid, double t, const cmat& a,
                     CompressionMode mode = CompressionMode::exact) {
    require_finite(a, "compress");
    if (a.rows() != a.cols()) throw DimensionMismatch("compress: square input required");
    if (t == 0.0) return cmat::Zero(grid.cells, grid.cells);
    CompressionOperator c = compression(grid, t, mode);
    if (mode == CompressionMode::exact) {
        if (a.rows() != c.coarse)
            throw DimensionMismatch("compress: exact mode takes A at the coarse truncation t*m = " +
                                    std::to_string(c.coarse));
        // (1/t) D^H A D with D = sqrt(t) [I|0] places A in the leading corner;
        // the sqrt(t) amplitudes and the cell-width ratio cancel entrywise.
        return embed(a, grid.cells);
    }
    if (a.rows() != grid.cells)
        throw DimensionMismatch("compress: approximate mode takes A at the grid truncation");
    return cmat(c.matrix.adjoint() * a * c.matrix);
}

// Phi(t, P) = phi_{1-t}(P). The grid carries P at the coarse side of the
// scale pair, so for 0 < t < 1 the result is P viewed inside the finer
// truncation m * 2^j of L^2([0,1]): trace and rank are preserved exactly and
// the support of the operator occupies the cells of [0, 1-t]. Phi(0,P) = P
// and Phi(1,P) = 0 bit-exactly.
inline GrassmannPoint retract_point(const DyadicGrid& grid, double t, const GrassmannPoint& p,
                                    Eigen::Index max_dim = 4096) {
    if (p.dim() != grid.cells) throw DimensionMismatch("retract_point: P not on the grid");
    if (t == 0.0) return p;
    if (t == 1.0) {
        GrassmannPoint zero;
        zero.op = cmat::Zero(grid.cells, grid.cells);
        zero.rank = 0;
        zero.tol = p.tol;
        return zero;
    }
    auto j = dyadic_shift(1.0 - t, 53);
    if (!j) throw InadmissibleScale("retract_point: 1 - t must be a dyadic scale 2^-j");
    const Eigen::Index fine = grid.cells << *j;
    if (fine > max_dim)
        throw InadmissibleScale("retract_point: fine truncation " + std::to_string(fine) +
                                " exceeds the materialisation cap");
    // The rectangular sandwich (1/s) D^H P D with D = sqrt(s) [I|0] reduces to
    // corner placement: the squeeze is a pure reindexing at dyadic scales.
    GrassmannPoint out;
    out.op = embed(p.op, fine);
    out.rank = p.rank;
    out.tol = p.tol;
    return out;
}

struct ScanRow {
    double t = 0.0;
    double weak_distance = 0.0;
    double trace = 0.0;
    Eigen::Index rank = 0;
};

// Decay table of the retraction along the dyadic ladder t = 1 - 2^-j,
// j = 0..J, plus the endpoint t = 1.
//
// The weak-distance column observes Phi(t,P) through the fixed level-J grid
// window (the Galerkin compression, realised by the square stretch sandwich)
// and evaluates the weighted entrywise metric with the cell enumeration
// running against the compression direction: the cells that the squeeze
// drains sit at the metric's heavy indices and the region it fills carries
// the vanishing tail, which is what lets a fixed truncation reproduce the
// weak-limit decay. Trace and rank columns report the exact retraction.
inline std::vector<ScanRow> weak_limit_scan(const DyadicGrid& grid, const GrassmannPoint& p,
                                            const WeakMetric& metric) {
    if (p.dim() != grid.cells) throw DimensionMismatch("weak_limit_scan: P not on the grid");
    if (metric.dim != grid.cells) throw DimensionMismatch("weak_limit_scan: metric dim != grid");
    const double trace = p.op.trace().real();
    std::vector<ScanRow> table;
    table.reserve(static_cast<size_t>(grid.level) + 2);
    for (int j = 0; j <= grid.level; ++j) {
        const double s = std::ldexp(1.0, -j);
        const cmat stretch = detail::stretch_matrix(grid.cells, j);
        const cmat observed = stretch.adjoint() * p.op * stretch;
        ScanRow row;
        row.t = 1.0 - s;
        row.weak_distance = weak_dist_to_zero(observed.reverse(), metric);
        row.trace = trace;
        row.rank = p.rank;
        table.push_back(row);
    }
    table.push_back(ScanRow{1.0, 0.0, 0.0, 0});
    return table;
}

}  // namespace grasstool
