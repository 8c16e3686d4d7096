#include "grasstool/retraction.hpp"
#include "grasstool/sampling.hpp"

#include <doctest.h>

#include <cmath>

using namespace grasstool;

namespace {

// Rank-1 projection onto a grid vector under the 1/m-weighted inner product.
cmat grid_rank1(const cvec& v) {
    const double m = static_cast<double>(v.size());
    const double norm2 = v.squaredNorm() / m;
    return cmat((v * v.adjoint()) / (m * norm2));
}

}  // namespace

TEST_CASE("restriction") {
    const DyadicGrid g = make_grid(3);
    CHECK((restriction(g, 1.0) - cmat::Identity(8, 8)).norm() == 0.0);
    CHECK(restriction(g, 0.0).isZero(0.0));
    const cmat r = restriction(g, 0.5);
    for (Eigen::Index i = 0; i < 8; ++i)
        CHECK(r(i, i) == complexd(i < 4 ? 1.0 : 0.0));
    CHECK_THROWS_AS(restriction(g, 1.5), InadmissibleScale);
}

TEST_CASE("compression operator shapes and identities") {
    const DyadicGrid g = make_grid(2);  // m = 4
    SUBCASE("t = 1 is the identity") {
        const CompressionOperator c = compression(g, 1.0);
        CHECK((c.matrix - cmat::Identity(4, 4)).norm() == 0.0);
        CHECK(c.coarse == 4);
    }
    SUBCASE("t = 1/2 fan-out on cell values") {
        const CompressionOperator c = compression(g, 0.5);
        cvec f(4);
        f << 1.0, 2.0, 3.0, 4.0;
        const cvec out = c.matrix * f;
        const double root = std::sqrt(0.5);
        CHECK(std::abs(out(0) - root * 1.0) < 1e-15);
        CHECK(std::abs(out(1) - root * 1.0) < 1e-15);
        CHECK(std::abs(out(2) - root * 2.0) < 1e-15);
        CHECK(std::abs(out(3) - root * 2.0) < 1e-15);
        // D*D = diag(1,1,0,0)
        CHECK((cmat(c.matrix.adjoint() * c.matrix) - restriction(g, 0.5)).norm() < 1e-15);
    }
    SUBCASE("rectangular realisation carries both partial isometry identities") {
        for (int level : {2, 3, 5}) {
            const DyadicGrid grid = make_grid(level);
            for (int j = 0; j <= level; ++j) {
                const CompressionOperator c = compression(grid, std::ldexp(1.0, -j));
                const cmat d = c.rectangular();
                const cmat dstar = c.rectangular_adjoint();
                CHECK((cmat(d * dstar) - cmat::Identity(c.coarse, c.coarse)).norm() < 1e-13);
                CHECK((cmat(dstar * d) - restriction(grid, c.t)).norm() < 1e-13);
            }
        }
    }
    SUBCASE("non-dyadic scale is rejected in exact mode") {
        CHECK_THROWS_AS(compression(g, 0.3), InadmissibleScale);
        CHECK_THROWS_AS(compression(g, 0.0), InadmissibleScale);
    }
    SUBCASE("partial isometry: no vector grows") {
        const DyadicGrid grid = make_grid(5);
        for (int i = 0; i < 100; ++i) {
            Rng rng(400 + static_cast<std::uint64_t>(i));
            cvec f(grid.cells);
            for (Eigen::Index k = 0; k < grid.cells; ++k) f(k) = rng.complex_normal();
            const CompressionOperator c = compression(grid, std::ldexp(1.0, -(i % 5)));
            CHECK((c.matrix * f).norm() <= f.norm() + 1e-12);
        }
    }
}

TEST_CASE("compress: conjugation by the compression") {
    const DyadicGrid g = make_grid(4);  // m = 16
    SUBCASE("t = 1 returns the operator bit-exactly") {
        const cmat a = random_operator(16, 1);
        CHECK(((compress(g, 1.0, a)).array() == a.array()).all());
    }
    SUBCASE("t = 0 is the zero map") { CHECK(compress(g, 0.0, random_operator(16, 2)).isZero(0.0)); }
    SUBCASE("identity maps to the restriction") {
        for (int j = 0; j <= 4; ++j) {
            const double t = std::ldexp(1.0, -j);
            const Eigen::Index coarse = g.cells >> j;
            const cmat out = compress(g, t, cmat::Identity(coarse, coarse));
            CHECK((out - restriction(g, t)).norm() < 1e-15);
        }
    }
    SUBCASE("constant-function projection squeezes onto the indicator") {
        // P projects onto the constant function at the coarse truncation; the
        // image is the projection onto the normalised indicator of [0, t].
        const Eigen::Index coarse = 8;
        const cmat p = grid_rank1(cvec::Ones(coarse));
        const cmat out = compress(g, 0.5, p);
        cvec chi = cvec::Zero(16);
        chi.head(8).setOnes();
        CHECK((out - grid_rank1(chi)).norm() < 1e-14);
    }
    SUBCASE("exact-mode *-homomorphism on random pairs") {
        for (int j = 0; j <= 4; ++j) {
            const double t = std::ldexp(1.0, -j);
            const Eigen::Index coarse = g.cells >> j;
            for (int i = 0; i < 10; ++i) {
                const cmat a = random_operator(coarse, 500 + 10 * static_cast<std::uint64_t>(j) + static_cast<std::uint64_t>(i));
                const cmat b = random_operator(coarse, 900 + 10 * static_cast<std::uint64_t>(j) + static_cast<std::uint64_t>(i));
                const cmat pa = compress(g, t, a);
                const cmat pb = compress(g, t, b);
                CHECK((compress(g, t, cmat(a * b)) - pa * pb).norm() < 1e-12);
                CHECK((compress(g, t, cmat(a.adjoint())) - pa.adjoint()).norm() < 1e-12);
            }
        }
    }
    SUBCASE("projections stay projections with unchanged trace") {
        const cmat p = random_projection(8, 3, 77);
        const cmat out = compress(g, 0.5, p);
        const GrassmannPoint certified = certify(out);
        CHECK(certified.rank == 3);
    }
    SUBCASE("dimension contract in exact mode") {
        CHECK_THROWS_AS(compress(g, 0.5, random_operator(16, 3)), DimensionMismatch);
    }
}

TEST_CASE("approximate mode") {
    const DyadicGrid g = make_grid(6);  // m = 64
    SUBCASE("agrees with exact mode at dyadic scales") {
        for (int j = 0; j <= 6; ++j) {
            const CompressionOperator exact = compression(g, std::ldexp(1.0, -j));
            const CompressionOperator approx =
                compression(g, std::ldexp(1.0, -j), CompressionMode::approximate);
            CHECK((exact.matrix - approx.matrix).norm() < 1e-13);
        }
    }
    SUBCASE("contraction and loose restriction identity at general t") {
        for (double t : {0.3, 0.61, 0.8375}) {
            const CompressionOperator c = compression(g, t, CompressionMode::approximate);
            Rng rng(42);
            cvec f(g.cells);
            for (Eigen::Index k = 0; k < g.cells; ++k) f(k) = rng.complex_normal();
            CHECK((c.matrix * f).norm() <= f.norm() + 1e-12);
            // D~* D~ is diagonal 0/1 except near the cut cell, within 10/m.
            const cmat gram = c.matrix.adjoint() * c.matrix;
            const double loose = 10.0 / static_cast<double>(g.cells);
            int off_pattern = 0;
            for (Eigen::Index i = 0; i < g.cells; ++i) {
                const double diag = gram(i, i).real();
                const double ideal = (static_cast<double>(i + 1) <= t * g.cells) ? 1.0 : 0.0;
                if (std::abs(diag - ideal) > loose) ++off_pattern;
            }
            CHECK(off_pattern <= 1);  // only the straddling cell may deviate
        }
    }
    SUBCASE("strong continuity of t -> D_t on a fixed vector") {
        Rng rng(7);
        cvec f(g.cells);
        for (Eigen::Index k = 0; k < g.cells; ++k) f(k) = rng.complex_normal();
        const double t = 0.5;
        const cmat base = compression(g, t, CompressionMode::approximate).matrix;
        std::vector<double> gaps;
        for (int k = 3; k <= 10; ++k) {
            const double tp = t + std::ldexp(1.0, -k);
            const cmat step = compression(g, tp, CompressionMode::approximate).matrix;
            gaps.push_back(((step - base) * f).norm());
        }
        CHECK(gaps.back() < 0.25 * gaps.front());
        CHECK(gaps.back() < 0.1 * f.norm());
    }
}

TEST_CASE("retraction endpoints and structure") {
    const DyadicGrid g = make_grid(5);  // m = 32
    const GrassmannPoint p = certify(random_projection(g.cells, 3, 11));

    SUBCASE("endpoints are exact") {
        CHECK((retract_point(g, 0.0, p).op.array() == p.op.array()).all());
        const GrassmannPoint end = retract_point(g, 1.0, p);
        CHECK(end.rank == 0);
        CHECK(end.op.isZero(0.0));
    }
    SUBCASE("intermediate scales preserve trace and rank exactly") {
        for (double t : {0.5, 0.75, 0.875}) {
            const GrassmannPoint moved = retract_point(g, t, p);
            CHECK(moved.rank == 3);
            CHECK(std::abs(moved.op.trace().real() - 3.0) < 1e-12);
            CHECK(certify(moved.op).rank == 3);
        }
    }
    SUBCASE("matches the compression conjugation at the finer grid") {
        const double t = 0.75;  // s = 1/4, fine level 5 + 2
        const GrassmannPoint moved = retract_point(g, t, p);
        const cmat via_compress = compress(make_grid(7), 0.25, p.op);
        CHECK((moved.op - via_compress).norm() == 0.0);
    }
    SUBCASE("scale and size guards") {
        CHECK_THROWS_AS(retract_point(g, 0.3, p), InadmissibleScale);
        CHECK_THROWS_AS(retract_point(g, 1.0 - std::ldexp(1.0, -9), p), InadmissibleScale);
    }
}

TEST_CASE("weak limit scan") {
    const DyadicGrid g = make_grid(6);  // m = 64
    const WeakMetric metric = WeakMetric::standard(g.cells);

    SUBCASE("null projection scans to all zeros") {
        const auto table = weak_limit_scan(g, certify(cmat::Zero(g.cells, g.cells)), metric);
        for (const auto& row : table) CHECK(row.weak_distance == 0.0);
    }
    SUBCASE("constant-function projection decays below 1e-6 on the ladder") {
        const GrassmannPoint p = certify(grid_rank1(cvec::Ones(g.cells)));
        const auto table = weak_limit_scan(g, p, metric);
        REQUIRE(table.size() == static_cast<size_t>(g.level) + 2);
        CHECK(table.front().t == 0.0);
        CHECK(table.front().weak_distance > 1e-6);  // nothing has escaped yet
        bool reached = false;
        for (const auto& row : table)
            if (row.t <= 1.0 - 1.0 / static_cast<double>(g.cells) && row.weak_distance < 1e-6)
                reached = true;
        CHECK(reached);
        CHECK(table.back().t == 1.0);
        CHECK(table.back().weak_distance == 0.0);
    }
    SUBCASE("trace column is the exact non-increasing integer ladder") {
        const GrassmannPoint p = certify(random_projection(g.cells, 3, 5));
        const auto table = weak_limit_scan(g, p, metric);
        double prev = table.front().trace;
        for (const auto& row : table) {
            CHECK(std::abs(row.trace - std::round(row.trace)) < 1e-9);
            CHECK(row.trace <= prev + 1e-12);
            prev = row.trace;
        }
        CHECK(table.front().trace == doctest::Approx(3.0));
        CHECK(table.back().trace == 0.0);
    }
}

TEST_CASE("joint continuity of the observed retraction at desk scale") {
    const DyadicGrid g = make_grid(5);
    const WeakMetric metric = WeakMetric::standard(g.cells);
    const GrassmannPoint p = certify(random_projection(g.cells, 3, 29));
    const cmat stretch = compression(g, 0.25).matrix;

    // P' -> P at fixed t along one perturbation direction: observed images converge.
    cmat h = random_hermitian(g.cells, 3000);
    h /= op_norm(h);
    double prev = 1e9;
    for (int k = 2; k <= 9; ++k) {
        const cmat u = hermitian_exponential(h, std::ldexp(1.0, -k));
        const cmat moved = u * p.op * u.adjoint();
        const cmat gap = stretch.adjoint() * (moved - p.op) * stretch;
        const double dist = weak_dist_to_zero(gap, metric);
        CHECK(dist <= prev + 1e-12);
        prev = dist;
    }
    CHECK(prev < 1e-2);

    // t' -> t along the ladder: adjacent observed images approach each other
    // in the escape-adapted metric.
    double prev_rung = 1e9;
    for (int j = 1; j + 1 <= g.level; ++j) {
        const cmat a = compression(g, std::ldexp(1.0, -j)).matrix;
        const cmat b = compression(g, std::ldexp(1.0, -(j + 1))).matrix;
        const cmat oa = a.adjoint() * p.op * a;
        const cmat ob = b.adjoint() * p.op * b;
        const double dist = weak_dist_to_zero(cmat((oa - ob).reverse()), metric);
        CHECK(dist < prev_rung + 1e-12);
        prev_rung = dist;
    }
    CHECK(prev_rung < 1e-6);
}
