#include "grasstool/linalg.hpp"
#include "grasstool/sampling.hpp"
#include "grasstool/weak.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace grasstool;

namespace {
cmat diag2(complexd a, complexd b) {
    cmat m = cmat::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}
}  // namespace

TEST_CASE("op_norm basics") {
    CHECK(op_norm(cmat::Zero(4, 4)) == doctest::Approx(0.0));
    CHECK(op_norm(cmat::Identity(5, 5)) == doctest::Approx(1.0));
    CHECK(op_norm(diag2(3.0, complexd(0.0, -4.0))) == doctest::Approx(4.0));

    cmat bad = cmat::Zero(2, 2);
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(op_norm(bad), NonFiniteOperator);
}

TEST_CASE("trace_norm basics and ordering") {
    CHECK(trace_norm(cmat::Zero(3, 3)) == doctest::Approx(0.0));
    CHECK(trace_norm(diag2(3.0, complexd(0.0, -4.0))) == doctest::Approx(7.0));
    const cmat p = random_projection(8, 3, 11);
    CHECK(trace_norm(p) == doctest::Approx(3.0).epsilon(1e-12));
    for (int i = 0; i < 25; ++i) {
        const cmat a = random_operator(6, 100 + static_cast<std::uint64_t>(i));
        CHECK(trace_norm(a) >= op_norm(a) - 1e-12);
    }
}

TEST_CASE("2x2 spectral quantities match the closed-form oracle") {
    for (int i = 0; i < 50; ++i) {
        const cmat a = random_operator(2, 200 + static_cast<std::uint64_t>(i));
        CHECK(op_norm(a) == doctest::Approx(oracles::op_norm2(a)).epsilon(1e-12));
        CHECK(trace_norm(a) == doctest::Approx(oracles::trace_norm2(a)).epsilon(1e-12));
    }
}

TEST_CASE("unitary invariance of both norms") {
    const cmat a = random_operator(7, 42);
    const cmat u = random_unitary(7, 43);
    const cmat v = random_unitary(7, 44);
    const cmat moved = u * a * v;
    CHECK(op_norm(moved) == doctest::Approx(op_norm(a)).epsilon(1e-9));
    CHECK(trace_norm(moved) == doctest::Approx(trace_norm(a)).epsilon(1e-9));
}

TEST_CASE("polar decomposition examples") {
    SUBCASE("unitary input") {
        const cmat v = random_unitary(5, 7);
        const auto [u, h] = polar_decompose(v);
        CHECK(op_norm((u - v).eval()) < 1e-12);
        CHECK(op_norm((h - cmat::Identity(5, 5)).eval()) < 1e-12);
    }
    SUBCASE("positive diagonal") {
        const auto [u, h] = polar_decompose(diag2(2.0, 3.0));
        CHECK(op_norm((u - cmat::Identity(2, 2)).eval()) < 1e-12);
        CHECK(op_norm((h - diag2(2.0, 3.0)).eval()) < 1e-12);
    }
    SUBCASE("rotation-with-stretch example") {
        cmat a(2, 2);
        a << 0.0, -2.0, 1.0, 0.0;
        const auto [u, h] = polar_decompose(a);
        cmat u_expected(2, 2);
        u_expected << 0.0, -1.0, 1.0, 0.0;
        CHECK(op_norm((u - u_expected).eval()) < 1e-12);
        CHECK(op_norm((h - diag2(1.0, 2.0)).eval()) < 1e-12);
        const auto brute = oracles::polar2(a);
        CHECK(op_norm((u - brute.unitary).eval()) < 1e-10);
        CHECK(op_norm((h - brute.positive).eval()) < 1e-10);
    }
    SUBCASE("near-singular input is rejected") {
        CHECK_THROWS_AS(polar_decompose(diag2(1.0, 1e-12)), NearSingular);
    }
}

TEST_CASE("polar round trip on random invertible operators") {
    int checked = 0;
    for (int i = 0; checked < 100; ++i) {
        const Eigen::Index d = 2 + (i % 31);
        const cmat a = random_operator(d, 300 + static_cast<std::uint64_t>(i));
        try {
            const auto [u, h] = polar_decompose(a);
            CHECK(op_norm((a - u * h).eval()) < 1e-9);
            CHECK(op_norm((u.adjoint() * u - cmat::Identity(d, d)).eval()) < 1e-10);
            ++checked;
        } catch (const NearSingular&) {
            // Ginibre matrices are almost surely far from singular; skip the rare case.
        }
    }
}

TEST_CASE("weak metric") {
    const Eigen::Index d = 12;
    const WeakMetric metric = WeakMetric::standard(d);
    metric.validate();

    SUBCASE("identity of indiscernibles and the 4^-k ladder") {
        const cmat a = random_operator(d, 1);
        CHECK(weak_dist(a, a, metric) == 0.0);
        double prev = 1.0;
        for (Eigen::Index k = 1; k <= d; ++k) {
            cmat ek = cmat::Zero(d, d);
            ek(k - 1, k - 1) = 1.0;
            const double wd = weak_dist_to_zero(ek, metric);
            CHECK(wd == doctest::Approx(std::pow(4.0, -static_cast<double>(k))).epsilon(1e-12));
            CHECK(wd < prev);
            CHECK(op_norm(ek) == doctest::Approx(1.0));
            prev = wd;
        }
    }
    SUBCASE("matches the double-loop reference") {
        for (int i = 0; i < 20; ++i) {
            const cmat a = random_operator(d, 400 + static_cast<std::uint64_t>(i));
            const cmat b = random_operator(d, 500 + static_cast<std::uint64_t>(i));
            CHECK(weak_dist(a, b, metric) ==
                  doctest::Approx(oracles::weak_dist_reference(a, b, metric.weights)).epsilon(1e-12));
        }
    }
    SUBCASE("metric axioms") {
        for (int i = 0; i < 30; ++i) {
            const cmat a = random_operator(d, 600 + static_cast<std::uint64_t>(i));
            const cmat b = random_operator(d, 700 + static_cast<std::uint64_t>(i));
            const cmat c = random_operator(d, 800 + static_cast<std::uint64_t>(i));
            CHECK(weak_dist(a, b, metric) == weak_dist(b, a, metric));
            CHECK(weak_dist(a, c, metric) <= weak_dist(a, b, metric) + weak_dist(b, c, metric) + 1e-12);
        }
    }
    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(weak_dist(cmat::Zero(3, 3), cmat::Zero(4, 4), metric), DimensionMismatch);
    }
}

TEST_CASE("random_unitary") {
    const cmat u1 = random_unitary(1, 5);
    CHECK(std::abs(std::abs(u1(0, 0)) - 1.0) < 1e-12);
    for (int i = 0; i < 10; ++i) {
        const Eigen::Index d = 2 + i;
        const cmat u = random_unitary(d, 900 + static_cast<std::uint64_t>(i));
        CHECK(op_norm((u.adjoint() * u - cmat::Identity(d, d)).eval()) < 1e-10);
    }
    CHECK_THROWS_AS(random_unitary(0, 1), DimensionMismatch);
}

TEST_CASE("Haar moment |U_11|^2 over 10^4 samples at d = 4") {
    // Columns of a Haar unitary are uniform on the sphere, so E|U_11|^2 = 1/4.
    double sum = 0.0;
    const int samples = 10000;
    for (int i = 0; i < samples; ++i)
        sum += std::norm(random_unitary(4, 10000 + static_cast<std::uint64_t>(i))(0, 0));
    CHECK(std::abs(sum / samples - 0.25) < 0.02);
}

TEST_CASE("random_projection") {
    CHECK(random_projection(5, 0, 3).isZero(0.0));
    CHECK(op_norm((random_projection(5, 5, 3) - cmat::Identity(5, 5)).eval()) == 0.0);
    const cmat p = random_projection(8, 3, 21);
    CHECK(op_norm((p * p - p).eval()) < 1e-10);
    CHECK(op_norm((p.adjoint() - p).eval()) < 1e-10);
    CHECK(std::abs(p.trace().real() - 3.0) < 1e-9);
    CHECK_THROWS_AS(random_projection(3, 4, 1), DimensionMismatch);
}

TEST_CASE("embed preserves the operator data") {
    const cmat a = random_operator(4, 77);
    CHECK((embed(a, 4) - a).norm() == 0.0);
    const cmat e2 = embed(cmat::Identity(2, 2), 4);
    CHECK(e2(0, 0) == complexd(1.0));
    CHECK(e2(1, 1) == complexd(1.0));
    CHECK(e2(2, 2) == complexd(0.0));
    const cmat big = embed(a, 9);
    CHECK(op_norm(big) == doctest::Approx(op_norm(a)).epsilon(1e-12));
    CHECK(trace_norm(big) == doctest::Approx(trace_norm(a)).epsilon(1e-12));
    // weak_dist is preserved when the shared leading weights are used.
    const WeakMetric small = WeakMetric::standard(4);
    const WeakMetric large = WeakMetric::standard(9);
    const cmat b = random_operator(4, 78);
    CHECK(weak_dist(embed(a, 9), embed(b, 9), large) ==
          doctest::Approx(weak_dist(a, b, small)).epsilon(1e-12));
    CHECK_THROWS_AS(embed(a, 3), DimensionMismatch);
}
