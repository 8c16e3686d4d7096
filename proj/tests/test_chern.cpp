#include "grasstool/chern.hpp"
#include "grasstool/serialize.hpp"

#include <doctest.h>

#include <cmath>

using namespace grasstool;

namespace {

// Rank-1 family winding w times around the azimuth; used to drive the
// coarse-mesh guard and as an extra integer cross-check.
ProjectionFamily winding_family(const ParameterMesh& mesh, int w) {
    ProjectionFamily family;
    family.mesh = mesh;
    family.dim = 2;
    family.rank = 1;
    for (const auto& x : mesh.vertices) {
        const double phi = std::atan2(x(1), x(0));
        const double rho = std::hypot(x(0), x(1));
        Eigen::Vector3d n(rho * std::cos(w * phi), rho * std::sin(w * phi), x(2));
        n.normalize();
        cmat block(2, 2);
        block << complexd(1.0 + n(2), 0.0), complexd(n(0), -n(1)),
                 complexd(n(0), n(1)), complexd(1.0 - n(2), 0.0);
        family.points.push_back(cmat(0.5 * block));
    }
    return family;
}

}  // namespace

TEST_CASE("cubed sphere mesh is a closed oriented quad complex") {
    for (int r : {1, 2, 6, 12}) {
        const ParameterMesh mesh = cubed_sphere(r);
        CHECK(static_cast<int>(mesh.vertices.size()) == 6 * r * r + 2);
        CHECK(static_cast<int>(mesh.plaquettes.size()) == 6 * r * r);
        CHECK_NOTHROW(validate_mesh(mesh));
        for (const auto& v : mesh.vertices) CHECK(std::abs(v.norm() - 1.0) < 1e-14);
    }
    CHECK_NOTHROW(validate_mesh(torus_mesh(4)));
}

TEST_CASE("frame_of") {
    cmat d100 = cmat::Zero(3, 3);
    d100(0, 0) = 1.0;
    const cmat f = frame_of(certify(d100));
    CHECK(f.rows() == 3);
    CHECK(f.cols() == 1);
    CHECK(std::abs(f(0, 0) - complexd(1.0)) < 1e-14);

    const cmat f2 = frame_of(certify(cmat::Identity(2, 2)));
    CHECK(op_norm((cmat(f2 * f2.adjoint()) - cmat::Identity(2, 2)).eval()) < 1e-12);

    for (int i = 0; i < 100; ++i) {
        const GrassmannPoint p = certify(random_projection(6, 2, 4000 + static_cast<std::uint64_t>(i)));
        const cmat frame = frame_of(p);
        CHECK(op_norm((p.op * frame - frame).eval()) < 1e-9);
        CHECK(op_norm((frame.adjoint() * frame - cmat::Identity(2, 2)).eval()) < 1e-10);
    }
}

TEST_CASE("monopole family properties") {
    const ParameterMesh mesh = cubed_sphere(4);
    const ProjectionFamily family = monopole_family(mesh, 3);
    // north pole maps to diag(1,0) embedded
    for (size_t v = 0; v < mesh.vertices.size(); ++v) {
        CHECK(std::abs(family.points[v].trace().real() - 1.0) < 1e-12);
        if ((mesh.vertices[v] - Eigen::Vector3d(0, 0, 1)).norm() < 1e-12) {
            cmat expected = cmat::Zero(3, 3);
            expected(0, 0) = 1.0;
            CHECK((family.points[v] - expected).norm() < 1e-14);
        }
        // antipodal complement inside the 2x2 block
        for (size_t w = 0; w < mesh.vertices.size(); ++w) {
            if ((mesh.vertices[v] + mesh.vertices[w]).norm() < 1e-12) {
                const cmat sum = family.points[v].topLeftCorner(2, 2) +
                                 family.points[w].topLeftCorner(2, 2);
                CHECK((sum - cmat::Identity(2, 2)).norm() < 1e-12);
            }
        }
    }
}

TEST_CASE("chern numbers of the shipped families") {
    SUBCASE("monopole integer is stable under mesh refinement") {
        for (int r : {6, 12, 24}) {
            const ChernReport rep = chern_report(monopole_family(cubed_sphere(r), 2));
            CHECK(rep.c1 == -1);
            CHECK(rep.residual < 0.05);
            CHECK(rep.max_plaquette_phase < 0.95 * M_PI);
        }
    }
    SUBCASE("complement flips the sign; the rank-2 sum is trivial") {
        CHECK(chern_number(monopole_complement_family(cubed_sphere(12), 2)) == 1);
    }
    SUBCASE("constant families are flat") {
        CHECK(chern_number(constant_family(cubed_sphere(12), 2, 1)) == 0);
        CHECK(chern_number(constant_family(torus_mesh(8), 4, 2)) == 0);
    }
    SUBCASE("winding three is resolved at r = 24") {
        CHECK(chern_number(winding_family(cubed_sphere(24), 3)) == -3);
    }
}

TEST_CASE("gauge invariance is exact") {
    const ProjectionFamily family = monopole_family(cubed_sphere(8), 2);
    const ChernReport canonical = chern_report(family);
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const ChernReport gauged = chern_report_gauged(family, seed);
        CHECK(gauged.c1 == canonical.c1);
        CHECK(std::abs(gauged.residual - canonical.residual) < 1e-9);
    }
}

TEST_CASE("perturbation stability") {
    const ProjectionFamily family = monopole_family(cubed_sphere(8), 2);
    SUBCASE("amplitude zero returns the family unchanged") {
        const ProjectionFamily same = perturb_family(family, 0.0, 5);
        for (size_t v = 0; v < family.points.size(); ++v)
            CHECK((same.points[v] - family.points[v]).norm() == 0.0);
    }
    SUBCASE("small amplitudes keep the integer") {
        for (std::uint64_t seed : {10ULL, 11ULL, 12ULL, 13ULL}) {
            const ProjectionFamily moved = perturb_family(family, 0.1, seed);
            CHECK(chern_number(moved) == -1);
            for (size_t v = 0; v < moved.points.size(); ++v)
                CHECK(std::abs(moved.points[v].trace().real() - 1.0) < 1e-10);
        }
        const ProjectionFamily flat = perturb_family(constant_family(cubed_sphere(8), 2, 1), 0.1, 9);
        CHECK(chern_number(flat) == 0);
    }
}

TEST_CASE("guards fail loudly") {
    SUBCASE("under-resolved winding trips the phase guard") {
        CHECK_THROWS_AS(chern_number(winding_family(cubed_sphere(2), 5)), CoarseMesh);
    }
    SUBCASE("gap closing trips the overlap guard") {
        // alternate between two orthogonal rank-1 projections on a torus
        const ParameterMesh mesh = torus_mesh(2);
        ProjectionFamily family;
        family.mesh = mesh;
        family.dim = 2;
        family.rank = 1;
        cmat d10 = cmat::Zero(2, 2);
        d10(0, 0) = 1.0;
        cmat d01 = cmat::Zero(2, 2);
        d01(1, 1) = 1.0;
        for (size_t v = 0; v < mesh.vertices.size(); ++v)
            family.points.push_back(v % 2 == 0 ? d10 : d01);
        CHECK_THROWS_AS(chern_number(family), SingularOverlap);
    }
}

TEST_CASE("family JSON round trip preserves the invariant") {
    const ProjectionFamily family = monopole_family(cubed_sphere(6), 2);
    const ProjectionFamily back = family_from_json(family_to_json(family));
    CHECK(back.points.size() == family.points.size());
    for (size_t v = 0; v < family.points.size(); ++v)
        CHECK((back.points[v] - family.points[v]).norm() == 0.0);
    CHECK(chern_number(back) == chern_number(family));
}
