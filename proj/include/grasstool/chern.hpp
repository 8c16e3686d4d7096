// First Chern numbers of projection families over meshed closed surfaces,
// via plaquette Berry fluxes of frame overlap matrices. Closedness of the
// mesh (every edge shared by two opposite-oriented plaquettes) forces the
// total flux to be an integer multiple of 2 pi; guards reject under-resolved
// families instead of rounding silently.
#pragma once

#include "grasstool/core.hpp"
#include "grasstool/grassmann.hpp"
#include "grasstool/sampling.hpp"

#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace grasstool {

enum class MeshKind { s2_cubed, torus2 };

struct ParameterMesh {
    MeshKind kind = MeshKind::s2_cubed;
    int resolution = 0;
    // S2: unit 3-vectors. T2: (u, v) angle pairs in [0, 2pi).
    std::vector<Eigen::VectorXd> vertices;
    // Oriented quadrilaterals, each edge shared by exactly two plaquettes
    // with opposite induced orientations.
    std::vector<std::array<int, 4>> plaquettes;
};

namespace detail {

// Smooth coordinates for random fields: the sphere embedding itself, or the
// torus embedded through (cos u, sin u, cos v, sin v).
inline Eigen::VectorXd smooth_coordinates(const ParameterMesh& mesh, int vertex) {
    const Eigen::VectorXd& x = mesh.vertices[static_cast<size_t>(vertex)];
    if (mesh.kind == MeshKind::s2_cubed) return x;
    Eigen::VectorXd c(4);
    c << std::cos(x(0)), std::sin(x(0)), std::cos(x(1)), std::sin(x(1));
    return c;
}

}  // namespace detail

// Cubed sphere: six faces, r x r cells each, gnomonic points normalised onto
// the unit sphere, shared face boundaries deduplicated. Plaquettes are wound
// clockwise as seen from outside the sphere; this fixes the sign convention
// under which the monopole family below carries c_1 = -1.
inline ParameterMesh cubed_sphere(int r) {
    if (r < 1) throw std::invalid_argument("cubed_sphere: resolution >= 1 required");
    ParameterMesh mesh;
    mesh.kind = MeshKind::s2_cubed;
    mesh.resolution = r;

    // Integer cube coordinates scaled by r give exact deduplication keys.
    std::map<std::array<long, 3>, int> index;
    auto vertex_id = [&](const Eigen::Vector3d& cube) {
        std::array<long, 3> key{std::lround(cube(0) * r), std::lround(cube(1) * r),
                                std::lround(cube(2) * r)};
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        const int id = static_cast<int>(mesh.vertices.size());
        index.emplace(key, id);
        mesh.vertices.push_back(cube.normalized());
        return id;
    };

    // Face frames (normal, u-axis, v-axis) with u x v = outward normal.
    const std::array<std::array<Eigen::Vector3d, 3>, 6> faces = {{
        {Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0), Eigen::Vector3d(0, 0, 1)},
        {Eigen::Vector3d(-1, 0, 0), Eigen::Vector3d(0, 0, 1), Eigen::Vector3d(0, 1, 0)},
        {Eigen::Vector3d(0, 1, 0), Eigen::Vector3d(0, 0, 1), Eigen::Vector3d(1, 0, 0)},
        {Eigen::Vector3d(0, -1, 0), Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 0, 1)},
        {Eigen::Vector3d(0, 0, 1), Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0)},
        {Eigen::Vector3d(0, 0, -1), Eigen::Vector3d(0, 1, 0), Eigen::Vector3d(1, 0, 0)},
    }};

    for (const auto& face : faces) {
        const Eigen::Vector3d normal = face[0], ua = face[1], va = face[2];
        auto corner = [&](int i, int j) {
            const double u = -1.0 + 2.0 * static_cast<double>(i) / r;
            const double v = -1.0 + 2.0 * static_cast<double>(j) / r;
            return vertex_id(Eigen::Vector3d(normal + u * ua + v * va));
        };
        for (int i = 0; i < r; ++i) {
            for (int j = 0; j < r; ++j) {
                // (u x v = outward) + this winding = clockwise from outside.
                mesh.plaquettes.push_back(
                    {corner(i, j), corner(i, j + 1), corner(i + 1, j + 1), corner(i + 1, j)});
            }
        }
    }
    return mesh;
}

inline ParameterMesh torus_mesh(int r) {
    if (r < 2) throw std::invalid_argument("torus_mesh: resolution >= 2 required");
    ParameterMesh mesh;
    mesh.kind = MeshKind::torus2;
    mesh.resolution = r;
    const double step = 2.0 * M_PI / r;
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            Eigen::VectorXd angles(2);
            angles << i * step, j * step;
            mesh.vertices.push_back(angles);
        }
    auto id = [&](int i, int j) { return ((i % r + r) % r) * r + ((j % r + r) % r); };
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            mesh.plaquettes.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
    return mesh;
}

// Closedness check: every directed edge appears exactly once, so every
// undirected edge is shared by two plaquettes with opposite orientations.
inline void validate_mesh(const ParameterMesh& mesh) {
    std::map<std::pair<int, int>, int> directed;
    for (const auto& plq : mesh.plaquettes) {
        for (int e = 0; e < 4; ++e) {
            const int a = plq[static_cast<size_t>(e)];
            const int b = plq[static_cast<size_t>((e + 1) % 4)];
            if (a == b) throw std::invalid_argument("validate_mesh: degenerate edge");
            directed[{a, b}] += 1;
        }
    }
    for (const auto& [edge, count] : directed) {
        if (count != 1) throw std::invalid_argument("validate_mesh: directed edge repeated");
        if (directed.find({edge.second, edge.first}) == directed.end())
            throw std::invalid_argument("validate_mesh: unpaired edge");
    }
}

struct ProjectionFamily {
    ParameterMesh mesh;
    Eigen::Index dim = 0;
    Eigen::Index rank = 0;
    std::vector<cmat> points;  // one projection per mesh vertex
};

// Orthonormal columns spanning Ran(P); gauge choice is irrelevant to the
// Chern number (phases cancel around closed plaquette loops).
inline cmat frame_of(const GrassmannPoint& p) { return range_frame(p); }

struct ChernReport {
    long long c1 = 0;
    double residual = 0.0;            // |pre-rounding sum - c1|
    double max_plaquette_phase = 0.0; // largest |plaquette phase|, radians
};

namespace detail {

inline std::vector<cmat> family_frames(const ProjectionFamily& family, const Tolerances& tol) {
    std::vector<cmat> frames;
    frames.reserve(family.points.size());
    for (const cmat& p : family.points) frames.push_back(range_frame(certify(p, tol)));
    return frames;
}

inline ChernReport chern_from_frames(const ProjectionFamily& family,
                                     const std::vector<cmat>& frames) {
    validate_mesh(family.mesh);
    constexpr double det_floor = 1e-8;
    constexpr double phase_guard = 0.95 * M_PI;
    constexpr double integer_slack = 0.05;

    double total = 0.0;
    double max_phase = 0.0;
    const Eigen::Index n = family.rank;
    for (const auto& plq : family.mesh.plaquettes) {
        cmat loop = cmat::Identity(n, n);
        for (int e = 0; e < 4; ++e) {
            const cmat& fa = frames[static_cast<size_t>(plq[static_cast<size_t>(e)])];
            const cmat& fb = frames[static_cast<size_t>(plq[static_cast<size_t>((e + 1) % 4)])];
            cmat overlap = fa.adjoint() * fb;
            if (std::abs(overlap.determinant()) < det_floor)
                throw SingularOverlap("chern_number: edge overlap determinant below 1e-8");
            loop = loop * overlap;
        }
        const double phase = std::arg(loop.determinant());
        max_phase = std::max(max_phase, std::abs(phase));
        if (std::abs(phase) > phase_guard)
            throw CoarseMesh("chern_number: plaquette phase exceeds 0.95 pi; refine the mesh");
        total += phase;
    }

    const double c1_real = total / (2.0 * M_PI);
    const double rounded = std::round(c1_real);
    if (std::abs(c1_real - rounded) > integer_slack)
        throw CoarseMesh("chern_number: flux sum " + std::to_string(c1_real) +
                         " too far from an integer");
    ChernReport report;
    report.c1 = static_cast<long long>(rounded);
    report.residual = std::abs(c1_real - rounded);
    report.max_plaquette_phase = max_phase;
    return report;
}

}  // namespace detail

inline ChernReport chern_report(const ProjectionFamily& family, const Tolerances& tol = {}) {
    return detail::chern_from_frames(family, detail::family_frames(family, tol));
}

inline long long chern_number(const ProjectionFamily& family, const Tolerances& tol = {}) {
    return chern_report(family, tol).c1;
}

// Same flux computation with every vertex frame multiplied by a random
// unitary change of gauge; the plaquette loop phases are gauge invariant,
// so the report must coincide with the canonical one.
inline ChernReport chern_report_gauged(const ProjectionFamily& family, std::uint64_t seed,
                                       const Tolerances& tol = {}) {
    std::vector<cmat> frames = detail::family_frames(family, tol);
    for (size_t v = 0; v < frames.size(); ++v)
        frames[v] = frames[v] * random_unitary(family.rank, mix_seed(seed, v));
    return detail::chern_from_frames(family, frames);
}

// P(x) = ( (1 + x . sigma) / 2 ) (+) 0: the rank-1 family generating the
// classification over S^2.
inline ProjectionFamily monopole_family(const ParameterMesh& mesh, Eigen::Index d = 2) {
    if (mesh.kind != MeshKind::s2_cubed)
        throw std::invalid_argument("monopole_family: S2 mesh required");
    if (d < 2) throw DimensionMismatch("monopole_family: d >= 2 required");
    ProjectionFamily family;
    family.mesh = mesh;
    family.dim = d;
    family.rank = 1;
    family.points.reserve(mesh.vertices.size());
    for (const auto& x : mesh.vertices) {
        cmat block(2, 2);
        block << complexd(1.0 + x(2), 0.0), complexd(x(0), -x(1)),
                 complexd(x(0), x(1)), complexd(1.0 - x(2), 0.0);
        family.points.push_back(embed(cmat(0.5 * block), d));
    }
    return family;
}

// Complement taken inside the 2x2 block: x |-> (1 - x . sigma)/2 (+) 0.
inline ProjectionFamily monopole_complement_family(const ParameterMesh& mesh, Eigen::Index d = 2) {
    ProjectionFamily family = monopole_family(mesh, d);
    for (cmat& p : family.points) {
        cmat block = cmat::Identity(2, 2) - p.topLeftCorner(2, 2);
        p = embed(block, d);
    }
    return family;
}

inline ProjectionFamily constant_family(const ParameterMesh& mesh, Eigen::Index d, Eigen::Index n) {
    if (n < 0 || n > d) throw DimensionMismatch("constant_family: need 0 <= n <= d");
    ProjectionFamily family;
    family.mesh = mesh;
    family.dim = d;
    family.rank = n;
    cmat p = cmat::Zero(d, d);
    p.topLeftCorner(n, n) = cmat::Identity(n, n);
    family.points.assign(mesh.vertices.size(), p);
    return family;
}

// Conjugates every point by exp(i a H(x)) with H(x) = H_0 + sum_c coord_c(x) H_c,
// a smooth random self-adjoint field. Ranks are preserved exactly; overlaps
// are re-checked so an excessive amplitude fails loudly.
inline ProjectionFamily perturb_family(const ProjectionFamily& family, double amplitude,
                                       std::uint64_t seed) {
    ProjectionFamily out = family;
    if (amplitude == 0.0) return out;
    const Eigen::Index d = family.dim;
    const Eigen::Index ncoords = detail::smooth_coordinates(family.mesh, 0).size();
    std::vector<cmat> generators;
    for (Eigen::Index c = 0; c <= ncoords; ++c) {
        cmat h = random_hermitian(d, mix_seed(seed, static_cast<std::uint64_t>(c)));
        generators.push_back(cmat(h / op_norm(h)));
    }
    for (size_t v = 0; v < family.points.size(); ++v) {
        const Eigen::VectorXd coords = detail::smooth_coordinates(family.mesh, static_cast<int>(v));
        cmat h = generators[0];
        for (Eigen::Index c = 0; c < ncoords; ++c) h += coords(c) * generators[static_cast<size_t>(c) + 1];
        cmat u = hermitian_exponential(h, amplitude);
        out.points[v] = u * family.points[v] * u.adjoint();
    }
    // Fail on gap closing across any edge after the perturbation.
    Tolerances tol;
    detail::chern_from_frames(out, detail::family_frames(out, tol));
    return out;
}

}  // namespace grasstool
