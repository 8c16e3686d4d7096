// JSON wire formats: operators as {"dim", "re", "im"} row-major matrices,
// projections with a "rank" field, projection families as arrays of
// (vertex, operator) records. Floats round-trip exactly through nlohmann's
// shortest-representation printer.
#pragma once

#include "grasstool/chern.hpp"
#include "grasstool/core.hpp"
#include "grasstool/grassmann.hpp"

#include <json.hpp>

#include <fstream>
#include <string>
#include <vector>

namespace grasstool {

using json = nlohmann::ordered_json;

inline json operator_to_json(const cmat& a) {
    json re = json::array();
    json im = json::array();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        json re_row = json::array();
        json im_row = json::array();
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            re_row.push_back(a(i, j).real());
            im_row.push_back(a(i, j).imag());
        }
        re.push_back(std::move(re_row));
        im.push_back(std::move(im_row));
    }
    return json{{"dim", a.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

inline cmat operator_from_json(const json& j) {
    const Eigen::Index d = j.at("dim").get<Eigen::Index>();
    if (d < 1) throw DimensionMismatch("operator_from_json: dim >= 1 required");
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    if (static_cast<Eigen::Index>(re.size()) != d || static_cast<Eigen::Index>(im.size()) != d)
        throw DimensionMismatch("operator_from_json: row count != dim");
    cmat a(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const auto& re_row = re.at(static_cast<size_t>(i));
        const auto& im_row = im.at(static_cast<size_t>(i));
        if (static_cast<Eigen::Index>(re_row.size()) != d ||
            static_cast<Eigen::Index>(im_row.size()) != d)
            throw DimensionMismatch("operator_from_json: column count != dim");
        for (Eigen::Index jj = 0; jj < d; ++jj)
            a(i, jj) = complexd(re_row.at(static_cast<size_t>(jj)).get<double>(),
                                im_row.at(static_cast<size_t>(jj)).get<double>());
    }
    require_finite(a, "operator_from_json");
    return a;
}

inline json point_to_json(const GrassmannPoint& p) {
    json j = operator_to_json(p.op);
    j["rank"] = p.rank;
    return j;
}

inline GrassmannPoint point_from_json(const json& j, const Tolerances& tol = {}) {
    GrassmannPoint p = certify(operator_from_json(j), tol);
    if (j.contains("rank") && j.at("rank").get<Eigen::Index>() != p.rank)
        throw RankAmbiguous("point_from_json: stored rank disagrees with the trace");
    return p;
}

inline json tolerances_to_json(const Tolerances& tol) {
    return json{{"algebraic", tol.algebraic}, {"spectral", tol.spectral}, {"rank_gap", tol.rank_gap}};
}

inline json family_to_json(const ProjectionFamily& family) {
    json points = json::array();
    for (size_t v = 0; v < family.points.size(); ++v) {
        const Eigen::VectorXd& x = family.mesh.vertices[v];
        json vertex = json::array();
        for (Eigen::Index c = 0; c < x.size(); ++c) vertex.push_back(x(c));
        points.push_back(json{{"vertex", std::move(vertex)}, {"op", operator_to_json(family.points[v])}});
    }
    json mesh = json::array();
    for (const auto& plq : family.mesh.plaquettes) mesh.push_back(json{plq[0], plq[1], plq[2], plq[3]});
    return json{{"kind", family.mesh.kind == MeshKind::s2_cubed ? "s2_cubed" : "torus2"},
                {"resolution", family.mesh.resolution},
                {"dim", family.dim},
                {"rank", family.rank},
                {"points", std::move(points)},
                {"plaquettes", std::move(mesh)}};
}

inline ProjectionFamily family_from_json(const json& j) {
    ProjectionFamily family;
    family.mesh.kind = j.at("kind").get<std::string>() == "torus2" ? MeshKind::torus2 : MeshKind::s2_cubed;
    family.mesh.resolution = j.at("resolution").get<int>();
    family.dim = j.at("dim").get<Eigen::Index>();
    family.rank = j.at("rank").get<Eigen::Index>();
    for (const auto& rec : j.at("points")) {
        const auto& vertex = rec.at("vertex");
        Eigen::VectorXd x(static_cast<Eigen::Index>(vertex.size()));
        for (Eigen::Index c = 0; c < x.size(); ++c) x(c) = vertex.at(static_cast<size_t>(c)).get<double>();
        family.mesh.vertices.push_back(std::move(x));
        family.points.push_back(operator_from_json(rec.at("op")));
    }
    for (const auto& plq : j.at("plaquettes"))
        family.mesh.plaquettes.push_back({plq.at(0).get<int>(), plq.at(1).get<int>(),
                                          plq.at(2).get<int>(), plq.at(3).get<int>()});
    return family;
}

inline json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

inline void save_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

}  // namespace grasstool
