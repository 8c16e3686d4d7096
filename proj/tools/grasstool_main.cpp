// grasstool: batch experiments over truncated Hilbert Grassmannians.
//
// Subcommands: section, connect, retract, chern, states, separation, suite.
// Every randomized run takes an explicit --seed; identical configuration and
// seed produce byte-identical output files. Exit codes: 0 success, 1
// acceptance failure, 2 configuration error.

#include "grasstool/chern.hpp"
#include "grasstool/core.hpp"
#include "grasstool/grassmann.hpp"
#include "grasstool/retraction.hpp"
#include "grasstool/sampling.hpp"
#include "grasstool/serialize.hpp"
#include "grasstool/states.hpp"
#include "grasstool/suite.hpp"
#include "grasstool/weak.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace grasstool;

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

json base_header(const std::string& subcommand, const Tolerances& tol) {
    return json{{"tool", "grasstool"},
                {"version", version},
                {"subcommand", subcommand},
                {"tolerances", tolerances_to_json(tol)}};
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        save_text(out_path, text);
    }
}

struct CommonOpts {
    std::uint64_t seed = 0;
    std::string out_path;
    Tolerances tol;
};

void add_tolerance_flags(CLI::App* cmd, Tolerances& tol) {
    cmd->add_option("--tol-algebraic", tol.algebraic, "algebraic identity tolerance");
    cmd->add_option("--tol-spectral", tol.spectral, "spectral gap tolerance");
    cmd->add_option("--tol-rank-gap", tol.rank_gap, "rank integrality tolerance");
}

int run_section(Eigen::Index dim, Eigen::Index rank, int samples, const CommonOpts& opts) {
    const double eps = default_eps(rank);
    const GrassmannPoint p0 = certify(random_projection(dim, rank, mix_seed(opts.seed, 1)), opts.tol);
    const Neighbourhood nb = make_neighbourhood(p0, eps);
    const double ck = std::sqrt(1.0 - rank * eps * eps);

    json rows = json::array();
    std::uint64_t attempt = 0;
    int accepted = 0;
    while (accepted < samples) {
        Rng rng(mix_seed(opts.seed, 2000 + attempt));
        cmat h = random_hermitian(dim, mix_seed(opts.seed, 3000 + attempt));
        ++attempt;
        h /= op_norm(h);
        cmat u = hermitian_exponential(h, 0.11 * (0.15 + 0.85 * rng.uniform()));
        GrassmannPoint p = certify(cmat(u * p0.op * u.adjoint()), opts.tol);
        if (!in_neighbourhood(p, nb)) continue;
        ++accepted;
        const cmat s = section(p, nb, opts.tol);
        const cmat id = cmat::Identity(dim, dim);
        const Eigen::VectorXd sv = singular_values(alignment_operator(p, p0));
        rows.push_back(json{{"deviation", neighbourhood_deviation(p, nb)},
                            {"residual", op_norm((s * p0.op * s.adjoint() - p.op).eval())},
                            {"unitarity", op_norm((s.adjoint() * s - id).eval())},
                            {"pperp_p0", op_norm(((id - p.op) * p0.op).eval())},
                            {"smin_alignment", sv(sv.size() - 1)},
                            {"smin_lower_bound", ck}});
    }
    json out = base_header("section", opts.tol);
    out["dim"] = dim;
    out["rank"] = rank;
    out["eps"] = eps;
    out["seed"] = opts.seed;
    out["samples"] = rows;
    emit(opts.out_path, out.dump(2) + "\n");
    return 0;
}

int run_connect(Eigen::Index dim, Eigen::Index rank, int steps, const CommonOpts& opts) {
    const GrassmannPoint p = certify(random_projection(dim, rank, mix_seed(opts.seed, 1)), opts.tol);
    const GrassmannPoint q = certify(random_projection(dim, rank, mix_seed(opts.seed, 2)), opts.tol);
    const auto path = connect(p, q, steps);
    json points = json::array();
    for (const GrassmannPoint& node : path) points.push_back(point_to_json(node));
    double max_gap = 0.0;
    for (size_t i = 0; i + 1 < path.size(); ++i)
        max_gap = std::max(max_gap, rank_separation(path[i], path[i + 1]));
    json out = base_header("connect", opts.tol);
    out["dim"] = dim;
    out["rank"] = rank;
    out["steps"] = steps;
    out["seed"] = opts.seed;
    out["max_step_gap"] = max_gap;
    out["path"] = points;
    emit(opts.out_path, out.dump(2) + "\n");
    return 0;
}

int run_retract(int level, Eigen::Index rank, const CommonOpts& opts) {
    const DyadicGrid grid = make_grid(level);
    if (rank > grid.cells) throw CLI::ValidationError("--rank exceeds grid dimension");
    const GrassmannPoint p =
        certify(random_projection(grid.cells, rank, mix_seed(opts.seed, 1)), opts.tol);
    const auto table = weak_limit_scan(grid, p, WeakMetric::standard(grid.cells));
    std::ostringstream csv;
    csv << "# grasstool version=" << version << " subcommand=retract level=" << level
        << " rank=" << rank << " seed=" << opts.seed
        << " tol_algebraic=" << fmt(opts.tol.algebraic) << " tol_spectral=" << fmt(opts.tol.spectral)
        << " tol_rank_gap=" << fmt(opts.tol.rank_gap) << "\n";
    csv << "t,weak_dist,trace,rank\n";
    for (const ScanRow& row : table)
        csv << fmt(row.t) << "," << fmt(row.weak_distance) << "," << fmt(row.trace) << ","
            << row.rank << "\n";
    emit(opts.out_path, csv.str());
    return 0;
}

int run_chern(const std::string& family_name, const std::string& family_file, int resolution,
              Eigen::Index dim, double perturb_amplitude, std::optional<std::uint64_t> seed,
              const CommonOpts& opts) {
    ProjectionFamily family;
    if (!family_file.empty()) {
        family = family_from_json(load_json(family_file));
    } else if (family_name == "monopole") {
        family = monopole_family(cubed_sphere(resolution), dim);
    } else if (family_name == "constant") {
        family = constant_family(cubed_sphere(resolution), dim, 1);
    } else {
        throw CLI::ValidationError("--family must be monopole or constant");
    }
    if (perturb_amplitude != 0.0) {
        if (!seed) throw CLI::ValidationError("--seed required with --perturb");
        family = perturb_family(family, perturb_amplitude, *seed);
    }
    const ChernReport report = chern_report(family, opts.tol);
    json out = base_header("chern", opts.tol);
    out["family"] = family_file.empty() ? family_name : family_file;
    out["resolution"] = family.mesh.resolution;
    out["dim"] = family.dim;
    if (seed) out["seed"] = *seed;
    out["c1"] = report.c1;
    out["residual"] = report.residual;
    out["max_plaquette_phase"] = report.max_plaquette_phase;
    emit(opts.out_path, out.dump(2) + "\n");
    return 0;
}

int run_states(const std::string& p_file, const std::string& q_file, const std::string& a_file,
               const CommonOpts& opts) {
    const GrassmannPoint p = point_from_json(load_json(p_file), opts.tol);
    const GrassmannPoint q = point_from_json(load_json(q_file), opts.tol);
    const cmat a = operator_from_json(load_json(a_file));
    const ContinuityCertificate cert = continuity_certificate(p, q, a);
    json out = base_header("states", opts.tol);
    out["rank"] = p.rank;
    out["omega_p"] = json{{"re", cert.omega_p.real()}, {"im", cert.omega_p.imag()}};
    out["omega_q"] = json{{"re", cert.omega_q.real()}, {"im", cert.omega_q.imag()}};
    out["lhs"] = cert.lhs;
    out["bound"] = cert.bound;
    out["per_term"] = cert.per_term;
    out["trace_norm_gap"] = cert.trace_norm_gap;
    out["op_norm_gap"] = cert.op_norm_gap;
    out["verdict"] = cert.verdict;
    emit(opts.out_path, out.dump(2) + "\n");
    return cert.verdict ? 0 : 1;
}

int run_separation(Eigen::Index dim, int pairs, const CommonOpts& opts) {
    std::ostringstream csv;
    csv << "# grasstool version=" << version << " subcommand=separation dim=" << dim
        << " pairs=" << pairs << " seed=" << opts.seed
        << " tol_algebraic=" << fmt(opts.tol.algebraic) << "\n";
    csv << "pair,rank_p,rank_q,op_norm_separation\n";
    for (int i = 0; i < pairs; ++i) {
        Rng rng(mix_seed(opts.seed, static_cast<std::uint64_t>(i)));
        const Eigen::Index n1 = 1 + static_cast<Eigen::Index>(rng.uniform() * (dim - 1));
        Eigen::Index n2 = 1 + static_cast<Eigen::Index>(rng.uniform() * (dim - 1));
        if (n2 == n1) n2 = (n1 % (dim - 1)) + 1;
        const GrassmannPoint p = certify(
            random_projection(dim, n1, mix_seed(opts.seed, 10000 + 2 * static_cast<std::uint64_t>(i))),
            opts.tol);
        const GrassmannPoint q = certify(
            random_projection(dim, n2, mix_seed(opts.seed, 10001 + 2 * static_cast<std::uint64_t>(i))),
            opts.tol);
        csv << i << "," << n1 << "," << n2 << "," << fmt(rank_separation(p, q)) << "\n";
    }
    emit(opts.out_path, csv.str());
    return 0;
}

int cmd_suite(Eigen::Index dim, std::uint64_t seed, const std::string& out_dir,
              const Tolerances& tol) {
    SuiteConfig cfg;
    cfg.dim = dim;
    cfg.seed = seed;
    cfg.tol = tol;
    ArtifactMap artifacts;
    const auto results = run_suite(cfg, artifacts);
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        for (const auto& [name, text] : artifacts)
            save_text((std::filesystem::path(out_dir) / name).string(), text);
    }
    bool all_pass = true;
    for (const CriterionResult& r : results) {
        all_pass = all_pass && r.pass;
        std::cout << r.id << " " << (r.pass ? "PASS" : "FAIL") << " " << r.title << " — "
                  << r.detail << "\n";
    }
    std::cout << (all_pass ? "suite: all criteria passed" : "suite: FAILURES present") << "\n";
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"grasstool — projection-manifold experiments at finite truncation"};
    app.require_subcommand(1);

    // section
    auto* section_cmd = app.add_subcommand("section", "sample the neighbourhood O0 and report "
                                                      "section residuals and bound-chain margins");
    Eigen::Index sec_dim = 16, sec_rank = 3;
    int sec_samples = 100;
    CommonOpts sec_opts;
    section_cmd->add_option("--dim", sec_dim, "truncation dimension");
    section_cmd->add_option("--rank", sec_rank, "projection rank k");
    section_cmd->add_option("--samples", sec_samples, "number of sampled points");
    section_cmd->add_option("--seed", sec_opts.seed, "random seed")->required();
    section_cmd->add_option("--out", sec_opts.out_path, "output file (default stdout)");
    add_tolerance_flags(section_cmd, sec_opts.tol);

    // connect
    auto* connect_cmd = app.add_subcommand("connect", "emit a principal-angle path between two "
                                                      "random equal-rank projections");
    Eigen::Index con_dim = 12, con_rank = 3;
    int con_steps = 8;
    CommonOpts con_opts;
    connect_cmd->add_option("--dim", con_dim, "truncation dimension");
    connect_cmd->add_option("--rank", con_rank, "projection rank");
    connect_cmd->add_option("--steps", con_steps, "path steps");
    connect_cmd->add_option("--seed", con_opts.seed, "random seed")->required();
    connect_cmd->add_option("--out", con_opts.out_path, "output file (default stdout)");
    add_tolerance_flags(connect_cmd, con_opts.tol);

    // retract
    auto* retract_cmd = app.add_subcommand("retract", "weak-limit scan of the compression "
                                                      "retraction (CSV)");
    int ret_level = 8;
    Eigen::Index ret_rank = 3;
    CommonOpts ret_opts;
    retract_cmd->add_option("--level", ret_level, "dyadic grid level J (m = 2^J cells)");
    retract_cmd->add_option("--rank", ret_rank, "projection rank");
    retract_cmd->add_option("--seed", ret_opts.seed, "random seed")->required();
    retract_cmd->add_option("--out", ret_opts.out_path, "output file (default stdout)");
    add_tolerance_flags(retract_cmd, ret_opts.tol);

    // chern
    auto* chern_cmd = app.add_subcommand("chern", "first Chern number of a projection family");
    std::string chern_family = "monopole", chern_file;
    int chern_resolution = 12;
    Eigen::Index chern_dim = 2;
    double chern_perturb = 0.0;
    std::uint64_t chern_seed = 0;
    CommonOpts chern_opts;
    chern_cmd->add_option("--family", chern_family, "built-in family: monopole|constant");
    chern_cmd->add_option("--file", chern_file, "family JSON file (overrides --family)");
    chern_cmd->add_option("--resolution", chern_resolution, "cells per cube-face edge");
    chern_cmd->add_option("--dim", chern_dim, "ambient dimension");
    chern_cmd->add_option("--perturb", chern_perturb, "perturbation amplitude");
    auto* chern_seed_opt = chern_cmd->add_option("--seed", chern_seed, "seed (required with --perturb)");
    chern_cmd->add_option("--out", chern_opts.out_path, "output file (default stdout)");
    add_tolerance_flags(chern_cmd, chern_opts.tol);

    // states
    auto* states_cmd = app.add_subcommand("states", "continuity certificate for two projections "
                                                    "and an observable");
    std::string states_p, states_q, states_a;
    CommonOpts states_opts;
    states_cmd->add_option("--p", states_p, "projection JSON file")->required();
    states_cmd->add_option("--q", states_q, "projection JSON file")->required();
    states_cmd->add_option("--a", states_a, "operator JSON file")->required();
    states_cmd->add_option("--out", states_opts.out_path, "output file (default stdout)");
    add_tolerance_flags(states_cmd, states_opts.tol);

    // separation
    auto* sep_cmd = app.add_subcommand("separation", "rank-separation table for random "
                                                     "mixed-rank pairs (CSV)");
    Eigen::Index sep_dim = 10;
    int sep_pairs = 500;
    CommonOpts sep_opts;
    sep_cmd->add_option("--dim", sep_dim, "truncation dimension");
    sep_cmd->add_option("--pairs", sep_pairs, "number of pairs");
    sep_cmd->add_option("--seed", sep_opts.seed, "random seed")->required();
    sep_cmd->add_option("--out", sep_opts.out_path, "output file (default stdout)");
    add_tolerance_flags(sep_cmd, sep_opts.tol);

    // suite
    auto* suite_cmd = app.add_subcommand("suite", "full acceptance battery; nonzero exit on "
                                                  "any failure");
    Eigen::Index suite_dim = 16;
    std::uint64_t suite_seed = 0;
    std::string suite_out;
    Tolerances suite_tol;
    suite_cmd->add_option("--dim", suite_dim, "truncation dimension for the d=16 criteria");
    suite_cmd->add_option("--seed", suite_seed, "random seed")->required();
    suite_cmd->add_option("--out", suite_out, "artifact directory");
    add_tolerance_flags(suite_cmd, suite_tol);

    CLI11_PARSE(app, argc, argv);

    try {
        if (section_cmd->parsed()) return run_section(sec_dim, sec_rank, sec_samples, sec_opts);
        if (connect_cmd->parsed()) return run_connect(con_dim, con_rank, con_steps, con_opts);
        if (retract_cmd->parsed()) return run_retract(ret_level, ret_rank, ret_opts);
        if (chern_cmd->parsed())
            return run_chern(chern_family, chern_file, chern_resolution, chern_dim, chern_perturb,
                             chern_seed_opt->count() > 0 ? std::optional<std::uint64_t>(chern_seed)
                                                         : std::nullopt,
                             chern_opts);
        if (states_cmd->parsed()) return run_states(states_p, states_q, states_a, states_opts);
        if (sep_cmd->parsed()) return run_separation(sep_dim, sep_pairs, sep_opts);
        if (suite_cmd->parsed()) return cmd_suite(suite_dim, suite_seed, suite_out, suite_tol);
    } catch (const CLI::Error& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return 2;
    } catch (const grasstool::Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 2;
}
