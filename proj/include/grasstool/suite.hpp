// The acceptance battery behind `grasstool suite`: one function per
// criterion, each returning a pass/fail verdict with a detail line and
// emitting its artifact deterministically (identical config and seed give
// byte-identical artifact text).
#pragma once

#include "grasstool/chern.hpp"
#include "grasstool/core.hpp"
#include "grasstool/grassmann.hpp"
#include "grasstool/linalg.hpp"
#include "grasstool/parallel.hpp"
#include "grasstool/retraction.hpp"
#include "grasstool/sampling.hpp"
#include "grasstool/serialize.hpp"
#include "grasstool/states.hpp"
#include "grasstool/weak.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace grasstool {

struct SuiteConfig {
    Eigen::Index dim = 16;
    std::uint64_t seed = 7;
    Tolerances tol;
};

struct CriterionResult {
    std::string id;
    std::string title;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

using ArtifactMap = std::map<std::string, std::string>;

namespace suitedetail {

inline std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline json config_header(const SuiteConfig& cfg, const std::string& what) {
    return json{{"tool", "grasstool"},
                {"version", version},
                {"subcommand", what},
                {"dim", cfg.dim},
                {"seed", cfg.seed},
                {"tolerances", tolerances_to_json(cfg.tol)}};
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

// Samples projections inside the base neighbourhood by conjugating the base
// point with exp(i a H); rejection keeps only certified members.
inline std::vector<GrassmannPoint> sample_neighbourhood(const Neighbourhood& nb, int count,
                                                        std::uint64_t seed, double max_amplitude,
                                                        const Tolerances& tol) {
    std::vector<GrassmannPoint> samples;
    samples.reserve(static_cast<size_t>(count));
    const Eigen::Index d = nb.base.dim();
    std::uint64_t attempt = 0;
    while (static_cast<int>(samples.size()) < count) {
        Rng rng(mix_seed(seed, attempt++));
        cmat h = random_hermitian(d, mix_seed(seed, attempt + (1ULL << 32)));
        h /= op_norm(h);
        const double amplitude = max_amplitude * (0.15 + 0.85 * rng.uniform());
        cmat u = hermitian_exponential(h, amplitude);
        GrassmannPoint p = certify(cmat(u * nb.base.op * u.adjoint()), tol);
        if (in_neighbourhood(p, nb)) samples.push_back(std::move(p));
        if (attempt > 100ULL * static_cast<std::uint64_t>(count))
            throw Error("sample_neighbourhood: rejection sampling stalled");
    }
    return samples;
}

}  // namespace suitedetail

// Criteria 1 and 2 share one sample set: the section property and the bound
// chain of the local-triviality proof.
inline std::pair<CriterionResult, CriterionResult> criterion_section_and_bounds(
    const SuiteConfig& cfg, ArtifactMap& artifacts) {
    using namespace suitedetail;
    Timer timer;
    const Eigen::Index d = cfg.dim;
    const Eigen::Index k = 3;
    const double eps = 1.0 / (2.0 * std::sqrt(3.0));
    const double ck = std::sqrt(1.0 - static_cast<double>(k) * eps * eps);
    const int count = 100;

    const GrassmannPoint p0 =
        certify(random_projection(d, k, mix_seed(cfg.seed, 101)), cfg.tol);
    const Neighbourhood nb = make_neighbourhood(p0, eps);
    const auto samples = sample_neighbourhood(nb, count, mix_seed(cfg.seed, 102), 0.11, cfg.tol);

    struct Row {
        double residual, unitarity, pperp_p0, smin;
        bool ok;
    };
    std::vector<Row> rows(samples.size());
    const cmat id = cmat::Identity(d, d);
    parallel_for(static_cast<int>(samples.size()), [&](int i) {
        Row row{1.0, 1.0, 1.0, 0.0, false};
        try {
            const GrassmannPoint& p = samples[static_cast<size_t>(i)];
            const cmat u = section(p, nb, cfg.tol);
            row.residual = op_norm((u * p0.op * u.adjoint() - p.op).eval());
            row.unitarity = op_norm((u.adjoint() * u - id).eval());
            row.pperp_p0 = op_norm(((id - p.op) * p0.op).eval());
            const Eigen::VectorXd sv = singular_values(alignment_operator(p, p0));
            row.smin = sv(sv.size() - 1);
            row.ok = true;
        } catch (const Error&) {
            row.ok = false;
        }
        rows[static_cast<size_t>(i)] = row;
    });

    double max_residual = 0.0, max_unitarity = 0.0, max_pperp = 0.0, min_smin = 1.0;
    bool all_ok = true;
    json sample_rows = json::array();
    for (const Row& row : rows) {
        all_ok = all_ok && row.ok;
        max_residual = std::max(max_residual, row.residual);
        max_unitarity = std::max(max_unitarity, row.unitarity);
        max_pperp = std::max(max_pperp, row.pperp_p0);
        min_smin = std::min(min_smin, row.smin);
        sample_rows.push_back(json{{"residual", row.residual},
                                   {"unitarity", row.unitarity},
                                   {"pperp_p0", row.pperp_p0},
                                   {"smin_alignment", row.smin}});
    }
    const double elapsed = timer.seconds();

    json artifact = config_header(cfg, "section");
    artifact["k"] = k;
    artifact["eps"] = eps;
    artifact["c_k"] = ck;
    artifact["samples"] = sample_rows;
    artifacts["section.json"] = artifact.dump(2) + "\n";

    CriterionResult c1;
    c1.id = "C1";
    c1.title = "section correctness";
    c1.pass = all_ok && max_residual < 1e-8 && max_unitarity < 1e-10 && elapsed < 5.0;
    c1.detail = "max |U P0 U* - P| = " + fmt(max_residual) + ", max |U*U - 1| = " +
                fmt(max_unitarity) + ", " + fmt(elapsed) + " s";
    c1.seconds = elapsed;

    CriterionResult c2;
    c2.id = "C2";
    c2.title = "bound chain";
    const double bound = std::sqrt(static_cast<double>(k)) * eps;
    c2.pass = max_pperp < bound && min_smin >= ck - 1e-8;
    c2.detail = "max |P_perp P0| = " + fmt(max_pperp) + " < " + fmt(bound) +
                ", min smin(A_P) = " + fmt(min_smin) + " >= " + fmt(ck) + " - 1e-8";
    c2.seconds = elapsed;
    return {c1, c2};
}

inline CriterionResult criterion_connect(const SuiteConfig& cfg, ArtifactMap& artifacts) {
    using namespace suitedetail;
    Timer timer;
    const Eigen::Index d = 12;
    const int pairs = 50;
    const int steps = 8;
    bool pass = true;
    double max_gap = 0.0;
    std::string failure;
    json pair_rows = json::array();

    for (int i = 0; i < pairs && pass; ++i) {
        const Eigen::Index n = 1 + (i % 6);
        const GrassmannPoint p =
            certify(random_projection(d, n, mix_seed(cfg.seed, 300 + 2 * static_cast<std::uint64_t>(i))),
                    cfg.tol);
        const GrassmannPoint q =
            certify(random_projection(d, n, mix_seed(cfg.seed, 301 + 2 * static_cast<std::uint64_t>(i))),
                    cfg.tol);
        std::vector<GrassmannPoint> path;
        try {
            path = connect(p, q, steps);  // certify() inside validates intermediates
        } catch (const Error& err) {
            pass = false;
            failure = err.what();
            break;
        }
        const bool endpoints_exact = (path.front().op.array() == p.op.array()).all() &&
                                     (path.back().op.array() == q.op.array()).all();
        double worst_gap = 0.0;
        for (size_t s = 0; s + 1 < path.size(); ++s)
            worst_gap = std::max(worst_gap, rank_separation(path[s], path[s + 1]));
        max_gap = std::max(max_gap, worst_gap);
        const double gap_budget = M_PI / (2.0 * steps) + 1e-9;
        if (!endpoints_exact || worst_gap >= gap_budget) {
            pass = false;
            failure = "endpoints or step bound violated";
        }
        pair_rows.push_back(json{{"rank", n}, {"max_step_gap", worst_gap}});
    }

    json artifact = config_header(cfg, "connect");
    artifact["pairs"] = pair_rows;
    artifacts["connect.json"] = artifact.dump(2) + "\n";

    CriterionResult c;
    c.id = "C3";
    c.title = "path-connectedness witness";
    c.pass = pass;
    c.detail = pass ? "50 paths, max step gap " + fmt(max_gap) + " < " + fmt(M_PI / 16.0)
                    : failure;
    c.seconds = timer.seconds();
    return c;
}

inline CriterionResult criterion_separation(const SuiteConfig& cfg, ArtifactMap& artifacts) {
    using namespace suitedetail;
    Timer timer;
    const Eigen::Index d = 10;
    const int pairs = 500;
    double min_sep = 2.0;
    std::ostringstream csv;
    csv << "# grasstool version=" << version << " subcommand=separation dim=" << d
        << " seed=" << cfg.seed << " tol_algebraic=" << fmt(cfg.tol.algebraic) << "\n";
    csv << "pair,rank_p,rank_q,op_norm_separation\n";
    for (int i = 0; i < pairs; ++i) {
        Rng rng(mix_seed(cfg.seed, 400 + static_cast<std::uint64_t>(i)));
        const Eigen::Index n1 = 1 + static_cast<Eigen::Index>(rng.uniform() * (d - 1));
        Eigen::Index n2 = 1 + static_cast<Eigen::Index>(rng.uniform() * (d - 1));
        if (n2 == n1) n2 = (n1 % (d - 1)) + 1;
        const GrassmannPoint p = certify(
            random_projection(d, n1, mix_seed(cfg.seed, 500 + 2 * static_cast<std::uint64_t>(i))),
            cfg.tol);
        const GrassmannPoint q = certify(
            random_projection(d, n2, mix_seed(cfg.seed, 501 + 2 * static_cast<std::uint64_t>(i))),
            cfg.tol);
        const double sep = rank_separation(p, q);
        min_sep = std::min(min_sep, sep);
        csv << i << "," << n1 << "," << n2 << "," << fmt(sep) << "\n";
    }

    // Companion witness: weak distances of |e_k><e_k| to 0 decay as 4^-k
    // while every one of these projections has operator norm one.
    const WeakMetric metric = WeakMetric::standard(d);
    bool weak_ok = true;
    csv << "# weak escape: k, weak_dist(|e_k><e_k|, 0), op_norm\n";
    double prev = 1.0;
    for (Eigen::Index kk = 1; kk <= d; ++kk) {
        cmat ek = cmat::Zero(d, d);
        ek(kk - 1, kk - 1) = 1.0;
        const double wd = weak_dist_to_zero(ek, metric);
        const double expected = std::pow(4.0, -static_cast<double>(kk));
        if (std::abs(wd - expected) > 1e-12 * expected || wd >= prev) weak_ok = false;
        prev = wd;
        csv << "# " << kk << "," << fmt(wd) << ",1\n";
    }
    artifacts["separation.csv"] = csv.str();

    CriterionResult c;
    c.id = "C4";
    c.title = "norm rank-separation vs weak escape";
    c.pass = min_sep >= 1.0 - 1e-9 && weak_ok;
    c.detail = "min separation " + fmt(min_sep) + " over 500 mixed-rank pairs; weak ladder " +
               (weak_ok ? "matches 4^-k" : "broken");
    c.seconds = timer.seconds();
    return c;
}

inline CriterionResult criterion_appendix_d(const SuiteConfig& cfg, ArtifactMap& artifacts) {
    using namespace suitedetail;
    Timer timer;
    const DyadicGrid grid = make_grid(8);
    const Eigen::Index m = grid.cells;
    const int pairs_per_level = 12;  // >= 100 pairs across the dyadic ladder

    bool pass = true;
    double worst_mult = 0.0, worst_adj = 0.0, worst_coiso = 0.0, worst_rt = 0.0;
    json levels = json::array();
    for (int j = 0; j <= grid.level && pass; ++j) {
        const double t = std::ldexp(1.0, -j);
        const CompressionOperator comp = compression(grid, t);
        const cmat rect = comp.rectangular();
        const cmat rect_adj = comp.rectangular_adjoint();
        const double coiso = (rect * rect_adj - cmat::Identity(comp.coarse, comp.coarse)).norm();
        const double rt = (rect_adj * rect - restriction(grid, t)).norm();
        worst_coiso = std::max(worst_coiso, coiso);
        worst_rt = std::max(worst_rt, rt);
        if (coiso >= 1e-12 || rt >= 1e-12) pass = false;

        double mult = 0.0, adj = 0.0;
        for (int i = 0; i < pairs_per_level; ++i) {
            cmat a = random_operator(comp.coarse,
                                     mix_seed(cfg.seed, 600 + 100 * static_cast<std::uint64_t>(j) +
                                                            2 * static_cast<std::uint64_t>(i)));
            cmat b = random_operator(comp.coarse,
                                     mix_seed(cfg.seed, 601 + 100 * static_cast<std::uint64_t>(j) +
                                                            2 * static_cast<std::uint64_t>(i)));
            a /= a.norm();
            b /= b.norm();
            const cmat pa = compress(grid, t, a);
            const cmat pb = compress(grid, t, b);
            const cmat pab = compress(grid, t, cmat(a * b));
            // Frobenius residual against the operator-norm lower bound
            // |A| >= |A|_F / sqrt(dim) keeps this strictly stronger than the
            // stated operator-norm criterion.
            const double scale =
                (a.norm() / std::sqrt(static_cast<double>(comp.coarse))) *
                (b.norm() / std::sqrt(static_cast<double>(comp.coarse))) * static_cast<double>(m);
            mult = std::max(mult, (pab - pa * pb).norm() / scale);
            adj = std::max(adj, (compress(grid, t, cmat(a.adjoint())) - pa.adjoint()).norm());
        }
        worst_mult = std::max(worst_mult, mult);
        worst_adj = std::max(worst_adj, adj);
        if (mult >= 1e-12 || adj >= 1e-12) pass = false;
        levels.push_back(json{{"t", t},
                              {"coarse_dim", comp.coarse},
                              {"coisometry_residual", coiso},
                              {"restriction_residual", rt},
                              {"multiplicativity_residual_scaled", mult},
                              {"adjoint_residual", adj}});
    }
    const double elapsed = timer.seconds();
    if (elapsed >= 30.0) pass = false;

    json artifact = config_header(cfg, "appendix_d");
    artifact["grid_level"] = grid.level;
    artifact["levels"] = levels;
    artifacts["appendix_d.json"] = artifact.dump(2) + "\n";

    CriterionResult c;
    c.id = "C5";
    c.title = "compression algebra (exact dyadic mode)";
    c.pass = pass;
    c.detail = "worst scaled multiplicativity " + fmt(worst_mult) + ", adjoint " + fmt(worst_adj) +
               ", D D* - 1: " + fmt(worst_coiso) + ", D*D - R_t: " + fmt(worst_rt) + ", " +
               fmt(elapsed) + " s";
    c.seconds = elapsed;
    return c;
}

inline CriterionResult criterion_retraction(const SuiteConfig& cfg, ArtifactMap& artifacts) {
    using namespace suitedetail;
    Timer timer;
    const DyadicGrid grid = make_grid(8);
    const Eigen::Index m = grid.cells;
    const GrassmannPoint p =
        certify(random_projection(m, 3, mix_seed(cfg.seed, 700)), cfg.tol);

    const bool start_exact = (retract_point(grid, 0.0, p).op.array() == p.op.array()).all();
    const GrassmannPoint end = retract_point(grid, 1.0, p);
    const bool end_exact = (end.op.array() == cmat::Zero(m, m).array()).all() && end.rank == 0;

    const WeakMetric metric = WeakMetric::standard(m);
    const auto table = weak_limit_scan(grid, p, metric);

    bool reached = false;
    bool trace_monotone = true;
    double prev_trace = table.front().trace;
    std::ostringstream csv;
    csv << "# grasstool version=" << version << " subcommand=retract level=" << grid.level
        << " rank=3 seed=" << cfg.seed << " tol_algebraic=" << fmt(cfg.tol.algebraic) << "\n";
    csv << "t,weak_dist,trace,rank\n";
    for (const ScanRow& row : table) {
        if (row.t <= 1.0 - 1.0 / static_cast<double>(m) && row.weak_distance < 1e-6) reached = true;
        if (row.trace > prev_trace + 1e-9) trace_monotone = false;
        prev_trace = row.trace;
        csv << fmt(row.t) << "," << fmt(row.weak_distance) << "," << fmt(row.trace) << ","
            << row.rank << "\n";
    }
    artifacts["retract.csv"] = csv.str();

    CriterionResult c;
    c.id = "C6";
    c.title = "retraction endpoints and weak decay";
    c.pass = start_exact && end_exact && reached && trace_monotone;
    c.detail = std::string("Phi(0,P)=P ") + (start_exact ? "exact" : "BROKEN") + ", Phi(1,P)=0 " +
               (end_exact ? "exact" : "BROKEN") + ", decay<1e-6 by t=1-1/m " +
               (reached ? "yes" : "NO") + ", trace non-increasing " + (trace_monotone ? "yes" : "NO");
    c.seconds = timer.seconds();
    return c;
}

inline CriterionResult criterion_chern(const SuiteConfig& cfg, ArtifactMap& artifacts) {
    using namespace suitedetail;
    Timer timer;
    const ParameterMesh mesh12 = cubed_sphere(12);
    const ParameterMesh mesh24 = cubed_sphere(24);

    const ChernReport monopole = chern_report(monopole_family(mesh12, 2), cfg.tol);
    const ChernReport complement_rep = chern_report(monopole_complement_family(mesh12, 2), cfg.tol);
    const ChernReport constant_rep = chern_report(constant_family(mesh12, 2, 1), cfg.tol);
    const ChernReport refined = chern_report(monopole_family(mesh24, 2), cfg.tol);
    const ChernReport gauged =
        chern_report_gauged(monopole_family(mesh12, 2), mix_seed(cfg.seed, 800), cfg.tol);

    bool perturb_ok = true;
    json perturb_rows = json::array();
    for (int s = 0; s < 20; ++s) {
        const ProjectionFamily fam = perturb_family(monopole_family(mesh12, 2), 0.1,
                                                    mix_seed(cfg.seed, 810 + static_cast<std::uint64_t>(s)));
        const long long c1 = chern_number(fam, cfg.tol);
        perturb_rows.push_back(c1);
        if (c1 != -1) perturb_ok = false;
    }
    const double elapsed = timer.seconds();

    json artifact = config_header(cfg, "chern");
    artifact["monopole_r12"] = json{{"c1", monopole.c1},
                                    {"residual", monopole.residual},
                                    {"max_plaquette_phase", monopole.max_plaquette_phase}};
    artifact["complement_r12"] = complement_rep.c1;
    artifact["constant_r12"] = constant_rep.c1;
    artifact["monopole_r24"] = refined.c1;
    artifact["gauged_c1"] = gauged.c1;
    artifact["perturbed_c1"] = perturb_rows;
    artifacts["chern.json"] = artifact.dump(2) + "\n";

    const bool pass = monopole.c1 == -1 && monopole.residual < 0.05 && complement_rep.c1 == 1 &&
                      constant_rep.c1 == 0 && refined.c1 == -1 && gauged.c1 == -1 && perturb_ok &&
                      elapsed < 20.0;
    CriterionResult c;
    c.id = "C7";
    c.title = "Chern classification of families";
    c.pass = pass;
    c.detail = "monopole " + std::to_string(monopole.c1) + " (residual " + fmt(monopole.residual) +
               "), complement " + std::to_string(complement_rep.c1) + ", constant " +
               std::to_string(constant_rep.c1) + ", r=24 " + std::to_string(refined.c1) +
               ", gauge/perturb stable, " + fmt(elapsed) + " s";
    c.seconds = elapsed;
    return c;
}

inline CriterionResult criterion_states(const SuiteConfig& cfg, ArtifactMap& artifacts) {
    using namespace suitedetail;
    Timer timer;
    const Eigen::Index d = cfg.dim;
    const Eigen::Index rank = 4;

    bool verdicts_ok = true;
    double worst_margin = 0.0;
    for (int i = 0; i < 100; ++i) {
        const GrassmannPoint p = certify(
            random_projection(d, rank, mix_seed(cfg.seed, 900 + 3 * static_cast<std::uint64_t>(i))),
            cfg.tol);
        GrassmannPoint q;
        if (i % 2 == 0) {
            cmat h = random_hermitian(d, mix_seed(cfg.seed, 901 + 3 * static_cast<std::uint64_t>(i)));
            cmat u = hermitian_exponential(cmat(h / op_norm(h)), 0.05 + 0.3 * (i % 7) / 7.0);
            q = certify(cmat(u * p.op * u.adjoint()), cfg.tol);
        } else {
            q = certify(random_projection(
                            d, rank, mix_seed(cfg.seed, 902 + 3 * static_cast<std::uint64_t>(i))),
                        cfg.tol);
        }
        const cmat a = random_operator(d, mix_seed(cfg.seed, 950 + static_cast<std::uint64_t>(i)));
        const ContinuityCertificate cert = continuity_certificate(p, q, a);
        if (!cert.verdict) verdicts_ok = false;
        worst_margin = std::max(worst_margin, cert.lhs - cert.bound);
    }

    // Decay scan against a norm-one observable along single-plane rotations.
    const GrassmannPoint p_scan =
        certify(random_projection(d, rank, mix_seed(cfg.seed, 960)), cfg.tol);
    cmat a_scan = random_operator(d, mix_seed(cfg.seed, 961));
    a_scan /= op_norm(a_scan);
    const auto decay = continuity_decay_scan(p_scan, a_scan, 20);
    const bool decay_ok = decay.back().lhs < 1e-6;

    bool four_ok = true;
    double worst_recon = 0.0;
    for (int i = 0; i < 200; ++i) {
        const cmat a = random_operator(d, mix_seed(cfg.seed, 1000 + static_cast<std::uint64_t>(i)));
        const UnitaryDecomposition dec = four_unitaries(a, cfg.tol);
        const double norm = op_norm(a);
        const double recon = (a - dec.reconstruct(d)).norm();
        worst_recon = std::max(worst_recon, recon);
        if (recon >= 1e-9) four_ok = false;
        if (dec.terms.size() > 4) four_ok = false;
        for (const auto& [coeff, u] : dec.terms) {
            if (std::abs(coeff) > norm / 2.0 + 1e-12) four_ok = false;
            if (!is_unitary(u, 1e-10)) four_ok = false;
        }
    }

    json artifact = config_header(cfg, "states");
    artifact["rank"] = rank;
    artifact["worst_certificate_margin"] = worst_margin;
    json decay_rows = json::array();
    for (const DecayRow& row : decay)
        decay_rows.push_back(json{{"k", row.k},
                                  {"op_norm_gap", row.op_norm_gap},
                                  {"trace_norm_gap", row.trace_norm_gap},
                                  {"lhs", row.lhs}});
    artifact["decay"] = decay_rows;
    artifact["worst_reconstruction"] = worst_recon;
    artifacts["states.json"] = artifact.dump(2) + "\n";

    CriterionResult c;
    c.id = "C8";
    c.title = "state continuity and four-unitary decomposition";
    c.pass = verdicts_ok && decay_ok && four_ok;
    c.detail = "100 certificates hold (worst margin " + fmt(worst_margin) + "), lhs at gap 2^-20 = " +
               fmt(decay.back().lhs) + ", 200 reconstructions (worst " + fmt(worst_recon) + ")";
    c.seconds = timer.seconds();
    return c;
}

// Runs criteria 1-8, producing their artifacts.
inline std::vector<CriterionResult> run_battery(const SuiteConfig& cfg, ArtifactMap& artifacts) {
    std::vector<CriterionResult> results;
    auto [c1, c2] = criterion_section_and_bounds(cfg, artifacts);
    results.push_back(c1);
    results.push_back(c2);
    results.push_back(criterion_connect(cfg, artifacts));
    results.push_back(criterion_separation(cfg, artifacts));
    results.push_back(criterion_appendix_d(cfg, artifacts));
    results.push_back(criterion_retraction(cfg, artifacts));
    results.push_back(criterion_chern(cfg, artifacts));
    results.push_back(criterion_states(cfg, artifacts));
    return results;
}

// Full suite: battery plus the in-process determinism criterion (the battery
// rerun must reproduce every artifact byte) and the total runtime budget.
inline std::vector<CriterionResult> run_suite(const SuiteConfig& cfg, ArtifactMap& artifacts) {
    suitedetail::Timer timer;
    std::vector<CriterionResult> results = run_battery(cfg, artifacts);

    ArtifactMap second;
    run_battery(cfg, second);
    bool identical = artifacts.size() == second.size();
    if (identical) {
        for (const auto& [name, text] : artifacts) {
            auto it = second.find(name);
            if (it == second.end() || it->second != text) {
                identical = false;
                break;
            }
        }
    }
    const double elapsed = timer.seconds();

    CriterionResult c9;
    c9.id = "C9";
    c9.title = "determinism and runtime";
    c9.pass = identical && elapsed < 120.0;
    c9.detail = std::string("battery rerun artifacts ") + (identical ? "byte-identical" : "DIFFER") +
                ", total " + suitedetail::fmt(elapsed) + " s";
    c9.seconds = elapsed;
    results.push_back(c9);

    // Timings stay out of every artifact so that two runs with the same
    // config compare byte-identical; detail strings go to stdout only.
    json summary = suitedetail::config_header(cfg, "suite");
    json rows = json::array();
    for (const CriterionResult& r : results)
        rows.push_back(json{{"id", r.id}, {"title", r.title}, {"pass", r.pass}});
    summary["criteria"] = rows;
    artifacts["suite.json"] = summary.dump(2) + "\n";
    return results;
}

}  // namespace grasstool
