// Acceptance suite: one numbered criterion per function, each printing a
// single [PASS]/[FAIL] line. Run with no arguments for all criteria or with a
// criterion number (1-9) for one. Exit code is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "triplespin/dense_oracle.hpp"
#include "triplespin/experiments.hpp"
#include "triplespin/fwht.hpp"
#include "triplespin/kernels.hpp"
#include "triplespin/linear_operator.hpp"
#include "triplespin/lsh.hpp"
#include "triplespin/newton.hpp"
#include "triplespin/rng.hpp"
#include "triplespin/verify.hpp"

using namespace triplespin;

namespace {

constexpr int kThreads = 2;

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), v.size());
}

double rel_error(const Eigen::VectorXd& got, const Eigen::VectorXd& want) {
    return (got - want).norm() / std::max(want.norm(), 1e-300);
}

// --- criterion 1: transform oracle suite -----------------------------------

bool criterion1(std::string& detail) {
    const std::vector<std::size_t> sizes = {4, 8, 16, 64, 256};
    const int cases_per_size = 20;  // x5 sizes = 100 cases per kind
    double worst = 0.0;
    Rng rng(101);

    for (std::size_t n : sizes) {
        const auto h = dense_hadamard(n);
        for (int c = 0; c < cases_per_size; ++c) {
            std::vector<double> x(n);
            rng.fill_gaussian(x);
            std::vector<double> hx = x;
            fwht(hx);
            worst = std::max(worst, rel_error(to_eigen(hx), h * to_eigen(x)));
        }
        for (auto kind : {StructuredKind::circulant, StructuredKind::toeplitz,
                          StructuredKind::hankel, StructuredKind::skew_circulant}) {
            for (int c = 0; c < cases_per_size; ++c) {
                CirculantSpec s;
                s.kind = kind;
                s.first_row.resize(n);
                rng.fill_gaussian(s.first_row);
                if (kind == StructuredKind::toeplitz || kind == StructuredKind::hankel) {
                    s.extra_column.resize(n - 1);
                    rng.fill_gaussian(s.extra_column);
                }
                std::vector<double> x(n);
                rng.fill_gaussian(x);
                const auto y = StructuredApplier(s).apply(x);
                worst = std::max(
                    worst, rel_error(to_eigen(y), dense_oracle(s) * to_eigen(x)));
            }
        }
        for (Variant v : all_variants()) {
            for (int c = 0; c < cases_per_size; ++c) {
                auto op = LinearOperator::build(
                    make_descriptor(v, n, n, 0, derive_seed(102, n, c)));
                std::vector<double> x(n);
                rng.fill_gaussian(x);
                const auto y = op.apply(x);
                worst = std::max(
                    worst, rel_error(to_eigen(y), dense_matrix(op) * to_eigen(x)));
            }
        }
    }
    std::ostringstream os;
    os << "max relative error " << worst << " (tolerance 1e-8)";
    detail = os.str();
    return worst <= 1e-8;
}

// --- criterion 2: smoothness constants --------------------------------------

bool criterion2(std::string& detail) {
    std::ostringstream os;
    bool ok = true;
    for (std::size_t n : {2u, 4u, 8u, 16u, 32u}) {
        const auto r = check_smoothness(SmoothFamily::hadamard, n);
        const double frob_err = std::abs(r.max_frobenius - std::sqrt(double(n)));
        const double spec_err = std::abs(r.max_spectral - 1.0);
        ok = ok && frob_err <= 1e-9 && spec_err <= 1e-9 &&
             r.column_norm_residual <= 1e-9 && r.cross_column_residual <= 1e-9;
        if (n == 32) {
            os << "hadamard n=32: |F-sqrt(n)|=" << frob_err << ", |s-1|=" << spec_err;
        }
    }
    for (std::size_t n : {4u, 8u, 16u}) {
        const auto r = check_smoothness(SmoothFamily::circulant, n);
        ok = ok && r.isometry_residual <= 1e-9 && r.max_spectral <= 1.0 + 1e-9;
    }
    os << "; circulant isometry residuals <= 1e-9";
    detail = os.str();
    return ok;
}

// --- criterion 3: balancedness ----------------------------------------------

bool criterion3(std::string& detail) {
    const auto r = check_balancedness(1024, 10000, 103, kThreads);
    std::ostringstream os;
    os << "violation fraction " << r.violation_fraction << " (threshold "
       << r.threshold << ", max observed " << r.max_observed_infnorm << ")";
    detail = os.str();
    return r.violation_fraction <= 0.01;
}

// --- criterion 4: covariance epsilon-similarity -----------------------------

bool criterion4(std::string& detail) {
    std::ostringstream os;
    bool ok = true;
    std::vector<Variant> variants = {Variant::gaussian_dense};
    for (Variant v : structured_variants()) variants.push_back(v);
    for (Variant v : variants) {
        const auto r = check_similarity(v, 256, 8, 2, 50000, 104, kThreads);
        const bool pass = r.max_diag_deviation <= 0.05 && r.max_offdiag <= 0.05;
        ok = ok && pass;
        os << to_string(v) << " diag " << r.max_diag_deviation << " offdiag "
           << r.max_offdiag << (pass ? "; " : " FAIL; ");
    }
    detail = os.str();
    return ok;
}

// --- criterion 5: LSH collision closeness -----------------------------------

bool criterion5(std::string& detail) {
    const auto bins = standard_bins(10);
    const auto dense =
        collision_curve(Variant::gaussian_dense, 256, bins, 2000, 20, 105, kThreads);
    bool ok = dense.estimates.front() == 1.0 && dense.estimates.back() == 0.0;
    std::ostringstream os;
    double worst = 0.0;
    for (Variant v : structured_variants()) {
        const auto curve = collision_curve(v, 256, bins, 2000, 20, 105, kThreads);
        ok = ok && curve.estimates.front() == 1.0 && curve.estimates.back() == 0.0;
        const double dist = curve_distance(dense, curve);
        worst = std::max(worst, dist);
        ok = ok && dist <= 0.05;
    }
    os << "max sup-distance to dense " << worst
       << " (tolerance 0.05); endpoint bins exact";
    detail = os.str();
    return ok;
}

// --- criterion 6: Gram reconstruction error ---------------------------------

bool criterion6(std::string& detail) {
    const auto data = synthetic_gaussian_cloud(256, 64, 106);
    const auto spec = KernelSpec::gaussian(median_pairwise_distance(data));
    const std::vector<std::size_t> ks = {64, 128, 256, 512};
    const int seeds = 10;

    std::map<Variant, std::vector<double>> means;
    std::vector<Variant> variants = {Variant::gaussian_dense};
    for (Variant v : structured_variants()) variants.push_back(v);

    for (Variant v : variants) {
        for (std::size_t k : ks) {
            double mean = 0.0;
            for (int s = 0; s < seeds; ++s) {
                auto map = feature_map_build(
                    spec, make_descriptor(v, 64, k, 0, derive_seed(107, (int)v, k + s)));
                mean += gram_error(spec, map, data, kThreads);
            }
            means[v].push_back(mean / seeds);
        }
    }

    bool ok = true;
    std::ostringstream os;
    const auto& dense = means[Variant::gaussian_dense];
    for (Variant v : variants) {
        const auto& m = means[v];
        for (std::size_t i = 0; i + 1 < m.size(); ++i) {
            ok = ok && m[i + 1] < m[i];  // strictly decreasing in k
        }
        if (v != Variant::gaussian_dense) {
            for (std::size_t i = 0; i < ks.size(); ++i) {
                ok = ok && m[i] <= 1.3 * dense[i];
            }
        }
    }
    os << "dense means";
    for (double m : dense) os << " " << m;
    os << "; every structured mean within 1.3x of dense and decreasing in k: "
       << (ok ? "yes" : "no");
    detail = os.str();
    return ok;
}

// --- criterion 7: speedup ----------------------------------------------------

bool criterion7(std::string& detail) {
    SpeedupParams p;
    p.sizes = {512, 1024, 2048, 4096, 8192};
    p.variants = {Variant::hd3hd2hd1};
    p.reps = 30;
    p.seed = 108;
    const auto t = cmd_speedup(p);
    const auto n_col = t.column_index("n");
    const auto sp_col = t.column_index("speedup");

    std::vector<double> speedups;
    std::ostringstream os;
    os << "hd3hd2hd1 speedups:";
    for (const auto& row : t.rows) {
        speedups.push_back(std::stod(row[sp_col]));
        os << " n=" << row[n_col] << " x" << speedups.back();
    }
    bool ok = speedups.back() >= 10.0;
    for (std::size_t i = 0; i + 1 < speedups.size(); ++i) {
        ok = ok && speedups[i + 1] >= speedups[i];
    }
    detail = os.str();
    return ok;
}

// --- criterion 8: Newton sketch ----------------------------------------------

bool criterion8(std::string& detail) {
    ProblemConfig cfg;
    cfg.n = 1000;
    cfg.d = 20;
    cfg.rho = 0.99;
    cfg.seed = 109;
    const auto problem = make_logistic_problem(cfg);

    // exact Newton reaches gradient norm 1e-12
    const double f_star = compute_f_star(problem, 1e-12);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(cfg.d);
    {
        SketchConfig exact;
        exact.mode = SketchConfig::Mode::exact;
        auto trace = solve(problem, exact, 100, 1e-13, f_star);
        x = trace.iterates.back().x;
    }
    const double grad_norm = logistic_value_grad(problem, x).second.norm();
    bool ok = grad_norm <= 1e-10;  // converged optimum (f_star at 1e-12 internally)

    // finite-difference gradient/Hessian checks on a small instance
    {
        auto small = make_logistic_problem({60, 6, 0.9, 110, 0.10});
        Rng rng(111);
        Eigen::VectorXd xs(6);
        for (int i = 0; i < 6; ++i) xs(i) = 0.3 * rng.gaussian();
        auto [f, g] = logistic_value_grad(small, xs);
        const double h = 1e-5;
        for (int i = 0; i < 6; ++i) {
            Eigen::VectorXd xp = xs, xm = xs;
            xp(i) += h;
            xm(i) -= h;
            const double fd = (logistic_value(small, xp) - logistic_value(small, xm)) / (2 * h);
            ok = ok && std::abs(g(i) - fd) / std::max(1.0, std::abs(fd)) <= 1e-6;
        }
        const Eigen::MatrixXd hess = hessian(small, xs);
        for (int i = 0; i < 6; ++i) {
            Eigen::VectorXd xp = xs, xm = xs;
            xp(i) += h;
            xm(i) -= h;
            const Eigen::VectorXd fd =
                (logistic_value_grad(small, xp).second -
                 logistic_value_grad(small, xm).second) / (2 * h);
            for (int j = 0; j < 6; ++j) {
                ok = ok && std::abs(hess(i, j) - fd(j)) / std::max(1.0, std::abs(fd(j))) <= 1e-4;
            }
        }
    }

    // every TripleSpin sketch (and ROS) reaches gap 1e-6 at m = 8d
    std::vector<std::size_t> iter_counts;
    std::ostringstream os;
    os << "grad norm at optimum " << grad_norm << "; iterations:";
    std::vector<Variant> variants = structured_variants();
    variants.push_back(Variant::ros_subsample);
    for (Variant v : variants) {
        SketchConfig sk;
        sk.mode = SketchConfig::Mode::sketch;
        sk.variant = v;
        sk.m = 8 * cfg.d;
        sk.seed = derive_seed(112, (int)v);
        auto trace = solve(problem, sk, 100, 1e-6, f_star);
        const bool converged = !trace.solver_error && trace.iterates.back().gap <= 1e-6;
        ok = ok && converged;
        iter_counts.push_back(trace.iterates.size() - 1);
        os << " " << to_string(v) << "=" << iter_counts.back()
           << (converged ? "" : "(FAIL)");
    }
    std::size_t lo = iter_counts[0], hi = iter_counts[0];
    for (std::size_t c : iter_counts) {
        lo = std::min(lo, c);
        hi = std::max(hi, c);
    }
    ok = ok && hi <= 2 * lo;
    os << " (max/min " << hi << "/" << lo << ")";
    detail = os.str();
    return ok;
}

// --- criterion 9: determinism -------------------------------------------------

std::vector<std::string> metric_columns_csv(const Table& t) {
    std::vector<std::size_t> keep;
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        const auto& name = t.columns[c];
        if (name.ends_with("_ms") || name == "speedup") continue;
        keep.push_back(c);
    }
    std::vector<std::string> out;
    for (const auto& row : t.rows) {
        std::string line;
        for (std::size_t c : keep) {
            line += row[c];
            line += ',';
        }
        out.push_back(std::move(line));
    }
    return out;
}

bool criterion9(std::string& detail) {
    bool ok = true;
    std::ostringstream os;

    KernelCmdParams kp;
    kp.points = 48;
    kp.dim = 16;
    kp.feature_counts = {16, 32};
    kp.runs = 3;
    kp.seed = 113;
    kp.threads = kThreads;
    ok = ok && cmd_kernel(kp).to_csv() == cmd_kernel(kp).to_csv();
    os << "kernel " << (ok ? "ok" : "MISMATCH");

    LshParams lp;
    lp.n = 32;
    lp.bins = 5;
    lp.pairs = 100;
    lp.runs = 4;
    lp.seed = 114;
    lp.threads = kThreads;
    const bool lsh_ok = cmd_lsh(lp).to_csv() == cmd_lsh(lp).to_csv();
    ok = ok && lsh_ok;
    os << ", lsh " << (lsh_ok ? "ok" : "MISMATCH");

    NewtonParams np;
    np.problem = {128, 6, 0.99, 115, 0.10};
    np.m_values = {48};
    np.variants = {Variant::hd3hd2hd1, Variant::ros_subsample};
    np.seed = 115;
    const bool newton_ok =
        metric_columns_csv(cmd_newton(np)) == metric_columns_csv(cmd_newton(np));
    ok = ok && newton_ok;
    os << ", newton " << (newton_ok ? "ok" : "MISMATCH");

    VerifyParams vp;
    vp.check = "similarity";
    vp.variant = Variant::circ_d2_hd1;
    vp.n = 64;
    vp.m = 4;
    vp.d = 2;
    vp.seeds_count = 2000;
    vp.seed = 116;
    vp.threads = kThreads;
    const bool verify_ok = cmd_verify(vp) == cmd_verify(vp);
    ok = ok && verify_ok;
    os << ", verify " << (verify_ok ? "ok" : "MISMATCH");

    // thread-count independence of a parallel reduction
    vp.threads = 1;
    const auto single = cmd_verify(vp);
    vp.threads = 4;
    const bool threads_ok = single == cmd_verify(vp);
    ok = ok && threads_ok;
    os << ", thread-invariance " << (threads_ok ? "ok" : "MISMATCH");

    detail = os.str();
    return ok;
}

struct Criterion {
    int number;
    const char* title;
    std::function<bool(std::string&)> run;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all = {
        {1, "transform fast paths match dense oracles (1e-8)", criterion1},
        {2, "smoothness constants: Frobenius sqrt(n), spectral 1, isometries", criterion2},
        {3, "HD1 balancedness violations <= 1% at n=1024", criterion3},
        {4, "stacked-projection covariance within 0.05 of identity", criterion4},
        {5, "collision curves within 0.05 sup-distance of dense", criterion5},
        {6, "Gram error within 1.3x of dense and decreasing in k", criterion6},
        {7, "hd3hd2hd1 speedup >= 10x at 2^13 and non-decreasing", criterion7},
        {8, "Newton sketches reach 1e-6 gap with comparable iterations", criterion8},
        {9, "seeded reruns reproduce metric columns bit-identically", criterion9},
    };
    return all;
}

}  // namespace

int main(int argc, char** argv) {
    int selected = 0;
    if (argc > 1) {
        selected = std::atoi(argv[1]);
        if (selected < 1 || selected > 9) {
            std::fprintf(stderr, "usage: %s [criterion 1-9]\n", argv[0]);
            return 64;
        }
    }

    int failures = 0;
    for (const auto& c : criteria()) {
        if (selected && c.number != selected) continue;
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool pass = false;
        try {
            pass = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        std::printf("[%s] criterion %d: %s (%.1fs)\n", pass ? "PASS" : "FAIL",
                    c.number, c.title, secs);
        std::printf("       %s\n", detail.c_str());
        if (!pass) ++failures;
    }
    return failures;
}
