#include "triplespin/verify.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "triplespin/dense_oracle.hpp"
#include "triplespin/fwht.hpp"
#include "triplespin/linear_operator.hpp"
#include "triplespin/rng.hpp"

namespace triplespin {

BalancednessReport check_balancedness(std::size_t n, std::size_t trials,
                                      std::uint64_t seed, int threads) {
    if (!is_power_of_two(n)) {
        throw dimension_error("check_balancedness: n must be a power of two");
    }
    if (trials < 100) {
        throw std::invalid_argument("check_balancedness: need at least 100 trials");
    }
    const double threshold = std::log(static_cast<double>(n)) /
                             std::sqrt(static_cast<double>(n));

    std::vector<double> infnorms(trials, 0.0);
    parallel_for(trials, threads, [&](std::size_t t) {
        Rng rng(derive_seed(seed, t));
        std::vector<double> signs(n);
        rng.fill_signs(signs);
        auto x = rng.unit_vector(n);
        for (std::size_t i = 0; i < n; ++i) x[i] *= signs[i];
        fwht(x);
        double inf = 0.0;
        for (double v : x) inf = std::max(inf, std::abs(v));
        infnorms[t] = inf;
    });

    BalancednessReport r;
    r.n = n;
    r.trials = trials;
    r.threshold = threshold;
    r.seed = seed;
    std::size_t violations = 0;
    for (double inf : infnorms) {
        if (inf > threshold) ++violations;
        r.max_observed_infnorm = std::max(r.max_observed_infnorm, inf);
    }
    r.violation_fraction = static_cast<double>(violations) / static_cast<double>(trials);
    return r;
}

std::vector<Eigen::MatrixXd> build_smooth_set(SmoothFamily family, std::size_t n) {
    if (!is_power_of_two(n)) {
        throw dimension_error("build_smooth_set: n must be a power of two");
    }
    std::vector<Eigen::MatrixXd> ws;
    ws.reserve(n);
    if (family == SmoothFamily::hadamard) {
        const Eigen::MatrixXd h = dense_hadamard(n);
        const double root = std::sqrt(static_cast<double>(n));
        for (std::size_t i = 0; i < n; ++i) {
            Eigen::MatrixXd w(n, n);
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b)
                    w(a, b) = root * h(i, a) * h(a, b);
            ws.push_back(std::move(w));
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
            for (std::size_t a = 0; a < n; ++a) w(a, (a + i) % n) = 1.0;
            ws.push_back(std::move(w));
        }
    }
    return ws;
}

double spectral_norm(const Eigen::MatrixXd& m) {
    const Eigen::MatrixXd gram = m.transpose() * m;
    Eigen::VectorXd v(gram.cols());
    Rng rng(0x5eedULL);
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.gaussian();
    v.normalize();
    double lambda = 0.0;
    for (int it = 0; it < 100; ++it) {
        Eigen::VectorXd w = gram * v;
        const double next = w.norm();
        if (next == 0.0) return 0.0;
        v = w / next;
        if (std::abs(next - lambda) <= 1e-10) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    return std::sqrt(lambda);
}

SmoothnessReport check_smoothness(SmoothFamily family, std::size_t n) {
    if (n > 64) {
        throw std::invalid_argument(
            "check_smoothness refused: brute force is O(n^4), limit is n = 64");
    }
    const auto ws = build_smooth_set(family, n);

    SmoothnessReport r;
    r.n = n;
    r.variant = family == SmoothFamily::hadamard ? "hadamard" : "circulant";

    for (const auto& w : ws) {
        const double base = w.col(0).norm();
        for (Eigen::Index j = 1; j < w.cols(); ++j) {
            r.column_norm_residual =
                std::max(r.column_norm_residual, std::abs(w.col(j).norm() - base));
        }
    }
    for (std::size_t i = 0; i < ws.size(); ++i) {
        for (std::size_t j = 0; j < ws.size(); ++j) {
            if (i == j) continue;
            for (Eigen::Index l = 0; l < ws[i].cols(); ++l) {
                r.cross_column_residual = std::max(
                    r.cross_column_residual, std::abs(ws[i].col(l).dot(ws[j].col(l))));
            }
        }
    }
    const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);
    for (std::size_t i = 0; i < ws.size(); ++i) {
        for (std::size_t j = 0; j < ws.size(); ++j) {
            const Eigen::MatrixXd a = ws[j].transpose() * ws[i];
            r.max_frobenius = std::max(r.max_frobenius, a.norm());
            r.max_spectral = std::max(r.max_spectral, spectral_norm(a));
            const double iso = (a.transpose() * a - identity).cwiseAbs().maxCoeff();
            r.isometry_residual = std::max(r.isometry_residual, iso);
        }
    }
    return r;
}

SimilarityReport check_similarity(Variant variant, std::size_t n, std::size_t m,
                                  std::size_t d, std::size_t seeds,
                                  std::uint64_t seed, int threads) {
    if (m * d > 64) {
        throw std::invalid_argument(
            "check_similarity refused: m*d above the 64-dimensional covariance guard");
    }
    if (seeds == 0) throw std::invalid_argument("check_similarity: zero seeds");

    // fixed orthonormal directions, shared by every trial
    Rng dir_rng(derive_seed(seed, 0xd19ULL));
    std::vector<std::vector<double>> dirs;
    for (std::size_t i = 0; i < d; ++i) {
        std::vector<double> v(n);
        dir_rng.fill_gaussian(v);
        for (const auto& prev : dirs) {
            double dot = 0.0;
            for (std::size_t t = 0; t < n; ++t) dot += v[t] * prev[t];
            for (std::size_t t = 0; t < n; ++t) v[t] -= dot * prev[t];
        }
        double norm = 0.0;
        for (double c : v) norm += c * c;
        norm = std::sqrt(norm);
        for (double& c : v) c /= norm;
        dirs.push_back(std::move(v));
    }

    const std::size_t dim = m * d;
    const std::size_t chunk = 512;
    const std::size_t cells = (seeds + chunk - 1) / chunk;
    std::vector<Eigen::MatrixXd> partials(cells);

    parallel_for(cells, threads, [&](std::size_t cell) {
        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(dim, dim);
        Eigen::VectorXd q(dim);
        const std::size_t begin = cell * chunk;
        const std::size_t end = std::min(seeds, begin + chunk);
        for (std::size_t s = begin; s < end; ++s) {
            auto desc = make_descriptor(variant, n, m, m, derive_seed(seed, 1 + s));
            auto op = LinearOperator::build(desc);
            for (std::size_t i = 0; i < d; ++i) {
                auto y = op.apply(dirs[i]);
                for (std::size_t row = 0; row < m; ++row) q(i * m + row) = y[row];
            }
            acc.selfadjointView<Eigen::Lower>().rankUpdate(q);
        }
        partials[cell] = acc;
    });

    Eigen::MatrixXd second = Eigen::MatrixXd::Zero(dim, dim);
    for (const auto& p : partials) second += p;
    second = second.selfadjointView<Eigen::Lower>();
    second /= static_cast<double>(seeds);

    SimilarityReport r;
    r.n = n;
    r.m = m;
    r.d = d;
    r.variant = std::string(to_string(variant));
    r.seeds = seeds;
    r.covariance = second;
    for (std::size_t i = 0; i < dim; ++i) {
        r.max_diag_deviation = std::max(r.max_diag_deviation, std::abs(second(i, i) - 1.0));
        for (std::size_t j = 0; j < dim; ++j) {
            if (i != j) r.max_offdiag = std::max(r.max_offdiag, std::abs(second(i, j)));
        }
    }
    return r;
}

namespace {

nlohmann::json base_json(const char* check) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["check"] = check;
    return j;
}

}  // namespace

std::string to_json(const BalancednessReport& r) {
    auto j = base_json("balance");
    j["n"] = r.n;
    j["trials"] = r.trials;
    j["threshold"] = r.threshold;
    j["violation_fraction"] = r.violation_fraction;
    j["max_observed_infnorm"] = r.max_observed_infnorm;
    j["seed"] = r.seed;
    j["log_base"] = r.log_base;
    return j.dump(2);
}

std::string to_json(const SmoothnessReport& r) {
    auto j = base_json("smooth");
    j["n"] = r.n;
    j["variant"] = r.variant;
    j["max_frobenius"] = r.max_frobenius;
    j["max_spectral"] = r.max_spectral;
    j["column_norm_residual"] = r.column_norm_residual;
    j["cross_column_residual"] = r.cross_column_residual;
    j["isometry_residual"] = r.isometry_residual;
    return j.dump(2);
}

std::string to_json(const SimilarityReport& r) {
    auto j = base_json("similarity");
    j["n"] = r.n;
    j["m"] = r.m;
    j["d"] = r.d;
    j["variant"] = r.variant;
    j["seeds"] = r.seeds;
    j["max_offdiag"] = r.max_offdiag;
    j["max_diag_deviation"] = r.max_diag_deviation;
    std::vector<std::vector<double>> cov(r.covariance.rows());
    for (Eigen::Index i = 0; i < r.covariance.rows(); ++i) {
        cov[i].assign(r.covariance.row(i).begin(), r.covariance.row(i).end());
    }
    j["covariance"] = cov;
    return j.dump(2);
}

}  // namespace triplespin
