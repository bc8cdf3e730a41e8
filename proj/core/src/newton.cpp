#include "triplespin/newton.hpp"

#include <chrono>
#include <cmath>

#include "triplespin/linear_operator.hpp"
#include "triplespin/rng.hpp"

namespace triplespin {

namespace {

double sigmoid(double t) {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

// log(1 + exp(s)) without overflow
double log1p_exp(double s) {
    if (s > 0.0) return s + std::log1p(std::exp(-s));
    return std::log1p(std::exp(s));
}

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

void LogisticProblem::validate() const {
    if (A.rows() != y.size()) {
        throw dimension_error("LogisticProblem: label count does not match rows");
    }
    if (A.rows() < A.cols()) {
        throw dimension_error("LogisticProblem: needs n >= d");
    }
    if (!A.allFinite()) {
        throw std::invalid_argument("LogisticProblem: data matrix has non-finite entries");
    }
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (y(i) != 1.0 && y(i) != -1.0) {
            throw std::invalid_argument("LogisticProblem: labels must be +-1");
        }
    }
}

LogisticProblem make_logistic_problem(const ProblemConfig& config) {
    Rng rng(config.seed);
    LogisticProblem p;
    p.A.resize(config.n, config.d);
    const double carry = config.rho;
    const double fresh = std::sqrt(1.0 - config.rho * config.rho);
    for (std::size_t i = 0; i < config.n; ++i) {
        double prev = rng.gaussian();
        p.A(i, 0) = prev;
        for (std::size_t j = 1; j < config.d; ++j) {
            prev = carry * prev + fresh * rng.gaussian();
            p.A(i, j) = prev;
        }
    }
    auto w = rng.unit_vector(config.d);
    Eigen::Map<const Eigen::VectorXd> wv(w.data(), w.size());
    p.y.resize(config.n);
    for (std::size_t i = 0; i < config.n; ++i) {
        double label = (p.A.row(i).dot(wv) >= 0.0) ? 1.0 : -1.0;
        if (rng.uniform() < config.label_flip) label = -label;
        p.y(i) = label;
    }
    p.validate();
    return p;
}

double logistic_value(const LogisticProblem& p, const Eigen::VectorXd& x) {
    if (!x.allFinite() || x.size() != p.A.cols()) {
        throw std::invalid_argument("logistic_value: bad iterate");
    }
    const Eigen::VectorXd t = p.y.cwiseProduct(p.A * x);
    double f = 0.0;
    for (Eigen::Index i = 0; i < t.size(); ++i) f += log1p_exp(-t(i));
    return f;
}

std::pair<double, Eigen::VectorXd> logistic_value_grad(const LogisticProblem& p,
                                                       const Eigen::VectorXd& x) {
    if (!x.allFinite() || x.size() != p.A.cols()) {
        throw std::invalid_argument("logistic_value_grad: bad iterate");
    }
    const Eigen::VectorXd margins = p.A * x;
    double f = 0.0;
    Eigen::VectorXd coeff(p.y.size());
    for (Eigen::Index i = 0; i < p.y.size(); ++i) {
        const double t = p.y(i) * margins(i);
        f += log1p_exp(-t);
        coeff(i) = (sigmoid(t) - 1.0) * p.y(i);
    }
    return {f, p.A.transpose() * coeff};
}

Eigen::MatrixXd hessian_sqrt(const LogisticProblem& p, const Eigen::VectorXd& x) {
    if (!x.allFinite() || x.size() != p.A.cols()) {
        throw std::invalid_argument("hessian_sqrt: bad iterate");
    }
    const Eigen::VectorXd margins = p.A * x;
    Eigen::VectorXd w(margins.size());
    for (Eigen::Index i = 0; i < margins.size(); ++i) {
        const double pi = sigmoid(margins(i));
        w(i) = std::sqrt(pi * (1.0 - pi));
    }
    return w.asDiagonal() * p.A;
}

Eigen::MatrixXd hessian(const LogisticProblem& p, const Eigen::VectorXd& x) {
    const Eigen::VectorXd margins = p.A * x;
    Eigen::VectorXd w(margins.size());
    for (Eigen::Index i = 0; i < margins.size(); ++i) {
        const double pi = sigmoid(margins(i));
        w(i) = pi * (1.0 - pi);
    }
    return p.A.transpose() * w.asDiagonal() * p.A;
}

void SketchConfig::validate(const LogisticProblem& p) const {
    if (mode == Mode::sketch && m < p.dim()) {
        throw std::invalid_argument(
            "SketchConfig: m >= d required for well-posed sketched normal equations");
    }
}

namespace {

struct StepResult {
    Eigen::VectorXd x_next;
    double f_next = 0.0;
    double hessian_ms = 0.0;
    bool decreased = false;
    bool solver_failed = false;
    std::string message;
};

Eigen::MatrixXd sketched_gram(const LogisticProblem& p, const Eigen::VectorXd& x,
                              const SketchConfig& config, std::uint64_t iteration_seed) {
    const Eigen::MatrixXd b = hessian_sqrt(p, x);
    if (config.mode == SketchConfig::Mode::identity) {
        return b.transpose() * b;
    }
    const std::size_t n = p.rows();
    const std::size_t d = p.dim();
    auto desc = make_descriptor(config.variant, n, config.m, config.m, iteration_seed);
    auto op = LinearOperator::build(desc);
    // rows of S carry 1/sqrt(m) so that E[S'S] = I
    const double row_scale = 1.0 / std::sqrt(static_cast<double>(config.m));
    Eigen::MatrixXd sb(config.m, d);
    std::vector<double> col(n);
    std::vector<double> out(config.m);
    for (std::size_t j = 0; j < d; ++j) {
        Eigen::VectorXd::Map(col.data(), n) = b.col(j);
        op.apply(col, out);
        for (std::size_t i = 0; i < config.m; ++i) sb(i, j) = row_scale * out[i];
    }
    return sb.transpose() * sb;
}

StepResult do_step(const LogisticProblem& p, const Eigen::VectorXd& x,
                   const SketchConfig& config, std::uint64_t iteration_seed) {
    StepResult res;
    auto [f0, grad] = logistic_value_grad(p, x);

    const auto t0 = Clock::now();
    Eigen::MatrixXd gram = (config.mode == SketchConfig::Mode::exact)
                               ? hessian(p, x)
                               : sketched_gram(p, x, config, iteration_seed);
    res.hessian_ms = ms_since(t0);

    Eigen::VectorXd delta;
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() == Eigen::Success) {
        delta = llt.solve(-grad);
    } else {
        const double reg = 1e-10 * gram.trace() / static_cast<double>(p.dim());
        gram.diagonal().array() += reg;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
        if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
            res.solver_failed = true;
            res.message = "sketched Gram singular after regularization";
            res.x_next = x;
            res.f_next = f0;
            return res;
        }
        delta = ldlt.solve(-grad);
    }

    if (config.step == SketchConfig::StepRule::unit) {
        res.x_next = x + delta;
        res.f_next = logistic_value(p, res.x_next);
        res.decreased = res.f_next <= f0;
        return res;
    }

    const double slope = grad.dot(delta);
    double step = 1.0;
    for (int half = 0; half < 60; ++half) {
        Eigen::VectorXd cand = x + step * delta;
        const double f = logistic_value(p, cand);
        if (f <= f0 + config.armijo_alpha * step * slope) {
            res.x_next = std::move(cand);
            res.f_next = f;
            res.decreased = f <= f0;
            return res;
        }
        step *= config.armijo_beta;
    }
    res.x_next = x;
    res.f_next = f0;
    res.decreased = false;
    return res;
}

}  // namespace

Eigen::VectorXd newton_sketch_step(const LogisticProblem& p, const Eigen::VectorXd& x,
                                   const SketchConfig& config,
                                   std::uint64_t iteration_seed) {
    p.validate();
    config.validate(p);
    auto res = do_step(p, x, config, iteration_seed);
    if (res.solver_failed) {
        throw std::runtime_error("newton_sketch_step: " + res.message);
    }
    return res.x_next;
}

IterateTrace solve(const LogisticProblem& p, const SketchConfig& config,
                   std::size_t max_iter, double tol, double f_star) {
    p.validate();
    config.validate(p);

    IterateTrace trace;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(p.dim());
    double f = logistic_value(p, x);
    trace.iterates.push_back({x, f, f - f_star, 0.0});
    if (f - f_star <= tol) return trace;

    int consecutive_increases = 0;
    for (std::size_t t = 0; t < max_iter; ++t) {
        auto res = do_step(p, x, config, derive_seed(config.seed, t));
        if (res.solver_failed) {
            trace.solver_error = true;
            trace.message = res.message;
            return trace;
        }
        x = res.x_next;
        trace.iterates.push_back({x, res.f_next, res.f_next - f_star, res.hessian_ms});
        if (res.f_next > f) {
            if (++consecutive_increases >= 5) {
                trace.solver_error = true;
                trace.message = "diverged: objective increased for 5 consecutive steps";
                return trace;
            }
        } else {
            consecutive_increases = 0;
        }
        f = res.f_next;
        if (f - f_star <= tol) break;
    }
    return trace;
}

double compute_f_star(const LogisticProblem& p, double grad_tol, std::size_t max_iter) {
    SketchConfig exact;
    exact.mode = SketchConfig::Mode::exact;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(p.dim());
    for (std::size_t t = 0; t < max_iter; ++t) {
        auto [f, grad] = logistic_value_grad(p, x);
        if (grad.norm() <= grad_tol) break;
        auto res = do_step(p, x, exact, 0);
        if (res.solver_failed || !res.decreased) break;
        x = res.x_next;
    }
    return logistic_value(p, x);
}

}  // namespace triplespin
