#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "triplespin/descriptor.hpp"

namespace triplespin {

// Unconstrained logistic regression instance: minimize
//   f(x) = sum_i log(1 + exp(-y_i a_i' x))
struct LogisticProblem {
    Eigen::MatrixXd A;  // n x d, rows a_i
    Eigen::VectorXd y;  // labels in {-1, +1}

    std::size_t rows() const { return static_cast<std::size_t>(A.rows()); }
    std::size_t dim() const { return static_cast<std::size_t>(A.cols()); }
    void validate() const;
};

// Synthetic generator: rows from N(0, Sigma) with Sigma_ij = rho^|i-j|
// (drawn as an AR(1) process), labels from a random hyperplane with a
// fraction of flips.
struct ProblemConfig {
    std::size_t n = 1000;
    std::size_t d = 20;
    double rho = 0.99;
    std::uint64_t seed = 0;
    double label_flip = 0.10;
};

LogisticProblem make_logistic_problem(const ProblemConfig& config);

double logistic_value(const LogisticProblem& p, const Eigen::VectorXd& x);
std::pair<double, Eigen::VectorXd> logistic_value_grad(const LogisticProblem& p,
                                                       const Eigen::VectorXd& x);

// diag(sqrt(p_i(1-p_i))) A with p_i = sigmoid(a_i'x); its Gram is the Hessian.
Eigen::MatrixXd hessian_sqrt(const LogisticProblem& p, const Eigen::VectorXd& x);
Eigen::MatrixXd hessian(const LogisticProblem& p, const Eigen::VectorXd& x);

struct SketchConfig {
    enum class Mode {
        exact,     // solve with the true Hessian
        identity,  // S = I (diagnostic; reproduces exact Newton)
        sketch,    // random m x n sketch of the given variant
    };
    enum class StepRule { unit, backtracking };

    Mode mode = Mode::sketch;
    Variant variant = Variant::hd3hd2hd1;
    std::size_t m = 0;             // sketch rows; ignored for exact/identity
    bool refresh = true;           // fresh sketch every iteration
    StepRule step = StepRule::backtracking;
    double armijo_alpha = 0.25;
    double armijo_beta = 0.5;
    std::uint64_t seed = 0;

    void validate(const LogisticProblem& p) const;
};

struct IterateRecord {
    Eigen::VectorXd x;
    double f = 0.0;
    double gap = 0.0;
    double hessian_ms = 0.0;  // wall time of the Hessian/sketch/Gram stage
};

struct IterateTrace {
    std::vector<IterateRecord> iterates;
    bool solver_error = false;
    std::string message;
};

// One sketched Newton step from x; the iteration seed draws the fresh sketch.
Eigen::VectorXd newton_sketch_step(const LogisticProblem& p, const Eigen::VectorXd& x,
                                   const SketchConfig& config,
                                   std::uint64_t iteration_seed);

// Iterates until the optimality gap f(x) - f_star drops below tol (or
// max_iter). The trace starts with the initial point, so tol = +inf returns a
// single record.
IterateTrace solve(const LogisticProblem& p, const SketchConfig& config,
                   std::size_t max_iter, double tol, double f_star);

// f* oracle: exact Newton run to the given gradient norm.
double compute_f_star(const LogisticProblem& p, double grad_tol = 1e-12,
                      std::size_t max_iter = 200);

}  // namespace triplespin
