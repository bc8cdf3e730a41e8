#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "triplespin/descriptor.hpp"

namespace triplespin {

// Empirical check of (delta(n), p(n))-balancedness of HD1: fraction of
// trials with |HD1 x|_inf above ln(n)/sqrt(n) for fresh D1 and uniform unit x.
struct BalancednessReport {
    std::size_t n = 0;
    std::size_t trials = 0;
    double threshold = 0.0;  // ln(n)/sqrt(n)
    double violation_fraction = 0.0;
    double max_observed_infnorm = 0.0;
    std::uint64_t seed = 0;
    std::string log_base = "natural";
};

BalancednessReport check_balancedness(std::size_t n, std::size_t trials,
                                      std::uint64_t seed, int threads = 1);

enum class SmoothFamily { hadamard, circulant };

// The dense W^i matrices behind the smooth-set conditions:
//   hadamard   W^i(a,b) = sqrt(n) h(i,a) h(a,b)
//   circulant  W^i = cyclic shift by i
std::vector<Eigen::MatrixXd> build_smooth_set(SmoothFamily family, std::size_t n);

// Brute-force norms and residuals over all pairs A^{ij} = (W^j)' W^i.
struct SmoothnessReport {
    std::size_t n = 0;
    std::string variant;
    double max_frobenius = 0.0;
    double max_spectral = 0.0;
    double column_norm_residual = 0.0;    // equal column norms within each W^i
    double cross_column_residual = 0.0;   // (W^i_l)' W^j_l = 0 for i != j
    double isometry_residual = 0.0;       // max |(A^{ij})' A^{ij} - I|
};

SmoothnessReport check_smoothness(SmoothFamily family, std::size_t n);

// Spectral norm by power iteration on M'M (100 iterations, tol 1e-10).
double spectral_norm(const Eigen::MatrixXd& m);

// Covariance of the stacked projections q' = (op x^1, ..., op x^d) truncated
// to m rows each, over fresh operators; identity covariance is the dense
// Gaussian ground truth.
struct SimilarityReport {
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t d = 0;
    std::string variant;
    std::size_t seeds = 0;
    Eigen::MatrixXd covariance;  // md x md
    double max_offdiag = 0.0;
    double max_diag_deviation = 0.0;
};

SimilarityReport check_similarity(Variant variant, std::size_t n, std::size_t m,
                                  std::size_t d, std::size_t seeds,
                                  std::uint64_t seed, int threads = 1);

std::string to_json(const BalancednessReport& r);
std::string to_json(const SmoothnessReport& r);
std::string to_json(const SimilarityReport& r);

}  // namespace triplespin
