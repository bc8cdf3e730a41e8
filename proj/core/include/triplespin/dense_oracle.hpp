#pragma once

#include <Eigen/Dense>
#include <span>

#include "triplespin/structured.hpp"

namespace triplespin {

// Explicit dense matrices whose matvecs define ground truth for every fast
// path. Guarded at n <= 4096 so a typo cannot allocate a huge matrix.
inline constexpr std::size_t kDenseOracleLimit = 4096;

Eigen::MatrixXd dense_hadamard(std::size_t n);
Eigen::MatrixXd dense_oracle(const CirculantSpec& spec);
Eigen::MatrixXd dense_diagonal(std::span<const double> diag);

}  // namespace triplespin
