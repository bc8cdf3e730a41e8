#pragma once

#include <span>

#include "triplespin/common.hpp"

namespace triplespin {

// In-place fast Walsh-Hadamard transform, L2-normalized: x <- Hx with
// H orthonormal (entries +-1/sqrt(n)). H*H = I, so the transform is its own
// inverse. Length must be a power of two.
void fwht(std::span<double> data);

// Butterfly pass without the 1/sqrt(n) normalization (x <- sqrt(n)*Hx).
void fwht_unnormalized(std::span<double> data);

}  // namespace triplespin
