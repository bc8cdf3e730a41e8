#pragma once

#include <complex>
#include <vector>

#include "triplespin/common.hpp"

namespace triplespin {

// Radix-2 iterative FFT with precomputed twiddle and bit-reversal tables.
// Plans are immutable after construction; forward/inverse are pure with
// respect to the plan and may be called concurrently.
class FftPlan {
public:
    explicit FftPlan(std::size_t n);

    void forward(std::span<std::complex<double>> a) const;
    void inverse(std::span<std::complex<double>> a) const;

    std::size_t size() const { return n_; }

private:
    void transform(std::span<std::complex<double>> a, bool inverse) const;

    std::size_t n_ = 0;
    std::vector<std::size_t> bitrev_;
    std::vector<std::complex<double>> twiddles_;  // e^{-2*pi*i*k/n}, k < n/2
};

}  // namespace triplespin
