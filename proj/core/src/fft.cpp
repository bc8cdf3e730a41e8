#include "triplespin/fft.hpp"

#include <cmath>

namespace triplespin {

FftPlan::FftPlan(std::size_t n) : n_(n) {
    if (!is_power_of_two(n)) {
        throw dimension_error("FftPlan: size must be a power of two, got " +
                              std::to_string(n));
    }
    bitrev_.resize(n);
    std::size_t log2n = 0;
    while ((std::size_t{1} << log2n) < n) ++log2n;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = 0;
        for (std::size_t b = 0; b < log2n; ++b) {
            r = (r << 1) | ((i >> b) & 1);
        }
        bitrev_[i] = r;
    }
    twiddles_.resize(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        const double angle = -2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n);
        twiddles_[k] = {std::cos(angle), std::sin(angle)};
    }
}

void FftPlan::transform(std::span<std::complex<double>> a, bool inverse) const {
    if (a.size() != n_) {
        throw dimension_error("FftPlan: buffer size " + std::to_string(a.size()) +
                              " does not match plan size " + std::to_string(n_));
    }
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t j = bitrev_[i];
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n_; len <<= 1) {
        const std::size_t stride = n_ / len;
        for (std::size_t i = 0; i < n_; i += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                std::complex<double> w = twiddles_[j * stride];
                if (inverse) w = std::conj(w);
                const std::complex<double> u = a[i + j];
                const std::complex<double> v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
            }
        }
    }
    if (inverse) {
        const double scale = 1.0 / static_cast<double>(n_);
        for (auto& x : a) x *= scale;
    }
}

void FftPlan::forward(std::span<std::complex<double>> a) const { transform(a, false); }
void FftPlan::inverse(std::span<std::complex<double>> a) const { transform(a, true); }

}  // namespace triplespin
