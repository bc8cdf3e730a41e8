#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "triplespin/common.hpp"
#include "triplespin/fft.hpp"

namespace triplespin {

enum class StructuredKind { circulant, toeplitz, hankel, skew_circulant };

// One of the four structured matrix shapes, given by its first row (and an
// extra first-column / tail parameter vector for Toeplitz and Hankel).
//
//   circulant:       M(i,j) = r[(j-i) mod n]
//   skew_circulant:  M(i,j) = r[(j-i) mod n], negated when j < i
//   toeplitz:        M(0,j) = r[j], M(i,0) = extra[i-1] for i >= 1
//   hankel:          M(i,j) = h[i+j] with h = first_row ++ extra
struct CirculantSpec {
    StructuredKind kind = StructuredKind::circulant;
    std::vector<double> first_row;
    std::vector<double> extra_column;  // length n-1; toeplitz/hankel only

    std::size_t dim() const { return first_row.size(); }
    void validate() const;
};

// FFT-backed multiplier with the kernel spectrum cached at construction.
// Immutable after construction; apply is pure and thread-safe.
class StructuredApplier {
public:
    explicit StructuredApplier(CirculantSpec spec);

    void apply(std::span<const double> x, std::span<double> out) const;
    std::vector<double> apply(std::span<const double> x) const;

    const CirculantSpec& spec() const { return spec_; }
    std::size_t dim() const { return spec_.dim(); }

private:
    CirculantSpec spec_;
    std::shared_ptr<const FftPlan> plan_;
    std::vector<std::complex<double>> kernel_spectrum_;
    std::size_t fft_size_ = 0;
    bool direct_ = false;        // power-of-two circulant: no embedding needed
    bool reverse_input_ = false; // hankel reads its input reversed
};

// One-shot convenience wrapper around StructuredApplier.
std::vector<double> apply_structured(const CirculantSpec& spec, std::span<const double> x);

}  // namespace triplespin
