#include "triplespin/structured.hpp"

#include <string>

namespace triplespin {

void CirculantSpec::validate() const {
    const std::size_t n = first_row.size();
    if (n == 0) throw dimension_error("CirculantSpec: empty first row");
    const bool needs_extra =
        kind == StructuredKind::toeplitz || kind == StructuredKind::hankel;
    if (needs_extra) {
        if (extra_column.size() != n - 1) {
            throw dimension_error(
                "CirculantSpec: toeplitz/hankel need an extra parameter vector of "
                "length n-1, got " + std::to_string(extra_column.size()));
        }
    } else if (!extra_column.empty()) {
        throw dimension_error(
            "CirculantSpec: circulant/skew-circulant take no extra parameters");
    }
}

StructuredApplier::StructuredApplier(CirculantSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    const std::size_t n = spec_.dim();
    const auto& r = spec_.first_row;

    if (spec_.kind == StructuredKind::circulant && is_power_of_two(n)) {
        // Circulant diagonalized by the DFT directly: y = IFFT(FFT(c) . FFT(x))
        // with c the first column.
        direct_ = true;
        fft_size_ = n;
        plan_ = std::make_shared<FftPlan>(fft_size_);
        kernel_spectrum_.assign(fft_size_, {0.0, 0.0});
        kernel_spectrum_[0] = r[0];
        for (std::size_t i = 1; i < n; ++i) kernel_spectrum_[i] = r[n - i];
        plan_->forward(kernel_spectrum_);
        return;
    }

    // Everything else goes through the circulant embedding of the Toeplitz
    // diagonal profile t_d (d = i-j): lower[i] = t_i, upper[j] = t_{-j}.
    std::vector<double> lower(n, 0.0);
    std::vector<double> upper(n, 0.0);  // upper[0] unused
    switch (spec_.kind) {
        case StructuredKind::circulant:
            lower[0] = r[0];
            for (std::size_t i = 1; i < n; ++i) lower[i] = r[n - i];
            for (std::size_t j = 1; j < n; ++j) upper[j] = r[j];
            break;
        case StructuredKind::skew_circulant:
            // wrap-around entries (j < i) carry the negated sign
            lower[0] = r[0];
            for (std::size_t i = 1; i < n; ++i) lower[i] = -r[n - i];
            for (std::size_t j = 1; j < n; ++j) upper[j] = r[j];
            break;
        case StructuredKind::toeplitz:
            lower[0] = r[0];
            for (std::size_t i = 1; i < n; ++i) lower[i] = spec_.extra_column[i - 1];
            for (std::size_t j = 1; j < n; ++j) upper[j] = r[j];
            break;
        case StructuredKind::hankel: {
            // M(i,j) = h[i+j]; multiply as a Toeplitz product of the reversed
            // input with t_d = h[d + n - 1].
            reverse_input_ = true;
            std::vector<double> h(r);
            h.insert(h.end(), spec_.extra_column.begin(), spec_.extra_column.end());
            for (std::size_t i = 0; i < n; ++i) lower[i] = h[n - 1 + i];
            for (std::size_t j = 1; j < n; ++j) upper[j] = h[n - 1 - j];
            break;
        }
    }

    fft_size_ = next_power_of_two(2 * n);
    plan_ = std::make_shared<FftPlan>(fft_size_);
    kernel_spectrum_.assign(fft_size_, {0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) kernel_spectrum_[i] = lower[i];
    for (std::size_t j = 1; j < n; ++j) kernel_spectrum_[fft_size_ - j] = upper[j];
    plan_->forward(kernel_spectrum_);
}

void StructuredApplier::apply(std::span<const double> x, std::span<double> out) const {
    const std::size_t n = spec_.dim();
    if (x.size() != n) {
        throw dimension_error("StructuredApplier: input length " +
                              std::to_string(x.size()) + " != matrix dimension " +
                              std::to_string(n));
    }
    if (out.size() != n) {
        throw dimension_error("StructuredApplier: output length mismatch");
    }
    std::vector<std::complex<double>> buf(fft_size_, {0.0, 0.0});
    if (reverse_input_) {
        for (std::size_t j = 0; j < n; ++j) buf[j] = x[n - 1 - j];
    } else {
        for (std::size_t j = 0; j < n; ++j) buf[j] = x[j];
    }
    plan_->forward(buf);
    for (std::size_t i = 0; i < fft_size_; ++i) buf[i] *= kernel_spectrum_[i];
    plan_->inverse(buf);
    for (std::size_t i = 0; i < n; ++i) out[i] = buf[i].real();
}

std::vector<double> StructuredApplier::apply(std::span<const double> x) const {
    std::vector<double> out(spec_.dim());
    apply(x, out);
    return out;
}

std::vector<double> apply_structured(const CirculantSpec& spec, std::span<const double> x) {
    return StructuredApplier(spec).apply(x);
}

}  // namespace triplespin
