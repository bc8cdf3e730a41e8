#include "triplespin/dense_oracle.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace triplespin {

namespace {

void check_limit(std::size_t n) {
    if (n > kDenseOracleLimit) {
        throw std::invalid_argument("dense oracle refused: n = " + std::to_string(n) +
                                    " exceeds the guard of " +
                                    std::to_string(kDenseOracleLimit));
    }
}

}  // namespace

Eigen::MatrixXd dense_hadamard(std::size_t n) {
    check_limit(n);
    if (!is_power_of_two(n)) {
        throw dimension_error("dense_hadamard: n must be a power of two, got " +
                              std::to_string(n));
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    Eigen::MatrixXd h(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const int parity = std::popcount(i & j) & 1;
            h(i, j) = parity ? -scale : scale;
        }
    }
    return h;
}

Eigen::MatrixXd dense_oracle(const CirculantSpec& spec) {
    spec.validate();
    const std::size_t n = spec.dim();
    check_limit(n);
    const auto& r = spec.first_row;
    Eigen::MatrixXd m(n, n);
    switch (spec.kind) {
        case StructuredKind::circulant:
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    m(i, j) = r[(j + n - i) % n];
            break;
        case StructuredKind::skew_circulant:
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    m(i, j) = (j < i ? -1.0 : 1.0) * r[(j + n - i) % n];
            break;
        case StructuredKind::toeplitz:
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    m(i, j) = (i > j) ? spec.extra_column[i - j - 1] : r[j - i];
            break;
        case StructuredKind::hankel: {
            std::vector<double> h(r);
            h.insert(h.end(), spec.extra_column.begin(), spec.extra_column.end());
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    m(i, j) = h[i + j];
            break;
        }
    }
    return m;
}

Eigen::MatrixXd dense_diagonal(std::span<const double> diag) {
    check_limit(diag.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

}  // namespace triplespin
