#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "triplespin/common.hpp"
#include "triplespin/rng.hpp"

namespace triplespin {

// Rademacher diagonal: i.i.d. signs in {-1,+1}, fully determined by seed.
struct DiagonalSigns {
    std::vector<double> signs;
    std::uint64_t seed = 0;

    static DiagonalSigns from_seed(std::size_t n, std::uint64_t seed) {
        DiagonalSigns d;
        d.seed = seed;
        d.signs.resize(n);
        Rng rng(seed);
        rng.fill_signs(d.signs);
        return d;
    }
};

// Gaussian diagonal: i.i.d. N(0,1) values, fully determined by seed.
struct DiagonalGaussian {
    std::vector<double> values;
    std::uint64_t seed = 0;

    static DiagonalGaussian from_seed(std::size_t n, std::uint64_t seed) {
        DiagonalGaussian d;
        d.seed = seed;
        d.values.resize(n);
        Rng rng(seed);
        rng.fill_gaussian(d.values);
        return d;
    }
};

inline void apply_diagonal_inplace(std::span<const double> diag, std::span<double> x) {
    if (diag.size() != x.size()) {
        throw dimension_error("apply_diagonal: diagonal length " +
                              std::to_string(diag.size()) + " != vector length " +
                              std::to_string(x.size()));
    }
    for (std::size_t i = 0; i < x.size(); ++i) x[i] *= diag[i];
}

inline std::vector<double> apply_diagonal(const DiagonalSigns& d, std::span<const double> x) {
    std::vector<double> out(x.begin(), x.end());
    apply_diagonal_inplace(d.signs, out);
    return out;
}

inline std::vector<double> apply_diagonal(const DiagonalGaussian& d, std::span<const double> x) {
    std::vector<double> out(x.begin(), x.end());
    apply_diagonal_inplace(d.values, out);
    return out;
}

}  // namespace triplespin
