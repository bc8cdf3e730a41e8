#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace triplespin {

// All randomness in the library flows from explicit 64-bit seeds. Sub-streams
// (per block, per run, per cell) are derived with splitmix64 so that parallel
// work never shares generator state.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t s = base;
    std::uint64_t a = splitmix64(s);
    s = a ^ (stream + 0x9e3779b97f4a7c15ULL);
    return splitmix64(s);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t s1, std::uint64_t s2) {
    return derive_seed(derive_seed(base, s1), s2);
}

// Seeded generator with explicit double/gaussian conversion. The engine output
// sequence is pinned by the standard; the conversions below avoid
// std::*_distribution, whose streams differ between standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform in (0, 1]
    double uniform_pos() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform_pos();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    double rademacher() { return (next_u64() & 1) ? 1.0 : -1.0; }

    // uniform index in [0, n)
    std::size_t index(std::size_t n) {
        if ((n & (n - 1)) == 0) return next_u64() & (n - 1);
        return static_cast<std::size_t>(uniform() * static_cast<double>(n));
    }

    void fill_gaussian(std::span<double> out) {
        for (double& v : out) v = gaussian();
    }

    void fill_signs(std::span<double> out) {
        for (double& v : out) v = rademacher();
    }

    // uniform on the unit sphere in R^dim
    std::vector<double> unit_vector(std::size_t dim) {
        std::vector<double> v(dim);
        double norm2 = 0.0;
        do {
            norm2 = 0.0;
            for (double& c : v) {
                c = gaussian();
                norm2 += c * c;
            }
        } while (norm2 == 0.0);
        const double inv = 1.0 / std::sqrt(norm2);
        for (double& c : v) c *= inv;
        return v;
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace triplespin
