#include "triplespin/lsh.hpp"

#include <cmath>

#include "triplespin/rng.hpp"

namespace triplespin {

SignedIndex nearest_axis(std::span<const double> y) {
    if (y.empty()) throw std::domain_error("nearest_axis: empty vector");
    std::size_t best = 0;
    double best_abs = std::abs(y[0]);
    for (std::size_t i = 1; i < y.size(); ++i) {
        const double a = std::abs(y[i]);
        if (a > best_abs) {
            best_abs = a;
            best = i;
        }
    }
    if (best_abs == 0.0) {
        throw std::domain_error("nearest_axis: zero vector has no nearest axis");
    }
    return {static_cast<std::uint32_t>(best), y[best] >= 0.0 ? +1 : -1};
}

CrossPolytopeHasher::CrossPolytopeHasher(const StructuredMatrixDescriptor& descriptor)
    : op_(LinearOperator::build(descriptor)) {
    if (descriptor.k != descriptor.n_pad()) {
        throw dimension_error(
            "CrossPolytopeHasher needs a square projection (k == n_pad), got k=" +
            std::to_string(descriptor.k) + " n_pad=" +
            std::to_string(descriptor.n_pad()));
    }
}

HashOutcome CrossPolytopeHasher::hash(std::span<const double> x) const {
    double norm2 = 0.0;
    for (double v : x) norm2 += v * v;
    if (norm2 == 0.0) {
        throw std::domain_error("cross-polytope hash undefined for the zero vector");
    }
    const double norm = std::sqrt(norm2);
    HashOutcome out;
    // The argmax is scale-invariant, so renormalization only matters for
    // reporting: flag it rather than copying the input.
    out.renormalized = std::abs(norm - 1.0) > 1e-6;
    out.index = nearest_axis(op_.apply(x));
    return out;
}

std::vector<DistanceBin> standard_bins(std::size_t interior_bins) {
    std::vector<DistanceBin> bins;
    bins.push_back({0.0, 0.0});
    const double width = 2.0 / static_cast<double>(interior_bins);
    for (std::size_t b = 0; b < interior_bins; ++b) {
        bins.push_back({b * width, (b + 1) * width});
    }
    bins.push_back({2.0, 2.0});
    return bins;
}

std::pair<std::vector<double>, std::vector<double>> sample_pair_at_distance(
    std::size_t dim, double distance, Rng& rng) {
    if (distance < 0.0 || distance > 2.0) {
        throw std::invalid_argument("pair distance must lie in [0, 2]");
    }
    auto x = rng.unit_vector(dim);
    if (distance == 0.0) return {x, x};

    std::vector<double> neg(dim);
    if (distance == 2.0) {
        for (std::size_t i = 0; i < dim; ++i) neg[i] = -x[i];
        return {x, neg};
    }

    // u uniform in the orthogonal complement of x
    std::vector<double> u(dim);
    double dot = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        u[i] = rng.gaussian();
        dot += u[i] * x[i];
    }
    double norm2 = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        u[i] -= dot * x[i];
        norm2 += u[i] * u[i];
    }
    const double inv = 1.0 / std::sqrt(norm2);

    const double gamma = 2.0 * std::asin(distance / 2.0);
    const double c = std::cos(gamma), s = std::sin(gamma);
    std::vector<double> y(dim);
    for (std::size_t i = 0; i < dim; ++i) y[i] = c * x[i] + s * u[i] * inv;
    return {x, y};
}

CollisionCurve collision_curve(Variant variant, std::size_t n,
                               const std::vector<DistanceBin>& bins,
                               std::size_t pairs_per_bin, std::size_t runs,
                               std::uint64_t seed, int threads) {
    if (bins.empty() || pairs_per_bin == 0 || runs == 0) {
        throw std::invalid_argument("collision_curve: empty bins or zero work");
    }
    for (const auto& bin : bins) {
        if (bin.low > bin.high || bin.low < 0.0 || bin.high > 2.0) {
            throw std::invalid_argument(
                "collision_curve: unreachable distance bin [" +
                std::to_string(bin.low) + ", " + std::to_string(bin.high) + "]");
        }
    }

    const std::size_t pad = next_power_of_two(n);
    // run-major grid of per-(run, bin) collision fractions
    std::vector<double> cell(runs * bins.size(), 0.0);
    parallel_for(runs, threads, [&](std::size_t run) {
        CrossPolytopeHasher hasher(
            make_descriptor(variant, n, pad, 0, derive_seed(seed, run)));
        for (std::size_t b = 0; b < bins.size(); ++b) {
            Rng rng(derive_seed(seed, run + 1, b));
            std::size_t collisions = 0;
            for (std::size_t p = 0; p < pairs_per_bin; ++p) {
                const double d = (bins[b].low == bins[b].high)
                                     ? bins[b].low
                                     : bins[b].low + (bins[b].high - bins[b].low) *
                                                         rng.uniform();
                auto [x, y] = sample_pair_at_distance(n, d, rng);
                if (hasher.hash(x).index == hasher.hash(y).index) ++collisions;
            }
            cell[run * bins.size() + b] =
                static_cast<double>(collisions) / static_cast<double>(pairs_per_bin);
        }
    });

    CollisionCurve curve;
    curve.bins = bins;
    curve.pairs_per_bin = pairs_per_bin;
    curve.runs = runs;
    curve.estimates.resize(bins.size());
    curve.stderrs.resize(bins.size());
    for (std::size_t b = 0; b < bins.size(); ++b) {
        double mean = 0.0;
        for (std::size_t run = 0; run < runs; ++run) mean += cell[run * bins.size() + b];
        mean /= static_cast<double>(runs);
        double var = 0.0;
        for (std::size_t run = 0; run < runs; ++run) {
            const double d = cell[run * bins.size() + b] - mean;
            var += d * d;
        }
        var = (runs > 1) ? var / static_cast<double>(runs - 1) : 0.0;
        curve.estimates[b] = mean;
        curve.stderrs[b] = std::sqrt(var / static_cast<double>(runs));
    }
    return curve;
}

double curve_distance(const CollisionCurve& a, const CollisionCurve& b) {
    if (a.bins != b.bins) {
        throw std::invalid_argument("curve_distance: binning mismatch");
    }
    double sup = 0.0;
    for (std::size_t i = 0; i < a.estimates.size(); ++i) {
        sup = std::max(sup, std::abs(a.estimates[i] - b.estimates[i]));
    }
    return sup;
}

}  // namespace triplespin
