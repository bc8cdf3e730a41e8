#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "triplespin/linear_operator.hpp"
#include "triplespin/rng.hpp"

namespace triplespin {

// One of the 2n signed canonical directions +-e_axis.
struct SignedIndex {
    std::uint32_t axis = 0;
    int sign = +1;
    bool operator==(const SignedIndex&) const = default;
    SignedIndex negated() const { return {axis, -sign}; }
};

// Nearest signed canonical direction to y: the coordinate of largest absolute
// value, with its sign. Ties break to the lowest axis index.
SignedIndex nearest_axis(std::span<const double> y);

struct HashOutcome {
    SignedIndex index;
    bool renormalized = false;  // input deviated from unit norm by > 1e-6
};

// Cross-polytope hash h(x) = eta(Gx / |Gx|) with a pluggable square projection.
class CrossPolytopeHasher {
public:
    explicit CrossPolytopeHasher(const StructuredMatrixDescriptor& descriptor);

    HashOutcome hash(std::span<const double> x) const;

    std::size_t axes() const { return op_.output_dim(); }
    const LinearOperator& projection() const { return op_; }

private:
    LinearOperator op_;
};

struct DistanceBin {
    double low = 0.0;
    double high = 0.0;
    bool operator==(const DistanceBin&) const = default;
};

// Equal-width bins over (0,2) plus the degenerate identity [0,0] and
// antipodal [2,2] bins.
std::vector<DistanceBin> standard_bins(std::size_t interior_bins);

struct CollisionCurve {
    std::vector<DistanceBin> bins;
    std::vector<double> estimates;  // collision probability per bin
    std::vector<double> stderrs;    // standard error over runs
    std::size_t pairs_per_bin = 0;
    std::size_t runs = 0;
};

// Monte-Carlo collision probabilities: one fresh hasher per run, pairs drawn
// at exact controlled distance inside each bin. Cells (run, bin) use derived
// seeds so the result is independent of scheduling.
CollisionCurve collision_curve(Variant variant, std::size_t n,
                               const std::vector<DistanceBin>& bins,
                               std::size_t pairs_per_bin, std::size_t runs,
                               std::uint64_t seed, int threads = 1);

// Sup-norm distance between two curves over identical binning.
double curve_distance(const CollisionCurve& a, const CollisionCurve& b);

// x uniform on the sphere, y at Euclidean distance exactly d from x,
// uniformly over configurations (y = cos(g)x + sin(g)u, g = 2 asin(d/2)).
std::pair<std::vector<double>, std::vector<double>> sample_pair_at_distance(
    std::size_t dim, double distance, Rng& rng);

}  // namespace triplespin
