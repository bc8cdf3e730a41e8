#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "triplespin/common.hpp"

namespace triplespin {

// Matrix families the operator builder understands. The hd*/circ*/toeplitz*/
// hankel*/skewcirc* entries are the three-factor structured products;
// gaussian_dense is the unstructured baseline and ros_subsample the
// randomized-orthonormal-system sketch (subsampled HD rows).
enum class Variant {
    gaussian_dense,
    hd3hd2hd1,
    hd_gauss_hd2hd1,
    circ_d2_hd1,
    toeplitz_d2_hd1,
    hankel_d2_hd1,
    skewcirc_d2_hd1,
    ros_subsample,
};

std::string_view to_string(Variant v);
Variant variant_from_string(std::string_view name);
const std::vector<Variant>& all_variants();
// The six structured three-factor families (baseline and ROS excluded).
const std::vector<Variant>& structured_variants();

// Reproducible identity of a random matrix: variant, shape, block layout and
// one seed per block. scale is the prefactor applied after the factor chain.
struct StructuredMatrixDescriptor {
    Variant variant = Variant::gaussian_dense;
    std::size_t n = 0;  // input dimension
    std::size_t k = 0;  // output dimension
    std::size_t m = 0;  // rows per block, 1 <= m <= n_pad
    std::vector<std::uint64_t> seeds;  // one per block, ceil(k/m) entries
    double scale = 1.0;

    std::size_t n_pad() const { return next_power_of_two(n); }
    std::size_t blocks() const { return seeds.size(); }

    void validate() const;
    bool operator==(const StructuredMatrixDescriptor&) const = default;
};

// Builds a descriptor with the family's scaling convention: sqrt(n_pad) for
// the Hadamard-rotation variants (their +-1 outputs need it to reach unit
// variance) and for ROS rows, 1.0 for the Gaussian-parameter families whose
// first rows already carry unit-variance entries. m = 0 selects the default
// of one full block (m = n_pad). Block seeds are derived from master_seed.
StructuredMatrixDescriptor make_descriptor(Variant variant, std::size_t n,
                                           std::size_t k, std::size_t m,
                                           std::uint64_t master_seed);

double default_scale(Variant variant, std::size_t n_pad);

// JSON round trip. Schema:
//   {"variant": str, "n": int, "k": int, "m": int, "seeds": [u64...], "scale": float}
// Unknown fields are rejected; malformed text raises parse_error with the
// byte position.
std::string serialize(const StructuredMatrixDescriptor& d);
StructuredMatrixDescriptor parse_descriptor(const std::string& text);

}  // namespace triplespin
