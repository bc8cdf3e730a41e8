#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "triplespin/descriptor.hpp"
#include "triplespin/structured.hpp"

namespace triplespin {

// Per-block materialized factors. Exposed read-only so callers (and tests)
// can reconstruct the dense factor chain for a block.
struct BlockFactors {
    std::vector<double> d1;              // sign diagonal, length n_pad
    std::vector<double> d2;              // sign diagonal, length n_pad
    std::vector<double> third_diagonal;  // signs (hd3hd2hd1) or gaussians (hd_gauss)
    CirculantSpec structured;            // circ/toeplitz/hankel/skew variants
    std::vector<double> dense_rows;      // rows x n_pad, row-major (gaussian_dense)
    std::vector<std::uint32_t> ros_rows; // sampled Hadamard rows (ros_subsample)
    std::size_t rows = 0;                // output rows this block contributes
};

// The applied form of a StructuredMatrixDescriptor: maps length-n inputs to
// length-k outputs through per-block fast factor chains. Construction draws
// every random factor from the descriptor's per-block seeds; after that the
// operator is immutable, apply is pure, and instances may be shared across
// threads.
class LinearOperator {
public:
    static LinearOperator build(const StructuredMatrixDescriptor& descriptor);

    std::vector<double> apply(std::span<const double> x) const;
    void apply(std::span<const double> x, std::span<double> out) const;

    // Element-wise apply; order preserved and independent of thread count.
    std::vector<std::vector<double>> apply_batch(
        const std::vector<std::vector<double>>& inputs, int threads = 1) const;

    const StructuredMatrixDescriptor& descriptor() const { return desc_; }
    std::size_t input_dim() const { return desc_.n; }
    std::size_t output_dim() const { return desc_.k; }
    const BlockFactors& block(std::size_t b) const { return blocks_[b].factors; }

private:
    struct Block {
        BlockFactors factors;
        std::shared_ptr<const StructuredApplier> applier;
    };

    void apply_block(const Block& block, std::span<const double> x,
                     std::span<double> out) const;

    StructuredMatrixDescriptor desc_;
    std::vector<Block> blocks_;
};

// Dense k x n reconstruction from the materialized factors (dense oracle
// chain, not the fast path). Guarded like the other dense oracles.
Eigen::MatrixXd dense_matrix(const LinearOperator& op);

}  // namespace triplespin
