#include "triplespin/linear_operator.hpp"

#include <cstring>

#include "triplespin/dense_oracle.hpp"
#include "triplespin/fwht.hpp"
#include "triplespin/rng.hpp"

namespace triplespin {

namespace {

// Scratch for the factor-chain pipeline; sized to n_pad of the operator in
// use. Thread-local so concurrent applies never share state.
std::vector<double>& scratch_buffer(std::size_t n) {
    thread_local std::vector<double> buf;
    if (buf.size() < n) buf.resize(n);
    return buf;
}

StructuredKind structured_kind_for(Variant v) {
    switch (v) {
        case Variant::circ_d2_hd1: return StructuredKind::circulant;
        case Variant::toeplitz_d2_hd1: return StructuredKind::toeplitz;
        case Variant::hankel_d2_hd1: return StructuredKind::hankel;
        case Variant::skewcirc_d2_hd1: return StructuredKind::skew_circulant;
        default:
            throw std::invalid_argument("variant has no structured third factor");
    }
}

}  // namespace

LinearOperator LinearOperator::build(const StructuredMatrixDescriptor& descriptor) {
    descriptor.validate();
    LinearOperator op;
    op.desc_ = descriptor;
    const std::size_t pad = descriptor.n_pad();
    const std::size_t nblocks = descriptor.blocks();
    op.blocks_.resize(nblocks);

    for (std::size_t b = 0; b < nblocks; ++b) {
        Block& block = op.blocks_[b];
        BlockFactors& f = block.factors;
        const std::size_t row_begin = b * descriptor.m;
        f.rows = std::min(descriptor.k, row_begin + descriptor.m) - row_begin;

        Rng rng(descriptor.seeds[b]);
        switch (descriptor.variant) {
            case Variant::gaussian_dense:
                f.dense_rows.resize(f.rows * pad);
                rng.fill_gaussian(f.dense_rows);
                break;
            case Variant::hd3hd2hd1:
                f.d1.resize(pad); rng.fill_signs(f.d1);
                f.d2.resize(pad); rng.fill_signs(f.d2);
                f.third_diagonal.resize(pad); rng.fill_signs(f.third_diagonal);
                break;
            case Variant::hd_gauss_hd2hd1:
                f.d1.resize(pad); rng.fill_signs(f.d1);
                f.d2.resize(pad); rng.fill_signs(f.d2);
                f.third_diagonal.resize(pad); rng.fill_gaussian(f.third_diagonal);
                break;
            case Variant::circ_d2_hd1:
            case Variant::toeplitz_d2_hd1:
            case Variant::hankel_d2_hd1:
            case Variant::skewcirc_d2_hd1: {
                f.d1.resize(pad); rng.fill_signs(f.d1);
                f.d2.resize(pad); rng.fill_signs(f.d2);
                f.structured.kind = structured_kind_for(descriptor.variant);
                f.structured.first_row.resize(pad);
                rng.fill_gaussian(f.structured.first_row);
                if (f.structured.kind == StructuredKind::toeplitz ||
                    f.structured.kind == StructuredKind::hankel) {
                    f.structured.extra_column.resize(pad - 1);
                    rng.fill_gaussian(f.structured.extra_column);
                }
                block.applier = std::make_shared<StructuredApplier>(f.structured);
                break;
            }
            case Variant::ros_subsample:
                f.d1.resize(pad); rng.fill_signs(f.d1);
                f.ros_rows.resize(f.rows);
                for (auto& r : f.ros_rows)
                    r = static_cast<std::uint32_t>(rng.index(pad));
                break;
        }
    }
    return op;
}

void LinearOperator::apply_block(const Block& block, std::span<const double> x,
                                 std::span<double> out) const {
    const std::size_t pad = desc_.n_pad();
    const BlockFactors& f = block.factors;

    if (desc_.variant == Variant::gaussian_dense) {
        // Row-major matvec over the real (unpadded) coordinates; the padded
        // tail of each row would only multiply zeros.
        const std::size_t n = desc_.n;
        for (std::size_t r = 0; r < f.rows; ++r) {
            const double* row = f.dense_rows.data() + r * pad;
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += row[j] * x[j];
            out[r] = acc;
        }
        return;
    }

    std::vector<double>& buf = scratch_buffer(pad);
    std::span<double> v(buf.data(), pad);
    std::memcpy(v.data(), x.data(), x.size() * sizeof(double));
    std::memset(v.data() + x.size(), 0, (pad - x.size()) * sizeof(double));

    for (std::size_t i = 0; i < pad; ++i) v[i] *= f.d1[i];
    fwht(v);

    switch (desc_.variant) {
        case Variant::hd3hd2hd1:
        case Variant::hd_gauss_hd2hd1:
            for (std::size_t i = 0; i < pad; ++i) v[i] *= f.d2[i];
            fwht(v);
            for (std::size_t i = 0; i < pad; ++i) v[i] *= f.third_diagonal[i];
            fwht(v);
            for (std::size_t r = 0; r < f.rows; ++r) out[r] = v[r];
            break;
        case Variant::circ_d2_hd1:
        case Variant::toeplitz_d2_hd1:
        case Variant::hankel_d2_hd1:
        case Variant::skewcirc_d2_hd1: {
            for (std::size_t i = 0; i < pad; ++i) v[i] *= f.d2[i];
            std::vector<double> full(pad);
            block.applier->apply(v, full);
            for (std::size_t r = 0; r < f.rows; ++r) out[r] = full[r];
            break;
        }
        case Variant::ros_subsample:
            for (std::size_t r = 0; r < f.rows; ++r) out[r] = v[f.ros_rows[r]];
            break;
        default:
            throw std::logic_error("unreachable variant in apply_block");
    }
}

void LinearOperator::apply(std::span<const double> x, std::span<double> out) const {
    if (x.size() != desc_.n) {
        throw dimension_error("LinearOperator::apply: input length " +
                              std::to_string(x.size()) + " != n = " +
                              std::to_string(desc_.n));
    }
    if (out.size() != desc_.k) {
        throw dimension_error("LinearOperator::apply: output length mismatch");
    }
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        const std::size_t row_begin = b * desc_.m;
        apply_block(blocks_[b], x, out.subspan(row_begin, blocks_[b].factors.rows));
    }
    if (desc_.scale != 1.0) {
        for (double& v : out) v *= desc_.scale;
    }
}

std::vector<double> LinearOperator::apply(std::span<const double> x) const {
    std::vector<double> out(desc_.k);
    apply(x, out);
    return out;
}

std::vector<std::vector<double>> LinearOperator::apply_batch(
    const std::vector<std::vector<double>>& inputs, int threads) const {
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (inputs[i].size() != desc_.n) {
            throw dimension_error("apply_batch: input " + std::to_string(i) +
                                  " has length " + std::to_string(inputs[i].size()) +
                                  " != n = " + std::to_string(desc_.n));
        }
    }
    std::vector<std::vector<double>> out(inputs.size());
    parallel_for(inputs.size(), threads, [&](std::size_t i) {
        out[i] = apply(inputs[i]);
    });
    return out;
}

Eigen::MatrixXd dense_matrix(const LinearOperator& op) {
    const auto& d = op.descriptor();
    const std::size_t pad = d.n_pad();
    if (pad > kDenseOracleLimit) {
        throw std::invalid_argument("dense_matrix refused: n_pad exceeds the guard");
    }
    const Eigen::MatrixXd h = (d.variant == Variant::gaussian_dense)
                                  ? Eigen::MatrixXd()
                                  : dense_hadamard(pad);
    Eigen::MatrixXd full(d.k, d.n);
    for (std::size_t b = 0; b < d.blocks(); ++b) {
        const BlockFactors& f = op.block(b);
        Eigen::MatrixXd square;
        switch (d.variant) {
            case Variant::gaussian_dense: {
                square.resize(f.rows, pad);
                for (std::size_t r = 0; r < f.rows; ++r)
                    for (std::size_t j = 0; j < pad; ++j)
                        square(r, j) = f.dense_rows[r * pad + j];
                break;
            }
            case Variant::hd3hd2hd1:
            case Variant::hd_gauss_hd2hd1:
                square = h * dense_diagonal(f.third_diagonal) * h *
                         dense_diagonal(f.d2) * h * dense_diagonal(f.d1);
                break;
            case Variant::circ_d2_hd1:
            case Variant::toeplitz_d2_hd1:
            case Variant::hankel_d2_hd1:
            case Variant::skewcirc_d2_hd1:
                square = dense_oracle(f.structured) * dense_diagonal(f.d2) * h *
                         dense_diagonal(f.d1);
                break;
            case Variant::ros_subsample: {
                Eigen::MatrixXd hd = h * dense_diagonal(f.d1);
                square.resize(f.rows, pad);
                for (std::size_t r = 0; r < f.rows; ++r)
                    square.row(r) = hd.row(f.ros_rows[r]);
                break;
            }
        }
        full.middleRows(b * d.m, f.rows) =
            d.scale * square.topLeftCorner(f.rows, d.n);
    }
    return full;
}

}  // namespace triplespin
