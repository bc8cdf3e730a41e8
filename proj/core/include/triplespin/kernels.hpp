#pragma once

#include <span>
#include <vector>

#include "triplespin/linear_operator.hpp"

namespace triplespin {

// One Gaussian-envelope cosine term of a spectral mixture: weight alpha_k,
// frequency mean mu_k and per-dimension scale sigma_k.
struct SpectralComponent {
    double weight = 1.0;
    std::vector<double> mean;
    std::vector<double> scale;
};

struct KernelSpec {
    enum class Kind { gaussian, angular, arccos0, spectral_mixture };

    Kind kind = Kind::gaussian;
    double sigma = 1.0;                         // gaussian bandwidth
    std::vector<SpectralComponent> components;  // spectral_mixture only

    static KernelSpec gaussian(double sigma);
    static KernelSpec angular();
    static KernelSpec arccos0();
    static KernelSpec spectral_mixture(std::vector<SpectralComponent> components);

    void validate(std::size_t dim) const;
};

// Exact kernel values:
//   gaussian          exp(-|x-y|^2 / (2 sigma^2))
//   angular           1 - 2 theta / pi
//   arccos0           1 - theta / pi            (order-0 arc-cosine)
//   spectral_mixture  sum_k alpha_k exp(-|sigma_k o (x-y)|^2 / 2) cos(mu_k'(x-y))
double kernel_exact(const KernelSpec& spec, std::span<const double> x,
                    std::span<const double> y);

enum class Nonlinearity { cos_sin, sign, step, shifted_cos_sin };

// A linear operator plus a pointwise nonlinearity whose normalized feature
// dot products estimate the kernel without bias. cos_sin doubles the k
// projection rows into 2k features; spectral mixtures hold one operator per
// component with the component sign carried into the inner product.
class FeatureMap {
public:
    std::size_t feature_dim() const { return feature_dim_; }
    std::size_t input_dim() const { return input_dim_; }
    std::size_t projection_rows() const { return k_rows_; }
    Nonlinearity nonlinearity() const { return nonlinearity_; }

    // Full embedding; for non-negative component weights the kernel estimate
    // is the plain dot product of two embeddings.
    std::vector<double> embed(std::span<const double> x) const;

    // Kernel estimate with component signs applied (equals embed(x).embed(y)
    // when all weights are non-negative).
    double estimate(std::span<const double> x, std::span<const double> y) const;

    std::size_t component_count() const { return components_.size(); }
    // sign of component c's weight, applied to its slice of the embedding
    double component_sign(std::size_t c) const { return components_[c].sign; }

    friend FeatureMap feature_map_build(const KernelSpec& spec,
                                        const StructuredMatrixDescriptor& descriptor);

private:
    struct Component {
        LinearOperator op;
        double weight_sqrt = 1.0;  // sqrt(|alpha_k|)
        double sign = 1.0;
        std::vector<double> mean;   // mu_k (empty for non-mixture kernels)
        std::vector<double> scale;  // sigma_k
    };

    void project(const Component& c, std::span<const double> x,
                 std::vector<double>& out) const;
    void accumulate_features(const Component& c, std::span<const double> x,
                             std::span<double> out) const;

    KernelSpec spec_;
    Nonlinearity nonlinearity_ = Nonlinearity::cos_sin;
    std::size_t input_dim_ = 0;
    std::size_t k_rows_ = 0;
    std::size_t feature_dim_ = 0;
    std::vector<Component> components_;
};

FeatureMap feature_map_build(const KernelSpec& spec,
                             const StructuredMatrixDescriptor& descriptor);

// Frobenius-relative Gram reconstruction error |K - K~|_F / |K|_F between the
// exact kernel Gram and the feature-map Gram over the data points.
double gram_error(const KernelSpec& spec, const FeatureMap& map,
                  const std::vector<std::vector<double>>& data, int threads = 1);

double median_pairwise_distance(const std::vector<std::vector<double>>& data);

}  // namespace triplespin
