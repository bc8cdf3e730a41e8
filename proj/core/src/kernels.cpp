#include "triplespin/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "triplespin/rng.hpp"

namespace triplespin {

namespace {

double angle_between(std::span<const double> x, std::span<const double> y) {
    double dot = 0.0, nx = 0.0, ny = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        dot += x[i] * y[i];
        nx += x[i] * x[i];
        ny += y[i] * y[i];
    }
    if (nx == 0.0 || ny == 0.0) {
        throw std::domain_error("angular kernel undefined for the zero vector");
    }
    const double c = std::clamp(dot / std::sqrt(nx * ny), -1.0, 1.0);
    return std::acos(c);
}

void check_same_length(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw dimension_error("kernel arguments have different lengths");
    }
}

}  // namespace

KernelSpec KernelSpec::gaussian(double sigma) {
    KernelSpec s;
    s.kind = Kind::gaussian;
    s.sigma = sigma;
    return s;
}

KernelSpec KernelSpec::angular() {
    KernelSpec s;
    s.kind = Kind::angular;
    return s;
}

KernelSpec KernelSpec::arccos0() {
    KernelSpec s;
    s.kind = Kind::arccos0;
    return s;
}

KernelSpec KernelSpec::spectral_mixture(std::vector<SpectralComponent> components) {
    KernelSpec s;
    s.kind = Kind::spectral_mixture;
    s.components = std::move(components);
    return s;
}

void KernelSpec::validate(std::size_t dim) const {
    if (kind == Kind::gaussian && !(sigma > 0.0)) {
        throw std::invalid_argument("gaussian kernel needs sigma > 0");
    }
    if (kind == Kind::spectral_mixture) {
        if (components.empty()) {
            throw std::invalid_argument("spectral mixture needs at least one component");
        }
        for (const auto& c : components) {
            if (c.mean.size() != dim || c.scale.size() != dim) {
                throw dimension_error(
                    "spectral mixture component vectors must match the data dimension");
            }
        }
    }
}

double kernel_exact(const KernelSpec& spec, std::span<const double> x,
                    std::span<const double> y) {
    check_same_length(x, y);
    spec.validate(x.size());
    switch (spec.kind) {
        case KernelSpec::Kind::gaussian: {
            double d2 = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double d = x[i] - y[i];
                d2 += d * d;
            }
            return std::exp(-d2 / (2.0 * spec.sigma * spec.sigma));
        }
        case KernelSpec::Kind::angular:
            return 1.0 - 2.0 * angle_between(x, y) / M_PI;
        case KernelSpec::Kind::arccos0:
            return 1.0 - angle_between(x, y) / M_PI;
        case KernelSpec::Kind::spectral_mixture: {
            double acc = 0.0;
            for (const auto& c : spec.components) {
                double env = 0.0, phase = 0.0;
                for (std::size_t i = 0; i < x.size(); ++i) {
                    const double tau = x[i] - y[i];
                    const double s = c.scale[i] * tau;
                    env += s * s;
                    phase += c.mean[i] * tau;
                }
                acc += c.weight * std::exp(-0.5 * env) * std::cos(phase);
            }
            return acc;
        }
    }
    throw std::logic_error("unreachable kernel kind");
}

FeatureMap feature_map_build(const KernelSpec& spec,
                             const StructuredMatrixDescriptor& descriptor) {
    descriptor.validate();
    spec.validate(descriptor.n);

    FeatureMap map;
    map.spec_ = spec;
    map.input_dim_ = descriptor.n;
    map.k_rows_ = descriptor.k;

    switch (spec.kind) {
        case KernelSpec::Kind::gaussian:
            map.nonlinearity_ = Nonlinearity::cos_sin;
            map.feature_dim_ = 2 * descriptor.k;
            map.components_.push_back({LinearOperator::build(descriptor), 1.0, 1.0, {}, {}});
            break;
        case KernelSpec::Kind::angular:
            map.nonlinearity_ = Nonlinearity::sign;
            map.feature_dim_ = descriptor.k;
            map.components_.push_back({LinearOperator::build(descriptor), 1.0, 1.0, {}, {}});
            break;
        case KernelSpec::Kind::arccos0:
            map.nonlinearity_ = Nonlinearity::step;
            map.feature_dim_ = descriptor.k;
            map.components_.push_back({LinearOperator::build(descriptor), 1.0, 1.0, {}, {}});
            break;
        case KernelSpec::Kind::spectral_mixture: {
            map.nonlinearity_ = Nonlinearity::shifted_cos_sin;
            map.feature_dim_ = 2 * descriptor.k * spec.components.size();
            for (std::size_t c = 0; c < spec.components.size(); ++c) {
                // independent projection matrix per component
                StructuredMatrixDescriptor dc = descriptor;
                for (auto& s : dc.seeds) s = derive_seed(s, c + 1);
                const auto& comp = spec.components[c];
                map.components_.push_back({LinearOperator::build(dc),
                                           std::sqrt(std::abs(comp.weight)),
                                           comp.weight < 0.0 ? -1.0 : 1.0,
                                           comp.mean, comp.scale});
            }
            break;
        }
    }
    return map;
}

void FeatureMap::project(const Component& c, std::span<const double> x,
                         std::vector<double>& z) const {
    if (x.size() != input_dim_) {
        throw dimension_error("FeatureMap: input length " + std::to_string(x.size()) +
                              " != expected " + std::to_string(input_dim_));
    }
    if (spec_.kind == KernelSpec::Kind::spectral_mixture) {
        // g'(sigma o x) + mu'x realizes a draw from N(mu, diag(sigma^2))
        std::vector<double> scaled(x.size());
        double shift = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            scaled[i] = c.scale[i] * x[i];
            shift += c.mean[i] * x[i];
        }
        z = c.op.apply(scaled);
        for (double& v : z) v += shift;
    } else {
        z = c.op.apply(x);
        if (spec_.kind == KernelSpec::Kind::gaussian) {
            const double inv_sigma = 1.0 / spec_.sigma;
            for (double& v : z) v *= inv_sigma;
        }
    }
}

void FeatureMap::accumulate_features(const Component& c, std::span<const double> x,
                                     std::span<double> out) const {
    std::vector<double> z;
    project(c, x, z);
    const double norm = c.weight_sqrt / std::sqrt(static_cast<double>(k_rows_));
    switch (nonlinearity_) {
        case Nonlinearity::cos_sin:
        case Nonlinearity::shifted_cos_sin:
            for (std::size_t i = 0; i < z.size(); ++i) {
                out[2 * i] = norm * std::cos(z[i]);
                out[2 * i + 1] = norm * std::sin(z[i]);
            }
            break;
        case Nonlinearity::sign:
            for (std::size_t i = 0; i < z.size(); ++i) {
                out[i] = norm * (z[i] < 0.0 ? -1.0 : 1.0);
            }
            break;
        case Nonlinearity::step:
            for (std::size_t i = 0; i < z.size(); ++i) {
                out[i] = norm * (z[i] > 0.0 ? M_SQRT2 : 0.0);
            }
            break;
    }
}

std::vector<double> FeatureMap::embed(std::span<const double> x) const {
    std::vector<double> out(feature_dim_, 0.0);
    const std::size_t per_component = feature_dim_ / components_.size();
    for (std::size_t c = 0; c < components_.size(); ++c) {
        accumulate_features(components_[c], x,
                            std::span<double>(out).subspan(c * per_component, per_component));
    }
    return out;
}

double FeatureMap::estimate(std::span<const double> x, std::span<const double> y) const {
    const std::size_t per_component = feature_dim_ / components_.size();
    std::vector<double> fx(per_component), fy(per_component);
    double acc = 0.0;
    for (const auto& c : components_) {
        accumulate_features(c, x, fx);
        accumulate_features(c, y, fy);
        double dot = 0.0;
        for (std::size_t i = 0; i < per_component; ++i) dot += fx[i] * fy[i];
        acc += c.sign * dot;
    }
    return acc;
}

double gram_error(const KernelSpec& spec, const FeatureMap& map,
                  const std::vector<std::vector<double>>& data, int threads) {
    if (data.empty()) {
        throw std::invalid_argument("gram_error: empty dataset");
    }
    const std::size_t n = data.size();
    const std::size_t ncomp = map.component_count();
    const std::size_t slice = map.feature_dim() / ncomp;

    // Embed every point once; per-component slices keep signed mixtures exact.
    std::vector<std::vector<double>> features(n);
    parallel_for(n, threads, [&](std::size_t i) { features[i] = map.embed(data[i]); });

    std::vector<double> num_rows(n, 0.0), den_rows(n, 0.0);
    parallel_for(n, threads, [&](std::size_t i) {
        double num = 0.0, den = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double exact = kernel_exact(spec, data[i], data[j]);
            const auto& fi = features[i];
            const auto& fj = features[j];
            double approx = 0.0;
            for (std::size_t c = 0; c < ncomp; ++c) {
                double dot = 0.0;
                for (std::size_t t = c * slice; t < (c + 1) * slice; ++t)
                    dot += fi[t] * fj[t];
                approx += map.component_sign(c) * dot;
            }
            const double diff = exact - approx;
            num += diff * diff;
            den += exact * exact;
        }
        num_rows[i] = num;
        den_rows[i] = den;
    });
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += num_rows[i];
        den += den_rows[i];
    }
    return std::sqrt(num / den);
}

double median_pairwise_distance(const std::vector<std::vector<double>>& data) {
    if (data.size() < 2) {
        throw std::invalid_argument("median_pairwise_distance: need at least two points");
    }
    std::vector<double> dists;
    dists.reserve(data.size() * (data.size() - 1) / 2);
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (std::size_t j = i + 1; j < data.size(); ++j) {
            double d2 = 0.0;
            for (std::size_t t = 0; t < data[i].size(); ++t) {
                const double d = data[i][t] - data[j][t];
                d2 += d * d;
            }
            dists.push_back(std::sqrt(d2));
        }
    }
    const std::size_t mid = dists.size() / 2;
    std::nth_element(dists.begin(), dists.begin() + mid, dists.end());
    return dists[mid];
}

}  // namespace triplespin
