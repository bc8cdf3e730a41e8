#include "triplespin/descriptor.hpp"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "triplespin/rng.hpp"

namespace triplespin {

namespace {

struct VariantName {
    Variant variant;
    std::string_view name;
};

constexpr VariantName kVariantNames[] = {
    {Variant::gaussian_dense, "gaussian_dense"},
    {Variant::hd3hd2hd1, "hd3hd2hd1"},
    {Variant::hd_gauss_hd2hd1, "hd_gauss_hd2hd1"},
    {Variant::circ_d2_hd1, "circ_d2_hd1"},
    {Variant::toeplitz_d2_hd1, "toeplitz_d2_hd1"},
    {Variant::hankel_d2_hd1, "hankel_d2_hd1"},
    {Variant::skewcirc_d2_hd1, "skewcirc_d2_hd1"},
    {Variant::ros_subsample, "ros_subsample"},
};

std::string allowed_variant_list() {
    std::string out;
    for (const auto& [v, name] : kVariantNames) {
        if (!out.empty()) out += ", ";
        out += name;
    }
    return out;
}

}  // namespace

std::string_view to_string(Variant v) {
    for (const auto& [variant, name] : kVariantNames) {
        if (variant == v) return name;
    }
    throw std::invalid_argument("unknown variant enum value");
}

Variant variant_from_string(std::string_view name) {
    for (const auto& [variant, vname] : kVariantNames) {
        if (vname == name) return variant;
    }
    throw parse_error("unknown variant '" + std::string(name) +
                          "'; allowed: " + allowed_variant_list(),
                      0);
}

const std::vector<Variant>& all_variants() {
    static const std::vector<Variant> all = {
        Variant::gaussian_dense,  Variant::hd3hd2hd1,      Variant::hd_gauss_hd2hd1,
        Variant::circ_d2_hd1,     Variant::toeplitz_d2_hd1, Variant::hankel_d2_hd1,
        Variant::skewcirc_d2_hd1, Variant::ros_subsample,
    };
    return all;
}

const std::vector<Variant>& structured_variants() {
    static const std::vector<Variant> structured = {
        Variant::hd3hd2hd1,      Variant::hd_gauss_hd2hd1, Variant::circ_d2_hd1,
        Variant::toeplitz_d2_hd1, Variant::hankel_d2_hd1,   Variant::skewcirc_d2_hd1,
    };
    return structured;
}

void StructuredMatrixDescriptor::validate() const {
    if (n == 0 || k == 0) {
        throw dimension_error("descriptor: n and k must be positive");
    }
    const std::size_t pad = n_pad();
    if (m == 0 || m > pad) {
        throw dimension_error("descriptor: block rows m must satisfy 1 <= m <= n_pad (" +
                              std::to_string(m) + " vs n_pad " + std::to_string(pad) + ")");
    }
    const std::size_t needed = (k + m - 1) / m;
    if (seeds.size() != needed) {
        throw dimension_error("descriptor: ceil(k/m) = " + std::to_string(needed) +
                              " blocks but " + std::to_string(seeds.size()) +
                              " seeds given");
    }
    if (!std::isfinite(scale)) {
        throw std::invalid_argument("descriptor: scale must be finite");
    }
}

double default_scale(Variant variant, std::size_t n_pad) {
    switch (variant) {
        case Variant::hd3hd2hd1:
        case Variant::hd_gauss_hd2hd1:
        case Variant::ros_subsample:
            return std::sqrt(static_cast<double>(n_pad));
        default:
            return 1.0;
    }
}

StructuredMatrixDescriptor make_descriptor(Variant variant, std::size_t n,
                                           std::size_t k, std::size_t m,
                                           std::uint64_t master_seed) {
    StructuredMatrixDescriptor d;
    d.variant = variant;
    d.n = n;
    d.k = k;
    d.m = (m == 0) ? d.n_pad() : m;
    const std::size_t blocks = (k + d.m - 1) / d.m;
    d.seeds.reserve(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
        d.seeds.push_back(derive_seed(master_seed, b));
    }
    d.scale = default_scale(variant, d.n_pad());
    d.validate();
    return d;
}

std::string serialize(const StructuredMatrixDescriptor& d) {
    d.validate();
    nlohmann::json j;
    j["variant"] = std::string(to_string(d.variant));
    j["n"] = d.n;
    j["k"] = d.k;
    j["m"] = d.m;
    j["seeds"] = d.seeds;
    j["scale"] = d.scale;
    return j.dump();
}

StructuredMatrixDescriptor parse_descriptor(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(std::string("descriptor parse error: ") + e.what(), e.byte);
    }
    if (!j.is_object()) throw parse_error("descriptor must be a JSON object", 0);

    static const char* required[] = {"variant", "n", "k", "m", "seeds", "scale"};
    for (const char* field : required) {
        if (!j.contains(field)) {
            throw parse_error(std::string("descriptor missing field '") + field + "'", 0);
        }
    }
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const char* field : required) known |= (key == field);
        if (!known) {
            throw parse_error("descriptor has unknown field '" + key + "'", 0);
        }
    }

    StructuredMatrixDescriptor d;
    try {
        d.variant = variant_from_string(j.at("variant").get<std::string>());
        d.n = j.at("n").get<std::size_t>();
        d.k = j.at("k").get<std::size_t>();
        d.m = j.at("m").get<std::size_t>();
        d.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
        d.scale = j.at("scale").get<double>();
    } catch (const parse_error&) {
        throw;
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("descriptor field type error: ") + e.what(), 0);
    }
    try {
        d.validate();
    } catch (const std::exception& e) {
        throw parse_error(std::string("descriptor invalid: ") + e.what(), 0);
    }
    return d;
}

}  // namespace triplespin
