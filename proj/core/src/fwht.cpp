#include "triplespin/fwht.hpp"

#include <cmath>

namespace triplespin {

void fwht_unnormalized(std::span<double> data) {
    const std::size_t n = data.size();
    if (!is_power_of_two(n)) {
        throw dimension_error("fwht: length must be a power of two, got " +
                              std::to_string(n));
    }
    for (std::size_t h = 1; h < n; h <<= 1) {
        for (std::size_t i = 0; i < n; i += h << 1) {
            for (std::size_t j = i; j < i + h; ++j) {
                const double a = data[j];
                const double b = data[j + h];
                data[j] = a + b;
                data[j + h] = a - b;
            }
        }
    }
}

void fwht(std::span<double> data) {
    fwht_unnormalized(data);
    const double scale = 1.0 / std::sqrt(static_cast<double>(data.size()));
    for (double& v : data) v *= scale;
}

}  // namespace triplespin
