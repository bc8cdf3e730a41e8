#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "triplespin/descriptor.hpp"
#include "triplespin/kernels.hpp"
#include "triplespin/lsh.hpp"
#include "triplespin/newton.hpp"

namespace triplespin {

// Tabular experiment result: ordered metadata, a header and string-formatted
// rows. CSV round-trips through from_csv; doubles are written with 17
// significant digits so reruns compare bit-identically.
struct Table {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::string to_csv() const;
    std::string to_json_string() const;
    static Table from_csv(const std::string& text);

    void meta(std::string key, std::string value);
    std::size_t column_index(const std::string& name) const;
};

std::string format_double(double v);

// dataset of i.i.d. standard Gaussian points
std::vector<std::vector<double>> synthetic_gaussian_cloud(std::size_t points,
                                                          std::size_t dim,
                                                          std::uint64_t seed);

struct SpeedupParams {
    std::vector<std::size_t> sizes = {512, 1024, 2048, 4096, 8192};
    std::vector<Variant> variants = structured_variants();
    std::size_t reps = 20;
    std::uint64_t seed = 0;
    bool force = false;  // allow sizes beyond the 2^15 guard
};

// Median apply wall time per variant against the dense row-major matvec
// baseline; parameter setup is excluded from the timings. Always runs on a
// single thread.
Table cmd_speedup(const SpeedupParams& params);

struct KernelCmdParams {
    std::size_t points = 256;
    std::size_t dim = 64;
    std::string kernel = "gaussian";  // gaussian | angular | arccos0
    double sigma = 0.0;               // <= 0: median pairwise distance
    std::vector<Variant> variants;    // empty: dense baseline + structured
    std::vector<std::size_t> feature_counts = {64, 128, 256, 512};
    std::size_t runs = 10;
    std::uint64_t seed = 0;
    int threads = 1;
};

Table cmd_kernel(const KernelCmdParams& params);

struct LshParams {
    std::size_t n = 256;
    std::size_t bins = 10;  // interior bins over (0,2)
    std::size_t pairs = 2000;
    std::size_t runs = 20;
    std::vector<Variant> variants;  // empty: dense baseline + structured
    std::uint64_t seed = 0;
    int threads = 1;
};

Table cmd_lsh(const LshParams& params);

struct NewtonParams {
    ProblemConfig problem;
    std::vector<Variant> variants;  // empty: all TripleSpin variants + ROS
    std::vector<std::size_t> m_values;  // empty: 8d
    double tol = 1e-6;
    std::size_t max_iter = 50;
    bool include_exact = true;
    std::uint64_t seed = 0;
};

Table cmd_newton(const NewtonParams& params);

struct VerifyParams {
    std::string check;  // balance | smooth | similarity
    std::size_t n = 1024;
    std::size_t trials = 10000;
    std::string family = "hadamard";  // smooth: hadamard | circulant
    Variant variant = Variant::hd3hd2hd1;
    std::size_t m = 8;
    std::size_t d = 2;
    std::size_t seeds_count = 50000;
    std::uint64_t seed = 0;
    int threads = 1;
};

std::string cmd_verify(const VerifyParams& params);

}  // namespace triplespin
