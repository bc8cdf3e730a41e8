#include "triplespin/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "triplespin/linear_operator.hpp"
#include "triplespin/rng.hpp"
#include "triplespin/verify.hpp"

namespace triplespin {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void Table::meta(std::string key, std::string value) {
    metadata.emplace_back(std::move(key), std::move(value));
}

std::size_t Table::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) return i;
    }
    throw std::invalid_argument("Table: no column named '" + name + "'");
}

std::string Table::to_csv() const {
    std::ostringstream out;
    for (const auto& [k, v] : metadata) out << "# " << k << ": " << v << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) {
        out << (i ? "," : "") << columns[i];
    }
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << row[i];
        }
        out << "\n";
    }
    return out.str();
}

Table Table::from_csv(const std::string& text) {
    Table t;
    std::istringstream in(text);
    std::string line;
    bool header_seen = false;
    std::size_t lineno = 0;
    std::size_t offset = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t line_start = offset;
        offset += line.size() + 1;
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::size_t colon = line.find(':');
            if (colon == std::string::npos) {
                throw parse_error("metadata line missing ':'", line_start);
            }
            std::string key = line.substr(1, colon - 1);
            std::string value = line.substr(colon + 1);
            auto trim = [](std::string& s) {
                while (!s.empty() && s.front() == ' ') s.erase(s.begin());
                while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.pop_back();
            };
            trim(key);
            trim(value);
            t.metadata.emplace_back(std::move(key), std::move(value));
            continue;
        }
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            if (comma == std::string::npos) {
                cells.push_back(line.substr(start));
                break;
            }
            cells.push_back(line.substr(start, comma - start));
            start = comma + 1;
        }
        if (!header_seen) {
            t.columns = std::move(cells);
            header_seen = true;
        } else {
            if (cells.size() != t.columns.size()) {
                throw parse_error("row width does not match header", line_start);
            }
            t.rows.push_back(std::move(cells));
        }
    }
    if (!header_seen) throw parse_error("CSV has no header line", 0);
    return t;
}

std::string Table::to_json_string() const {
    nlohmann::json j;
    j["metadata"] = nlohmann::json::object();
    for (const auto& [k, v] : metadata) j["metadata"][k] = v;
    j["columns"] = columns;
    j["rows"] = rows;
    return j.dump(2);
}

std::vector<std::vector<double>> synthetic_gaussian_cloud(std::size_t points,
                                                          std::size_t dim,
                                                          std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<double>> data(points, std::vector<double>(dim));
    for (auto& p : data) rng.fill_gaussian(p);
    return data;
}

namespace {

using Clock = std::chrono::steady_clock;

// Median per-apply wall time in ms. Short applies are batched inside one
// timer read so that clock granularity does not dominate small sizes.
double median_apply_ms(const LinearOperator& op, const std::vector<double>& x,
                       std::size_t reps) {
    std::vector<double> out(op.output_dim());
    for (int w = 0; w < 3; ++w) op.apply(x, out);

    auto t0 = Clock::now();
    op.apply(x, out);
    double once_ms =
        std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    const std::size_t inner =
        std::max<std::size_t>(1, static_cast<std::size_t>(0.02 / std::max(once_ms, 1e-7)));

    std::vector<double> samples(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        const auto start = Clock::now();
        for (std::size_t i = 0; i < inner; ++i) op.apply(x, out);
        const double total =
            std::chrono::duration<double, std::milli>(Clock::now() - start).count();
        samples[r] = total / static_cast<double>(inner);
    }
    std::nth_element(samples.begin(), samples.begin() + reps / 2, samples.end());
    return samples[reps / 2];
}

std::vector<Variant> with_dense_baseline(std::vector<Variant> variants) {
    if (variants.empty()) {
        variants = structured_variants();
    }
    if (std::find(variants.begin(), variants.end(), Variant::gaussian_dense) ==
        variants.end()) {
        variants.insert(variants.begin(), Variant::gaussian_dense);
    }
    return variants;
}

}  // namespace

Table cmd_speedup(const SpeedupParams& params) {
    constexpr std::size_t kSizeGuard = 1ull << 15;
    for (std::size_t n : params.sizes) {
        if (n > kSizeGuard && !params.force) {
            throw std::invalid_argument("cmd_speedup: size " + std::to_string(n) +
                                        " above the 2^15 guard (use force)");
        }
        if (!is_power_of_two(n)) {
            throw std::invalid_argument("cmd_speedup: sizes must be powers of two");
        }
    }
    const std::size_t reps = std::max<std::size_t>(params.reps, 20);

    Table t;
    t.meta("experiment", "speedup");
    t.meta("seed", std::to_string(params.seed));
    t.meta("reps", std::to_string(reps));
    t.meta("threads", "1");
    t.meta("baseline", "row-major dense matvec, no vendor BLAS");
    t.columns = {"n", "variant", "median_apply_ms", "dense_median_ms", "speedup"};

    for (std::size_t n : params.sizes) {
        Rng rng(derive_seed(params.seed, n));
        std::vector<double> x(n);
        rng.fill_gaussian(x);

        double dense_ms;
        {
            auto dense = LinearOperator::build(
                make_descriptor(Variant::gaussian_dense, n, n, 0, derive_seed(params.seed, n, 0)));
            dense_ms = median_apply_ms(dense, x, reps);
        }

        for (std::size_t vi = 0; vi < params.variants.size(); ++vi) {
            const Variant v = params.variants[vi];
            auto op = LinearOperator::build(
                make_descriptor(v, n, n, 0, derive_seed(params.seed, n, vi + 1)));
            const double ms = median_apply_ms(op, x, reps);
            t.rows.push_back({std::to_string(n), std::string(to_string(v)),
                              format_double(ms), format_double(dense_ms),
                              format_double(dense_ms / ms)});
        }
    }
    return t;
}

Table cmd_kernel(const KernelCmdParams& params) {
    auto data = synthetic_gaussian_cloud(params.points, params.dim,
                                         derive_seed(params.seed, 0xda7aULL));

    KernelSpec spec;
    double sigma = params.sigma;
    if (params.kernel == "gaussian") {
        if (sigma <= 0.0) sigma = median_pairwise_distance(data);
        spec = KernelSpec::gaussian(sigma);
    } else if (params.kernel == "angular") {
        spec = KernelSpec::angular();
    } else if (params.kernel == "arccos0") {
        spec = KernelSpec::arccos0();
    } else {
        throw std::invalid_argument("cmd_kernel: unknown kernel '" + params.kernel +
                                    "' (gaussian, angular, arccos0)");
    }

    const auto variants = with_dense_baseline(params.variants);

    Table t;
    t.meta("experiment", "kernel");
    t.meta("seed", std::to_string(params.seed));
    t.meta("points", std::to_string(params.points));
    t.meta("dim", std::to_string(params.dim));
    t.meta("kernel", params.kernel);
    t.meta("sigma", format_double(sigma));
    t.meta("runs", std::to_string(params.runs));
    t.columns = {"variant", "k", "mean_error", "std_error"};

    for (std::size_t vi = 0; vi < variants.size(); ++vi) {
        for (std::size_t k : params.feature_counts) {
            std::vector<double> errors(params.runs);
            for (std::size_t run = 0; run < params.runs; ++run) {
                auto desc = make_descriptor(variants[vi], params.dim, k, 0,
                                            derive_seed(params.seed, vi + 1, k * 131 + run));
                auto map = feature_map_build(spec, desc);
                errors[run] = gram_error(spec, map, data, params.threads);
            }
            double mean = 0.0;
            for (double e : errors) mean += e;
            mean /= static_cast<double>(params.runs);
            double var = 0.0;
            for (double e : errors) var += (e - mean) * (e - mean);
            const double sd = params.runs > 1
                                  ? std::sqrt(var / static_cast<double>(params.runs - 1))
                                  : 0.0;
            t.rows.push_back({std::string(to_string(variants[vi])), std::to_string(k),
                              format_double(mean), format_double(sd)});
        }
    }
    return t;
}

Table cmd_lsh(const LshParams& params) {
    const auto variants = with_dense_baseline(params.variants);
    const auto bins = standard_bins(params.bins);

    Table t;
    t.meta("experiment", "lsh");
    t.meta("seed", std::to_string(params.seed));
    t.meta("n", std::to_string(params.n));
    t.meta("pairs_per_bin", std::to_string(params.pairs));
    t.meta("runs", std::to_string(params.runs));
    t.meta("distance", "euclidean on the unit sphere");
    t.columns = {"bin_low", "bin_high", "variant", "estimate", "stderr"};

    for (const Variant v : variants) {
        // same seed across variants: paired pairs/hashers for tight curve deltas
        auto curve = collision_curve(v, params.n, bins, params.pairs, params.runs,
                                     params.seed, params.threads);
        for (std::size_t b = 0; b < bins.size(); ++b) {
            t.rows.push_back({format_double(bins[b].low), format_double(bins[b].high),
                              std::string(to_string(v)),
                              format_double(curve.estimates[b]),
                              format_double(curve.stderrs[b])});
        }
    }
    return t;
}

Table cmd_newton(const NewtonParams& params) {
    auto problem = make_logistic_problem(params.problem);
    const double f_star = compute_f_star(problem);

    std::vector<Variant> variants = params.variants;
    if (variants.empty()) {
        variants = structured_variants();
        variants.push_back(Variant::ros_subsample);
    }
    std::vector<std::size_t> m_values = params.m_values;
    if (m_values.empty()) m_values = {8 * params.problem.d};

    Table t;
    t.meta("experiment", "newton");
    t.meta("seed", std::to_string(params.seed));
    t.meta("n", std::to_string(params.problem.n));
    t.meta("d", std::to_string(params.problem.d));
    t.meta("rho", format_double(params.problem.rho));
    t.meta("label_generation", "random hyperplane with 10% flips");
    t.meta("f_star", format_double(f_star));
    t.meta("tol", format_double(params.tol));
    t.columns = {"iter", "variant", "m", "f", "gap", "hessian_ms"};

    auto emit = [&](const std::string& name, std::size_t m, const IterateTrace& trace) {
        for (std::size_t i = 0; i < trace.iterates.size(); ++i) {
            const auto& rec = trace.iterates[i];
            t.rows.push_back({std::to_string(i), name, std::to_string(m),
                              format_double(rec.f), format_double(rec.gap),
                              format_double(rec.hessian_ms)});
        }
    };

    if (params.include_exact) {
        SketchConfig exact;
        exact.mode = SketchConfig::Mode::exact;
        exact.seed = params.seed;
        emit("exact", params.problem.n,
             solve(problem, exact, params.max_iter, params.tol, f_star));
    }
    for (std::size_t vi = 0; vi < variants.size(); ++vi) {
        for (std::size_t m : m_values) {
            SketchConfig cfg;
            cfg.mode = SketchConfig::Mode::sketch;
            cfg.variant = variants[vi];
            cfg.m = m;
            cfg.seed = derive_seed(params.seed, vi + 1, m);
            emit(std::string(to_string(variants[vi])), m,
                 solve(problem, cfg, params.max_iter, params.tol, f_star));
        }
    }
    return t;
}

std::string cmd_verify(const VerifyParams& params) {
    if (params.check == "balance") {
        return to_json(
            check_balancedness(params.n, params.trials, params.seed, params.threads));
    }
    if (params.check == "smooth") {
        SmoothFamily family;
        if (params.family == "hadamard") {
            family = SmoothFamily::hadamard;
        } else if (params.family == "circulant") {
            family = SmoothFamily::circulant;
        } else {
            throw std::invalid_argument("cmd_verify: unknown family '" + params.family +
                                        "' (hadamard, circulant)");
        }
        return to_json(check_smoothness(family, params.n));
    }
    if (params.check == "similarity") {
        return to_json(check_similarity(params.variant, params.n, params.m, params.d,
                                        params.seeds_count, params.seed,
                                        params.threads));
    }
    throw std::invalid_argument("cmd_verify: unknown check '" + params.check +
                                "' (balance, smooth, similarity)");
}

}  // namespace triplespin
