// Benchmark and verification driver. Subcommands mirror the experiment
// runners in triplespin/experiments.hpp; every run is reproducible from its
// --seed (timing columns excepted).

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "triplespin/experiments.hpp"

namespace {

using namespace triplespin;

std::vector<Variant> parse_variants(const std::vector<std::string>& names) {
    std::vector<Variant> out;
    out.reserve(names.size());
    for (const auto& name : names) out.push_back(variant_from_string(name));
    return out;
}

void write_output(const Table& table, const std::string& path, const std::string& format) {
    const std::string text =
        format == "json" ? table.to_json_string() : table.to_csv();
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
}

void write_text(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text << "\n";
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text << "\n";
}

struct CommonFlags {
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "csv";
    int threads = 1;
    bool force = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--seed", flags.seed, "Master seed (u64)");
    cmd->add_option("--out", flags.out, "Output path ('-' for stdout)");
    cmd->add_option("--format", flags.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--threads", flags.threads, "Worker threads (1 = sequential)")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--force", flags.force, "Override size guards");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"TripleSpin structured random matrix benchmarks"};
    app.require_subcommand(1);

    CommonFlags flags;

    // speedup
    auto* speedup = app.add_subcommand(
        "speedup", "Apply-time speedups of structured variants vs dense matvec");
    SpeedupParams sp;
    std::vector<std::string> speedup_variants;
    add_common(speedup, flags);
    speedup->add_option("--sizes", sp.sizes, "Powers of two to benchmark");
    speedup->add_option("--variants", speedup_variants, "Variant names");
    speedup->add_option("--reps", sp.reps, "Timing repetitions (>= 20)");

    // kernel
    auto* kernel = app.add_subcommand(
        "kernel", "Gram reconstruction error of random feature maps");
    KernelCmdParams kp;
    std::vector<std::string> kernel_variants;
    add_common(kernel, flags);
    kernel->add_option("--points", kp.points, "Synthetic dataset size");
    kernel->add_option("--dim", kp.dim, "Data dimensionality");
    kernel->add_option("--kernel", kp.kernel, "gaussian | angular | arccos0");
    kernel->add_option("--sigma", kp.sigma,
                       "Gaussian bandwidth (<= 0: median pairwise distance)");
    kernel->add_option("--variants", kernel_variants, "Variant names");
    kernel->add_option("--feature-counts", kp.feature_counts, "Feature map sizes");
    kernel->add_option("--runs", kp.runs, "Independent seeds per configuration");

    // lsh
    auto* lsh = app.add_subcommand(
        "lsh", "Cross-polytope collision probability curves");
    LshParams lp;
    std::vector<std::string> lsh_variants;
    add_common(lsh, flags);
    lsh->add_option("--n", lp.n, "Data dimensionality");
    lsh->add_option("--bins", lp.bins, "Interior distance bins over (0,2)");
    lsh->add_option("--pairs", lp.pairs, "Pairs per bin");
    lsh->add_option("--runs", lp.runs, "Hash functions to average over");
    lsh->add_option("--variants", lsh_variants, "Variant names");

    // newton
    auto* newton = app.add_subcommand(
        "newton", "Newton-sketch convergence traces on synthetic logistic regression");
    NewtonParams np;
    std::vector<std::string> newton_variants;
    add_common(newton, flags);
    newton->add_option("--n", np.problem.n, "Observations");
    newton->add_option("--d", np.problem.d, "Parameters");
    newton->add_option("--rho", np.problem.rho, "AR(1) covariance decay");
    newton->add_option("--m", np.m_values, "Sketch rows (default 8d)");
    newton->add_option("--variants", newton_variants, "Sketch variant names");
    newton->add_option("--tol", np.tol, "Optimality gap tolerance");
    newton->add_option("--max-iter", np.max_iter, "Iteration cap");
    newton->add_flag("!--no-exact", np.include_exact, "Skip the exact Newton baseline");

    // verify
    auto* verify = app.add_subcommand(
        "verify", "Structural condition checks (JSON report)");
    VerifyParams vp;
    std::string verify_variant = "hd3hd2hd1";
    add_common(verify, flags);
    verify->add_option("--check", vp.check, "balance | smooth | similarity")
        ->required();
    verify->add_option("--n", vp.n, "Dimension");
    verify->add_option("--trials", vp.trials, "Balance: sampled unit vectors");
    verify->add_option("--family", vp.family, "Smooth: hadamard | circulant");
    verify->add_option("--variant", verify_variant, "Similarity: variant name");
    verify->add_option("--m", vp.m, "Similarity: rows kept per block");
    verify->add_option("--d", vp.d, "Similarity: stacked directions");
    verify->add_option("--seeds-count", vp.seeds_count, "Similarity: operator draws");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 1;
    }

    try {
        if (*speedup) {
            sp.seed = flags.seed;
            sp.force = flags.force;
            if (!speedup_variants.empty()) sp.variants = parse_variants(speedup_variants);
            write_output(cmd_speedup(sp), flags.out, flags.format);
        } else if (*kernel) {
            kp.seed = flags.seed;
            kp.threads = flags.threads;
            if (!kernel_variants.empty()) kp.variants = parse_variants(kernel_variants);
            write_output(cmd_kernel(kp), flags.out, flags.format);
        } else if (*lsh) {
            lp.seed = flags.seed;
            lp.threads = flags.threads;
            if (!lsh_variants.empty()) lp.variants = parse_variants(lsh_variants);
            write_output(cmd_lsh(lp), flags.out, flags.format);
        } else if (*newton) {
            np.seed = flags.seed;
            np.problem.seed = flags.seed;
            if (!newton_variants.empty()) np.variants = parse_variants(newton_variants);
            write_output(cmd_newton(np), flags.out, flags.format);
        } else if (*verify) {
            vp.seed = flags.seed;
            vp.threads = flags.threads;
            vp.variant = variant_from_string(verify_variant);
            write_text(cmd_verify(vp), flags.out);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const parse_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
