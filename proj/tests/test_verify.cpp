#include <doctest.h>

#include <cmath>

#include "triplespin/fwht.hpp"
#include "triplespin/rng.hpp"
#include "triplespin/verify.hpp"

using namespace triplespin;

TEST_CASE("balancedness: threshold is ln(n)/sqrt(n) and basis vectors are flat") {
    auto report = check_balancedness(1024, 100, 1);
    CHECK(report.threshold ==
          doctest::Approx(std::log(1024.0) / 32.0).epsilon(1e-12));
    CHECK(report.log_base == "natural");

    // HD1 e1 is a signed column of H: every entry has magnitude 1/sqrt(n)
    const std::size_t n = 64;
    Rng rng(2);
    std::vector<double> signs(n);
    rng.fill_signs(signs);
    std::vector<double> x(n, 0.0);
    x[0] = 1.0;
    for (std::size_t i = 0; i < n; ++i) x[i] *= signs[i];
    fwht(x);
    for (double v : x)
        CHECK(std::abs(v) == doctest::Approx(1.0 / 8.0).epsilon(1e-12));
}

TEST_CASE("balancedness violations are rare at n=1024") {
    auto report = check_balancedness(1024, 10000, 3, 2);
    CHECK(report.violation_fraction <= 0.01);
    CHECK(report.max_observed_infnorm > 0.0);
    CHECK(report.max_observed_infnorm < 1.0);
}

TEST_CASE("balancedness input validation") {
    CHECK_THROWS_AS(check_balancedness(100, 1000, 1), dimension_error);
    CHECK_THROWS_AS(check_balancedness(64, 10, 1), std::invalid_argument);
}

TEST_CASE("hadamard smooth set: Frobenius sqrt(n), spectral 1, clean residuals") {
    for (std::size_t n : {2u, 4u, 8u, 16u}) {
        auto r = check_smoothness(SmoothFamily::hadamard, n);
        CHECK(r.max_frobenius ==
              doctest::Approx(std::sqrt(static_cast<double>(n))).epsilon(1e-9));
        CHECK(r.max_spectral == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(r.column_norm_residual <= 1e-9);
        CHECK(r.cross_column_residual <= 1e-9);
        CHECK(r.isometry_residual <= 1e-9);
    }
}

TEST_CASE("hadamard W^i entries follow the sqrt(n) h_i h pattern at n=2") {
    auto ws = build_smooth_set(SmoothFamily::hadamard, 2);
    REQUIRE(ws.size() == 2);
    const Eigen::MatrixXd a12 = ws[1].transpose() * ws[0];
    CHECK(a12.norm() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("circulant smooth set: every nontrivial pair product is an isometry") {
    auto r = check_smoothness(SmoothFamily::circulant, 8);
    CHECK(r.isometry_residual <= 1e-9);
    CHECK(r.max_spectral == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.column_norm_residual <= 1e-9);
    CHECK(r.cross_column_residual <= 1e-9);

    auto ws = build_smooth_set(SmoothFamily::circulant, 8);
    Rng rng(4);
    std::vector<double> xv(8);
    rng.fill_gaussian(xv);
    Eigen::Map<Eigen::VectorXd> x(xv.data(), 8);
    for (std::size_t i : {1u, 3u}) {
        for (std::size_t j : {0u, 5u}) {
            const Eigen::MatrixXd a = ws[j].transpose() * ws[i];
            CHECK((a * x).norm() == doctest::Approx(x.norm()).epsilon(1e-9));
        }
    }
}

TEST_CASE("smoothness brute force refuses large n") {
    CHECK_THROWS_AS(check_smoothness(SmoothFamily::hadamard, 128),
                    std::invalid_argument);
}

TEST_CASE("similarity covariance is near identity for dense and structured") {
    for (Variant v : {Variant::gaussian_dense, Variant::hd3hd2hd1}) {
        auto r = check_similarity(v, 64, 4, 2, 20000, 7, 2);
        CHECK(r.max_diag_deviation <= 0.05);
        CHECK(r.max_offdiag <= 0.05);
        CHECK(r.covariance.rows() == 8);
        CHECK((r.covariance - r.covariance.transpose()).cwiseAbs().maxCoeff() <
              1e-12);
    }
}

TEST_CASE("similarity with d=1, m=1 is a plain variance check") {
    auto r = check_similarity(Variant::hd_gauss_hd2hd1, 64, 1, 1, 20000, 8);
    CHECK(r.max_diag_deviation <= 0.05);
}

TEST_CASE("similarity refuses md above the covariance guard") {
    CHECK_THROWS_AS(check_similarity(Variant::hd3hd2hd1, 64, 33, 2, 100, 1),
                    std::invalid_argument);
}

TEST_CASE("verify reports serialize to JSON with a schema version") {
    auto balance = to_json(check_balancedness(256, 200, 1));
    CHECK(balance.find("\"schema_version\"") != std::string::npos);
    CHECK(balance.find("\"violation_fraction\"") != std::string::npos);

    auto smooth = to_json(check_smoothness(SmoothFamily::hadamard, 4));
    CHECK(smooth.find("\"max_frobenius\"") != std::string::npos);

    auto sim = to_json(check_similarity(Variant::hd3hd2hd1, 16, 2, 2, 500, 2));
    CHECK(sim.find("\"covariance\"") != std::string::npos);
}
