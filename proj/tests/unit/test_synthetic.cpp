#include <catch2/catch_amalgamated.hpp>

#include <numeric>

#include "mfspec/stat_tests.hpp"
#include "mfspec/synthetic.hpp"
#include "oracles.hpp"

using namespace mfspec;
using Catch::Approx;

TEST_CASE("white noise moments and determinism", "[synthetic]") {
    const auto x = gaussian_white_noise(100000, {1, 0});
    const auto st = summary_stats(x);
    CHECK(std::abs(st.mean) < 0.02);
    CHECK(std::abs(st.variance - 1.0) < 0.02);
    CHECK(gaussian_white_noise(1000, {1, 0}).values == gaussian_white_noise(1000, {1, 0}).values);
    CHECK(gaussian_white_noise(1000, {1, 0}).values != gaussian_white_noise(1000, {1, 1}).values);
    CHECK(std::abs(sample_autocorrelation(gaussian_white_noise(65536, {1, 2}).values, 1)) < 0.01);
    CHECK(gaussian_white_noise(1, {0, 0}).size() == 1);
}

TEST_CASE("fGn autocovariance closed form", "[synthetic][fgn]") {
    CHECK(fgn_autocovariance(0, 0.8) == 1.0);
    CHECK(fgn_autocovariance(1, 0.5) == Approx(0.0).margin(1e-15));
    CHECK(fgn_autocovariance(1, 0.8) == Approx(0.5 * (std::pow(2.0, 1.6) - 2.0)).epsilon(1e-14));
    CHECK(fgn_autocovariance(10, 0.3) < 0.0);
}

TEST_CASE("fGn with H = 1/2 is white", "[synthetic][fgn]") {
    const auto x = fgn(1 << 16, 0.5, {2, 0});
    CHECK(summary_stats(x).variance == Approx(1.0).margin(0.02));
    const auto c = sample_autocorrelations(x.values, 10);
    for (std::size_t k = 1; k <= 10; ++k) CHECK(std::abs(c[k]) < 0.02);

    const auto w = gaussian_white_noise(1 << 16, {2, 1});
    CHECK(ks_two_sample(x.values, w.values).p_value > 0.01);
}

TEST_CASE("fGn reproduces its autocovariance", "[synthetic][fgn][monte-carlo]") {
    const std::size_t n = 1 << 18;
    std::vector<double> acov(21, 0.0);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto x = fgn(n, 0.8, {seed, 7}).values;
        for (std::size_t k = 0; k <= 20; ++k) {
            double s = 0;
            for (std::size_t i = k; i < n; ++i) s += x[i] * x[i - k];
            acov[k] += s / static_cast<double>(n - k) / 20.0;
        }
    }
    for (std::size_t k = 0; k <= 20; ++k) {
        INFO("lag " << k);
        CHECK(acov[k] == Approx(fgn_autocovariance(k, 0.8)).margin(0.03));
    }
}

TEST_CASE("aggregated variance exponent of fGn", "[synthetic][fgn]") {
    const auto x = fgn(1 << 18, 0.8, {3, 0}).values;
    std::vector<double> logl, logv;
    for (std::size_t L = 2; L <= 1024; L *= 2) {
        std::vector<double> sums;
        for (std::size_t b = 0; b + L <= x.size(); b += L) {
            sums.push_back(std::accumulate(x.begin() + b, x.begin() + b + L, 0.0));
        }
        logl.push_back(std::log(static_cast<double>(L)));
        logv.push_back(std::log(summary_stats(sums).variance));
    }
    CHECK(oracle::ols_slope(logl, logv) == Approx(1.6).margin(0.1));
}

TEST_CASE("fGn argument checks", "[synthetic][fgn]") {
    CHECK_THROWS_AS(fgn(1000, 0.5, {0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(fgn(1024, 1.0, {0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(fgn(1024, 0.0, {0, 0}), std::invalid_argument);
    CHECK(fgn(1024, 0.3, {1, 1}).values == fgn(1024, 0.3, {1, 1}).values);
}

TEST_CASE("cascade hand expansion", "[synthetic][cascade]") {
    const bool raw[3] = {false, false, false};
    const auto c = binomial_cascade({2, 0.75}, std::span<const bool>(raw, 3));
    const std::vector<double> expect{0.5625, 0.1875, 0.1875, 0.0625};
    for (std::size_t i = 0; i < 4; ++i) CHECK(c.values[i] == 4.0 * expect[i]);

    const bool swapped[3] = {true, false, true};
    const auto d = binomial_cascade({2, 0.75}, std::span<const bool>(swapped, 3));
    CHECK(d.values == std::vector<double>{4 * 0.25 * 0.75, 4 * 0.25 * 0.25, 4 * 0.25 * 0.75, 4 * 0.75 * 0.75});
    CHECK_THROWS_AS(binomial_cascade({2, 0.75}, std::span<const bool>(raw, 2)), std::invalid_argument);
}

TEST_CASE("cascade has unit mean", "[synthetic][cascade]") {
    const auto c = binomial_cascade({16, 0.75}, {1, 0});
    CHECK(c.size() == 65536);
    CHECK(std::accumulate(c.values.begin(), c.values.end(), 0.0) == 65536.0);
    const auto d = binomial_cascade({12, 0.7}, {1, 0});
    CHECK(std::accumulate(d.values.begin(), d.values.end(), 0.0) == Approx(4096.0).epsilon(1e-12));
    CHECK(binomial_cascade({10, 0.7}, {2, 0}).values == binomial_cascade({10, 0.7}, {2, 0}).values);
    CHECK(binomial_cascade({10, 0.7}, {2, 0}).values != binomial_cascade({10, 0.7}, {2, 1}).values);
    CHECK_THROWS_AS(binomial_cascade({4, 1.0}, {0, 0}), std::invalid_argument);
}

TEST_CASE("analytic cascade exponent", "[synthetic][cascade]") {
    const auto naive = [](double q, double a) {
        return 1.0 / q - std::log(std::pow(a, q) + std::pow(1 - a, q)) / (q * std::log(2.0));
    };
    for (double q : {-7.5, -2.0, -0.5, 0.5, 1.0, 3.0, 9.0}) {
        CHECK(analytic_cascade_hurst(q, 0.75) == Approx(naive(q, 0.75)).epsilon(1e-12));
    }
    CHECK(analytic_cascade_hurst(0.0, 0.75) == Approx(-(std::log(0.75) + std::log(0.25)) / (2 * std::log(2.0))));
    CHECK(analytic_cascade_hurst(1.0, 0.75) == Approx(1.0).epsilon(1e-14));

    // Equal weights make every q scale like a uniform measure: h = 1.
    for (double q : {-5.0, -1.0, 0.0, 2.0, 8.0}) CHECK(analytic_cascade_hurst(q, 0.5) == Approx(1.0).epsilon(1e-14));

    const double asym_hi = -std::log2(0.75);
    const double asym_lo = -std::log2(0.25);
    CHECK(analytic_cascade_hurst(10.0, 0.75) == Approx(0.1 + asym_hi + std::log1p(std::pow(1.0 / 3.0, 10)) / (-10 * std::log(2.0))).epsilon(1e-12));
    CHECK(analytic_cascade_hurst(1000.0, 0.75) == Approx(asym_hi).margin(0.002));
    CHECK(analytic_cascade_hurst(-10.0, 0.75) == Approx(asym_lo).margin(0.1));

    double prev = analytic_cascade_hurst(-20.0, 0.75);
    for (double q = -19.75; q <= 20.0; q += 0.25) {
        const double v = analytic_cascade_hurst(q, 0.75);
        CHECK(v <= prev);
        prev = v;
    }
    const double h0 = analytic_cascade_hurst(0.0, 0.75);
    CHECK(analytic_cascade_hurst(1e-4, 0.75) == Approx(h0).margin(1e-3));
    CHECK(analytic_cascade_hurst(-1e-4, 0.75) == Approx(h0).margin(1e-3));
    CHECK_THROWS_AS(analytic_cascade_hurst(1.0, 1.0), std::invalid_argument);
}

TEST_CASE("AR(1) and exponential generators", "[synthetic]") {
    const auto x = ar1(100000, 0.6, {4, 0});
    CHECK(summary_stats(x).variance == Approx(1.0 / (1 - 0.36)).epsilon(0.03));
    CHECK(sample_autocorrelation(x.values, 1) == Approx(0.6).margin(0.01));
    CHECK_THROWS_AS(ar1(10, 1.0, {0, 0}), std::invalid_argument);
    const auto e = summary_stats(exponential_noise(100000, {4, 1}));
    CHECK(e.mean == Approx(1.0).margin(0.02));
    CHECK(e.min >= 0.0);
    CHECK(e.skewness == Approx(2.0).margin(0.15));
}
