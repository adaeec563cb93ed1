#include <catch2/catch_amalgamated.hpp>

#include "mfspec/stat_tests.hpp"
#include "mfspec/synthetic.hpp"
#include "oracles.hpp"

using namespace mfspec;
using Catch::Approx;

namespace {

std::vector<double> alternating(std::size_t n) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = i % 2 == 0 ? 1.0 : -1.0;
    return x;
}

}  // namespace

TEST_CASE("autocorrelation closed forms", "[stat]") {
    const auto wn = gaussian_white_noise(65536, {1, 0});
    CHECK(sample_autocorrelation(wn.values, 0) == 1.0);
    CHECK(std::abs(sample_autocorrelation(wn.values, 1)) < 0.01);
    CHECK(sample_autocorrelation(alternating(1000), 1) == Approx(-0.999).epsilon(1e-14));
    CHECK_THROWS_WITH(sample_autocorrelation(std::vector<double>(10, 0.0), 1), "zero variance");
    CHECK_THROWS_AS(sample_autocorrelation(wn.values, wn.size()), AnalysisError);
}

TEST_CASE("autocorrelation is scale invariant", "[stat]") {
    const auto x = ar1(4000, 0.4, {2, 0}).values;
    auto y = x;
    for (auto& v : y) v *= -37.5;
    for (std::size_t lag : {1u, 2u, 10u, 100u}) {
        CHECK(std::abs(sample_autocorrelation(x, lag) - sample_autocorrelation(y, lag)) < 1e-12);
    }
}

TEST_CASE("portmanteau single-term formula", "[stat]") {
    const double n = 1000.0;
    const double c1 = -(n - 1) / n;
    CHECK(ljung_box_statistic(alternating(1000), 1) == Approx(n * n * c1 * c1 / (n - 1)).epsilon(1e-13));
    CHECK(ljung_box_statistic(alternating(1000), 1, PortmanteauFactor::LjungBox) ==
          Approx(n * (n + 2) * c1 * c1 / (n - 1)).epsilon(1e-13));
    const auto r = autocorr_test(alternating(1000), 1);
    CHECK(r.rejected);
    CHECK(r.q_statistic > 6.63);
    CHECK_THROWS_AS(ljung_box_statistic(alternating(10), 0), AnalysisError);
    CHECK_THROWS_AS(ljung_box_statistic(alternating(10), 10), AnalysisError);
}

TEST_CASE("portmanteau curve is nondecreasing", "[stat]") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto x = ar1(2048, 0.3, {seed, 3}).values;
        const auto q = ljung_box_curve(x, 60);
        for (std::size_t i = 1; i < q.size(); ++i) CHECK(q[i] >= q[i - 1]);
        CHECK(q[19] == ljung_box_statistic(x, 20));
    }
}

TEST_CASE("chi-squared quantiles", "[stat]") {
    CHECK(chi2_inverse_cdf(2, 0.99) == Approx(9.210340).margin(1e-6));
    CHECK(chi2_inverse_cdf(2, 0.99) == Approx(-2.0 * std::log(0.01)).epsilon(1e-12));
    CHECK(chi2_inverse_cdf(1, 0.99) == Approx(6.634897).margin(1e-6));
    CHECK(chi2_inverse_cdf(3, 1e-12) < 1e-6);
    CHECK_THROWS_AS(chi2_inverse_cdf(2, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(chi2_inverse_cdf(2, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(chi2_inverse_cdf(0, 0.5), std::invalid_argument);
}

TEST_CASE("chi-squared quantiles agree with a series-and-bisection oracle", "[stat]") {
    for (int m : {1, 2, 3, 5, 10, 20, 50, 100}) {
        for (double a : {0.01, 0.1, 0.5, 0.9, 0.95, 0.99, 0.999}) {
            const double x = chi2_inverse_cdf(m, a);
            INFO("m = " << m << " alpha = " << a);
            CHECK(x == Approx(oracle::chi2_quantile(m, a)).epsilon(1e-9));
            CHECK(oracle::gamma_p_series(0.5 * m, 0.5 * x) == Approx(a).margin(1e-10));
        }
    }
}

TEST_CASE("chi-squared quantile increases in both arguments", "[stat]") {
    for (int m = 1; m < 40; ++m) {
        for (double a = 0.05; a < 0.99; a += 0.05) {
            CHECK(chi2_inverse_cdf(m, a + 0.01) > chi2_inverse_cdf(m, a));
            CHECK(chi2_inverse_cdf(m + 1, a) > chi2_inverse_cdf(m, a));
        }
    }
}

TEST_CASE("portmanteau test calibration and power", "[stat][monte-carlo]") {
    int false_alarms = 0;
    int detections = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        if (autocorr_test(gaussian_white_noise(1024, {seed, 100}).values, 10).rejected) ++false_alarms;
        if (autocorr_test(ar1(4096, 0.5, {seed, 200}).values, 20).rejected) ++detections;
    }
    CHECK(false_alarms <= 4);
    CHECK(detections == 200);
}

TEST_CASE("pinned calibration seed is accepted", "[stat]") {
    const auto r = autocorr_test(gaussian_white_noise(4096, {20240101, 0}).values, 20, 0.99);
    CHECK_FALSE(r.rejected);
    CHECK(r.threshold == Approx(chi2_inverse_cdf(20, 0.99)));
    CHECK(r.m == 20);
    CHECK(r.alpha == 0.99);
}

TEST_CASE("Kolmogorov survival function", "[stat]") {
    CHECK(kolmogorov_survival(0.0) == 1.0);
    CHECK(kolmogorov_survival(1.3580986) == Approx(0.05).margin(1e-6));
    CHECK(kolmogorov_survival(1.6276236) == Approx(0.01).margin(1e-6));
    // both branches meet at the switch point
    CHECK(kolmogorov_survival(1.18 - 1e-9) == Approx(kolmogorov_survival(1.18)).margin(1e-9));
    double prev = 1.0;
    for (double l = 0.05; l < 4.0; l += 0.05) {
        const double v = kolmogorov_survival(l);
        CHECK(v <= prev);
        prev = v;
    }
}

TEST_CASE("KS Gaussianity calibration", "[stat][monte-carlo]") {
    int rejections = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        if (ks_gaussian_test(gaussian_white_noise(10000, {seed, 300}).values).p_value < 0.01) ++rejections;
    }
    CHECK(rejections <= 3);
    CHECK(ks_gaussian_test(exponential_noise(10000, {1, 0}).values).p_value < 1e-6);
    CHECK_THROWS_AS(ks_gaussian_test(std::vector<double>(7, 1.0)), AnalysisError);
    CHECK_THROWS_WITH(ks_gaussian_test(std::vector<double>(10, 1.0)), "zero variance");
}

TEST_CASE("KS statistic is affine invariant", "[stat]") {
    const auto x = ar1(3000, 0.2, {5, 5}).values;
    auto y = x;
    for (auto& v : y) v = 4.0 * v + 17.0;
    CHECK(std::abs(ks_gaussian_test(x).statistic - ks_gaussian_test(y).statistic) < 1e-12);
}

TEST_CASE("two-sample KS", "[stat]") {
    const auto a = gaussian_white_noise(5000, {1, 1}).values;
    CHECK(ks_two_sample(a, a).statistic == 0.0);
    CHECK(ks_two_sample(a, gaussian_white_noise(5000, {1, 2}).values).p_value > 0.01);
    CHECK(ks_two_sample(a, exponential_noise(5000, {1, 3}).values).p_value < 1e-6);
}

TEST_CASE("quantile pairs", "[stat][qq]") {
    const auto x = gaussian_white_noise(4000, {8, 0}).values;
    const auto self = qq_points(x, x);
    CHECK(self.size() == 512);
    for (const auto& [a, b] : self) CHECK(std::abs(a - b) < 1e-12);

    const auto z1 = gaussian_white_noise(1000000, {8, 1}).values;
    auto z2 = gaussian_white_noise(1000000, {8, 2}).values;
    for (auto& v : z2) v = 5.0 + 2.0 * v;
    for (const auto& [a, b] : qq_points(z1, z2)) CHECK(std::abs(a - b) < 0.05);

    const auto e = exponential_noise(1000000, {8, 3}).values;
    const auto tail = qq_points(z1, e).back();
    CHECK(tail.second - tail.first > 0.5);

    CHECK(qq_points(std::vector<double>{1, 2, 3}, x).size() == 3);
    CHECK_THROWS_AS(qq_points(std::vector<double>{}, x), AnalysisError);
}
