#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "mfspec/legendre.hpp"
#include "mfspec/synthetic.hpp"

using namespace mfspec;
using Catch::Approx;

namespace {

HurstCurve curve_from(const std::vector<double>& q, double (*fn)(double)) {
    HurstCurve c;
    c.q = q;
    for (double v : q) c.h.push_back(fn(v));
    c.std_error.assign(q.size(), 0.0);
    return c;
}

HurstCurve constant_curve(double H) {
    HurstCurve c;
    c.q = default_q_grid();
    c.h.assign(c.q.size(), H);
    return c;
}

}  // namespace

TEST_CASE("scaling function", "[legendre]") {
    const auto half = constant_curve(0.5);
    const auto tau = scaling_function(half);
    CHECK(tau[24] == 0.0);
    CHECK(tau[20] == -1.0);

    const auto cascade = curve_from(default_q_grid(), [](double q) { return analytic_cascade_hurst(q, 0.75); });
    const auto t = scaling_function(cascade);
    const std::size_t q1 = 22;
    REQUIRE(cascade.q[q1] == 1.0);
    CHECK(t[q1] == Approx(analytic_cascade_hurst(1.0, 0.75) - 1.0).margin(1e-15));
    CHECK(t[q1] == Approx(0.0).margin(1e-12));
    CHECK(t[20] == -1.0);
}

TEST_CASE("monofractal curve collapses to a point", "[legendre]") {
    for (double H : {0.2, 0.5, 0.77, 1.3}) {
        const auto s = legendre_points(constant_curve(H));
        CHECK(s.width == 0.0);
        CHECK(s.pi_peak == Approx(H).margin(1e-15));
        CHECK_FALSE(s.truncated);
        for (const auto& p : s.points) {
            CHECK(p.pi == Approx(H).margin(1e-15));
            CHECK(p.f == 1.0);
        }
    }
}

TEST_CASE("linear h gives a parabolic spectrum", "[legendre]") {
    // h = c - b q  =>  pi = c - 2 b q, f = 1 - b q^2
    const double c = 0.6, b = 0.005;
    HurstCurve h;
    h.q = default_q_grid();
    for (double q : h.q) h.h.push_back(c - b * q);
    const auto s = legendre_points(h);
    REQUIRE(s.points.size() == h.q.size());
    for (const auto& p : s.points) {
        CHECK(p.pi == Approx(c - 2 * b * p.q).margin(1e-12));
        CHECK(p.f == Approx(1 - b * p.q * p.q).margin(1e-12));
    }
    CHECK(s.width == Approx(40 * b).margin(1e-12));
    CHECK(s.pi_peak == Approx(c).margin(1e-12));
}

TEST_CASE("stored curve echoes a reference row", "[legendre]") {
    // Spectrum centred at 1.266 with width 0.370 over q in [-10, 10].
    const double c = 1.266, b = 0.370 / 40.0;
    HurstCurve h;
    h.q = default_q_grid();
    for (double q : h.q) h.h.push_back(c - b * q);
    const auto m = spectrum_metrics(legendre_points(h));
    CHECK(m.width == Approx(0.370).margin(1e-12));
    CHECK(m.pi_peak == Approx(1.266).margin(1e-12));
    CHECK(m.pi_min == Approx(1.266 - 0.185).margin(1e-12));
    CHECK(m.pi_max == Approx(1.266 + 0.185).margin(1e-12));
}

TEST_CASE("cascade spectrum width", "[legendre]") {
    const auto h = curve_from(default_q_grid(), [](double q) { return analytic_cascade_hurst(q, 0.75); });
    const auto s = legendre_points(h);
    CHECK(s.width == Approx(std::log2(3.0)).margin(0.1));
    for (std::size_t i = 1; i < s.points.size(); ++i) CHECK(s.points[i].pi <= s.points[i - 1].pi + 1e-6);
    for (const auto& p : s.points) CHECK(p.f <= 1.05);
    CHECK(s.pi_peak >= s.points.back().pi);
    CHECK(s.pi_peak <= s.points.front().pi);
}

TEST_CASE("parabola peak refinement", "[legendre]") {
    SpectrumSummary s;
    for (int i = 0; i <= 8; ++i) {
        const double pi = 0.4 + 0.05 * i;
        s.points.push_back({0.0, pi, 1.0 - (pi - 0.6) * (pi - 0.6)});
    }
    auto m = spectrum_metrics(s);
    CHECK(m.pi_peak == Approx(0.6).margin(1e-9));
    CHECK(m.width == Approx(0.4).margin(1e-12));

    // Off-grid vertex is recovered exactly from three samples.
    SpectrumSummary t;
    for (double pi : {0.30, 0.35, 0.40, 0.45}) t.points.push_back({0.0, pi, 1.0 - 4.0 * (pi - 0.37) * (pi - 0.37)});
    CHECK(spectrum_metrics(t).pi_peak == Approx(0.37).margin(1e-9));

    SpectrumSummary single;
    single.points.push_back({0.0, 0.42, 1.0});
    m = spectrum_metrics(single);
    CHECK(m.width == 0.0);
    CHECK(m.pi_peak == 0.42);
    CHECK_THROWS_WITH(spectrum_metrics(SpectrumSummary{}), "empty spectrum");
}

TEST_CASE("shift covariance", "[legendre]") {
    const auto h = curve_from(default_q_grid(), [](double q) { return analytic_cascade_hurst(q, 0.7); });
    auto shifted = h;
    for (auto& v : shifted.h) v -= 1.0;
    const auto a = legendre_points(h, false);
    const auto b = legendre_points(shifted, false);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        CHECK(b.points[i].pi == Approx(a.points[i].pi - 1.0).margin(1e-12));
        CHECK(b.points[i].f == Approx(a.points[i].f).margin(1e-12));
    }
    CHECK(b.width == Approx(a.width).margin(1e-12));
    CHECK(b.pi_peak == Approx(a.pi_peak - 1.0).margin(1e-12));
}

TEST_CASE("negative-f wings are dropped", "[legendre]") {
    HurstCurve h;
    h.q = default_q_grid();
    for (double q : h.q) h.h.push_back(0.5 - 0.05 * q);  // f = 1 - 0.05 q^2 < 0 for |q| > 4.47
    const auto kept = legendre_points(h);
    const auto all = legendre_points(h, false);
    CHECK(kept.truncated);
    CHECK_FALSE(all.truncated);
    CHECK(all.points.size() == 41);
    CHECK(kept.points.size() == 17);
    for (const auto& p : kept.points) CHECK(p.f >= 0.0);
    CHECK(kept.width < all.width);
}

TEST_CASE("Legendre input validation and CSV", "[legendre]") {
    HurstCurve h;
    h.q = {0, 1, 2, 3};
    h.h = {0.5, 0.5, 0.5, 0.5};
    CHECK_THROWS_AS(legendre_points(h), AnalysisError);
    h.q.push_back(4);
    h.h.push_back(0.5);
    std::ostringstream os;
    write_spectrum_csv(os, legendre_points(h));
    CHECK(os.str().rfind("pi,f,q\n0.5,1,0\n", 0) == 0);
}

TEST_CASE("white-noise correlation spectrum is narrow", "[legendre][monte-carlo]") {
    const auto x = gaussian_white_noise(1 << 16, {21, 0});
    MfdfaConfig cfg;
    cfg.poly_order = 2;
    cfg.n_shuffles = 20;
    cfg = resolve_config(cfg, x.size());
    const auto cor = correlation_hurst(fit_hurst(plain_surface(x, cfg)),
                                       fit_hurst(ensemble_surface(x, cfg, SurfaceFlavor::Shuffled, {21, 1})));
    const auto s = legendre_points(cor);
    CHECK(s.width < 0.15);
    CHECK(s.pi_peak == Approx(0.0).margin(0.07));
    for (const auto& p : s.points) CHECK(p.f <= 1.05);
}
