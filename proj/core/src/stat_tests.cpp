#include "mfspec/stat_tests.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

namespace mfspec {

namespace {

double energy(std::span<const double> x) {
    double e = 0.0;
    for (double v : x) {
        e += v * v;
    }
    return e;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// Linear interpolation between order statistics (Hyndman-Fan type 7).
double quantile_sorted(const std::vector<double>& sorted, double p) {
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::vector<double> standardized_sorted(std::span<const double> x) {
    std::vector<double> v(x.begin(), x.end());
    if (v.size() >= 2) {
        const auto st = summary_stats(x);
        const double sd = std::sqrt(st.variance);
        for (auto& e : v) {
            e = sd > 0.0 ? (e - st.mean) / sd : 0.0;
        }
    }
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

std::vector<double> sample_autocorrelations(std::span<const double> x, std::size_t max_lag) {
    if (max_lag >= x.size()) {
        throw AnalysisError("lag must be smaller than the series length");
    }
    const double denom = energy(x);
    if (denom == 0.0) {
        throw AnalysisError("zero variance");
    }
    std::vector<double> c(max_lag + 1);
    c[0] = 1.0;
    for (std::size_t lag = 1; lag <= max_lag; ++lag) {
        double num = 0.0;
        for (std::size_t k = lag; k < x.size(); ++k) {
            num += x[k] * x[k - lag];
        }
        c[lag] = num / denom;
    }
    return c;
}

double sample_autocorrelation(std::span<const double> x, std::size_t lag) {
    return sample_autocorrelations(x, lag)[lag];
}

std::vector<double> ljung_box_curve(std::span<const double> x, int max_m, PortmanteauFactor factor) {
    const auto n = x.size();
    if (max_m < 1 || static_cast<std::size_t>(max_m) >= n) {
        throw AnalysisError("portmanteau lag count out of range");
    }
    const auto c = sample_autocorrelations(x, static_cast<std::size_t>(max_m));
    const double nn = static_cast<double>(n);
    const double scale = factor == PortmanteauFactor::Squared ? nn * nn : nn * (nn + 2.0);
    std::vector<double> q(static_cast<std::size_t>(max_m));
    double acc = 0.0;
    for (int i = 1; i <= max_m; ++i) {
        acc += c[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(i)] / (nn - i);
        q[static_cast<std::size_t>(i - 1)] = scale * acc;
    }
    return q;
}

double ljung_box_statistic(std::span<const double> x, int m, PortmanteauFactor factor) {
    return ljung_box_curve(x, m, factor).back();
}

double chi2_inverse_cdf(int m, double alpha) {
    if (m < 1) {
        throw std::invalid_argument("chi-squared degrees of freedom must be >= 1");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("alpha must lie in (0, 1)");
    }
    return 2.0 * boost::math::gamma_p_inv(0.5 * m, alpha);
}

AutocorrTestResult autocorr_test(std::span<const double> x, int m, double alpha, PortmanteauFactor factor) {
    AutocorrTestResult r;
    r.m = m;
    r.alpha = alpha;
    r.q_statistic = ljung_box_statistic(x, m, factor);
    r.threshold = chi2_inverse_cdf(m, alpha);
    r.rejected = r.q_statistic > r.threshold;
    return r;
}

double kolmogorov_survival(double lambda) {
    if (lambda <= 0.0) {
        return 1.0;
    }
    if (lambda < 1.18) {
        const double y = std::exp(-std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda));
        double sum = 0.0;
        for (int k = 1; k <= 20; ++k) {
            sum += std::pow(y, (2 * k - 1) * (2 * k - 1));
        }
        const double cdf = std::sqrt(2.0 * std::numbers::pi) / lambda * sum;
        return std::clamp(1.0 - cdf, 0.0, 1.0);
    }
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 == 1 ? term : -term);
        if (term < 1e-300) {
            break;
        }
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_gaussian_test(std::span<const double> x) {
    if (x.size() < 8) {
        throw AnalysisError("KS test needs at least 8 samples");
    }
    const auto st = summary_stats(x);
    if (!(st.variance > 0.0)) {
        throw AnalysisError("zero variance");
    }
    const double sd = std::sqrt(st.variance);
    std::vector<double> z(x.begin(), x.end());
    for (auto& v : z) {
        v = (v - st.mean) / sd;
    }
    std::sort(z.begin(), z.end());
    const double n = static_cast<double>(z.size());
    double d = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double f = normal_cdf(z[i]);
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    const double sn = std::sqrt(n);
    return {d, kolmogorov_survival((sn + 0.12 + 0.11 / sn) * d)};
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) {
        throw AnalysisError("empty series");
    }
    std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < sa.size() && j < sb.size()) {
        const double v = std::min(sa[i], sb[j]);
        while (i < sa.size() && sa[i] <= v) ++i;
        while (j < sb.size() && sb[j] <= v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double ne = std::sqrt(na * nb / (na + nb));
    return {d, kolmogorov_survival((ne + 0.12 + 0.11 / ne) * d)};
}

std::vector<std::pair<double, double>> qq_points(std::span<const double> s, std::span<const double> reference) {
    if (s.empty() || reference.empty()) {
        throw AnalysisError("empty series");
    }
    const auto a = standardized_sorted(s);
    const auto b = standardized_sorted(reference);
    const std::size_t k = std::min<std::size_t>({a.size(), b.size(), 512});
    std::vector<std::pair<double, double>> out;
    out.reserve(k);
    for (std::size_t i = 1; i <= k; ++i) {
        const double p = (static_cast<double>(i) - 0.5) / static_cast<double>(k);
        out.emplace_back(quantile_sorted(a, p), quantile_sorted(b, p));
    }
    return out;
}

}  // namespace mfspec
