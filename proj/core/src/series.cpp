#include "mfspec/series.hpp"

#include <algorithm>
#include <cmath>

namespace mfspec {

Engine make_engine(const RngSpec& rng) {
    const auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
    const auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
    std::seed_seq seq{lo(rng.master_seed), hi(rng.master_seed), lo(rng.realization_index),
                      hi(rng.realization_index), 0x6d667370u};
    return Engine(seq);
}

std::vector<double> cumulative_sum(std::span<const double> x) {
    std::vector<double> out(x.size());
    double sum = 0.0;
    double comp = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double t = sum + x[i];
        if (std::abs(sum) >= std::abs(x[i])) {
            comp += (sum - t) + x[i];
        } else {
            comp += (x[i] - t) + sum;
        }
        sum = t;
        out[i] = sum + comp;
    }
    return out;
}

Series build_profile(const Series& fluc) {
    if (fluc.empty()) {
        throw AnalysisError("empty series");
    }
    return fluc.with_values(cumulative_sum(fluc.view()));
}

std::vector<double> integrate(std::span<const double> x, int order) {
    if (order < 0) {
        throw std::invalid_argument("integration order must be non-negative");
    }
    std::vector<double> out(x.begin(), x.end());
    for (int k = 0; k < order; ++k) {
        out = cumulative_sum(out);
    }
    return out;
}

Series shuffle_series(const Series& s, const RngSpec& rng) {
    if (s.empty()) {
        throw AnalysisError("empty series");
    }
    std::vector<double> v = s.values;
    auto engine = make_engine(rng);
    for (std::size_t i = v.size() - 1; i > 0; --i) {
        std::uniform_int_distribution<std::size_t> pick(0, i);
        std::swap(v[i], v[pick(engine)]);
    }
    return s.with_values(std::move(v));
}

SummaryStats summary_stats(std::span<const double> x) {
    if (x.size() < 2) {
        throw AnalysisError("summary statistics need at least 2 samples");
    }
    const double n = static_cast<double>(x.size());
    SummaryStats st;
    double sum = 0.0;
    st.min = x[0];
    st.max = x[0];
    for (double v : x) {
        sum += v;
        st.min = std::min(st.min, v);
        st.max = std::max(st.max, v);
    }
    st.mean = sum / n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double d = v - st.mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    st.variance = m2 / (n - 1.0);
    const double pop_var = m2 / n;
    if (pop_var > 0.0) {
        st.skewness = (m3 / n) / std::pow(pop_var, 1.5);
        st.excess_kurtosis = (m4 / n) / (pop_var * pop_var) - 3.0;
    }
    return st;
}

}  // namespace mfspec
