#pragma once

#include <chrono>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mfspec {

/// Raised for domain-level failures (degenerate input, singular fits, ...).
class AnalysisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Timestamp = std::chrono::sys_seconds;

/// Uniformly sampled real-valued sequence with its sampling metadata.
struct Series {
    std::vector<double> values;
    Timestamp start{};
    std::chrono::seconds step{std::chrono::hours(1)};
    std::string label;
    std::string unit;

    Series() = default;
    explicit Series(std::vector<double> v, std::string lbl = {})
        : values(std::move(v)), label(std::move(lbl)) {}

    std::size_t size() const noexcept { return values.size(); }
    bool empty() const noexcept { return values.empty(); }
    std::span<const double> view() const noexcept { return values; }

    /// Same metadata, new samples.
    Series with_values(std::vector<double> v) const {
        Series out = *this;
        out.values = std::move(v);
        return out;
    }
};

/// Identifies one reproducible random stream: the pair always yields the
/// same draws regardless of which thread consumes it.
struct RngSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t realization_index = 0;

    RngSpec realization(std::uint64_t index) const { return {master_seed, index}; }
};

using Engine = std::mt19937_64;

/// Engine keyed by (master_seed, realization_index) through seed_seq mixing.
Engine make_engine(const RngSpec& rng);

struct SummaryStats {
    double mean = 0.0;
    double variance = 0.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    double min = 0.0;
    double max = 0.0;
};

/// Running cumulative sum with Neumaier compensation.
std::vector<double> cumulative_sum(std::span<const double> x);

/// X^prof(i) = sum_{j<=i} X(j). Throws on empty input.
Series build_profile(const Series& fluc);

/// Applies `order` successive cumulative sums.
std::vector<double> integrate(std::span<const double> x, int order);

/// Fisher-Yates permutation, descending index sweep.
Series shuffle_series(const Series& s, const RngSpec& rng);

SummaryStats summary_stats(std::span<const double> x);
inline SummaryStats summary_stats(const Series& s) { return summary_stats(s.view()); }

}  // namespace mfspec
