#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mfspec/clustering.hpp"
#include "mfspec/legendre.hpp"
#include "mfspec/mfdfa.hpp"
#include "mfspec/series.hpp"
#include "mfspec/spectral.hpp"
#include "mfspec/stat_tests.hpp"

namespace mfspec {

// ---------------------------------------------------------------- ingestion

struct IngestResult {
    Series series;
    std::vector<std::string> notes;  ///< interpolations and merged duplicates
};

/// Parses YYYY-MM-DD[T ]HH:MM[:SS][Z|+HH:MM|-HH:MM] into UTC.
Timestamp parse_timestamp(const std::string& text);
std::string format_timestamp(Timestamp t);

/// Reads a `timestamp,load_mw` CSV of hourly samples. Single missing hours
/// are linearly interpolated, duplicate timestamps averaged; longer gaps,
/// malformed rows and backwards timestamps throw.
IngestResult ingest_load_csv(const std::filesystem::path& path, std::string label = {});
IngestResult ingest_load_csv(std::istream& in, std::string label);

/// Writes a series in the ingestion format.
void write_load_csv(std::ostream& os, const Series& s);

// ---------------------------------------------------------------- config

struct RunConfig {
    std::vector<std::string> inputs;  ///< paths or glob patterns
    MfdfaConfig mfdfa;
    CarrierPolicy carrier;
    double alpha = 0.99;
    int portmanteau_lags = 50;
    PortmanteauFactor portmanteau_factor = PortmanteauFactor::Squared;
    bool truncate_wings = true;
    std::size_t clusters = 2;
    std::uint64_t master_seed = 42;
    std::filesystem::path output_dir = "mfspec-out";
    bool write_plots = true;
    std::size_t threads = 0;  ///< 0: MFSPEC_THREADS or hardware concurrency
};

/// Key-value text (`key = value`, '#' comments). Unknown keys throw.
RunConfig parse_run_config(std::istream& in, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

/// Expands globs in cfg.inputs; sorted, de-duplicated. Missing literal paths throw.
std::vector<std::filesystem::path> resolve_inputs(const RunConfig& cfg);

// ---------------------------------------------------------------- reports

enum class Regime { PersistentLoad, AntipersistentDerivative, Boundary };

std::string to_string(Regime r);
std::optional<Regime> parse_regime(const std::string& text);

/// Boundary within 0.02 of |pi| = 0.5, persistent inside [-0.5, 0.5],
/// anti-persistent (derivative process) outside.
Regime classify_regime(double pi_peak_correlation);

/// Indexed as plain, shuffled, surrogate, correlation, distribution.
using FlavorValues = std::array<double, 5>;

struct CountryReport {
    std::string label;
    FlavorValues widths{};
    FlavorValues peaks{};
    Regime regime = Regime::PersistentLoad;
    AutocorrTestResult test;
    double ks_p = 1.0;
    std::string fingerprint;
    int cluster = -1;  ///< -1 when not clustered
    std::size_t length = 0;
    std::vector<std::string> notes;
};

/// Everything produced for one series; the report plus the figure data.
struct CountryAnalysis {
    CountryReport report;
    SpectrumDecomposition decomposition;
    std::vector<double> portmanteau_curve;
    std::vector<double> portmanteau_thresholds;
    KsResult ks;
    std::vector<std::pair<double, double>> qq;
    FluctuationSurface plain, shuffled, surrogate;
    std::array<HurstCurve, 5> hurst;
    std::array<SpectrumSummary, 5> spectra;
};

/// Runs the full method on one raw series.
CountryAnalysis analyze_series(const Series& raw, const RunConfig& cfg);

/// Fixed-point text with `decimals` digits; negative zero prints as zero.
std::string format_fixed(double v, int decimals = 3);

/// Table-style CSV: country, five widths, five peaks, regime, cluster.
void emit_report(std::ostream& os, const std::vector<CountryReport>& reports);
std::string report_header();

/// Parses a report written by emit_report (regime and cluster optional).
std::vector<CountryReport> read_report(std::istream& in);

FeatureMatrix width_features(const std::vector<CountryReport>& reports);

struct ClusterOutcome {
    KMeansResult kmeans;
    FeatureMatrix normalized;
    double silhouette = 0.0;
};

/// z-scores the widths, clusters them and writes labels into the reports.
ClusterOutcome cluster_reports(std::vector<CountryReport>& reports, std::size_t k, const RngSpec& rng,
                               std::size_t threads = 1);

void write_cluster_csv(std::ostream& os, const std::vector<CountryReport>& reports, const ClusterOutcome& c);

// ---------------------------------------------------------------- pipeline

struct CountryFailure {
    std::string label;
    std::string path;
    std::string error;
};

struct PipelineResult {
    std::vector<CountryReport> reports;
    std::vector<CountryFailure> failures;
    std::vector<std::string> warnings;
    std::optional<double> silhouette;
    std::size_t input_count = 0;
};

/// Analyzes every input, clusters the successes and writes all artifacts
/// under cfg.output_dir. A failing input is recorded and skipped.
PipelineResult run_pipeline(const RunConfig& cfg);

/// Per-country artifact files (CSV + SVG) under `dir`.
void write_country_artifacts(const std::filesystem::path& dir, const CountryAnalysis& a, const RunConfig& cfg);

/// Cross-country figures (peaks, width scatter, width bars) from reports.
void write_summary_plots(const std::filesystem::path& dir, const std::vector<CountryReport>& reports);

/// Re-renders every SVG from the CSVs found in an output directory.
void replot_directory(const std::filesystem::path& dir);

}  // namespace mfspec
