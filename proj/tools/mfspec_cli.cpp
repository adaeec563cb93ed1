#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "mfspec/pipeline.hpp"
#include "mfspec/synthetic.hpp"

namespace {

enum ExitCode : int { kOk = 0, kConfigError = 1, kPartialFailure = 2, kTotalFailure = 3 };

int run_analyze(const std::string& config_path, const std::string& output_override) {
    mfspec::RunConfig cfg;
    try {
        cfg = mfspec::load_run_config(config_path);
        if (!output_override.empty()) cfg.output_dir = output_override;
        mfspec::resolve_inputs(cfg);
    } catch (const std::exception& e) {
        std::cerr << "mfspec: " << e.what() << '\n';
        return kConfigError;
    }
    mfspec::PipelineResult result;
    try {
        result = mfspec::run_pipeline(cfg);
    } catch (const std::exception& e) {
        std::cerr << "mfspec: " << e.what() << '\n';
        return kTotalFailure;
    }
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
    for (const auto& f : result.failures) std::cerr << "failed: " << f.label << ": " << f.error << '\n';
    std::cout << "analyzed " << result.reports.size() << " of " << result.input_count << " series; report at "
              << (cfg.output_dir / "report.csv").string() << '\n';
    if (result.silhouette) std::cout << "silhouette " << *result.silhouette << '\n';
    if (result.input_count == 0) return kOk;
    if (result.reports.empty()) return kTotalFailure;
    return result.failures.empty() ? kOk : kPartialFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mfspec: multifractal analysis of hourly load series"};
    app.require_subcommand(1);

    std::string config_path, output_override;
    auto* analyze = app.add_subcommand("analyze", "Run the full analysis from a run-config file");
    analyze->add_option("config", config_path, "Key-value run configuration")->required();
    analyze->add_option("-o,--output", output_override, "Override the output directory");

    std::string kind = "fgn", synth_out;
    std::size_t length = 65536;
    double hurst = 0.8, weight = 0.75, phi = 0.5;
    int levels = 16;
    std::uint64_t seed = 1, index = 0;
    std::string label;
    auto* synth = app.add_subcommand("synth", "Write a synthetic series as a load CSV");
    synth->add_option("kind", kind, "white | fgn | cascade | ar1")
        ->check(CLI::IsMember({"white", "fgn", "cascade", "ar1"}));
    synth->add_option("-n,--length", length, "Series length (power of two for fgn)");
    synth->add_option("--hurst", hurst, "fGn Hurst exponent");
    synth->add_option("--weight", weight, "Cascade weight a");
    synth->add_option("--levels", levels, "Cascade levels (length 2^levels)");
    synth->add_option("--phi", phi, "AR(1) coefficient");
    synth->add_option("--seed", seed, "Master seed");
    synth->add_option("--realization", index, "Realization index");
    synth->add_option("-o,--output", synth_out, "Output CSV (stdout when omitted)");

    std::string report_path, cluster_out;
    std::size_t k = 2;
    std::uint64_t cluster_seed = 42;
    auto* cluster = app.add_subcommand("cluster", "Re-cluster the rows of an existing report");
    cluster->add_option("report", report_path, "report.csv from analyze")->required()->check(CLI::ExistingFile);
    cluster->add_option("-k,--clusters", k, "Number of clusters");
    cluster->add_option("--seed", cluster_seed, "Master seed");
    cluster->add_option("-o,--output", cluster_out, "Write the relabelled report here (stdout when omitted)");

    std::string plot_dir;
    auto* plot = app.add_subcommand("plot", "Re-render SVG figures from the CSVs of an output directory");
    plot->add_option("dir", plot_dir, "Output directory of analyze")->required()->check(CLI::ExistingDirectory);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfigError;
    }

    try {
        if (*analyze) {
            return run_analyze(config_path, output_override);
        }
        if (*synth) {
            const mfspec::RngSpec rng{seed, index};
            mfspec::Series s;
            if (kind == "white") {
                s = mfspec::gaussian_white_noise(length, rng);
            } else if (kind == "fgn") {
                s = mfspec::fgn(length, hurst, rng);
            } else if (kind == "cascade") {
                s = mfspec::binomial_cascade({levels, weight}, rng);
            } else {
                s = mfspec::ar1(length, phi, rng);
            }
            s.start = std::chrono::sys_days{std::chrono::year{2010} / 1 / 1};
            if (synth_out.empty()) {
                mfspec::write_load_csv(std::cout, s);
            } else {
                std::ofstream os(synth_out);
                mfspec::write_load_csv(os, s);
            }
            return kOk;
        }
        if (*cluster) {
            std::ifstream in(report_path);
            auto reports = mfspec::read_report(in);
            const auto outcome = mfspec::cluster_reports(reports, k, {cluster_seed, 0});
            std::cerr << "silhouette " << outcome.silhouette << '\n';
            if (cluster_out.empty()) {
                mfspec::emit_report(std::cout, reports);
            } else {
                std::ofstream os(cluster_out);
                mfspec::emit_report(os, reports);
            }
            return kOk;
        }
        if (*plot) {
            mfspec::replot_directory(plot_dir);
            return kOk;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "mfspec: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "mfspec: " << e.what() << '\n';
        return kTotalFailure;
    }
    return kOk;
}
