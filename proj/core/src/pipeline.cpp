#include "mfspec/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "mfspec/parallel.hpp"
#include "mfspec/plots.hpp"
#include "mfspec/synthetic.hpp"

namespace mfspec {

namespace fs = std::filesystem;

namespace {

constexpr std::array<HurstFlavor, 5> kFlavors = {HurstFlavor::Plain, HurstFlavor::Shuffled, HurstFlavor::Surrogate,
                                                 HurstFlavor::Correlation, HurstFlavor::Distribution};

constexpr std::uint64_t kSurrogateStreamBase = std::uint64_t{1} << 32;
constexpr std::uint64_t kReferenceStream = std::uint64_t{1} << 40;

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::string hex(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string fingerprint(const RunConfig& cfg, const MfdfaConfig& resolved) {
    std::ostringstream os;
    os.precision(17);
    os << describe(resolved) << ";carrier=" << cfg.carrier.threshold_decades << ',' << cfg.carrier.fit_min_bin << ','
       << cfg.carrier.fit_max_bin << ',' << cfg.carrier.refit_passes << ";alpha=" << cfg.alpha
       << ";lags=" << cfg.portmanteau_lags
       << ";factor=" << (cfg.portmanteau_factor == PortmanteauFactor::Squared ? "squared" : "ljung_box")
       << ";wings=" << cfg.truncate_wings << ";seed=" << cfg.master_seed;
    return hex(fnv1a(os.str()));
}

std::string safe_name(const std::string& label) {
    std::string out;
    for (char c : label) {
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
    }
    return out.empty() ? "series" : out;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << text;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

std::optional<Table> read_table(const fs::path& path) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    Table t;
    std::string line;
    if (!std::getline(in, line)) return std::nullopt;
    {
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) t.header.push_back(f);
    }
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) {
            try {
                row.push_back(std::stod(f));
            } catch (const std::exception&) {
                row.push_back(std::numeric_limits<double>::quiet_NaN());
            }
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::vector<double> column(const Table& t, std::size_t c) {
    std::vector<double> out;
    for (const auto& r : t.rows) out.push_back(c < r.size() ? r[c] : std::numeric_limits<double>::quiet_NaN());
    return out;
}

void render_country_plots(const fs::path& dir, const std::string& label) {
    if (auto t = read_table(dir / "fluct_plain.csv")) {
        FluctuationSurface s;
        for (std::size_t i = 1; i < t->header.size(); ++i) s.scales.push_back(std::stoul(t->header[i]));
        for (const auto& r : t->rows) {
            s.q.push_back(r[0]);
            s.values.insert(s.values.end(), r.begin() + 1, r.end());
        }
        const auto curves = plot::decade_shifted_curves(s, {-10, -5, -2, 2, 5, 10});
        std::ostringstream csv;
        csv << "q,s,F,F_shifted\n";
        csv.precision(12);
        for (const auto& c : curves) {
            for (std::size_t i = 0; i < c.x.size(); ++i) {
                const double q = std::stod(c.name.substr(2));
                const auto qi = static_cast<std::size_t>(std::find(s.q.begin(), s.q.end(), q) - s.q.begin());
                csv << q << ',' << c.x[i] << ',' << s.at(qi, i) << ',' << c.y[i] << '\n';
            }
        }
        write_text(dir / "fig_fluctuation.csv", csv.str());
        write_text(dir / "fluctuation.svg",
                   plot::line_chart({label + ": F_q(s), consecutive q shifted by one decade", "s", "F_q(s)", true, true},
                                    curves));
    }
    if (auto t = read_table(dir / "hurst.csv")) {
        const auto q = column(*t, 0);
        const std::array<std::pair<std::size_t, const char*>, 3> panels = {
            std::pair<std::size_t, const char*>{1, "h(q)"}, {2, "h_shuf(q)"}, {4, "h_cor(q)"}};
        std::vector<plot::Axes> axes;
        std::vector<std::vector<plot::Curve>> curves;
        for (const auto& [col, name] : panels) {
            axes.push_back({name, "q", name, false, false});
            curves.push_back({plot::Curve{name, q, column(*t, col)}});
        }
        write_text(dir / "hurst.svg", plot::stacked_panels(label + ": generalized Hurst exponents", axes, curves));
    }
    {
        std::vector<plot::Curve> curves;
        for (auto flavor : kFlavors) {
            if (auto t = read_table(dir / ("spectrum_" + to_string(flavor) + ".csv"))) {
                curves.push_back({to_string(flavor), column(*t, 0), column(*t, 1)});
            }
        }
        write_text(dir / "spectra.svg", plot::line_chart({label + ": multifractal spectra", "pi", "f(pi)"}, curves));
    }
    if (auto t = read_table(dir / "autocorr.csv")) {
        const auto m = column(*t, 0);
        write_text(dir / "autocorr.svg",
                   plot::line_chart({label + ": portmanteau statistic vs chi-squared quantile", "m", "Q_AC(m)"},
                                    {{"Q_AC(m)", m, column(*t, 1)}, {"chi2_m(alpha)", m, column(*t, 2)}}));
    }
    if (auto t = read_table(dir / "qq.csv")) {
        const auto ref = column(*t, 1);
        write_text(dir / "qq.svg", plot::line_chart({label + ": quantiles vs Gaussian reference", "Gaussian quantile",
                                                     "sample quantile"},
                                                    {{"sample", ref, column(*t, 0), true}, {"diagonal", ref, ref}}));
    }
}

}  // namespace

CountryAnalysis analyze_series(const Series& raw, const RunConfig& cfg) {
    CountryAnalysis a;
    auto& rep = a.report;
    rep.label = raw.label;
    rep.length = raw.size();

    const std::uint64_t country_seed = splitmix(cfg.master_seed ^ fnv1a(raw.label));
    const RngSpec shuffle_rng{country_seed, 0};
    const RngSpec surrogate_rng{country_seed, kSurrogateStreamBase};

    a.decomposition = decompose(raw, cfg.carrier);
    Series fluc = raw.with_values(fluctuation_series(a.decomposition).values);

    const int lags = std::min<int>(cfg.portmanteau_lags, static_cast<int>(fluc.size()) - 1);
    a.portmanteau_curve = ljung_box_curve(fluc.view(), lags, cfg.portmanteau_factor);
    for (int m = 1; m <= lags; ++m) a.portmanteau_thresholds.push_back(chi2_inverse_cdf(m, cfg.alpha));
    rep.test.m = lags;
    rep.test.alpha = cfg.alpha;
    rep.test.q_statistic = a.portmanteau_curve.back();
    rep.test.threshold = a.portmanteau_thresholds.back();
    rep.test.rejected = rep.test.q_statistic > rep.test.threshold;

    a.ks = ks_gaussian_test(fluc.view());
    rep.ks_p = a.ks.p_value;
    const Series reference = gaussian_white_noise(fluc.size(), {country_seed, kReferenceStream});
    a.qq = qq_points(fluc.view(), reference.view());

    const MfdfaConfig mcfg = resolve_config(cfg.mfdfa, fluc.size());
    rep.fingerprint = fingerprint(cfg, mcfg);

    a.plain = plain_surface(fluc, mcfg);
    a.shuffled = ensemble_surface(fluc, mcfg, SurfaceFlavor::Shuffled, shuffle_rng);
    a.surrogate = ensemble_surface(fluc, mcfg, SurfaceFlavor::Surrogate, surrogate_rng);

    a.hurst[0] = fit_hurst(a.plain);
    a.hurst[1] = fit_hurst(a.shuffled);
    a.hurst[2] = fit_hurst(a.surrogate);
    a.hurst[3] = correlation_hurst(a.hurst[0], a.hurst[1]);
    a.hurst[4] = distribution_hurst(a.hurst[0], a.hurst[2]);

    for (std::size_t i = 0; i < 5; ++i) {
        a.spectra[i] = legendre_points(a.hurst[i], cfg.truncate_wings);
        if (a.spectra[i].points.empty()) {
            throw AnalysisError(to_string(kFlavors[i]) + " spectrum has no points with f >= 0");
        }
        rep.widths[i] = a.spectra[i].width;
        rep.peaks[i] = a.spectra[i].pi_peak;
        if (a.spectra[i].truncated) {
            rep.notes.push_back(to_string(kFlavors[i]) + " spectrum: negative-f wings removed");
        }
    }
    rep.regime = classify_regime(rep.peaks[3]);
    return a;
}

void write_country_artifacts(const fs::path& dir, const CountryAnalysis& a, const RunConfig& cfg) {
    fs::create_directories(dir);
    {
        std::ofstream os(dir / "decomposition.csv");
        write_decomposition_csv(os, a.decomposition);
    }
    {
        std::ostringstream os;
        os << "m,q_statistic,threshold\n";
        os.precision(12);
        for (std::size_t i = 0; i < a.portmanteau_curve.size(); ++i) {
            os << i + 1 << ',' << a.portmanteau_curve[i] << ',' << a.portmanteau_thresholds[i] << '\n';
        }
        write_text(dir / "autocorr.csv", os.str());
    }
    {
        std::ostringstream os;
        os << "sample,reference\n";
        os.precision(12);
        for (const auto& [x, y] : a.qq) os << x << ',' << y << '\n';
        write_text(dir / "qq.csv", os.str());
    }
    const std::array<std::pair<const FluctuationSurface*, const char*>, 3> surfaces = {
        std::pair<const FluctuationSurface*, const char*>{&a.plain, "fluct_plain.csv"},
        {&a.shuffled, "fluct_shuffled.csv"},
        {&a.surrogate, "fluct_surrogate.csv"}};
    for (const auto& [surface, name] : surfaces) {
        std::ostringstream os;
        write_surface_csv(os, *surface);
        write_text(dir / name, os.str());
    }
    {
        std::ostringstream os;
        os << "q,h,h_shuf,h_sur,h_cor,h_dist,se,se_shuf,se_sur,se_cor,se_dist\n";
        os.precision(12);
        for (std::size_t i = 0; i < a.hurst[0].q.size(); ++i) {
            os << a.hurst[0].q[i];
            for (const auto& c : a.hurst) os << ',' << c.h[i];
            for (const auto& c : a.hurst) os << ',' << c.std_error[i];
            os << '\n';
        }
        write_text(dir / "hurst.csv", os.str());
    }
    for (std::size_t i = 0; i < 5; ++i) {
        std::ostringstream os;
        write_spectrum_csv(os, a.spectra[i]);
        write_text(dir / ("spectrum_" + to_string(kFlavors[i]) + ".csv"), os.str());
    }
    nlohmann::ordered_json j;
    const auto& r = a.report;
    j["label"] = r.label;
    j["length"] = r.length;
    j["fingerprint"] = r.fingerprint;
    j["carrier_bins"] = a.decomposition.carrier_bins.size();
    j["background_beta"] = a.decomposition.beta;
    j["portmanteau"] = {{"m", r.test.m},
                        {"q_statistic", r.test.q_statistic},
                        {"threshold", r.test.threshold},
                        {"alpha", r.test.alpha},
                        {"rejected", r.test.rejected}};
    j["ks"] = {{"statistic", a.ks.statistic}, {"p_value", a.ks.p_value}};
    for (std::size_t i = 0; i < 5; ++i) {
        const auto m = spectrum_metrics(a.spectra[i]);
        j["spectra"][to_string(kFlavors[i])] = {{"width", m.width},     {"pi_peak", m.pi_peak},
                                                {"pi_min", m.pi_min},   {"pi_max", m.pi_max},
                                                {"truncated", a.spectra[i].truncated}};
    }
    j["regime"] = to_string(r.regime);
    j["notes"] = r.notes;
    j["config"] = describe(a.plain.config);
    write_text(dir / "summary.json", j.dump(2) + "\n");
    if (cfg.write_plots) {
        render_country_plots(dir, r.label);
    }
}

void write_summary_plots(const fs::path& dir, const std::vector<CountryReport>& reports) {
    fs::create_directories(dir);
    std::vector<std::string> labels;
    std::vector<double> peak_cor, w_shuf, w_cor;
    {
        std::ostringstream os;
        os << "country,pi_max_cor,d_pi_shuf,d_pi_cor\n";
        for (const auto& r : reports) {
            labels.push_back(r.label);
            peak_cor.push_back(r.peaks[3]);
            w_shuf.push_back(r.widths[1]);
            w_cor.push_back(r.widths[3]);
            os << r.label << ',' << format_fixed(r.peaks[3]) << ',' << format_fixed(r.widths[1]) << ','
               << format_fixed(r.widths[3]) << '\n';
        }
        write_text(dir / "summary_metrics.csv", os.str());
    }
    write_text(dir / "peaks_cor.svg", plot::bar_chart("Peak of the correlation spectrum", "pi_max_cor", labels, peak_cor));
    plot::Curve scatter{"countries", w_shuf, w_cor, true, labels};
    write_text(dir / "widths_scatter.svg",
               plot::line_chart({"Shuffled vs correlation spectrum width", "d_pi_shuf", "d_pi_cor"}, {scatter}));
    const auto sorted_bars = [&](const std::vector<double>& v, const std::string& title, const std::string& name) {
        std::vector<std::size_t> idx(v.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::stable_sort(idx.begin(), idx.end(), [&](auto x, auto y) { return v[x] > v[y]; });
        std::vector<std::string> l;
        std::vector<double> s;
        for (auto i : idx) {
            l.push_back(labels[i]);
            s.push_back(v[i]);
        }
        write_text(dir / name, plot::bar_chart(title, title, l, s));
    };
    sorted_bars(w_shuf, "d_pi_shuf", "width_bars_shuf.svg");
    sorted_bars(w_cor, "d_pi_cor", "width_bars_cor.svg");
}

void replot_directory(const fs::path& dir) {
    if (!fs::is_directory(dir)) {
        throw std::invalid_argument("not a directory: " + dir.string());
    }
    std::ifstream report(dir / "report.csv");
    if (report) {
        write_summary_plots(dir, read_report(report));
    }
    std::vector<fs::path> subdirs;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_directory()) subdirs.push_back(entry.path());
    }
    std::sort(subdirs.begin(), subdirs.end());
    for (const auto& sub : subdirs) {
        std::string label = sub.filename().string();
        std::ifstream js(sub / "summary.json");
        if (js) {
            const auto j = nlohmann::json::parse(js, nullptr, false);
            if (!j.is_discarded() && j.contains("label")) label = j["label"].get<std::string>();
        }
        render_country_plots(sub, label);
    }
}

PipelineResult run_pipeline(const RunConfig& cfg) {
    PipelineResult result;
    const auto inputs = resolve_inputs(cfg);
    result.input_count = inputs.size();
    fs::create_directories(cfg.output_dir);
    if (inputs.empty()) {
        result.warnings.push_back("no input files matched");
        std::ofstream os(cfg.output_dir / "report.csv");
        emit_report(os, {});
        return result;
    }
    const std::size_t threads = cfg.threads == 0 ? default_thread_count() : cfg.threads;
    const std::size_t outer = std::min(threads, inputs.size());
    const std::size_t inner = std::max<std::size_t>(1, threads / std::max<std::size_t>(outer, 1));

    struct Slot {
        std::optional<CountryReport> report;
        std::optional<CountryFailure> failure;
        std::vector<std::string> notes;
    };
    std::vector<Slot> slots(inputs.size());
    parallel_for(inputs.size(), outer, [&](std::size_t i) {
        const auto& path = inputs[i];
        const std::string label = path.stem().string();
        try {
            auto ingested = ingest_load_csv(path, label);
            RunConfig local = cfg;
            local.mfdfa.threads = inner;
            auto analysis = analyze_series(ingested.series, local);
            analysis.report.notes.insert(analysis.report.notes.begin(), ingested.notes.begin(), ingested.notes.end());
            write_country_artifacts(cfg.output_dir / safe_name(label), analysis, local);
            slots[i].report = std::move(analysis.report);
        } catch (const std::exception& e) {
            slots[i].failure = CountryFailure{label, path.string(), e.what()};
        }
    });
    for (auto& s : slots) {
        if (s.report) result.reports.push_back(std::move(*s.report));
        if (s.failure) result.failures.push_back(std::move(*s.failure));
    }

    if (result.reports.size() >= cfg.clusters) {
        try {
            const auto c = cluster_reports(result.reports, cfg.clusters, {cfg.master_seed, 0}, threads);
            result.silhouette = c.silhouette;
            std::ofstream os(cfg.output_dir / "clusters.csv");
            write_cluster_csv(os, result.reports, c);
        } catch (const AnalysisError& e) {
            result.warnings.push_back(std::string("clustering skipped: ") + e.what());
        }
    } else if (!result.reports.empty()) {
        result.warnings.push_back("clustering skipped: fewer reports than clusters");
    }

    {
        std::ofstream os(cfg.output_dir / "report.csv", std::ios::binary);
        emit_report(os, result.reports);
    }
    {
        std::ofstream os(cfg.output_dir / "failures.csv");
        os << "country,path,error\n";
        for (const auto& f : result.failures) os << f.label << ',' << f.path << ",\"" << f.error << "\"\n";
    }
    {
        std::ofstream os(cfg.output_dir / "run.log");
        for (const auto& r : result.reports) {
            os << r.label << ": fingerprint " << r.fingerprint << ", ks_p " << r.ks_p << ", portmanteau "
               << (r.test.rejected ? "rejected" : "accepted") << " at m=" << r.test.m << '\n';
            for (const auto& n : r.notes) os << "  " << n << '\n';
        }
        for (const auto& f : result.failures) os << f.label << ": FAILED " << f.error << '\n';
        for (const auto& w : result.warnings) os << "warning: " << w << '\n';
    }
    if (cfg.write_plots && !result.reports.empty()) {
        write_summary_plots(cfg.output_dir, result.reports);
    }
    return result;
}

}  // namespace mfspec
