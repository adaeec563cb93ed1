#include <cmath>
#include <cstdio>
#include <sstream>

#include "mfspec/pipeline.hpp"

namespace mfspec {

std::string to_string(Regime r) {
    switch (r) {
        case Regime::PersistentLoad: return "persistent_load";
        case Regime::AntipersistentDerivative: return "antipersistent_derivative";
        case Regime::Boundary: return "boundary";
    }
    return "unknown";
}

std::optional<Regime> parse_regime(const std::string& text) {
    if (text == "persistent_load") return Regime::PersistentLoad;
    if (text == "antipersistent_derivative") return Regime::AntipersistentDerivative;
    if (text == "boundary") return Regime::Boundary;
    return std::nullopt;
}

Regime classify_regime(double pi_peak_correlation) {
    const double a = std::abs(pi_peak_correlation);
    if (std::abs(a - 0.5) <= 0.02) {
        return Regime::Boundary;
    }
    return a < 0.5 ? Regime::PersistentLoad : Regime::AntipersistentDerivative;
}

std::string format_fixed(double v, int decimals) {
    if (!std::isfinite(v)) {
        return "nan";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    std::string s(buf);
    if (!s.empty() && s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) {
        s.erase(0, 1);
    }
    return s;
}

std::string report_header() {
    return "country,d_pi,d_pi_shuf,d_pi_sur,d_pi_cor,d_pi_dist,pi_max,pi_max_shuf,pi_max_sur,pi_max_cor,"
           "pi_max_dist,regime,cluster";
}

void emit_report(std::ostream& os, const std::vector<CountryReport>& reports) {
    os << report_header() << '\n';
    for (const auto& r : reports) {
        os << r.label;
        for (double w : r.widths) os << ',' << format_fixed(w);
        for (double p : r.peaks) os << ',' << format_fixed(p);
        os << ',' << to_string(r.regime) << ',';
        if (r.cluster >= 0) os << r.cluster;
        os << '\n';
    }
}

std::vector<CountryReport> read_report(std::istream& in) {
    std::string line;
    std::vector<CountryReport> out;
    if (!std::getline(in, line)) {
        return out;
    }
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        if (!line.empty() && line.back() == ',') fields.emplace_back();
        if (fields.size() < 11) {
            throw AnalysisError("report row " + std::to_string(row) + ": expected at least 11 fields");
        }
        CountryReport r;
        r.label = fields[0];
        try {
            for (std::size_t i = 0; i < 5; ++i) {
                r.widths[i] = std::stod(fields[1 + i]);
                r.peaks[i] = std::stod(fields[6 + i]);
            }
        } catch (const std::exception&) {
            throw AnalysisError("report row " + std::to_string(row) + ": malformed number");
        }
        const auto regime = fields.size() > 11 ? parse_regime(fields[11]) : std::nullopt;
        r.regime = regime.value_or(classify_regime(r.peaks[3]));
        if (fields.size() > 12 && !fields[12].empty()) {
            r.cluster = std::stoi(fields[12]);
        }
        out.push_back(std::move(r));
    }
    return out;
}

FeatureMatrix width_features(const std::vector<CountryReport>& reports) {
    FeatureMatrix m;
    m.feature_names = default_width_features();
    for (const auto& r : reports) {
        m.labels.push_back(r.label);
        m.rows.emplace_back(r.widths.begin(), r.widths.end());
    }
    return m;
}

ClusterOutcome cluster_reports(std::vector<CountryReport>& reports, std::size_t k, const RngSpec& rng,
                               std::size_t threads) {
    ClusterOutcome c;
    c.normalized = normalize_features(width_features(reports));
    KMeansOptions opts;
    opts.threads = threads;
    c.kmeans = kmeans(c.normalized, k, rng, opts);
    for (std::size_t i = 0; i < reports.size(); ++i) {
        reports[i].cluster = c.kmeans.labels[i];
    }
    try {
        c.silhouette = silhouette(c.normalized, c.kmeans.labels);
    } catch (const AnalysisError&) {
        c.silhouette = 0.0;
    }
    return c;
}

void write_cluster_csv(std::ostream& os, const std::vector<CountryReport>& reports, const ClusterOutcome& c) {
    os << "country,cluster";
    for (const auto& name : c.normalized.feature_names) os << ",z_" << name;
    os << '\n';
    for (std::size_t i = 0; i < reports.size(); ++i) {
        os << reports[i].label << ',' << c.kmeans.labels[i];
        for (double v : c.normalized.rows[i]) os << ',' << format_fixed(v, 6);
        os << '\n';
    }
    os << "# centroids\n";
    for (std::size_t k = 0; k < c.kmeans.centroids.size(); ++k) {
        os << "centroid_" << k << ',' << k;
        for (double v : c.kmeans.centroids[k]) os << ',' << format_fixed(v, 6);
        os << '\n';
    }
    os << "# inertia," << format_fixed(c.kmeans.inertia, 6) << '\n';
    os << "# silhouette," << format_fixed(c.silhouette, 6) << '\n';
}

}  // namespace mfspec
