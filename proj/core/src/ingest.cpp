#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mfspec/pipeline.hpp"

namespace mfspec {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

int digits(const std::string& s, std::size_t pos, std::size_t count) {
    if (pos + count > s.size()) {
        throw std::invalid_argument("truncated timestamp");
    }
    int v = 0;
    for (std::size_t i = pos; i < pos + count; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
            throw std::invalid_argument("non-digit in timestamp");
        }
        v = v * 10 + (s[i] - '0');
    }
    return v;
}

std::optional<double> parse_number(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) return std::nullopt;
    double v = 0.0;
    const auto* first = t.data();
    const auto* last = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || !std::isfinite(v)) return std::nullopt;
    return v;
}

}  // namespace

Timestamp parse_timestamp(const std::string& raw) {
    using namespace std::chrono;
    const std::string s = trim(raw);
    try {
        const int yr = digits(s, 0, 4);
        if (s.size() < 16 || s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') || s[13] != ':') {
            throw std::invalid_argument("layout");
        }
        const int mo = digits(s, 5, 2);
        const int dy = digits(s, 8, 2);
        const int hr = digits(s, 11, 2);
        const int mi = digits(s, 14, 2);
        std::size_t pos = 16;
        int sec = 0;
        if (pos < s.size() && s[pos] == ':') {
            sec = digits(s, pos + 1, 2);
            pos += 3;
        }
        int offset_min = 0;
        if (pos < s.size()) {
            if (s[pos] == 'Z' && pos + 1 == s.size()) {
                pos += 1;
            } else if ((s[pos] == '+' || s[pos] == '-') && s.size() == pos + 6 && s[pos + 3] == ':') {
                const int sign = s[pos] == '+' ? 1 : -1;
                offset_min = sign * (digits(s, pos + 1, 2) * 60 + digits(s, pos + 4, 2));
                pos += 6;
            } else {
                throw std::invalid_argument("zone");
            }
        }
        const year_month_day ymd{year{yr}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(dy)}};
        if (!ymd.ok() || hr > 23 || mi > 59 || sec > 60) {
            throw std::invalid_argument("range");
        }
        return sys_days{ymd} + hours{hr} + minutes{mi} + seconds{sec} - minutes{offset_min};
    } catch (const std::invalid_argument&) {
        throw AnalysisError("malformed timestamp '" + s + "'");
    }
}

std::string format_timestamp(Timestamp t) {
    using namespace std::chrono;
    const auto day_point = floor<days>(t);
    const year_month_day ymd{day_point};
    const hh_mm_ss hms{t - day_point};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()));
    return buf;
}

IngestResult ingest_load_csv(std::istream& in, std::string label) {
    using namespace std::chrono;
    const seconds step = hours(1);
    std::string line;
    std::size_t row = 0;
    if (!std::getline(in, line)) {
        throw AnalysisError("empty file");
    }
    ++row;
    {
        std::string header = trim(line);
        if (header.rfind("\xEF\xBB\xBF", 0) == 0) header = header.substr(3);
        if (header != "timestamp,load_mw") {
            throw AnalysisError("row 1: expected header 'timestamp,load_mw'");
        }
    }
    struct Sample {
        Timestamp t;
        double sum;
        int count;
    };
    std::vector<Sample> samples;
    while (std::getline(in, line)) {
        ++row;
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto comma = t.find(',');
        if (comma == std::string::npos || t.find(',', comma + 1) != std::string::npos) {
            throw AnalysisError("row " + std::to_string(row) + ": expected 2 fields");
        }
        Timestamp ts;
        try {
            ts = parse_timestamp(t.substr(0, comma));
        } catch (const AnalysisError& e) {
            throw AnalysisError("row " + std::to_string(row) + ": " + e.what());
        }
        const auto value = parse_number(t.substr(comma + 1));
        if (!value) {
            throw AnalysisError("row " + std::to_string(row) + ": malformed load value");
        }
        if (!samples.empty()) {
            if (ts < samples.back().t) {
                throw AnalysisError("row " + std::to_string(row) + ": non-monotone timestamp " + format_timestamp(ts));
            }
            if (ts == samples.back().t) {
                samples.back().sum += *value;
                samples.back().count += 1;
                continue;
            }
        }
        samples.push_back({ts, *value, 1});
    }
    if (samples.empty()) {
        throw AnalysisError("no data rows");
    }

    IngestResult result;
    Series& s = result.series;
    s.label = std::move(label);
    s.unit = "MW";
    s.step = step;
    s.start = samples.front().t;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double v = samples[i].sum / samples[i].count;
        if (samples[i].count > 1) {
            result.notes.push_back("averaged " + std::to_string(samples[i].count) + " duplicate rows at " +
                                   format_timestamp(samples[i].t));
        }
        if (i > 0) {
            const auto gap = samples[i].t - samples[i - 1].t;
            if (gap % step != seconds{0}) {
                throw AnalysisError("irregular sampling between " + format_timestamp(samples[i - 1].t) + " and " +
                                    format_timestamp(samples[i].t));
            }
            const auto missing = gap / step - 1;
            if (missing == 1) {
                const double prev = s.values.back();
                s.values.push_back(0.5 * (prev + v));
                result.notes.push_back("interpolated missing hour " + format_timestamp(samples[i - 1].t + step));
            } else if (missing >= 2) {
                throw AnalysisError("gap of " + std::to_string(missing) + " missing hours between " +
                                    format_timestamp(samples[i - 1].t) + " and " + format_timestamp(samples[i].t));
            }
        }
        s.values.push_back(v);
    }
    return result;
}

IngestResult ingest_load_csv(const std::filesystem::path& path, std::string label) {
    std::ifstream in(path);
    if (!in) {
        throw AnalysisError("cannot open " + path.string());
    }
    if (label.empty()) {
        label = path.stem().string();
    }
    return ingest_load_csv(in, std::move(label));
}

void write_load_csv(std::ostream& os, const Series& s) {
    os << "timestamp,load_mw\n";
    std::ostringstream buf;
    buf.precision(17);
    for (std::size_t i = 0; i < s.size(); ++i) {
        buf.str({});
        buf << s.values[i];
        os << format_timestamp(s.start + s.step * static_cast<long>(i)) << ',' << buf.str() << '\n';
    }
}

}  // namespace mfspec
