#include <glob.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
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

class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::size_t line, const std::string& msg)
        : std::invalid_argument("config line " + std::to_string(line) + ": " + msg) {}
};

double to_double(const std::string& v, std::size_t line) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) {
        throw ConfigError(line, "expected a number, got '" + v + "'");
    }
    return out;
}

template <typename Int>
Int to_int(const std::string& v, std::size_t line) {
    Int out{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        throw ConfigError(line, "expected an integer, got '" + v + "'");
    }
    return out;
}

bool to_bool(const std::string& v, std::size_t line) {
    if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
    if (v == "false" || v == "no" || v == "0" || v == "off") return false;
    throw ConfigError(line, "expected a boolean, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double snap(double q) { return std::round(q * 1e9) / 1e9; }

}  // namespace

RunConfig parse_run_config(std::istream& in, const std::filesystem::path& base_dir) {
    RunConfig cfg;
    std::optional<double> q_min, q_max, q_step;
    std::string line;
    std::size_t lineno = 0;
    const auto rel = [&](const std::string& p) {
        std::filesystem::path path(p);
        return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
    };
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(lineno, "expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (val.empty()) {
            throw ConfigError(lineno, "missing value for '" + key + "'");
        }
        auto& m = cfg.mfdfa;
        if (key == "input") {
            for (const auto& item : split_list(val)) cfg.inputs.push_back(rel(item).string());
        } else if (key == "output") {
            cfg.output_dir = rel(val);
        } else if (key == "seed") {
            cfg.master_seed = to_int<std::uint64_t>(val, lineno);
        } else if (key == "threads") {
            cfg.threads = to_int<std::size_t>(val, lineno);
        } else if (key == "poly_order") {
            m.poly_order = to_int<int>(val, lineno);
        } else if (key == "integration_order") {
            m.integration_order = to_int<int>(val, lineno);
        } else if (key == "q_min") {
            q_min = to_double(val, lineno);
        } else if (key == "q_max") {
            q_max = to_double(val, lineno);
        } else if (key == "q_step") {
            q_step = to_double(val, lineno);
        } else if (key == "q_grid") {
            m.q_grid.clear();
            for (const auto& item : split_list(val)) m.q_grid.push_back(to_double(item, lineno));
        } else if (key == "scales") {
            m.scale_grid.clear();
            for (const auto& item : split_list(val)) m.scale_grid.push_back(to_int<std::size_t>(item, lineno));
        } else if (key == "scale_count") {
            m.scale_count = to_int<std::size_t>(val, lineno);
        } else if (key == "fit_min") {
            m.fit_min = to_int<std::size_t>(val, lineno);
        } else if (key == "fit_max") {
            m.fit_max = to_int<std::size_t>(val, lineno);
        } else if (key == "n_shuffles") {
            m.n_shuffles = to_int<std::size_t>(val, lineno);
        } else if (key == "n_surrogates") {
            m.n_surrogates = to_int<std::size_t>(val, lineno);
        } else if (key == "window_scheme") {
            if (val == "cover") {
                m.window_scheme = WindowScheme::EvenCover;
            } else if (val == "forward_backward") {
                m.window_scheme = WindowScheme::ForwardBackward;
            } else {
                throw ConfigError(lineno, "window_scheme must be 'cover' or 'forward_backward'");
            }
        } else if (key == "carrier_threshold") {
            cfg.carrier.threshold_decades = to_double(val, lineno);
        } else if (key == "carrier_fit_min") {
            cfg.carrier.fit_min_bin = to_int<std::size_t>(val, lineno);
        } else if (key == "carrier_fit_max") {
            cfg.carrier.fit_max_bin = to_int<std::size_t>(val, lineno);
        } else if (key == "carrier_refits") {
            cfg.carrier.refit_passes = to_int<int>(val, lineno);
        } else if (key == "alpha") {
            cfg.alpha = to_double(val, lineno);
        } else if (key == "portmanteau_lags") {
            cfg.portmanteau_lags = to_int<int>(val, lineno);
        } else if (key == "portmanteau_factor") {
            if (val == "squared") {
                cfg.portmanteau_factor = PortmanteauFactor::Squared;
            } else if (val == "ljung_box") {
                cfg.portmanteau_factor = PortmanteauFactor::LjungBox;
            } else {
                throw ConfigError(lineno, "portmanteau_factor must be 'squared' or 'ljung_box'");
            }
        } else if (key == "truncate_wings") {
            cfg.truncate_wings = to_bool(val, lineno);
        } else if (key == "clusters") {
            cfg.clusters = to_int<std::size_t>(val, lineno);
        } else if (key == "plots") {
            cfg.write_plots = to_bool(val, lineno);
        } else {
            throw ConfigError(lineno, "unknown key '" + key + "'");
        }
    }
    if (q_min || q_max || q_step) {
        if (!cfg.mfdfa.q_grid.empty()) {
            throw std::invalid_argument("config: q_grid conflicts with q_min/q_max/q_step");
        }
        const double lo = q_min.value_or(-10.0);
        const double hi = q_max.value_or(10.0);
        const double step = q_step.value_or(0.5);
        if (!(step > 0.0) || hi <= lo) {
            throw std::invalid_argument("config: q range must satisfy q_min < q_max and q_step > 0");
        }
        const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
        for (long i = 0; i <= count; ++i) cfg.mfdfa.q_grid.push_back(snap(lo + step * static_cast<double>(i)));
    }
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
        throw std::invalid_argument("config: alpha must lie in (0, 1)");
    }
    if (cfg.portmanteau_lags < 1) {
        throw std::invalid_argument("config: portmanteau_lags must be >= 1");
    }
    if (cfg.clusters < 2) {
        throw std::invalid_argument("config: clusters must be >= 2");
    }
    if (cfg.mfdfa.integration_order < 1 || cfg.mfdfa.integration_order > 2) {
        throw std::invalid_argument("config: integration_order must be 1 or 2");
    }
    if (cfg.mfdfa.poly_order < 1) {
        throw std::invalid_argument("config: poly_order must be >= 1");
    }
    if (cfg.mfdfa.n_shuffles == 0 || cfg.mfdfa.n_surrogates == 0) {
        throw std::invalid_argument("config: ensemble sizes must be positive");
    }
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open config " + path.string());
    }
    return parse_run_config(in, path.parent_path());
}

std::vector<std::filesystem::path> resolve_inputs(const RunConfig& cfg) {
    std::set<std::filesystem::path> found;
    for (const auto& pattern : cfg.inputs) {
        if (pattern.find_first_of("*?[") == std::string::npos) {
            if (!std::filesystem::exists(pattern)) {
                throw std::invalid_argument("input not found: " + pattern);
            }
            found.insert(std::filesystem::path(pattern));
            continue;
        }
        glob_t g{};
        const int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
        if (rc == 0) {
            for (std::size_t i = 0; i < g.gl_pathc; ++i) found.insert(std::filesystem::path(g.gl_pathv[i]));
        }
        ::globfree(&g);
        if (rc != 0 && rc != GLOB_NOMATCH) {
            throw std::invalid_argument("cannot expand input pattern " + pattern);
        }
    }
    return {found.begin(), found.end()};
}

}  // namespace mfspec
