#include "mfspec/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "mfspec/parallel.hpp"

namespace mfspec {

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double t = a[i] - b[i];
        d += t * t;
    }
    return d;
}

struct Assignment {
    std::vector<int> labels;
    std::vector<double> dist;
    double inertia = 0.0;
};

Assignment assign(const FeatureMatrix& m, const std::vector<std::vector<double>>& centroids) {
    Assignment a;
    a.labels.resize(m.row_count());
    a.dist.resize(m.row_count());
    for (std::size_t i = 0; i < m.row_count(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        int label = 0;
        for (std::size_t c = 0; c < centroids.size(); ++c) {
            const double d = sq_dist(m.rows[i], centroids[c]);
            if (d < best) {
                best = d;
                label = static_cast<int>(c);
            }
        }
        a.labels[i] = label;
        a.dist[i] = best;
        a.inertia += best;
    }
    return a;
}

std::vector<std::vector<double>> seed_plus_plus(const FeatureMatrix& m, std::size_t k, Engine& engine) {
    const std::size_t n = m.row_count();
    std::vector<std::vector<double>> centroids;
    std::uniform_int_distribution<std::size_t> first(0, n - 1);
    centroids.push_back(m.rows[first(engine)]);
    std::vector<double> d2(n);
    while (centroids.size() < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : centroids) best = std::min(best, sq_dist(m.rows[i], c));
            d2[i] = best;
            total += best;
        }
        std::size_t pick = 0;
        if (total > 0.0) {
            std::uniform_real_distribution<double> u(0.0, total);
            double target = u(engine);
            pick = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                if (d2[i] <= 0.0) continue;
                target -= d2[i];
                if (target <= 0.0) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = first(engine);
        }
        centroids.push_back(m.rows[pick]);
    }
    return centroids;
}

KMeansResult lloyd(const FeatureMatrix& m, std::size_t k, Engine& engine, std::size_t max_iter) {
    const std::size_t dims = m.column_count();
    auto centroids = seed_plus_plus(m, k, engine);
    Assignment current = assign(m, centroids);
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        std::vector<std::vector<double>> next(k, std::vector<double>(dims, 0.0));
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < m.row_count(); ++i) {
            const auto c = static_cast<std::size_t>(current.labels[i]);
            ++counts[c];
            for (std::size_t j = 0; j < dims; ++j) next[c][j] += m.rows[i][j];
        }
        std::vector<bool> taken(m.row_count(), false);
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] > 0) {
                for (auto& v : next[c]) v /= static_cast<double>(counts[c]);
                continue;
            }
            // Empty cluster: reseed from the point farthest from its centroid.
            std::size_t far = 0;
            double worst = -1.0;
            for (std::size_t i = 0; i < m.row_count(); ++i) {
                if (!taken[i] && current.dist[i] > worst) {
                    worst = current.dist[i];
                    far = i;
                }
            }
            taken[far] = true;
            next[c] = m.rows[far];
        }
        Assignment updated = assign(m, next);
        if (updated.inertia > current.inertia * (1.0 + 1e-12) + 1e-300) {
            throw std::logic_error("k-means inertia increased");
        }
        const bool converged = updated.labels == current.labels;
        centroids = std::move(next);
        current = std::move(updated);
        if (converged) {
            break;
        }
    }
    KMeansResult r;
    r.labels = std::move(current.labels);
    r.centroids = std::move(centroids);
    r.inertia = current.inertia;
    return r;
}

}  // namespace

void FeatureMatrix::validate() const {
    if (rows.size() < 2) {
        throw AnalysisError("feature matrix needs at least 2 rows");
    }
    if (labels.size() != rows.size()) {
        throw AnalysisError("feature matrix labels do not match rows");
    }
    for (const auto& r : rows) {
        if (r.size() != feature_names.size()) {
            throw AnalysisError("feature matrix is not rectangular");
        }
        for (double v : r) {
            if (!std::isfinite(v)) {
                throw AnalysisError("feature matrix has non-finite entries");
            }
        }
    }
}

std::vector<std::string> default_width_features() {
    return {"d_pi", "d_pi_shuf", "d_pi_sur", "d_pi_cor", "d_pi_dist"};
}

FeatureMatrix normalize_features(const FeatureMatrix& m) {
    m.validate();
    FeatureMatrix out = m;
    const double n = static_cast<double>(m.row_count());
    for (std::size_t j = 0; j < m.column_count(); ++j) {
        double mean = 0.0;
        for (const auto& r : m.rows) mean += r[j];
        mean /= n;
        double ss = 0.0;
        for (const auto& r : m.rows) ss += (r[j] - mean) * (r[j] - mean);
        const double sd = std::sqrt(ss / (n - 1.0));
        if (!(sd > 0.0)) {
            throw AnalysisError("feature column '" + m.feature_names[j] + "' has zero spread");
        }
        for (auto& r : out.rows) r[j] = (r[j] - mean) / sd;
    }
    return out;
}

KMeansResult kmeans(const FeatureMatrix& m, std::size_t k, const RngSpec& rng, const KMeansOptions& opts) {
    m.validate();
    if (k < 2 || k > m.row_count()) {
        throw AnalysisError("cluster count must satisfy 2 <= k <= rows");
    }
    const std::size_t restarts = std::max<std::size_t>(opts.restarts, 1);
    std::vector<KMeansResult> runs(restarts);
    parallel_for(restarts, opts.threads, [&](std::size_t r) {
        auto engine = make_engine(rng.realization(rng.realization_index + r));
        runs[r] = lloyd(m, k, engine, opts.max_iterations);
        runs[r].best_restart = r;
    });
    std::size_t best = 0;
    for (std::size_t r = 1; r < restarts; ++r) {
        if (runs[r].inertia < runs[best].inertia) best = r;
    }
    return runs[best];
}

double silhouette(const FeatureMatrix& m, const std::vector<int>& labels) {
    m.validate();
    if (labels.size() != m.row_count()) {
        throw AnalysisError("label count does not match rows");
    }
    std::map<int, std::size_t> sizes;
    for (int l : labels) ++sizes[l];
    if (sizes.size() < 2) {
        throw AnalysisError("silhouette needs at least 2 clusters");
    }
    if (std::all_of(sizes.begin(), sizes.end(), [](const auto& kv) { return kv.second == 1; })) {
        throw AnalysisError("silhouette undefined for singleton-only clustering");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < m.row_count(); ++i) {
        std::map<int, double> sum;
        for (std::size_t j = 0; j < m.row_count(); ++j) {
            if (i != j) sum[labels[j]] += std::sqrt(sq_dist(m.rows[i], m.rows[j]));
        }
        const int own = labels[i];
        if (sizes[own] == 1) {
            continue;  // s(i) = 0 for singletons
        }
        const double a = sum[own] / static_cast<double>(sizes[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (const auto& [label, count] : sizes) {
            if (label != own) b = std::min(b, sum[label] / static_cast<double>(count));
        }
        const double denom = std::max(a, b);
        total += denom > 0.0 ? (b - a) / denom : 0.0;
    }
    return total / static_cast<double>(m.row_count());
}

}  // namespace mfspec
