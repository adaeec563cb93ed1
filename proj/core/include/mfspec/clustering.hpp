#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mfspec/series.hpp"

namespace mfspec {

/// Per-entity feature rows. Rectangular, finite, at least two rows.
struct FeatureMatrix {
    std::vector<std::string> labels;
    std::vector<std::string> feature_names;
    std::vector<std::vector<double>> rows;

    std::size_t row_count() const noexcept { return rows.size(); }
    std::size_t column_count() const noexcept { return feature_names.size(); }
    void validate() const;
};

/// Default feature columns: widths of the five spectra.
std::vector<std::string> default_width_features();

/// Column-wise z-score with the sample standard deviation.
FeatureMatrix normalize_features(const FeatureMatrix& m);

struct KMeansOptions {
    std::size_t restarts = 20;
    std::size_t max_iterations = 300;
    std::size_t threads = 1;
};

struct KMeansResult {
    std::vector<int> labels;
    std::vector<std::vector<double>> centroids;
    double inertia = 0.0;
    std::size_t best_restart = 0;
};

/// Lloyd iterations from k-means++ seeds, best inertia over the restarts
/// (ties go to the lower restart index). Restart r draws from rng.realization(r).
KMeansResult kmeans(const FeatureMatrix& m, std::size_t k, const RngSpec& rng, const KMeansOptions& opts = {});

/// Mean silhouette coefficient, Euclidean metric.
double silhouette(const FeatureMatrix& m, const std::vector<int>& labels);

}  // namespace mfspec
