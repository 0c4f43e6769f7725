#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "docrep/feature_matrix.hpp"

namespace docrep {

/// Principal components of a mean-centered (unscaled) feature matrix.
struct PcaModel {
  std::vector<double> mean;
  /// Row-major n_components × n_features, orthonormal rows.
  std::vector<double> components;
  /// Sample-covariance eigenvalues of the retained components, non-increasing.
  std::vector<double> explained_variance;
  std::vector<double> explained_variance_ratio;
  double total_variance = 0.0;

  std::size_t n_features() const { return mean.size(); }
  std::size_t n_components() const { return explained_variance.size(); }
  const double* component(std::size_t k) const { return components.data() + k * n_features(); }

  bool operator==(const PcaModel&) const = default;
};

/// Keeps the smallest number of leading components whose cumulative
/// explained-variance ratio reaches `variance_target`. Uses the covariance
/// matrix when features ≤ rows and the Gram matrix otherwise. Each component's
/// largest-magnitude coordinate is made positive.
PcaModel pca_fit(const FeatureMatrix& matrix, double variance_target = 0.80);

/// Projects centered rows on the components; columns are named pc1..pcp.
FeatureMatrix pca_transform(const PcaModel& model, const FeatureMatrix& matrix);

std::string to_json(const PcaModel& model);
PcaModel pca_model_from_json(const std::string& text);

}  // namespace docrep
