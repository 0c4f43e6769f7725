#include "docrep/pca.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <json.hpp>

#include "docrep/error.hpp"

namespace docrep {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index arg = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
  }
  if (v[arg] < 0) v = -v;
}

}  // namespace

PcaModel pca_fit(const FeatureMatrix& matrix, double variance_target) {
  const auto n = static_cast<Eigen::Index>(matrix.rows());
  const auto m = static_cast<Eigen::Index>(matrix.cols());
  if (n < 2) throw InputError("pca_fit needs at least 2 rows");
  if (m < 1) throw InputError("pca_fit needs at least 1 column");
  if (!(variance_target > 0.0 && variance_target <= 1.0)) {
    throw InputError("variance target must lie in (0, 1]");
  }
  matrix.check_finite();

  Eigen::Map<const RowMatrix> x(matrix.values().data(), n, m);
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const RowMatrix xc = x.rowwise() - mean;
  const double denom = static_cast<double>(n - 1);
  const double total = xc.squaredNorm() / denom;
  if (!(total > 0.0)) throw NumericError("degenerate data: total variance is zero");

  // Eigenpairs sorted by decreasing eigenvalue; columns of `vectors` are
  // unit-norm directions in feature space.
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  if (m <= n) {
    Eigen::MatrixXd cov = (xc.transpose() * xc) / denom;
    cov = 0.5 * (cov + cov.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    if (eig.info() != Eigen::Success) throw NumericError("covariance eigendecomposition failed");
    values = eig.eigenvalues().reverse();
    vectors = eig.eigenvectors().rowwise().reverse();
  } else {
    Eigen::MatrixXd gram = (xc * xc.transpose()) / denom;
    gram = 0.5 * (gram + gram.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    if (eig.info() != Eigen::Success) throw NumericError("Gram eigendecomposition failed");
    values = eig.eigenvalues().reverse();
    const Eigen::MatrixXd u = eig.eigenvectors().rowwise().reverse();
    vectors = xc.transpose() * u;
    for (Eigen::Index k = 0; k < vectors.cols(); ++k) {
      const double norm = vectors.col(k).norm();
      if (norm > 0) vectors.col(k) /= norm;
    }
  }

  const double floor = values[0] * 1e-12;
  PcaModel model;
  model.mean.assign(mean.data(), mean.data() + m);
  model.total_variance = total;
  double cumulative = 0.0;
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    if (values[k] <= floor) break;
    Eigen::VectorXd v = vectors.col(k);
    fix_sign(v);
    model.components.insert(model.components.end(), v.data(), v.data() + m);
    model.explained_variance.push_back(values[k]);
    model.explained_variance_ratio.push_back(values[k] / total);
    cumulative += values[k] / total;
    if (cumulative >= variance_target - 1e-12) break;
  }
  return model;
}

FeatureMatrix pca_transform(const PcaModel& model, const FeatureMatrix& matrix) {
  if (matrix.cols() != model.n_features()) {
    throw InputError("pca_transform: matrix has " + std::to_string(matrix.cols()) +
                     " columns, model expects " + std::to_string(model.n_features()));
  }
  const auto p = model.n_components();
  std::vector<std::string> names;
  for (std::size_t k = 0; k < p; ++k) names.push_back("pc" + std::to_string(k + 1));
  FeatureMatrix out(matrix.doc_ids(), std::move(names));
  std::vector<double> centered(model.n_features());
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    auto row = matrix.row(r);
    for (std::size_t c = 0; c < centered.size(); ++c) centered[c] = row[c] - model.mean[c];
    for (std::size_t k = 0; k < p; ++k) {
      const double* comp = model.component(k);
      double acc = 0.0;
      for (std::size_t c = 0; c < centered.size(); ++c) acc += centered[c] * comp[c];
      out.at(r, k) = acc;
    }
  }
  return out;
}

std::string to_json(const PcaModel& model) {
  nlohmann::json j;
  j["n_features"] = model.n_features();
  j["n_components"] = model.n_components();
  j["total_variance"] = model.total_variance;
  j["mean"] = model.mean;
  j["explained_variance"] = model.explained_variance;
  j["explained_variance_ratio"] = model.explained_variance_ratio;
  j["components"] = model.components;
  return j.dump();
}

PcaModel pca_model_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  PcaModel model;
  model.total_variance = j.at("total_variance").get<double>();
  model.mean = j.at("mean").get<std::vector<double>>();
  model.explained_variance = j.at("explained_variance").get<std::vector<double>>();
  model.explained_variance_ratio = j.at("explained_variance_ratio").get<std::vector<double>>();
  model.components = j.at("components").get<std::vector<double>>();
  if (model.components.size() != model.n_features() * model.n_components()) {
    throw InputError("PCA model JSON: component matrix has the wrong size");
  }
  return model;
}

}  // namespace docrep
