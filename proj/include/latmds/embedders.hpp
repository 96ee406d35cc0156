#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <utility>

#include "latmds/error.hpp"
#include "latmds/geometry.hpp"

namespace latmds {

/// Result of classical scaling. `eigenvalues` holds the top-p spectrum of
/// the doubly centered Gram surrogate (descending, before clamping);
/// `residual` is the spectral mass not representable in R^p: the absolute
/// values of clamped negative top-p eigenvalues plus all unused ones.
/// `eigengap_tie` flags a (near-)tie between the p-th and (p+1)-th
/// eigenvalue, where the embedding is only determined up to that choice.
struct ScalingOutput {
  Configuration config;
  Eigen::VectorXd eigenvalues;
  double residual = 0.0;
  bool eigengap_tie = false;
};

/// Torgerson/Gower classical scaling: B = -1/2 J d2 J with J the centering
/// projector; embed with the top p eigenpairs, clamping negative eigenvalues
/// to zero. Axis signs follow a fixed convention (first nonzero coordinate
/// of each axis is positive), so equal inputs give bit-identical outputs.
inline ScalingOutput classical_scaling(const Eigen::MatrixXd& d2, int p) {
  const int m = static_cast<int>(d2.rows());
  detail::require(d2.cols() == m, errc::invalid_input,
                  "dissimilarity matrix must be square");
  detail::require(p >= 1 && m >= p + 1, errc::invalid_input,
                  "need m >= p+1 points");
  detail::require((d2 - d2.transpose()).cwiseAbs().maxCoeff() <= 1e-12,
                  errc::invalid_input, "dissimilarity matrix not symmetric");
  detail::require(d2.diagonal().cwiseAbs().maxCoeff() <= 1e-12,
                  errc::invalid_input, "dissimilarity diagonal not zero");

  const Eigen::MatrixXd j =
      Eigen::MatrixXd::Identity(m, m) - Eigen::MatrixXd::Constant(m, m, 1.0 / m);
  Eigen::MatrixXd b = -0.5 * j * d2 * j;
  b = 0.5 * (b + b.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b);
  detail::require(es.info() == Eigen::Success, errc::numerical_failure,
                  "eigendecomposition failed");
  const Eigen::VectorXd& lam_asc = es.eigenvalues();  // ascending

  Eigen::VectorXd top(p);
  Eigen::MatrixXd coords(m, p);
  double residual = 0.0;
  for (int k = 0; k < p; ++k) {
    const int src = m - 1 - k;
    const double lam = lam_asc(src);
    top(k) = lam;
    const double clamped = lam > 0.0 ? lam : 0.0;
    if (lam < 0.0) residual += -lam;
    coords.col(k) = es.eigenvectors().col(src) * std::sqrt(clamped);
  }
  for (int k = 0; k < m - p; ++k) residual += std::abs(lam_asc(k));

  for (int k = 0; k < p; ++k) {  // sign convention per axis
    for (int i = 0; i < m; ++i) {
      if (coords(i, k) != 0.0) {
        if (coords(i, k) < 0.0) coords.col(k) *= -1.0;
        break;
      }
    }
  }

  bool tie = false;
  if (m > p) {
    const double scale = std::max(std::abs(lam_asc(m - 1)), 1.0);
    tie = std::abs(top(p - 1) - lam_asc(m - 1 - p)) <= 1e-12 * scale;
  }
  return ScalingOutput{Configuration(std::move(coords)), std::move(top),
                       residual, tie};
}

inline constexpr double kLaterationCondTol = 1e-10;

/// Gower's classical lateration (the landmark-MDS placement step): given
/// landmark positions y_1..y_m and squared dissimilarities delta_i from an
/// unknown point, returns y_hat = y_bar + 1/2 L^+ (delta_bar - delta) with
/// L the centered landmark matrix and delta_bar_i the mean of ||y_i - y_j||^2
/// over j. Exact when the inputs are realizable.
inline Eigen::VectorXd classical_lateration(
    const Configuration& landmarks, const Eigen::VectorXd& d2_to_landmarks) {
  const int m = landmarks.size();
  const int p = landmarks.dim();
  detail::require(m >= p + 1, errc::invalid_input,
                  "need at least p+1 landmarks");
  detail::require(d2_to_landmarks.size() == m, errc::invalid_input,
                  "dissimilarity count must match landmark count");
  detail::require(d2_to_landmarks.allFinite(), errc::invalid_input,
                  "dissimilarities must be finite");

  const Eigen::RowVectorXd mean = landmarks.centroid();
  const Eigen::MatrixXd centered = landmarks.points().rowwise() - mean;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      centered, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  detail::require(sv(0) > 0.0 && sv(p - 1) / sv(0) >= kLaterationCondTol,
                  errc::degenerate_landmarks,
                  "landmark set has (numerically) zero width");

  // delta_bar_i = row mean of the landmark self-dissimilarity matrix
  const Eigen::VectorXd sq_norms = centered.rowwise().squaredNorm();
  const double mean_sq = sq_norms.mean();
  // ||y_i - y_j||^2 averaged over j = ||y_i - ybar||^2 + mean_j ||y_j - ybar||^2
  const Eigen::VectorXd delta_bar = sq_norms.array() + mean_sq;

  const Eigen::VectorXd rhs = 0.5 * (delta_bar - d2_to_landmarks);
  const Eigen::VectorXd sol =
      svd.matrixV() * sv.cwiseInverse().asDiagonal() *
      (svd.matrixU().transpose() * rhs);
  return mean.transpose() + sol;
}

}  // namespace latmds
