#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

#include "mpicsel/dataset.hpp"
#include "mpicsel/errors.hpp"

namespace mpicsel {

/// MLE fit of one candidate model together with the cached scalars every
/// information criterion consumes.
template <class Scalar>
struct FitResult {
  Matrix<Scalar> theta_hat;  ///< k_j x p coefficient MLE
  Matrix<Scalar> sigma_hat;  ///< p x p covariance MLE (divisor n), symmetric PD
  Scalar logdet_sigma = 0;   ///< log|sigma_hat|
  Scalar logdet_gram = 0;    ///< log|X_j^T X_j|
  Scalar neg2loglik = 0;     ///< n*logdet_sigma + n*p*(log 2pi + 1)
  Index n = 0, p = 0, k_j = 0;
};

using FitResultd = FitResult<double>;

namespace detail {

/// Relative pivot tolerance for declaring X_j rank-deficient.
inline constexpr double kRankTol = 1e-10;

/// Residual variance below this fraction of the mean-square response is
/// roundoff from an exact fit, not a usable covariance.
inline constexpr double kExactFitTol = 1e-24;

/// Column-pivoted QR of X_j with the rank test applied: every |R_ii| must
/// stay above kRankTol * |R_00| (pivoting makes |R_00| the largest).
template <class Scalar>
Eigen::ColPivHouseholderQR<Matrix<Scalar>> checked_qr(const Matrix<Scalar>& Xj,
                                                      const ModelIndex& j) {
  Eigen::ColPivHouseholderQR<Matrix<Scalar>> qr(Xj);
  const auto rdiag = qr.matrixR().diagonal().head(Xj.cols());
  const Scalar rmax = std::abs(rdiag[0]);
  if (!(rmax > Scalar(0)) || rdiag.array().abs().minCoeff() < Scalar(kRankTol) * rmax) {
    throw RankDeficient("model {" + j.to_string() + "}: X_j numerically rank-deficient");
  }
  return qr;
}

template <class Scalar>
Scalar logdet_from_qr(const Eigen::ColPivHouseholderQR<Matrix<Scalar>>& qr, Index k) {
  // log|X^T X| = 2 * sum log|R_ii|; the pivot permutation has |det| = 1.
  return Scalar(2) * qr.matrixR().diagonal().head(k).array().abs().log().sum();
}

/// Cholesky of a symmetric matrix that must be PD; throws SigmaNotPD otherwise.
template <class Scalar>
Eigen::LLT<Matrix<Scalar>> checked_llt(const Matrix<Scalar>& S, const ModelIndex& j) {
  Eigen::LLT<Matrix<Scalar>> llt(S);
  if (llt.info() != Eigen::Success ||
      !(llt.matrixLLT().diagonal().array() > Scalar(0)).all()) {
    throw SigmaNotPD("model {" + j.to_string() + "}: covariance MLE not positive definite");
  }
  return llt;
}

template <class Scalar>
Scalar logdet_from_llt(const Eigen::LLT<Matrix<Scalar>>& llt) {
  return Scalar(2) * llt.matrixLLT().diagonal().array().log().sum();
}

}  // namespace detail

/// Maximum-likelihood fit of Y on X_j via column-pivoted QR; the covariance
/// MLE is formed from explicit residuals with divisor n.
template <class Scalar>
FitResult<Scalar> fit(const Dataset<Scalar>& data, const ModelIndex& j) {
  const Matrix<Scalar> Xj = data.design_columns(j);
  const auto qr = detail::checked_qr<Scalar>(Xj, j);

  FitResult<Scalar> out;
  out.n = data.n();
  out.p = data.p();
  out.k_j = j.k();
  out.theta_hat = qr.solve(data.Y());

  Matrix<Scalar> resid = data.Y() - Xj * out.theta_hat;
  Matrix<Scalar> sigma = (resid.transpose() * resid) / Scalar(out.n);
  sigma = ((sigma + sigma.transpose()) / Scalar(2)).eval();  // exact symmetry
  const Scalar y_scale = data.Y().squaredNorm() / Scalar(out.n * out.p);
  if (!(sigma.diagonal().maxCoeff() > Scalar(detail::kExactFitTol) * y_scale)) {
    throw SigmaNotPD("model {" + j.to_string() + "}: residuals are exactly zero");
  }
  const auto llt = detail::checked_llt<Scalar>(sigma, j);

  out.sigma_hat = std::move(sigma);
  out.logdet_sigma = detail::logdet_from_llt(llt);
  out.logdet_gram = detail::logdet_from_qr(qr, j.k());
  out.neg2loglik = Scalar(out.n) * out.logdet_sigma +
                   Scalar(out.n) * Scalar(out.p) * (std::log(Scalar(2) * std::numbers::pi_v<Scalar>) + Scalar(1));
  return out;
}

/// log|I_n + X_j X_j^T|, computed as log|I_{k_j} + X_j^T X_j| by the matrix
/// determinant lemma; the n x n matrix is never formed.
template <class Scalar>
Scalar logdet_capacitance(const Dataset<Scalar>& data, const ModelIndex& j) {
  const Matrix<Scalar> Xj = data.design_columns(j);
  detail::checked_qr<Scalar>(Xj, j);
  Matrix<Scalar> G = Xj.transpose() * Xj;
  G.diagonal().array() += Scalar(1);
  Eigen::LLT<Matrix<Scalar>> llt(G);  // I + X^T X is PD for any X
  return detail::logdet_from_llt(llt);
}

/// tr(sigma_hat^{-1} Y^T (I_n + X_j X_j^T)^{-1} Y) via the Woodbury identity,
/// so only k_j x k_j systems are ever solved.
template <class Scalar>
Scalar quadform_smoothed(const Dataset<Scalar>& data, const ModelIndex& j,
                         const FitResult<Scalar>& fitres) {
  const Matrix<Scalar> Xj = data.design_columns(j);
  const Matrix<Scalar> C = Xj.transpose() * data.Y();  // k_j x p
  Matrix<Scalar> G = Xj.transpose() * Xj;
  G.diagonal().array() += Scalar(1);
  // (I + XX^T)^{-1} = I - X (I + X^T X)^{-1} X^T
  Matrix<Scalar> M = data.Y().transpose() * data.Y() - C.transpose() * G.llt().solve(C);
  const auto llt = detail::checked_llt<Scalar>(fitres.sigma_hat, j);
  return llt.solve(M).trace();
}

}  // namespace mpicsel
