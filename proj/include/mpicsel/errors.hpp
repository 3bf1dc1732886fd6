#pragma once

#include <stdexcept>
#include <string>

namespace mpicsel {

/// Base class for all failures raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// X_j is numerically rank-deficient (a pivoted-QR diagonal fell below tolerance).
struct RankDeficient : Error {
  using Error::Error;
};

/// The residual covariance MLE failed its Cholesky factorization; typically
/// n - k_j < p or the responses are exactly collinear with the design.
struct SigmaNotPD : Error {
  using Error::Error;
};

/// A criterion is undefined for this (n, p, k_j), e.g. n <= p + k_j + 1.
struct DimensionGuard : Error {
  using Error::Error;
};

/// A posterior-mean weight was requested without the fit/data it needs.
struct MissingFit : Error {
  using Error::Error;
};

/// A candidate family would enumerate more than 2^24 models.
struct TooManyModels : Error {
  using Error::Error;
};

/// Every candidate in a selection run was skipped.
struct NoScoreableModel : Error {
  using Error::Error;
};

/// Lag-1 residual regression has (numerically) zero denominator.
struct DegenerateResiduals : Error {
  using Error::Error;
};

}  // namespace mpicsel
