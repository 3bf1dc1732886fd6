#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "mpicsel/errors.hpp"

namespace mpicsel {

using Index = Eigen::Index;

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// A candidate subset of design columns. Indices are stored sorted ascending;
/// equality, ordering and hashing all act on the sorted form.
class ModelIndex {
 public:
  explicit ModelIndex(std::vector<int> indices) : indices_(std::move(indices)) {
    if (indices_.empty()) {
      throw std::invalid_argument("ModelIndex: at least one column index required");
    }
    std::sort(indices_.begin(), indices_.end());
    if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
      throw std::invalid_argument("ModelIndex: duplicate column index");
    }
    if (indices_.front() < 0) {
      throw std::invalid_argument("ModelIndex: negative column index");
    }
  }

  /// {0, 1, ..., count-1}
  static ModelIndex first(int count) {
    std::vector<int> idx(static_cast<std::size_t>(count));
    std::iota(idx.begin(), idx.end(), 0);
    return ModelIndex(std::move(idx));
  }

  const std::vector<int>& indices() const { return indices_; }
  int k() const { return static_cast<int>(indices_.size()); }
  int max_index() const { return indices_.back(); }

  bool contains(int col) const {
    return std::binary_search(indices_.begin(), indices_.end(), col);
  }

  /// true when every column of `other` is also in *this.
  bool contains(const ModelIndex& other) const {
    return std::includes(indices_.begin(), indices_.end(),
                         other.indices_.begin(), other.indices_.end());
  }

  friend bool operator==(const ModelIndex& a, const ModelIndex& b) {
    return a.indices_ == b.indices_;
  }
  friend bool operator!=(const ModelIndex& a, const ModelIndex& b) { return !(a == b); }
  /// Lexicographic on the sorted index lists.
  friend bool operator<(const ModelIndex& a, const ModelIndex& b) {
    return a.indices_ < b.indices_;
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < indices_.size(); ++i) {
      if (i) s += '+';
      s += std::to_string(indices_[i]);
    }
    return s;
  }

 private:
  std::vector<int> indices_;
};

/// Orders models by cardinality first, then lexicographically on indices.
/// This is the canonical candidate order used everywhere downstream.
inline bool model_order(const ModelIndex& a, const ModelIndex& b) {
  if (a.k() != b.k()) return a.k() < b.k();
  return a < b;
}

/// Response matrix Y (n x p) and design matrix X (n x k) with column labels.
template <class Scalar>
class Dataset {
 public:
  Dataset(Matrix<Scalar> Y, Matrix<Scalar> X, std::vector<std::string> col_names = {})
      : Y_(std::move(Y)), X_(std::move(X)), col_names_(std::move(col_names)) {
    if (Y_.rows() != X_.rows()) {
      throw std::invalid_argument("Dataset: Y and X row counts differ");
    }
    if (Y_.cols() < 1 || X_.cols() < 1) {
      throw std::invalid_argument("Dataset: Y and X need at least one column");
    }
    if (X_.rows() <= X_.cols()) {
      throw std::invalid_argument("Dataset: requires n > k");
    }
    if (!Y_.allFinite() || !X_.allFinite()) {
      throw std::invalid_argument("Dataset: non-finite entry in Y or X");
    }
    if (col_names_.empty()) {
      col_names_.reserve(static_cast<std::size_t>(X_.cols()));
      for (Index c = 0; c < X_.cols(); ++c) col_names_.push_back("x" + std::to_string(c));
    } else if (static_cast<Index>(col_names_.size()) != X_.cols()) {
      throw std::invalid_argument("Dataset: col_names size differs from k");
    }
  }

  const Matrix<Scalar>& Y() const { return Y_; }
  const Matrix<Scalar>& X() const { return X_; }
  const std::vector<std::string>& col_names() const { return col_names_; }

  Index n() const { return Y_.rows(); }
  Index p() const { return Y_.cols(); }
  Index k() const { return X_.cols(); }

  /// X_j: the design columns selected by `j`.
  Matrix<Scalar> design_columns(const ModelIndex& j) const {
    if (j.max_index() >= k()) {
      throw std::invalid_argument("ModelIndex " + j.to_string() + " out of range for k=" +
                                  std::to_string(k()));
    }
    Matrix<Scalar> Xj(n(), j.k());
    for (int c = 0; c < j.k(); ++c) Xj.col(c) = X_.col(j.indices()[static_cast<std::size_t>(c)]);
    return Xj;
  }

 private:
  Matrix<Scalar> Y_;
  Matrix<Scalar> X_;
  std::vector<std::string> col_names_;
};

using Datasetd = Dataset<double>;

}  // namespace mpicsel
