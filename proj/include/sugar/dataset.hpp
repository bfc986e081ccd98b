#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sugar {

using Scalar = double;
using Index = Eigen::Index;

/// Point clouds are stored one point per row.
using PointMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using IndexVector = Eigen::Matrix<Index, Eigen::Dynamic, 1>;
using Labels = std::vector<int>;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical degeneracy: zero bandwidth, zero row sum, non-PSD covariance.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// N x D point set. Values are finite; the only way to obtain a matrix with
/// zero rows is `DataMatrix::empty`, used for empty generated sets.
class DataMatrix {
 public:
  DataMatrix() = default;
  explicit DataMatrix(PointMatrix values, std::vector<std::string> col_names = {});

  static DataMatrix empty(Index cols, std::vector<std::string> col_names = {});

  Index rows() const { return values_.rows(); }
  Index cols() const { return values_.cols(); }
  const PointMatrix& values() const { return values_; }
  auto row(Index i) const { return values_.row(i); }
  Scalar operator()(Index i, Index j) const { return values_(i, j); }

  const std::vector<std::string>& col_names() const { return col_names_; }
  bool has_col_names() const { return !col_names_.empty(); }

  /// Rows of `this` followed by rows of `other`; column names come from `this`.
  DataMatrix vstack(const DataMatrix& other) const;
  DataMatrix select_rows(const std::vector<Index>& idx) const;

 private:
  PointMatrix values_;
  std::vector<std::string> col_names_;
};

/// Points with integer class labels in [0, C), every class nonempty.
class LabeledDataset {
 public:
  LabeledDataset() = default;
  LabeledDataset(DataMatrix data, Labels labels);

  const DataMatrix& data() const { return data_; }
  const Labels& labels() const { return labels_; }
  int num_classes() const { return num_classes_; }
  Index size() const { return data_.rows(); }
  std::vector<Index> class_counts() const;

  LabeledDataset select_rows(const std::vector<Index>& idx) const;
  /// Appends points with the given labels. Class count may only stay or grow.
  LabeledDataset append(const DataMatrix& points, const Labels& labels) const;

 private:
  DataMatrix data_;
  Labels labels_;
  int num_classes_ = 0;
};

}  // namespace sugar
