#include "sugar/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace sugar {

DataMatrix::DataMatrix(PointMatrix values, std::vector<std::string> col_names)
    : values_(std::move(values)), col_names_(std::move(col_names)) {
  if (values_.rows() < 1 || values_.cols() < 1) {
    throw std::invalid_argument("DataMatrix requires at least one row and one column");
  }
  if (!values_.allFinite()) {
    for (Index i = 0; i < values_.rows(); ++i) {
      for (Index j = 0; j < values_.cols(); ++j) {
        if (!std::isfinite(values_(i, j))) {
          std::ostringstream msg;
          msg << "DataMatrix value at row " << i << " col " << j << " is not finite";
          throw std::invalid_argument(msg.str());
        }
      }
    }
  }
  if (!col_names_.empty() && static_cast<Index>(col_names_.size()) != values_.cols()) {
    throw std::invalid_argument("DataMatrix column-name count does not match column count");
  }
}

DataMatrix DataMatrix::empty(Index cols, std::vector<std::string> col_names) {
  if (cols < 1) throw std::invalid_argument("DataMatrix requires at least one column");
  if (!col_names.empty() && static_cast<Index>(col_names.size()) != cols) {
    throw std::invalid_argument("DataMatrix column-name count does not match column count");
  }
  DataMatrix m;
  m.values_.resize(0, cols);
  m.col_names_ = std::move(col_names);
  return m;
}

DataMatrix DataMatrix::vstack(const DataMatrix& other) const {
  if (other.cols() != cols()) throw std::invalid_argument("vstack: column count mismatch");
  PointMatrix out(rows() + other.rows(), cols());
  out.topRows(rows()) = values_;
  out.bottomRows(other.rows()) = other.values_;
  if (out.rows() == 0) return empty(cols(), col_names_);
  return DataMatrix(std::move(out), col_names_);
}

DataMatrix DataMatrix::select_rows(const std::vector<Index>& idx) const {
  if (idx.empty()) return empty(cols(), col_names_);
  PointMatrix out(static_cast<Index>(idx.size()), cols());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] < 0 || idx[k] >= rows()) throw std::out_of_range("select_rows: index out of range");
    out.row(static_cast<Index>(k)) = values_.row(idx[k]);
  }
  return DataMatrix(std::move(out), col_names_);
}

LabeledDataset::LabeledDataset(DataMatrix data, Labels labels)
    : data_(std::move(data)), labels_(std::move(labels)) {
  if (static_cast<Index>(labels_.size()) != data_.rows()) {
    throw std::invalid_argument("LabeledDataset: label count does not match row count");
  }
  if (labels_.empty()) throw std::invalid_argument("LabeledDataset: no points");
  const auto [lo, hi] = std::minmax_element(labels_.begin(), labels_.end());
  if (*lo < 0) throw std::invalid_argument("LabeledDataset: negative label");
  num_classes_ = *hi + 1;
  std::set<int> seen(labels_.begin(), labels_.end());
  if (static_cast<int>(seen.size()) != num_classes_) {
    throw std::invalid_argument("LabeledDataset: labels must cover [0, C) with every class nonempty");
  }
}

std::vector<Index> LabeledDataset::class_counts() const {
  std::vector<Index> counts(static_cast<std::size_t>(num_classes_), 0);
  for (int l : labels_) ++counts[static_cast<std::size_t>(l)];
  return counts;
}

LabeledDataset LabeledDataset::select_rows(const std::vector<Index>& idx) const {
  Labels labels;
  labels.reserve(idx.size());
  for (Index i : idx) labels.push_back(labels_.at(static_cast<std::size_t>(i)));
  return LabeledDataset(data_.select_rows(idx), std::move(labels));
}

LabeledDataset LabeledDataset::append(const DataMatrix& points, const Labels& labels) const {
  if (static_cast<Index>(labels.size()) != points.rows()) {
    throw std::invalid_argument("append: label count does not match row count");
  }
  Labels all = labels_;
  all.insert(all.end(), labels.begin(), labels.end());
  return LabeledDataset(data_.vstack(points), std::move(all));
}

}  // namespace sugar
