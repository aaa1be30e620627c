#include "sparsedrift/masked_matrix.hpp"

#include <cmath>
#include <cstring>
#include <limits>

namespace sparsedrift {

namespace {
constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
}

MaskedMatrix::MaskedMatrix(Eigen::Index rows, Eigen::Index cols)
    : values_(Eigen::MatrixXd::Constant(rows, cols, kMissing)),
      mask_(ObservedMask::Zero(rows, cols)) {}

MaskedMatrix::MaskedMatrix(Eigen::MatrixXd values)
    : values_(std::move(values)), mask_(values_.rows(), values_.cols()) {
  for (Eigen::Index j = 0; j < values_.cols(); ++j)
    for (Eigen::Index i = 0; i < values_.rows(); ++i)
      mask_(i, j) = std::isnan(values_(i, j)) ? 0 : 1;
}

void MaskedMatrix::set(Eigen::Index i, Eigen::Index j, double value) {
  values_(i, j) = value;
  mask_(i, j) = 1;
}

void MaskedMatrix::set_missing(Eigen::Index i, Eigen::Index j) {
  values_(i, j) = kMissing;
  mask_(i, j) = 0;
}

Eigen::Index MaskedMatrix::missing_count() const {
  return mask_.size() - mask_.cast<Eigen::Index>().sum();
}

Eigen::Index MaskedMatrix::missing_count(Eigen::Index col) const {
  return rows() - mask_.col(col).cast<Eigen::Index>().sum();
}

double MaskedMatrix::sparsity(Eigen::Index col) const {
  if (rows() == 0) return 0.0;
  return static_cast<double>(missing_count(col)) / static_cast<double>(rows());
}

std::vector<double> MaskedMatrix::observed_column(Eigen::Index col) const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(rows()));
  for (Eigen::Index i = 0; i < rows(); ++i)
    if (observed(i, col)) out.push_back(values_(i, col));
  return out;
}

std::vector<Eigen::Index> MaskedMatrix::complete_rows() const {
  std::vector<Eigen::Index> out;
  for (Eigen::Index i = 0; i < rows(); ++i)
    if ((mask_.row(i).array() != 0).all()) out.push_back(i);
  return out;
}

MaskedMatrix MaskedMatrix::select_rows(const std::vector<Eigen::Index>& rows) const {
  MaskedMatrix out;
  out.values_.resize(static_cast<Eigen::Index>(rows.size()), cols());
  out.mask_.resize(static_cast<Eigen::Index>(rows.size()), cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.values_.row(static_cast<Eigen::Index>(r)) = values_.row(rows[r]);
    out.mask_.row(static_cast<Eigen::Index>(r)) = mask_.row(rows[r]);
  }
  return out;
}

bool MaskedMatrix::operator==(const MaskedMatrix& other) const {
  if (rows() != other.rows() || cols() != other.cols()) return false;
  if (mask_ != other.mask_) return false;
  // Bitwise on observed cells; missing cells are NaN on both sides by construction.
  for (Eigen::Index j = 0; j < cols(); ++j)
    for (Eigen::Index i = 0; i < rows(); ++i)
      if (observed(i, j) &&
          std::memcmp(&values_(i, j), &other.values_(i, j), sizeof(double)) != 0)
        return false;
  return true;
}

}  // namespace sparsedrift
