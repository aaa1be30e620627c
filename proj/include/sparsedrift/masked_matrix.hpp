#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace sparsedrift {

using ObservedMask = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Dense numeric matrix with an explicit per-cell observation mask.
///
/// mask(i, j) == 1 means the cell is observed, 0 means missing. Missing cells
/// hold NaN in values() so an accidental read is loud.
class MaskedMatrix {
 public:
  MaskedMatrix() = default;
  MaskedMatrix(Eigen::Index rows, Eigen::Index cols);
  /// Fully observed matrix; NaN entries are treated as missing.
  explicit MaskedMatrix(Eigen::MatrixXd values);

  Eigen::Index rows() const { return values_.rows(); }
  Eigen::Index cols() const { return values_.cols(); }

  const Eigen::MatrixXd& values() const { return values_; }
  const ObservedMask& mask() const { return mask_; }

  bool observed(Eigen::Index i, Eigen::Index j) const { return mask_(i, j) != 0; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return values_(i, j); }

  void set(Eigen::Index i, Eigen::Index j, double value);
  void set_missing(Eigen::Index i, Eigen::Index j);

  Eigen::Index missing_count() const;
  Eigen::Index missing_count(Eigen::Index col) const;
  /// Fraction of missing cells in a column.
  double sparsity(Eigen::Index col) const;
  bool complete() const { return missing_count() == 0; }

  /// Observed entries of one column, in row order.
  std::vector<double> observed_column(Eigen::Index col) const;
  /// Indices of rows with no missing cell.
  std::vector<Eigen::Index> complete_rows() const;
  MaskedMatrix select_rows(const std::vector<Eigen::Index>& rows) const;

  bool operator==(const MaskedMatrix& other) const;

 private:
  Eigen::MatrixXd values_;
  ObservedMask mask_;
};

}  // namespace sparsedrift
