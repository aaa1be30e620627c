#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "sparsedrift/masked_matrix.hpp"
#include "sparsedrift/types.hpp"

namespace sparsedrift {

enum class DistributionFamily { normal, uniform, chi_squared, cauchy, binomial, multivariate_normal };

std::string to_string(DistributionFamily f);
DistributionFamily parse_distribution_family(std::string_view text);

struct Normal {
  double mean = 0.0;
  double stddev = 1.0;
};
struct Uniform {
  double lower = 0.0;
  double upper = 1.0;
};
struct ChiSquared {
  double dof = 1.0;
};
struct Cauchy {
  double location = 0.0;
  double scale = 1.0;
};
struct Binomial {
  std::uint64_t trials = 1;
  double probability = 0.5;
};
struct MultivariateNormal {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

using DistributionSpec =
    std::variant<Normal, Uniform, ChiSquared, Cauchy, Binomial, MultivariateNormal>;

DistributionFamily family_of(const DistributionSpec& spec);
/// Throws ParameterError when the parameters violate the family's domain.
void validate(const DistributionSpec& spec);

/// n draws; one column per dimension (a single column for univariate families).
Eigen::MatrixXd sample_distribution(const DistributionSpec& spec, Eigen::Index n,
                                    std::uint64_t seed);

/// Drift positions and widths. Abrupt drifts have width 0.
struct DriftSpec {
  std::vector<std::size_t> positions;
  std::vector<std::size_t> widths;
  DriftKind kind = DriftKind::abrupt;

  std::size_t width(std::size_t k) const { return widths.empty() ? 0 : widths[k]; }
  /// Throws SpecError unless positions increase strictly, each interval fits in
  /// the stream and consecutive intervals are disjoint.
  void validate(std::size_t stream_length) const;
  bool operator==(const DriftSpec&) const = default;
};

/// Instances are the rows of `features`; the row index is the instance index.
struct LabeledStream {
  MaskedMatrix features;
  std::vector<std::uint8_t> labels;
  DriftSpec drift;

  std::size_t size() const { return labels.size(); }
};

/// Binary classification base stream: balanced labels, Gaussian classes with
/// equicorrelated features. Class means sit at offset +/- separation/2 with the
/// sign alternating across features.
struct ClassificationStreamSpec {
  std::size_t instances = 10000;
  Eigen::Index features = 4;
  double separation = 2.0;
  double correlation = 0.0;
  double offset = 5.0;
  double stddev = 1.0;
};

LabeledStream make_classification_stream(const ClassificationStreamSpec& spec,
                                         std::uint64_t seed);

/// Flip labels to realise the drifts in `drift`. Each drift toggles the active
/// concept; inside a gradual interval [p, p + w) instance i takes the new
/// concept with probability (i - p + 1/2) / w.
LabeledStream make_drift_stream(const LabeledStream& base, const DriftSpec& drift,
                                std::uint64_t seed);

struct SparsityPlan {
  Mechanism mechanism = Mechanism::mcar;
  double rate = 0.0;
  std::vector<Eigen::Index> targets;
  std::optional<Eigen::Index> driver;
  std::uint64_t seed = 0;
};

/// Mask target cells according to the plan.
///
/// MCAR masks each cell independently with probability `rate`. MAR masks row i
/// in every target when the driver value is among the top round(rate * n)
/// observed driver values. MNAR does the same per column using the cell's own
/// value. Ties rank by row index. Observed cells are never altered and masked
/// cells are never unmasked.
MaskedMatrix inject_sparsity(const MaskedMatrix& data, const SparsityPlan& plan);

/// Random permutation of instances. Drift annotations are dropped, since the
/// permutation destroys them.
LabeledStream shuffle_instances(const LabeledStream& stream, std::uint64_t seed);

}  // namespace sparsedrift
