#include "sparsedrift/streamgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sparsedrift/errors.hpp"
#include "sparsedrift/random.hpp"

namespace sparsedrift {

namespace {

// Each generator derives its engine from (seed, domain) so that one seed passed
// to several generators still yields independent streams.
enum SeedDomain : std::uint64_t { sample = 101, classification, drift, sparsity, shuffle };

}  // namespace

std::string to_string(DistributionFamily f) {
  switch (f) {
    case DistributionFamily::normal: return "normal";
    case DistributionFamily::uniform: return "uniform";
    case DistributionFamily::chi_squared: return "chi_squared";
    case DistributionFamily::cauchy: return "cauchy";
    case DistributionFamily::binomial: return "binomial";
    case DistributionFamily::multivariate_normal: return "multivariate_normal";
  }
  return "?";
}

DistributionFamily parse_distribution_family(std::string_view text) {
  for (auto f : {DistributionFamily::normal, DistributionFamily::uniform,
                 DistributionFamily::chi_squared, DistributionFamily::cauchy,
                 DistributionFamily::binomial, DistributionFamily::multivariate_normal})
    if (to_string(f) == text) return f;
  throw ConfigError("unknown distribution family '" + std::string(text) + "'");
}

DistributionFamily family_of(const DistributionSpec& spec) {
  return static_cast<DistributionFamily>(spec.index());
}

namespace {

struct Validator {
  void operator()(const Normal& d) const {
    if (!(d.stddev > 0.0) || !std::isfinite(d.mean))
      throw ParameterError("normal: stddev must be > 0");
  }
  void operator()(const Uniform& d) const {
    if (!(d.lower < d.upper)) throw ParameterError("uniform: lower must be < upper");
  }
  void operator()(const ChiSquared& d) const {
    if (!(d.dof >= 1.0)) throw ParameterError("chi_squared: dof must be >= 1");
  }
  void operator()(const Cauchy& d) const {
    if (!(d.scale > 0.0)) throw ParameterError("cauchy: scale must be > 0");
  }
  void operator()(const Binomial& d) const {
    if (!(d.probability >= 0.0 && d.probability <= 1.0))
      throw ParameterError("binomial: probability must be in [0,1]");
  }
  void operator()(const MultivariateNormal& d) const {
    const auto k = d.mean.size();
    if (k == 0) throw ParameterError("multivariate_normal: empty mean");
    if (d.covariance.rows() != k || d.covariance.cols() != k)
      throw ParameterError("multivariate_normal: covariance shape mismatch");
    if (!d.covariance.isApprox(d.covariance.transpose(), 1e-12))
      throw ParameterError("multivariate_normal: covariance not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(d.covariance);
    const double scale = std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
    if (eig.eigenvalues().minCoeff() < -1e-10 * scale)
      throw ParameterError("multivariate_normal: covariance not positive semi-definite");
  }
};

// Symmetric square-root factor A with A * A^T = covariance; tolerates PSD input.
Eigen::MatrixXd covariance_factor(const Eigen::MatrixXd& covariance) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(covariance);
  const Eigen::VectorXd root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * root.asDiagonal();
}

}  // namespace

void validate(const DistributionSpec& spec) { std::visit(Validator{}, spec); }

Eigen::MatrixXd sample_distribution(const DistributionSpec& spec, Eigen::Index n,
                                    std::uint64_t seed) {
  if (n < 1) throw ParameterError("sample_distribution: n must be >= 1");
  validate(spec);
  Rng rng(mix_seed(seed, SeedDomain::sample));
  if (const auto* mvn = std::get_if<MultivariateNormal>(&spec)) {
    const Eigen::MatrixXd factor = covariance_factor(mvn->covariance);
    const Eigen::Index k = mvn->mean.size();
    Eigen::MatrixXd out(n, k);
    Eigen::VectorXd z(k);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < k; ++j) z(j) = rng.normal();
      out.row(i) = (mvn->mean + factor * z).transpose();
    }
    return out;
  }
  Eigen::MatrixXd out(n, 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    out(i, 0) = std::visit(
        [&rng](const auto& d) -> double {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, Normal>) return rng.normal(d.mean, d.stddev);
          if constexpr (std::is_same_v<T, Uniform>) return rng.uniform(d.lower, d.upper);
          if constexpr (std::is_same_v<T, ChiSquared>) return rng.chi_squared(d.dof);
          if constexpr (std::is_same_v<T, Cauchy>) return rng.cauchy(d.location, d.scale);
          if constexpr (std::is_same_v<T, Binomial>)
            return static_cast<double>(rng.binomial(d.trials, d.probability));
          return 0.0;
        },
        spec);
  }
  return out;
}

void DriftSpec::validate(std::size_t stream_length) const {
  if (!widths.empty() && widths.size() != positions.size())
    throw SpecError("drift: widths and positions differ in length");
  for (std::size_t k = 0; k < positions.size(); ++k) {
    if (kind == DriftKind::abrupt && width(k) != 0)
      throw SpecError("drift: abrupt drifts have width 0");
    if (positions[k] >= stream_length || positions[k] + width(k) > stream_length)
      throw SpecError("drift: interval exceeds stream length");
    if (k > 0) {
      if (positions[k] <= positions[k - 1])
        throw SpecError("drift: positions must be strictly increasing");
      if (positions[k - 1] + width(k - 1) > positions[k])
        throw SpecError("drift: overlapping drift intervals");
    }
  }
}

LabeledStream make_classification_stream(const ClassificationStreamSpec& spec,
                                         std::uint64_t seed) {
  if (spec.features < 1 || spec.instances < 1)
    throw ParameterError("classification stream: need >= 1 feature and instance");
  if (!(spec.stddev > 0.0)) throw ParameterError("classification stream: stddev must be > 0");
  const Eigen::Index k = spec.features;
  const double lo = k > 1 ? -1.0 / static_cast<double>(k - 1) : -1.0;
  if (!(spec.correlation > lo && spec.correlation < 1.0))
    throw ParameterError("classification stream: correlation outside the PSD range");

  Eigen::MatrixXd cov = Eigen::MatrixXd::Constant(k, k, spec.correlation);
  cov.diagonal().setOnes();
  cov *= spec.stddev * spec.stddev;
  const Eigen::MatrixXd factor = covariance_factor(cov);

  Eigen::VectorXd direction(k);
  for (Eigen::Index j = 0; j < k; ++j) direction(j) = (j % 2 == 0) ? 1.0 : -1.0;
  const Eigen::VectorXd shift = 0.5 * spec.separation * spec.stddev * direction;

  Rng rng(mix_seed(seed, SeedDomain::classification));
  const auto n = static_cast<Eigen::Index>(spec.instances);
  Eigen::MatrixXd values(n, k);
  LabeledStream out;
  out.labels.resize(spec.instances);
  Eigen::VectorXd z(k);
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool positive = rng.bernoulli(0.5);
    out.labels[static_cast<std::size_t>(i)] = positive ? 1 : 0;
    for (Eigen::Index j = 0; j < k; ++j) z(j) = rng.normal();
    Eigen::VectorXd x = factor * z + Eigen::VectorXd::Constant(k, spec.offset);
    x += positive ? shift : Eigen::VectorXd(-shift);
    values.row(i) = x.transpose();
  }
  out.features = MaskedMatrix(std::move(values));
  return out;
}

LabeledStream make_drift_stream(const LabeledStream& base, const DriftSpec& drift,
                                std::uint64_t seed) {
  drift.validate(base.size());
  for (auto label : base.labels)
    if (label > 1) throw SpecError("drift stream: base labels must be binary");

  Rng rng(mix_seed(seed, SeedDomain::drift));
  LabeledStream out = base;
  out.drift = drift;
  for (std::size_t i = 0; i < base.size(); ++i) {
    unsigned toggles = 0;
    for (std::size_t k = 0; k < drift.positions.size(); ++k) {
      const std::size_t p = drift.positions[k];
      const std::size_t w = drift.width(k);
      if (i >= p + w) {
        ++toggles;
      } else if (i >= p) {
        const double prob = (static_cast<double>(i - p) + 0.5) / static_cast<double>(w);
        if (rng.bernoulli(prob)) ++toggles;
      }
    }
    out.labels[i] = static_cast<std::uint8_t>(base.labels[i] ^ (toggles & 1U));
  }
  return out;
}

namespace {

void check_column(const MaskedMatrix& data, Eigen::Index j, const char* what) {
  if (j < 0 || j >= data.cols()) throw SpecError(std::string("sparsity: ") + what + " out of range");
}

// Rows whose value in `col` is among the top `rate` fraction of observed values.
std::vector<Eigen::Index> top_quantile_rows(const MaskedMatrix& data, Eigen::Index col,
                                            double rate) {
  std::vector<Eigen::Index> rows;
  for (Eigen::Index i = 0; i < data.rows(); ++i)
    if (data.observed(i, col)) rows.push_back(i);
  const auto count = static_cast<std::size_t>(std::llround(rate * static_cast<double>(rows.size())));
  std::stable_sort(rows.begin(), rows.end(), [&](Eigen::Index a, Eigen::Index b) {
    return data(a, col) > data(b, col);
  });
  rows.resize(std::min(count, rows.size()));
  return rows;
}

}  // namespace

MaskedMatrix inject_sparsity(const MaskedMatrix& data, const SparsityPlan& plan) {
  if (!(plan.rate >= 0.0 && plan.rate <= 1.0))
    throw ParameterError("sparsity: rate must be in [0,1]");
  for (auto j : plan.targets) check_column(data, j, "target feature");
  if (plan.mechanism == Mechanism::mar) {
    if (!plan.driver) throw SpecError("sparsity: MAR requires a driver feature");
    check_column(data, *plan.driver, "driver feature");
    if (std::find(plan.targets.begin(), plan.targets.end(), *plan.driver) != plan.targets.end())
      throw SpecError("sparsity: MAR driver must not be a target feature");
  }

  MaskedMatrix out = data;
  if (plan.rate == 0.0) return out;

  switch (plan.mechanism) {
    case Mechanism::mcar: {
      Rng rng(mix_seed(plan.seed, SeedDomain::sparsity));
      for (auto j : plan.targets)
        for (Eigen::Index i = 0; i < data.rows(); ++i)
          if (rng.bernoulli(plan.rate)) out.set_missing(i, j);
      break;
    }
    case Mechanism::mar: {
      const auto rows = top_quantile_rows(data, *plan.driver, plan.rate);
      for (auto j : plan.targets)
        for (auto i : rows) out.set_missing(i, j);
      break;
    }
    case Mechanism::mnar: {
      for (auto j : plan.targets)
        for (auto i : top_quantile_rows(data, j, plan.rate)) out.set_missing(i, j);
      break;
    }
  }
  return out;
}

LabeledStream shuffle_instances(const LabeledStream& stream, std::uint64_t seed) {
  Rng rng(mix_seed(seed, SeedDomain::shuffle));
  const std::size_t n = stream.size();
  const auto order = rng.sample_without_replacement(n, n);
  std::vector<Eigen::Index> rows(order.begin(), order.end());
  LabeledStream out;
  out.features = stream.features.select_rows(rows);
  out.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.labels[i] = stream.labels[order[i]];
  return out;
}

}  // namespace sparsedrift
