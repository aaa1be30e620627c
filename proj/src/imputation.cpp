#include "sparsedrift/imputation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "sparsedrift/errors.hpp"
#include "sparsedrift/random.hpp"
#include "sparsedrift/stats.hpp"

namespace sparsedrift {

std::string ImputationMethod::name() const {
  switch (kind) {
    case ImputerKind::mean: return "mean";
    case ImputerKind::median: return "median";
    case ImputerKind::mode: return "mode";
    case ImputerKind::zero: return "zero";
    case ImputerKind::knn: return "knn(" + std::to_string(k) + ")";
  }
  return "?";
}

ImputationMethod parse_imputation_method(std::string_view text) {
  if (text == "mean") return ImputationMethod::mean();
  if (text == "median") return ImputationMethod::median();
  if (text == "mode") return ImputationMethod::mode();
  if (text == "zero") return ImputationMethod::zero();
  if (text.starts_with("knn")) {
    auto digits = text.substr(3);
    if (!digits.empty() && (digits.front() == ':' || digits.front() == '(')) digits.remove_prefix(1);
    if (!digits.empty() && digits.back() == ')') digits.remove_suffix(1);
    std::size_t k = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (ec == std::errc{} && ptr == digits.data() + digits.size() && k >= 1)
      return ImputationMethod::knn(k);
  }
  throw ConfigError("unknown imputation method '" + std::string(text) + "'");
}

namespace {

double column_fill(const MaskedMatrix& data, Eigen::Index j, ImputerKind kind) {
  if (kind == ImputerKind::zero) return 0.0;
  const auto obs = data.observed_column(j);
  if (obs.empty()) throw ImputationError("impute: feature " + std::to_string(j) + " is fully missing");
  switch (kind) {
    case ImputerKind::mean: return stats::mean(obs);
    case ImputerKind::median: return stats::median(obs);
    case ImputerKind::mode: return stats::histogram_mode(obs);
    default: return 0.0;
  }
}

ImputationOutcome impute_knn(const MaskedMatrix& data, std::size_t k) {
  if (k < 1) throw ConfigError("impute: knn needs k >= 1");
  ImputationOutcome out{data, 0};
  const Eigen::Index n = data.rows();
  const Eigen::Index d = data.cols();

  std::vector<double> column_means(static_cast<std::size_t>(d), std::numeric_limits<double>::quiet_NaN());
  for (Eigen::Index j = 0; j < d; ++j) {
    const auto obs = data.observed_column(j);
    if (!obs.empty()) column_means[static_cast<std::size_t>(j)] = stats::mean(obs);
  }

  std::vector<double> distance(static_cast<std::size_t>(n));
  std::vector<Eigen::Index> order;
  order.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    if ((data.mask().row(i).array() != 0).all()) continue;
    for (Eigen::Index r = 0; r < n; ++r) {
      double ss = 0.0;
      int shared = 0;
      if (r != i) {
        for (Eigen::Index f = 0; f < d; ++f) {
          if (data.observed(i, f) && data.observed(r, f)) {
            const double diff = data(i, f) - data(r, f);
            ss += diff * diff;
            ++shared;
          }
        }
      }
      distance[static_cast<std::size_t>(r)] =
          shared > 0 ? ss / shared : std::numeric_limits<double>::infinity();
    }
    for (Eigen::Index j = 0; j < d; ++j) {
      if (data.observed(i, j)) continue;
      order.clear();
      for (Eigen::Index r = 0; r < n; ++r)
        if (data.observed(r, j) && std::isfinite(distance[static_cast<std::size_t>(r)])) order.push_back(r);
      if (order.empty()) {
        const double fallback = column_means[static_cast<std::size_t>(j)];
        if (std::isnan(fallback))
          throw ImputationError("impute: feature " + std::to_string(j) + " is fully missing");
        out.data.set(i, j, fallback);
        ++out.fallback_cells;
        continue;
      }
      const auto take = std::min(k, order.size());
      const auto closer = [&](Eigen::Index a, Eigen::Index b) {
        const double da = distance[static_cast<std::size_t>(a)];
        const double db = distance[static_cast<std::size_t>(b)];
        return da < db || (da == db && a < b);
      };
      std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(), closer);
      double sum = 0.0;
      for (std::size_t q = 0; q < take; ++q) sum += data(order[q], j);
      out.data.set(i, j, sum / static_cast<double>(take));
    }
  }
  return out;
}

}  // namespace

ImputationOutcome impute(const MaskedMatrix& data, const ImputationMethod& method) {
  if (method.kind == ImputerKind::knn) return impute_knn(data, method.k);
  ImputationOutcome out{data, 0};
  for (Eigen::Index j = 0; j < data.cols(); ++j) {
    if (data.missing_count(j) == 0) continue;
    const double fill = column_fill(data, j, method.kind);
    for (Eigen::Index i = 0; i < data.rows(); ++i)
      if (!data.observed(i, j)) out.data.set(i, j, fill);
  }
  return out;
}

ImputationMethod default_method_for(DistributionFamily family, Mechanism mechanism, double rate) {
  if (!(rate >= 0.0 && rate <= 1.0)) throw ParameterError("default_method_for: rate must be in [0,1]");
  switch (family) {
    case DistributionFamily::normal:
    case DistributionFamily::uniform:
    case DistributionFamily::chi_squared:
      return ImputationMethod::mean();
    case DistributionFamily::cauchy:
    case DistributionFamily::binomial:
      return ImputationMethod::median();
    case DistributionFamily::multivariate_normal:
      switch (mechanism) {
        case Mechanism::mcar: return ImputationMethod::knn(rate < 0.3 ? 50 : 100);
        case Mechanism::mar: return ImputationMethod::knn(100);
        case Mechanism::mnar: return ImputationMethod::knn(50);
      }
  }
  throw ConfigError("default_method_for: no tabulated default for this family");
}

double rmse(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& imputed,
            const ObservedMask& selected) {
  if (truth.rows() != imputed.rows() || truth.cols() != imputed.cols() ||
      truth.rows() != selected.rows() || truth.cols() != selected.cols())
    throw ParameterError("rmse: shape mismatch");
  double ss = 0.0;
  std::size_t count = 0;
  for (Eigen::Index j = 0; j < truth.cols(); ++j)
    for (Eigen::Index i = 0; i < truth.rows(); ++i)
      if (selected(i, j) != 0) {
        const double diff = truth(i, j) - imputed(i, j);
        ss += diff * diff;
        ++count;
      }
  if (count == 0) throw ParameterError("rmse: no cell selected");
  return std::sqrt(ss / static_cast<double>(count));
}

namespace {

// Other feature whose values correlate most strongly with the mask of `j`.
std::optional<Eigen::Index> mar_driver(const MaskedMatrix& data, Eigen::Index j) {
  std::optional<Eigen::Index> best;
  double best_r = -1.0;
  for (Eigen::Index k = 0; k < data.cols(); ++k) {
    if (k == j) continue;
    std::vector<double> indicator;
    std::vector<double> values;
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
      if (!data.observed(i, k)) continue;
      indicator.push_back(data.observed(i, j) ? 1.0 : 0.0);
      values.push_back(data(i, k));
    }
    const double r = std::abs(stats::pearson(indicator, values).value_or(0.0));
    if (r > best_r) {
      best_r = r;
      best = k;
    }
  }
  return best;
}

}  // namespace

SelectionReport select_best_imputer(const MaskedMatrix& data, const MissingnessVerdict& verdict,
                                    std::span<const ImputationMethod> candidates,
                                    std::uint64_t seed, std::size_t min_complete_rows) {
  if (candidates.empty()) throw ConfigError("select_best_imputer: no candidate methods");
  if (verdict.features.size() != static_cast<std::size_t>(data.cols()))
    throw SpecError("select_best_imputer: verdict does not match the data");
  const auto rows = data.complete_rows();
  if (rows.size() < min_complete_rows)
    throw SelectionError("select_best_imputer: " + std::to_string(rows.size()) +
                         " complete rows (< " + std::to_string(min_complete_rows) +
                         "); fall back to default_method_for");

  const MaskedMatrix truth = data.select_rows(rows);
  MaskedMatrix masked = truth;
  for (const auto& fv : verdict.features) {
    if (!fv.mechanism || fv.sparsity <= 0.0) continue;
    SparsityPlan plan;
    plan.mechanism = *fv.mechanism;
    plan.rate = fv.sparsity;
    plan.targets = {fv.feature};
    plan.seed = mix_seed(seed, static_cast<std::uint64_t>(fv.feature));
    if (plan.mechanism == Mechanism::mar) {
      plan.driver = mar_driver(data, fv.feature);
      if (!plan.driver) plan.mechanism = Mechanism::mcar;
    }
    // Drivers are read from the complete truth so earlier masks do not shift the ranking.
    const MaskedMatrix injected = inject_sparsity(truth, plan);
    for (Eigen::Index i = 0; i < truth.rows(); ++i)
      if (!injected.observed(i, fv.feature)) masked.set_missing(i, fv.feature);
  }

  ObservedMask selected = (masked.mask().array() == 0).cast<std::uint8_t>();
  SelectionReport report;
  report.complete_rows = rows.size();
  report.masked_cells = static_cast<std::size_t>(masked.missing_count());
  if (report.masked_cells == 0)
    throw SelectionError("select_best_imputer: re-injected missingness masked no cell");

  std::vector<ImputationMethod> ordered(candidates.begin(), candidates.end());
  std::sort(ordered.begin(), ordered.end());
  ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());
  double best = std::numeric_limits<double>::infinity();
  for (const auto& method : ordered) {
    double score = std::numeric_limits<double>::infinity();
    try {
      score = rmse(truth.values(), impute(masked, method).data.values(), selected);
    } catch (const ImputationError&) {
    }
    report.candidates.push_back({method, score});
    if (score < best) {
      best = score;
      report.winner = method;
    }
  }
  if (!std::isfinite(best)) throw SelectionError("select_best_imputer: every candidate failed");
  return report;
}

}  // namespace sparsedrift
