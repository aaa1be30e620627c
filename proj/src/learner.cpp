#include "sparsedrift/learner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sparsedrift/errors.hpp"

namespace sparsedrift {

void GaussianNaiveBayes::check(std::span<const double> features) const {
  for (double x : features)
    if (!std::isfinite(x)) throw InputError("learner: missing or non-finite feature");
  if (dimension_ != 0 && features.size() != dimension_) throw InputError("learner: feature count changed");
}

double GaussianNaiveBayes::variance(std::uint8_t label, std::size_t feature) const {
  const auto& c = classes_[label];
  return std::max(c.m2.at(feature) / static_cast<double>(c.count), config_.variance_floor);
}

double GaussianNaiveBayes::log_joint(std::span<const double> features, std::uint8_t label) const {
  const auto& c = classes_[label];
  if (c.count == 0) return -std::numeric_limits<double>::infinity();
  const double total = static_cast<double>(classes_[0].count + classes_[1].count);
  double result = std::log((static_cast<double>(c.count) + 1.0) / (total + 2.0));
  for (std::size_t j = 0; j < features.size(); ++j) {
    const double var = variance(label, j);
    const double diff = features[j] - c.mean[j];
    result -= 0.5 * std::log(2.0 * std::numbers::pi * var) + diff * diff / (2.0 * var);
  }
  return result;
}

std::uint8_t GaussianNaiveBayes::predict(std::span<const double> features) const {
  check(features);
  if (classes_[0].count + classes_[1].count == 0) return config_.prior_label;
  return log_joint(features, 1) > log_joint(features, 0) ? 1 : 0;
}

void GaussianNaiveBayes::update(std::span<const double> features, std::uint8_t label) {
  if (label > 1) throw InputError("learner: label must be 0 or 1");
  check(features);
  if (dimension_ == 0) {
    dimension_ = features.size();
    for (auto& c : classes_) {
      c.mean.assign(dimension_, 0.0);
      c.m2.assign(dimension_, 0.0);
    }
  }
  auto& c = classes_[label];
  ++c.count;
  const double n = static_cast<double>(c.count);
  for (std::size_t j = 0; j < dimension_; ++j) {
    const double delta = features[j] - c.mean[j];
    c.mean[j] += delta / n;
    c.m2[j] += delta * (features[j] - c.mean[j]);
  }
}

void GaussianNaiveBayes::reset() {
  for (auto& c : classes_) c = {};
  dimension_ = 0;
}

}  // namespace sparsedrift
