#pragma once

// Toy insurance-risk model: a trajectory's risk is the mean of a regional
// attribute over the districts it crossed.

#include <optional>
#include <string>
#include <vector>

#include "entsim/regions.hpp"

namespace entsim {

enum class RiskWeighting {
  distinct_regions,  // each crossed region counts once
  per_fix,           // each located fix counts once (sensitivity analysis)
};

struct RiskModel {
  std::string attribute_key = "crime_rate";
  RiskWeighting weighting = RiskWeighting::distinct_regions;
};

using Diagnostics = std::vector<std::string>;

/// Risk from an already computed crossing. Undefined when nothing was
/// crossed or any crossed region lacks the attribute; each such region is
/// named in `diagnostics`.
inline std::optional<double> estimate_risk(const Crossing& crossing, const RegionLayer& layer,
                                           const RiskModel& model,
                                           Diagnostics* diagnostics = nullptr) {
  if (crossing.regions.empty()) return std::nullopt;
  double sum = 0.0;
  double weight = 0.0;
  bool complete = true;
  for (const auto& id : crossing.regions) {
    const Region* r = layer.find(id);
    const auto value = r ? r->attribute(model.attribute_key) : std::nullopt;
    if (!value) {
      complete = false;
      if (diagnostics)
        diagnostics->push_back("region '" + id + "' has no '" + model.attribute_key +
                               "' attribute");
      continue;
    }
    double w = 1.0;
    if (model.weighting == RiskWeighting::per_fix) {
      auto it = crossing.fix_counts.find(id);
      w = it == crossing.fix_counts.end() ? 0.0 : static_cast<double>(it->second);
    }
    sum += w * *value;
    weight += w;
  }
  if (!complete || weight == 0.0) return std::nullopt;
  return sum / weight;
}

inline std::optional<double> estimate_risk(const Trajectory& t, const RegionLayer& layer,
                                           const RiskModel& model = {},
                                           Diagnostics* diagnostics = nullptr,
                                           double eps = kDefaultEps) {
  return estimate_risk(crossed_regions(t, layer, eps), layer, model, diagnostics);
}

/// synthetic − real; positive means the synthetic trajectory inflates risk.
inline std::optional<double> risk_deviation(std::optional<double> real,
                                            std::optional<double> synthetic) {
  if (!real || !synthetic) return std::nullopt;
  return *synthetic - *real;
}

inline std::optional<double> risk_deviation(const Trajectory& real, const Trajectory& synth,
                                            const RegionLayer& layer,
                                            const RiskModel& model = {},
                                            Diagnostics* diagnostics = nullptr,
                                            double eps = kDefaultEps) {
  const auto r = estimate_risk(real, layer, model, diagnostics, eps);
  const auto s = estimate_risk(synth, layer, model, diagnostics, eps);
  return risk_deviation(r, s);
}

}  // namespace entsim
