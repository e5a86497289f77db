#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "entsim/entailment.hpp"
#include "entsim/geometry.hpp"
#include "entsim/regions.hpp"
#include "entsim/risk.hpp"

namespace entsim {

/// Jaccard coefficient |e ∩ e2| / |e ∪ e2| over whole statements.
/// Undefined when both sets are empty: there is no evidence either way.
inline std::optional<double> jaccard(const StatementSet& e, const StatementSet& e2) {
  const std::size_t common = e.intersection_size(e2);
  const std::size_t united = e.size() + e2.size() - common;
  if (united == 0) return std::nullopt;
  return static_cast<double>(common) / static_cast<double>(united);
}

/// One row of a comparison report. `hausdorff_km` is in km for the
/// geodesic metric and in coordinate units for the planar one.
struct ComparisonRecord {
  std::string pair_id;
  double hausdorff_km = 0.0;
  std::optional<double> entailment_similarity;
  std::optional<double> risk_real;
  std::optional<double> risk_synthetic;
  std::optional<double> risk_deviation;
  std::size_t out_of_layer_real = 0;
  std::size_t out_of_layer_synthetic = 0;
  Diagnostics diagnostics;

  friend bool operator==(const ComparisonRecord&, const ComparisonRecord&) = default;
};

/// Everything a comparison needs besides the two trajectories.
struct ComparisonContext {
  const RegionLayer& layer;
  const AdjacencyGraph& adjacency;
  const TBoxConfig& tbox;
  MetricMode mode = MetricMode::geodesic;
  HausdorffKind hausdorff = HausdorffKind::directed;
  RiskModel risk{};
  double eps = kDefaultEps;
};

inline std::string make_pair_id(const Trajectory& real, const Trajectory& synthetic) {
  return real.id() + ":" + synthetic.id();
}

/// Compares ground truth `t` against synthetic `t2`. Directed Hausdorff
/// runs from `t` to `t2`.
inline ComparisonRecord compare_pair(const Trajectory& t, const Trajectory& t2,
                                     const ComparisonContext& ctx) {
  ComparisonRecord rec;
  rec.pair_id = make_pair_id(t, t2);
  rec.hausdorff_km = hausdorff(t, t2, ctx.mode, ctx.hausdorff);

  const Crossing real = crossed_regions(t, ctx.layer, ctx.eps);
  const Crossing synth = crossed_regions(t2, ctx.layer, ctx.eps);
  rec.out_of_layer_real = real.out_of_layer;
  rec.out_of_layer_synthetic = synth.out_of_layer;

  rec.entailment_similarity = jaccard(entail_regions(real.regions, ctx.adjacency, ctx.tbox),
                                      entail_regions(synth.regions, ctx.adjacency, ctx.tbox));

  rec.risk_real = estimate_risk(real, ctx.layer, ctx.risk, &rec.diagnostics);
  rec.risk_synthetic = estimate_risk(synth, ctx.layer, ctx.risk, &rec.diagnostics);
  rec.risk_deviation = entsim::risk_deviation(rec.risk_real, rec.risk_synthetic);
  return rec;
}

using TrajectoryPair =
    std::pair<std::reference_wrapper<const Trajectory>, std::reference_wrapper<const Trajectory>>;

/// Matches real and synthetic trajectories by id. Ids present on only one
/// side raise a PairingError listing them.
inline std::vector<TrajectoryPair> pair_by_id(std::span<const Trajectory> real,
                                              std::span<const Trajectory> synthetic) {
  std::map<std::string, const Trajectory*> synth_by_id;
  for (const auto& s : synthetic) synth_by_id.emplace(s.id(), &s);
  std::vector<TrajectoryPair> pairs;
  std::vector<std::string> orphans_real;
  std::vector<std::string> orphans_synth;
  std::set<std::string> matched;
  for (const auto& r : real) {
    auto it = synth_by_id.find(r.id());
    if (it == synth_by_id.end()) {
      orphans_real.push_back(r.id());
    } else {
      pairs.emplace_back(std::cref(r), std::cref(*it->second));
      matched.insert(r.id());
    }
  }
  for (const auto& [id, _] : synth_by_id)
    if (!matched.count(id)) orphans_synth.push_back(id);
  std::sort(orphans_real.begin(), orphans_real.end());
  if (!orphans_real.empty() || !orphans_synth.empty())
    throw PairingError(std::move(orphans_real), std::move(orphans_synth));
  return pairs;
}

/// compare_pair over every pair, on up to `threads` workers (0 = hardware
/// concurrency). Records come back sorted by pair_id whatever the
/// scheduling; the first failing pair (in input order) rethrows.
inline std::vector<ComparisonRecord> compare_batch(std::span<const TrajectoryPair> pairs,
                                                   const ComparisonContext& ctx,
                                                   unsigned threads = 1) {
  std::vector<ComparisonRecord> records(pairs.size());
  std::vector<std::exception_ptr> errors(pairs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < pairs.size(); i = next++) {
      try {
        records[i] = compare_pair(pairs[i].first.get(), pairs[i].second.get(), ctx);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, pairs.size()));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(work);
  }

  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::sort(records.begin(), records.end(),
            [](const auto& a, const auto& b) { return a.pair_id < b.pair_id; });
  return records;
}

}  // namespace entsim
