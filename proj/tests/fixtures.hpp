#pragma once

// Shared test fixtures: the 3x3 unit grid layer and random generators.

#include <random>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "entsim/entsim.hpp"

namespace entsim::testing {

/// Axis-aligned rectangle feature; (x, y) = (lon, lat).
inline nlohmann::json rect_feature(const std::string& id, double x0, double y0, double x1,
                                   double y1, nlohmann::json extra = nlohmann::json::object()) {
  nlohmann::json props = std::move(extra);
  props["region_id"] = id;
  return {{"type", "Feature"},
          {"properties", props},
          {"geometry",
           {{"type", "Polygon"},
            {"coordinates", {{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}, {x0, y0}}}}}}};
}

inline nlohmann::json feature_collection(std::vector<nlohmann::json> features) {
  return {{"type", "FeatureCollection"}, {"features", features}};
}

/// Crime rate of grid cell Rrc.
inline double grid_rate(int row, int col) {
  static const double rates[3][3] = {{2.0, 4.0, 6.0}, {1.0, 3.0, 5.0}, {7.0, 8.0, 9.0}};
  return rates[row][col];
}

inline std::string cell_id(int row, int col) {
  return "R" + std::to_string(row) + std::to_string(col);
}

/// 3x3 grid of unit squares: cell Rrc spans lon [c, c+1], lat [r, r+1].
inline nlohmann::json grid_geojson() {
  std::vector<nlohmann::json> features;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      features.push_back(rect_feature(cell_id(r, c), c, r, c + 1, r + 1,
                                      {{"crime_rate", grid_rate(r, c)}}));
  return feature_collection(features);
}

inline const RegionLayer& grid_layer() {
  static const RegionLayer layer = load_region_layer(grid_geojson());
  return layer;
}

inline const AdjacencyGraph& grid_adjacency() {
  static const AdjacencyGraph g = compute_adjacency(grid_layer(), true);
  return g;
}

/// Centre of cell Rrc as (lat, lon).
inline std::pair<double, double> cell_centre(int row, int col) {
  return {row + 0.5, col + 0.5};
}

inline Trajectory through_cells(std::string id, const std::vector<std::pair<int, int>>& cells) {
  std::vector<std::pair<double, double>> coords;
  for (auto [r, c] : cells) coords.push_back(cell_centre(r, c));
  return Trajectory::from_coords(std::move(id), coords);
}

/// Random trajectory of `n` fixes in the box lat,lon in [lo, hi).
inline Trajectory random_trajectory(std::mt19937_64& rng, std::string id, std::size_t n,
                                    double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<std::pair<double, double>> coords;
  for (std::size_t i = 0; i < n; ++i) coords.emplace_back(u(rng), u(rng));
  return Trajectory::from_coords(std::move(id), coords);
}

}  // namespace entsim::testing
