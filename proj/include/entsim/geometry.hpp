#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "entsim/errors.hpp"

namespace entsim {

/// Mean Earth radius (IUGG), kilometres.
inline constexpr double kEarthRadiusKm = 6371.0088;

enum class MetricMode { geodesic, planar };

/// One coordinate sample of a trajectory. `seq` orders fixes within their
/// trajectory; `timestamp` is carried through untouched.
class Fix {
 public:
  Fix(double lat, double lon, std::uint64_t seq = 0,
      std::optional<std::string> timestamp = std::nullopt)
      : lat_(lat), lon_(lon), seq_(seq), timestamp_(std::move(timestamp)) {
    if (!(lat >= -90.0 && lat <= 90.0))
      throw InputDomainError("latitude out of range [-90, 90]: " +
                             std::to_string(lat));
    if (!(lon >= -180.0 && lon <= 180.0))
      throw InputDomainError("longitude out of range [-180, 180]: " +
                             std::to_string(lon));
  }

  double lat() const { return lat_; }
  double lon() const { return lon_; }
  std::uint64_t seq() const { return seq_; }
  const std::optional<std::string>& timestamp() const { return timestamp_; }

 private:
  double lat_;
  double lon_;
  std::uint64_t seq_;
  std::optional<std::string> timestamp_;
};

/// Ordered, non-empty sequence of fixes with strictly increasing `seq`.
class Trajectory {
 public:
  Trajectory(std::string id, std::vector<Fix> fixes)
      : id_(std::move(id)), fixes_(std::move(fixes)) {
    if (fixes_.empty())
      throw InputDomainError("trajectory '" + id_ + "' has no fixes");
    for (std::size_t i = 1; i < fixes_.size(); ++i) {
      if (fixes_[i].seq() <= fixes_[i - 1].seq())
        throw InputDomainError("trajectory '" + id_ +
                               "': seq not strictly increasing at position " +
                               std::to_string(i));
    }
  }

  /// Builds a trajectory from (lat, lon) pairs, numbering fixes 0..n-1.
  static Trajectory from_coords(
      std::string id, std::span<const std::pair<double, double>> lat_lon) {
    std::vector<Fix> fixes;
    fixes.reserve(lat_lon.size());
    std::uint64_t seq = 0;
    for (const auto& [lat, lon] : lat_lon) fixes.emplace_back(lat, lon, seq++);
    return Trajectory(std::move(id), std::move(fixes));
  }
  static Trajectory from_coords(
      std::string id, std::initializer_list<std::pair<double, double>> lat_lon) {
    return from_coords(std::move(id),
                       std::span<const std::pair<double, double>>(
                           lat_lon.begin(), lat_lon.size()));
  }

  const std::string& id() const { return id_; }
  std::span<const Fix> fixes() const { return fixes_; }
  std::size_t size() const { return fixes_.size(); }

 private:
  std::string id_;
  std::vector<Fix> fixes_;
};

/// Great-circle distance in kilometres (haversine on a sphere).
inline double haversine_km(double lat1, double lon1, double lat2, double lon2) {
  constexpr double rad = std::numbers::pi / 180.0;
  const double s_lat = std::sin((lat2 - lat1) * rad / 2.0);
  const double s_lon = std::sin((lon2 - lon1) * rad / 2.0);
  double h = s_lat * s_lat +
             std::cos(lat1 * rad) * std::cos(lat2 * rad) * s_lon * s_lon;
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

/// Distance between two fixes: km in geodesic mode, coordinate units in
/// planar mode (lon as x, lat as y).
inline double distance(const Fix& p, const Fix& q, MetricMode mode) {
  if (mode == MetricMode::geodesic)
    return haversine_km(p.lat(), p.lon(), q.lat(), q.lon());
  return std::hypot(q.lon() - p.lon(), q.lat() - p.lat());
}

/// max over `from` of the min distance to `to`. The inner loop stops as
/// soon as it cannot raise the running maximum, which leaves the result
/// unchanged.
template <typename Dist>
double directed_hausdorff(std::span<const Fix> from, std::span<const Fix> to,
                          Dist&& dist) {
  if (from.empty() || to.empty())
    throw InputDomainError("Hausdorff distance of an empty fix set");
  double result = 0.0;
  for (const Fix& p : from) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const Fix& q : to) {
      const double d = dist(p, q);
      if (d < nearest) {
        nearest = d;
        if (nearest <= result) break;
      }
    }
    result = std::max(result, nearest);
  }
  return result;
}

inline double directed_hausdorff(const Trajectory& t, const Trajectory& t2,
                                 MetricMode mode) {
  return directed_hausdorff(
      t.fixes(), t2.fixes(),
      [mode](const Fix& a, const Fix& b) { return distance(a, b, mode); });
}

inline double symmetric_hausdorff(const Trajectory& t, const Trajectory& t2,
                                  MetricMode mode) {
  return std::max(directed_hausdorff(t, t2, mode), directed_hausdorff(t2, t, mode));
}

enum class HausdorffKind { directed, symmetric };

inline double hausdorff(const Trajectory& t, const Trajectory& t2,
                        MetricMode mode, HausdorffKind kind) {
  return kind == HausdorffKind::directed ? directed_hausdorff(t, t2, mode)
                                         : symmetric_hausdorff(t, t2, mode);
}

}  // namespace entsim
