#pragma once

#include <algorithm>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include <boost/geometry.hpp>
#include <boost/geometry/index/rtree.hpp>
#include <nlohmann/json.hpp>

#include "entsim/csv.hpp"
#include "entsim/errors.hpp"
#include "entsim/geometry.hpp"
#include "entsim/planar.hpp"

namespace entsim {

/// Default boundary/adjacency tolerance, degrees.
inline constexpr double kDefaultEps = 1e-9;

/// An attributed areal unit. Numeric feature properties other than the
/// reserved keys are kept in `attributes`; `crime_rate` lives there too.
struct Region {
  std::string id;
  std::vector<planar::Polygon> polygons;
  std::map<std::string, double> attributes;
  std::optional<std::string> parent_id;
  planar::Box bounds;

  std::optional<double> attribute(const std::string& key) const {
    auto it = attributes.find(key);
    if (it == attributes.end()) return std::nullopt;
    return it->second;
  }
  std::optional<double> crime_rate() const { return attribute("crime_rate"); }
};

namespace detail {

namespace bg = boost::geometry;
namespace bgi = boost::geometry::index;

using BgPoint = bg::model::point<double, 2, bg::cs::cartesian>;
using BgBox = bg::model::box<BgPoint>;
using BgPolygon = bg::model::polygon<BgPoint>;
using BgMultiPolygon = bg::model::multi_polygon<BgPolygon>;
using IndexEntry = std::pair<BgBox, std::size_t>;
using RegionIndex = bgi::rtree<IndexEntry, bgi::quadratic<16>>;

inline BgBox to_bg(const planar::Box& b) {
  return BgBox(BgPoint(b.min_x, b.min_y), BgPoint(b.max_x, b.max_y));
}

inline BgMultiPolygon to_bg(const Region& r) {
  BgMultiPolygon mp;
  for (const auto& poly : r.polygons) {
    BgPolygon p;
    for (const auto& v : poly.outer) p.outer().emplace_back(v.x, v.y);
    for (const auto& h : poly.holes) {
      p.inners().emplace_back();
      for (const auto& v : h) p.inners().back().emplace_back(v.x, v.y);
    }
    mp.push_back(std::move(p));
  }
  bg::correct(mp);
  return mp;
}

inline void check_region_id(std::string_view id, std::string_view where) {
  if (id.empty()) throw SchemaError(std::string(where) + ": empty region id");
  if (id.find('|') != std::string_view::npos || id.find('\n') != std::string_view::npos)
    throw SchemaError(std::string(where) + ": region id '" + std::string(id) +
                      "' contains a reserved character ('|' or newline)");
}

/// Child -> parent map is acyclic and has no self-parenting.
inline void check_acyclic(const std::map<std::string, std::string>& parent_of) {
  for (const auto& [start, _] : parent_of) {
    std::set<std::string> seen{start};
    auto it = parent_of.find(start);
    while (it != parent_of.end()) {
      if (!seen.insert(it->second).second)
        throw SchemaError("hierarchy contains a cycle through '" + it->second + "'");
      it = parent_of.find(it->second);
    }
  }
}

}  // namespace detail

/// Immutable collection of regions with a bounding-box R-tree and the
/// child -> parent hierarchy declared through `parent_id`.
class RegionLayer {
 public:
  explicit RegionLayer(std::vector<Region> regions) : regions_(std::move(regions)) {
    std::vector<detail::IndexEntry> entries;
    entries.reserve(regions_.size());
    for (std::size_t i = 0; i < regions_.size(); ++i) {
      Region& r = regions_[i];
      detail::check_region_id(r.id, "region " + std::to_string(i));
      if (!by_id_.emplace(r.id, i).second)
        throw SchemaError("duplicate region id '" + r.id + "'");
      if (r.polygons.empty())
        throw GeometryError("region '" + r.id + "' has no polygons");
      r.bounds = {};
      for (const auto& poly : r.polygons) {
        check_ring(poly.outer, r.id);
        for (const auto& h : poly.holes) check_ring(h, r.id);
        for (const auto& v : poly.outer) r.bounds.expand(v);
      }
      if (r.parent_id) {
        if (*r.parent_id == r.id)
          throw SchemaError("region '" + r.id + "' is its own parent");
        parent_of_.emplace(r.id, *r.parent_id);
      }
      entries.emplace_back(detail::to_bg(r.bounds), i);
    }
    detail::check_acyclic(parent_of_);
    index_ = detail::RegionIndex(entries.begin(), entries.end());
  }

  std::span<const Region> regions() const { return regions_; }
  std::size_t size() const { return regions_.size(); }

  const Region* find(std::string_view id) const {
    auto it = by_id_.find(std::string(id));
    return it == by_id_.end() ? nullptr : &regions_[it->second];
  }

  /// Child -> parent edges taken from `parent_id` properties.
  const std::map<std::string, std::string>& hierarchy() const { return parent_of_; }

  /// Indices of regions whose bounding box meets `box`. Always a superset
  /// of the regions that contain any point inside `box`.
  std::vector<std::size_t> candidates(const planar::Box& box) const {
    std::vector<detail::IndexEntry> hits;
    index_.query(detail::bgi::intersects(detail::to_bg(box)), std::back_inserter(hits));
    std::vector<std::size_t> out;
    out.reserve(hits.size());
    for (const auto& h : hits) out.push_back(h.second);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  static void check_ring(const planar::Ring& ring, const std::string& id) {
    if (ring.size() < 4)
      throw GeometryError("region '" + id + "': ring has fewer than 4 vertices");
    if (!(ring.front() == ring.back()))
      throw GeometryError("region '" + id + "': ring is not closed");
    for (const auto& v : ring)
      if (!std::isfinite(v.x) || !std::isfinite(v.y))
        throw GeometryError("region '" + id + "': non-finite vertex");
  }

  std::vector<Region> regions_;
  std::map<std::string, std::size_t> by_id_;
  std::map<std::string, std::string> parent_of_;
  detail::RegionIndex index_;
};

namespace detail {

inline planar::Ring parse_ring(const nlohmann::json& coords, std::size_t feature) {
  if (!coords.is_array())
    throw SchemaError("feature " + std::to_string(feature) + ": ring is not an array");
  planar::Ring ring;
  ring.reserve(coords.size());
  for (const auto& pos : coords) {
    if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() || !pos[1].is_number())
      throw SchemaError("feature " + std::to_string(feature) + ": malformed position");
    ring.push_back({pos[0].get<double>(), pos[1].get<double>()});
  }
  if (ring.size() < 4)
    throw GeometryError("feature " + std::to_string(feature) +
                        ": ring has fewer than 4 vertices");
  if (!(ring.front() == ring.back()))
    throw GeometryError("feature " + std::to_string(feature) + ": ring is not closed");
  return ring;
}

inline planar::Polygon parse_polygon(const nlohmann::json& rings, std::size_t feature) {
  if (!rings.is_array() || rings.empty())
    throw SchemaError("feature " + std::to_string(feature) + ": polygon has no rings");
  planar::Polygon poly;
  poly.outer = parse_ring(rings[0], feature);
  for (std::size_t i = 1; i < rings.size(); ++i)
    poly.holes.push_back(parse_ring(rings[i], feature));
  return poly;
}

}  // namespace detail

/// Builds a layer from a GeoJSON FeatureCollection of Polygon/MultiPolygon
/// features carrying a string `region_id` and optional `crime_rate` and
/// `parent_id` properties. Coordinates are (lon, lat).
inline RegionLayer load_region_layer(const nlohmann::json& doc) {
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
      !doc.contains("features") || !doc["features"].is_array())
    throw SchemaError("region layer must be a GeoJSON FeatureCollection");

  std::vector<Region> regions;
  std::set<std::string> ids;
  const auto& features = doc["features"];
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto& f = features[i];
    const std::string where = "feature " + std::to_string(i);
    if (!f.is_object()) throw SchemaError(where + ": not an object");
    const auto props = f.contains("properties") && f["properties"].is_object()
                           ? f["properties"]
                           : nlohmann::json::object();
    if (!props.contains("region_id") || !props["region_id"].is_string())
      throw SchemaError(where + ": missing string property 'region_id'");

    Region r;
    r.id = props["region_id"].get<std::string>();
    detail::check_region_id(r.id, where);
    if (!ids.insert(r.id).second)
      throw SchemaError(where + ": duplicate region id '" + r.id + "'");

    for (const auto& [key, value] : props.items()) {
      if (key == "region_id" || key == "parent_id") continue;
      if (value.is_number()) r.attributes[key] = value.get<double>();
    }
    if (props.contains("crime_rate") && !props["crime_rate"].is_null()) {
      if (!props["crime_rate"].is_number() || props["crime_rate"].get<double>() < 0.0)
        throw SchemaError(where + ": 'crime_rate' must be a non-negative number");
    }
    if (props.contains("parent_id") && !props["parent_id"].is_null()) {
      if (!props["parent_id"].is_string())
        throw SchemaError(where + ": 'parent_id' must be a string");
      r.parent_id = props["parent_id"].get<std::string>();
      detail::check_region_id(*r.parent_id, where);
    }

    if (!f.contains("geometry") || !f["geometry"].is_object())
      throw SchemaError(where + ": missing geometry");
    const auto& g = f["geometry"];
    const std::string type = g.value("type", "");
    if (!g.contains("coordinates"))
      throw SchemaError(where + ": geometry has no coordinates");
    if (type == "Polygon") {
      r.polygons.push_back(detail::parse_polygon(g["coordinates"], i));
    } else if (type == "MultiPolygon") {
      if (!g["coordinates"].is_array() || g["coordinates"].empty())
        throw SchemaError(where + ": empty MultiPolygon");
      for (const auto& p : g["coordinates"]) r.polygons.push_back(detail::parse_polygon(p, i));
    } else {
      throw SchemaError(where + ": unsupported geometry type '" + type + "'");
    }
    regions.push_back(std::move(r));
  }
  return RegionLayer(std::move(regions));
}

inline RegionLayer load_region_layer(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("region layer is not valid JSON: ") + e.what());
  }
  return load_region_layer(doc);
}

/// Region containing `p`, or nullopt. Points within `eps` of a boundary
/// belong to every region sharing it; the lexicographically smallest id wins.
inline std::optional<std::string> locate(const Fix& p, const RegionLayer& layer,
                                         double eps = kDefaultEps) {
  const planar::Point pt{p.lon(), p.lat()};
  planar::Box query;
  query.expand(pt);
  const std::string* best = nullptr;
  for (std::size_t idx : layer.candidates(query.inflated(eps))) {
    const Region& r = layer.regions()[idx];
    if (best && r.id >= *best) continue;
    for (const auto& poly : r.polygons) {
      if (planar::locate_in_polygon(poly, pt, eps) != planar::Location::outside) {
        best = &r.id;
        break;
      }
    }
  }
  if (!best) return std::nullopt;
  return *best;
}

struct Crossing {
  std::set<std::string> regions;
  std::size_t out_of_layer = 0;
  /// Located fixes per region; only per-fix risk weighting reads this.
  std::map<std::string, std::size_t> fix_counts;
};

/// Distinct regions visited by `t` and the number of fixes located in none.
inline Crossing crossed_regions(const Trajectory& t, const RegionLayer& layer,
                                double eps = kDefaultEps) {
  Crossing c;
  for (const Fix& f : t.fixes()) {
    if (auto id = locate(f, layer, eps)) {
      ++c.fix_counts[*id];
      c.regions.insert(std::move(*id));
    } else {
      ++c.out_of_layer;
    }
  }
  return c;
}

struct TopologyWarning {
  std::string region_a;
  std::string region_b;
  std::string message;
};

/// Undirected "touches" graph over region ids. Edges are stored as
/// lexicographically ordered pairs; self-loops are rejected.
class AdjacencyGraph {
 public:
  using Edge = std::pair<std::string, std::string>;

  AdjacencyGraph() = default;

  AdjacencyGraph(std::set<std::string> nodes, const std::vector<Edge>& edges,
                 std::vector<TopologyWarning> warnings = {})
      : nodes_(std::move(nodes)), warnings_(std::move(warnings)) {
    for (auto [a, b] : edges) {
      if (a == b) throw SchemaError("adjacency self-loop on '" + a + "'");
      if (b < a) std::swap(a, b);
      nodes_.insert(a);
      nodes_.insert(b);
      neighbors_[a].insert(b);
      neighbors_[b].insert(a);
      edges_.emplace(std::move(a), std::move(b));
    }
  }

  const std::set<Edge>& edges() const { return edges_; }
  const std::set<std::string>& nodes() const { return nodes_; }
  const std::vector<TopologyWarning>& warnings() const { return warnings_; }

  bool contains(std::string_view id) const { return nodes_.count(std::string(id)) > 0; }

  bool adjacent(const std::string& a, const std::string& b) const {
    return a < b ? edges_.count({a, b}) > 0 : edges_.count({b, a}) > 0;
  }

  const std::set<std::string>& neighbors(const std::string& id) const {
    static const std::set<std::string> none;
    auto it = neighbors_.find(id);
    return it == neighbors_.end() ? none : it->second;
  }

  /// Same edges with `ids` added as (possibly isolated) nodes.
  AdjacencyGraph with_nodes(const std::set<std::string>& ids) const {
    AdjacencyGraph g = *this;
    g.nodes_.insert(ids.begin(), ids.end());
    return g;
  }

 private:
  std::set<std::string> nodes_;
  std::set<Edge> edges_;
  std::map<std::string, std::set<std::string>> neighbors_;
  std::vector<TopologyWarning> warnings_;
};

namespace detail {

struct Segment {
  planar::Point a;
  planar::Point b;
};

inline std::vector<Segment> boundary_segments(const Region& r, const planar::Box& near) {
  std::vector<Segment> out;
  auto add_ring = [&](const planar::Ring& ring) {
    for (std::size_t i = 1; i < ring.size(); ++i) {
      planar::Box sb;
      sb.expand(ring[i - 1]);
      sb.expand(ring[i]);
      if (sb.intersects(near)) out.push_back({ring[i - 1], ring[i]});
    }
  };
  for (const auto& poly : r.polygons) {
    add_ring(poly.outer);
    for (const auto& h : poly.holes) add_ring(h);
  }
  return out;
}

inline double perimeter(const Region& r) {
  double total = 0.0;
  for (const auto& poly : r.polygons) {
    total += planar::ring_perimeter(poly.outer);
    for (const auto& h : poly.holes) total += planar::ring_perimeter(h);
  }
  return total;
}

inline planar::Contact boundary_contact(const Region& a, const Region& b, double eps) {
  const planar::Box a_near = a.bounds.inflated(eps);
  const planar::Box b_near = b.bounds.inflated(eps);
  const auto sa = boundary_segments(a, b_near);
  const auto sb = boundary_segments(b, a_near);
  planar::Contact best = planar::Contact::none;
  for (const auto& s : sa) {
    planar::Box box;
    box.expand(s.a);
    box.expand(s.b);
    box = box.inflated(eps);
    for (const auto& t : sb) {
      planar::Box tb;
      tb.expand(t.a);
      tb.expand(t.b);
      if (!tb.intersects(box)) continue;
      const auto c = planar::segment_contact(s.a, s.b, t.a, t.b, eps);
      if (c == planar::Contact::line) return c;
      if (c == planar::Contact::point) best = c;
    }
  }
  return best;
}

}  // namespace detail

/// Region adjacency from geometry. {A, B} is an edge when their boundaries
/// come within `eps` and their interiors do not overlap. With
/// `corner_touch` false, contacts must extend along a boundary stretch
/// longer than `eps`. Overlapping pairs are omitted and reported in
/// `warnings()`.
inline AdjacencyGraph compute_adjacency(const RegionLayer& layer, bool corner_touch = true,
                                        double eps = kDefaultEps) {
  std::set<std::string> nodes;
  std::vector<AdjacencyGraph::Edge> edges;
  std::vector<TopologyWarning> warnings;
  const auto regions = layer.regions();
  std::vector<std::optional<detail::BgMultiPolygon>> shapes(regions.size());
  auto shape = [&](std::size_t i) -> const detail::BgMultiPolygon& {
    if (!shapes[i]) shapes[i] = detail::to_bg(regions[i]);
    return *shapes[i];
  };

  for (std::size_t i = 0; i < regions.size(); ++i) {
    const Region& a = regions[i];
    nodes.insert(a.id);
    for (std::size_t j : layer.candidates(a.bounds.inflated(eps))) {
      if (j <= i) continue;
      const Region& b = regions[j];
      const auto contact = detail::boundary_contact(a, b, eps);
      if (contact == planar::Contact::none) continue;

      double overlap = 0.0;
      try {
        detail::BgMultiPolygon common;
        detail::bg::intersection(shape(i), shape(j), common);
        overlap = detail::bg::area(common);
      } catch (const std::exception& e) {
        warnings.push_back({std::min(a.id, b.id), std::max(a.id, b.id),
                            std::string("overlay failed: ") + e.what()});
        continue;
      }
      // Any overlap thinner than an eps-wide band along the shorter
      // boundary is attributed to coordinate noise.
      const double tolerance = eps * std::min(detail::perimeter(a), detail::perimeter(b));
      if (overlap > tolerance) {
        warnings.push_back({std::min(a.id, b.id), std::max(a.id, b.id),
                            "interiors overlap (area " + csv::format_double(overlap) + ")"});
        continue;
      }
      if (contact == planar::Contact::point && !corner_touch) continue;
      edges.emplace_back(a.id, b.id);
    }
  }
  std::sort(warnings.begin(), warnings.end(), [](const auto& x, const auto& y) {
    return std::tie(x.region_a, x.region_b) < std::tie(y.region_a, y.region_b);
  });
  return AdjacencyGraph(std::move(nodes), edges, std::move(warnings));
}

/// Adjacency edge list: header `region_a,region_b`, one ordered pair per
/// row, rows sorted.
inline void write_adjacency(std::ostream& out, const AdjacencyGraph& g) {
  out << "region_a,region_b\n";
  for (const auto& [a, b] : g.edges())
    out << csv::quote_if_needed(a) << ',' << csv::quote_if_needed(b) << '\n';
}

inline AdjacencyGraph read_adjacency(std::istream& in) {
  const auto rows = csv::read_rows(in);
  if (rows.empty() || rows[0].second != std::vector<std::string>{"region_a", "region_b"})
    throw SchemaError("adjacency CSV header must be region_a,region_b");
  std::vector<AdjacencyGraph::Edge> edges;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& [line_no, f] = rows[r];
    const std::string where = "adjacency line " + std::to_string(line_no);
    if (f.size() != 2) throw SchemaError(where + ": expected 2 fields");
    detail::check_region_id(f[0], where);
    detail::check_region_id(f[1], where);
    if (f[0] == f[1]) throw SchemaError(where + ": self-loop on '" + f[0] + "'");
    edges.emplace_back(f[0], f[1]);
  }
  return AdjacencyGraph({}, edges);
}

}  // namespace entsim
