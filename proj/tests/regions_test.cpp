#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "entsim/regions.hpp"
#include "fixtures.hpp"

namespace entsim {
namespace {

using testing::cell_id;
using testing::feature_collection;
using testing::grid_adjacency;
using testing::grid_layer;
using testing::rect_feature;

RegionLayer unit_square() {
  return load_region_layer(feature_collection({rect_feature("R", 0, 0, 1, 1)}));
}

// Oracle: crossing-number test written against the rectangle corners
// directly, independent of the library's ring walker.
bool rect_ray_cast(double x, double y, double x0, double y0, double x1, double y1) {
  const double xs[4][2] = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
  int crossings = 0;
  for (int i = 0; i < 4; ++i) {
    const double* a = xs[i];
    const double* b = xs[(i + 1) % 4];
    if ((a[1] <= y && b[1] > y) || (b[1] <= y && a[1] > y)) {
      const double t = (y - a[1]) / (b[1] - a[1]);
      if (x < a[0] + t * (b[0] - a[0])) ++crossings;
    }
  }
  return crossings % 2 == 1;
}

TEST(LoadRegionLayer, SingleSquare) {
  const auto layer = unit_square();
  ASSERT_EQ(1u, layer.size());
  EXPECT_EQ("R", layer.regions()[0].id);
  EXPECT_FALSE(layer.regions()[0].crime_rate().has_value());
}

TEST(LoadRegionLayer, DuplicateIdRejected) {
  auto doc = feature_collection({rect_feature("R", 0, 0, 1, 1), rect_feature("R", 1, 0, 2, 1)});
  EXPECT_THROW(load_region_layer(doc), SchemaError);
}

TEST(LoadRegionLayer, MissingRegionIdNamesFeature) {
  auto doc = feature_collection({rect_feature("A", 0, 0, 1, 1), rect_feature("B", 1, 0, 2, 1)});
  doc["features"][1]["properties"].erase("region_id");
  try {
    load_region_layer(doc);
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("feature 1"), std::string::npos) << e.what();
  }
}

TEST(LoadRegionLayer, UnclosedRingRejected) {
  auto doc = feature_collection({rect_feature("A", 0, 0, 1, 1)});
  doc["features"][0]["geometry"]["coordinates"][0].back() = {0.0, 0.5};
  EXPECT_THROW(load_region_layer(doc), GeometryError);
}

TEST(LoadRegionLayer, ShortRingRejected) {
  auto doc = feature_collection({rect_feature("A", 0, 0, 1, 1)});
  doc["features"][0]["geometry"]["coordinates"][0] = {{0, 0}, {1, 0}, {0, 0}};
  EXPECT_THROW(load_region_layer(doc), GeometryError);
}

TEST(LoadRegionLayer, RejectsBadDocuments) {
  EXPECT_THROW(load_region_layer(nlohmann::json::array()), SchemaError);
  auto point = feature_collection({rect_feature("A", 0, 0, 1, 1)});
  point["features"][0]["geometry"] = {{"type", "Point"}, {"coordinates", {0, 0}}};
  EXPECT_THROW(load_region_layer(point), SchemaError);
  auto negative = feature_collection({rect_feature("A", 0, 0, 1, 1, {{"crime_rate", -1}})});
  EXPECT_THROW(load_region_layer(negative), SchemaError);
  auto piped = feature_collection({rect_feature("A|B", 0, 0, 1, 1)});
  EXPECT_THROW(load_region_layer(piped), SchemaError);
  std::istringstream junk("{not json");
  EXPECT_THROW(load_region_layer(junk), SchemaError);
}

TEST(LoadRegionLayer, GridAttachesRates) {
  const auto& layer = grid_layer();
  ASSERT_EQ(9u, layer.size());
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      const Region* reg = layer.find(cell_id(r, c));
      ASSERT_NE(nullptr, reg);
      EXPECT_EQ(testing::grid_rate(r, c), reg->crime_rate().value());
    }
}

TEST(LoadRegionLayer, ParentHierarchy) {
  auto doc = feature_collection({rect_feature("A", 0, 0, 1, 1, {{"parent_id", "B"}}),
                                 rect_feature("C", 1, 0, 2, 1, {{"parent_id", "B"}})});
  const auto layer = load_region_layer(doc);
  EXPECT_EQ("B", layer.hierarchy().at("A"));
  EXPECT_EQ("B", layer.find("C")->parent_id.value());

  auto cyclic = feature_collection({rect_feature("A", 0, 0, 1, 1, {{"parent_id", "C"}}),
                                    rect_feature("C", 1, 0, 2, 1, {{"parent_id", "A"}})});
  EXPECT_THROW(load_region_layer(cyclic), SchemaError);
}

TEST(Locate, InsideUnitSquare) {
  EXPECT_EQ("R", locate(Fix(0.5, 0.5), unit_square()).value());
}

TEST(Locate, OutsideGrid) {
  EXPECT_FALSE(locate(Fix(50, 50), grid_layer()).has_value());
}

TEST(Locate, SharedEdgeGoesToSmallestId) {
  // R00 / R01 share the edge lon = 1.
  EXPECT_EQ("R00", locate(Fix(0.5, 1.0), grid_layer()).value());
  EXPECT_EQ("R00", locate(Fix(0.5, 1.0 + 5e-10), grid_layer()).value());
  // Four-way corner.
  EXPECT_EQ("R00", locate(Fix(1.0, 1.0), grid_layer()).value());
  EXPECT_EQ("R11", locate(Fix(2.0, 2.0), grid_layer()).value());
  // Outer boundary within tolerance still counts.
  EXPECT_EQ("R00", locate(Fix(-5e-10, 0.5), grid_layer()).value());
  EXPECT_FALSE(locate(Fix(-1e-6, 0.5), grid_layer()).has_value());
}

TEST(Locate, AgreesWithRayCastingOracle) {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> u(-0.5, 3.5);
  int compared = 0;
  for (int i = 0; i < 1000; ++i) {
    const double lat = u(rng), lon = u(rng);
    auto near_line = [](double v) { return std::abs(v - std::round(v)) <= kDefaultEps; };
    if (near_line(lat) || near_line(lon)) continue;
    std::optional<std::string> expected;
    for (int r = 0; r < 3 && !expected; ++r)
      for (int c = 0; c < 3 && !expected; ++c)
        if (rect_ray_cast(lon, lat, c, r, c + 1, r + 1)) expected = cell_id(r, c);
    EXPECT_EQ(expected, locate(Fix(lat, lon), grid_layer())) << lat << "," << lon;
    ++compared;
  }
  EXPECT_GT(compared, 990);
}

TEST(Locate, HolesAndMultiPolygons) {
  nlohmann::json donut = {
      {"type", "Feature"},
      {"properties", {{"region_id", "D"}}},
      {"geometry",
       {{"type", "Polygon"},
        {"coordinates",
         {{{0, 0}, {4, 0}, {4, 4}, {0, 4}, {0, 0}}, {{1, 1}, {1, 3}, {3, 3}, {3, 1}, {1, 1}}}}}}};
  nlohmann::json islands = {
      {"type", "Feature"},
      {"properties", {{"region_id", "M"}}},
      {"geometry",
       {{"type", "MultiPolygon"},
        {"coordinates",
         {{{{10, 10}, {11, 10}, {11, 11}, {10, 11}, {10, 10}}},
          {{{20, 20}, {21, 20}, {21, 21}, {20, 21}, {20, 20}}}}}}}};
  const auto layer = load_region_layer(feature_collection({donut, islands}));
  EXPECT_EQ("D", locate(Fix(0.5, 0.5), layer).value());
  EXPECT_FALSE(locate(Fix(2, 2), layer).has_value());
  EXPECT_EQ("D", locate(Fix(1, 2), layer).value());
  EXPECT_EQ("M", locate(Fix(10.5, 10.5), layer).value());
  EXPECT_EQ("M", locate(Fix(20.5, 20.5), layer).value());
  EXPECT_FALSE(locate(Fix(15, 15), layer).has_value());
}

TEST(Adjacency, SharedEdge) {
  const auto layer =
      load_region_layer(feature_collection({rect_feature("A", 0, 0, 1, 1), rect_feature("B", 1, 0, 2, 1)}));
  for (bool corner : {true, false}) {
    const auto g = compute_adjacency(layer, corner);
    EXPECT_TRUE(g.adjacent("A", "B"));
    EXPECT_TRUE(g.adjacent("B", "A"));
    EXPECT_EQ(1u, g.edges().size());
  }
}

TEST(Adjacency, CornerContactFollowsFlag) {
  const auto layer =
      load_region_layer(feature_collection({rect_feature("A", 0, 0, 1, 1), rect_feature("B", 1, 1, 2, 2)}));
  EXPECT_TRUE(compute_adjacency(layer, true).adjacent("A", "B"));
  EXPECT_FALSE(compute_adjacency(layer, false).adjacent("A", "B"));
  EXPECT_EQ(2u, compute_adjacency(layer, false).nodes().size());
}

TEST(Adjacency, GapWiderThanEpsIsNotContact) {
  const auto layer = load_region_layer(
      feature_collection({rect_feature("A", 0, 0, 1, 1), rect_feature("B", 1.001, 0, 2, 1)}));
  EXPECT_TRUE(compute_adjacency(layer).edges().empty());
  EXPECT_TRUE(compute_adjacency(layer, true, 0.01).adjacent("A", "B"));
}

TEST(Adjacency, PartialEdgeContacts) {
  // B's left edge covers only part of A's right edge; C overlaps half of
  // A's top edge; C and D meet only at (1, 3).
  const auto layer = load_region_layer(feature_collection(
      {rect_feature("A", 0, 0, 2, 2), rect_feature("B", 2, 0.5, 3, 1.5),
       rect_feature("C", -1, 2, 1, 3), rect_feature("D", 1, 3, 3, 4)}));
  const auto g = compute_adjacency(layer, false);
  EXPECT_TRUE(g.adjacent("A", "B"));
  EXPECT_TRUE(g.adjacent("A", "C"));
  EXPECT_FALSE(g.adjacent("C", "D"));
  EXPECT_FALSE(g.adjacent("A", "D"));
  EXPECT_TRUE(compute_adjacency(layer, true).adjacent("C", "D"));
}

TEST(Adjacency, GridEqualsQueenAndRookEnumeration) {
  for (bool corner : {true, false}) {
    std::set<AdjacencyGraph::Edge> expected;
    for (int a = 0; a < 9; ++a)
      for (int b = a + 1; b < 9; ++b) {
        const int dr = std::abs(a / 3 - b / 3), dc = std::abs(a % 3 - b % 3);
        const bool queen = std::max(dr, dc) == 1;
        const bool rook = dr + dc == 1;
        if (corner ? queen : rook) expected.emplace(cell_id(a / 3, a % 3), cell_id(b / 3, b % 3));
      }
    const auto g = compute_adjacency(grid_layer(), corner);
    EXPECT_EQ(expected, g.edges());
    EXPECT_EQ(corner ? 20u : 12u, g.edges().size());
    EXPECT_TRUE(g.warnings().empty());
  }
}

TEST(Adjacency, JaggedSharedBoundary) {
  // Two polygons split by a shared zig-zag polyline with irrational-ish
  // vertex coordinates, as in real administrative layers.
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> jitter(-0.3, 0.3);
  std::vector<std::vector<double>> line;
  for (int k = 0; k <= 40; ++k) line.push_back({-73.9 + 0.01 * jitter(rng), 40.6 + k * 0.0037});
  nlohmann::json west = nlohmann::json::array(), east = nlohmann::json::array();
  west.push_back({-74.0, line.back()[1]});
  west.push_back({-74.0, line.front()[1]});
  for (const auto& v : line) west.push_back(v);
  west.push_back(west.front());
  east.push_back({-73.8, line.front()[1]});
  east.push_back({-73.8, line.back()[1]});
  for (auto it = line.rbegin(); it != line.rend(); ++it) east.push_back(*it);
  east.push_back(east.front());
  auto feature = [](const std::string& id, const nlohmann::json& ring) {
    return nlohmann::json{{"type", "Feature"},
                          {"properties", {{"region_id", id}}},
                          {"geometry", {{"type", "Polygon"}, {"coordinates", {ring}}}}};
  };
  const auto layer = load_region_layer(feature_collection({feature("W", west), feature("E", east)}));
  for (bool corner : {true, false}) {
    const auto g = compute_adjacency(layer, corner);
    EXPECT_TRUE(g.adjacent("E", "W"));
    EXPECT_TRUE(g.warnings().empty());
  }
  // A fix on a shared vertex goes to the smaller id.
  EXPECT_EQ("E", locate(Fix(line[7][1], line[7][0]), layer).value());
}

TEST(Adjacency, OverlapWarnsAndOmitsEdge) {
  const auto layer = load_region_layer(feature_collection(
      {rect_feature("A", 0, 0, 1, 1), rect_feature("B", 0.5, 0, 1.5, 1), rect_feature("C", 1.5, 0, 2, 1)}));
  const auto g = compute_adjacency(layer);
  EXPECT_FALSE(g.adjacent("A", "B"));
  EXPECT_TRUE(g.adjacent("B", "C"));
  ASSERT_EQ(1u, g.warnings().size());
  EXPECT_EQ("A", g.warnings()[0].region_a);
  EXPECT_EQ("B", g.warnings()[0].region_b);
}

TEST(Adjacency, IdenticalPolygonsOverlap) {
  const auto layer = load_region_layer(
      feature_collection({rect_feature("A", 0, 0, 1, 1), rect_feature("B", 0, 0, 1, 1)}));
  const auto g = compute_adjacency(layer);
  EXPECT_TRUE(g.edges().empty());
  EXPECT_EQ(1u, g.warnings().size());
}

TEST(Adjacency, GraphRejectsSelfLoops) {
  EXPECT_THROW(AdjacencyGraph({}, {{"A", "A"}}), SchemaError);
}

TEST(Adjacency, CsvRoundTrip) {
  const auto& g = grid_adjacency();
  std::stringstream buf;
  write_adjacency(buf, g);
  const std::string text = buf.str();
  EXPECT_EQ(0u, text.find("region_a,region_b\nR00,R01\n"));
  const auto back = read_adjacency(buf);
  EXPECT_EQ(g.edges(), back.edges());
}

TEST(Adjacency, CsvReaderNormalizesAndValidates) {
  std::istringstream swapped("region_a,region_b\nB,A\n");
  const auto g = read_adjacency(swapped);
  EXPECT_EQ((std::set<AdjacencyGraph::Edge>{{"A", "B"}}), g.edges());
  std::istringstream loop("region_a,region_b\nA,A\n");
  EXPECT_THROW(read_adjacency(loop), SchemaError);
  std::istringstream header("a,b\nA,B\n");
  EXPECT_THROW(read_adjacency(header), SchemaError);
}

TEST(CrossedRegions, DistinctSetAndOutOfLayerCount) {
  const auto& layer = grid_layer();
  auto t = testing::through_cells("t", {{0, 0}, {0, 0}, {0, 1}});
  const auto c = crossed_regions(t, layer);
  EXPECT_EQ((std::set<std::string>{"R00", "R01"}), c.regions);
  EXPECT_EQ(0u, c.out_of_layer);
  EXPECT_EQ(2u, c.fix_counts.at("R00"));

  auto outside = Trajectory::from_coords("o", {{50, 50}, {-10, 1}, {1, 40}});
  const auto co = crossed_regions(outside, layer);
  EXPECT_TRUE(co.regions.empty());
  EXPECT_EQ(3u, co.out_of_layer);

  auto mixed = Trajectory::from_coords("m", {{1.5, 1.5}, {1.2, 1.7}, {50, 50}});
  const auto cm = crossed_regions(mixed, layer);
  EXPECT_EQ((std::set<std::string>{"R11"}), cm.regions);
  EXPECT_EQ(1u, cm.out_of_layer);
}

TEST(CrossedRegions, DuplicatingAFixLeavesRegionsUnchanged) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> pick(0, 9);
  for (int i = 0; i < 100; ++i) {
    auto t = testing::random_trajectory(rng, "t", 10, -0.5, 3.5);
    std::vector<std::pair<double, double>> coords;
    for (const auto& f : t.fixes()) coords.emplace_back(f.lat(), f.lon());
    const auto dup = coords[pick(rng)];
    coords.insert(coords.begin() + static_cast<long>(pick(rng)), dup);
    auto t2 = Trajectory::from_coords("t2", coords);
    EXPECT_EQ(crossed_regions(t, grid_layer()).regions, crossed_regions(t2, grid_layer()).regions);
  }
}

}  // namespace
}  // namespace entsim
