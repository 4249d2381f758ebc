#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "armsp/env/clustering.hpp"
#include "armsp/env/current_field.hpp"
#include "armsp/env/environment.hpp"
#include "armsp/env/grid_map.hpp"
#include "armsp/env/obstacles.hpp"

using namespace armsp;

namespace {

Image solid(std::size_t w, std::size_t h, Rgb c) {
  Image img;
  img.width = w;
  img.height = h;
  img.pixels.assign(w * h, c);
  return img;
}

CurrentSettings flat_settings() {
  CurrentSettings s;
  s.layer_count = 1;
  return s;
}

// Independent restatement of the Lamb vortex horizontal profile, term by term.
Vec3 reference_velocity(const std::vector<LambVortex>& vortices, double gamma, double x, double y) {
  Vec3 out;
  for (const auto& v : vortices) {
    const double dx = x - v.x0, dy = y - v.y0;
    const double r2 = dx * dx + dy * dy;
    const double core = 1.0 - std::exp(-r2 / (v.radius * v.radius));
    out.x += -v.strength * dy / (2.0 * std::numbers::pi * r2) * core;
    out.y += v.strength * dx / (2.0 * std::numbers::pi * r2) * core;
    out.z += gamma * v.strength / std::sqrt(4.0 * std::numbers::pi * std::numbers::pi * v.radius * v.radius) *
             std::exp(-r2 / (2.0 * v.radius));
  }
  return out;
}

}  // namespace

// ---- clustering ------------------------------------------------------------

TEST(ClusterMap, UniformBlueMapsToWaterWithOneEmptyCluster) {
  auto r = cluster_map(solid(8, 6, {0, 0, 255}), 2);
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.empty_clusters, 1u);
  for (double v : r.map.cells) EXPECT_EQ(v, 1.0);
}

TEST(ClusterMap, HalfBlueHalfBrownSeparatesExactly) {
  Image img = solid(10, 4, {0, 0, 255});
  for (std::size_t y = 0; y < 4; ++y)
    for (std::size_t x = 5; x < 10; ++x) img.at(x, y) = {139, 69, 19};
  auto r = cluster_map(img, 2);
  EXPECT_FALSE(r.degenerate);
  for (std::size_t y = 0; y < 4; ++y)
    for (std::size_t x = 0; x < 10; ++x) EXPECT_EQ(r.map.at(x, y), x < 5 ? 1.0 : 0.0);
}

TEST(ClusterMap, SampleChartGivesThreePointFiveKilometreGrid) {
  Rng rng(7);
  IslandSettings s;  // 350 x 350 pixels
  auto r = cluster_map(synthetic_chart(s, rng), 3);
  EXPECT_EQ(r.map.width_cells, 350u);
  EXPECT_DOUBLE_EQ(r.map.extent_x(), 3500.0);
  EXPECT_DOUBLE_EQ(r.map.extent_y(), 3500.0);
  EXPECT_GT(r.map.water_cell_count(), r.map.cells.size() / 2);
  bool saw_coast = false, saw_uncertain = false;
  for (double v : r.map.cells) {
    saw_coast |= v == 0.0;
    saw_uncertain |= v == 0.2;
  }
  EXPECT_TRUE(saw_coast);
  EXPECT_TRUE(saw_uncertain);
}

TEST(ClusterMap, RejectsBadInput) {
  EXPECT_THROW(cluster_map(Image{}, 2), Error);
  EXPECT_THROW(cluster_map(solid(2, 2, {1, 2, 3}), 1), Error);
}

TEST(ClusterMap, PpmRoundTrip) {
  Rng rng(3);
  IslandSettings s;
  s.width = 40;
  s.height = 30;
  auto img = synthetic_chart(s, rng);
  auto back = read_ppm(write_ppm(img));
  EXPECT_EQ(back.width, 40u);
  EXPECT_EQ(back.pixels, img.pixels);
  EXPECT_THROW(read_ppm("P5\n1 1\n255\n0"), Error);
}

// ---- grid export -----------------------------------------------------------

TEST(GridExport, BinaryLayoutIsLittleEndianWithMagic) {
  auto m = GridMap::filled(3, 2, 1.0);
  m.at(1, 1) = 0.2;
  const auto bytes = grid_to_binary(m);
  ASSERT_EQ(bytes.size(), kGridHeaderSize + 6 * 8);
  EXPECT_EQ(bytes.substr(0, 9), "ARMSPGRID");
  EXPECT_EQ(static_cast<unsigned char>(bytes[9]), 3);
  EXPECT_EQ(static_cast<unsigned char>(bytes[13]), 2);
  // 1.0 = 0x3FF0000000000000, little-endian: last byte 0x3F, second to last 0xF0
  EXPECT_EQ(static_cast<unsigned char>(bytes[kGridHeaderSize + 7]), 0x3F);
  EXPECT_EQ(static_cast<unsigned char>(bytes[kGridHeaderSize + 6]), 0xF0);
  auto back = grid_from_binary(bytes);
  EXPECT_EQ(back.cells, m.cells);
}

TEST(GridExport, TextRoundTripIsExact) {
  auto m = GridMap::filled(4, 3, 1.0);
  m.at(2, 0) = 0.1 + 0.2;  // not representable in short decimal
  m.at(0, 2) = 0.0;
  auto back = grid_from_text(grid_to_text(m));
  EXPECT_EQ(back.cells, m.cells);
  EXPECT_EQ(back.width_cells, 4u);
}

// ---- current field ---------------------------------------------------------

TEST(CurrentField, VortexCentreHasNoHorizontalFlow) {
  Rng rng(1);
  auto s = flat_settings();
  auto f = make_current_field({{100.0, 200.0, 2.8, 12.0}}, s, rng);
  const Vec3 v = current_velocity(f, {100.0, 200.0, 0.0});
  EXPECT_EQ(v.x, 0.0);
  EXPECT_EQ(v.y, 0.0);
  EXPECT_NEAR(v.z, 0.1 * 12.0 / (2.0 * std::numbers::pi * 2.8), 1e-15);
}

TEST(CurrentField, TangentialSpeedTenMetresEast) {
  Rng rng(1);
  auto f = make_current_field({{0.0, 0.0, 2.8, 12.0}}, flat_settings(), rng);
  const Vec3 v = current_velocity(f, {10.0, 0.0, 0.0});
  const double expected = 12.0 / (2.0 * std::numbers::pi * 10.0) * (1.0 - std::exp(-(10.0 / 2.8) * (10.0 / 2.8)));
  EXPECT_NEAR(v.x, 0.0, 1e-15);
  EXPECT_NEAR(v.y, expected, 1e-14);
  EXPECT_NEAR(v.y, 0.190985, 1e-6);
}

TEST(CurrentField, FiftyVortexFieldMatchesDirectSum) {
  Rng rng(42);
  VortexSpawn spawn;
  spawn.radius_min = 50;
  spawn.radius_max = 400;
  spawn.strength_min = 50;
  spawn.strength_max = 500;
  auto vort = random_vortices(spawn, rng);
  auto f = make_current_field(vort, flat_settings(), rng);
  for (int i = 0; i < 200; ++i) {
    const double x = rng.uniform(0, 3500), y = rng.uniform(0, 3500);
    const Vec3 got = current_velocity(f, {x, y, 10.0});
    const Vec3 want = reference_velocity(vort, 0.1, x, y);
    EXPECT_NEAR(got.x, want.x, 1e-12 * (1 + std::abs(want.x)));
    EXPECT_NEAR(got.y, want.y, 1e-12 * (1 + std::abs(want.y)));
    EXPECT_NEAR(got.z, want.z, 1e-12 * (1 + std::abs(want.z)));
  }
}

TEST(CurrentField, HorizontalFlowIsDivergenceFree) {
  Rng rng(5);
  VortexSpawn spawn;
  spawn.count = 20;
  spawn.radius_min = 20;
  spawn.radius_max = 200;
  spawn.strength_min = 5;
  spawn.strength_max = 100;
  auto f = make_current_field(random_vortices(spawn, rng), CurrentSettings{}, rng);
  const double h = 1e-3;
  for (int i = 0; i < 100; ++i) {
    const Vec3 p{rng.uniform(0, 3500), rng.uniform(0, 3500), rng.uniform(0, 100)};
    const double dudx = (current_velocity(f, p + Vec3{h, 0, 0}).x - current_velocity(f, p - Vec3{h, 0, 0}).x) / (2 * h);
    const double dvdy = (current_velocity(f, p + Vec3{0, h, 0}).y - current_velocity(f, p - Vec3{0, h, 0}).y) / (2 * h);
    EXPECT_LT(std::abs(dudx + dvdy), 1e-6);
  }
}

TEST(CurrentField, SingleVortexIsAntisymmetric) {
  Rng rng(2);
  auto f = make_current_field({{500.0, 500.0, 30.0, -40.0}}, flat_settings(), rng);
  for (int i = 0; i < 50; ++i) {
    const Vec3 d{rng.uniform(-200, 200), rng.uniform(-200, 200), 0.0};
    const Vec3 a = current_velocity(f, Vec3{500, 500, 0} + d);
    const Vec3 b = current_velocity(f, Vec3{500, 500, 0} - d);
    EXPECT_NEAR(a.x, -b.x, 1e-15);
    EXPECT_NEAR(a.y, -b.y, 1e-15);
  }
}

TEST(CurrentField, ZeroNoiseRangeLeavesVorticesUnchanged) {
  Rng rng(9);
  CurrentSettings s;
  s.noise_lo = s.noise_hi = 0.0;
  auto f = make_current_field(random_vortices(VortexSpawn{}, rng), s, rng);
  auto g = advance_current(f, rng);
  for (std::size_t i = 0; i < f.base.size(); ++i) {
    EXPECT_EQ(f.base[i].x0, g.base[i].x0);
    EXPECT_EQ(f.base[i].radius, g.base[i].radius);
    EXPECT_EQ(f.base[i].strength, g.base[i].strength);
  }
  EXPECT_EQ(g.updates, 1u);
}

TEST(CurrentField, AdvanceIsDeterministicAndPure) {
  Rng rng(11);
  auto f = make_current_field(random_vortices(VortexSpawn{}, rng), CurrentSettings{}, rng);
  const auto copy = f;
  Rng a(99), b(99);
  auto fa = advance_current(f, a);
  auto fb = advance_current(f, b);
  for (std::size_t k = 0; k < fa.layers.size(); ++k)
    for (std::size_t i = 0; i < fa.layers[k].size(); ++i) {
      EXPECT_EQ(fa.layers[k][i].x0, fb.layers[k][i].x0);
      EXPECT_EQ(fa.layers[k][i].strength, fb.layers[k][i].strength);
    }
  for (std::size_t i = 0; i < f.base.size(); ++i) EXPECT_EQ(f.base[i].x0, copy.base[i].x0);
}

TEST(CurrentField, FourUpdatesGiveFourDistinctFields) {
  Rng rng(12);
  auto f = make_current_field(random_vortices(VortexSpawn{}, rng), CurrentSettings{}, rng);
  std::vector<CurrentField> steps{f};
  for (int i = 0; i < 3; ++i) steps.push_back(advance_current(steps.back(), rng));
  const Vec3 probe{1750, 1750, 0};
  for (std::size_t i = 0; i < steps.size(); ++i)
    for (std::size_t j = i + 1; j < steps.size(); ++j)
      EXPECT_NE(steps[i].base[0].x0, steps[j].base[0].x0);
  EXPECT_DOUBLE_EQ(steps.back().time, 12.0);
  (void)probe;
}

TEST(CurrentField, RadiusNeverFallsBelowFloor) {
  Rng rng(13);
  CurrentSettings s;
  s.sigma_radius = 50.0;  // violent noise on purpose
  VortexSpawn spawn;
  spawn.radius_min = spawn.radius_max = 0.5;
  auto f = make_current_field(random_vortices(spawn, rng), s, rng);
  for (int t = 0; t < 50; ++t) {
    f = advance_current(f, rng);
    for (const auto& layer : f.layers)
      for (const auto& v : layer) ASSERT_GE(v.radius, s.min_radius);
  }
}

TEST(CurrentField, DepthLayersDiffer) {
  Rng rng(14);
  auto f = make_current_field(random_vortices(VortexSpawn{}, rng), CurrentSettings{}, rng);
  ASSERT_EQ(f.layers.size(), 5u);
  EXPECT_EQ(f.layer_of(0.0), 0u);
  EXPECT_EQ(f.layer_of(99.0), 4u);
  EXPECT_EQ(f.layer_of(500.0), 4u);
  EXPECT_NE(f.layers[0][0].x0, f.layers[4][0].x0);
}

// ---- obstacles -------------------------------------------------------------

TEST(Obstacles, ZeroRateAndZeroCurrentLeaveThemUnchanged) {
  Rng rng(1);
  CurrentField still = make_current_field({}, flat_settings(), rng);
  std::vector<Obstacle> obs{make_obstacle(ObstacleKind::QuasiStatic, {10, 20, 5}, 30, 0),
                            make_obstacle(ObstacleKind::MovingUncertain, {50, 20, 5}, 10, 0),
                            make_obstacle(ObstacleKind::CurrentDriven, {90, 20, 5}, 15, 0)};
  auto next = advance_obstacles(obs, still, rng, 4.0);
  for (std::size_t i = 0; i < obs.size(); ++i) {
    EXPECT_EQ(next[i].position, obs[i].position);
    EXPECT_EQ(next[i].boundary_radius(), obs[i].boundary_radius());
  }
}

TEST(Obstacles, QuasiStaticUncertaintyGrowsLinearly) {
  Rng rng(1);
  CurrentField still = make_current_field({}, flat_settings(), rng);
  std::vector<Obstacle> obs{make_obstacle(ObstacleKind::QuasiStatic, {0, 0, 0}, 20, 1.0)};
  for (int i = 0; i < 3; ++i) obs = advance_obstacles(obs, still, rng, 4.0);
  EXPECT_DOUBLE_EQ(obs[0].sigma(), 3.0);
  EXPECT_DOUBLE_EQ(obs[0].boundary_radius(), 20.0 + 2.0 * 3.0);
  EXPECT_EQ(obs[0].position, (Vec3{0, 0, 0}));
}

TEST(Obstacles, ShapeRecursionMatchesMatrixProduct) {
  const std::array<double, 3> s{12.0, 0.7, 1.5};
  const double speed = 0.35, x = -0.4, rate = 2.0;
  const double B1[3][3] = {{1, speed, 0}, {0, 1, 0}, {0, 0, 1}};
  const double B2[3] = {0, 1, 1};
  const double B3[3] = {0, 0, speed};
  std::array<double, 3> want{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) want[i] += B1[i][j] * s[j];
    want[i] += B2[i] * x + B3[i] * rate;
  }
  const auto got = propagate_shape(s, speed, x, rate);
  for (int i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(got[i], want[i]);
}

TEST(Obstacles, BoundariesStayNonNegative) {
  Rng rng(4);
  VortexSpawn spawn;
  spawn.radius_min = 100;
  spawn.radius_max = 300;
  spawn.strength_min = 100;
  spawn.strength_max = 500;
  auto field = make_current_field(random_vortices(spawn, rng), CurrentSettings{}, rng);
  ObstacleCounts counts{3, 3, 6};
  auto obs = spawn_obstacles(counts, {100, 100, 10}, {3000, 3000, 50}, ObstacleSettings{}, rng);
  ASSERT_EQ(obs.size(), 12u);
  for (int t = 0; t < 40; ++t) {
    obs = advance_obstacles(obs, field, rng, 4.0, 5.0);
    for (const auto& o : obs) ASSERT_GE(o.boundary_radius(), 0.0);
  }
}

TEST(Obstacles, AdvanceIsPure) {
  Rng rng(4);
  auto field = make_current_field(random_vortices(VortexSpawn{}, rng), CurrentSettings{}, rng);
  auto obs = spawn_obstacles({2, 2, 2}, {100, 100, 10}, {3000, 3000, 50}, ObstacleSettings{}, rng);
  Rng a(5), b(5);
  auto x = advance_obstacles(obs, field, a, 4.0);
  auto y = advance_obstacles(obs, field, b, 4.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_EQ(x[i].position, y[i].position);
    EXPECT_EQ(x[i].boundary_radius(), y[i].boundary_radius());
  }
}

TEST(Obstacles, SpawnKeepsEndpointsClear) {
  Rng rng(8);
  Vec3 s{200, 200, 20}, t{1200, 900, 40};
  auto obs = spawn_obstacles({5, 3, 0}, s, t, ObstacleSettings{}, rng);
  for (const auto& o : obs) {
    EXPECT_FALSE(o.contains(s));
    EXPECT_FALSE(o.contains(t));
  }
}

// ---- collision -------------------------------------------------------------

TEST(Collision, OpenWaterIsFree) {
  auto m = GridMap::filled(10, 10, 1.0);
  EXPECT_EQ(collision_query({50, 50, 5}, m, {}), Occupancy::Free);
}

TEST(Collision, ObstacleCentreIsHit) {
  auto m = GridMap::filled(10, 10, 1.0);
  std::vector<Obstacle> obs{make_obstacle(ObstacleKind::QuasiStatic, {50, 50, 5}, 3, 0)};
  EXPECT_EQ(collision_query({50, 50, 5}, m, obs), Occupancy::ObstacleHit);
}

TEST(Collision, JustOutsideInflatedBoundaryIsNotHit) {
  auto m = GridMap::filled(100, 100, 1.0);
  Obstacle o = make_obstacle(ObstacleKind::QuasiStatic, {500, 500, 20}, 12.0, 1.5);
  o.updates = 3;
  const double sigma = 1.5 * 3;
  const double boundary = 12.0 + 2.0 * sigma;
  const Vec3 dir{0.6, 0.0, 0.8};
  const Vec3 outside = o.position + boundary * (1 + 1e-6) * dir;
  const Vec3 inside = o.position + boundary * (1 - 1e-6) * dir;
  ASSERT_GT(std::sqrt(std::pow(outside.x - 500, 2) + std::pow(outside.z - 20, 2)), boundary);
  EXPECT_NE(collision_query(outside, m, {o}), Occupancy::ObstacleHit);
  EXPECT_EQ(collision_query(inside, m, {o}), Occupancy::ObstacleHit);
}

TEST(Collision, CellClassesAndBounds) {
  auto m = GridMap::filled(3, 1, 1.0);
  m.at(0, 0) = 0.0;
  m.at(1, 0) = 0.2;
  m.at(2, 0) = 0.7;
  EXPECT_EQ(collision_query({5, 5, 0}, m, {}), Occupancy::Coast);
  EXPECT_EQ(collision_query({15, 5, 0}, m, {}), Occupancy::Uncertain);
  EXPECT_EQ(collision_query({25, 5, 0}, m, {}), Occupancy::Free);
  EXPECT_EQ(collision_query({-1, 5, 0}, m, {}), Occupancy::OutOfBounds);
  EXPECT_EQ(collision_query({35, 5, 0}, m, {}), Occupancy::OutOfBounds);
  // obstacles cannot mask a coast cell
  std::vector<Obstacle> obs{make_obstacle(ObstacleKind::QuasiStatic, {5, 5, 0}, 10, 0)};
  EXPECT_EQ(collision_query({5, 5, 0}, m, obs), Occupancy::Coast);
}
