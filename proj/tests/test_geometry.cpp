#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <vector>

#include "latmds/geometry.hpp"
#include "support/oracles.hpp"
#include "support/testutil.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using latmds::Configuration;
using latmds::RigidTransform;

namespace {

Configuration from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const int n = static_cast<int>(rows.size());
  const int p = static_cast<int>(rows.begin()->size());
  Eigen::MatrixXd m(n, p);
  int i = 0;
  for (const auto& row : rows) {
    int j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return Configuration(m);
}

}  // namespace

TEST_CASE("Configuration validates its input", "[geometry]") {
  REQUIRE_THROWS_AS(Configuration(Eigen::MatrixXd(0, 2)), latmds::error);
  Eigen::MatrixXd bad(1, 2);
  bad << 0.0, std::numeric_limits<double>::quiet_NaN();
  REQUIRE_THROWS_AS(Configuration(bad), latmds::error);
  try {
    Configuration c(bad);
  } catch (const latmds::error& e) {
    REQUIRE(e.code() == latmds::errc::invalid_input);
  }
}

TEST_CASE("RigidTransform round-trips and rejects bad factors", "[geometry]") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int p = 2 + static_cast<int>(seed % 3);
    const auto g = testutil::random_rigid(seed, p);
    const auto c = testutil::random_config(seed + 100, 15, p, 3.0);
    const auto back = g.inverse().apply(g.apply(c));
    REQUIRE((back.points() - c.points()).cwiseAbs().maxCoeff() <= 1e-12);
    REQUIRE_THAT(std::abs(g.orthogonal().determinant()),
                 WithinAbs(1.0, 1e-10));
  }
  Eigen::MatrixXd not_ortho(2, 2);
  not_ortho << 1.0, 0.5, 0.0, 1.0;
  REQUIRE_THROWS_AS(RigidTransform(not_ortho, Eigen::Vector2d::Zero()),
                    latmds::error);
}

TEST_CASE("pairwise_sq_dists on points {0,1,3} in R^1", "[geometry]") {
  const auto c = from_rows({{0.0}, {1.0}, {3.0}});
  const Eigen::MatrixXd d2 = latmds::pairwise_sq_dists(c);
  Eigen::MatrixXd want(3, 3);
  want << 0, 1, 9, 1, 0, 4, 9, 4, 0;
  REQUIRE((d2 - want).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("pairwise_sq_dists of a single point is the 1x1 zero matrix",
          "[geometry]") {
  const auto c = from_rows({{2.5, -1.0}});
  const Eigen::MatrixXd d2 = latmds::pairwise_sq_dists(c);
  REQUIRE(d2.rows() == 1);
  REQUIRE(d2(0, 0) == 0.0);
}

TEST_CASE("pairwise_sq_dists agrees with a per-pair loop", "[geometry]") {
  const auto c = testutil::random_config(42, 10, 3, 5.0);
  const Eigen::MatrixXd d2 = latmds::pairwise_sq_dists(c);
  const Eigen::MatrixXd ref = oracles::pairwise_sq_dists_loop(c.points());
  REQUIRE((d2 - ref).cwiseAbs().maxCoeff() <= 1e-14);
  REQUIRE((d2 - d2.transpose()).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(d2.diagonal().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("procrustes_align: target equal to source", "[geometry]") {
  const auto c = testutil::random_config(7, 12, 2, 2.0);
  const auto res = latmds::procrustes_align(c, c);
  REQUIRE(res.error <= 1e-20 * c.size());
  REQUIRE((res.transform.orthogonal() - Eigen::Matrix2d::Identity())
              .cwiseAbs()
              .maxCoeff() <= 1e-12);
  REQUIRE(res.transform.translation().cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("procrustes_align: rotation plus translation is absorbed",
          "[geometry]") {
  const auto c = testutil::random_config(8, 9, 2, 1.0);
  Eigen::Matrix2d rot90;
  rot90 << 0, -1, 1, 0;
  const RigidTransform g(rot90, Eigen::Vector2d(1.0, 2.0));
  const auto res = latmds::procrustes_align(c, g.apply(c));
  REQUIRE(res.error <= 1e-20 * c.size());
}

TEST_CASE("procrustes_align: reflections are in the allowed group",
          "[geometry]") {
  const auto source = from_rows({{0, 0}, {1, 0}, {0, 1}});
  const auto target = from_rows({{0, 0}, {1, 0}, {0, -1}});
  const auto res = latmds::procrustes_align(source, target);
  REQUIRE(res.error <= 1e-20);
}

TEST_CASE("procrustes_align rejects mismatched shapes", "[geometry]") {
  const auto a = testutil::random_config(1, 5, 2);
  const auto b = testutil::random_config(2, 6, 2);
  const auto c3 = testutil::random_config(3, 5, 3);
  REQUIRE_THROWS_AS(latmds::procrustes_align(a, b), latmds::error);
  REQUIRE_THROWS_AS(latmds::procrustes_align(a, c3), latmds::error);
}

TEST_CASE("procrustes_align: rigid invariance over random instances",
          "[geometry]") {
  const double scale = 3.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int p = 1 + static_cast<int>(seed % 3);
    const int n = 4 + static_cast<int>(seed % 20);
    const auto c = testutil::random_config(seed, n, p, scale);
    const auto g = testutil::random_rigid(seed ^ 0xABCDEF, p);
    const auto res = latmds::procrustes_align(c, g.apply(c));
    REQUIRE(res.error <= 1e-18 * n * scale * scale);
  }
}

TEST_CASE("procrustes_align error matches an exhaustive planar scan",
          "[geometry]") {
  const auto src = testutil::random_config(11, 8, 2, 1.5);
  const auto tgt = testutil::gaussian_config(12, 8, 2, 1.5);
  const auto res = latmds::procrustes_align(src, tgt);
  const double ref =
      oracles::procrustes_error_scan_2d(src.points(), tgt.points());
  REQUIRE_THAT(res.error, WithinRel(ref, 1e-6));
  REQUIRE(res.error <= ref + 1e-12);
}

TEST_CASE("procrustes_align: coincident source falls back to translation",
          "[geometry]") {
  const auto src = from_rows({{1, 1}, {1, 1}, {1, 1}});
  const auto tgt = from_rows({{2, 3}, {2, 3}, {2, 3}});
  const auto res = latmds::procrustes_align(src, tgt);
  REQUIRE((res.transform.orthogonal() - Eigen::Matrix2d::Identity())
              .cwiseAbs()
              .maxCoeff() == 0.0);
  REQUIRE((res.transform.translation() - Eigen::Vector2d(1.0, 2.0))
              .cwiseAbs()
              .maxCoeff() <= 1e-15);
  REQUIRE(res.error <= 1e-28);
}

TEST_CASE("alignment error equals the directly recomputed sum", "[geometry]") {
  const auto src = testutil::random_config(21, 14, 3, 2.0);
  const auto tgt = testutil::gaussian_config(22, 14, 3, 2.0);
  const auto res = latmds::procrustes_align(src, tgt);
  const auto mapped = res.transform.apply(src);
  const double direct = (tgt.points() - mapped.points()).squaredNorm();
  REQUIRE_THAT(res.error, WithinRel(direct, 1e-12));
}

TEST_CASE("embedding_error basics", "[geometry]") {
  const auto c = testutil::random_config(31, 10, 2, 1.0);
  REQUIRE(latmds::embedding_error(c, c) <= 1e-20);

  Eigen::MatrixXd shifted = c.points();
  shifted.col(0).array() += 0.73;
  REQUIRE(latmds::embedding_error(Configuration(shifted), c) <= 1e-20);
}

TEST_CASE("embedding_error of a scaled configuration", "[geometry]") {
  const auto latent = from_rows({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  const double eta = 0.8;
  const Configuration embedded(Eigen::MatrixXd(eta * latent.points()));
  const double err = latmds::embedding_error(embedded, latent);

  const Eigen::MatrixXd centered =
      latent.points().rowwise() - latent.centroid();
  const double expected =
      (1.0 - eta) * (1.0 - eta) * centered.squaredNorm() / latent.size();
  REQUIRE_THAT(err, WithinRel(expected, 1e-12));

  const double scan = oracles::procrustes_error_scan_2d(latent.points(),
                                                        embedded.points()) /
                      latent.size();
  REQUIRE_THAT(err, WithinRel(scan, 1e-6));
}

TEST_CASE("embedding_error is symmetric under simultaneous rigid motion",
          "[geometry]") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto a = testutil::random_config(seed, 12, 2, 2.0);
    const auto b = testutil::gaussian_config(seed + 50, 12, 2, 2.0);
    const auto g = testutil::random_rigid(seed + 99, 2);
    const double before = latmds::embedding_error(a, b);
    const double after = latmds::embedding_error(g.apply(a), g.apply(b));
    REQUIRE_THAT(after, WithinRel(before, 1e-10));
  }
}

TEST_CASE("shape_stats of the unit square", "[geometry]") {
  const auto sq = from_rows({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  const auto st = latmds::shape_stats(sq);
  REQUIRE_THAT(st.diameter, WithinRel(std::sqrt(2.0), 1e-14));
  REQUIRE_THAT(st.width, WithinRel(1.0, 1e-14));
  REQUIRE_THAT(st.aspect(), WithinRel(2.0, 1e-12));
}

TEST_CASE("shape_stats of collinear points has zero width", "[geometry]") {
  const auto line = from_rows({{0, 0}, {1, 2}, {2, 4}, {3, 6}});
  const auto st = latmds::shape_stats(line);
  REQUIRE(st.width == 0.0);
  REQUIRE_THAT(st.diameter, WithinRel(3.0 * std::sqrt(5.0), 1e-14));
  REQUIRE(std::isinf(st.aspect()));
}

TEST_CASE("shape_stats width matches a dense direction scan", "[geometry]") {
  latmds::rng::Stream s(314);
  Eigen::MatrixXd pts(50, 2);
  int got = 0;
  while (got < 50) {
    const double x = s.uniform(-1.0, 1.0);
    const double y = s.uniform(-1.0, 1.0);
    if (x * x + y * y <= 1.0) {
      pts(got, 0) = x;
      pts(got, 1) = y;
      ++got;
    }
  }
  const auto st = latmds::shape_stats(Configuration(pts));
  const double ref = oracles::width_scan_2d(pts, 1000000);
  REQUIRE_THAT(st.width, WithinAbs(ref, 1e-6));
}

TEST_CASE("shape_stats is rigid-invariant", "[geometry]") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int p = 2 + static_cast<int>(seed % 2);
    const auto c = testutil::random_config(seed + 500, 30, p, 2.0);
    const auto g = testutil::random_rigid(seed + 700, p);
    const auto st1 = latmds::shape_stats(c);
    const auto st2 = latmds::shape_stats(g.apply(c));
    REQUIRE_THAT(st2.diameter, WithinRel(st1.diameter, 1e-9));
    REQUIRE_THAT(st2.width, WithinRel(st1.width, 1e-9));
    REQUIRE(st1.width <= st1.diameter + 1e-15);
  }
}

TEST_CASE("shape_stats in R^3 recovers the thin side of a box", "[geometry]") {
  // All 8 corners of a 2 x 1 x 0.3 box (so the hull is exactly the box and
  // the true width is the thin side) plus interior filler points.
  latmds::rng::Stream s(2718);
  Eigen::MatrixXd pts(58, 3);
  int row = 0;
  for (int cx = 0; cx < 2; ++cx)
    for (int cy = 0; cy < 2; ++cy)
      for (int cz = 0; cz < 2; ++cz) pts.row(row++) << 2.0 * cx, cy, 0.3 * cz;
  for (; row < 58; ++row) {
    pts(row, 0) = s.uniform(0.0, 2.0);
    pts(row, 1) = s.uniform(0.0, 1.0);
    pts(row, 2) = s.uniform(0.0, 0.3);
  }
  const auto g = testutil::random_rigid(9001, 3);
  const auto st = latmds::shape_stats(g.apply(Configuration(pts)));
  REQUIRE_THAT(st.width, WithinRel(0.3, 1e-3));
  REQUIRE_THAT(st.diameter, WithinRel(std::sqrt(4.0 + 1.0 + 0.09), 1e-12));
}

TEST_CASE("shape_stats in R^1 and input validation", "[geometry]") {
  const auto line = from_rows({{-1.0}, {0.5}, {2.0}});
  const auto st = latmds::shape_stats(line);
  REQUIRE(st.diameter == 3.0);
  REQUIRE(st.width == 3.0);
  REQUIRE_THROWS_AS(latmds::shape_stats(from_rows({{1.0, 2.0}})),
                    latmds::error);
}

TEST_CASE("in_general_position examples", "[geometry]") {
  const auto tri = from_rows({{0, 0}, {1, 0}, {0, 1}});
  REQUIRE(latmds::in_general_position(tri, {0, 1, 2}, 1e-8));

  const auto line = from_rows({{0, 0}, {1, 1}, {2, 2}});
  REQUIRE_FALSE(latmds::in_general_position(line, {0, 1, 2}, 1e-8));

  Eigen::MatrixXd planar(4, 3);
  planar << 0, 0, 0, 1, 0, 0, 0, 1, 0, 1, 1, 1e-12;
  REQUIRE_FALSE(
      latmds::in_general_position(Configuration(planar), {0, 1, 2, 3}, 1e-8));

  REQUIRE_THROWS_AS(latmds::in_general_position(tri, {0, 1}, 1e-8),
                    latmds::error);
  REQUIRE_THROWS_AS(latmds::in_general_position(tri, {0, 1, 1}, 1e-8),
                    latmds::error);
}
