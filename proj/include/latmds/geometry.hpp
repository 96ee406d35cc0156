#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "latmds/error.hpp"
#include "latmds/random.hpp"

namespace latmds {

/// An ordered set of n points in R^p. Immutable after construction;
/// stored row-per-point.
class Configuration {
public:
  explicit Configuration(Eigen::MatrixXd pts) : pts_(std::move(pts)) {
    detail::require(pts_.rows() >= 1 && pts_.cols() >= 1, errc::invalid_input,
                    "configuration needs n >= 1 points of dimension p >= 1");
    detail::require(pts_.allFinite(), errc::invalid_input,
                    "configuration has non-finite coordinates");
  }

  int size() const { return static_cast<int>(pts_.rows()); }
  int dim() const { return static_cast<int>(pts_.cols()); }

  const Eigen::MatrixXd& points() const { return pts_; }
  Eigen::RowVectorXd point(int i) const { return pts_.row(i); }
  Eigen::RowVectorXd centroid() const { return pts_.colwise().mean(); }

private:
  Eigen::MatrixXd pts_;
};

/// x |-> Qx + t with Q orthogonal; reflections are permitted, so this covers
/// the full rigid group that a set of dissimilarities cannot see through.
class RigidTransform {
public:
  RigidTransform(Eigen::MatrixXd orthogonal, Eigen::VectorXd translation)
      : q_(std::move(orthogonal)), t_(std::move(translation)) {
    detail::require(q_.rows() == q_.cols() && q_.rows() == t_.size(),
                    errc::invalid_input, "rigid transform shape mismatch");
    const int p = static_cast<int>(q_.rows());
    const double ortho_defect =
        (q_.transpose() * q_ - Eigen::MatrixXd::Identity(p, p))
            .cwiseAbs()
            .maxCoeff();
    detail::require(ortho_defect <= 1e-10, errc::invalid_input,
                    "matrix is not orthogonal");
    detail::require(std::abs(std::abs(q_.determinant()) - 1.0) <= 1e-10,
                    errc::invalid_input, "orthogonal factor has |det| != 1");
  }

  static RigidTransform identity(int p) {
    return RigidTransform(Eigen::MatrixXd::Identity(p, p),
                          Eigen::VectorXd::Zero(p));
  }

  const Eigen::MatrixXd& orthogonal() const { return q_; }
  const Eigen::VectorXd& translation() const { return t_; }
  int dim() const { return static_cast<int>(q_.rows()); }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const { return q_ * x + t_; }

  Configuration apply(const Configuration& c) const {
    detail::require(c.dim() == dim(), errc::invalid_input,
                    "transform/configuration dimension mismatch");
    Eigen::MatrixXd out = c.points() * q_.transpose();
    out.rowwise() += t_.transpose();
    return Configuration(std::move(out));
  }

  RigidTransform inverse() const {
    return RigidTransform(q_.transpose(), -(q_.transpose() * t_));
  }

private:
  Eigen::MatrixXd q_;
  Eigen::VectorXd t_;
};

/// Diameter (max pairwise distance) and width (min extent over directions;
/// the slab thickness between the tightest pair of parallel hyperplanes).
struct ShapeStats {
  double diameter = 0.0;
  double width = 0.0;

  double aspect() const {
    if (width == 0.0) return std::numeric_limits<double>::infinity();
    return (diameter / width) * (diameter / width);
  }
};

inline Eigen::MatrixXd pairwise_sq_dists(const Configuration& config) {
  const int n = config.size();
  Eigen::MatrixXd d2 = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      d2(i, j) = d2(j, i) =
          (config.points().row(i) - config.points().row(j)).squaredNorm();
  return d2;
}

struct ProcrustesResult {
  RigidTransform transform;
  double error = 0.0;  // attained min of sum_i ||target_i - g(source_i)||^2
};

/// Best rigid map g (orthogonal + translation, reflections allowed) taking
/// `source` onto `target` in least squares; the polar factor of the centered
/// cross-covariance via SVD. Coincident degenerate inputs get the identity
/// rotation and a pure translation between centroids.
inline ProcrustesResult procrustes_align(const Configuration& source,
                                         const Configuration& target) {
  detail::require(
      source.size() == target.size() && source.dim() == target.dim(),
      errc::invalid_input, "procrustes: configurations must share n and p");
  const int p = source.dim();

  const Eigen::RowVectorXd sc = source.centroid();
  const Eigen::RowVectorXd tc = target.centroid();
  const Eigen::MatrixXd xs = source.points().rowwise() - sc;
  const Eigen::MatrixXd xt = target.points().rowwise() - tc;

  const Eigen::MatrixXd m = xt.transpose() * xs;  // p x p cross-covariance
  Eigen::MatrixXd q;
  if (m.norm() == 0.0) {
    q = Eigen::MatrixXd::Identity(p, p);
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(
        m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    q = svd.matrixU() * svd.matrixV().transpose();
  }
  Eigen::VectorXd t = tc.transpose() - q * sc.transpose();

  RigidTransform g(std::move(q), std::move(t));
  const Configuration mapped = g.apply(source);
  const double err = (target.points() - mapped.points()).squaredNorm();
  return ProcrustesResult{std::move(g), err};
}

/// (1/n) min_g sum_i ||embedded_i - g(latent_i)||^2.
inline double embedding_error(const Configuration& embedded,
                              const Configuration& latent) {
  return procrustes_align(latent, embedded).error / embedded.size();
}

namespace detail {

// Andrew's monotone chain; returns hull vertices in CCW order.
// Collinear inputs collapse to a 2-point (or 1-point) hull.
inline std::vector<Eigen::Vector2d> convex_hull_2d(
    const Eigen::MatrixXd& pts) {
  std::vector<Eigen::Vector2d> p(pts.rows());
  for (int i = 0; i < pts.rows(); ++i) p[i] = pts.row(i).transpose();
  std::sort(p.begin(), p.end(), [](const auto& a, const auto& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  p.erase(std::unique(p.begin(), p.end(),
                      [](const auto& a, const auto& b) { return a == b; }),
          p.end());
  const int n = static_cast<int>(p.size());
  if (n <= 2) return p;

  auto cross = [](const Eigen::Vector2d& o, const Eigen::Vector2d& a,
                  const Eigen::Vector2d& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) -
           (a.y() - o.y()) * (b.x() - o.x());
  };

  std::vector<Eigen::Vector2d> hull(2 * n);
  int k = 0;
  for (int i = 0; i < n; ++i) {  // lower chain
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p[i]) <= 0) --k;
    hull[k++] = p[i];
  }
  for (int i = n - 2, lower = k + 1; i >= 0; --i) {  // upper chain
    while (k >= lower && cross(hull[k - 2], hull[k - 1], p[i]) <= 0) --k;
    hull[k++] = p[i];
  }
  hull.resize(k - 1);
  return hull;
}

// Exact width of a convex polygon: the minimum over edges of the farthest
// vertex's distance to the edge's supporting line.
inline double polygon_width(const std::vector<Eigen::Vector2d>& hull) {
  const int h = static_cast<int>(hull.size());
  if (h <= 2) return 0.0;
  double width = std::numeric_limits<double>::infinity();
  for (int i = 0; i < h; ++i) {
    const Eigen::Vector2d a = hull[i];
    const Eigen::Vector2d e = hull[(i + 1) % h] - a;
    const double len = e.norm();
    if (len == 0.0) continue;
    double far = 0.0;
    for (int j = 0; j < h; ++j) {
      const Eigen::Vector2d d = hull[j] - a;
      far = std::max(far, std::abs(e.x() * d.y() - e.y() * d.x()) / len);
    }
    width = std::min(width, far);
  }
  return std::isfinite(width) ? width : 0.0;
}

inline double directional_extent(const Eigen::MatrixXd& pts,
                                 const Eigen::VectorXd& dir) {
  const Eigen::VectorXd proj = pts * dir;
  return proj.maxCoeff() - proj.minCoeff();
}

// Nelder-Mead on f; small fixed-budget refinement helper.
template <typename F>
Eigen::VectorXd nelder_mead(F f, Eigen::VectorXd x0, double step, int iters) {
  const int d = static_cast<int>(x0.size());
  std::vector<Eigen::VectorXd> xs(d + 1, x0);
  std::vector<double> fs(d + 1);
  for (int i = 1; i <= d; ++i) xs[i](i - 1) += step;
  for (int i = 0; i <= d; ++i) fs[i] = f(xs[i]);

  for (int it = 0; it < iters; ++it) {
    std::vector<int> idx(d + 1);
    for (int i = 0; i <= d; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return fs[a] < fs[b]; });
    std::vector<Eigen::VectorXd> xs2(d + 1);
    std::vector<double> fs2(d + 1);
    for (int i = 0; i <= d; ++i) {
      xs2[i] = xs[idx[i]];
      fs2[i] = fs[idx[i]];
    }
    xs = std::move(xs2);
    fs = std::move(fs2);
    if (std::abs(fs[d] - fs[0]) <= 1e-14 * (std::abs(fs[0]) + 1e-300)) break;

    Eigen::VectorXd bary = Eigen::VectorXd::Zero(d);
    for (int i = 0; i < d; ++i) bary += xs[i];
    bary /= d;

    const Eigen::VectorXd xr = bary + (bary - xs[d]);
    const double fr = f(xr);
    if (fr < fs[0]) {
      const Eigen::VectorXd xe = bary + 2.0 * (bary - xs[d]);
      const double fe = f(xe);
      if (fe < fr) {
        xs[d] = xe;
        fs[d] = fe;
      } else {
        xs[d] = xr;
        fs[d] = fr;
      }
    } else if (fr < fs[d - 1]) {
      xs[d] = xr;
      fs[d] = fr;
    } else {
      const Eigen::VectorXd xc = bary + 0.5 * (xs[d] - bary);
      const double fc = f(xc);
      if (fc < fs[d]) {
        xs[d] = xc;
        fs[d] = fc;
      } else {
        for (int i = 1; i <= d; ++i) {
          xs[i] = xs[0] + 0.5 * (xs[i] - xs[0]);
          fs[i] = f(xs[i]);
        }
      }
    }
  }
  int best = 0;
  for (int i = 1; i <= d; ++i)
    if (fs[i] < fs[best]) best = i;
  return xs[best];
}

// Quasi-uniform direction sample: spherical Fibonacci lattice for p = 3,
// seeded normalized Gaussians for p > 3. Width is even in the direction, so
// covering one hemisphere suffices but full coverage is harmless.
inline std::vector<Eigen::VectorXd> direction_sample(int p, int count) {
  std::vector<Eigen::VectorXd> dirs;
  dirs.reserve(count);
  if (p == 3) {
    const double ga = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < count; ++k) {
      const double z = 1.0 - 2.0 * (k + 0.5) / count;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = ga * k;
      Eigen::VectorXd u(3);
      u << r * std::cos(phi), r * std::sin(phi), z;
      dirs.push_back(std::move(u));
    }
  } else {
    rng::Stream s(0x5A11D1Full, static_cast<std::uint64_t>(p));
    while (static_cast<int>(dirs.size()) < count) {
      Eigen::VectorXd u(p);
      for (int i = 0; i < p; ++i) u(i) = s.normal();
      const double nrm = u.norm();
      if (nrm > 1e-12) dirs.push_back(u / nrm);
    }
  }
  return dirs;
}

// Sampled-and-refined width for p >= 3. Upper bound on the true width;
// relative accuracy target 1e-3.
inline double sampled_width(const Eigen::MatrixXd& pts, int samples = 20000) {
  const int p = static_cast<int>(pts.cols());
  auto extent_of = [&](const Eigen::VectorXd& v) {
    const double nrm = v.norm();
    if (nrm < 1e-12) return std::numeric_limits<double>::infinity();
    return directional_extent(pts, v / nrm);
  };

  const auto dirs = direction_sample(p, samples);
  // Keep the few best sampled directions as refinement starts.
  std::vector<std::pair<double, int>> scored(dirs.size());
  for (std::size_t i = 0; i < dirs.size(); ++i)
    scored[i] = {directional_extent(pts, dirs[i]), static_cast<int>(i)};
  std::partial_sort(scored.begin(), scored.begin() + std::min<std::size_t>(8, scored.size()),
                    scored.end());

  double best = scored[0].first;
  const int starts = static_cast<int>(std::min<std::size_t>(8, scored.size()));
  for (int s = 0; s < starts; ++s) {
    Eigen::VectorXd refined =
        nelder_mead(extent_of, dirs[scored[s].second], 0.05, 400);
    best = std::min(best, extent_of(refined));
  }
  return best;
}

}  // namespace detail

/// Diameter is the exact max pairwise distance. Width is exact for p <= 2
/// (rotating-calipers over the convex hull) and a sampled upper-bounding
/// approximation for p >= 3.
inline ShapeStats shape_stats(const Configuration& config) {
  detail::require(config.size() >= 2, errc::invalid_input,
                  "shape stats need at least two points");
  const Eigen::MatrixXd& pts = config.points();
  const int p = config.dim();

  ShapeStats out;
  if (p == 1) {
    out.diameter = pts.col(0).maxCoeff() - pts.col(0).minCoeff();
    out.width = out.diameter;
    return out;
  }
  if (p == 2) {
    const auto hull = detail::convex_hull_2d(pts);
    double diam2 = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i)
      for (std::size_t j = i + 1; j < hull.size(); ++j)
        diam2 = std::max(diam2, (hull[i] - hull[j]).squaredNorm());
    out.diameter = std::sqrt(diam2);
    out.width = detail::polygon_width(hull);
    return out;
  }

  const int n = config.size();
  double diam2 = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      diam2 = std::max(diam2, (pts.row(i) - pts.row(j)).squaredNorm());
  out.diameter = std::sqrt(diam2);
  out.width = detail::sampled_width(pts);
  return out;
}

inline constexpr double kGeneralPositionTol = 1e-8;

/// True iff the p difference vectors from the first listed point are
/// well-conditioned: smallest/largest singular value > cond_tol.
inline bool in_general_position(const Configuration& config,
                                const std::vector<int>& indices,
                                double cond_tol = kGeneralPositionTol) {
  const int p = config.dim();
  detail::require(static_cast<int>(indices.size()) == p + 1,
                  errc::invalid_input,
                  "general-position check needs exactly p+1 indices");
  std::vector<int> sorted = indices;
  std::sort(sorted.begin(), sorted.end());
  detail::require(std::adjacent_find(sorted.begin(), sorted.end()) ==
                      sorted.end(),
                  errc::invalid_input, "indices must be distinct");
  for (int id : indices)
    detail::require(id >= 0 && id < config.size(), errc::invalid_input,
                    "index out of range");

  Eigen::MatrixXd diffs(p, p);
  for (int i = 0; i < p; ++i)
    diffs.row(i) =
        config.points().row(indices[i + 1]) - config.points().row(indices[0]);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(diffs);
  const double smax = svd.singularValues()(0);
  if (smax == 0.0) return false;
  const double smin = svd.singularValues()(p - 1);
  return smin / smax > cond_tol;
}

}  // namespace latmds
