// Copyright 2026 The patchroute Authors
// SPDX-License-Identifier: Apache-2.0

#include "patchroute/geometry.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "patchroute/error.hpp"

namespace patchroute {

namespace {

using Mat3 = Eigen::Matrix<double, 3, 3, Eigen::RowMajor>;
// Extended precision for the solve and the 3x3 products; results are rounded
// to double once, after scale normalization.
using Real = long double;
using Mat3L = Eigen::Matrix<Real, 3, 3, Eigen::RowMajor>;

constexpr double kMinQuadArea = 1.0;
constexpr double kMinTriangleArea = 1e-6;
constexpr double kMinDeterminant = 1e-12;
constexpr double kMinDepth = 1e-12;
constexpr double kMinRcond = 1e-12;

Mat3 to_eigen(const Homography::Matrix& m) { return Mat3(m.data()); }

Homography::Matrix from_eigen(const Mat3& e) {
  Homography::Matrix m;
  for (int i = 0; i < 9; ++i) m[i] = e(i / 3, i % 3);
  return m;
}

Homography::Matrix normalize_scale(Homography::Matrix m) {
  double frob = 0.0;
  for (double v : m) frob += v * v;
  frob = std::sqrt(frob);
  if (!(frob > 0.0) || !std::isfinite(frob)) {
    throw Error(ErrorCode::SingularSystem, "homography has zero or non-finite entries");
  }
  const double div = (std::abs(m[8]) / frob < 1e-9) ? frob : m[8];
  for (double& v : m) v /= div;
  return m;
}

// Scale-normalizes in extended precision, then rounds.
Homography::Matrix round_normalized(const Mat3L& e) {
  Real frob = 0.0;
  for (int i = 0; i < 9; ++i) frob += e(i / 3, i % 3) * e(i / 3, i % 3);
  frob = std::sqrt(frob);
  if (!(frob > 0.0) || !std::isfinite(static_cast<double>(frob))) {
    throw Error(ErrorCode::SingularSystem, "homography has zero or non-finite entries");
  }
  const Real div = (std::abs(e(2, 2)) / frob < 1e-9L) ? frob : e(2, 2);
  Homography::Matrix m;
  for (int i = 0; i < 9; ++i) m[i] = static_cast<double>(e(i / 3, i % 3) / div);
  return m;
}

Mat3L to_extended(const Homography::Matrix& m) {
  Mat3L e;
  for (int i = 0; i < 9; ++i) e(i / 3, i % 3) = m[i];
  return e;
}

double det3(const Homography::Matrix& m) {
  return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

double triangle_area(Point2 a, Point2 b, Point2 c) {
  return 0.5 * std::abs((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

double cross(Point2 o, Point2 a, Point2 b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool segments_intersect(Point2 p1, Point2 p2, Point2 q1, Point2 q2) {
  const double d1 = cross(q1, q2, p1);
  const double d2 = cross(q1, q2, p2);
  const double d3 = cross(p1, p2, q1);
  const double d4 = cross(p1, p2, q2);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 &&
         d3 != 0 && d4 != 0;
}

// Similarity moving the centroid to the origin with mean distance sqrt(2).
Mat3L hartley_transform(const std::array<Point2, 4>& pts) {
  Real cx = 0.0, cy = 0.0;
  for (const auto& p : pts) {
    cx += p.x;
    cy += p.y;
  }
  cx /= 4;
  cy /= 4;
  Real mean_dist = 0.0;
  for (const auto& p : pts) mean_dist += std::hypot(p.x - cx, p.y - cy);
  mean_dist /= 4;
  const Real s = std::sqrt(Real{2}) / mean_dist;
  Mat3L t;
  t << s, 0, -s * cx, 0, s, -s * cy, 0, 0, 1;
  return t;
}

// Largest corner reprojection error of `m`, evaluated with the same double
// arithmetic as apply_homography.
double corner_error(const Homography::Matrix& m, const std::array<Point2, 4>& src,
                    const std::array<Point2, 4>& dst) {
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    const Point2 p = src[i];
    const double w = m[6] * p.x + m[7] * p.y + m[8];
    if (!(std::abs(w) > kMinDepth)) return std::numeric_limits<double>::infinity();
    const double x = (m[0] * p.x + m[1] * p.y + m[2]) / w;
    const double y = (m[3] * p.x + m[4] * p.y + m[5]) / w;
    worst = std::max(worst, std::hypot(x - dst[i].x, y - dst[i].y));
  }
  return worst;
}

// Near the vanishing line, rounding the exact solution to doubles can cost
// more than 1e-9 px. Revisit the rounding of the eight free entries (one ulp
// either way, then greedy single steps) and keep the best candidate. h33
// stays exactly 1.
Homography::Matrix polish_rounding(Homography::Matrix m, const std::array<Point2, 4>& src,
                                   const std::array<Point2, 4>& dst) {
  constexpr double kGoodEnough = 1e-11;
  double best = corner_error(m, src, dst);
  if (best <= kGoodEnough || m[8] != 1.0) return m;
  const Homography::Matrix base = m;
  for (int code = 0; code < 6561; ++code) {  // 3^8
    Homography::Matrix t = base;
    int c = code;
    for (int i = 0; i < 8; ++i, c /= 3) {
      if (c % 3 == 1) t[i] = std::nextafter(t[i], std::numeric_limits<double>::infinity());
      if (c % 3 == 2) t[i] = std::nextafter(t[i], -std::numeric_limits<double>::infinity());
    }
    const double e = corner_error(t, src, dst);
    if (e < best) {
      best = e;
      m = t;
    }
  }
  for (bool improved = true; improved && best > kGoodEnough;) {
    improved = false;
    for (int i = 0; i < 8; ++i) {
      for (double dir : {1.0, -1.0}) {
        Homography::Matrix t = m;
        t[i] = std::nextafter(t[i], dir * std::numeric_limits<double>::infinity());
        const double e = corner_error(t, src, dst);
        if (e < best) {
          best = e;
          m = t;
          improved = true;
        }
      }
    }
  }
  return m;
}

}  // namespace

double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

Homography::Homography() : m_{1, 0, 0, 0, 1, 0, 0, 0, 1} {}

Homography::Homography(const Matrix& m) : m_(normalize_scale(m)) {
  for (double v : m_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::SingularSystem, "non-finite homography");
  }
  if (std::abs(det3(m_)) <= kMinDeterminant) {
    throw Error(ErrorCode::SingularSystem, "homography is not invertible");
  }
}

Homography Homography::from_normalized(const Matrix& m) {
  double frob = 0.0;
  for (double v : m) {
    if (!std::isfinite(v)) throw Error(ErrorCode::SingularSystem, "non-finite homography");
    frob += v * v;
  }
  const bool unit_corner = m[8] == 1.0;
  const bool unit_norm = std::abs(std::sqrt(frob) - 1.0) < 1e-12;
  if (!unit_corner && !unit_norm) {
    throw Error(ErrorCode::SingularSystem, "homography is not in normalized form");
  }
  if (std::abs(det3(m)) <= kMinDeterminant) {
    throw Error(ErrorCode::SingularSystem, "homography is not invertible");
  }
  return Homography(Raw{}, m);
}

Homography Homography::scaling(double sx, double sy) {
  return Homography(Matrix{sx, 0, 0, 0, sy, 0, 0, 0, 1});
}

Homography Homography::translation(double tx, double ty) {
  return Homography(Matrix{1, 0, tx, 0, 1, ty, 0, 0, 1});
}

double Homography::determinant() const { return det3(m_); }

double signed_area(const Quadrilateral& q) {
  double a = 0.0;
  for (int i = 0; i < 4; ++i) {
    const Point2& p = q.corners[i];
    const Point2& n = q.corners[(i + 1) % 4];
    a += p.x * n.y - n.x * p.y;
  }
  return 0.5 * a;
}

void validate_quad(const Quadrilateral& q) {
  for (const auto& p : q.corners) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw Error(ErrorCode::DegenerateQuad, "quad has non-finite corner");
    }
  }
  const auto& c = q.corners;
  for (int skip = 0; skip < 4; ++skip) {
    std::array<Point2, 3> t;
    int k = 0;
    for (int i = 0; i < 4; ++i) {
      if (i != skip) t[k++] = c[i];
    }
    if (!(triangle_area(t[0], t[1], t[2]) > kMinTriangleArea)) {
      throw Error(ErrorCode::DegenerateQuad, "quad has three collinear corners");
    }
  }
  if (segments_intersect(c[0], c[1], c[2], c[3]) ||
      segments_intersect(c[1], c[2], c[3], c[0])) {
    throw Error(ErrorCode::DegenerateQuad, "quad is self-intersecting");
  }
  if (std::abs(signed_area(q)) < kMinQuadArea) {
    throw Error(ErrorCode::DegenerateQuad, "quad area below 1 px^2");
  }
}

bool is_valid_quad(const Quadrilateral& q) noexcept {
  try {
    validate_quad(q);
    return true;
  } catch (const Error&) {
    return false;
  }
}

Homography estimate_homography_dlt(const std::array<Point2, 4>& src,
                                   const std::array<Point2, 4>& dst) {
  validate_quad(Quadrilateral{src});
  validate_quad(Quadrilateral{dst});

  const Mat3L t_src = hartley_transform(src);
  const Mat3L t_dst = hartley_transform(dst);

  Eigen::Matrix<Real, 8, 9> a;
  for (int i = 0; i < 4; ++i) {
    // Similarities keep w = 1, so no division is needed.
    const Real sx = t_src(0, 0) * src[i].x + t_src(0, 2), sy = t_src(1, 1) * src[i].y + t_src(1, 2);
    const Real dx = t_dst(0, 0) * dst[i].x + t_dst(0, 2), dy = t_dst(1, 1) * dst[i].y + t_dst(1, 2);
    a.row(2 * i) << sx, sy, 1, 0, 0, 0, -sx * dx, -sy * dx, -dx;
    a.row(2 * i + 1) << 0, 0, 0, sx, sy, 1, -sx * dy, -sy * dy, -dy;
  }

  Eigen::Matrix<Real, 9, 1> h;
  const Eigen::Matrix<Real, 8, 8> lhs = a.leftCols<8>();
  Eigen::PartialPivLU<Eigen::Matrix<Real, 8, 8>> lu(lhs);
  if (lu.rcond() > kMinRcond) {
    h.head<8>() = lu.solve(-a.col(8));
    h(8) = 1.0;
  } else {
    // h33 ~ 0 in normalized coordinates: take the null vector instead.
    using MatX = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
    const MatX ad = a;
    Eigen::JacobiSVD<MatX> svd(ad, Eigen::ComputeFullV);
    const Eigen::Matrix<Real, Eigen::Dynamic, 1> sv = svd.singularValues();
    if (!(sv(7) > kMinRcond * sv(0))) {
      throw Error(ErrorCode::SingularSystem, "DLT system is rank deficient");
    }
    h = svd.matrixV().col(8);
  }

  Mat3L hn;
  hn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
  Mat3L t_dst_inv;
  t_dst_inv << 1 / t_dst(0, 0), 0, -t_dst(0, 2) / t_dst(0, 0), 0, 1 / t_dst(1, 1),
      -t_dst(1, 2) / t_dst(1, 1), 0, 0, 1;
  const Homography h_rounded(round_normalized(t_dst_inv * hn * t_src));
  return Homography::from_normalized(polish_rounding(h_rounded.matrix(), src, dst));
}

bool orientation_consistent(const std::array<Point2, 4>& src, const std::array<Point2, 4>& dst) {
  static constexpr int kTriples[4][3] = {{0, 1, 2}, {1, 2, 3}, {0, 2, 3}, {0, 1, 3}};
  int flipped = 0;
  for (const auto& t : kTriples) {
    const double a = cross(src[t[0]], src[t[1]], src[t[2]]);
    const double b = cross(dst[t[0]], dst[t[1]], dst[t[2]]);
    flipped += (a > 0) != (b > 0);
  }
  return flipped == 0 || flipped == 4;
}

Point2 apply_homography(const Homography& h, Point2 p) {
  const auto& m = h.matrix();
  const double w = m[6] * p.x + m[7] * p.y + m[8];
  if (!(std::abs(w) > kMinDepth)) {
    throw Error(ErrorCode::PointAtInfinity, "point maps to infinity");
  }
  return {(m[0] * p.x + m[1] * p.y + m[2]) / w, (m[3] * p.x + m[4] * p.y + m[5]) / w};
}

Homography compose(const Homography& a, const Homography& b) {
  return Homography(round_normalized(to_extended(a.matrix()) * to_extended(b.matrix())));
}

Homography invert(const Homography& h) {
  const auto& m = h.matrix();
  const double det = det3(m);
  if (!(std::abs(det) > kMinDeterminant)) {
    throw Error(ErrorCode::SingularSystem, "homography is not invertible");
  }
  // Adjugate; the 1/det factor disappears under scale normalization.
  const Mat3L e = to_extended(m);
  Mat3L adj;
  adj << e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1), e(0, 2) * e(2, 1) - e(0, 1) * e(2, 2),
      e(0, 1) * e(1, 2) - e(0, 2) * e(1, 1), e(1, 2) * e(2, 0) - e(1, 0) * e(2, 2),
      e(0, 0) * e(2, 2) - e(0, 2) * e(2, 0), e(0, 2) * e(1, 0) - e(0, 0) * e(1, 2),
      e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0), e(0, 1) * e(2, 0) - e(0, 0) * e(2, 1),
      e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0);
  return Homography(round_normalized(adj / static_cast<Real>(det)));
}

// ---------------------------------------------------------------------------
// Levenberg-Marquardt refinement over the 9 matrix entries. The cost is
// invariant to overall scale; Marquardt's diagonal damping keeps the normal
// equations regular along that direction.

namespace {

using Vec9 = Eigen::Matrix<double, 9, 1>;
using Mat9 = Eigen::Matrix<double, 9, 9>;

struct Linearization {
  double cost = 0.0;
  Mat9 jtj = Mat9::Zero();
  Vec9 jtr = Vec9::Zero();
};

// Projection pi(v) = (v0/v2, v1/v2) and its Jacobian rows w.r.t. v.
struct Projected {
  Point2 p;
  Eigen::Matrix<double, 2, 3> dp;
};

Projected project(const Eigen::Vector3d& v) {
  Projected out;
  const double iw = 1.0 / v(2);
  out.p = {v(0) * iw, v(1) * iw};
  out.dp << iw, 0, -v(0) * iw * iw, 0, iw, -v(1) * iw * iw;
  return out;
}

bool finite_depth(const Eigen::Vector3d& v) { return std::abs(v(2)) > kMinDepth; }

// Returns false if some correspondence maps to infinity.
bool linearize(const Mat3& h, std::span<const Correspondence> corr, Linearization& lin) {
  const Mat3 g = h.inverse();
  lin = Linearization{};
  Eigen::Matrix<double, 4, 9> j;
  Eigen::Vector4d r;
  for (const auto& c : corr) {
    const Eigen::Vector3d s(c.src.x, c.src.y, 1.0);
    const Eigen::Vector3d d(c.dst.x, c.dst.y, 1.0);
    const Eigen::Vector3d v = h * s;
    const Eigen::Vector3d u = g * d;
    if (!finite_depth(v) || !finite_depth(u)) return false;
    const Projected fwd = project(v);
    const Projected bwd = project(u);
    r << fwd.p.x - c.dst.x, fwd.p.y - c.dst.y, bwd.p.x - c.src.x, bwd.p.y - c.src.y;
    for (int row = 0; row < 3; ++row) {
      for (int col = 0; col < 3; ++col) {
        // d(Hs)/dh_rc = e_r * s_c ; d(H^-1 d)/dh_rc = -G e_r * u_c
        const Eigen::Vector3d dv = Eigen::Vector3d::Unit(row) * s(col);
        const Eigen::Vector3d du = -g.col(row) * u(col);
        j.block<2, 1>(0, row * 3 + col) = fwd.dp * dv;
        j.block<2, 1>(2, row * 3 + col) = bwd.dp * du;
      }
    }
    lin.cost += r.squaredNorm();
    lin.jtj.noalias() += j.transpose() * j;
    lin.jtr.noalias() += j.transpose() * r;
  }
  return true;
}

}  // namespace

double symmetric_transfer_cost(const Homography& h, std::span<const Correspondence> corr) {
  const Homography g = invert(h);
  double cost = 0.0;
  for (const auto& c : corr) {
    const Point2 f = apply_homography(h, c.src);
    const Point2 b = apply_homography(g, c.dst);
    cost += (f.x - c.dst.x) * (f.x - c.dst.x) + (f.y - c.dst.y) * (f.y - c.dst.y) +
            (b.x - c.src.x) * (b.x - c.src.x) + (b.y - c.src.y) * (b.y - c.src.y);
  }
  return cost;
}

LmReport refine_homography_lm_report(const Homography& h0,
                                     std::span<const Correspondence> corr,
                                     const LmOptions& opts) {
  if (corr.size() < 4) {
    throw Error(ErrorCode::InvalidArgument, "LM refinement needs at least 4 correspondences");
  }
  LmReport report{h0, 0, 0, {}};
  Mat3 h = to_eigen(h0.matrix());
  Linearization lin;
  if (!linearize(h, corr, lin)) {
    throw Error(ErrorCode::PointAtInfinity, "initial homography maps a correspondence to infinity");
  }
  report.cost_history.push_back(lin.cost);
  // Already an exact fit: leave h0 untouched.
  if (lin.cost <= 1e-18 * static_cast<double>(corr.size())) return report;

  double lambda = opts.initial_damping;
  bool solved_once = false;
  while (report.iterations < opts.max_iters) {
    ++report.iterations;
    Mat9 lhs = lin.jtj;
    const double max_diag = lin.jtj.diagonal().maxCoeff();
    for (int i = 0; i < 9; ++i) {
      lhs(i, i) += lambda * std::max(lin.jtj(i, i), 1e-12 * max_diag);
    }
    Eigen::LLT<Mat9> llt(lhs);
    if (llt.info() != Eigen::Success) {
      lambda *= opts.damping_up;
      if (lambda > opts.max_damping) break;
      continue;
    }
    solved_once = true;
    const Vec9 delta = llt.solve(-lin.jtr);
    Mat3 candidate = h;
    for (int i = 0; i < 9; ++i) candidate(i / 3, i % 3) += delta(i);

    Linearization next;
    bool accepted = false;
    try {
      const Homography normalized(from_eigen(candidate));
      const Mat3 cand_n = to_eigen(normalized.matrix());
      if (linearize(cand_n, corr, next) && next.cost < lin.cost) {
        const double rel = (lin.cost - next.cost) / lin.cost;
        h = cand_n;
        lin = next;
        report.h = normalized;
        report.cost_history.push_back(lin.cost);
        ++report.accepted_steps;
        accepted = true;
        lambda = std::max(lambda / opts.damping_down, 1e-15);
        if (rel < opts.tol) break;
      }
    } catch (const Error&) {
      // singular candidate: treat as a rejected step
    }
    if (!accepted) {
      lambda *= opts.damping_up;
      if (lambda > opts.max_damping) break;
    }
  }
  if (!solved_once) {
    throw Error(ErrorCode::SingularSystem, "normal equations unsolvable at maximum damping");
  }
  return report;
}

Homography refine_homography_lm(const Homography& h0, std::span<const Correspondence> corr,
                                const LmOptions& opts) {
  return refine_homography_lm_report(h0, corr, opts).h;
}

}  // namespace patchroute
