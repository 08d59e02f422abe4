// Copyright 2026 The patchroute Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

namespace patchroute {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double k, Point2 p) { return {k * p.x, k * p.y}; }

double distance(Point2 a, Point2 b);

/// Row-major 3x3 projective transform kept in scale-normalized form:
/// m[8] == 1, unless |m[8]| would fall below 1e-9, in which case the matrix
/// has unit Frobenius norm instead. Construction rejects |det| <= 1e-12.
class Homography {
 public:
  using Matrix = std::array<double, 9>;

  Homography();  // identity
  explicit Homography(const Matrix& m);

  /// Adopts an already-normalized matrix without rescaling it, so that a
  /// serialized homography loads back bit-for-bit. Validates the form.
  static Homography from_normalized(const Matrix& m);

  static Homography identity() { return Homography(); }
  static Homography scaling(double sx, double sy);
  static Homography translation(double tx, double ty);

  const Matrix& matrix() const { return m_; }
  double operator()(int row, int col) const { return m_[row * 3 + col]; }
  double determinant() const;

  friend bool operator==(const Homography&, const Homography&) = default;

 private:
  struct Raw {};
  Homography(Raw, const Matrix& m) : m_(m) {}

  Matrix m_;
};

/// Corners in semantic order: anchor corner first, then counter-clockwise
/// as seen on screen (image y axis pointing down).
struct Quadrilateral {
  std::array<Point2, 4> corners;

  friend bool operator==(const Quadrilateral&, const Quadrilateral&) = default;
};

/// Shoelace area; negative for screen-counter-clockwise order.
double signed_area(const Quadrilateral& q);

/// Throws DegenerateQuad unless the quad is simple, |area| >= 1 px^2, and
/// every corner triple spans more than 1e-6 px^2.
void validate_quad(const Quadrilateral& q);
bool is_valid_quad(const Quadrilateral& q) noexcept;

/// True when every corner triple has the same orientation in both quads, or
/// the opposite orientation in all four. Otherwise the homography between
/// them sends part of the source quad through infinity.
bool orientation_consistent(const std::array<Point2, 4>& src, const std::array<Point2, 4>& dst);

Homography estimate_homography_dlt(const std::array<Point2, 4>& src,
                                   const std::array<Point2, 4>& dst);

Point2 apply_homography(const Homography& h, Point2 p);
Homography compose(const Homography& a, const Homography& b);  // a * b
Homography invert(const Homography& h);

struct Correspondence {
  Point2 src;
  Point2 dst;
};

struct LmOptions {
  int max_iters = 50;
  double tol = 1e-10;
  double initial_damping = 1e-3;
  double damping_up = 10.0;
  double damping_down = 10.0;
  double max_damping = 1e12;
};

struct LmReport {
  Homography h;
  int iterations = 0;
  int accepted_steps = 0;
  /// Cost after initialization and after every accepted step.
  std::vector<double> cost_history;
};

/// Sum over correspondences of |H src - dst|^2 + |H^-1 dst - src|^2.
double symmetric_transfer_cost(const Homography& h,
                               std::span<const Correspondence> corr);

LmReport refine_homography_lm_report(const Homography& h0,
                                     std::span<const Correspondence> corr,
                                     const LmOptions& opts = {});

Homography refine_homography_lm(const Homography& h0,
                                std::span<const Correspondence> corr,
                                const LmOptions& opts = {});

}  // namespace patchroute
