// Copyright 2026 The sdsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

/// Planar path parameterization and capsule (swept disc) geometry.
///
/// Everything here is templated on the scalar type and operates on
/// Eigen fixed-size 2-vectors. The simulator instantiates the `double`
/// aliases at the bottom of the file.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace sdsim {

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;

/// Ordered vertex list with cumulative arclength. A single vertex is the
/// degenerate stationary path (zero length).
template <typename Scalar>
class PolylinePath {
 public:
  using Point = Point2<Scalar>;

  PolylinePath() : PolylinePath(std::vector<Point>{Point::Zero()}) {}

  explicit PolylinePath(std::vector<Point> vertices)
      : vertices_(std::move(vertices)) {
    if (vertices_.empty()) {
      throw std::invalid_argument("PolylinePath: at least one vertex required");
    }
    cumulative_.reserve(vertices_.size());
    cumulative_.push_back(Scalar(0));
    for (std::size_t i = 1; i < vertices_.size(); ++i) {
      const Scalar len = (vertices_[i] - vertices_[i - 1]).norm();
      if (!(len > Scalar(0))) {
        std::ostringstream msg;
        msg << "PolylinePath: duplicate consecutive vertex at index " << i;
        throw std::invalid_argument(msg.str());
      }
      cumulative_.push_back(cumulative_.back() + len);
    }
  }

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<Scalar>& cumulative_arclength() const {
    return cumulative_;
  }
  Scalar length() const { return cumulative_.back(); }
  bool degenerate() const { return vertices_.size() == 1; }
  std::size_t segment_count() const { return vertices_.size() - 1; }

  /// Unit direction of segment `i`.
  Point direction(std::size_t i) const {
    return (vertices_[i + 1] - vertices_[i]) /
           (cumulative_[i + 1] - cumulative_[i]);
  }

  /// Index of the segment containing arclength `s`, preferring the segment
  /// that starts at `s` when `s` falls on an interior vertex.
  std::size_t segment_at(Scalar s) const {
    const auto it =
        std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
    const auto idx = static_cast<std::size_t>(it - cumulative_.begin());
    return std::min(idx == 0 ? 0 : idx - 1, segment_count() - 1);
  }

 private:
  std::vector<Point> vertices_;
  std::vector<Scalar> cumulative_;
};

template <typename Scalar>
struct Capsule {
  Point2<Scalar> segment_start;
  Point2<Scalar> segment_end;
  Scalar radius;

  Capsule(Point2<Scalar> start, Point2<Scalar> end, Scalar r)
      : segment_start(std::move(start)), segment_end(std::move(end)),
        radius(r) {
    if (!(radius > Scalar(0))) {
      throw std::domain_error("Capsule: radius must be strictly positive");
    }
  }

  bool is_disc() const { return segment_start == segment_end; }
  Scalar core_length() const { return (segment_end - segment_start).norm(); }
};

template <typename Scalar>
struct CapsuleChain {
  std::vector<Capsule<Scalar>> capsules;
  Scalar total_arclength = Scalar(0);

  bool empty() const { return capsules.empty(); }
};

namespace detail {

template <typename Scalar>
void require_arclength(const PolylinePath<Scalar>& path, Scalar s,
                       const char* what) {
  if (!(s >= Scalar(0)) || s > path.length()) {
    std::ostringstream msg;
    msg << what << ": arclength " << s << " outside [0, " << path.length()
        << "]";
    throw std::domain_error(msg.str());
  }
}

}  // namespace detail

/// Point at arclength `s` by linear interpolation; `s` must lie in
/// [0, length].
template <typename Scalar>
Point2<Scalar> point_at_arclength(const PolylinePath<Scalar>& path, Scalar s) {
  detail::require_arclength(path, s, "point_at_arclength");
  if (path.degenerate()) return path.vertices().front();
  const auto& cum = path.cumulative_arclength();
  const auto& v = path.vertices();
  const std::size_t i = path.segment_at(s);
  if (s == cum[i]) return v[i];
  if (s == cum[i + 1]) return v[i + 1];
  const Scalar t = (s - cum[i]) / (cum[i + 1] - cum[i]);
  return v[i] + t * (v[i + 1] - v[i]);
}

/// Like point_at_arclength, but arclengths beyond the path end continue
/// along the final segment's direction. A degenerate path stays put.
template <typename Scalar>
Point2<Scalar> point_along_extended(const PolylinePath<Scalar>& path,
                                    Scalar s) {
  if (s <= path.length() || path.degenerate()) {
    return point_at_arclength(path, std::min(s, path.length()));
  }
  const std::size_t last = path.segment_count() - 1;
  return path.vertices().back() + (s - path.length()) * path.direction(last);
}

/// Capsule chain covering the disc of `radius` swept from arclength s0 to
/// s1. One capsule per traversed (partial) segment; s0 == s1 gives a disc.
template <typename Scalar>
CapsuleChain<Scalar> sweep(const PolylinePath<Scalar>& path, Scalar s0,
                           Scalar s1, Scalar radius) {
  detail::require_arclength(path, s0, "sweep");
  detail::require_arclength(path, s1, "sweep");
  if (s1 < s0) throw std::domain_error("sweep: s1 < s0");
  if (!(radius > Scalar(0))) throw std::domain_error("sweep: radius <= 0");

  CapsuleChain<Scalar> chain;
  if (s0 == s1 || path.degenerate()) {
    const auto p = point_at_arclength(path, s0);
    chain.capsules.emplace_back(p, p, radius);
    return chain;
  }
  const auto& cum = path.cumulative_arclength();
  const auto& v = path.vertices();
  for (std::size_t i = path.segment_at(s0);
       i < path.segment_count() && cum[i] < s1; ++i) {
    const Scalar a = std::max(s0, cum[i]);
    const Scalar b = std::min(s1, cum[i + 1]);
    const auto pa = (a == cum[i]) ? Point2<Scalar>(v[i])
                                  : point_at_arclength(path, a);
    const auto pb = (b == cum[i + 1]) ? Point2<Scalar>(v[i + 1])
                                      : point_at_arclength(path, b);
    chain.capsules.emplace_back(pa, pb, radius);
    chain.total_arclength += b - a;
  }
  return chain;
}

/// Sweep that tolerates s1 beyond the path end by extending the final
/// segment (open path end). s0 must still lie on the path.
template <typename Scalar>
CapsuleChain<Scalar> sweep_extended(const PolylinePath<Scalar>& path,
                                    Scalar s0, Scalar s1, Scalar radius) {
  if (s1 <= path.length() || path.degenerate()) {
    return sweep(path, s0, std::min(s1, path.length()), radius);
  }
  detail::require_arclength(path, s0, "sweep_extended");
  if (!(radius > Scalar(0))) {
    throw std::domain_error("sweep_extended: radius <= 0");
  }
  CapsuleChain<Scalar> chain;
  if (s0 < path.length()) chain = sweep(path, s0, path.length(), radius);
  const auto tip = point_along_extended(path, s1);
  if (chain.empty()) {
    chain.capsules.emplace_back(path.vertices().back(), tip, radius);
  } else {
    chain.capsules.back().segment_end = tip;
  }
  chain.total_arclength += s1 - std::max(s0, path.length());
  return chain;
}

/// Minimum distance between segments [p0,p1] and [q0,q1] (closed-form
/// clamped projection). Degenerate segments are points.
template <typename Scalar>
Scalar segment_distance(const Point2<Scalar>& p0, const Point2<Scalar>& p1,
                        const Point2<Scalar>& q0, const Point2<Scalar>& q1) {
  const Point2<Scalar> d1 = p1 - p0;
  const Point2<Scalar> d2 = q1 - q0;
  const Point2<Scalar> r = p0 - q0;
  const Scalar a = d1.squaredNorm();
  const Scalar e = d2.squaredNorm();
  const Scalar f = d2.dot(r);
  const Scalar zero(0), one(1);

  Scalar s = zero;
  Scalar t = zero;
  if (a == zero && e == zero) return r.norm();
  if (a == zero) {
    t = std::clamp(f / e, zero, one);
  } else {
    const Scalar c = d1.dot(r);
    if (e == zero) {
      s = std::clamp(-c / a, zero, one);
    } else {
      const Scalar b = d1.dot(d2);
      const Scalar denom = a * e - b * b;
      s = denom > zero ? std::clamp((b * f - c * e) / denom, zero, one) : zero;
      t = (b * s + f) / e;
      if (t < zero) {
        t = zero;
        s = std::clamp(-c / a, zero, one);
      } else if (t > one) {
        t = one;
        s = std::clamp((b - c) / a, zero, one);
      }
    }
  }
  return ((p0 + s * d1) - (q0 + t * d2)).norm();
}

template <typename Scalar>
Scalar core_distance(const Capsule<Scalar>& a, const Capsule<Scalar>& b) {
  return segment_distance(a.segment_start, a.segment_end, b.segment_start,
                          b.segment_end);
}

/// Strict overlap test: touching capsules are disjoint.
template <typename Scalar>
bool capsules_intersect(const Capsule<Scalar>& a, const Capsule<Scalar>& b) {
  return core_distance(a, b) < a.radius + b.radius;
}

template <typename Scalar>
bool chains_disjoint(const CapsuleChain<Scalar>& a,
                     const CapsuleChain<Scalar>& b) {
  for (const auto& ca : a.capsules) {
    for (const auto& cb : b.capsules) {
      if (capsules_intersect(ca, cb)) return false;
    }
  }
  return true;
}

/// Smallest t in [0, length] at which a disc of radius `radius` moving from
/// `start` along unit direction `dir` first overlaps `target` (strictly).
/// Returns nullopt if it never does (tangent contact included).
template <typename Scalar>
std::optional<Scalar> first_contact(const Point2<Scalar>& start,
                                    const Point2<Scalar>& dir, Scalar length,
                                    Scalar radius,
                                    const Capsule<Scalar>& target) {
  const Scalar reach = radius + target.radius;
  const Scalar inf = std::numeric_limits<Scalar>::infinity();
  Scalar lo = inf;
  Scalar hi = -inf;

  // Open interval of line parameters inside the disc of `reach` around c.
  auto disc = [&](const Point2<Scalar>& c) {
    const Point2<Scalar> w = start - c;
    const Scalar b = dir.dot(w);
    const Scalar disc2 = b * b - (w.squaredNorm() - reach * reach);
    if (disc2 <= Scalar(0)) return;
    const Scalar root = std::sqrt(disc2);
    lo = std::min(lo, -b - root);
    hi = std::max(hi, -b + root);
  };
  disc(target.segment_start);
  disc(target.segment_end);

  const Point2<Scalar> axis = target.segment_end - target.segment_start;
  const Scalar axis_len = axis.norm();
  if (axis_len > Scalar(0)) {
    const Point2<Scalar> u = axis / axis_len;
    const Point2<Scalar> n(-u.y(), u.x());
    const Point2<Scalar> w = start - target.segment_start;
    Scalar slab_lo = -inf;
    Scalar slab_hi = inf;
    // Keep parameters with lo_bound < offset + rate * t < hi_bound.
    auto clip = [&](Scalar offset, Scalar rate, Scalar lo_bound,
                    Scalar hi_bound) {
      if (rate == Scalar(0)) {
        if (!(offset > lo_bound && offset < hi_bound)) {
          slab_lo = inf;
          slab_hi = -inf;
        }
        return;
      }
      Scalar t0 = (lo_bound - offset) / rate;
      Scalar t1 = (hi_bound - offset) / rate;
      if (t0 > t1) std::swap(t0, t1);
      slab_lo = std::max(slab_lo, t0);
      slab_hi = std::min(slab_hi, t1);
    };
    clip(w.dot(u), dir.dot(u), Scalar(0), axis_len);
    clip(w.dot(n), dir.dot(n), -reach, reach);
    if (slab_lo < slab_hi) {
      lo = std::min(lo, slab_lo);
      hi = std::max(hi, slab_hi);
    }
  }

  if (!(lo < hi) || hi <= Scalar(0) || lo >= length) return std::nullopt;
  return std::max(lo, Scalar(0));
}

using Point2d = Point2<double>;
using Path2d = PolylinePath<double>;
using Capsule2d = Capsule<double>;
using CapsuleChain2d = CapsuleChain<double>;

}  // namespace sdsim
