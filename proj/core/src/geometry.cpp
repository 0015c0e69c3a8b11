#include "crowdsim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace crowdsim {

namespace {

constexpr double kEps = 1e-12;

// > 0 if c lies left of the directed line a->b.
double orient(Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); }

bool on_segment(Vec2 p, Vec2 a, Vec2 b) {
  return std::min(a.x, b.x) - kEps <= p.x && p.x <= std::max(a.x, b.x) + kEps &&
         std::min(a.y, b.y) - kEps <= p.y && p.y <= std::max(a.y, b.y) + kEps;
}

// Boundary-inclusive point-in-triangle test for CCW triangles.
bool point_in_triangle(Vec2 p, Vec2 a, Vec2 b, Vec2 c) {
  return orient(a, b, p) >= -kEps && orient(b, c, p) >= -kEps && orient(c, a, p) >= -kEps;
}

}  // namespace

double signed_area(const Polygon& poly) {
  double twice = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    twice += cross(poly[j], poly[i]);
  }
  return 0.5 * twice;
}

double polygon_area(const Polygon& poly) { return std::abs(signed_area(poly)); }

bool is_ccw(const Polygon& poly) { return signed_area(poly) > 0.0; }

void normalize_winding(Polygon& poly) {
  if (!is_ccw(poly)) std::reverse(poly.begin(), poly.end());
}

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const double d1 = orient(c, d, a);
  const double d2 = orient(c, d, b);
  const double d3 = orient(a, b, c);
  const double d4 = orient(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  if (std::abs(d1) <= kEps && on_segment(a, c, d)) return true;
  if (std::abs(d2) <= kEps && on_segment(b, c, d)) return true;
  if (std::abs(d3) <= kEps && on_segment(c, a, b)) return true;
  if (std::abs(d4) <= kEps && on_segment(d, a, b)) return true;
  return false;
}

bool is_simple_polygon(const Polygon& poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (distance(poly[i], poly[(i + 1) % n]) <= kEps) return false;  // degenerate edge
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      // Skip edges sharing a vertex with edge i.
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      if (segments_intersect(a, b, poly[j], poly[(j + 1) % n])) return false;
    }
  }
  return true;
}

bool point_in_polygon(Vec2 p, const Polygon& poly) {
  const std::size_t n = poly.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = poly[j];
    const Vec2 b = poly[i];
    if (point_segment_distance(p, a, b) <= kEps) return true;
    const bool crosses = (b.y > p.y) != (a.y > p.y);
    if (crosses) {
      const double t = (p.y - b.y) / (a.y - b.y);
      const double x_int = b.x + t * (a.x - b.x);
      if (p.x < x_int) inside = !inside;
    }
  }
  return inside;
}

Vec2 closest_point_on_segment(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len_sq = norm_sq(ab);
  if (len_sq <= kEps * kEps) return a;
  double t = dot(p - a, ab) / len_sq;
  t = std::clamp(t, 0.0, 1.0);
  return a + ab * t;
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  return distance(p, closest_point_on_segment(p, a, b));
}

double distance_to_polygon_boundary(Vec2 p, const Polygon& poly) {
  const std::size_t n = poly.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    best = std::min(best, point_segment_distance(p, poly[j], poly[i]));
  }
  return best;
}

Vec2 closest_point_on_polygon_boundary(Vec2 p, const Polygon& poly) {
  const std::size_t n = poly.size();
  double best = std::numeric_limits<double>::infinity();
  Vec2 best_point = poly.empty() ? p : poly[0];
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 c = closest_point_on_segment(p, poly[j], poly[i]);
    const double d = distance(p, c);
    if (d < best) {
      best = d;
      best_point = c;
    }
  }
  return best_point;
}

double polygon_signed_distance(Vec2 p, const Polygon& poly) {
  const double d = distance_to_polygon_boundary(p, poly);
  return point_in_polygon(p, poly) ? -d : d;
}

double segment_polygon_distance(Vec2 a, Vec2 b, const Polygon& poly) {
  const std::size_t n = poly.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 c = poly[j];
    const Vec2 d = poly[i];
    if (segments_intersect(a, b, c, d)) return 0.0;
    best = std::min(best, point_segment_distance(c, a, b));
    best = std::min(best, point_segment_distance(d, a, b));
    best = std::min(best, point_segment_distance(a, c, d));
    best = std::min(best, point_segment_distance(b, c, d));
  }
  return best;
}

std::vector<Triangle> triangulate(const Polygon& ccw_poly) {
  std::vector<Triangle> out;
  const std::size_t n = ccw_poly.size();
  if (n < 3) return out;
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;

  auto vertex = [&](std::size_t k) -> Vec2 { return ccw_poly[idx[k]]; };

  while (idx.size() > 3) {
    bool clipped = false;
    const std::size_t m = idx.size();
    for (std::size_t k = 0; k < m; ++k) {
      const Vec2 prev = vertex((k + m - 1) % m);
      const Vec2 cur = vertex(k);
      const Vec2 next = vertex((k + 1) % m);
      const double turn = orient(prev, cur, next);
      if (turn < -kEps) continue;  // reflex vertex, not an ear
      if (turn <= kEps) {
        // Collinear vertex: drop it, the boundary is unchanged.
        idx.erase(idx.begin() + static_cast<long>(k));
        clipped = true;
        break;
      }
      bool blocked = false;
      for (std::size_t m2 = 0; m2 < m; ++m2) {
        if (m2 == k || m2 == (k + m - 1) % m || m2 == (k + 1) % m) continue;
        if (point_in_triangle(vertex(m2), prev, cur, next)) {
          blocked = true;
          break;
        }
      }
      if (blocked) continue;
      out.push_back({prev, cur, next});
      idx.erase(idx.begin() + static_cast<long>(k));
      clipped = true;
      break;
    }
    if (!clipped) throw std::runtime_error("triangulate: no ear found (polygon not simple?)");
  }
  out.push_back({vertex(0), vertex(1), vertex(2)});
  return out;
}

Polygon clip_to_convex(const Polygon& subject, const Polygon& convex_ccw) {
  Polygon out = subject;
  const std::size_t n = convex_ccw.size();
  for (std::size_t i = 0, j = n - 1; i < n && !out.empty(); j = i++) {
    const Vec2 a = convex_ccw[j];
    const Vec2 b = convex_ccw[i];
    const Polygon input = std::move(out);
    out = Polygon{};
    const std::size_t m = input.size();
    for (std::size_t k = 0; k < m; ++k) {
      const Vec2 s = input[k];
      const Vec2 e = input[(k + 1) % m];
      const double ds = orient(a, b, s);
      const double de = orient(a, b, e);
      auto intersect = [&]() -> Vec2 {
        const double t = ds / (ds - de);
        return s + (e - s) * t;
      };
      if (de >= 0.0) {
        if (ds < 0.0) out.push_back(intersect());
        out.push_back(e);
      } else if (ds >= 0.0) {
        out.push_back(intersect());
      }
    }
  }
  return out;
}

double polygon_intersection_area(const Polygon& subject, const Polygon& region) {
  if (subject.size() < 3 || region.size() < 3) return 0.0;
  Polygon subj = subject;
  normalize_winding(subj);
  Polygon reg = region;
  normalize_winding(reg);
  double total = 0.0;
  for (const Triangle& tri : triangulate(reg)) {
    const Polygon clip{tri[0], tri[1], tri[2]};
    const Polygon piece = clip_to_convex(subj, clip);
    if (piece.size() >= 3) total += std::abs(signed_area(piece));
  }
  return total;
}

std::optional<double> ray_segment_hit(Vec2 origin, Vec2 dir, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double denom = cross(dir, ab);
  if (std::abs(denom) <= kEps) return std::nullopt;  // parallel
  const Vec2 ao = a - origin;
  const double t = cross(ao, ab) / denom;
  const double s = cross(ao, dir) / denom;
  if (t < 0.0 || s < 0.0 || s > 1.0) return std::nullopt;
  return t;
}

std::optional<double> ray_circle_hit(Vec2 origin, Vec2 dir, Vec2 center, double radius) {
  const Vec2 oc = origin - center;
  const double a = norm_sq(dir);
  if (a <= kEps) return std::nullopt;
  const double b = 2.0 * dot(oc, dir);
  const double c = norm_sq(oc) - radius * radius;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return std::nullopt;
  const double sq = std::sqrt(disc);
  const double t1 = (-b - sq) / (2.0 * a);
  const double t2 = (-b + sq) / (2.0 * a);
  if (t1 > kEps) return t1;
  if (t2 > kEps) return t2;
  return std::nullopt;
}

}  // namespace crowdsim
