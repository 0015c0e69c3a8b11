#pragma once

#include <array>
#include <optional>
#include <vector>

#include "crowdsim/vec2.hpp"

namespace crowdsim {

// Ordered vertex list; geometry routines expect simple polygons.
using Polygon = std::vector<Vec2>;

using Triangle = std::array<Vec2, 3>;

double signed_area(const Polygon& poly);

double polygon_area(const Polygon& poly);

bool is_ccw(const Polygon& poly);

// Flips vertex order in place so the polygon winds counterclockwise.
void normalize_winding(Polygon& poly);

// True if no two non-adjacent edges intersect and no edge is degenerate.
bool is_simple_polygon(const Polygon& poly);

// Boundary points count as inside.
bool point_in_polygon(Vec2 p, const Polygon& poly);

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);

Vec2 closest_point_on_segment(Vec2 p, Vec2 a, Vec2 b);

double distance_to_polygon_boundary(Vec2 p, const Polygon& poly);

Vec2 closest_point_on_polygon_boundary(Vec2 p, const Polygon& poly);

// Positive outside the polygon, negative inside, zero on the boundary.
double polygon_signed_distance(Vec2 p, const Polygon& poly);

// Minimum distance between segment [a,b] and the polygon boundary.
double segment_polygon_distance(Vec2 a, Vec2 b, const Polygon& poly);

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

// Ear-clipping triangulation of a simple CCW polygon.
std::vector<Triangle> triangulate(const Polygon& ccw_poly);

// Clips a polygon against a convex CCW polygon (Sutherland-Hodgman).
Polygon clip_to_convex(const Polygon& subject, const Polygon& convex_ccw);

// Area of subject ∩ region for simple polygons (region may be concave).
double polygon_intersection_area(const Polygon& subject, const Polygon& region);

// Smallest t >= 0 with origin + t*dir on segment [a,b], if any.
std::optional<double> ray_segment_hit(Vec2 origin, Vec2 dir, Vec2 a, Vec2 b);

// Smallest t > 0 with origin + t*dir on the circle, if any.
std::optional<double> ray_circle_hit(Vec2 origin, Vec2 dir, Vec2 center, double radius);

}  // namespace crowdsim
