#pragma once

#include <array>
#include <cmath>
#include <algorithm>

namespace acpl {

struct Vec3 {
  double x = 0, y = 0, z = 0;

  Vec3() = default;
  Vec3(double x_, double y_, double z_ = 0) : x(x_), y(y_), z(z_) {}

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm2(const Vec3& a) { return dot(a, a); }
inline double norm(const Vec3& a) { return std::sqrt(norm2(a)); }
inline double dist(const Vec3& a, const Vec3& b) { return norm(a - b); }

inline double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  Vec3 ab = b - a;
  double L2 = norm2(ab);
  if (L2 == 0.0) return dist(p, a);
  double t = std::clamp(dot(p - a, ab) / L2, 0.0, 1.0);
  return dist(p, a + ab * t);
}

inline double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  // project onto the triangle plane, fall back to edges when outside
  Vec3 ab = b - a, ac = c - a, ap = p - a;
  double d1 = dot(ab, ap), d2 = dot(ac, ap);
  if (d1 <= 0 && d2 <= 0) return dist(p, a);
  Vec3 bp = p - b;
  double d3 = dot(ab, bp), d4 = dot(ac, bp);
  if (d3 >= 0 && d4 <= d3) return dist(p, b);
  Vec3 cp = p - c;
  double d5 = dot(ab, cp), d6 = dot(ac, cp);
  if (d6 >= 0 && d5 <= d6) return dist(p, c);
  double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) return point_segment_distance(p, a, b);
  double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) return point_segment_distance(p, a, c);
  double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) return point_segment_distance(p, b, c);
  double denom = 1.0 / (va + vb + vc);
  double v = vb * denom, w = vc * denom;
  return dist(p, a + ab * v + ac * w);
}

// twice the signed area of (a,b,c); positive when c is left of a->b
inline double orient2d(const Vec3& a, const Vec3& b, const Vec3& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

// six times the signed volume of (a,b,c,d); positive when d is on the
// positive side of the oriented plane (a,b,c)
inline double orient3d(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return dot(cross(b - a, c - a), d - a);
}

enum class Cross { None, Hit, Degenerate };

// segment p->q against triangle (a,b,c); sign = +1 when the segment crosses
// in the direction of the triangle normal. Degenerate when any orientation
// predicate is within rel_tol of zero relative to its natural scale (the
// caller decides whether that is an error).
inline Cross segment_triangle_cross(const Vec3& p, const Vec3& q,
                                    const Vec3& a, const Vec3& b, const Vec3& c,
                                    int& sign, double rel_tol = 1e-12) {
  Vec3 nrm = cross(b - a, c - a);
  double nn = norm(nrm);
  double sp = dot(nrm, p - a);
  double sq = dot(nrm, q - a);
  double tol_pq = rel_tol * nn * (norm(p - a) + norm(q - a) + 1e-300);
  if (std::abs(sp) <= tol_pq || std::abs(sq) <= tol_pq) return Cross::Degenerate;
  if ((sp > 0) == (sq > 0)) return Cross::None;
  double u = orient3d(p, q, a, b);
  double v = orient3d(p, q, b, c);
  double w = orient3d(p, q, c, a);
  double scale = norm(q - p) * (norm(a - p) + norm(b - p) + norm(c - p));
  double tol_uvw = rel_tol * scale * (norm(b - a) + norm(c - b) + norm(a - c));
  if (std::abs(u) <= tol_uvw || std::abs(v) <= tol_uvw || std::abs(w) <= tol_uvw)
    return Cross::Degenerate;
  bool pos = u > 0, posv = v > 0, posw = w > 0;
  if (pos != posv || pos != posw) return Cross::None;
  sign = (sp < 0) ? +1 : -1;  // p below the plane means q moves along the normal
  return Cross::Hit;
}

// segment p->q against segment a->b in the plane (z ignored); sign = +1 when
// p->q crosses a->b from its left side to its right side
inline Cross segment_segment_cross_2d(const Vec3& p, const Vec3& q,
                                      const Vec3& a, const Vec3& b,
                                      int& sign, double rel_tol = 1e-12) {
  double Lab = norm(b - a), Lpq = norm(q - p);
  double sp = orient2d(a, b, p);
  double sq = orient2d(a, b, q);
  double tol_pq = rel_tol * Lab * (norm(p - a) + norm(q - a) + 1e-300);
  if (std::abs(sp) <= tol_pq || std::abs(sq) <= tol_pq) return Cross::Degenerate;
  if ((sp > 0) == (sq > 0)) return Cross::None;
  double sa = orient2d(p, q, a);
  double sb = orient2d(p, q, b);
  double tol_ab = rel_tol * Lpq * (norm(a - p) + norm(b - p) + 1e-300);
  if (std::abs(sa) <= tol_ab || std::abs(sb) <= tol_ab) return Cross::Degenerate;
  if ((sa > 0) == (sb > 0)) return Cross::None;
  sign = (sp > 0) ? +1 : -1;
  return Cross::Hit;
}

// closest points between segments a0->a1 and b0->b1
inline double segment_segment_closest(const Vec3& a0, const Vec3& a1,
                                      const Vec3& b0, const Vec3& b1,
                                      Vec3& pa, Vec3& pb) {
  Vec3 u = a1 - a0, v = b1 - b0, w = a0 - b0;
  double A = dot(u, u), B = dot(u, v), C = dot(v, v);
  double D = dot(u, w), E = dot(v, w);
  double den = A * C - B * B;
  double s = 0, t = 0;
  if (den > 1e-14 * A * C + 1e-300) {
    s = std::clamp((B * E - C * D) / den, 0.0, 1.0);
  }
  double tn = B * s + E;
  if (C > 0) t = std::clamp(tn / C, 0.0, 1.0);
  // re-clamp s against the clamped t
  if (A > 0) s = std::clamp((B * t - D) / A, 0.0, 1.0);
  pa = a0 + u * s;
  pb = b0 + v * t;
  return dist(pa, pb);
}

}  // namespace acpl
