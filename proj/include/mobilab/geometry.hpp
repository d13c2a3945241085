#pragma once

#include <cmath>

namespace mobilab {

// Planar position or velocity, meters (or meters/second).
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Vec2&, const Vec2&) = default;

    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
};

inline Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
inline Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
inline Vec2 operator*(const Vec2& a, double s) { return {a.x * s, a.y * s}; }
inline Vec2 operator*(double s, const Vec2& a) { return a * s; }
inline Vec2 operator/(const Vec2& a, double s) { return {a.x / s, a.y / s}; }

inline double norm(const Vec2& v) { return std::hypot(v.x, v.y); }
inline double squared_norm(const Vec2& v) { return v.x * v.x + v.y * v.y; }
inline double distance(const Vec2& a, const Vec2& b) { return norm(a - b); }
inline bool is_finite(const Vec2& v) { return std::isfinite(v.x) && std::isfinite(v.y); }

// Linear interpolation, f in [0, 1].
inline Vec2 lerp(const Vec2& a, const Vec2& b, double f) { return a + (b - a) * f; }

// Axis-aligned area [0, width] x [0, height].
struct Area {
    double width = 0.0;
    double height = 0.0;

    bool contains(const Vec2& p) const {
        return p.x >= 0.0 && p.y >= 0.0 && p.x <= width && p.y <= height;
    }
    Vec2 clamp(const Vec2& p) const {
        return {std::fmin(std::fmax(p.x, 0.0), width), std::fmin(std::fmax(p.y, 0.0), height)};
    }
    Vec2 center() const { return {width / 2.0, height / 2.0}; }
};

}  // namespace mobilab
