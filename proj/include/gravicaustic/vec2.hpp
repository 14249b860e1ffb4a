#pragma once

#include <cmath>

namespace gravicaustic {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }

    constexpr Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }

    constexpr double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    // z-component of the 3D cross product; sign tells left/right of *this.
    constexpr double cross(const Vec2& o) const { return x * o.y - y * o.x; }

    double norm() const { return std::hypot(x, y); }
    constexpr double norm2() const { return x * x + y * y; }

    Vec2 normalized() const {
        const double n = norm();
        return {x / n, y / n};
    }
};

constexpr Vec2 operator*(double s, const Vec2& v) { return {s * v.x, s * v.y}; }

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

} // namespace gravicaustic
