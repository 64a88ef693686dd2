#pragma once

#include <array>
#include <cmath>

namespace scatterlab {

using Vec3 = std::array<double, 3>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline Vec3 operator-(const Vec3& a) { return {-a[0], -a[1], -a[2]}; }

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm_sq(const Vec3& a) { return dot(a, a); }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline Vec3 normalized(const Vec3& a) { return (1.0 / norm(a)) * a; }

// Angle between two nonzero vectors, computed with atan2 so that
// nearly parallel vectors keep full relative accuracy.
inline double angle_between(const Vec3& a, const Vec3& b) { return std::atan2(norm(cross(a, b)), dot(a, b)); }

// Right-handed orthonormal frame (e1, e2, axis) with the given unit axis.
struct Frame {
    Vec3 e1;
    Vec3 e2;
    Vec3 axis;

    Vec3 to_world(double u, double v, double w) const { return u * e1 + v * e2 + w * axis; }
};

inline Frame frame_along(const Vec3& unit_axis) {
    const Vec3 helper = std::abs(unit_axis[2]) < 0.9 ? Vec3{0.0, 0.0, 1.0} : Vec3{1.0, 0.0, 0.0};
    const Vec3 e1 = normalized(cross(helper, unit_axis));
    const Vec3 e2 = cross(unit_axis, e1);
    return {e1, e2, unit_axis};
}

// Unit vector at polar angle theta (from +z) in the xz half-plane with x >= 0.
inline Vec3 direction_xz(double theta) { return {std::sin(theta), 0.0, std::cos(theta)}; }

}  // namespace scatterlab
