#pragma once
#include <cmath>

namespace nfem {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
    Vec3 normalized() const { return *this / norm(); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

/// Symmetric 2x2 matrix over the (y,z) chart of a target surface.
struct SymMat2 {
    double yy = 0.0;
    double zz = 0.0;
    double yz = 0.0;

    double det() const { return yy * zz - yz * yz; }
    double trace() const { return yy + zz; }

    /// Solve M s = -g. Caller checks det() != 0.
    void solve_neg(double gy, double gz, double& sy, double& sz) const {
        const double d = det();
        sy = -(zz * gy - yz * gz) / d;
        sz = -(yy * gz - yz * gy) / d;
    }
};

} // namespace nfem
