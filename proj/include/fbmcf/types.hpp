#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace fbmcf {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

// Base for all domain errors; `kind()` matches the error names in the docs.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

#define FBMCF_DEFINE_ERROR(Name)                                        \
    class Name : public Error {                                         \
    public:                                                             \
        explicit Name(const std::string& msg) : Error(#Name, msg) {}    \
    }

FBMCF_DEFINE_ERROR(NoConvergence);
FBMCF_DEFINE_ERROR(OutsideTubular);
FBMCF_DEFINE_ERROR(DegenerateGradient);
FBMCF_DEFINE_ERROR(InsufficientSamples);
FBMCF_DEFINE_ERROR(NonpositiveK);
FBMCF_DEFINE_ERROR(NonManifold);
FBMCF_DEFINE_ERROR(InconsistentOrientation);
FBMCF_DEFINE_ERROR(QuadricFitSingular);
FBMCF_DEFINE_ERROR(BoundaryOffSurface);
FBMCF_DEFINE_ERROR(InvalidParams);
FBMCF_DEFINE_ERROR(MeshDegenerate);
FBMCF_DEFINE_ERROR(NonpositiveHtilde);
FBMCF_DEFINE_ERROR(InsufficientRecords);
FBMCF_DEFINE_ERROR(FitFailed);
FBMCF_DEFINE_ERROR(NonpositiveRemaining);
FBMCF_DEFINE_ERROR(ParseError);
FBMCF_DEFINE_ERROR(ValidationError);
FBMCF_DEFINE_ERROR(IoError);

#undef FBMCF_DEFINE_ERROR

// Deterministic orthonormal completion of a unit vector n.
inline void orthonormal_basis(const Vec3& n, Vec3& t1, Vec3& t2) {
    // pick the coordinate axis least aligned with n
    int k = 0;
    if (std::abs(n.y()) < std::abs(n[k])) k = 1;
    if (std::abs(n.z()) < std::abs(n[k])) k = 2;
    t1 = Vec3::Unit(k).cross(n).normalized();
    t2 = n.cross(t1);
}

// Minimal rotation taking unit vector a to unit vector b.
inline Mat3 rotation_between(const Vec3& a, const Vec3& b) {
    const Vec3 v = a.cross(b);
    const double c = a.dot(b);
    if (c < -1.0 + 1e-14) {
        // opposite vectors: rotate pi about any axis orthogonal to a
        Vec3 t1, t2;
        orthonormal_basis(a, t1, t2);
        return 2.0 * t1 * t1.transpose() - Mat3::Identity();
    }
    Mat3 vx;
    vx << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
    return Mat3::Identity() + vx + vx * vx / (1.0 + c);
}

}  // namespace fbmcf
