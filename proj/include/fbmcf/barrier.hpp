#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "fbmcf/types.hpp"

namespace fbmcf {

enum class BarrierKind { Plane, Sphere, Cylinder, Ellipsoid, Slab, CustomQuadric };

const char* barrier_kind_name(BarrierKind k);

// Frame and curvature data of the barrier at a point p with |phi(p)| ~ 0.
// A is expressed in the orthonormal tangent basis {t1, t2}; sign convention
// A(u,v) = -<D_u v, nu_S>, so a sphere with outward normal has A = I/R.
struct BarrierPointFrame {
    Vec3 p;
    Vec3 nu;
    Vec3 t1, t2;
    Mat2 A;
    double H = 0.0;
    Mat2 Aring;

    // A as a world-space bilinear form (zero on the normal direction)
    Mat3 A_world() const;
};

// Sampled bounds on the barrier geometry: ball-curvature bound K and the
// derivative bounds |grad_S A_S| <= H_S * L1, |grad_S^2 Aring_S| <= L2.
struct BarrierBounds {
    double K = 0.0;
    double L1 = 0.0;
    double L2 = 0.0;
    int sample_count = 0;
};

struct ClosestPointResult {
    double d = 0.0;  // signed distance, positive on the nu_S side
    Vec3 p;          // closest point on S
    int iterations = 0;
};

// Extended barrier fields at a point x off the surface: each tensor is the
// value at the closest point, pre-composed with tangential projection (the
// co-normal nu_flat skips the projection), constant along the normal line and
// truncated by chi_K. `chi` is reported separately so callers can compose.
struct ExtendedFields {
    bool in_support = false;  // |d| < (1/K)/2
    double chi = 0.0;
    double d = 0.0;
    Vec3 closest = Vec3::Zero();
    Vec3 nu = Vec3::Zero();      // unit normal at the closest point (untruncated)
    Mat3 A = Mat3::Zero();       // chi * projected A_S
    Mat3 g = Mat3::Zero();       // chi * projected metric
    Vec3 nu_flat = Vec3::Zero(); // chi * nu (no tangential projection)
};

class BarrierSurface {
public:
    static BarrierSurface plane(const Vec3& normal, double offset, int orientation_sign = +1);
    static BarrierSurface sphere(double radius, int orientation_sign = +1);
    static BarrierSurface cylinder(double radius, int orientation_sign = +1);  // axis e_z
    static BarrierSurface ellipsoid(double a, double b, double c, int orientation_sign = +1);
    // Two planes z = +-gap/2 with normals pointing away from the gap, so the
    // interior ball curvature seen from either sheet is 2/gap.
    static BarrierSurface slab(double gap, int orientation_sign = +1);
    // phi(x) = x^T Q x + b.x + c
    static BarrierSurface quadric(const Mat3& Q, const Vec3& b, double c, int orientation_sign = +1);

    BarrierKind kind() const { return kind_; }
    const std::vector<double>& params() const { return params_; }
    int orientation_sign() const { return sign_; }

    double phi(const Vec3& x) const;
    Vec3 grad(const Vec3& x) const;
    Mat3 hess(const Vec3& x) const;

    // orientation_sign * grad/|grad|; throws DegenerateGradient.
    Vec3 unit_normal(const Vec3& x) const;

    // Closest-point projection: damped Newton on the stationarity system of
    // |x-p|^2/2 subject to phi(p)=0, seeded by level-set gradient descent.
    // Throws NoConvergence. If check_width, throws OutsideTubular when |d|
    // exceeds tubular_width().
    ClosestPointResult signed_distance(const Vec3& x, bool check_width = false) const;
    std::optional<ClosestPointResult> try_signed_distance(const Vec3& x) const;

    BarrierPointFrame surface_frame(const Vec3& p) const;

    ExtendedFields extend(const Vec3& x, double K) const;

    // Cheap conservative lower bound for dist(x, S); used to skip projection
    // solves far outside the truncation support.
    double distance_lower_bound(const Vec3& x) const;

    double tubular_width() const;

    // True when the trace-free second fundamental form vanishes identically.
    bool is_umbilic() const { return kind_ == BarrierKind::Plane || kind_ == BarrierKind::Sphere; }

    // Deterministic quasi-random points on S (used for bound estimation and
    // the identity suites).
    std::vector<Vec3> sample_points(int n, std::uint64_t seed) const;

    // Length scale of the sampled patch (for planes/cylinders/slabs the
    // sampling window, otherwise the semi-axes).
    double patch_scale() const;

private:
    BarrierSurface(BarrierKind k, std::vector<double> params, int sign)
        : kind_(k), params_(std::move(params)), sign_(sign) {}

    BarrierKind kind_;
    std::vector<double> params_;
    int sign_;
};

// Smooth truncation profile: 1 on (-inf,1], 0 on [2,inf), C^2 piecewise cubic
// in between with chi' >= -2 and |chi''| <= 5.
double chi_profile(double s);
double chi_profile_d1(double s);
double chi_profile_d2(double s);

// chi_K(d) = chi(|d| / ((1/K)/4)); throws NonpositiveK.
double cutoff_chi(double d, double K);

// Interior/exterior ball curvatures per sample: (Zbar, Zlow) where
// Zbar(p) = max_{q != p} 2<p-q, nu(p)>/|p-q|^2 and Zlow the min.
std::vector<std::pair<double, double>> ball_curvatures(const BarrierSurface& S,
                                                       const std::vector<Vec3>& samples);

// Appends, for each sample, the projected pair p +- delta e_max along the
// direction of largest principal curvature; the sampled supremum then
// resolves the osculating limit Zbar >= kappa_max up to O(delta^2).
std::vector<Vec3> with_curvature_probes(const BarrierSurface& S, std::vector<Vec3> samples,
                                        double delta = 1e-4);

// K = max(max Zbar, K_min); L1, L2 from finite differences of the frame along
// surface directions. Estimates, not certified bounds.
BarrierBounds estimate_bounds(const BarrierSurface& S, const std::vector<Vec3>& samples,
                              double K_min = 0.1);

inline constexpr double kBarrierKMin = 0.1;

}  // namespace fbmcf
