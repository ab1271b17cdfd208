#include "fbmcf/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace fbmcf {

namespace {

constexpr double kHuge = 1e30;

// Transport an orthonormal tangent pair to a nearby tangent plane by
// projection + Gram-Schmidt (first-order parallel transport along geodesics).
void transport_basis(const Vec3& t1, const Vec3& t2, const Vec3& nu, Vec3& o1, Vec3& o2) {
    o1 = (t1 - nu.dot(t1) * nu).normalized();
    Vec3 r2 = t2 - nu.dot(t2) * nu;
    r2 -= o1.dot(r2) * o1;
    o2 = r2.normalized();
}

}  // namespace

const char* barrier_kind_name(BarrierKind k) {
    switch (k) {
        case BarrierKind::Plane: return "plane";
        case BarrierKind::Sphere: return "sphere";
        case BarrierKind::Cylinder: return "cylinder";
        case BarrierKind::Ellipsoid: return "ellipsoid";
        case BarrierKind::Slab: return "slab";
        case BarrierKind::CustomQuadric: return "quadric";
    }
    return "?";
}

Mat3 BarrierPointFrame::A_world() const {
    Eigen::Matrix<double, 3, 2> B;
    B.col(0) = t1;
    B.col(1) = t2;
    return B * A * B.transpose();
}

// ---------------------------------------------------------------------------
// constructors

BarrierSurface BarrierSurface::plane(const Vec3& normal, double offset, int sign) {
    if (normal.norm() < 1e-14) throw InvalidParams("plane normal must be nonzero");
    Vec3 n = normal.normalized();
    return BarrierSurface(BarrierKind::Plane, {n.x(), n.y(), n.z(), offset}, sign);
}

BarrierSurface BarrierSurface::sphere(double radius, int sign) {
    if (radius <= 0) throw InvalidParams("sphere radius must be positive");
    return BarrierSurface(BarrierKind::Sphere, {radius}, sign);
}

BarrierSurface BarrierSurface::cylinder(double radius, int sign) {
    if (radius <= 0) throw InvalidParams("cylinder radius must be positive");
    return BarrierSurface(BarrierKind::Cylinder, {radius}, sign);
}

BarrierSurface BarrierSurface::ellipsoid(double a, double b, double c, int sign) {
    if (a <= 0 || b <= 0 || c <= 0) throw InvalidParams("ellipsoid semi-axes must be positive");
    return BarrierSurface(BarrierKind::Ellipsoid, {a, b, c}, sign);
}

BarrierSurface BarrierSurface::slab(double gap, int sign) {
    if (gap <= 0) throw InvalidParams("slab gap must be positive");
    return BarrierSurface(BarrierKind::Slab, {gap}, sign);
}

BarrierSurface BarrierSurface::quadric(const Mat3& Q, const Vec3& b, double c, int sign) {
    Mat3 Qs = 0.5 * (Q + Q.transpose());
    std::vector<double> p(13);
    for (int i = 0; i < 9; ++i) p[i] = Qs(i / 3, i % 3);
    p[9] = b.x(); p[10] = b.y(); p[11] = b.z();
    p[12] = c;
    return BarrierSurface(BarrierKind::CustomQuadric, std::move(p), sign);
}

// ---------------------------------------------------------------------------
// level set

double BarrierSurface::phi(const Vec3& x) const {
    switch (kind_) {
        case BarrierKind::Plane: {
            Vec3 n(params_[0], params_[1], params_[2]);
            return n.dot(x) - params_[3];
        }
        case BarrierKind::Sphere:
            return x.squaredNorm() - params_[0] * params_[0];
        case BarrierKind::Cylinder:
            return x.x() * x.x() + x.y() * x.y() - params_[0] * params_[0];
        case BarrierKind::Ellipsoid: {
            const double a = params_[0], b = params_[1], c = params_[2];
            return x.x() * x.x() / (a * a) + x.y() * x.y() / (b * b) + x.z() * x.z() / (c * c) - 1.0;
        }
        case BarrierKind::Slab: {
            const double h = 0.5 * params_[0];
            return x.z() * x.z() - h * h;
        }
        case BarrierKind::CustomQuadric: {
            Mat3 Q;
            for (int i = 0; i < 9; ++i) Q(i / 3, i % 3) = params_[i];
            Vec3 b(params_[9], params_[10], params_[11]);
            return x.dot(Q * x) + b.dot(x) + params_[12];
        }
    }
    return 0.0;
}

Vec3 BarrierSurface::grad(const Vec3& x) const {
    switch (kind_) {
        case BarrierKind::Plane:
            return Vec3(params_[0], params_[1], params_[2]);
        case BarrierKind::Sphere:
            return 2.0 * x;
        case BarrierKind::Cylinder:
            return Vec3(2.0 * x.x(), 2.0 * x.y(), 0.0);
        case BarrierKind::Ellipsoid: {
            const double a = params_[0], b = params_[1], c = params_[2];
            return Vec3(2.0 * x.x() / (a * a), 2.0 * x.y() / (b * b), 2.0 * x.z() / (c * c));
        }
        case BarrierKind::Slab:
            return Vec3(0.0, 0.0, 2.0 * x.z());
        case BarrierKind::CustomQuadric: {
            Mat3 Q;
            for (int i = 0; i < 9; ++i) Q(i / 3, i % 3) = params_[i];
            Vec3 b(params_[9], params_[10], params_[11]);
            return 2.0 * Q * x + b;
        }
    }
    return Vec3::Zero();
}

Mat3 BarrierSurface::hess(const Vec3&) const {
    switch (kind_) {
        case BarrierKind::Plane:
            return Mat3::Zero();
        case BarrierKind::Sphere:
            return 2.0 * Mat3::Identity();
        case BarrierKind::Cylinder: {
            Mat3 H = Mat3::Zero();
            H(0, 0) = H(1, 1) = 2.0;
            return H;
        }
        case BarrierKind::Ellipsoid: {
            const double a = params_[0], b = params_[1], c = params_[2];
            Mat3 H = Mat3::Zero();
            H(0, 0) = 2.0 / (a * a);
            H(1, 1) = 2.0 / (b * b);
            H(2, 2) = 2.0 / (c * c);
            return H;
        }
        case BarrierKind::Slab: {
            Mat3 H = Mat3::Zero();
            H(2, 2) = 2.0;
            return H;
        }
        case BarrierKind::CustomQuadric: {
            Mat3 Q;
            for (int i = 0; i < 9; ++i) Q(i / 3, i % 3) = params_[i];
            return 2.0 * Q;
        }
    }
    return Mat3::Zero();
}

Vec3 BarrierSurface::unit_normal(const Vec3& x) const {
    Vec3 g = grad(x);
    const double n = g.norm();
    if (n < 1e-12) throw DegenerateGradient("grad phi vanishes at query point");
    return double(sign_) * g / n;
}

// ---------------------------------------------------------------------------
// closest point

double BarrierSurface::tubular_width() const {
    switch (kind_) {
        case BarrierKind::Plane: return kHuge;
        case BarrierKind::Sphere: return 0.9 * params_[0];
        case BarrierKind::Cylinder: return 0.9 * params_[0];
        case BarrierKind::Ellipsoid: {
            const double a = std::max({params_[0], params_[1], params_[2]});
            const double c = std::min({params_[0], params_[1], params_[2]});
            return 0.5 * c * c / a;
        }
        case BarrierKind::Slab: return 0.45 * params_[0];
        case BarrierKind::CustomQuadric: return kHuge;
    }
    return kHuge;
}

double BarrierSurface::distance_lower_bound(const Vec3& x) const {
    switch (kind_) {
        case BarrierKind::Plane: {
            Vec3 n(params_[0], params_[1], params_[2]);
            return std::abs(n.dot(x) - params_[3]);
        }
        case BarrierKind::Sphere:
            return std::abs(x.norm() - params_[0]);
        case BarrierKind::Cylinder:
            return std::abs(std::hypot(x.x(), x.y()) - params_[0]);
        case BarrierKind::Slab:
            return std::abs(std::abs(x.z()) - 0.5 * params_[0]);
        case BarrierKind::Ellipsoid: {
            const double a = std::max({params_[0], params_[1], params_[2]});
            const double c = std::min({params_[0], params_[1], params_[2]});
            const double gmax = 2.0 * (std::max(x.norm(), a) + a) / (c * c);
            return std::abs(phi(x)) / gmax;
        }
        case BarrierKind::CustomQuadric:
            return 0.0;
    }
    return 0.0;
}

ClosestPointResult BarrierSurface::signed_distance(const Vec3& x, bool check_width) const {
    ClosestPointResult out;
    switch (kind_) {
        case BarrierKind::Plane: {
            Vec3 n(params_[0], params_[1], params_[2]);
            const double s = n.dot(x) - params_[3];
            out.p = x - s * n;
            out.d = double(sign_) * s;
            break;
        }
        case BarrierKind::Sphere: {
            const double r = x.norm();
            if (r < 1e-12) throw NoConvergence("closest point undefined at sphere center");
            out.p = x * (params_[0] / r);
            out.d = double(sign_) * (r - params_[0]);
            break;
        }
        case BarrierKind::Cylinder: {
            const double r = std::hypot(x.x(), x.y());
            if (r < 1e-12) throw NoConvergence("closest point undefined on cylinder axis");
            const double s = params_[0] / r;
            out.p = Vec3(x.x() * s, x.y() * s, x.z());
            out.d = double(sign_) * (r - params_[0]);
            break;
        }
        case BarrierKind::Slab: {
            const double h = 0.5 * params_[0];
            if (x.z() >= 0.0) {
                out.p = Vec3(x.x(), x.y(), h);
                out.d = double(sign_) * (x.z() - h);
            } else {
                out.p = Vec3(x.x(), x.y(), -h);
                out.d = double(sign_) * (-x.z() - h);
            }
            break;
        }
        default: {
            // damped Newton on the stationarity system of min |x-p|^2, phi(p)=0
            Vec3 p = x;
            for (int i = 0; i < 12; ++i) {
                const double f = phi(p);
                Vec3 g = grad(p);
                const double n2 = g.squaredNorm();
                if (n2 < 1e-20) throw NoConvergence("degenerate gradient while seeding");
                p -= (f / n2) * g;
            }
            Vec3 g = grad(p);
            double lam = (x - p).dot(g) / std::max(g.squaredNorm(), 1e-300);
            lam = -lam;  // stationarity: p - x + lam*g = 0
            const double atol = 1e-12 * (1.0 + x.norm());
            auto residual = [&](const Vec3& q, double l) {
                Eigen::Vector4d F;
                F.head<3>() = q - x + l * grad(q);
                F(3) = phi(q);
                return F;
            };
            Eigen::Vector4d F = residual(p, lam);
            bool done = false;
            int it = 0;
            for (; it < 50; ++it) {
                g = grad(p);
                const double gn = std::max(g.norm(), 1e-300);
                const Vec3 nu = g / gn;
                Vec3 tang = (p - x) - (p - x).dot(nu) * nu;
                if (std::abs(phi(p)) / gn <= atol && tang.norm() <= atol) {
                    done = true;
                    break;
                }
                Eigen::Matrix4d J;
                J.topLeftCorner<3, 3>() = Mat3::Identity() + lam * hess(p);
                J.topRightCorner<3, 1>() = g;
                J.bottomLeftCorner<1, 3>() = g.transpose();
                J(3, 3) = 0.0;
                Eigen::Vector4d delta = J.fullPivLu().solve(-F);
                double t = 1.0;
                Eigen::Vector4d Fn;
                while (true) {
                    Fn = residual(p + t * delta.head<3>(), lam + t * delta(3));
                    if (Fn.norm() <= (1.0 - 0.25 * t) * F.norm() || t < 1.0 / 1024.0) break;
                    t *= 0.5;
                }
                p += t * delta.head<3>();
                lam += t * delta(3);
                F = Fn;
            }
            if (!done) throw NoConvergence("closest-point Newton did not converge");
            out.p = p;
            out.iterations = it;
            const double dist = (x - p).norm();
            out.d = (x - p).dot(unit_normal(p)) >= 0.0 ? dist : -dist;
            break;
        }
    }
    if (check_width && std::abs(out.d) > tubular_width())
        throw OutsideTubular("query point outside declared tubular neighborhood");
    return out;
}

std::optional<ClosestPointResult> BarrierSurface::try_signed_distance(const Vec3& x) const {
    try {
        return signed_distance(x);
    } catch (const Error&) {
        return std::nullopt;
    }
}

// ---------------------------------------------------------------------------
// frame

BarrierPointFrame BarrierSurface::surface_frame(const Vec3& p) const {
    Vec3 g = grad(p);
    const double gn = g.norm();
    if (gn < 1e-12) throw DegenerateGradient("grad phi vanishes on surface");
    if (std::abs(phi(p)) / gn > 1e-4)
        throw InvalidParams("surface_frame: point is not on the barrier");
    BarrierPointFrame F;
    F.p = p;
    F.nu = double(sign_) * g / gn;
    orthonormal_basis(F.nu, F.t1, F.t2);
    const Mat3 Hphi = hess(p);
    const double s = double(sign_) / gn;
    F.A(0, 0) = s * F.t1.dot(Hphi * F.t1);
    F.A(0, 1) = s * F.t1.dot(Hphi * F.t2);
    F.A(1, 0) = F.A(0, 1);
    F.A(1, 1) = s * F.t2.dot(Hphi * F.t2);
    F.H = F.A.trace();
    F.Aring = F.A - 0.5 * F.H * Mat2::Identity();
    return F;
}

ExtendedFields BarrierSurface::extend(const Vec3& x, double K) const {
    if (K <= 0) throw NonpositiveK("extension requires K > 0");
    ExtendedFields out;
    const double support = 0.5 / K;
    if (distance_lower_bound(x) >= support) return out;
    ClosestPointResult cp = signed_distance(x);
    if (std::abs(cp.d) >= support) return out;
    out.in_support = true;
    out.d = cp.d;
    out.closest = cp.p;
    out.chi = cutoff_chi(cp.d, K);
    BarrierPointFrame F = surface_frame(cp.p);
    out.nu = F.nu;
    const Mat3 proj = Mat3::Identity() - F.nu * F.nu.transpose();
    out.A = out.chi * F.A_world();
    out.g = out.chi * proj;
    out.nu_flat = out.chi * F.nu;
    return out;
}

// ---------------------------------------------------------------------------
// cutoff profile
//
// chi'' is a continuous piecewise-linear ramp: 0 -> -5 on [0, 0.1], -5 on
// [0.1, 0.4], linear through 0 at 0.5 up to +5 at 0.6, mirrored afterwards.
// This integrates to chi' in [-2, 0] and drops chi from 1 to 0 exactly.

namespace {

double chi_base(double u) {  // u in [0, 0.5]
    if (u <= 0.1) return 1.0 - 25.0 * u * u * u / 3.0;
    if (u <= 0.4) {
        const double w = u - 0.1;
        return 1.0 - 1.0 / 120.0 - 0.25 * w - 2.5 * w * w;
    }
    const double w = u - 0.5;
    return 0.5 - 2.0 * w + 25.0 * w * w * w / 3.0;
}

double chi_base_d1(double u) {
    if (u <= 0.1) return -25.0 * u * u;
    if (u <= 0.4) return -0.25 - 5.0 * (u - 0.1);
    const double w = u - 0.5;
    return -2.0 + 25.0 * w * w;
}

double chi_base_d2(double u) {
    if (u <= 0.1) return -50.0 * u;
    if (u <= 0.4) return -5.0;
    return 50.0 * (u - 0.5);
}

}  // namespace

double chi_profile(double s) {
    if (s <= 1.0) return 1.0;
    if (s >= 2.0) return 0.0;
    const double u = s - 1.0;
    return u <= 0.5 ? chi_base(u) : 1.0 - chi_base(1.0 - u);
}

double chi_profile_d1(double s) {
    if (s <= 1.0 || s >= 2.0) return 0.0;
    const double u = s - 1.0;
    return u <= 0.5 ? chi_base_d1(u) : chi_base_d1(1.0 - u);
}

double chi_profile_d2(double s) {
    if (s <= 1.0 || s >= 2.0) return 0.0;
    const double u = s - 1.0;
    return u <= 0.5 ? chi_base_d2(u) : -chi_base_d2(1.0 - u);
}

double cutoff_chi(double d, double K) {
    if (K <= 0) throw NonpositiveK("cutoff requires K > 0");
    return chi_profile(4.0 * K * std::abs(d));
}

// ---------------------------------------------------------------------------
// ball curvatures and bounds

std::vector<std::pair<double, double>> ball_curvatures(const BarrierSurface& S,
                                                       const std::vector<Vec3>& samples) {
    if (samples.size() < 2) throw InsufficientSamples("ball curvatures need >= 2 points");
    const int n = static_cast<int>(samples.size());
    std::vector<Vec3> nu(n);
    for (int i = 0; i < n; ++i) nu[i] = S.unit_normal(samples[i]);
    std::vector<std::pair<double, double>> out(n);
    for (int i = 0; i < n; ++i) {
        double zmax = -kHuge, zmin = kHuge;
        const Vec3 pi = samples[i];
        const Vec3 ni = nu[i];
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const Vec3 dp = pi - samples[j];
            const double r2 = dp.squaredNorm();
            if (r2 < 1e-24) continue;
            const double z = 2.0 * dp.dot(ni) / r2;
            zmax = std::max(zmax, z);
            zmin = std::min(zmin, z);
        }
        out[i] = {zmax, zmin};
    }
    return out;
}

std::vector<Vec3> with_curvature_probes(const BarrierSurface& S, std::vector<Vec3> samples,
                                        double delta) {
    const std::size_t n = samples.size();
    for (std::size_t i = 0; i < n; ++i) {
        const BarrierPointFrame F = S.surface_frame(samples[i]);
        Eigen::SelfAdjointEigenSolver<Mat2> eig(F.A);
        const Vec2 emax = eig.eigenvectors().col(1);
        const Vec3 dir = emax(0) * F.t1 + emax(1) * F.t2;
        for (const double s : {delta, -delta})
            samples.push_back(S.signed_distance(samples[i] + s * dir).p);
    }
    return samples;
}

namespace {

// Components of A_S at q in a reference tangent basis transported from a
// nearby frame.
Mat2 frame_components(const BarrierSurface& S, const Vec3& q, const Vec3& r1, const Vec3& r2,
                      bool trace_free) {
    BarrierPointFrame F = S.surface_frame(q);
    Vec3 e1, e2;
    transport_basis(r1, r2, F.nu, e1, e2);
    const Mat3 Aw = trace_free
                        ? F.A_world() - 0.5 * F.H * (Mat3::Identity() - F.nu * F.nu.transpose())
                        : F.A_world();
    Mat2 M;
    M(0, 0) = e1.dot(Aw * e1);
    M(0, 1) = e1.dot(Aw * e2);
    M(1, 0) = M(0, 1);
    M(1, 1) = e2.dot(Aw * e2);
    return M;
}

// First surface derivative of A_S (or its trace-free part) at p along dir.
Mat2 surface_derivative(const BarrierSurface& S, const Vec3& p, const Vec3& dir, const Vec3& r1,
                        const Vec3& r2, double step, bool trace_free) {
    const Vec3 qp = S.signed_distance(p + step * dir).p;
    const Vec3 qm = S.signed_distance(p - step * dir).p;
    const Mat2 Ap = frame_components(S, qp, r1, r2, trace_free);
    const Mat2 Am = frame_components(S, qm, r1, r2, trace_free);
    const double h = 0.5 * (qp - qm).norm();
    return (Ap - Am) / std::max(2.0 * h, 1e-300);
}

}  // namespace

BarrierBounds estimate_bounds(const BarrierSurface& S, const std::vector<Vec3>& samples,
                              double K_min) {
    if (samples.empty()) throw InsufficientSamples("estimate_bounds needs samples");
    BarrierBounds B;
    B.sample_count = static_cast<int>(samples.size());

    auto zb = ball_curvatures(S, samples);
    double zmax = 0.0;
    for (auto& [hi, lo] : zb) zmax = std::max(zmax, hi);
    B.K = std::max(zmax, K_min);

    const double step = 1e-3 / B.K;
    const double h_floor = 1e-3 * B.K;

    // L1: |grad_S A_S| / H_S
    for (const Vec3& p : samples) {
        BarrierPointFrame F = S.surface_frame(p);
        if (F.H < h_floor) continue;
        double norm2 = 0.0;
        for (const Vec3& dir : {F.t1, F.t2}) {
            Mat2 T = surface_derivative(S, p, dir, F.t1, F.t2, step, false);
            norm2 += T.squaredNorm();
        }
        B.L1 = std::max(B.L1, std::sqrt(norm2) / F.H);
    }

    // L2: |grad_S^2 Aring_S| via nested central differences (subsampled)
    const int stride = std::max<int>(1, static_cast<int>(samples.size()) / 200);
    for (std::size_t si = 0; si < samples.size(); si += stride) {
        const Vec3& p = samples[si];
        BarrierPointFrame F = S.surface_frame(p);
        double norm2 = 0.0;
        for (const Vec3& outer : {F.t1, F.t2}) {
            const Vec3 qp = S.signed_distance(p + step * outer).p;
            const Vec3 qm = S.signed_distance(p - step * outer).p;
            const double h = 0.5 * (qp - qm).norm();
            for (int inner = 0; inner < 2; ++inner) {
                BarrierPointFrame Fp = S.surface_frame(qp);
                BarrierPointFrame Fm = S.surface_frame(qm);
                Vec3 d1p, d2p, d1m, d2m;
                transport_basis(F.t1, F.t2, Fp.nu, d1p, d2p);
                transport_basis(F.t1, F.t2, Fm.nu, d1m, d2m);
                const Vec3 dp = inner == 0 ? d1p : d2p;
                const Vec3 dm = inner == 0 ? d1m : d2m;
                Mat2 Gp = surface_derivative(S, qp, dp, F.t1, F.t2, step, true);
                Mat2 Gm = surface_derivative(S, qm, dm, F.t1, F.t2, step, true);
                Mat2 T = (Gp - Gm) / std::max(2.0 * h, 1e-300);
                norm2 += T.squaredNorm();
            }
        }
        B.L2 = std::max(B.L2, std::sqrt(norm2));
    }
    return B;
}

// ---------------------------------------------------------------------------
// sampling

double BarrierSurface::patch_scale() const {
    switch (kind_) {
        case BarrierKind::Plane: return 2.0;
        case BarrierKind::Sphere: return params_[0];
        case BarrierKind::Cylinder: return 2.0 * params_[0];
        case BarrierKind::Ellipsoid: return std::max({params_[0], params_[1], params_[2]});
        case BarrierKind::Slab: return 2.0 * params_[0];
        case BarrierKind::CustomQuadric: return 2.0;
    }
    return 1.0;
}

std::vector<Vec3> BarrierSurface::sample_points(int n, std::uint64_t seed) const {
    if (n < 1) throw InsufficientSamples("sample count must be positive");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<Vec3> pts;
    pts.reserve(n);
    const double L = patch_scale();
    while (static_cast<int>(pts.size()) < n) {
        switch (kind_) {
            case BarrierKind::Plane: {
                Vec3 nrm(params_[0], params_[1], params_[2]);
                Vec3 t1, t2;
                orthonormal_basis(nrm, t1, t2);
                pts.push_back(params_[3] * nrm + L * unif(rng) * t1 + L * unif(rng) * t2);
                break;
            }
            case BarrierKind::Sphere: {
                Vec3 u(gauss(rng), gauss(rng), gauss(rng));
                if (u.norm() < 1e-8) continue;
                pts.push_back(params_[0] * u.normalized());
                break;
            }
            case BarrierKind::Cylinder: {
                const double a = M_PI * unif(rng);
                pts.push_back(Vec3(params_[0] * std::cos(a), params_[0] * std::sin(a),
                                   L * unif(rng)));
                break;
            }
            case BarrierKind::Ellipsoid: {
                Vec3 u(gauss(rng), gauss(rng), gauss(rng));
                if (u.norm() < 1e-8) continue;
                u.normalize();
                pts.push_back(Vec3(params_[0] * u.x(), params_[1] * u.y(), params_[2] * u.z()));
                break;
            }
            case BarrierKind::Slab: {
                const double z = (unif(rng) >= 0.0 ? 0.5 : -0.5) * params_[0];
                pts.push_back(Vec3(L * unif(rng), L * unif(rng), z));
                break;
            }
            case BarrierKind::CustomQuadric: {
                Vec3 x(L * unif(rng), L * unif(rng), L * unif(rng));
                auto cp = try_signed_distance(x);
                if (!cp) continue;
                pts.push_back(cp->p);
                break;
            }
        }
    }
    return pts;
}

}  // namespace fbmcf
