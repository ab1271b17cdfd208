#include "fbmcf/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace fbmcf {

double eval_P(const ExtendedFields& ext, const Vec3& U, const Vec3& V, const Vec3& X,
              const Vec3& Y, const Vec3& Z) {
    if (!ext.in_support) return 0.0;
    const double AUX = U.dot(ext.A * X);
    const double AVX = V.dot(ext.A * X);
    const double AYZ = Y.dot(ext.A * Z);
    const double gUX = U.dot(ext.g * X);
    const double gVX = V.dot(ext.g * X);
    const double gYZ = Y.dot(ext.g * Z);
    const double nU = ext.nu_flat.dot(U);
    const double nV = ext.nu_flat.dot(V);
    return (AUX * nV + AVX * nU) * gYZ - (gUX * nV + gVX * nU) * AYZ;
}

double eval_P(const BarrierSurface& S, double K, const Vec3& x, const Vec3& U, const Vec3& V,
              const Vec3& X, const Vec3& Y, const Vec3& Z) {
    return eval_P(S.extend(x, K), U, V, X, Y, Z);
}

Mat2 eval_P_sigma(const BarrierSurface& S, double K, const Vec3& x, const VertexGeometry& g) {
    Mat2 P = Mat2::Zero();
    const ExtendedFields ext = S.extend(x, K);
    if (!ext.in_support) return P;
    const Vec3& nu = g.nu;
    P(0, 0) = eval_P(ext, g.t1, g.t1, nu, nu, nu);
    P(0, 1) = eval_P(ext, g.t1, g.t2, nu, nu, nu);
    P(1, 0) = P(0, 1);
    P(1, 1) = eval_P(ext, g.t2, g.t2, nu, nu, nu);
    return P;
}

std::vector<PerturbedSFF> perturbed_sff(const TriMesh& mesh, const GeometryCache& geom,
                                        const BarrierSurface& S, double K) {
    const int nv = mesh.n_vertices();
    std::vector<PerturbedSFF> out(nv);
    for (int v = 0; v < nv; ++v) {
        const VertexGeometry& g = geom.vg[v];
        PerturbedSFF& p = out[v];
        const ExtendedFields ext = S.extend(mesh.positions[v], K);
        if (ext.in_support) {
            p.in_support = true;
            const Vec3& nu = g.nu;
            p.P_sigma(0, 0) = eval_P(ext, g.t1, g.t1, nu, nu, nu);
            p.P_sigma(0, 1) = eval_P(ext, g.t1, g.t2, nu, nu, nu);
            p.P_sigma(1, 0) = p.P_sigma(0, 1);
            p.P_sigma(1, 1) = eval_P(ext, g.t2, g.t2, nu, nu, nu);
        }
        p.A_tilde = g.A + p.P_sigma;
        p.H_tilde = p.A_tilde.trace();
        p.A_tilde_norm2 = p.A_tilde.squaredNorm();
    }
    return out;
}

double quick_K(const BarrierSurface& S, std::uint64_t seed, int samples) {
    auto pts = S.sample_points(samples, seed);
    auto zb = ball_curvatures(S, pts);
    double zmax = 0.0;
    for (auto& [hi, lo] : zb) zmax = std::max(zmax, hi);
    return std::max(zmax, kBarrierKMin);
}

IdentityReport identity_suite(const BarrierSurface& S, int n_points, std::uint64_t seed) {
    if (n_points < 1) throw InsufficientSamples("identity suite needs n_points >= 1");
    IdentityReport rep;
    rep.n_points = n_points;
    const double K = quick_K(S, seed ^ 0x9e3779b97f4a7c15ULL);
    const double eps = std::min(1e-4, 0.125 / K);  // stays inside the chi == 1 band

    std::vector<Vec3> pts = S.sample_points(n_points, seed);
    std::mt19937_64 rng(seed ^ 0xda3e39cb94b95bdbULL);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto rv = [&] { return Vec3(gauss(rng), gauss(rng), gauss(rng)); };

    for (const Vec3& p : pts) {
        const Vec3 nu = S.unit_normal(p);
        const ExtendedFields ext = S.extend(p, K);
        const Vec3 U = rv(), V = rv(), X = rv(), Y = rv(), Z = rv();
        rep.max_abs_P = std::max(rep.max_abs_P, std::abs(eval_P(ext, U, V, X, Y, Z)));

        // (i): X, Y or Z normal to S
        const Vec3 W = gauss(rng) * nu;
        rep.res_i = std::max({rep.res_i, std::abs(eval_P(ext, U, V, W, Y, Z)),
                              std::abs(eval_P(ext, U, V, X, W, Z)),
                              std::abs(eval_P(ext, U, V, X, Y, W))});

        // (ii): U, V tangent
        const Vec3 Ut = U - U.dot(nu) * nu;
        const Vec3 Vt = V - V.dot(nu) * nu;
        rep.res_ii = std::max(rep.res_ii, std::abs(eval_P(ext, Ut, Vt, X, Y, Z)));

        // (iii): repeated tangent argument
        rep.res_iii = std::max(rep.res_iii, std::abs(eval_P(ext, U, Vt, Vt, Vt, Vt)));

        // (iv): both first slots normal
        rep.res_iv = std::max(rep.res_iv, std::abs(eval_P(ext, nu, nu, X, Y, Z)));

        // (v): centered difference of the components along the normal line
        const double pp = eval_P(S, K, p + eps * nu, U, V, X, Y, Z);
        const double pm = eval_P(S, K, p - eps * nu, U, V, X, Y, Z);
        rep.res_v = std::max(rep.res_v, std::abs(pp - pm) / (2.0 * eps));
    }
    return rep;
}

}  // namespace fbmcf
