#pragma once

#include <cstdint>
#include <vector>

#include "fbmcf/barrier.hpp"
#include "fbmcf/mesh.hpp"
#include "fbmcf/types.hpp"
#include "fbmcf/vertex_geometry.hpp"

namespace fbmcf {

// Perturbed second fundamental form at a vertex. Components live in the same
// tangent frame as VertexGeometry::A, so A_tilde = A + P_sigma is a plain sum.
struct PerturbedSFF {
    Mat2 P_sigma = Mat2::Zero();
    Mat2 A_tilde = Mat2::Zero();
    double H_tilde = 0.0;
    double A_tilde_norm2 = 0.0;
    bool in_support = false;
};

// The (0,5)-tensor built from the extended barrier fields:
//   P(U,V,X,Y,Z) = (A(U,X) nb(V) + A(V,X) nb(U)) g(Y,Z)
//                - (g(U,X) nb(V) + g(V,X) nb(U)) A(Y,Z)
// with A, g tangentially projected and nb the un-projected co-normal, all
// truncated by chi_K. Symmetric in (U,V); identically zero outside the
// truncation support and for umbilic barriers.
double eval_P(const BarrierSurface& S, double K, const Vec3& x, const Vec3& U, const Vec3& V,
              const Vec3& X, const Vec3& Y, const Vec3& Z);

// Same contraction from precomputed extended fields.
double eval_P(const ExtendedFields& ext, const Vec3& U, const Vec3& V, const Vec3& X,
              const Vec3& Y, const Vec3& Z);

// P_sigma(e_i, e_j) = P(e_i, e_j, nu, nu, nu) in the vertex tangent frame.
Mat2 eval_P_sigma(const BarrierSurface& S, double K, const Vec3& x, const VertexGeometry& g);

std::vector<PerturbedSFF> perturbed_sff(const TriMesh& mesh, const GeometryCache& geom,
                                        const BarrierSurface& S, double K);

// Residuals of the pointwise vanishing identities of the tensor on S:
//  (i)   vanishing when X, Y or Z is normal to S
//  (ii)  vanishing when U, V are tangent
//  (iii) P(U,V,V,V,V) = 0 for tangent V
//  (iv)  P(nu,nu,.,.,.) = 0
//  (v)   normal derivative of P vanishes (centered differences)
struct IdentityReport {
    double res_i = 0.0;
    double res_ii = 0.0;
    double res_iii = 0.0;
    double res_iv = 0.0;
    double res_v = 0.0;
    int n_points = 0;
    double max_abs_P = 0.0;  // over the random evaluations
};

IdentityReport identity_suite(const BarrierSurface& S, int n_points, std::uint64_t seed);

// Ball-curvature estimate of K from a modest sample (clamped at kBarrierKMin).
double quick_K(const BarrierSurface& S, std::uint64_t seed, int samples = 300);

}  // namespace fbmcf
