#pragma once

#include <vector>

#include "fbmcf/barrier.hpp"
#include "fbmcf/mesh.hpp"
#include "fbmcf/types.hpp"

namespace fbmcf {

// Per-vertex differential data in an orthonormal tangent frame {t1, t2, nu}.
// Sign convention A(u,v) = -<D_u v, nu>: a sphere with outward normal has
// A = I/r and H = 2/r.
struct VertexGeometry {
    Vec3 nu;
    Vec3 t1, t2;
    Mat2 A;
    double H = 0.0;
    double k1 = 0.0, k2 = 0.0;  // principal curvatures, k1 <= k2
    double A_norm2 = 0.0;       // |A|^2 = k1^2 + k2^2
    Vec3 gradH = Vec3::Zero();  // tangential gradient of H (world coords)
    Mat3 A_world;               // A as a world bilinear form
};

// Fermi frame at a boundary vertex: N outward conormal, T boundary tangent.
struct BoundaryFrame {
    int vertex = -1;
    Vec3 N, T, nu;
    double orthogonality_residual = 0.0;  // |<nu, nu_S>|
};

struct GeometryOptions {
    int fit_ring = 2;
    // reflect boundary-fit stencils across the barrier (q -> q - 2 d nu_S)
    bool ghost_reflection = true;
    double boundary_tol = 1e-6;  // BoundaryOffSurface threshold on |d|
};

struct GeometryCache {
    std::vector<VertexGeometry> vg;
    std::vector<double> vertex_area;               // lumped (1/3 of incident faces)
    std::vector<BoundaryFrame> boundary;           // one entry per boundary vertex
    std::vector<int> boundary_index;               // vertex -> index into `boundary`, else -1
    double area = 0.0;
    double boundary_length = 0.0;
    double min_edge = 0.0;
    double max_edge = 0.0;
    double min_angle_deg = 0.0;
    double min_face_area = 0.0;
    double max_abs_A = 0.0;  // max over vertices of |A|
    double int_H2 = 0.0;     // sum H^2 * vertex_area

    double H_min() const;
    double H_max() const;
};

// Computes normals, shape operators, principal curvatures, grad H and the
// boundary Fermi frames. If `barrier` is non-null, boundary vertex fits are
// augmented with ghost-reflected stencil points and frames carry the contact
// residual against the barrier normal. Throws QuadricFitSingular (after a
// 3-ring retry) and BoundaryOffSurface.
GeometryCache compute_geometry(const TriMesh& mesh, const BarrierSurface* barrier,
                               const GeometryOptions& opts = {});

}  // namespace fbmcf
