#include "fbmcf/vertex_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace fbmcf {

double GeometryCache::H_min() const {
    double m = 1e300;
    for (const auto& g : vg) m = std::min(m, g.H);
    return m;
}

double GeometryCache::H_max() const {
    double m = -1e300;
    for (const auto& g : vg) m = std::max(m, g.H);
    return m;
}

namespace {

struct QuadricFit {
    Mat2 A;
    Vec3 nu, t1, t2;
    bool ok = false;
};

// Fit w = a u^2/2 + b uv + c v^2/2 + d u + e v over the sample offsets and
// convert to the shape operator in the tilt-corrected orthonormal frame.
QuadricFit fit_quadric(const Vec3& p, const Vec3& n0, const std::vector<Vec3>& samples) {
    QuadricFit out;
    if (samples.size() < 5) return out;
    Vec3 t1, t2;
    orthonormal_basis(n0, t1, t2);
    Eigen::MatrixXd M(samples.size(), 5);
    Eigen::VectorXd rhs(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const Vec3 rel = samples[i] - p;
        const double u = rel.dot(t1), v = rel.dot(t2);
        M(i, 0) = 0.5 * u * u;
        M(i, 1) = u * v;
        M(i, 2) = 0.5 * v * v;
        M(i, 3) = u;
        M(i, 4) = v;
        rhs(i) = rel.dot(n0);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M);
    qr.setThreshold(1e-9);
    if (qr.rank() < 5) return out;
    Eigen::VectorXd sol = qr.solve(rhs);
    const double a = sol(0), b = sol(1), c = sol(2), d = sol(3), e = sol(4);

    const double w2 = d * d + e * e;
    const double L = std::sqrt(1.0 + w2);
    Mat2 sff;
    sff << -a, -b, -b, -c;
    sff /= L;
    // g^{-1/2} for g = I + ww^T
    Mat2 ginvh = Mat2::Identity();
    if (w2 > 1e-300) {
        Vec2 wh(d, e);
        wh /= std::sqrt(w2);
        ginvh += (1.0 / L - 1.0) * wh * wh.transpose();
    }
    out.A = ginvh * sff * ginvh;
    out.nu = (n0 - d * t1 - e * t2) / L;
    const Vec3 Tu = t1 + d * n0;
    const Vec3 Tv = t2 + e * n0;
    out.t1 = ginvh(0, 0) * Tu + ginvh(1, 0) * Tv;
    out.t2 = ginvh(0, 1) * Tu + ginvh(1, 1) * Tv;
    out.ok = true;
    return out;
}

}  // namespace

GeometryCache compute_geometry(const TriMesh& mesh, const BarrierSurface* barrier,
                               const GeometryOptions& opts) {
    const int nv = mesh.n_vertices();
    GeometryCache cache;
    cache.vg.resize(nv);
    cache.vertex_area.assign(nv, 0.0);

    // face normals / areas, lumped vertex areas, crude vertex normals
    std::vector<Vec3> vnormal(nv, Vec3::Zero());
    cache.area = 0.0;
    for (int f = 0; f < mesh.n_faces(); ++f) {
        const double area = mesh.face_area(f);
        const Vec3 n = mesh.face_normal(f);
        cache.area += area;
        for (int c = 0; c < 3; ++c) {
            cache.vertex_area[mesh.faces[f][c]] += area / 3.0;
            vnormal[mesh.faces[f][c]] += area * n;
        }
    }
    for (int v = 0; v < nv; ++v) {
        const double len = vnormal[v].norm();
        if (len < 1e-300) throw QuadricFitSingular("vertex with vanishing normal estimate");
        vnormal[v] /= len;
    }

    const MeshQuality q = mesh_quality(mesh);
    cache.min_edge = q.min_edge;
    cache.max_edge = q.max_edge;
    cache.min_angle_deg = q.min_angle_deg;
    cache.min_face_area = q.min_area;

    // ghost positions for boundary stencils, memoized per interior vertex
    std::vector<std::optional<Vec3>> ghost(nv);
    auto ghost_of = [&](int u) -> Vec3 {
        if (!ghost[u]) {
            const ClosestPointResult cp = barrier->signed_distance(mesh.positions[u]);
            ghost[u] = mesh.positions[u] - 2.0 * cp.d * barrier->unit_normal(cp.p);
        }
        return *ghost[u];
    };

    for (int v = 0; v < nv; ++v) {
        const bool bnd = mesh.boundary_vertex[v];
        QuadricFit fit;
        for (int ring = opts.fit_ring; ring <= opts.fit_ring + 1; ++ring) {
            std::vector<int> nbr = mesh.k_ring(v, ring);
            std::vector<Vec3> samples;
            samples.reserve(nbr.size() * 2);
            for (int u : nbr) samples.push_back(mesh.positions[u]);
            if (bnd && barrier && opts.ghost_reflection) {
                for (int u : nbr)
                    if (!mesh.boundary_vertex[u]) samples.push_back(ghost_of(u));
            }
            fit = fit_quadric(mesh.positions[v], vnormal[v], samples);
            if (fit.ok) {
                // refit in the tilt-corrected frame until the normal settles;
                // this removes the bias from the one-sided face-normal seed
                for (int pass = 0; pass < 8; ++pass) {
                    QuadricFit fit2 = fit_quadric(mesh.positions[v], fit.nu, samples);
                    if (!fit2.ok) break;
                    const double move = (fit2.nu - fit.nu).norm();
                    fit = fit2;
                    if (move < 1e-13) break;
                }
                break;
            }
        }
        if (!fit.ok) throw QuadricFitSingular("quadric fit rank-deficient at vertex");

        VertexGeometry& g = cache.vg[v];
        g.nu = fit.nu;
        g.t1 = fit.t1;
        g.t2 = fit.t2;
        g.A = fit.A;
        g.H = fit.A.trace();
        const double mid = 0.5 * (fit.A(0, 0) + fit.A(1, 1));
        const double disc = std::sqrt(std::pow(0.5 * (fit.A(0, 0) - fit.A(1, 1)), 2) +
                                      fit.A(0, 1) * fit.A(0, 1));
        g.k1 = mid - disc;
        g.k2 = mid + disc;
        g.A_norm2 = g.k1 * g.k1 + g.k2 * g.k2;
        Eigen::Matrix<double, 3, 2> B;
        B.col(0) = g.t1;
        B.col(1) = g.t2;
        g.A_world = B * g.A * B.transpose();
        cache.max_abs_A = std::max(cache.max_abs_A, std::sqrt(g.A_norm2));
    }

    // tangential grad H: linear least squares over the 1-ring (one-sided
    // 2-ring at boundary vertices; ghost values would force N(H)=0)
    for (int v = 0; v < nv; ++v) {
        const bool bnd = mesh.boundary_vertex[v];
        std::vector<int> nbr = bnd ? mesh.k_ring(v, 2) : mesh.one_ring(v);
        VertexGeometry& g = cache.vg[v];
        Eigen::MatrixXd M(nbr.size(), 2);
        Eigen::VectorXd rhs(nbr.size());
        for (std::size_t i = 0; i < nbr.size(); ++i) {
            const Vec3 rel = mesh.positions[nbr[i]] - mesh.positions[v];
            M(i, 0) = rel.dot(g.t1);
            M(i, 1) = rel.dot(g.t2);
            rhs(i) = cache.vg[nbr[i]].H - g.H;
        }
        const Vec2 grad = M.colPivHouseholderQr().solve(rhs);
        g.gradH = grad(0) * g.t1 + grad(1) * g.t2;
    }

    cache.int_H2 = 0.0;
    for (int v = 0; v < nv; ++v) cache.int_H2 += cache.vg[v].H * cache.vg[v].H * cache.vertex_area[v];

    // boundary frames
    cache.boundary_index.assign(nv, -1);
    cache.boundary_length = 0.0;
    for (const auto& loop : mesh.boundary_loops) {
        const int n = static_cast<int>(loop.size());
        for (int i = 0; i < n; ++i)
            cache.boundary_length += (mesh.positions[loop[(i + 1) % n]] - mesh.positions[loop[i]]).norm();
        for (int i = 0; i < n; ++i) {
            const int v = loop[i];
            const int vp = loop[(i - 1 + n) % n];
            const int vn = loop[(i + 1) % n];
            BoundaryFrame bf;
            bf.vertex = v;
            const VertexGeometry& g = cache.vg[v];
            bf.nu = g.nu;
            Vec3 T = mesh.positions[vn] - mesh.positions[vp];
            T -= T.dot(bf.nu) * bf.nu;
            if (T.norm() < 1e-300) throw BoundaryOffSurface("degenerate boundary tangent");
            bf.T = T.normalized();
            bf.N = bf.T.cross(bf.nu);
            // orient N out of the surface
            Vec3 interior = Vec3::Zero();
            const auto ring = mesh.one_ring(v);
            for (int u : ring) interior += mesh.positions[u];
            interior = interior / double(ring.size()) - mesh.positions[v];
            if (bf.N.dot(interior) > 0.0) {
                bf.N = -bf.N;
                bf.T = -bf.T;
            }
            if (barrier) {
                const ClosestPointResult cp = barrier->signed_distance(mesh.positions[v]);
                if (std::abs(cp.d) > opts.boundary_tol * (1.0 + barrier->patch_scale()))
                    throw BoundaryOffSurface("boundary vertex off the barrier surface");
                bf.orthogonality_residual = std::abs(bf.nu.dot(barrier->unit_normal(cp.p)));
            }
            cache.boundary_index[v] = static_cast<int>(cache.boundary.size());
            cache.boundary.push_back(bf);
        }
    }
    return cache;
}

}  // namespace fbmcf
