#include <doctest.h>

#include <cmath>

#include "fbmcf/barrier.hpp"
#include "fbmcf/mesh.hpp"
#include "fbmcf/vertex_geometry.hpp"

using namespace fbmcf;

namespace {

double max_H_error(const GeometryCache& g, double H_exact) {
    double worst = 0.0;
    for (const auto& v : g.vg) worst = std::max(worst, std::abs(v.H - H_exact));
    return worst;
}

}  // namespace

TEST_CASE("vertex geometry on analytic surfaces") {
    SUBCASE("closed icosphere: H converges to 2 at second order") {
        double err[3];
        double h[3];
        for (int lvl = 0; lvl < 3; ++lvl) {
            auto m = make_icosphere(1.0, lvl + 2);
            auto g = compute_geometry(m, nullptr);
            err[lvl] = max_H_error(g, 2.0);
            h[lvl] = mesh_quality(m).max_edge;
        }
        CHECK(err[2] < 0.05);  // 2562-vertex icosphere is level 4
        const double order = std::log(err[0] / err[2]) / std::log(h[0] / h[2]);
        CHECK(order >= 1.5);
    }
    SUBCASE("flat disk has vanishing curvature") {
        auto m = make_flat_disk(1.0, 10);
        auto g = compute_geometry(m, nullptr);
        for (const auto& v : g.vg) {
            CHECK(std::abs(v.H) < 1e-10);
            CHECK(v.A.norm() < 1e-10);
        }
    }
    SUBCASE("hemisphere with plane barrier: ghosts make boundary fits exact") {
        auto S = BarrierSurface::plane(Vec3(0, 0, 1), 0.0, -1);
        auto m = make_cap(CapKind::HemispherePlane, {.rings = 16, .radius = 1.0});
        auto g = compute_geometry(m, &S);
        CHECK(max_H_error(g, 2.0) < 0.03);
        for (const auto& bf : g.boundary) CHECK(bf.orthogonality_residual < 1e-8);
    }
    SUBCASE("cylinder cap: principal curvatures near {5, 5} at the pole region") {
        auto S = BarrierSurface::cylinder(2.0);
        auto m = make_cap(CapKind::CapCylinder, {.rings = 16, .radius = 0.2, .barrier_radius = 2.0});
        auto g = compute_geometry(m, &S);
        double lam_min = 1e300;
        for (const auto& v : g.vg) lam_min = std::min(lam_min, v.k1);
        CHECK(lam_min >= 4.0);
    }
    SUBCASE("discrete Cauchy-Schwarz |A|^2 >= H^2/2") {
        auto m = make_cap(CapKind::HemispherePerturbed,
                          {.rings = 12, .radius = 1.0, .amplitude = 0.05});
        auto g = compute_geometry(m, nullptr);
        for (const auto& v : g.vg) {
            CHECK(v.A_norm2 >= 0.5 * v.H * v.H - 1e-10);
            CHECK(std::abs(v.A.trace() - v.H) < 1e-10);
            CHECK(std::abs(v.k1 + v.k2 - v.H) < 1e-10);
            CHECK(std::abs(v.k1 * v.k1 + v.k2 * v.k2 - v.A_norm2) < 1e-10);
        }
    }
}

TEST_CASE("boundary frames") {
    SUBCASE("hemisphere on plane z=0 with nu_S = -e_z") {
        auto S = BarrierSurface::plane(Vec3(0, 0, 1), 0.0, -1);
        auto m = make_cap(CapKind::HemispherePlane, {.rings = 16, .radius = 1.0});
        auto g = compute_geometry(m, &S);
        for (const auto& bf : g.boundary) {
            const Vec3 p = m.positions[bf.vertex];
            // frame orthonormality
            CHECK(std::abs(bf.N.dot(bf.T)) < 1e-8);
            CHECK(std::abs(bf.N.dot(bf.nu)) < 1e-8);
            CHECK(std::abs(bf.T.dot(bf.nu)) < 1e-8);
            // outward conormal is -e_z, normal is radial
            CHECK((bf.N - Vec3(0, 0, -1)).norm() < 2e-2);
            CHECK(std::abs(bf.T.z()) < 2e-2);
            CHECK((bf.nu - Vec3(p.x(), p.y(), 0).normalized()).norm() < 2e-2);
            CHECK(bf.orthogonality_residual < 1e-8);
        }
    }
    SUBCASE("boundary vertex pushed off the barrier") {
        auto S = BarrierSurface::plane(Vec3(0, 0, 1), 0.0, -1);
        auto m = make_cap(CapKind::HemispherePlane, {.rings = 8, .radius = 1.0});
        for (int v = 0; v < m.n_vertices(); ++v) {
            if (m.boundary_vertex[v]) {
                m.positions[v].z() += 0.05;
                break;
            }
        }
        CHECK_THROWS_AS(compute_geometry(m, &S), BoundaryOffSurface);
    }
}
