#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "fbmcf/mesh.hpp"

using namespace fbmcf;

TEST_CASE("halfedge build") {
    SUBCASE("single triangle: 3 boundary edges, 1 loop") {
        auto m = build_mesh({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)}, {{{0, 1, 2}}});
        int boundary_edges = 0;
        for (const auto& he : m.halfedges)
            if (he.twin < 0) ++boundary_edges;
        CHECK(boundary_edges == 3);
        CHECK(m.boundary_loops.size() == 1);
        CHECK(m.boundary_loops[0].size() == 3);
    }
    SUBCASE("closed tetrahedron: no boundary") {
        auto m = build_mesh(
            {Vec3(1, 1, 1), Vec3(1, -1, -1), Vec3(-1, 1, -1), Vec3(-1, -1, 1)},
            {{{0, 2, 1}}, {{0, 1, 3}}, {{0, 3, 2}}, {{1, 2, 3}}});
        for (const auto& he : m.halfedges) CHECK(he.twin >= 0);
        CHECK(m.boundary_loops.empty());
    }
    SUBCASE("cap cut from a disk: one loop") {
        auto m = make_cap(CapKind::HemispherePlane, {.rings = 8, .radius = 1.0});
        CHECK(m.boundary_loops.size() == 1);
        CHECK(int(m.boundary_loops[0].size()) == 48);
        CHECK(m.n_vertices() == 1 + 3 * 8 * 9);
    }
    SUBCASE("non-manifold edge rejected") {
        CHECK_THROWS_AS(
            build_mesh({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1),
                        Vec3(0, -1, 0)},
                       {{{0, 1, 2}}, {{0, 3, 1}}, {{0, 1, 4}}}),
            NonManifold);
    }
    SUBCASE("inconsistent orientation rejected") {
        CHECK_THROWS_AS(build_mesh({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(1, 1, 0)},
                                   {{{0, 1, 2}}, {{0, 1, 3}}}),
                        InconsistentOrientation);
    }
    SUBCASE("one-ring of an interior hex vertex has six neighbors") {
        auto m = make_cap(CapKind::HemispherePlane, {.rings = 6, .radius = 1.0});
        for (int v = 0; v < m.n_vertices(); ++v) {
            if (m.boundary_vertex[v]) continue;
            CHECK(m.one_ring(v).size() == 6);
        }
    }
}

TEST_CASE("mesh quality") {
    SUBCASE("equilateral triangle") {
        auto m = build_mesh({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0.5, std::sqrt(3.0) / 2, 0)},
                            {{{0, 1, 2}}});
        auto q = mesh_quality(m);
        CHECK(q.min_angle_deg == doctest::Approx(60.0).epsilon(1e-10));
        CHECK(q.max_edge_ratio == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("icosphere stays well shaped") {
        auto m = make_icosphere(1.0, 3);
        auto q = mesh_quality(m);
        CHECK(q.min_angle_deg >= 30.0);
    }
    SUBCASE("sliver triangle") {
        auto m = build_mesh({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0.5, 0.0435, 0)}, {{{0, 1, 2}}});
        auto q = mesh_quality(m);
        CHECK(q.min_angle_deg < 5.0);
    }
}

TEST_CASE("cap constructors") {
    SUBCASE("hemisphere: vertices on the sphere, boundary on the plane") {
        auto m = make_cap(CapKind::HemispherePlane, {.rings = 16, .radius = 1.0});
        for (int v = 0; v < m.n_vertices(); ++v) {
            CHECK(std::abs(m.positions[v].norm() - 1.0) < 1e-12);
            if (m.boundary_vertex[v]) CHECK(std::abs(m.positions[v].z()) < 1e-12);
        }
    }
    SUBCASE("cap on sphere: analytic orthogonal contact") {
        const double rc = 0.5;
        auto m = make_cap(CapKind::CapSphere, {.rings = 16, .radius = rc, .barrier_radius = 1.0});
        const double zc = std::sqrt(1.0 + rc * rc);
        const Vec3 c(0, 0, zc);
        for (int v = 0; v < m.n_vertices(); ++v) {
            CHECK(std::abs((m.positions[v] - c).norm() - rc) < 1e-12);
            if (m.boundary_vertex[v]) {
                CHECK(std::abs(m.positions[v].norm() - 1.0) < 1e-12);
                const Vec3 nu_cap = (m.positions[v] - c) / rc;
                const Vec3 nu_sph = m.positions[v].normalized();
                CHECK(std::abs(nu_cap.dot(nu_sph)) < 1e-8);
            }
        }
    }
    SUBCASE("cap on cylinder: boundary exactly on the wall") {
        auto m = make_cap(CapKind::CapCylinder,
                          {.rings = 16, .radius = 0.2, .barrier_radius = 2.0});
        int nb = 0;
        for (int v = 0; v < m.n_vertices(); ++v) {
            const double rho = std::hypot(m.positions[v].x(), m.positions[v].y());
            if (m.boundary_vertex[v]) {
                ++nb;
                CHECK(std::abs(rho - 2.0) < 1e-12);
            } else {
                CHECK(rho < 2.0);
            }
        }
        CHECK(nb == 6 * 16);
    }
    SUBCASE("perturbed hemisphere keeps its boundary in the plane") {
        auto m = make_cap(CapKind::HemispherePerturbed,
                          {.rings = 12, .radius = 1.0, .amplitude = 0.05});
        bool off_round = false;
        for (int v = 0; v < m.n_vertices(); ++v) {
            if (m.boundary_vertex[v]) CHECK(std::abs(m.positions[v].z()) < 1e-12);
            if (std::abs(m.positions[v].norm() - 1.0) > 1e-3) off_round = true;
        }
        CHECK(off_round);
    }
    SUBCASE("bad parameters rejected") {
        CHECK_THROWS_AS(make_cap(CapKind::HemispherePlane, {.rings = 16, .radius = -1.0}),
                        InvalidParams);
        CHECK_THROWS_AS(
            make_cap(CapKind::CapCylinder, {.rings = 16, .radius = 1.5, .barrier_radius = 2.0}),
            InvalidParams);
    }
}

TEST_CASE("obj round trip") {
    auto m = make_cap(CapKind::HemispherePlane, {.rings = 6, .radius = 1.0});
    const std::string path = (std::filesystem::temp_directory_path() / "fbmcf_rt.obj").string();
    save_obj(m, path);
    auto m2 = load_obj(path);
    REQUIRE(m2.n_vertices() == m.n_vertices());
    REQUIRE(m2.n_faces() == m.n_faces());
    for (int v = 0; v < m.n_vertices(); ++v)
        CHECK((m.positions[v] - m2.positions[v]).norm() == 0.0);
    CHECK(m2.boundary_loops.size() == 1);  // boundary flags recomputed on load
    std::filesystem::remove(path);
}
