#include <doctest.h>

#include <cmath>
#include <random>

#include "fbmcf/perturbation.hpp"

using namespace fbmcf;

TEST_CASE("P tensor pointwise") {
    SUBCASE("hand value on the unit cylinder") {
        auto S = BarrierSurface::cylinder(1.0);
        const double K = quick_K(S, 1);
        const Vec3 x(1, 0, 0);
        const Vec3 ex(1, 0, 0), ey(0, 1, 0), ez(0, 0, 1);
        CHECK(eval_P(S, K, x, ex, ey, ey, ez, ez) == doctest::Approx(1.0).epsilon(1e-12));
        // repeated tangent argument vanishes
        CHECK(std::abs(eval_P(S, K, x, ex, ey, ey, ey, ey)) < 1e-12);
    }
    SUBCASE("symmetry in the first two slots is exact") {
        auto S = BarrierSurface::ellipsoid(2.0, 1.5, 1.0);
        const double K = quick_K(S, 2);
        std::mt19937_64 rng(5);
        std::normal_distribution<double> g(0.0, 1.0);
        for (const Vec3& p : S.sample_points(25, 3)) {
            const Vec3 x = p + 0.05 * g(rng) * S.unit_normal(p);
            const Vec3 U(g(rng), g(rng), g(rng)), V(g(rng), g(rng), g(rng)),
                X(g(rng), g(rng), g(rng)), Y(g(rng), g(rng), g(rng)), Z(g(rng), g(rng), g(rng));
            CHECK(eval_P(S, K, x, U, V, X, Y, Z) == eval_P(S, K, x, V, U, X, Y, Z));
        }
    }
    SUBCASE("umbilic barriers give a vanishing tensor") {
        std::mt19937_64 rng(7);
        std::normal_distribution<double> g(0.0, 1.0);
        for (auto S : {BarrierSurface::plane(Vec3(0, 0, 1), 0.0, -1), BarrierSurface::sphere(1.0)}) {
            const double K = quick_K(S, 11);
            double worst = 0.0;
            for (int i = 0; i < 300; ++i) {
                const Vec3 x(2.0 * g(rng), 2.0 * g(rng), 2.0 * g(rng));
                const Vec3 U(g(rng), g(rng), g(rng)), V(g(rng), g(rng), g(rng)),
                    X(g(rng), g(rng), g(rng)), Y(g(rng), g(rng), g(rng)),
                    Z(g(rng), g(rng), g(rng));
                worst = std::max(worst, std::abs(eval_P(S, K, x, U, V, X, Y, Z)));
            }
            CHECK(worst < 1e-12);
        }
    }
}

TEST_CASE("identity suite") {
    SUBCASE("sphere: everything at machine precision") {
        auto rep = identity_suite(BarrierSurface::sphere(1.0), 100, 17);
        CHECK(rep.res_i < 1e-12);
        CHECK(rep.res_ii < 1e-12);
        CHECK(rep.res_iii < 1e-12);
        CHECK(rep.res_iv < 1e-12);
        CHECK(rep.res_v < 1e-8);
        CHECK(rep.max_abs_P < 1e-12);
    }
    SUBCASE("cylinder and ellipsoid") {
        for (auto S : {BarrierSurface::cylinder(1.0), BarrierSurface::ellipsoid(2.0, 1.5, 1.0)}) {
            auto rep = identity_suite(S, 100, 23);
            CHECK(rep.res_i < 1e-10);
            CHECK(rep.res_ii < 1e-10);
            CHECK(rep.res_iii < 1e-10);
            CHECK(rep.res_iv < 1e-10);
            CHECK(rep.res_v < 1e-6);
        }
    }
    SUBCASE("insufficient points") {
        CHECK_THROWS_AS(identity_suite(BarrierSurface::sphere(1.0), 0, 1), InsufficientSamples);
    }
}

TEST_CASE("P_sigma and the perturbed second fundamental form") {
    SUBCASE("plane barrier: A_tilde = A exactly") {
        auto S = BarrierSurface::plane(Vec3(0, 0, 1), 0.0, -1);
        auto m = make_cap(CapKind::HemispherePlane, {.rings = 12, .radius = 1.0});
        auto g = compute_geometry(m, &S);
        auto pert = perturbed_sff(m, g, S, kBarrierKMin);
        for (int v = 0; v < m.n_vertices(); ++v) {
            CHECK(pert[v].P_sigma.norm() < 1e-12);
            CHECK((pert[v].A_tilde - g.vg[v].A).norm() < 1e-12);
            CHECK(std::abs(pert[v].H_tilde - g.vg[v].H) < 1e-12);
        }
    }
    SUBCASE("hemisphere on plane: H_tilde = H = 2/r") {
        auto S = BarrierSurface::plane(Vec3(0, 0, 1), 0.0, -1);
        auto m = make_cap(CapKind::HemispherePlane, {.rings = 16, .radius = 1.0});
        auto g = compute_geometry(m, &S);
        auto pert = perturbed_sff(m, g, S, kBarrierKMin);
        for (int v = 0; v < m.n_vertices(); ++v)
            CHECK(pert[v].H_tilde == doctest::Approx(2.0).epsilon(0.02));
    }
    SUBCASE("vertex outside the truncation support gets a zero P_sigma") {
        auto S = BarrierSurface::cylinder(2.0);  // K ~ 1/2, support |d| < 1
        auto m = make_cap(CapKind::HemispherePlane, {.rings = 8, .radius = 0.3});
        auto g = compute_geometry(m, nullptr);
        auto pert = perturbed_sff(m, g, S, 0.5);
        for (int v = 0; v < m.n_vertices(); ++v) {
            CHECK(!pert[v].in_support);
            CHECK(pert[v].P_sigma.norm() == 0.0);
        }
    }
    SUBCASE("cylinder cap boundary: Fermi decomposition delivered by P_sigma") {
        auto S = BarrierSurface::cylinder(2.0);
        double res12[2], resdiag[2];
        double h[2];
        for (int lvl = 0; lvl < 2; ++lvl) {
            const int rings = lvl == 0 ? 8 : 16;
            auto m = make_cap(CapKind::CapCylinder,
                              {.rings = rings, .radius = 0.2, .barrier_radius = 2.0});
            auto g = compute_geometry(m, &S);
            const double K = quick_K(S, 31);
            auto pert = perturbed_sff(m, g, S, K);
            double worst12 = 0.0, worstd = 0.0;
            for (const auto& bf : g.boundary) {
                const int v = bf.vertex;
                Eigen::Matrix<double, 3, 2> B;
                B.col(0) = g.vg[v].t1;
                B.col(1) = g.vg[v].t2;
                const Mat3 Pw = B * pert[v].P_sigma * B.transpose();
                const Mat3 Aw = g.vg[v].A_world;
                const double P12 = bf.N.dot(Pw * bf.T);
                const double h12 = bf.N.dot(Aw * bf.T);
                worst12 = std::max(worst12, std::abs(P12 + h12));
                worstd = std::max({worstd, std::abs(bf.N.dot(Pw * bf.N)),
                                   std::abs(bf.T.dot(Pw * bf.T))});
            }
            res12[lvl] = worst12;
            resdiag[lvl] = worstd;
            h[lvl] = mesh_quality(m).max_edge;
        }
        CHECK(res12[1] < res12[0]);
        CHECK(std::log(res12[0] / res12[1]) / std::log(h[0] / h[1]) > 0.8);
        CHECK(resdiag[1] < 0.05);
    }
    SUBCASE("C0 bound against the trace-free barrier form") {
        auto S = BarrierSurface::cylinder(2.0);
        auto m = make_cap(CapKind::CapCylinder, {.rings = 12, .radius = 0.2, .barrier_radius = 2.0});
        auto g = compute_geometry(m, &S);
        const double K = quick_K(S, 37);
        auto pert = perturbed_sff(m, g, S, K);
        double aring_max = 0.0;
        for (const Vec3& p : S.sample_points(500, 41))
            aring_max = std::max(aring_max, S.surface_frame(p).Aring.norm());
        for (int v = 0; v < m.n_vertices(); ++v)
            CHECK(pert[v].P_sigma.norm() <= 4.0 * aring_max + 1e-8);
    }
}
