#include <doctest.h>

#include <cmath>
#include <random>

#include "fbmcf/barrier.hpp"

using namespace fbmcf;

TEST_CASE("signed distance on the catalog") {
    SUBCASE("plane z=0 with nu = +e_z") {
        auto S = BarrierSurface::plane(Vec3(0, 0, 1), 0.0, +1);
        auto cp = S.signed_distance(Vec3(1, 2, 3));
        CHECK(cp.d == doctest::Approx(3.0).epsilon(1e-14));
        CHECK((cp.p - Vec3(1, 2, 0)).norm() < 1e-12);
    }
    SUBCASE("unit sphere, outward") {
        auto S = BarrierSurface::sphere(1.0);
        auto cp = S.signed_distance(Vec3(2, 0, 0));
        CHECK(cp.d == doctest::Approx(1.0).epsilon(1e-14));
        CHECK((cp.p - Vec3(1, 0, 0)).norm() < 1e-12);
    }
    SUBCASE("cylinder radius 2 against a point-cloud oracle") {
        auto S = BarrierSurface::cylinder(2.0);
        const Vec3 x(3, 0, 5);
        auto cp = S.signed_distance(x);
        CHECK(cp.d == doctest::Approx(1.0).epsilon(1e-12));
        CHECK((cp.p - Vec3(2, 0, 5)).norm() < 1e-10);

        // brute-force nearest neighbor over a dense sampling of the surface
        double best = 1e300;
        for (int ia = 0; ia < 2000; ++ia) {
            const double a = 2.0 * M_PI * ia / 2000.0;
            for (int iz = 0; iz <= 200; ++iz) {
                const double z = 4.0 + 2.0 * iz / 200.0;
                best = std::min(best,
                                (x - Vec3(2 * std::cos(a), 2 * std::sin(a), z)).norm());
            }
        }
        CHECK(std::abs(cp.d) == doctest::Approx(best).epsilon(1e-4));
    }
    SUBCASE("ellipsoid closest point satisfies stationarity") {
        auto S = BarrierSurface::ellipsoid(2.0, 1.5, 1.0);
        std::mt19937_64 rng(7);
        std::normal_distribution<double> g(0.0, 1.0);
        for (int i = 0; i < 50; ++i) {
            Vec3 u(g(rng), g(rng), g(rng));
            u.normalize();
            const Vec3 p0(2.0 * u.x(), 1.5 * u.y(), 1.0 * u.z());
            const Vec3 x = p0 + 0.2 * S.unit_normal(p0) * g(rng);
            auto cp = S.signed_distance(x);
            CHECK(std::abs(S.phi(cp.p)) < 1e-10);
            const Vec3 nu = S.unit_normal(cp.p);
            const Vec3 diff = x - cp.p;
            CHECK((diff - diff.dot(nu) * nu).norm() < 1e-9);
        }
    }
    SUBCASE("outside tubular neighborhood") {
        auto S = BarrierSurface::sphere(1.0);
        CHECK_THROWS_AS(S.signed_distance(Vec3(5, 0, 0), true), OutsideTubular);
    }
}

TEST_CASE("surface frames") {
    SUBCASE("unit sphere is umbilic with H = 2") {
        auto S = BarrierSurface::sphere(1.0);
        auto F = S.surface_frame(Vec3(1, 0, 0));
        CHECK((F.A - Mat2::Identity()).norm() < 1e-12);
        CHECK(F.H == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(F.Aring.norm() < 1e-12);
    }
    SUBCASE("plane is flat") {
        auto S = BarrierSurface::plane(Vec3(0, 0, 1), 0.0, +1);
        auto F = S.surface_frame(Vec3(0.3, -2.0, 0));
        CHECK(F.A.norm() < 1e-14);
        CHECK(F.H == 0.0);
    }
    SUBCASE("unit cylinder has curvatures {1, 0}") {
        auto S = BarrierSurface::cylinder(1.0);
        auto F = S.surface_frame(Vec3(1, 0, 0));
        CHECK(F.H == doctest::Approx(1.0).epsilon(1e-12));
        // eigenvalues 1 and 0 regardless of the tangent basis
        const double mid = 0.5 * F.A.trace();
        const double disc = std::sqrt(std::pow(0.5 * (F.A(0, 0) - F.A(1, 1)), 2) +
                                      F.A(0, 1) * F.A(0, 1));
        CHECK(mid + disc == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(mid - disc == doctest::Approx(0.0).epsilon(1e-12));
        CHECK((F.Aring - (F.A - 0.5 * F.H * Mat2::Identity())).norm() < 1e-14);
    }
    SUBCASE("frame invariants at random catalog points") {
        for (auto S : {BarrierSurface::sphere(1.3), BarrierSurface::cylinder(2.0),
                       BarrierSurface::ellipsoid(2.0, 1.5, 1.0)}) {
            for (const Vec3& p : S.sample_points(40, 11)) {
                auto F = S.surface_frame(p);
                CHECK(std::abs(F.t1.dot(F.nu)) < 1e-12);
                CHECK(std::abs(F.t2.dot(F.nu)) < 1e-12);
                CHECK(std::abs(F.t1.dot(F.t2)) < 1e-12);
                CHECK(std::abs(F.t1.norm() - 1.0) < 1e-12);
                CHECK(std::abs(F.Aring.trace()) < 1e-12);
                // convex catalog: eigenvalues >= -1e-10
                const double mid = 0.5 * F.A.trace();
                const double disc = std::sqrt(std::pow(0.5 * (F.A(0, 0) - F.A(1, 1)), 2) +
                                              F.A(0, 1) * F.A(0, 1));
                CHECK(mid - disc >= -1e-10);
            }
        }
    }
}

TEST_CASE("analytic derivatives match finite differences") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.0, 1.0);
    for (auto S : {BarrierSurface::plane(Vec3(0.2, -0.3, 1.0), 0.4),
                   BarrierSurface::sphere(1.7), BarrierSurface::cylinder(0.9),
                   BarrierSurface::ellipsoid(2.0, 1.5, 1.0), BarrierSurface::slab(0.5)}) {
        for (int i = 0; i < 30; ++i) {
            const Vec3 x(2.0 * g(rng), 2.0 * g(rng), 2.0 * g(rng));
            const double h = 1e-5;
            const Vec3 gr = S.grad(x);
            const double scale = std::max(1.0, gr.norm());
            for (int k = 0; k < 3; ++k) {
                const Vec3 e = Vec3::Unit(k);
                const double fd = (S.phi(x + h * e) - S.phi(x - h * e)) / (2 * h);
                CHECK(std::abs(fd - gr(k)) / scale < 1e-6);
                const Vec3 fdg = (S.grad(x + h * e) - S.grad(x - h * e)) / (2 * h);
                CHECK((fdg - S.hess(x).col(k)).norm() / scale < 1e-6);
            }
        }
    }
}

TEST_CASE("signed-distance gradient identity") {
    for (auto S : {BarrierSurface::sphere(1.0), BarrierSurface::cylinder(2.0),
                   BarrierSurface::ellipsoid(2.0, 1.5, 1.0)}) {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const double K = 2.5;  // generous curvature bound for the offsets below
        for (const Vec3& p : S.sample_points(25, 17)) {
            const Vec3 x = p + (0.4 / K) * u(rng) * S.unit_normal(p);
            const double h = 1e-6;
            Vec3 fd;
            for (int k = 0; k < 3; ++k) {
                const Vec3 e = Vec3::Unit(k);
                fd(k) = (S.signed_distance(x + h * e).d - S.signed_distance(x - h * e).d) / (2 * h);
            }
            const auto cp = S.signed_distance(x);
            CHECK((fd - S.unit_normal(cp.p)).norm() < 1e-6);
        }
    }
}

TEST_CASE("ball curvatures") {
    SUBCASE("sphere: the two-point ratio is identically 1/R") {
        auto S = BarrierSurface::sphere(2.0);
        auto pts = S.sample_points(400, 23);
        auto zb = ball_curvatures(S, pts);
        for (auto& [hi, lo] : zb) {
            CHECK(hi == doctest::Approx(0.5).epsilon(1e-10));
            CHECK(lo == doctest::Approx(0.5).epsilon(1e-10));
        }
    }
    SUBCASE("slab: flat sheets but Zbar = 2/gap") {
        auto S = BarrierSurface::slab(0.5);
        auto pts = S.sample_points(4000, 29);
        auto zb = ball_curvatures(S, pts);
        double zbar = 0.0, zlow = 1e300;
        for (auto& [hi, lo] : zb) {
            zbar = std::max(zbar, hi);
            zlow = std::min(zlow, lo);
        }
        CHECK(zbar == doctest::Approx(4.0).epsilon(0.01));
        CHECK(zlow >= -1e-9);
    }
    SUBCASE("cylinder radius 2: Zbar ~ 1/2, Zlow ~ 0") {
        auto S = BarrierSurface::cylinder(2.0);
        auto pts = S.sample_points(3000, 31);
        auto zb = ball_curvatures(S, pts);
        double zbar = 0.0, zlow = 1e300;
        for (auto& [hi, lo] : zb) {
            zbar = std::max(zbar, hi);
            zlow = std::min(zlow, lo);
        }
        CHECK(zbar == doctest::Approx(0.5).epsilon(0.02));
        CHECK(std::abs(zlow) < 0.01);
    }
    SUBCASE("dominance over the largest principal curvature") {
        for (auto S : {BarrierSurface::cylinder(2.0), BarrierSurface::ellipsoid(2.0, 1.5, 1.0)}) {
            auto pts = with_curvature_probes(S, S.sample_points(200, 37));
            auto zb = ball_curvatures(S, pts);
            for (std::size_t i = 0; i < 200; ++i) {
                auto F = S.surface_frame(pts[i]);
                const double mid = 0.5 * F.A.trace();
                const double disc = std::sqrt(std::pow(0.5 * (F.A(0, 0) - F.A(1, 1)), 2) +
                                              F.A(0, 1) * F.A(0, 1));
                CHECK(zb[i].first >= mid + disc - 1e-6);
            }
        }
    }
    SUBCASE("insufficient samples") {
        auto S = BarrierSurface::sphere(1.0);
        CHECK_THROWS_AS(ball_curvatures(S, {Vec3(1, 0, 0)}), InsufficientSamples);
    }
}

TEST_CASE("estimate_bounds") {
    SUBCASE("unit sphere: K = 1, derivative bounds vanish") {
        auto S = BarrierSurface::sphere(1.0);
        auto B = estimate_bounds(S, S.sample_points(300, 41));
        CHECK(B.K == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(B.L1 < 1e-4);
        CHECK(B.L2 < 1e-3);
    }
    SUBCASE("plane clamps K to K_min") {
        auto S = BarrierSurface::plane(Vec3(0, 0, 1), 0.0);
        auto B = estimate_bounds(S, S.sample_points(100, 43));
        CHECK(B.K == doctest::Approx(kBarrierKMin));
        CHECK(B.L1 == 0.0);
        CHECK(B.L2 < 1e-8);
    }
    SUBCASE("cylinder radius 2: K ~ 1/2, constant curvature along the surface") {
        auto S = BarrierSurface::cylinder(2.0);
        auto B = estimate_bounds(S, S.sample_points(300, 47));
        CHECK(B.K == doctest::Approx(0.5).epsilon(0.02));
        CHECK(B.L1 < 1e-3);
        CHECK(B.L2 < 1e-3);
    }
}

TEST_CASE("cutoff function") {
    CHECK(cutoff_chi(0.1, 1.0) == 1.0);
    CHECK(cutoff_chi(0.6, 1.0) == 0.0);
    // regression value for the chosen C^2 profile: chi(1.6) = 37/120
    CHECK(cutoff_chi(0.2, 2.0) == doctest::Approx(37.0 / 120.0).epsilon(1e-12));
    CHECK(cutoff_chi(0.2, 2.0) > 0.0);
    CHECK(cutoff_chi(0.2, 2.0) < 1.0);
    CHECK_THROWS_AS(cutoff_chi(0.1, 0.0), NonpositiveK);

    SUBCASE("profile bounds") {
        double prev = 1.0;
        for (int i = 0; i <= 3000; ++i) {
            const double s = 3.0 * i / 3000.0;
            const double c = chi_profile(s);
            CHECK(c <= prev + 1e-12);
            prev = c;
            CHECK(chi_profile_d1(s) >= -2.0 - 1e-12);
            CHECK(chi_profile_d1(s) <= 1e-12);
            CHECK(std::abs(chi_profile_d2(s)) <= 5.0 + 1e-12);
            const double h = 1e-6;
            const double fd1 = (chi_profile(s + h) - chi_profile(s - h)) / (2 * h);
            CHECK(std::abs(fd1 - chi_profile_d1(s)) < 1e-5);
        }
    }
}

TEST_CASE("tensor extension") {
    auto S = BarrierSurface::sphere(1.0);
    const double K = 1.0;
    SUBCASE("on the surface the extension restricts to the originals") {
        for (const Vec3& p : S.sample_points(30, 53)) {
            auto ext = S.extend(p, K);
            auto F = S.surface_frame(p);
            CHECK(ext.in_support);
            CHECK(ext.chi == 1.0);
            CHECK((ext.A - F.A_world()).norm() < 1e-10);
            CHECK((ext.nu_flat - F.nu).norm() < 1e-10);
        }
    }
    SUBCASE("outside the support the extension vanishes") {
        auto ext = S.extend(Vec3(1.6, 0, 0), K);
        CHECK(!ext.in_support);
        CHECK(ext.A.norm() == 0.0);
    }
    SUBCASE("off-surface value composes closest point and cutoff") {
        auto ext = S.extend(Vec3(1.1, 0, 0), K);
        CHECK(ext.in_support);
        const double expected = cutoff_chi(0.1, K) * 1.0;
        CHECK(Vec3(0, 1, 0).dot(ext.A * Vec3(0, 1, 0)) == doctest::Approx(expected).epsilon(1e-10));
    }
}
