#include "fbmcf/oracles.hpp"

#include <cmath>

namespace fbmcf {

double HemisphereSolution::r(double t) const {
    if (t < 0 || t >= T()) throw PastSingularTime("t outside [0, r0^2/4)");
    return std::sqrt(r0 * r0 - 4.0 * t);
}

double HemisphereSolution::area(double t) const {
    const double rr = r(t);
    return 2.0 * M_PI * rr * rr;
}

HemisphereExact hemisphere_exact(double r0, double t) {
    if (r0 <= 0) throw InvalidParams("hemisphere radius must be positive");
    HemisphereSolution sol{r0};
    HemisphereExact out;
    out.r = sol.r(t);
    out.H = sol.H(t);
    out.area = sol.area(t);
    out.remaining_time = sol.remaining(t);
    return out;
}

std::vector<CanonicalCase> canonical_cases() {
    std::vector<CanonicalCase> cases;

    cases.push_back({"HEMI_PLANE", BarrierSurface::plane(Vec3(0, 0, 1), 0.0, -1), 32, 1.0,
                     [](int rings, double) {
                         CapParams p;
                         p.rings = rings;
                         p.radius = 1.0;
                         return make_cap(CapKind::HemispherePlane, p);
                     }});

    cases.push_back({"HEMI_PLANE_PERTURBED", BarrierSurface::plane(Vec3(0, 0, 1), 0.0, -1), 32,
                     1.0, [](int rings, double amplitude) {
                         CapParams p;
                         p.rings = rings;
                         p.radius = 1.0;
                         p.amplitude = amplitude;
                         return make_cap(CapKind::HemispherePerturbed, p);
                     }});

    cases.push_back({"CAP_SPHERE", BarrierSurface::sphere(1.0, +1), 32, 0.5,
                     [](int rings, double) {
                         CapParams p;
                         p.rings = rings;
                         p.radius = 0.5;
                         p.barrier_radius = 1.0;
                         return make_cap(CapKind::CapSphere, p);
                     }});

    cases.push_back({"CAP_CYLINDER", BarrierSurface::cylinder(2.0, +1), 32, 0.2,
                     [](int rings, double) {
                         CapParams p;
                         p.rings = rings;
                         p.radius = 0.2;
                         p.barrier_radius = 2.0;
                         return make_cap(CapKind::CapCylinder, p);
                     }});

    return cases;
}

const CanonicalCase& find_case(const std::vector<CanonicalCase>& cases, const std::string& name) {
    for (const auto& c : cases)
        if (c.name == name) return c;
    throw InvalidParams("unknown canonical case: " + name);
}

}  // namespace fbmcf
