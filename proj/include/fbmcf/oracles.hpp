#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fbmcf/barrier.hpp"
#include "fbmcf/mesh.hpp"

namespace fbmcf {

// Closed-form shrinking hemisphere on a plane: r(t) = sqrt(r0^2 - 4t),
// H = 2/r, area = 2 pi r^2, singular time T = r0^2/4.
struct HemisphereSolution {
    double r0 = 1.0;
    double T() const { return 0.25 * r0 * r0; }
    double r(double t) const;
    double H(double t) const { return 2.0 / r(t); }
    double area(double t) const;
    double remaining(double t) const { return T() - t; }
};

struct HemisphereExact {
    double r;
    double H;
    double area;
    double remaining_time;
};
// Throws PastSingularTime (reported as InvalidParams kind "PastSingularTime").
HemisphereExact hemisphere_exact(double r0, double t);

class PastSingularTime : public Error {
public:
    explicit PastSingularTime(const std::string& msg) : Error("PastSingularTime", msg) {}
};

// Canonical experiment setups addressable by name.
struct CanonicalCase {
    std::string name;
    BarrierSurface barrier;
    int default_rings;
    double cap_radius;
    std::function<TriMesh(int rings, double amplitude)> make_mesh;
};

std::vector<CanonicalCase> canonical_cases();
const CanonicalCase& find_case(const std::vector<CanonicalCase>& cases, const std::string& name);

}  // namespace fbmcf
