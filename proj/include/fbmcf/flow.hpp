#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "fbmcf/barrier.hpp"
#include "fbmcf/mesh.hpp"
#include "fbmcf/perturbation.hpp"
#include "fbmcf/record.hpp"
#include "fbmcf/types.hpp"
#include "fbmcf/vertex_geometry.hpp"

namespace fbmcf {

enum class StopReason { CurvatureBlowup, AreaFloor, MaxSteps, MeshDegenerate, DtFloor, TimeHorizon };
const char* stop_reason_name(StopReason r);

struct FlowConfig {
    // time stepping
    double c1 = 0.1;                 // CFL factor on h_min^2
    double c2 = 0.2;                 // factor on 1 / max|A|^2
    double dt_floor = 1e-9;
    int max_steps = 200000;
    double t_end = std::numeric_limits<double>::infinity();
    // stopping
    double stop_maxA = 50.0;
    double stop_min_area = -1.0;     // < 0: resolved to 1e-4 * initial area
    // constraints
    double projection_tol = 1e-9;
    int record_every = 25;
    bool tangential_smoothing = false;
    // monitor parameters
    double sigma = 0.1;              // pinching exponent, in (0, 1/2)
    double eta = 0.05;               // gradient-monitor weight, in (0, min(1, 1/(4K)))
    double D = 0.01;                 // convexity reference
    double epsilon_pinch = 0.01;
    double g_a = 1.0, g_b = 1.0, g_c = 1.0;
    double C_grad = -1.0;            // < 0: resolved to 2 * initial max |grad H|^2
    std::uint64_t seed = 12345;
};

// Throws ValidationError on out-of-range fields (the K-dependent eta check
// happens at run start once the barrier bounds are estimated).
void validate_flow_config(const FlowConfig& cfg);

struct FlowState {
    double t = 0.0;
    int step = 0;
    TriMesh mesh;
    GeometryCache geom;
    std::vector<PerturbedSFF> pert;
    double K = 0.0;
    BarrierBounds bounds;
    // resolved at run start
    double stop_min_area = 0.0;
    double C_grad = 0.0;
    double initial_min_face_area = 0.0;
};

// -H nu at interior vertices; at boundary vertices the velocity is projected
// onto the barrier tangent plane.
std::vector<Vec3> compute_velocity(const FlowState& st, const BarrierSurface& S);

// max(dt_floor, min(c1 h_min^2, c2 / max|A|^2)), before any t_end clamp
double adaptive_dt(const FlowState& st, const FlowConfig& cfg);

// Snap boundary vertices to their closest points on S.
void project_boundary(TriMesh& mesh, const BarrierSurface& S, double tol);

// Recompute geometry, perturbed SFF and frames from current positions.
void refresh_state(FlowState& st, const BarrierSurface& S);

// One forward-Euler step followed by boundary projection and a full geometry
// refresh. Throws MeshDegenerate on face inversion or area/angle collapse.
void flow_step(FlowState& st, double dt, const BarrierSurface& S, const FlowConfig& cfg);

struct RunResult {
    std::vector<DiagnosticsRecord> records;
    std::vector<TriMesh> frames;  // mesh snapshot per record
    StopReason stop = StopReason::MaxSteps;
    FlowState state;              // final state
};

using RecordHook = std::function<void(const FlowState&, const DiagnosticsRecord&)>;

// Runs the flow until a stop criterion fires, recording diagnostics every
// record_every steps and at the final step.
RunResult run_flow(const FlowConfig& cfg, TriMesh initial, const BarrierSurface& S,
                   const RecordHook& hook = {});

}  // namespace fbmcf
