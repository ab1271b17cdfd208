#include "fbmcf/flow.hpp"

#include <algorithm>
#include <cmath>

#include "fbmcf/diagnostics.hpp"

namespace fbmcf {

const char* stop_reason_name(StopReason r) {
    switch (r) {
        case StopReason::CurvatureBlowup: return "CurvatureBlowup";
        case StopReason::AreaFloor: return "AreaFloor";
        case StopReason::MaxSteps: return "MaxSteps";
        case StopReason::MeshDegenerate: return "MeshDegenerate";
        case StopReason::DtFloor: return "DtFloor";
        case StopReason::TimeHorizon: return "TimeHorizon";
    }
    return "?";
}

void validate_flow_config(const FlowConfig& cfg) {
    auto require = [](bool ok, const char* msg) {
        if (!ok) throw ValidationError(msg);
    };
    require(cfg.c1 > 0, "c1 must be positive");
    require(cfg.c2 > 0, "c2 must be positive");
    require(cfg.dt_floor > 0, "dt_floor must be positive");
    require(cfg.max_steps >= 1, "max_steps must be >= 1");
    require(cfg.t_end > 0, "t_end must be positive");
    require(cfg.stop_maxA > 0, "stop_maxA must be positive");
    require(cfg.projection_tol > 0, "projection_tol must be positive");
    require(cfg.record_every >= 1, "record_every must be >= 1");
    require(cfg.sigma > 0 && cfg.sigma < 0.5, "sigma must lie in (0, 0.5)");
    require(cfg.eta > 0 && cfg.eta < 1, "eta must lie in (0, min(1, 1/(4K)))");
    require(cfg.D >= 0, "D must be non-negative");
    require(cfg.epsilon_pinch > 0 && cfg.epsilon_pinch <= 0.01,
            "epsilon_pinch must lie in (0, 1/100]");
    require(cfg.g_a > 0 && cfg.g_b > 0 && cfg.g_c > 0, "g-functional constants must be positive");
}

std::vector<Vec3> compute_velocity(const FlowState& st, const BarrierSurface& S) {
    const int nv = st.mesh.n_vertices();
    std::vector<Vec3> vel(nv);
    for (int v = 0; v < nv; ++v) {
        const VertexGeometry& g = st.geom.vg[v];
        Vec3 w = -g.H * g.nu;
        if (st.mesh.boundary_vertex[v]) {
            const ClosestPointResult cp = S.signed_distance(st.mesh.positions[v]);
            const Vec3 ns = S.unit_normal(cp.p);
            w -= w.dot(ns) * ns;
        }
        vel[v] = w;
    }
    return vel;
}

double adaptive_dt(const FlowState& st, const FlowConfig& cfg) {
    const double h2 = st.geom.min_edge * st.geom.min_edge;
    const double a2 = std::max(st.geom.max_abs_A * st.geom.max_abs_A, 1e-300);
    return std::max(cfg.dt_floor, std::min(cfg.c1 * h2, cfg.c2 / a2));
}

void project_boundary(TriMesh& mesh, const BarrierSurface& S, double tol) {
    for (int v = 0; v < mesh.n_vertices(); ++v) {
        if (!mesh.boundary_vertex[v]) continue;
        const ClosestPointResult cp = S.signed_distance(mesh.positions[v]);
        mesh.positions[v] = cp.p;
        const double res = std::abs(S.phi(cp.p));
        const double scale = std::max(1.0, S.grad(cp.p).norm());
        if (res / scale > tol)
            throw NoConvergence("boundary projection left |phi| above tolerance");
    }
}

void refresh_state(FlowState& st, const BarrierSurface& S) {
    st.geom = compute_geometry(st.mesh, &S);
    st.pert = perturbed_sff(st.mesh, st.geom, S, st.K);
}

namespace {

constexpr double kAngleFloorDeg = 0.5;

void tangential_smooth(TriMesh& mesh, const GeometryCache& geom, double factor) {
    std::vector<Vec3> next = mesh.positions;
    for (int v = 0; v < mesh.n_vertices(); ++v) {
        if (mesh.boundary_vertex[v]) continue;
        const auto ring = mesh.one_ring(v);
        Vec3 centroid = Vec3::Zero();
        double wsum = 0.0;
        for (int u : ring) {
            const double w = geom.vertex_area[u];
            centroid += w * mesh.positions[u];
            wsum += w;
        }
        centroid /= wsum;
        Vec3 d = centroid - mesh.positions[v];
        d -= d.dot(geom.vg[v].nu) * geom.vg[v].nu;  // tangent plane only
        next[v] += factor * d;
    }
    mesh.positions = std::move(next);
}

}  // namespace

void flow_step(FlowState& st, double dt, const BarrierSurface& S, const FlowConfig& cfg) {
    if (dt <= 0) throw InvalidParams("flow step needs dt > 0");
    const std::vector<Vec3> vel = compute_velocity(st, S);

    std::vector<Vec3> pre_normals(st.mesh.n_faces());
    for (int f = 0; f < st.mesh.n_faces(); ++f) pre_normals[f] = st.mesh.face_normal(f);

    for (int v = 0; v < st.mesh.n_vertices(); ++v) st.mesh.positions[v] += dt * vel[v];
    if (cfg.tangential_smoothing) tangential_smooth(st.mesh, st.geom, 0.2);
    project_boundary(st.mesh, S, cfg.projection_tol);

    for (int f = 0; f < st.mesh.n_faces(); ++f) {
        if (st.mesh.face_normal(f).dot(pre_normals[f]) < 0.0)
            throw MeshDegenerate("face inverted during step");
    }

    refresh_state(st, S);
    if (st.geom.min_face_area < 1e-4 * st.initial_min_face_area)
        throw MeshDegenerate("face area under floor");
    if (st.geom.min_angle_deg < kAngleFloorDeg) throw MeshDegenerate("face angle under floor");

    st.t += dt;
    st.step += 1;
}

RunResult run_flow(const FlowConfig& cfg, TriMesh initial, const BarrierSurface& S,
                   const RecordHook& hook) {
    validate_flow_config(cfg);

    RunResult out;
    FlowState& st = out.state;
    st.mesh = std::move(initial);

    st.bounds = estimate_bounds(S, S.sample_points(400, cfg.seed), kBarrierKMin);
    st.K = st.bounds.K;
    const double eta_cap = std::min(1.0, 0.25 / st.K);
    if (cfg.eta >= eta_cap)
        throw ValidationError("eta must lie in (0, min(1, 1/(4K))) with estimated K");

    project_boundary(st.mesh, S, cfg.projection_tol);
    refresh_state(st, S);
    st.initial_min_face_area = st.geom.min_face_area;
    st.stop_min_area = cfg.stop_min_area > 0 ? cfg.stop_min_area : 1e-4 * st.geom.area;
    if (cfg.C_grad > 0) {
        st.C_grad = cfg.C_grad;
    } else {
        double g2 = 0.0;
        for (const auto& g : st.geom.vg) g2 = std::max(g2, g.gradH.squaredNorm());
        st.C_grad = std::max(2.0 * g2, 1e-12);
    }

    double last_dt = 0.0;
    int last_recorded_step = -1;
    auto record = [&] {
        if (st.step == last_recorded_step) return;
        last_recorded_step = st.step;
        DiagnosticsRecord rec = make_record(st, S, cfg, last_dt);
        if (hook) hook(st, rec);
        out.records.push_back(rec);
        out.frames.push_back(st.mesh);
    };

    while (true) {
        if (st.step % cfg.record_every == 0) record();
        if (st.geom.max_abs_A >= cfg.stop_maxA) {
            out.stop = StopReason::CurvatureBlowup;
            break;
        }
        if (st.geom.area <= st.stop_min_area) {
            out.stop = StopReason::AreaFloor;
            break;
        }
        if (st.t >= cfg.t_end * (1.0 - 1e-14)) {
            out.stop = StopReason::TimeHorizon;
            break;
        }
        if (st.step >= cfg.max_steps) {
            out.stop = StopReason::MaxSteps;
            break;
        }
        const double h2 = st.geom.min_edge * st.geom.min_edge;
        const double a2 = std::max(st.geom.max_abs_A * st.geom.max_abs_A, 1e-300);
        const double dt_raw = std::min(cfg.c1 * h2, cfg.c2 / a2);
        if (dt_raw < cfg.dt_floor) {
            out.stop = StopReason::DtFloor;
            break;
        }
        double dt = dt_raw;
        if (std::isfinite(cfg.t_end)) dt = std::min(dt, cfg.t_end - st.t);
        const std::vector<Vec3> saved = st.mesh.positions;
        try {
            flow_step(st, dt, S, cfg);
        } catch (const MeshDegenerate&) {
            st.mesh.positions = saved;  // keep the last consistent state
            out.stop = StopReason::MeshDegenerate;
            break;
        }
        last_dt = dt;
    }
    record();  // final state
    return out;
}

}  // namespace fbmcf
