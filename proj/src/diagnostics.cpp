#include "fbmcf/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

namespace fbmcf {

std::string record_csv_row(const DiagnosticsRecord& r) {
    char buf[1024];
    std::snprintf(buf, sizeof(buf),
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g",
                  r.t, r.dt, r.area, r.boundary_length, r.H_min, r.H_max, r.maxA, r.lambda_min_A,
                  r.lambda_min_Atilde, r.pinch_margin, r.f_max, r.grad_ratio_max, r.res_NH,
                  r.res_h11, r.res_h22, r.res_NAtilde, r.res_P12, r.umbilic_ratio_max,
                  r.min_angle);
    return buf;
}

namespace {

double lambda_min(const Mat2& M) {
    const double mid = 0.5 * (M(0, 0) + M(1, 1));
    const double disc =
        std::sqrt(std::pow(0.5 * (M(0, 0) - M(1, 1)), 2) + M(0, 1) * M(1, 0));
    return mid - disc;
}

// closest point on triangle abc to p, with barycentric weights
Vec3 closest_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c, Vec3& bary) {
    const Vec3 ab = b - a, ac = c - a, ap = p - a;
    const double d1 = ab.dot(ap), d2 = ac.dot(ap);
    if (d1 <= 0 && d2 <= 0) { bary = Vec3(1, 0, 0); return a; }
    const Vec3 bp = p - b;
    const double d3 = ab.dot(bp), d4 = ac.dot(bp);
    if (d3 >= 0 && d4 <= d3) { bary = Vec3(0, 1, 0); return b; }
    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0 && d1 >= 0 && d3 <= 0) {
        const double v = d1 / (d1 - d3);
        bary = Vec3(1 - v, v, 0);
        return a + v * ab;
    }
    const Vec3 cp = p - c;
    const double d5 = ab.dot(cp), d6 = ac.dot(cp);
    if (d6 >= 0 && d5 <= d6) { bary = Vec3(0, 0, 1); return c; }
    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0 && d2 >= 0 && d6 <= 0) {
        const double w = d2 / (d2 - d6);
        bary = Vec3(1 - w, 0, w);
        return a + w * ac;
    }
    const double va = d3 * d6 - d5 * d4;
    if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) {
        const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        bary = Vec3(0, 1 - w, w);
        return b + w * (c - b);
    }
    const double denom = 1.0 / (va + vb + vc);
    const double v = vb * denom, w = vc * denom;
    bary = Vec3(1 - v - w, v, w);
    return a + ab * v + ac * w;
}

struct MeshSample {
    Vec3 point;
    int face = -1;
    Vec3 bary;
    double dist = 1e300;
};

// Closest point on the mesh restricted to faces near vertex v.
MeshSample project_near(const TriMesh& mesh, int v, const Vec3& x) {
    MeshSample best;
    std::vector<int> verts = mesh.k_ring(v, 2);
    verts.push_back(v);
    std::vector<char> seen(mesh.n_faces(), 0);
    for (int u : verts) {
        for (int f : mesh.vertex_faces(u)) {
            if (seen[f]) continue;
            seen[f] = 1;
            const auto& F = mesh.faces[f];
            Vec3 bc;
            const Vec3 q = closest_on_triangle(x, mesh.positions[F[0]], mesh.positions[F[1]],
                                               mesh.positions[F[2]], bc);
            const double d = (q - x).norm();
            if (d < best.dist) {
                best.dist = d;
                best.point = q;
                best.face = f;
                best.bary = bc;
            }
        }
    }
    return best;
}

double interp_scalar(const TriMesh& mesh, const MeshSample& s, const std::vector<double>& field) {
    const auto& F = mesh.faces[s.face];
    return s.bary(0) * field[F[0]] + s.bary(1) * field[F[1]] + s.bary(2) * field[F[2]];
}

Mat3 interp_tensor(const TriMesh& mesh, const MeshSample& s, const std::vector<Mat3>& field) {
    const auto& F = mesh.faces[s.face];
    return s.bary(0) * field[F[0]] + s.bary(1) * field[F[1]] + s.bary(2) * field[F[2]];
}

Vec3 interp_vec(const TriMesh& mesh, const MeshSample& s, const std::vector<Vec3>& field) {
    const auto& F = mesh.faces[s.face];
    return s.bary(0) * field[F[0]] + s.bary(1) * field[F[1]] + s.bary(2) * field[F[2]];
}

}  // namespace

ConvexityMargin convexity_margin(const FlowState& st, double D) {
    ConvexityMargin out;
    out.lambda_min_A = 1e300;
    out.lambda_min_Atilde = 1e300;
    for (std::size_t v = 0; v < st.geom.vg.size(); ++v) {
        out.lambda_min_A = std::min(out.lambda_min_A, st.geom.vg[v].k1);
        out.lambda_min_Atilde = std::min(out.lambda_min_Atilde, lambda_min(st.pert[v].A_tilde));
    }
    out.pass_A_third = out.lambda_min_A > D / 3.0;
    out.pass_At_half = out.lambda_min_Atilde > D / 2.0;
    return out;
}

double pinching_f(const FlowState& st, double sigma) {
    double fmax = 0.0;
    for (std::size_t v = 0; v < st.pert.size(); ++v) {
        const double Ht = st.pert[v].H_tilde;
        if (Ht <= 0)
            throw NonpositiveHtilde("H_tilde <= 0 at vertex " + std::to_string(v));
        const double excess = st.pert[v].A_tilde_norm2 - 0.5 * Ht * Ht;
        fmax = std::max(fmax, std::max(0.0, excess) / std::pow(Ht, 2.0 - sigma));
    }
    return fmax;
}

GradientTestResult gradient_test(const FlowState& st, const BarrierSurface& S,
                                 const FlowConfig& cfg) {
    GradientTestResult out;
    out.zeta_min = 1e300;
    out.zeta_max = -1e300;
    const double eta = cfg.eta;
    const int nv = st.mesh.n_vertices();
    std::vector<double> zeta(nv);

    for (int v = 0; v < nv; ++v) {
        const Vec3& x = st.mesh.positions[v];
        double rho = 0.0;
        if (S.distance_lower_bound(x) < 2.0 * eta) {
            if (auto cp = S.try_signed_distance(x)) {
                const double d = cp->d;
                if (std::abs(d) < 2.0 * eta) rho = d * chi_profile(std::abs(d) / eta);
            }
        }
        zeta[v] = eta * std::exp(rho / eta);
        out.zeta_min = std::min(out.zeta_min, zeta[v]);
        out.zeta_max = std::max(out.zeta_max, zeta[v]);
        if (st.mesh.boundary_vertex[v])
            out.zeta_boundary_dev = std::max(out.zeta_boundary_dev, std::abs(zeta[v] - eta));
    }
    const double lo = eta * std::exp(-2.0) - 1e-12;
    const double hi = eta * std::exp(2.0) + 1e-12;
    out.zeta_bracket_ok = out.zeta_min >= lo && out.zeta_max <= hi;

    for (int v = 0; v < nv; ++v) {
        const VertexGeometry& g = st.geom.vg[v];
        const double H = g.H;
        const double g2 = g.gradH.squaredNorm();
        out.grad_ratio_max =
            std::max(out.grad_ratio_max, g2 / (eta * std::pow(H, 4) + st.C_grad));
        if (H > 1e-12) out.raw_ratio_max = std::max(out.raw_ratio_max, g2 / std::pow(H, 4));

        // composite monitor from the gradient bound machinery
        const ExtendedFields ext = S.extend(st.mesh.positions[v], st.K);
        double hS_nn = 0.0;
        Vec3 nuS_T = Vec3::Zero();
        if (ext.in_support) {
            hS_nn = g.nu.dot(ext.A * g.nu);
            nuS_T = ext.nu_flat - ext.nu_flat.dot(g.nu) * g.nu;
        }
        if (H > 1e-12) {
            const Vec3 var = g.gradH - hS_nn * H * nuS_T;
            const double excess = st.pert[v].A_tilde_norm2 - 0.5 * st.pert[v].H_tilde * st.pert[v].H_tilde;
            const double gval = var.squaredNorm() / H + cfg.g_b * H * excess +
                                cfg.g_b * cfg.g_a * st.pert[v].A_tilde_norm2 -
                                zeta[v] * H * H * H + cfg.g_c;
            out.g_functional_max = std::max(out.g_functional_max, gval);
        }
    }

    // fitted |grad zeta| over 1-rings
    for (int v = 0; v < nv; ++v) {
        const auto ring = st.mesh.one_ring(v);
        const VertexGeometry& g = st.geom.vg[v];
        Eigen::MatrixXd M(ring.size(), 2);
        Eigen::VectorXd rhs(ring.size());
        for (std::size_t i = 0; i < ring.size(); ++i) {
            const Vec3 rel = st.mesh.positions[ring[i]] - st.mesh.positions[v];
            M(i, 0) = rel.dot(g.t1);
            M(i, 1) = rel.dot(g.t2);
            rhs(i) = zeta[ring[i]] - zeta[v];
        }
        const Vec2 gz = M.colPivHouseholderQr().solve(rhs);
        out.grad_zeta_max = std::max(out.grad_zeta_max, gz.norm());
    }
    return out;
}

BoundaryResidualReport boundary_residuals(const FlowState& st, const BarrierSurface& S) {
    BoundaryResidualReport rep;
    const TriMesh& mesh = st.mesh;
    const int nv = mesh.n_vertices();

    std::vector<double> Hfield(nv), At2field(nv);
    std::vector<Mat3> Aworld(nv);
    std::vector<Vec3> nufield(nv);
    for (int v = 0; v < nv; ++v) {
        Hfield[v] = st.geom.vg[v].H;
        At2field[v] = st.pert[v].A_tilde_norm2;
        Aworld[v] = st.geom.vg[v].A_world;
        nufield[v] = st.geom.vg[v].nu;
    }

    const double epsS = 1e-4 / st.K;

    for (const BoundaryFrame& bf : st.geom.boundary) {
        const int v = bf.vertex;
        const Vec3 p = mesh.positions[v];
        const VertexGeometry& g = st.geom.vg[v];

        double s0 = 0.0;
        const auto ring = mesh.one_ring(v);
        for (int u : ring) s0 += (mesh.positions[u] - p).norm();
        s0 /= double(ring.size());

        const MeshSample ms = project_near(mesh, v, p - s0 * bf.N);
        if (ms.face < 0) continue;
        const double s = (ms.point - p).norm();
        if (s < 1e-10) continue;

        const Vec3 n_s = interp_vec(mesh, ms, nufield).normalized();
        Vec3 e1 = bf.N - bf.N.dot(n_s) * n_s;
        e1.normalize();
        Vec3 e2 = bf.T - bf.T.dot(n_s) * n_s;
        e2 -= e2.dot(e1) * e1;
        e2.normalize();
        const Mat3 Aw_s = interp_tensor(mesh, ms, Aworld);

        const double H_v = g.H;
        const double h11 = bf.N.dot(g.A_world * bf.N);
        const double h22 = bf.T.dot(g.A_world * bf.T);
        const double h12 = bf.N.dot(g.A_world * bf.T);
        const double At2_v = st.pert[v].A_tilde_norm2;

        const double NH = (H_v - interp_scalar(mesh, ms, Hfield)) / s;
        const double Nh11 = (h11 - e1.dot(Aw_s * e1)) / s;
        const double Nh22 = (h22 - e2.dot(Aw_s * e2)) / s;
        const double NAt2 = (At2_v - interp_scalar(mesh, ms, At2field)) / s;

        // analytic barrier quantities at the contact point
        const ClosestPointResult cp = S.signed_distance(p);
        const BarrierPointFrame F = S.surface_frame(cp.p);
        const Mat3 AwS = F.A_world();
        Vec3 nu_hat = g.nu - g.nu.dot(F.nu) * F.nu;
        if (nu_hat.norm() < 1e-8) continue;
        nu_hat.normalize();
        Vec3 T_hat = bf.T - bf.T.dot(F.nu) * F.nu;
        T_hat.normalize();
        const double hS_nn = nu_hat.dot(AwS * nu_hat);
        const double hS_22 = T_hat.dot(AwS * T_hat);

        // grad^S_nu h^S_22 by central differences along the barrier
        const Vec3 qp = S.signed_distance(cp.p + epsS * nu_hat).p;
        const Vec3 qm = S.signed_distance(cp.p - epsS * nu_hat).p;
        const BarrierPointFrame Fp = S.surface_frame(qp);
        const BarrierPointFrame Fm = S.surface_frame(qm);
        Vec3 Tp = T_hat - T_hat.dot(Fp.nu) * Fp.nu;
        Tp.normalize();
        Vec3 Tm = T_hat - T_hat.dot(Fm.nu) * Fm.nu;
        Tm.normalize();
        const double dS =
            (Tp.dot(Fp.A_world() * Tp) - Tm.dot(Fm.A_world() * Tm)) / (qp - qm).norm();

        rep.res_NH = std::max(rep.res_NH, std::abs(NH - hS_nn * H_v));
        rep.res_h11 = std::max(
            rep.res_h11, std::abs(Nh11 - (2.0 * hS_22 * H_v + (hS_nn - 3.0 * hS_22) * h11 + dS)));
        rep.res_h22 = std::max(
            rep.res_h22, std::abs(Nh22 - (hS_22 * H_v + (hS_nn - 3.0 * hS_22) * h22 - dS)));
        rep.res_NAtilde = std::max(
            rep.res_NAtilde,
            std::abs(0.5 * NAt2 - (3.0 * hS_22 * H_v * h11 + (hS_nn - 2.0 * hS_22) * At2_v -
                                   2.0 * hS_22 * h11 * h11 + dS * (h11 - h22))));

        // Fermi components of P_sigma: rotate the vertex frame to (N, T)
        Eigen::Matrix<double, 3, 2> B;
        B.col(0) = g.t1;
        B.col(1) = g.t2;
        const Mat3 Pw = B * st.pert[v].P_sigma * B.transpose();
        const double P12 = bf.N.dot(Pw * bf.T);
        rep.res_P12 = std::max(rep.res_P12, std::abs(P12 + h12));
    }
    return rep;
}

double area_balance(const std::vector<DiagnosticsRecord>& records) {
    if (records.size() < 2) throw InsufficientRecords("area balance needs >= 2 records");
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < records.size(); ++i) {
        const auto& a = records[i];
        const auto& b = records[i + 1];
        const double dA = b.area - a.area;
        const double trap = 0.5 * (a.int_H2 + b.int_H2) * (b.t - a.t);
        const double num = std::abs(dA + trap);
        if (num <= 1e-12 * std::max(a.area, b.area)) continue;
        worst = std::max(worst, num / std::abs(dA));
    }
    return worst;
}

BlowupEstimate blowup_estimate(double H0, const std::vector<DiagnosticsRecord>& records) {
    if (H0 <= 0) throw FitFailed("H0 must be positive");
    const int n = static_cast<int>(records.size());
    const int win = std::max(4, n / 2);
    if (n < 4) throw FitFailed("too few records for the blow-up fit");
    const int start = n - win;
    for (int i = start + 1; i < n; ++i) {
        if (records[i].H_max <= records[i - 1].H_max)
            throw FitFailed("max H not monotone over the fit window");
    }
    // H_max(t) = c / sqrt(T - t)  =>  H_max^-2 = (T - t)/c^2, linear in t
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (int i = start; i < n; ++i) {
        const double t = records[i].t;
        const double y = 1.0 / (records[i].H_max * records[i].H_max);
        st += t;
        sy += y;
        stt += t * t;
        sty += t * y;
    }
    const double m = double(win);
    const double denom = m * stt - st * st;
    if (std::abs(denom) < 1e-300) throw FitFailed("degenerate fit window");
    const double beta = (m * sty - st * sy) / denom;
    const double alpha = (sy - beta * st) / m;
    if (beta >= 0) throw FitFailed("max H not blowing up over the fit window");
    BlowupEstimate out;
    out.fitted_T = -alpha / beta;
    out.c = std::sqrt(-1.0 / beta);
    out.paper_bound = 1.0 / (H0 * H0);
    out.within_paper_bound = out.fitted_T <= 1.05 * out.paper_bound;
    return out;
}

namespace {

std::vector<Vec3> sample_mesh_surface(const TriMesh& mesh, int n, std::mt19937_64& rng) {
    std::vector<double> cumulative(mesh.n_faces());
    double total = 0.0;
    for (int f = 0; f < mesh.n_faces(); ++f) {
        total += mesh.face_area(f);
        cumulative[f] = total;
    }
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<Vec3> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double target = unif(rng) * total;
        const int f = static_cast<int>(
            std::lower_bound(cumulative.begin(), cumulative.end(), target) - cumulative.begin());
        const auto& F = mesh.faces[std::min(f, mesh.n_faces() - 1)];
        const double r1 = std::sqrt(unif(rng));
        const double r2 = unif(rng);
        out.push_back((1.0 - r1) * mesh.positions[F[0]] + r1 * (1.0 - r2) * mesh.positions[F[1]] +
                      r1 * r2 * mesh.positions[F[2]]);
    }
    return out;
}

double directed_max_min(const std::vector<Vec3>& from, const std::vector<Vec3>& to) {
    double worst = 0.0;
    for (const Vec3& a : from) {
        double best = 1e300;
        for (const Vec3& b : to) best = std::min(best, (a - b).squaredNorm());
        worst = std::max(worst, best);
    }
    return std::sqrt(worst);
}

}  // namespace

RescaleReport rescale_compare(const TriMesh& mesh, const GeometryCache& geom,
                              const BarrierSurface& S, double t, double T_est, int n_samples,
                              std::uint64_t seed) {
    if (T_est <= t) throw NonpositiveRemaining("T_est must exceed the state time");
    RescaleReport out;

    Vec3 centroid = Vec3::Zero();
    int nb = 0;
    for (const auto& loop : mesh.boundary_loops) {
        for (int v : loop) {
            centroid += mesh.positions[v];
            ++nb;
        }
    }
    if (nb == 0) throw InvalidParams("rescale_compare needs a boundary");
    centroid /= double(nb);
    const ClosestPointResult cp = S.signed_distance(centroid);
    const Vec3 origin = cp.p;
    const Mat3 R = rotation_between(S.unit_normal(cp.p), Vec3(0, 0, -1));
    const double scale = 1.0 / std::sqrt(4.0 * (T_est - t));

    TriMesh scaled = mesh;
    for (auto& p : scaled.positions) p = scale * (R * (p - origin));

    std::mt19937_64 rng(seed);
    const std::vector<Vec3> a = sample_mesh_surface(scaled, n_samples, rng);
    std::vector<Vec3> b;
    b.reserve(n_samples);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < n_samples; ++i) {
        const double z = unif(rng);
        const double phi = 2.0 * M_PI * unif(rng) - M_PI;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        b.push_back(Vec3(r * std::cos(phi), r * std::sin(phi), z));
    }
    out.hausdorff = std::max(directed_max_min(a, b), directed_max_min(b, a));

    for (const auto& g : geom.vg) {
        if (g.H > 1e-12)
            out.umbilic_ratio_max =
                std::max(out.umbilic_ratio_max, std::abs(g.k2 - g.k1) / (std::sqrt(2.0) * g.H));
    }
    return out;
}

DiagnosticsRecord make_record(const FlowState& st, const BarrierSurface& S, const FlowConfig& cfg,
                              double last_dt) {
    DiagnosticsRecord r;
    r.t = st.t;
    r.dt = last_dt;
    r.area = st.geom.area;
    r.boundary_length = st.geom.boundary_length;
    r.H_min = st.geom.H_min();
    r.H_max = st.geom.H_max();
    r.maxA = st.geom.max_abs_A;
    r.min_angle = st.geom.min_angle_deg;
    r.int_H2 = st.geom.int_H2;

    const ConvexityMargin cm = convexity_margin(st, cfg.D);
    r.lambda_min_A = cm.lambda_min_A;
    r.lambda_min_Atilde = cm.lambda_min_Atilde;

    double pinch = 1e300;
    double min_signed = 1e300;
    double umb = 0.0;
    double maxdev = 0.0;
    for (std::size_t v = 0; v < st.geom.vg.size(); ++v) {
        const VertexGeometry& g = st.geom.vg[v];
        pinch = std::min(pinch, g.k1 - cfg.epsilon_pinch * g.H);
        min_signed = std::min(min_signed, st.pert[v].A_tilde_norm2 -
                                              0.5 * st.pert[v].H_tilde * st.pert[v].H_tilde);
        if (g.H > 1e-12)
            umb = std::max(umb, std::abs(g.k2 - g.k1) / (std::sqrt(2.0) * g.H));
        maxdev = std::max(maxdev, st.pert[v].P_sigma.cwiseAbs().maxCoeff());
    }
    r.pinch_margin = pinch;
    r.min_signed_pinch = min_signed;
    r.umbilic_ratio_max = umb;
    r.max_P_deviation = maxdev;

    try {
        r.f_max = pinching_f(st, cfg.sigma);
    } catch (const NonpositiveHtilde&) {
        r.f_max = std::numeric_limits<double>::quiet_NaN();
    }

    const GradientTestResult gt = gradient_test(st, S, cfg);
    r.grad_ratio_max = gt.grad_ratio_max;
    r.raw_grad_ratio_max = gt.raw_ratio_max;
    r.g_functional_max = gt.g_functional_max;
    r.zeta_min = gt.zeta_min;
    r.zeta_max = gt.zeta_max;
    r.zeta_bracket_ok = gt.zeta_bracket_ok;

    if (!st.geom.boundary.empty()) {
        const BoundaryResidualReport br = boundary_residuals(st, S);
        r.res_NH = br.res_NH;
        r.res_h11 = br.res_h11;
        r.res_h22 = br.res_h22;
        r.res_NAtilde = br.res_NAtilde;
        r.res_P12 = br.res_P12;
    }
    return r;
}

}  // namespace fbmcf
