#pragma once

#include <cstdint>
#include <vector>

#include "fbmcf/barrier.hpp"
#include "fbmcf/flow.hpp"
#include "fbmcf/record.hpp"
#include "fbmcf/types.hpp"

namespace fbmcf {

struct ConvexityMargin {
    double lambda_min_A = 0.0;
    double lambda_min_Atilde = 0.0;
    bool pass_A_third = false;   // lambda_min(A) > D/3
    bool pass_At_half = false;   // lambda_min(A~) > D/2
};
ConvexityMargin convexity_margin(const FlowState& st, double D);

// max over vertices of max(0, |A~|^2 - H~^2/2) / H~^(2-sigma).
// Throws NonpositiveHtilde naming the first offending vertex.
double pinching_f(const FlowState& st, double sigma);

struct GradientTestResult {
    double grad_ratio_max = 0.0;      // |grad H|^2 / (eta H^4 + C_grad)
    double raw_ratio_max = 0.0;       // |grad H|^2 / H^4
    double g_functional_max = 0.0;
    double zeta_min = 0.0, zeta_max = 0.0;
    double zeta_boundary_dev = 0.0;   // max |zeta - eta| over boundary vertices
    double grad_zeta_max = 0.0;       // fitted |grad zeta|
    bool zeta_bracket_ok = true;      // eta e^-2 <= zeta <= eta e^2 everywhere
};
GradientTestResult gradient_test(const FlowState& st, const BarrierSurface& S,
                                 const FlowConfig& cfg);

struct BoundaryResidualReport {
    double res_NH = 0.0;
    double res_h11 = 0.0;
    double res_h22 = 0.0;
    double res_NAtilde = 0.0;
    double res_P12 = 0.0;
};
// One-sided conormal differences of H, h11, h22, |A~|^2 against the analytic
// barrier terms, plus the algebraic P12 + h12 residual; max over the boundary.
BoundaryResidualReport boundary_residuals(const FlowState& st, const BarrierSurface& S);

// max over consecutive records of |dA + trapezoid(int H^2 dV)| / |dA|.
double area_balance(const std::vector<DiagnosticsRecord>& records);

struct BlowupEstimate {
    double paper_bound = 0.0;  // 1/H0^2
    double fitted_T = 0.0;     // from H_max(t) ~ c / sqrt(T - t)
    double c = 0.0;
    bool within_paper_bound = false;  // fitted_T <= 1.05 * paper_bound
};
BlowupEstimate blowup_estimate(double H0, const std::vector<DiagnosticsRecord>& records);

struct RescaleReport {
    double hausdorff = 0.0;          // to the unit upper hemisphere
    double umbilic_ratio_max = 0.0;  // max |Aring| / H
};
// Centers on the boundary centroid's barrier projection, rotates nu_S there
// to -e_z, scales by 1/sqrt(4 (T_est - t)), then measures the symmetric
// point-sampled Hausdorff distance to the unit upper hemisphere.
RescaleReport rescale_compare(const TriMesh& mesh, const GeometryCache& geom,
                              const BarrierSurface& S, double t, double T_est,
                              int n_samples = 10000, std::uint64_t seed = 777);

DiagnosticsRecord make_record(const FlowState& st, const BarrierSurface& S, const FlowConfig& cfg,
                              double last_dt);

}  // namespace fbmcf
