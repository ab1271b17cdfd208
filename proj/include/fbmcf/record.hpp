#pragma once

#include <string>

namespace fbmcf {

// One row of monitored scalars per recorded time. The CSV schema serializes
// exactly the fields up to min_angle, in this order; the trailing fields are
// in-memory companions (time integrals and raw monitor values).
struct DiagnosticsRecord {
    double t = 0.0;
    double dt = 0.0;
    double area = 0.0;
    double boundary_length = 0.0;
    double H_min = 0.0;
    double H_max = 0.0;
    double maxA = 0.0;
    double lambda_min_A = 0.0;
    double lambda_min_Atilde = 0.0;
    double pinch_margin = 0.0;
    double f_max = 0.0;
    double grad_ratio_max = 0.0;
    double res_NH = 0.0;
    double res_h11 = 0.0;
    double res_h22 = 0.0;
    double res_NAtilde = 0.0;
    double res_P12 = 0.0;
    double umbilic_ratio_max = 0.0;
    double min_angle = 0.0;

    // not serialized
    double int_H2 = 0.0;             // integral of H^2 over the surface
    double raw_grad_ratio_max = 0.0; // max |grad H|^2 / H^4
    double g_functional_max = 0.0;
    double zeta_min = 0.0;
    double zeta_max = 0.0;
    bool zeta_bracket_ok = true;
    double min_signed_pinch = 0.0;   // raw min of |A~|^2 - H~^2/2
    double max_P_deviation = 0.0;    // max |A_tilde - A| componentwise
};

inline constexpr const char* kDiagnosticsCsvHeader =
    "t,dt,area,boundary_length,H_min,H_max,maxA,lambda_min_A,lambda_min_Atilde,pinch_margin,"
    "f_max,grad_ratio_max,res_NH,res_h11,res_h22,res_NAtilde,res_P12,umbilic_ratio_max,"
    "min_angle";

std::string record_csv_row(const DiagnosticsRecord& r);

}  // namespace fbmcf
