#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "fbmcf/config.hpp"
#include "fbmcf/diagnostics.hpp"
#include "fbmcf/io.hpp"
#include "fbmcf/oracles.hpp"
#include "fbmcf/perturbation.hpp"

using namespace fbmcf;
namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.8g", v);
    return buf;
}

struct BarrierArgs {
    std::string name;
    double radius = -1.0;
    double gap = 0.5;
    std::vector<double> axes;
    int orientation = +1;
};

BarrierSurface barrier_from_args(const BarrierArgs& a) {
    if (a.name == "plane") return BarrierSurface::plane(Vec3(0, 0, 1), 0.0, a.orientation);
    if (a.name == "sphere")
        return BarrierSurface::sphere(a.radius > 0 ? a.radius : 1.0, a.orientation);
    if (a.name == "cylinder")
        return BarrierSurface::cylinder(a.radius > 0 ? a.radius : 1.0, a.orientation);
    if (a.name == "slab") return BarrierSurface::slab(a.gap, a.orientation);
    if (a.name == "ellipsoid") {
        if (a.axes.empty()) return BarrierSurface::ellipsoid(2.0, 1.5, 1.0, a.orientation);
        if (a.axes.size() != 3) throw ValidationError("--axes expects three values");
        return BarrierSurface::ellipsoid(a.axes[0], a.axes[1], a.axes[2], a.orientation);
    }
    throw ValidationError("unknown barrier '" + a.name +
                          "' (plane|sphere|cylinder|ellipsoid|slab)");
}

int run_command(const std::string& config_path) {
    const RunConfig cfg = parse_config(config_path);
    const BarrierSurface barrier = resolve_barrier(cfg);
    TriMesh mesh = resolve_initial_mesh(cfg);

    const RunResult result = run_flow(cfg.flow, std::move(mesh), barrier);
    const auto& records = result.records;

    std::vector<std::pair<std::string, std::string>> summary;
    summary.emplace_back("stop_reason", stop_reason_name(result.stop));
    summary.emplace_back("steps", std::to_string(result.state.step));
    summary.emplace_back("t_final", fmt(result.state.t));
    summary.emplace_back("records", std::to_string(records.size()));
    summary.emplace_back("vertices", std::to_string(result.state.mesh.n_vertices()));
    summary.emplace_back("K", fmt(result.state.bounds.K));
    summary.emplace_back("L1", fmt(result.state.bounds.L1));
    summary.emplace_back("L2", fmt(result.state.bounds.L2));

    const DiagnosticsRecord& first = records.front();
    const DiagnosticsRecord& last = records.back();
    summary.emplace_back("area_initial", fmt(first.area));
    summary.emplace_back("area_final", fmt(last.area));
    summary.emplace_back("H0_min", fmt(first.H_min));
    summary.emplace_back("D", fmt(cfg.flow.D));
    summary.emplace_back("initial_convexity_satisfied",
                         first.lambda_min_A > cfg.flow.D ? "yes" : "no");

    double lamA = 1e300, lamAt = 1e300, fmax = 0.0, umbmax = 0.0, minpinch = 1e300;
    bool zeta_ok = true;
    for (const auto& r : records) {
        lamA = std::min(lamA, r.lambda_min_A);
        lamAt = std::min(lamAt, r.lambda_min_Atilde);
        if (!std::isnan(r.f_max)) fmax = std::max(fmax, r.f_max);
        umbmax = std::max(umbmax, r.umbilic_ratio_max);
        minpinch = std::min(minpinch, r.min_signed_pinch);
        zeta_ok = zeta_ok && r.zeta_bracket_ok;
    }
    summary.emplace_back("initial_lambda_min_A", fmt(first.lambda_min_A));
    summary.emplace_back("min_lambda_A_over_run", fmt(lamA));
    summary.emplace_back("min_lambda_Atilde_over_run", fmt(lamAt));
    summary.emplace_back("f_max_initial", fmt(first.f_max));
    summary.emplace_back("f_max_over_run", fmt(fmax));
    summary.emplace_back("grad_ratio_initial", fmt(first.grad_ratio_max));
    summary.emplace_back("grad_ratio_final", fmt(last.grad_ratio_max));
    summary.emplace_back("raw_grad_ratio_initial", fmt(first.raw_grad_ratio_max));
    summary.emplace_back("raw_grad_ratio_final", fmt(last.raw_grad_ratio_max));
    summary.emplace_back("zeta_bracket_ok_all", zeta_ok ? "yes" : "no");
    summary.emplace_back("min_signed_pinch_over_run", fmt(minpinch));
    summary.emplace_back("umbilic_ratio_initial", fmt(first.umbilic_ratio_max));
    summary.emplace_back("umbilic_ratio_max_over_run", fmt(umbmax));

    if (records.size() >= 2) {
        summary.emplace_back("area_balance_max_residual", fmt(area_balance(records)));
    }
    try {
        const BlowupEstimate be = blowup_estimate(first.H_min, records);
        summary.emplace_back("blowup_paper_bound", fmt(be.paper_bound));
        summary.emplace_back("blowup_fitted_T", fmt(be.fitted_T));
        summary.emplace_back("blowup_fit_c", fmt(be.c));
        summary.emplace_back("blowup_within_bound", be.within_paper_bound ? "yes" : "no");
        if (be.fitted_T > result.state.t && !result.state.geom.boundary.empty()) {
            const RescaleReport rr =
                rescale_compare(result.state.mesh, result.state.geom, barrier, result.state.t,
                                be.fitted_T);
            summary.emplace_back("rescale_hausdorff", fmt(rr.hausdorff));
            summary.emplace_back("rescale_umbilic_ratio_max", fmt(rr.umbilic_ratio_max));
        }
    } catch (const FitFailed&) {
        summary.emplace_back("blowup_fitted_T", "n/a");
    }

    const FileManifest manifest = emit_outputs(result, cfg.output, config_echo(cfg), summary);
    std::cout << format_summary(summary);
    std::cout << "outputs: " << manifest.files.size() << " files in " << cfg.output.directory
              << "\n";
    return 0;
}

struct Check {
    std::string name;
    double value;
    double tol;
};

int verify_command(const BarrierArgs& args, int points, std::uint64_t seed) {
    const BarrierSurface S = barrier_from_args(args);
    std::vector<Check> checks;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    const double K = quick_K(S, seed);
    const auto pts = S.sample_points(50, seed ^ 0xabcdef12ULL);

    // analytic gradient / Hessian vs central differences
    {
        double worst_g = 0.0, worst_h = 0.0;
        const double h = 1e-5 * (1.0 + S.patch_scale());
        for (const Vec3& p : pts) {
            const Vec3 x = p + 0.01 * Vec3(gauss(rng), gauss(rng), gauss(rng));
            const Vec3 g = S.grad(x);
            const Mat3 H = S.hess(x);
            const double scale = std::max(1.0, g.norm());
            for (int k = 0; k < 3; ++k) {
                const Vec3 e = Vec3::Unit(k);
                const double fd = (S.phi(x + h * e) - S.phi(x - h * e)) / (2 * h);
                worst_g = std::max(worst_g, std::abs(fd - g(k)) / scale);
                const Vec3 fdg = (S.grad(x + h * e) - S.grad(x - h * e)) / (2 * h);
                worst_h = std::max(worst_h, (fdg - H.col(k)).norm() / scale);
            }
        }
        checks.push_back({"grad_fd", worst_g, 1e-6});
        checks.push_back({"hess_fd", worst_h, 1e-6});
    }

    // signed-distance gradient identity and |D^2 d| <= 2K
    {
        double worst_g = 0.0, worst_h = 0.0;
        const double h = 1e-5;
        for (const Vec3& p : pts) {
            const Vec3 x = p + std::min(0.2 / K, 0.45 * S.tubular_width()) *
                                   (2.0 * (gauss(rng) > 0) - 1.0) * 0.5 * S.unit_normal(p);
            const auto cp = S.try_signed_distance(x);
            if (!cp) continue;
            Vec3 fd;
            Mat3 fdh;
            for (int k = 0; k < 3; ++k) {
                const Vec3 e = Vec3::Unit(k);
                fd(k) = (S.signed_distance(x + h * e).d - S.signed_distance(x - h * e).d) / (2 * h);
                for (int l = 0; l < 3; ++l) {
                    const Vec3 el = Vec3::Unit(l);
                    fdh(k, l) = (S.signed_distance(x + h * e + h * el).d -
                                 S.signed_distance(x + h * e - h * el).d -
                                 S.signed_distance(x - h * e + h * el).d +
                                 S.signed_distance(x - h * e - h * el).d) /
                                (4 * h * h);
                }
            }
            worst_g = std::max(worst_g, (fd - S.unit_normal(cp->p)).norm());
            worst_h = std::max(worst_h, fdh.norm() - 2.0 * K);
        }
        checks.push_back({"dist_grad_identity", worst_g, 1e-6});
        checks.push_back({"dist_hess_bound_excess", worst_h, 1e-3});
    }

    // cutoff profile bounds via finite differences
    {
        double worst_d1 = 0.0, worst_d2 = 0.0, non_monotone = 0.0;
        const double h = 1e-6 / K;
        double prev = 2.0;
        for (int i = 0; i <= 2000; ++i) {
            const double d = i * (0.55 / K) / 2000.0;
            const double c = cutoff_chi(d, K);
            non_monotone = std::max(non_monotone, c - prev);
            prev = c;
            const double d1 = (cutoff_chi(d + h, K) - cutoff_chi(d - h, K)) / (2 * h);
            const double d2 =
                (cutoff_chi(d + h, K) - 2 * c + cutoff_chi(d - h, K)) / (h * h);
            worst_d1 = std::max(worst_d1, std::abs(d1) - 8.0 * K);
            worst_d2 = std::max(worst_d2, std::abs(d2) - 96.0 * K * K);
        }
        checks.push_back({"cutoff_monotone", non_monotone, 1e-12});
        checks.push_back({"cutoff_d1_excess", worst_d1, 1e-6 * K});
        checks.push_back({"cutoff_d2_excess", worst_d2, 1e-4 * K * K});
        checks.push_back({"cutoff_inside", std::abs(cutoff_chi(0.2 / K, K) - 1.0), 0.0});
        checks.push_back({"cutoff_outside", std::abs(cutoff_chi(0.51 / K, K)), 0.0});
    }

    // extension restricts to the surface tensors on S
    {
        double worst = 0.0;
        for (const Vec3& p : pts) {
            const ExtendedFields ext = S.extend(p, K);
            const BarrierPointFrame F = S.surface_frame(p);
            worst = std::max(worst, (ext.A - F.A_world()).norm());
            worst = std::max(worst, (ext.nu_flat - F.nu).norm());
        }
        checks.push_back({"extension_on_surface", worst, 1e-10});
    }

    // ball-curvature dominance over principal curvatures
    {
        const auto samples = with_curvature_probes(S, S.sample_points(200, seed ^ 0x5555ULL));
        const auto zb = ball_curvatures(S, samples);
        double worst = 0.0;
        for (std::size_t i = 0; i < 200; ++i) {
            const BarrierPointFrame F = S.surface_frame(samples[i]);
            const double lmax =
                0.5 * F.H + std::sqrt(std::pow(0.5 * (F.A(0, 0) - F.A(1, 1)), 2) +
                                      F.A(0, 1) * F.A(0, 1));
            worst = std::max(worst, lmax - zb[i].first);
        }
        checks.push_back({"ball_curvature_dominance", worst, 1e-6});
    }

    // tensor identity suite
    {
        const IdentityReport rep = identity_suite(S, points, seed);
        checks.push_back({"identity_i", rep.res_i, 1e-10});
        checks.push_back({"identity_ii", rep.res_ii, 1e-10});
        checks.push_back({"identity_iii", rep.res_iii, 1e-10});
        checks.push_back({"identity_iv", rep.res_iv, 1e-10});
        checks.push_back({"identity_v", rep.res_v, 1e-6});
        if (S.is_umbilic()) checks.push_back({"umbilic_P_zero", rep.max_abs_P, 1e-12});
    }

    int failures = 0;
    std::cout << "check,value,tolerance,status\n";
    for (const auto& c : checks) {
        const bool ok = c.value <= c.tol;
        failures += ok ? 0 : 1;
        std::cout << c.name << "," << fmt(c.value) << "," << fmt(c.tol) << ","
                  << (ok ? "ok" : "FAIL") << "\n";
    }
    return failures == 0 ? 0 : 1;
}

int ballcurv_command(const BarrierArgs& args, int samples, std::uint64_t seed) {
    const BarrierSurface S = barrier_from_args(args);
    const auto pts = S.sample_points(samples, seed);
    const auto zb = ball_curvatures(S, pts);
    double zbar = -1e300, zlow = 1e300;
    for (const auto& [hi, lo] : zb) {
        zbar = std::max(zbar, hi);
        zlow = std::min(zlow, lo);
    }
    const BarrierBounds B = estimate_bounds(S, pts);
    std::cout << "Zbar: " << fmt(zbar) << "\n";
    std::cout << "Zlow: " << fmt(zlow) << "\n";
    std::cout << "K: " << fmt(B.K) << "\n";
    std::cout << "L1: " << fmt(B.L1) << "\n";
    std::cout << "L2: " << fmt(B.L2) << "\n";
    return 0;
}

int rescale_command(const std::string& dir, double T_flag) {
    const fs::path base(dir);
    if (!fs::is_directory(base)) throw IoError("not a directory: " + dir);

    const RunConfig cfg = parse_config((base / "run_config.cfg").string());
    const BarrierSurface barrier = resolve_barrier(cfg);

    std::vector<fs::path> frames;
    for (const auto& e : fs::directory_iterator(base)) {
        const std::string n = e.path().filename().string();
        if (n.rfind("frame_", 0) == 0 && e.path().extension() == ".obj")
            frames.push_back(e.path());
    }
    if (frames.empty()) throw IoError("no frame_*.obj files in " + dir);
    std::sort(frames.begin(), frames.end());

    // final time from the last CSV row
    std::ifstream csv((base / "diagnostics.csv").string());
    if (!csv) throw IoError("cannot open " + (base / "diagnostics.csv").string());
    std::string line, lastline;
    std::getline(csv, line);  // header
    while (std::getline(csv, line))
        if (!line.empty()) lastline = line;
    if (lastline.empty()) throw IoError("diagnostics.csv has no data rows");
    const double t = std::stod(lastline.substr(0, lastline.find(',')));

    double T = T_flag;
    if (!(T > 0)) {
        std::ifstream sum((base / "summary.txt").string());
        std::string sline;
        while (std::getline(sum, sline)) {
            if (sline.rfind("blowup_fitted_T: ", 0) == 0) {
                const std::string v = sline.substr(17);
                if (v != "n/a") T = std::stod(v);
            }
        }
        if (!(T > 0))
            throw ValidationError("no --T given and no blowup_fitted_T in summary.txt");
    }

    const TriMesh mesh = load_obj(frames.back().string());
    const GeometryCache geom = compute_geometry(mesh, &barrier);
    const RescaleReport rr = rescale_compare(mesh, geom, barrier, t, T);
    std::cout << "frame: " << frames.back().filename().string() << "\n";
    std::cout << "t: " << fmt(t) << "\n";
    std::cout << "T: " << fmt(T) << "\n";
    std::cout << "hausdorff_to_unit_hemisphere: " << fmt(rr.hausdorff) << "\n";
    std::cout << "umbilic_ratio_max: " << fmt(rr.umbilic_ratio_max) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"free-boundary mean curvature flow simulator and verifier"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run = app.add_subcommand("run", "run a configured flow experiment");
    run->add_option("config", config_path, "INI configuration file")->required();

    BarrierArgs vargs;
    int points = 100;
    std::uint64_t seed = 42;
    auto* verify = app.add_subcommand("verify", "barrier + perturbation identity checks");
    verify->add_option("barrier", vargs.name, "plane|sphere|cylinder|ellipsoid|slab")->required();
    verify->add_option("--points", points, "random surface points");
    verify->add_option("--seed", seed, "RNG seed");
    verify->add_option("--radius", vargs.radius, "sphere/cylinder radius");
    verify->add_option("--gap", vargs.gap, "slab gap");
    verify->add_option("--axes", vargs.axes, "ellipsoid semi-axes")->delimiter(',');
    verify->add_option("--orientation", vargs.orientation, "+1 or -1");

    BarrierArgs bargs;
    int samples = 10000;
    std::uint64_t bseed = 42;
    auto* ballcurv = app.add_subcommand("ballcurv", "sampled ball curvatures and bounds");
    ballcurv->add_option("barrier", bargs.name, "plane|sphere|cylinder|ellipsoid|slab")
        ->required();
    ballcurv->add_option("--samples", samples, "sample count");
    ballcurv->add_option("--seed", bseed, "RNG seed");
    ballcurv->add_option("--radius", bargs.radius, "sphere/cylinder radius");
    ballcurv->add_option("--gap", bargs.gap, "slab gap");
    ballcurv->add_option("--axes", bargs.axes, "ellipsoid semi-axes")->delimiter(',');
    ballcurv->add_option("--orientation", bargs.orientation, "+1 or -1");

    std::string frames_dir;
    double T_flag = -1.0;
    auto* rescale = app.add_subcommand("rescale", "post-hoc rescale comparison");
    rescale->add_option("frames-dir", frames_dir, "output directory of a run")->required();
    rescale->add_option("--T", T_flag, "singular time estimate");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) return run_command(config_path);
        if (verify->parsed()) return verify_command(vargs, points, seed);
        if (ballcurv->parsed()) return ballcurv_command(bargs, samples, bseed);
        if (rescale->parsed()) return rescale_command(frames_dir, T_flag);
    } catch (const ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
