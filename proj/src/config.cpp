#include "fbmcf/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "fbmcf/oracles.hpp"

namespace fbmcf {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& val, int line) {
    try {
        std::size_t used = 0;
        const double x = std::stod(val, &used);
        if (used != val.size()) throw std::invalid_argument("trailing");
        return x;
    } catch (...) {
        throw ParseError("line " + std::to_string(line) + ": key '" + key +
                         "' expects a number, got '" + val + "'");
    }
}

long parse_int(const std::string& key, const std::string& val, int line) {
    try {
        std::size_t used = 0;
        const long x = std::stol(val, &used);
        if (used != val.size()) throw std::invalid_argument("trailing");
        return x;
    } catch (...) {
        throw ParseError("line " + std::to_string(line) + ": key '" + key +
                         "' expects an integer, got '" + val + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& val, int line) {
    if (val == "true" || val == "1" || val == "on") return true;
    if (val == "false" || val == "0" || val == "off") return false;
    throw ParseError("line " + std::to_string(line) + ": key '" + key +
                     "' expects true/false, got '" + val + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& val, int line) {
    std::vector<double> out;
    std::stringstream ss(val);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        out.push_back(parse_double(key, tok, line));
    }
    return out;
}

BarrierSurface build_barrier(const std::string& kind, const std::vector<double>& params, int sign,
                             int line) {
    auto need = [&](std::size_t n, const char* what) {
        if (params.size() != n)
            throw ParseError("line " + std::to_string(line) + ": barrier '" + kind + "' expects " +
                             what);
    };
    if (kind == "plane") {
        if (params.empty()) return BarrierSurface::plane(Vec3(0, 0, 1), 0.0, sign);
        need(4, "params = nx,ny,nz,offset");
        return BarrierSurface::plane(Vec3(params[0], params[1], params[2]), params[3], sign);
    }
    if (kind == "sphere") {
        if (params.empty()) return BarrierSurface::sphere(1.0, sign);
        need(1, "params = radius");
        return BarrierSurface::sphere(params[0], sign);
    }
    if (kind == "cylinder") {
        if (params.empty()) return BarrierSurface::cylinder(2.0, sign);
        need(1, "params = radius");
        return BarrierSurface::cylinder(params[0], sign);
    }
    if (kind == "ellipsoid") {
        if (params.empty()) return BarrierSurface::ellipsoid(2.0, 1.5, 1.0, sign);
        need(3, "params = a,b,c");
        return BarrierSurface::ellipsoid(params[0], params[1], params[2], sign);
    }
    if (kind == "slab") {
        if (params.empty()) return BarrierSurface::slab(0.5, sign);
        need(1, "params = gap");
        return BarrierSurface::slab(params[0], sign);
    }
    if (kind == "quadric") {
        need(10, "params = qxx,qxy,qxz,qyy,qyz,qzz,bx,by,bz,c");
        Mat3 Q;
        Q << params[0], params[1], params[2], params[1], params[3], params[4], params[2],
            params[4], params[5];
        return BarrierSurface::quadric(Q, Vec3(params[6], params[7], params[8]), params[9], sign);
    }
    throw ParseError("line " + std::to_string(line) + ": unknown barrier kind '" + kind + "'");
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::string section;

    std::string barrier_kind;
    std::vector<double> barrier_params;
    int barrier_sign = +1;
    int barrier_line = 0;
    bool barrier_given = false;

    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw ParseError(origin + ": line " + std::to_string(lineno) +
                                 ": malformed section header");
            section = s.substr(1, s.size() - 2);
            if (section != "barrier" && section != "initial" && section != "flow" &&
                section != "diagnostics" && section != "output")
                throw ParseError(origin + ": line " + std::to_string(lineno) +
                                 ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ParseError(origin + ": line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        if (section.empty())
            throw ParseError(origin + ": line " + std::to_string(lineno) +
                             ": key outside any section");

        auto unknown = [&]() -> void {
            throw ParseError(origin + ": line " + std::to_string(lineno) + ": unknown key '" +
                             key + "' in [" + section + "]");
        };

        if (section == "barrier") {
            barrier_given = true;
            barrier_line = lineno;
            if (key == "kind") barrier_kind = val;
            else if (key == "params") barrier_params = parse_list(key, val, lineno);
            else if (key == "orientation_sign") {
                const long v = parse_int(key, val, lineno);
                if (v != 1 && v != -1)
                    throw ValidationError("orientation_sign must be +1 or -1");
                barrier_sign = static_cast<int>(v);
            } else unknown();
        } else if (section == "initial") {
            if (key == "case") cfg.case_name = val;
            else if (key == "obj") cfg.obj_path = val;
            else if (key == "rings") {
                cfg.rings = static_cast<int>(parse_int(key, val, lineno));
                if (cfg.rings < 2) throw ValidationError("rings must be >= 2");
            } else if (key == "amplitude") {
                cfg.amplitude = parse_double(key, val, lineno);
                if (cfg.amplitude < 0) throw ValidationError("amplitude must be >= 0");
            } else if (key == "seed") {
                cfg.flow.seed = static_cast<std::uint64_t>(parse_int(key, val, lineno));
            } else unknown();
        } else if (section == "flow") {
            auto& f = cfg.flow;
            if (key == "c1") f.c1 = parse_double(key, val, lineno);
            else if (key == "c2") f.c2 = parse_double(key, val, lineno);
            else if (key == "dt_floor") f.dt_floor = parse_double(key, val, lineno);
            else if (key == "max_steps") f.max_steps = static_cast<int>(parse_int(key, val, lineno));
            else if (key == "t_end") f.t_end = parse_double(key, val, lineno);
            else if (key == "stop_maxA") f.stop_maxA = parse_double(key, val, lineno);
            else if (key == "stop_min_area") f.stop_min_area = parse_double(key, val, lineno);
            else if (key == "projection_tol") f.projection_tol = parse_double(key, val, lineno);
            else if (key == "record_every")
                f.record_every = static_cast<int>(parse_int(key, val, lineno));
            else if (key == "tangential_smoothing")
                f.tangential_smoothing = parse_bool(key, val, lineno);
            else unknown();
        } else if (section == "diagnostics") {
            auto& f = cfg.flow;
            if (key == "sigma") f.sigma = parse_double(key, val, lineno);
            else if (key == "eta") f.eta = parse_double(key, val, lineno);
            else if (key == "epsilon_pinch") f.epsilon_pinch = parse_double(key, val, lineno);
            else if (key == "D") f.D = parse_double(key, val, lineno);
            else if (key == "a") f.g_a = parse_double(key, val, lineno);
            else if (key == "b") f.g_b = parse_double(key, val, lineno);
            else if (key == "c") f.g_c = parse_double(key, val, lineno);
            else if (key == "C_grad") f.C_grad = parse_double(key, val, lineno);
            else unknown();
        } else if (section == "output") {
            if (key == "directory") cfg.output.directory = val;
            else if (key == "frame_format") {
                if (val != "obj") throw ValidationError("frame_format must be 'obj'");
                cfg.output.frame_format = val;
            } else if (key == "frame_every") {
                cfg.output.frame_every = static_cast<int>(parse_int(key, val, lineno));
                if (cfg.output.frame_every < 0) throw ValidationError("frame_every must be >= 0");
            } else unknown();
        }
    }

    if (barrier_given) {
        if (barrier_kind.empty())
            throw ParseError(origin + ": [barrier] section needs a 'kind' key");
        cfg.barrier = build_barrier(barrier_kind, barrier_params, barrier_sign, barrier_line);
    }
    validate_flow_config(cfg.flow);
    if (cfg.obj_path.empty()) {
        // ensure the case name resolves
        find_case(canonical_cases(), cfg.case_name);
    }
    return cfg;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

BarrierSurface resolve_barrier(const RunConfig& cfg) {
    if (cfg.barrier) return *cfg.barrier;
    if (!cfg.obj_path.empty())
        throw ValidationError("an OBJ initial surface needs an explicit [barrier] section");
    return find_case(canonical_cases(), cfg.case_name).barrier;
}

TriMesh resolve_initial_mesh(const RunConfig& cfg) {
    if (!cfg.obj_path.empty()) return load_obj(cfg.obj_path);
    const CanonicalCase& c = find_case(canonical_cases(), cfg.case_name);
    return c.make_mesh(cfg.rings, cfg.amplitude);
}

std::string config_echo(const RunConfig& cfg) {
    std::ostringstream out;
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    const BarrierSurface B = resolve_barrier(cfg);
    out << "[barrier]\n";
    out << "kind = " << barrier_kind_name(B.kind()) << "\n";
    out << "params = ";
    for (std::size_t i = 0; i < B.params().size(); ++i)
        out << (i ? "," : "") << num(B.params()[i]);
    out << "\n";
    out << "orientation_sign = " << B.orientation_sign() << "\n\n";
    out << "[initial]\n";
    if (!cfg.obj_path.empty()) out << "obj = " << cfg.obj_path << "\n";
    else out << "case = " << cfg.case_name << "\n";
    out << "rings = " << cfg.rings << "\n";
    out << "amplitude = " << num(cfg.amplitude) << "\n";
    out << "seed = " << cfg.flow.seed << "\n\n";
    const auto& f = cfg.flow;
    out << "[flow]\n";
    out << "c1 = " << num(f.c1) << "\n";
    out << "c2 = " << num(f.c2) << "\n";
    out << "dt_floor = " << num(f.dt_floor) << "\n";
    out << "max_steps = " << f.max_steps << "\n";
    if (std::isfinite(f.t_end)) out << "t_end = " << num(f.t_end) << "\n";
    out << "stop_maxA = " << num(f.stop_maxA) << "\n";
    if (f.stop_min_area > 0) out << "stop_min_area = " << num(f.stop_min_area) << "\n";
    out << "projection_tol = " << num(f.projection_tol) << "\n";
    out << "record_every = " << f.record_every << "\n";
    out << "tangential_smoothing = " << (f.tangential_smoothing ? "true" : "false") << "\n\n";
    out << "[diagnostics]\n";
    out << "sigma = " << num(f.sigma) << "\n";
    out << "eta = " << num(f.eta) << "\n";
    out << "epsilon_pinch = " << num(f.epsilon_pinch) << "\n";
    out << "D = " << num(f.D) << "\n";
    out << "a = " << num(f.g_a) << "\n";
    out << "b = " << num(f.g_b) << "\n";
    out << "c = " << num(f.g_c) << "\n";
    if (f.C_grad > 0) out << "C_grad = " << num(f.C_grad) << "\n";
    out << "\n[output]\n";
    out << "directory = " << cfg.output.directory << "\n";
    out << "frame_format = " << cfg.output.frame_format << "\n";
    out << "frame_every = " << cfg.output.frame_every << "\n";
    return out.str();
}

}  // namespace fbmcf
