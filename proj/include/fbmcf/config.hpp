#pragma once

#include <optional>
#include <string>

#include "fbmcf/barrier.hpp"
#include "fbmcf/flow.hpp"

namespace fbmcf {

struct OutputOptions {
    std::string directory = "out";
    std::string frame_format = "obj";
    int frame_every = 1;  // emit a frame every this many records; 0 disables frames
};

struct RunConfig {
    std::optional<BarrierSurface> barrier;  // defaults to the case's barrier
    std::string case_name = "HEMI_PLANE";
    std::string obj_path;                   // overrides case_name when set
    int rings = 32;
    double amplitude = 0.05;
    FlowConfig flow;
    OutputOptions output;
};

// Flat INI: [barrier] / [initial] / [flow] / [diagnostics] / [output] sections
// of `key = value` pairs. Unknown keys or sections raise ParseError with the
// line number; out-of-range values raise ValidationError naming the key.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<string>");

// Deterministic round-trippable serialization of the effective configuration.
std::string config_echo(const RunConfig& cfg);

// Barrier + initial mesh resolution (case or OBJ).
BarrierSurface resolve_barrier(const RunConfig& cfg);
TriMesh resolve_initial_mesh(const RunConfig& cfg);

}  // namespace fbmcf
