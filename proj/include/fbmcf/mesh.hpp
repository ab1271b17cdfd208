#pragma once

#include <array>
#include <string>
#include <vector>

#include "fbmcf/types.hpp"

namespace fbmcf {

// Triangle mesh with half-edge adjacency. Faces are consistently oriented;
// boundary edges form closed loops. Positions may be mutated during a flow,
// topology is immutable after build.
struct TriMesh {
    std::vector<Vec3> positions;
    std::vector<std::array<int, 3>> faces;

    struct HalfEdge {
        int origin = -1;  // source vertex
        int face = -1;
        int next = -1;
        int twin = -1;  // -1 on boundary
    };
    std::vector<HalfEdge> halfedges;       // 3 per face, he = 3*f + corner
    std::vector<int> vertex_halfedge;      // an outgoing half-edge per vertex
    std::vector<bool> boundary_vertex;
    std::vector<std::vector<int>> boundary_loops;  // vertex indices, loop order

    int n_vertices() const { return static_cast<int>(positions.size()); }
    int n_faces() const { return static_cast<int>(faces.size()); }

    int he_dest(int h) const { return halfedges[halfedges[h].next].origin; }

    // 1-ring vertex neighbors in deterministic order.
    std::vector<int> one_ring(int v) const;
    // distinct vertices within k edges (excluding v), deterministic order
    std::vector<int> k_ring(int v, int k) const;
    // faces incident to v
    std::vector<int> vertex_faces(int v) const;

    Vec3 face_normal(int f) const;
    double face_area(int f) const;
};

// Builds adjacency and validates manifoldness, orientation and face areas.
// Throws NonManifold, InconsistentOrientation, InvalidParams.
TriMesh build_mesh(std::vector<Vec3> positions, std::vector<std::array<int, 3>> faces,
                   double area_floor = 1e-14);

struct MeshQuality {
    double min_angle_deg = 0.0;
    double max_edge_ratio = 0.0;  // per-face longest/shortest edge
    double min_area = 0.0;
    double min_edge = 0.0;
    double max_edge = 0.0;
};
MeshQuality mesh_quality(const TriMesh& m);

// --- initial surfaces -------------------------------------------------------
//
// All cap constructors triangulate a hexagonal disk (rings concentric rings,
// 6k vertices on ring k) and map it onto the target surface, so boundary
// vertices land on the barrier exactly.

enum class CapKind { HemispherePlane, HemispherePerturbed, CapSphere, CapCylinder };

struct CapParams {
    int rings = 16;           // hex-disk ring count; vertex count = 1 + 3 r (r+1)
    double radius = 1.0;      // hemisphere/cap radius
    double amplitude = 0.0;   // radial perturbation amplitude (HemispherePerturbed)
    double barrier_radius = 1.0;  // sphere/cylinder barrier radius for cap kinds
};

TriMesh make_cap(CapKind kind, const CapParams& p);

// closed icosphere (test fixture for interior curvature checks)
TriMesh make_icosphere(double radius, int subdivisions);

// flat hexagonal disk in the plane z = 0
TriMesh make_flat_disk(double radius, int rings);

// --- OBJ --------------------------------------------------------------------

TriMesh load_obj(const std::string& path);
void save_obj(const TriMesh& m, const std::string& path);

}  // namespace fbmcf
