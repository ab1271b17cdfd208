#include "fbmcf/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace fbmcf {

std::vector<int> TriMesh::one_ring(int v) const {
    std::vector<int> ring;
    const int h0 = vertex_halfedge[v];
    if (h0 < 0) return ring;
    int h = h0;
    while (true) {
        ring.push_back(he_dest(h));
        const int p = halfedges[halfedges[h].next].next;  // (? -> v)
        const int hn = halfedges[p].twin;
        if (hn < 0) {
            ring.push_back(halfedges[p].origin);
            break;
        }
        h = hn;
        if (h == h0) break;
    }
    return ring;
}

std::vector<int> TriMesh::k_ring(int v, int k) const {
    std::vector<int> out;
    std::vector<int> depth(positions.size(), -1);
    depth[v] = 0;
    std::vector<int> frontier = {v};
    for (int d = 1; d <= k; ++d) {
        std::vector<int> next;
        for (int u : frontier) {
            for (int w : one_ring(u)) {
                if (depth[w] < 0) {
                    depth[w] = d;
                    next.push_back(w);
                    out.push_back(w);
                }
            }
        }
        frontier = std::move(next);
    }
    return out;
}

std::vector<int> TriMesh::vertex_faces(int v) const {
    std::vector<int> out;
    const int h0 = vertex_halfedge[v];
    if (h0 < 0) return out;
    int h = h0;
    while (true) {
        out.push_back(halfedges[h].face);
        const int p = halfedges[halfedges[h].next].next;
        const int hn = halfedges[p].twin;
        if (hn < 0) break;
        h = hn;
        if (h == h0) break;
    }
    return out;
}

Vec3 TriMesh::face_normal(int f) const {
    const auto& F = faces[f];
    const Vec3 n = (positions[F[1]] - positions[F[0]]).cross(positions[F[2]] - positions[F[0]]);
    const double len = n.norm();
    return len > 0 ? Vec3(n / len) : Vec3::Zero();
}

double TriMesh::face_area(int f) const {
    const auto& F = faces[f];
    return 0.5 *
           (positions[F[1]] - positions[F[0]]).cross(positions[F[2]] - positions[F[0]]).norm();
}

TriMesh build_mesh(std::vector<Vec3> positions, std::vector<std::array<int, 3>> faces,
                   double area_floor) {
    TriMesh m;
    m.positions = std::move(positions);
    m.faces = std::move(faces);
    const int nv = m.n_vertices();
    const int nf = m.n_faces();
    if (nv < 3 || nf < 1) throw InvalidParams("mesh needs at least one triangle");

    for (int f = 0; f < nf; ++f) {
        const auto& F = m.faces[f];
        for (int c = 0; c < 3; ++c) {
            if (F[c] < 0 || F[c] >= nv) throw InvalidParams("face references invalid vertex");
        }
        if (F[0] == F[1] || F[1] == F[2] || F[0] == F[2])
            throw InvalidParams("degenerate face (repeated vertex)");
        if (m.face_area(f) <= area_floor) throw InvalidParams("degenerate face (zero area)");
    }

    m.halfedges.assign(3 * nf, {});
    for (int f = 0; f < nf; ++f) {
        for (int c = 0; c < 3; ++c) {
            const int h = 3 * f + c;
            m.halfedges[h].origin = m.faces[f][c];
            m.halfedges[h].face = f;
            m.halfedges[h].next = 3 * f + (c + 1) % 3;
        }
    }

    // twin matching over undirected edges
    std::map<std::pair<int, int>, std::vector<int>> edges;
    for (int h = 0; h < 3 * nf; ++h) {
        const int a = m.halfedges[h].origin;
        const int b = m.he_dest(h);
        edges[{std::min(a, b), std::max(a, b)}].push_back(h);
    }
    for (auto& [key, hs] : edges) {
        if (hs.size() > 2) throw NonManifold("edge shared by more than two faces");
        if (hs.size() == 2) {
            const int h0 = hs[0], h1 = hs[1];
            if (m.halfedges[h0].origin == m.halfedges[h1].origin)
                throw InconsistentOrientation("interior edge traversed twice in one direction");
            m.halfedges[h0].twin = h1;
            m.halfedges[h1].twin = h0;
        }
    }

    // outgoing half-edge per vertex; prefer boundary ones so ring traversal
    // sweeps the full fan
    m.vertex_halfedge.assign(nv, -1);
    for (int h = 0; h < 3 * nf; ++h) {
        const int v = m.halfedges[h].origin;
        if (m.vertex_halfedge[v] < 0 || m.halfedges[h].twin < 0) {
            if (m.vertex_halfedge[v] < 0 || m.halfedges[m.vertex_halfedge[v]].twin >= 0)
                m.vertex_halfedge[v] = h;
        }
    }

    // boundary loops
    m.boundary_vertex.assign(nv, false);
    std::map<int, int> boundary_next;  // origin -> boundary halfedge
    for (int h = 0; h < 3 * nf; ++h) {
        if (m.halfedges[h].twin >= 0) continue;
        const int a = m.halfedges[h].origin;
        if (boundary_next.count(a)) throw NonManifold("pinched boundary vertex");
        boundary_next[a] = h;
        m.boundary_vertex[a] = true;
        m.boundary_vertex[m.he_dest(h)] = true;
    }
    std::vector<bool> used(3 * nf, false);
    for (auto& [v0, h0] : boundary_next) {
        if (used[h0]) continue;
        std::vector<int> loop;
        int h = h0;
        while (!used[h]) {
            used[h] = true;
            loop.push_back(m.halfedges[h].origin);
            auto it = boundary_next.find(m.he_dest(h));
            if (it == boundary_next.end()) throw NonManifold("open boundary chain");
            h = it->second;
        }
        m.boundary_loops.push_back(std::move(loop));
    }
    return m;
}

MeshQuality mesh_quality(const TriMesh& m) {
    MeshQuality q;
    q.min_angle_deg = 180.0;
    q.max_edge_ratio = 1.0;
    q.min_area = 1e300;
    q.min_edge = 1e300;
    q.max_edge = 0.0;
    for (int f = 0; f < m.n_faces(); ++f) {
        const auto& F = m.faces[f];
        const Vec3& a = m.positions[F[0]];
        const Vec3& b = m.positions[F[1]];
        const Vec3& c = m.positions[F[2]];
        const double e0 = (b - c).norm(), e1 = (c - a).norm(), e2 = (a - b).norm();
        const double lo = std::min({e0, e1, e2}), hi = std::max({e0, e1, e2});
        q.min_edge = std::min(q.min_edge, lo);
        q.max_edge = std::max(q.max_edge, hi);
        q.max_edge_ratio = std::max(q.max_edge_ratio, hi / std::max(lo, 1e-300));
        q.min_area = std::min(q.min_area, m.face_area(f));
        auto angle = [](const Vec3& u, const Vec3& v) {
            return std::atan2(u.cross(v).norm(), u.dot(v)) * 180.0 / M_PI;
        };
        q.min_angle_deg = std::min({q.min_angle_deg, angle(b - a, c - a), angle(c - b, a - b),
                                    angle(a - c, b - c)});
    }
    return q;
}

// ---------------------------------------------------------------------------
// hexagonal disk triangulation

namespace {

struct HexDisk {
    std::vector<Vec2> uv;  // unit-disk coordinates, rings of radius k/m
    std::vector<std::array<int, 3>> faces;
    int rings = 0;

    static int ring_base(int k) { return k == 0 ? 0 : 1 + 3 * k * (k - 1); }
    static int idx(int k, int j) {
        if (k == 0) return 0;
        const int n = 6 * k;
        return ring_base(k) + ((j % n) + n) % n;
    }
};

HexDisk make_hex_disk(int m) {
    if (m < 2) throw InvalidParams("subdivision must give at least 2 rings");
    HexDisk d;
    d.rings = m;
    d.uv.resize(1 + 3 * m * (m + 1));
    d.uv[0] = Vec2::Zero();
    for (int k = 1; k <= m; ++k) {
        for (int s = 0; s < 6; ++s) {
            const Vec2 cs(std::cos(s * M_PI / 3.0), std::sin(s * M_PI / 3.0));
            const Vec2 cn(std::cos((s + 1) * M_PI / 3.0), std::sin((s + 1) * M_PI / 3.0));
            for (int i = 0; i < k; ++i) {
                Vec2 p = double(k) * cs + double(i) * (cn - cs);
                // round the hexagonal ring into a circle of radius k/m
                d.uv[HexDisk::idx(k, s * k + i)] = p.normalized() * (double(k) / m);
            }
        }
    }
    for (int k = 1; k <= m; ++k) {
        for (int s = 0; s < 6; ++s) {
            for (int i = 0; i < k; ++i) {
                const int a0 = HexDisk::idx(k, s * k + i);
                const int a1 = HexDisk::idx(k, s * k + i + 1);
                const int b0 = HexDisk::idx(k - 1, s * (k - 1) + i);
                d.faces.push_back({a0, a1, b0});
                if (i + 1 < k) {
                    const int b1 = HexDisk::idx(k - 1, s * (k - 1) + i + 1);
                    d.faces.push_back({b0, a1, b1});
                }
            }
        }
    }
    return d;
}

void flip_faces_if_needed(std::vector<Vec3>& pos, std::vector<std::array<int, 3>>& faces,
                          const Vec3& pole_normal) {
    const auto& F = faces[0];
    const Vec3 n = (pos[F[1]] - pos[F[0]]).cross(pos[F[2]] - pos[F[0]]);
    if (n.dot(pole_normal) < 0.0) {
        for (auto& f : faces) std::swap(f[1], f[2]);
    }
}

}  // namespace

TriMesh make_cap(CapKind kind, const CapParams& p) {
    if (p.radius <= 0) throw InvalidParams("cap radius must be positive");
    HexDisk d = make_hex_disk(p.rings);
    const int n = static_cast<int>(d.uv.size());
    std::vector<Vec3> pos(n);
    Vec3 pole_normal;
    switch (kind) {
        case CapKind::HemispherePlane:
        case CapKind::HemispherePerturbed: {
            for (int i = 0; i < n; ++i) {
                const double rho = d.uv[i].norm();
                const double alpha = std::atan2(d.uv[i].y(), d.uv[i].x());
                const double theta = rho * M_PI / 2.0;
                Vec3 u(std::sin(theta) * std::cos(alpha), std::sin(theta) * std::sin(alpha),
                       std::cos(theta));
                if (rho >= 1.0 - 1e-12) u.z() = 0.0;  // boundary ring exactly on the plane
                if (kind == CapKind::HemispherePerturbed) {
                    const double y = u.x() * u.x() - u.y() * u.y();
                    u *= (1.0 + p.amplitude * y);
                }
                pos[i] = p.radius * u;
            }
            pole_normal = Vec3(0, 0, 1);
            break;
        }
        case CapKind::CapSphere: {
            const double Rb = p.barrier_radius;
            const double rc = p.radius;
            const double zc = std::sqrt(Rb * Rb + rc * rc);
            const Vec3 c(0, 0, zc);
            const double theta_max = std::acos(rc / zc);
            for (int i = 0; i < n; ++i) {
                const double rho = d.uv[i].norm();
                const double alpha = std::atan2(d.uv[i].y(), d.uv[i].x());
                const double theta = rho * theta_max;
                pos[i] = c + rc * Vec3(std::sin(theta) * std::cos(alpha),
                                       std::sin(theta) * std::sin(alpha), -std::cos(theta));
            }
            pole_normal = Vec3(0, 0, -1);
            break;
        }
        case CapKind::CapCylinder: {
            const double R = p.barrier_radius;
            const double rc = p.radius;
            if (rc >= 0.5 * R)
                throw InvalidParams("cap radius too large for the cylinder barrier");
            for (int i = 0; i < n; ++i) {
                const double rho = d.uv[i].norm();
                const Vec2 ab = rc * d.uv[i];
                double h2 = rc * rc - ab.squaredNorm();
                if (rho >= 1.0 - 1e-12) h2 = 0.0;  // boundary exactly on the cylinder
                const double h = std::sqrt(std::max(h2, 0.0));
                const double u = ab.x() / R;  // circumferential arc length / R
                pos[i] = Vec3((R - h) * std::cos(u), (R - h) * std::sin(u), ab.y());
            }
            pole_normal = Vec3(-1, 0, 0);
            break;
        }
    }
    flip_faces_if_needed(pos, d.faces, pole_normal);
    return build_mesh(std::move(pos), std::move(d.faces));
}

TriMesh make_flat_disk(double radius, int rings) {
    HexDisk d = make_hex_disk(rings);
    std::vector<Vec3> pos(d.uv.size());
    for (std::size_t i = 0; i < d.uv.size(); ++i)
        pos[i] = Vec3(radius * d.uv[i].x(), radius * d.uv[i].y(), 0.0);
    flip_faces_if_needed(pos, d.faces, Vec3(0, 0, 1));
    return build_mesh(std::move(pos), std::move(d.faces));
}

TriMesh make_icosphere(double radius, int subdivisions) {
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> pos = {{-1, t, 0},  {1, t, 0},  {-1, -t, 0}, {1, -t, 0},
                             {0, -1, t},  {0, 1, t},  {0, -1, -t}, {0, 1, -t},
                             {t, 0, -1},  {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
    for (auto& v : pos) v.normalize();
    std::vector<std::array<int, 3>> faces = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9},  {5, 11, 4},
        {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6},  {3, 6, 8},
        {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
    for (int s = 0; s < subdivisions; ++s) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            auto key = std::make_pair(std::min(a, b), std::max(a, b));
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            pos.push_back(((pos[a] + pos[b]) * 0.5).normalized());
            const int idx = static_cast<int>(pos.size()) - 1;
            midpoint[key] = idx;
            return idx;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(faces.size() * 4);
        for (auto& f : faces) {
            const int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
            next.push_back({f[0], ab, ca});
            next.push_back({f[1], bc, ab});
            next.push_back({f[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        faces = std::move(next);
    }
    for (auto& v : pos) v *= radius;
    return build_mesh(std::move(pos), std::move(faces));
}

// ---------------------------------------------------------------------------
// OBJ

TriMesh load_obj(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::vector<Vec3> pos;
    std::vector<std::array<int, 3>> faces;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ss(line);
        std::string tag;
        if (!(ss >> tag)) continue;
        if (tag == "v") {
            Vec3 p;
            if (!(ss >> p.x() >> p.y() >> p.z()))
                throw ParseError(path + ":" + std::to_string(lineno) + ": bad vertex line");
            pos.push_back(p);
        } else if (tag == "f") {
            std::array<int, 3> f{};
            for (int c = 0; c < 3; ++c) {
                std::string tok;
                if (!(ss >> tok))
                    throw ParseError(path + ":" + std::to_string(lineno) + ": bad face line");
                f[c] = std::stoi(tok.substr(0, tok.find('/'))) - 1;
            }
            std::string extra;
            if (ss >> extra)
                throw ParseError(path + ":" + std::to_string(lineno) +
                                 ": only triangles are supported");
            faces.push_back(f);
        }
    }
    return build_mesh(std::move(pos), std::move(faces));
}

void save_obj(const TriMesh& m, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw IoError("cannot write " + path);
    for (const auto& p : m.positions)
        std::fprintf(f, "v %.17g %.17g %.17g\n", p.x(), p.y(), p.z());
    for (const auto& F : m.faces) std::fprintf(f, "f %d %d %d\n", F[0] + 1, F[1] + 1, F[2] + 1);
    std::fclose(f);
}

}  // namespace fbmcf
