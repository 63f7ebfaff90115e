#include "fanoguide/mesh.hpp"

#include "fanoguide/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

namespace fanoguide::geo {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCoordTol = 1e-9;

// Deduplicating node registry with deterministic ids (quantized coordinates).
class NodeRegistry {
public:
    int add(const Eigen::Vector2d& p) {
        const Key k = quantize(p);
        auto [it, inserted] = index_.try_emplace(k, static_cast<int>(nodes_.size()));
        if (inserted) nodes_.push_back(p);
        return it->second;
    }
    const std::vector<Eigen::Vector2d>& nodes() const { return nodes_; }

private:
    using Key = std::pair<long long, long long>;
    static Key quantize(const Eigen::Vector2d& p) {
        return {static_cast<long long>(std::llround(p.x() * 1e9)),
                static_cast<long long>(std::llround(p.y() * 1e9))};
    }
    std::map<Key, int> index_;
    std::vector<Eigen::Vector2d> nodes_;
};

// Subdivide [a, b] into roughly (b-a)/h equal cells; grid lines returned
// without the left endpoint.
void subdivide(double a, double b, double h, std::vector<double>& lines) {
    const int n = std::max(1, static_cast<int>(std::round((b - a) / h)));
    for (int i = 1; i <= n; ++i) lines.push_back(a + (b - a) * i / n);
}

std::vector<double> grid_lines(const std::vector<double>& breaks, double h) {
    std::vector<double> lines{breaks.front()};
    for (std::size_t b = 0; b + 1 < breaks.size(); ++b)
        subdivide(breaks[b], breaks[b + 1], h, lines);
    return lines;
}

struct Builder {
    NodeRegistry reg;
    std::vector<std::array<int, 3>> corner_tris;

    void add_quad(const Eigen::Vector2d& p00, const Eigen::Vector2d& p10,
                  const Eigen::Vector2d& p11, const Eigen::Vector2d& p01) {
        const int a = reg.add(p00), b = reg.add(p10), c = reg.add(p11), d = reg.add(p01);
        corner_tris.push_back({a, b, c});
        corner_tris.push_back({a, c, d});
    }
};

double signed_area2(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                    const Eigen::Vector2d& c) {
    return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

// Finish a corner-triangle soup into a validated, tagged P2 mesh.
Mesh finalize(Builder& bld, const WaveguideGeometry& g, double h,
              const std::function<BoundaryTag(const Eigen::Vector2d&,
                                              const Eigen::Vector2d&)>& tagger) {
    Mesh m;
    m.h = h;
    m.r_trunc = g.r_trunc;
    m.nodes = bld.reg.nodes();

    // Orientation pass on corner triangles.
    for (auto& t : bld.corner_tris) {
        if (signed_area2(m.nodes[t[0]], m.nodes[t[1]], m.nodes[t[2]]) < 0.0)
            std::swap(t[1], t[2]);
    }

    // Midside nodes, deduplicated per undirected edge.
    std::map<std::pair<int, int>, int> edge_mid;
    auto midside = [&](int u, int v) {
        const auto key = std::minmax(u, v);
        auto it = edge_mid.find(key);
        if (it != edge_mid.end()) return it->second;
        const int id = static_cast<int>(m.nodes.size());
        m.nodes.push_back(0.5 * (m.nodes[u] + m.nodes[v]));
        edge_mid.emplace(key, id);
        return id;
    };

    m.tris.reserve(bld.corner_tris.size());
    for (const auto& t : bld.corner_tris)
        m.tris.push_back({t[0], t[1], t[2], midside(t[0], t[1]), midside(t[1], t[2]),
                          midside(t[2], t[0])});

    // Boundary edges: corner edges used by exactly one triangle.
    std::map<std::pair<int, int>, std::pair<int, int>> edge_use; // edge -> (count, tri)
    for (std::size_t ti = 0; ti < m.tris.size(); ++ti) {
        const auto& t = m.tris[ti];
        for (int e = 0; e < 3; ++e) {
            const auto key = std::minmax(t[e], t[(e + 1) % 3]);
            auto& u = edge_use[key];
            ++u.first;
            u.second = static_cast<int>(ti);
        }
    }
    for (std::size_t ti = 0; ti < m.tris.size(); ++ti) {
        const auto& t = m.tris[ti];
        for (int e = 0; e < 3; ++e) {
            const int a = t[e], b = t[(e + 1) % 3];
            const auto key = std::minmax(a, b);
            if (edge_use[key].first != 1) continue;
            Mesh::BEdge be;
            be.n0 = a;
            be.n1 = b;
            be.mid = t[3 + e];
            be.tri = static_cast<int>(ti);
            be.tag = tagger(m.nodes[a], m.nodes[b]);
            m.bedges.push_back(be);
        }
    }
    validate_mesh(m);
    return m;
}

// Default tagger for half/full guides without inclusion.
std::function<BoundaryTag(const Eigen::Vector2d&, const Eigen::Vector2d&)>
make_tagger(const WaveguideGeometry& g) {
    const double r = g.r_trunc;
    const bool has_upsilon = g.abc != AbcKind::none;
    return [r, has_upsilon](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
        if (std::abs(a.x() - r) < kCoordTol && std::abs(b.x() - r) < kCoordTol)
            return BoundaryTag::trunc;
        if (std::abs(a.x() + r) < kCoordTol && std::abs(b.x() + r) < kCoordTol)
            return BoundaryTag::trunc;
        if (has_upsilon && std::abs(a.x()) < kCoordTol && std::abs(b.x()) < kCoordTol)
            return BoundaryTag::upsilon;
        return BoundaryTag::wall;
    };
}

void require_channel(double span, double h, const char* what) {
    if (span / h < 8.0 - 1e-9)
        throw MeshError(std::string("mesh: h too coarse to resolve the ") + what +
                        " (need at least 8 edges across)");
}

Mesh mesh_rectilinear(const WaveguideGeometry& g, double h) {
    const bool lshape = g.variant == WaveguideGeometry::Variant::lshape;
    require_channel(1.0, h, "strip");
    if (lshape) require_channel(g.branch_width, h, "branch");

    std::vector<double> xb{0.0}, yb{0.0};
    if (lshape) xb.push_back(g.branch_width);
    xb.push_back(g.r_trunc);
    yb.push_back(1.0);
    if (lshape) yb.push_back(g.branch_height);

    const auto xs = grid_lines(xb, h);
    const auto ys = grid_lines(yb, h);

    Builder bld;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
            const double cx = 0.5 * (xs[i] + xs[i + 1]);
            const double cy = 0.5 * (ys[j] + ys[j + 1]);
            const bool in_strip = cy < 1.0;
            const bool in_branch = lshape && cx < g.branch_width && cy < g.branch_height;
            if (!(in_strip || in_branch)) continue;
            bld.add_quad({xs[i], ys[j]}, {xs[i + 1], ys[j]}, {xs[i + 1], ys[j + 1]},
                         {xs[i], ys[j + 1]});
        }
    }
    return finalize(bld, g, h, make_tagger(g));
}

Mesh mesh_straight_with_profile(const WaveguideGeometry& g, double h) {
    require_channel(1.0, h, "strip");
    const auto xs = grid_lines({0.0, g.r_trunc}, h);
    const auto ys = grid_lines({0.0, 1.0}, h);

    // Smooth cubic cutoff over a band of width 0.2 below the displaced wall.
    constexpr double band = 0.2;
    auto blend = [](double t) {
        if (t >= band) return 0.0;
        const double u = t / band;
        return 1.0 - 3.0 * u * u + 2.0 * u * u * u;
    };
    auto displace = [&](const Eigen::Vector2d& p) {
        const double dy = g.profile_eps * g.profile.eval(p.x()) * blend(1.0 - p.y());
        return Eigen::Vector2d(p.x(), p.y() + dy);
    };

    Builder bld;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        for (std::size_t j = 0; j + 1 < ys.size(); ++j)
            bld.add_quad(displace({xs[i], ys[j]}), displace({xs[i + 1], ys[j]}),
                         displace({xs[i + 1], ys[j + 1]}), displace({xs[i], ys[j + 1]}));
    return finalize(bld, g, h, make_tagger(g));
}

Mesh mesh_disk(const WaveguideGeometry& g, double h) {
    const double cx = g.center.x(), cy = g.center.y(), rho = g.radius;
    const double wall_gap = 0.5 - std::abs(cy - 0.5) - rho;
    require_channel(1.0, h, "strip");
    require_channel(wall_gap, h, "passage around the inclusion");

    // O-grid frame: square around the circle, aligned with grid breakpoints.
    const double s = rho + 0.6 * wall_gap;
    const std::vector<double> xb{0.0, cx - s, cx + s, g.r_trunc};
    const std::vector<double> yb{0.0, cy - s, cy + s, 1.0};
    const auto xs = grid_lines(xb, h);
    const auto ys = grid_lines(yb, h);

    Builder bld;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
            const double mx = 0.5 * (xs[i] + xs[i + 1]);
            const double my = 0.5 * (ys[j] + ys[j + 1]);
            if (my >= 1.0) continue;
            if (mx > cx - s && mx < cx + s && my > cy - s && my < cy + s)
                continue; // covered by the annulus
            bld.add_quad({xs[i], ys[j]}, {xs[i + 1], ys[j]}, {xs[i + 1], ys[j + 1]},
                         {xs[i], ys[j + 1]});
        }
    }

    // Frame ring: structured nodes on the frame rectangle, counter-clockwise.
    auto lines_between = [](const std::vector<double>& v, double a, double b) {
        std::vector<double> out;
        for (double x : v)
            if (x > a - kCoordTol && x < b + kCoordTol) out.push_back(x);
        return out;
    };
    const auto fx = lines_between(xs, cx - s, cx + s);
    const auto fy = lines_between(ys, cy - s, cy + s);
    std::vector<Eigen::Vector2d> ring;
    for (std::size_t i = 0; i + 1 < fx.size(); ++i) ring.emplace_back(fx[i], fy.front());
    for (std::size_t j = 0; j + 1 < fy.size(); ++j) ring.emplace_back(fx.back(), fy[j]);
    for (std::size_t i = fx.size() - 1; i > 0; --i) ring.emplace_back(fx[i], fy.back());
    for (std::size_t j = fy.size() - 1; j > 0; --j) ring.emplace_back(fx.front(), fy[j]);

    // Radial blending from the polygonal circle to the frame ring.
    const int nr = std::max(2, static_cast<int>(std::round((s - rho) / h)));
    const int nring = static_cast<int>(ring.size());
    std::vector<std::vector<Eigen::Vector2d>> layer(nr + 1,
                                                    std::vector<Eigen::Vector2d>(nring));
    for (int i = 0; i < nring; ++i) {
        const double theta = std::atan2(ring[i].y() - cy, ring[i].x() - cx);
        const Eigen::Vector2d on_circle(cx + rho * std::cos(theta),
                                        cy + rho * std::sin(theta));
        for (int l = 0; l <= nr; ++l)
            layer[l][i] = on_circle + (ring[i] - on_circle) * (double(l) / nr);
    }
    for (int l = 0; l < nr; ++l) {
        for (int i = 0; i < nring; ++i) {
            const int in = (i + 1) % nring;
            bld.add_quad(layer[l][i], layer[l][in], layer[l + 1][in], layer[l + 1][i]);
        }
    }

    auto base_tagger = make_tagger(g);
    auto tagger = [&, base_tagger](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
        const double tol = 1e-7;
        if (std::abs((a - g.center).norm() - rho) < tol &&
            std::abs((b - g.center).norm() - rho) < tol)
            return BoundaryTag::inclusion;
        return base_tagger(a, b);
    };
    return finalize(bld, g, h, tagger);
}

} // namespace

double Mesh::tri_area(int t) const {
    const auto& tr = tris[t];
    return 0.5 * signed_area2(nodes[tr[0]], nodes[tr[1]], nodes[tr[2]]);
}

bool Mesh::has_tag(BoundaryTag t) const {
    return std::any_of(bedges.begin(), bedges.end(),
                       [t](const BEdge& e) { return e.tag == t; });
}

Mesh generate_mesh(const WaveguideGeometry& g, double h) {
    if (!(h > 0.0)) throw ConfigError("mesh: h must be positive");
    switch (g.variant) {
    case WaveguideGeometry::Variant::straight:
        if (g.profile_eps != 0.0 && g.profile.kind != ProfileH::Kind::zero)
            return mesh_straight_with_profile(g, h);
        return mesh_rectilinear(g, h);
    case WaveguideGeometry::Variant::lshape: return mesh_rectilinear(g, h);
    case WaveguideGeometry::Variant::disk: return mesh_disk(g, h);
    }
    throw ConfigError("mesh: unknown geometry variant");
}

void validate_mesh(const Mesh& m) {
    if (m.tris.empty()) throw MeshError("mesh: empty triangulation");
    const int n = m.node_count();

    std::map<std::pair<int, int>, int> edge_count;
    for (std::size_t ti = 0; ti < m.tris.size(); ++ti) {
        const auto& t = m.tris[ti];
        for (int k = 0; k < 6; ++k)
            if (t[k] < 0 || t[k] >= n) throw MeshError("mesh: node index out of range");
        if (signed_area2(m.nodes[t[0]], m.nodes[t[1]], m.nodes[t[2]]) <= 0.0)
            throw MeshError("mesh: negatively oriented triangle " + std::to_string(ti));
        for (int e = 0; e < 3; ++e) {
            const int a = t[e], b = t[(e + 1) % 3];
            const Eigen::Vector2d mid = 0.5 * (m.nodes[a] + m.nodes[b]);
            if ((m.nodes[t[3 + e]] - mid).norm() > 1e-9)
                throw MeshError("mesh: midside node off the edge midpoint");
            ++edge_count[std::minmax(a, b)];
        }
    }
    std::size_t boundary_edges = 0;
    for (const auto& [e, c] : edge_count) {
        if (c > 2) throw MeshError("mesh: non-conforming edge (shared by >2 triangles)");
        if (c == 1) ++boundary_edges;
    }
    if (boundary_edges != m.bedges.size())
        throw MeshError("mesh: boundary tags do not partition the boundary");
    for (const auto& be : m.bedges) {
        if (edge_count[std::minmax(be.n0, be.n1)] != 1)
            throw MeshError("mesh: tagged edge is not a boundary edge");
        if (be.tag == BoundaryTag::trunc) {
            const double ax = std::abs(m.nodes[be.n0].x());
            const double bx = std::abs(m.nodes[be.n1].x());
            if (std::abs(ax - m.r_trunc) > kCoordTol || std::abs(bx - m.r_trunc) > kCoordTol)
                throw MeshError("mesh: truncation edge off |x| = r_trunc");
        }
    }
    if (!m.has_tag(BoundaryTag::trunc))
        throw MeshError("mesh: missing truncation-face tag");
}

std::string to_string(BoundaryTag t) {
    switch (t) {
    case BoundaryTag::wall: return "wall";
    case BoundaryTag::upsilon: return "upsilon";
    case BoundaryTag::trunc: return "trunc";
    case BoundaryTag::inclusion: return "inclusion";
    }
    return "?";
}

BoundaryTag tag_from_string(const std::string& s) {
    if (s == "wall") return BoundaryTag::wall;
    if (s == "upsilon") return BoundaryTag::upsilon;
    if (s == "trunc") return BoundaryTag::trunc;
    if (s == "inclusion") return BoundaryTag::inclusion;
    throw MeshError("mesh: unknown boundary tag '" + s + "'");
}

void export_mesh(const Mesh& m, std::ostream& out) {
    out << "fanoguide-mesh v1\n";
    out << "h " << m.h << "\n";
    out << "r_trunc " << m.r_trunc << "\n";
    out << "vertices " << m.nodes.size() << "\n";
    out.precision(17);
    for (std::size_t i = 0; i < m.nodes.size(); ++i)
        out << i << " " << m.nodes[i].x() << " " << m.nodes[i].y() << "\n";
    out << "triangles " << m.tris.size() << "\n";
    for (std::size_t t = 0; t < m.tris.size(); ++t) {
        out << t;
        for (int k = 0; k < 6; ++k) out << " " << m.tris[t][k];
        out << "\n";
    }
    out << "boundary " << m.bedges.size() << "\n";
    for (const auto& be : m.bedges)
        out << be.n0 << " " << be.n1 << " " << be.mid << " " << to_string(be.tag) << "\n";
}

Mesh import_mesh(std::istream& in) {
    std::string header;
    std::getline(in, header);
    if (header != "fanoguide-mesh v1")
        throw MeshError("mesh: bad header, expected 'fanoguide-mesh v1'");
    Mesh m;
    std::string key;
    std::size_t count = 0;
    if (!(in >> key >> m.h) || key != "h") throw MeshError("mesh: missing h record");
    if (!(in >> key >> m.r_trunc) || key != "r_trunc")
        throw MeshError("mesh: missing r_trunc record");
    if (!(in >> key >> count) || key != "vertices")
        throw MeshError("mesh: missing vertices section");
    m.nodes.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t id;
        double x, y;
        if (!(in >> id >> x >> y) || id != i)
            throw MeshError("mesh: malformed vertex record");
        m.nodes[i] = {x, y};
    }
    if (!(in >> key >> count) || key != "triangles")
        throw MeshError("mesh: missing triangles section");
    m.tris.resize(count);
    for (std::size_t t = 0; t < count; ++t) {
        std::size_t id;
        if (!(in >> id) || id != t) throw MeshError("mesh: malformed triangle record");
        for (int k = 0; k < 6; ++k)
            if (!(in >> m.tris[t][k])) throw MeshError("mesh: malformed triangle record");
    }
    if (!(in >> key >> count) || key != "boundary")
        throw MeshError("mesh: missing boundary section");
    m.bedges.resize(count);
    for (std::size_t b = 0; b < count; ++b) {
        std::string tag;
        auto& be = m.bedges[b];
        if (!(in >> be.n0 >> be.n1 >> be.mid >> tag))
            throw MeshError("mesh: malformed boundary record");
        be.tag = tag_from_string(tag);
    }
    // Rebuild triangle adjacency of boundary edges.
    std::map<std::pair<int, int>, int> edge_tri;
    for (std::size_t t = 0; t < m.tris.size(); ++t)
        for (int e = 0; e < 3; ++e)
            edge_tri[std::minmax(m.tris[t][e], m.tris[t][(e + 1) % 3])] =
                static_cast<int>(t);
    for (auto& be : m.bedges) {
        auto it = edge_tri.find(std::minmax(be.n0, be.n1));
        if (it == edge_tri.end())
            throw MeshError("mesh: boundary edge references unknown triangle edge");
        be.tri = it->second;
    }
    validate_mesh(m);
    return m;
}

void export_mesh_file(const Mesh& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw MeshError("mesh: cannot open '" + path + "' for writing");
    export_mesh(m, out);
}

Mesh import_mesh_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MeshError("mesh: cannot open '" + path + "'");
    return import_mesh(in);
}

Mesh mirror_union(const Mesh& half) {
    Mesh m;
    m.h = half.h;
    m.r_trunc = half.r_trunc;
    m.nodes = half.nodes;

    std::vector<int> mirrored(half.nodes.size());
    for (std::size_t i = 0; i < half.nodes.size(); ++i) {
        if (std::abs(half.nodes[i].x()) < kCoordTol) {
            mirrored[i] = static_cast<int>(i);
        } else {
            mirrored[i] = static_cast<int>(m.nodes.size());
            m.nodes.emplace_back(-half.nodes[i].x(), half.nodes[i].y());
        }
    }
    m.tris = half.tris;
    for (const auto& t : half.tris)
        m.tris.push_back({mirrored[t[0]], mirrored[t[2]], mirrored[t[1]], mirrored[t[5]],
                          mirrored[t[4]], mirrored[t[3]]});
    for (const auto& be : half.bedges) {
        if (be.tag == BoundaryTag::upsilon) continue; // interior after the union
        m.bedges.push_back(be);
        Mesh::BEdge mbe = be;
        mbe.n0 = mirrored[be.n1];
        mbe.n1 = mirrored[be.n0];
        mbe.mid = mirrored[be.mid];
        mbe.tri = be.tri + static_cast<int>(half.tris.size());
        m.bedges.push_back(mbe);
    }
    validate_mesh(m);
    return m;
}

// ---------------------------------------------------------------------------
// P2 shape functions
// ---------------------------------------------------------------------------

namespace p2 {

std::array<double, 6> shape(const Eigen::Vector3d& b) {
    const double l0 = b[0], l1 = b[1], l2 = b[2];
    return {l0 * (2 * l0 - 1), l1 * (2 * l1 - 1), l2 * (2 * l2 - 1),
            4 * l0 * l1,       4 * l1 * l2,       4 * l2 * l0};
}

std::array<Eigen::Vector2d, 6> dshape(const Eigen::Vector3d& b) {
    // Derivatives with respect to (l1, l2); l0 = 1 - l1 - l2.
    const double l0 = b[0], l1 = b[1], l2 = b[2];
    return {Eigen::Vector2d{1 - 4 * l0, 1 - 4 * l0},
            Eigen::Vector2d{4 * l1 - 1, 0},
            Eigen::Vector2d{0, 4 * l2 - 1},
            Eigen::Vector2d{4 * (l0 - l1), -4 * l1},
            Eigen::Vector2d{4 * l2, 4 * l1},
            Eigen::Vector2d{-4 * l2, 4 * (l0 - l2)}};
}

} // namespace p2

// ---------------------------------------------------------------------------
// Point location and evaluation
// ---------------------------------------------------------------------------

PointLocator::PointLocator(const Mesh& m) : mesh_(m) {
    lo_ = hi_ = m.nodes[0];
    for (const auto& p : m.nodes) {
        lo_ = lo_.cwiseMin(p);
        hi_ = hi_.cwiseMax(p);
    }
    const double span = std::max((hi_ - lo_).maxCoeff(), 1e-12);
    const int target = std::max(1, static_cast<int>(std::sqrt(m.tris.size() / 2.0)));
    nx_ = std::max(1, static_cast<int>((hi_.x() - lo_.x()) / span * target));
    ny_ = std::max(1, static_cast<int>((hi_.y() - lo_.y()) / span * target));
    bins_.resize(static_cast<std::size_t>(nx_) * ny_);
    for (std::size_t t = 0; t < m.tris.size(); ++t) {
        Eigen::Vector2d tlo = m.nodes[m.tris[t][0]], thi = tlo;
        for (int k = 1; k < 3; ++k) {
            tlo = tlo.cwiseMin(m.nodes[m.tris[t][k]]);
            thi = thi.cwiseMax(m.nodes[m.tris[t][k]]);
        }
        const int i0 = std::clamp(int((tlo.x() - lo_.x()) / (hi_.x() - lo_.x()) * nx_), 0, nx_ - 1);
        const int i1 = std::clamp(int((thi.x() - lo_.x()) / (hi_.x() - lo_.x()) * nx_), 0, nx_ - 1);
        const int j0 = std::clamp(int((tlo.y() - lo_.y()) / (hi_.y() - lo_.y()) * ny_), 0, ny_ - 1);
        const int j1 = std::clamp(int((thi.y() - lo_.y()) / (hi_.y() - lo_.y()) * ny_), 0, ny_ - 1);
        for (int i = i0; i <= i1; ++i)
            for (int j = j0; j <= j1; ++j)
                bins_[static_cast<std::size_t>(i) * ny_ + j].push_back(static_cast<int>(t));
    }
}

int PointLocator::locate(const Eigen::Vector2d& p, Eigen::Vector3d& bary) const {
    const int i = std::clamp(int((p.x() - lo_.x()) / (hi_.x() - lo_.x()) * nx_), 0, nx_ - 1);
    const int j = std::clamp(int((p.y() - lo_.y()) / (hi_.y() - lo_.y()) * ny_), 0, ny_ - 1);
    for (int t : bins_[static_cast<std::size_t>(i) * ny_ + j]) {
        const auto& tr = mesh_.tris[t];
        const Eigen::Vector2d &a = mesh_.nodes[tr[0]], &b = mesh_.nodes[tr[1]],
                              &c = mesh_.nodes[tr[2]];
        const double det = signed_area2(a, b, c);
        const double l1 = signed_area2(a, p, c) / det;
        const double l2 = signed_area2(a, b, p) / det;
        const double l0 = 1.0 - l1 - l2;
        const double tol = -1e-10;
        if (l0 >= tol && l1 >= tol && l2 >= tol) {
            bary = {l0, l1, l2};
            return t;
        }
    }
    return -1;
}

std::complex<double> PointLocator::eval(const Eigen::Vector2d& p,
                                        const Eigen::VectorXcd& dof) const {
    Eigen::Vector3d bary;
    const int t = locate(p, bary);
    if (t < 0) throw MeshError("mesh: evaluation point outside the mesh");
    const auto sh = p2::shape(bary);
    std::complex<double> v = 0.0;
    for (int k = 0; k < 6; ++k) v += sh[k] * dof[mesh_.tris[t][k]];
    return v;
}

Eigen::Vector2cd PointLocator::eval_gradient(const Eigen::Vector2d& p,
                                             const Eigen::VectorXcd& dof) const {
    Eigen::Vector3d bary;
    const int t = locate(p, bary);
    if (t < 0) throw MeshError("mesh: evaluation point outside the mesh");
    const auto& tr = mesh_.tris[t];
    const Eigen::Vector2d &a = mesh_.nodes[tr[0]], &b = mesh_.nodes[tr[1]],
                          &c = mesh_.nodes[tr[2]];
    Eigen::Matrix2d jac;
    jac.col(0) = b - a;
    jac.col(1) = c - a;
    const Eigen::Matrix2d jinv_t = jac.inverse().transpose();
    const auto dsh = p2::dshape(bary);
    Eigen::Vector2cd grad = Eigen::Vector2cd::Zero();
    for (int k = 0; k < 6; ++k) {
        const Eigen::Vector2d g = jinv_t * dsh[k];
        grad += g.cast<std::complex<double>>() * dof[tr[k]];
    }
    return grad;
}

// ---------------------------------------------------------------------------
// Boundary arcs
// ---------------------------------------------------------------------------

BoundaryArc select_arc(const Mesh& m, BoundaryTag tag,
                       const std::function<bool(const Eigen::Vector2d&)>& keep) {
    std::vector<int> pool;
    for (std::size_t b = 0; b < m.bedges.size(); ++b) {
        if (m.bedges[b].tag != tag) continue;
        const Eigen::Vector2d mid = 0.5 * (m.nodes[m.bedges[b].n0] + m.nodes[m.bedges[b].n1]);
        if (!keep || keep(mid)) pool.push_back(static_cast<int>(b));
    }
    if (pool.empty()) throw MeshError("mesh: empty boundary-arc selection");

    // Chain edges by shared endpoints.
    std::map<int, std::vector<int>> at_node;
    for (int b : pool) {
        at_node[m.bedges[b].n0].push_back(b);
        at_node[m.bedges[b].n1].push_back(b);
    }
    int start_node = -1;
    for (const auto& [node, edges] : at_node) {
        if (edges.size() > 2) throw MeshError("mesh: boundary-arc selection branches");
        if (edges.size() == 1) {
            start_node = node;
            break;
        }
    }
    BoundaryArc arc;
    arc.closed = (start_node < 0);
    int node = arc.closed ? m.bedges[pool.front()].n0 : start_node;
    std::vector<char> used(m.bedges.size(), 0);
    while (true) {
        int next_edge = -1;
        for (int b : at_node[node])
            if (!used[b]) {
                next_edge = b;
                break;
            }
        if (next_edge < 0) break;
        used[next_edge] = 1;
        const auto& be = m.bedges[next_edge];
        const bool fwd = (be.n0 == node);
        arc.edges.push_back(next_edge);
        arc.forward.push_back(fwd);
        arc.length += (m.nodes[be.n1] - m.nodes[be.n0]).norm();
        node = fwd ? be.n1 : be.n0;
    }
    if (arc.edges.size() != pool.size())
        throw MeshError("mesh: boundary-arc selection is disconnected");
    return arc;
}

} // namespace fanoguide::geo
