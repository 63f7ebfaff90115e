#pragma once

// P2 triangulations of the waveguide geometries.  Rectilinear variants are
// meshed by structured rectangle splitting; the circular inclusion by a
// block-structured O-grid annulus glued to the surrounding structured blocks.
// All elements are straight-sided: midside nodes sit at edge midpoints and the
// circle enters polygonally.

#include "fanoguide/geometry.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace fanoguide::geo {

enum class BoundaryTag { wall, upsilon, trunc, inclusion };

std::string to_string(BoundaryTag t);
BoundaryTag tag_from_string(const std::string& s);

struct Mesh {
    // All P2 nodes, corner and midside alike.
    std::vector<Eigen::Vector2d> nodes;
    // (c0, c1, c2, m01, m12, m20): corners counter-clockwise, then the
    // midside nodes of edges (c0,c1), (c1,c2), (c2,c0).
    std::vector<std::array<int, 6>> tris;

    struct BEdge {
        int n0 = -1, n1 = -1, mid = -1; ///< corner endpoints and midside node
        BoundaryTag tag = BoundaryTag::wall;
        int tri = -1; ///< adjacent triangle
    };
    std::vector<BEdge> bedges;

    double h = 0.0;          ///< target mesh size
    double r_trunc = 0.0;    ///< abscissa of the truncation face(s)

    int node_count() const { return static_cast<int>(nodes.size()); }
    double tri_area(int t) const;
    bool has_tag(BoundaryTag t) const;
};

/// Structured P2 mesh of the geometry with target size h.
/// Throws MeshError when h cannot resolve the narrowest channel
/// (fewer than 8 edges across).
Mesh generate_mesh(const WaveguideGeometry& g, double h);

/// Full validation: conformity (interior edges shared by exactly two
/// triangles), positive orientation, midside placement, boundary tagging,
/// truncation nodes exactly on |x| = r_trunc.  Throws MeshError.
void validate_mesh(const Mesh& m);

/// Plain-text mesh format "fanoguide-mesh v1".
void export_mesh(const Mesh& m, std::ostream& out);
Mesh import_mesh(std::istream& in);
void export_mesh_file(const Mesh& m, const std::string& path);
Mesh import_mesh_file(const std::string& path);

/// Mirror union across Upsilon (x = 0): nodes on the axis are shared, the
/// upsilon boundary disappears, everything else is duplicated symmetrically.
Mesh mirror_union(const Mesh& half);

/// P2 evaluation anywhere in the mesh via a uniform-bin point locator.
class PointLocator {
public:
    explicit PointLocator(const Mesh& m);
    /// Triangle containing p together with its barycentric coordinates,
    /// or -1 when p lies outside the mesh.
    int locate(const Eigen::Vector2d& p, Eigen::Vector3d& bary) const;

    std::complex<double> eval(const Eigen::Vector2d& p,
                              const Eigen::VectorXcd& dof_values) const;
    Eigen::Vector2cd eval_gradient(const Eigen::Vector2d& p,
                                   const Eigen::VectorXcd& dof_values) const;

private:
    const Mesh& mesh_;
    Eigen::Vector2d lo_, hi_;
    int nx_ = 0, ny_ = 0;
    std::vector<std::vector<int>> bins_;
};

/// An ordered chain of boundary edges forming an arc, with an arclength
/// parameterization (polygonal) and a scalar parameter map used to evaluate
/// profile functions on the arc.
struct BoundaryArc {
    std::vector<int> edges;        ///< indices into mesh.bedges, in walk order
    std::vector<bool> forward;     ///< true when the walk goes n0 -> n1
    double length = 0.0;           ///< polygonal arclength
    bool closed = false;           ///< arc is a closed loop (inclusion circle)
};

/// Collect and chain all boundary edges with the given tag for which
/// `keep(midpoint)` holds.  Throws MeshError when the selection is empty or
/// does not chain into a single arc.
BoundaryArc select_arc(const Mesh& m, BoundaryTag tag,
                       const std::function<bool(const Eigen::Vector2d&)>& keep = {});

/// P2 shape values and reference-gradient helpers shared with the FEM layer.
namespace p2 {
/// Shape functions at barycentric coordinates (l0, l1, l2), ordered like
/// the mesh triangle tuple.
std::array<double, 6> shape(const Eigen::Vector3d& bary);
/// Gradients with respect to (l1, l2) (l0 eliminated).
std::array<Eigen::Vector2d, 6> dshape(const Eigen::Vector3d& bary);
} // namespace p2

} // namespace fanoguide::geo
