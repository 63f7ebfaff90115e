#pragma once

// P2 finite-element solution of the Helmholtz problem on truncated waveguide
// meshes.  The truncation faces carry modal radiation conditions assembled as
// transverse-mode Robin couplings:
//   propagating k:  du/dn = i alpha_k u
//   evanescent  k:  du/dn = -beta_k u                     (standard kind)
//   k = m:          du/dn = alpha_m (1-r)/(1+r) u with r = -i e^{-2 alpha_m R}
//                                                         (augmented kind)
// The augmented coefficient makes the scattered m-component proportional to
// the wave packet w_m^+, which contains a growing exponential; it requires
// alpha_m * R <= 8 to keep the dynamic range bounded.

#include "fanoguide/mesh.hpp"
#include "fanoguide/modal.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <memory>

namespace fanoguide::fem {

using cd = std::complex<double>;
using geo::AbcKind;
using geo::BoundaryArc;
using geo::Mesh;
using modal::AugmentedScatteringMatrix;
using modal::ScatteringMatrix;
using modal::TransverseModeSet;

struct RadiationCondition {
    enum class Kind { standard, augmented };
    Kind kind = Kind::standard;
    int n_terms = 20; ///< modal terms k = 0 .. n_terms-1 in the DtN sum
};

struct DiscreteField {
    Eigen::VectorXcd values; ///< one complex value per P2 node
    double lambda = 0.0;
};

/// Modal content of a field near a truncation face, reported as global
/// coefficients of the normalized modes (phase anchored at x = 0):
/// w_k^{+-} for k < m, decaying/growing a_k^{-1/2} e^{-+ beta_k x} cos(pi k y)
/// for k >= m.
struct ModalAmplitudes {
    int m = 0;
    std::vector<cd> outgoing; ///< c_k^+ (outgoing / growing)
    std::vector<cd> incoming; ///< c_k^- (incoming / decaying)
};

/// Stiffness/mass assembly and Dirichlet bookkeeping for one (mesh, abc)
/// pair; reused across spectral parameters.
class HelmholtzOperator {
public:
    HelmholtzOperator(const Mesh& mesh, AbcKind abc);

    const Mesh& mesh() const { return *mesh_; }
    AbcKind abc() const { return abc_; }
    int n_reduced() const { return n_reduced_; }
    bool has_left_face() const { return !left_edges_.empty(); }

    /// L2 inner product (u, v) = int u conj(v) over the meshed domain.
    cd l2_inner(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) const;
    /// Bilinear (unconjugated) product int u v, used to fix global phases.
    cd l2_bilinear(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) const;

    class System; // factorized A(lambda) with its radiation context

    /// Assemble and factorize K - lambda M - B(lambda).
    /// Throws SolverError when the factorization fails.
    std::unique_ptr<System> factorize(double lambda, const RadiationCondition& rc) const;

private:
    friend class System;
    struct FaceQuad; // per-face trace quadrature tables

    const Mesh* mesh_;
    AbcKind abc_;
    std::vector<int> full_to_red_, red_to_full_;
    int n_reduced_ = 0;
    std::vector<Eigen::Triplet<double>> k_trip_, m_trip_;
    Eigen::SparseMatrix<double> mass_full_; // on all nodes, for L2 products
    std::vector<int> right_edges_, left_edges_;
};

class HelmholtzOperator::System {
public:
    const TransverseModeSet& modes() const { return modes_; }
    double lambda() const { return lambda_; }
    /// Geometric-mean pivot magnitude of the LU factors.
    double pivot_indicator() const { return pivot_; }

    /// Total field for the incident mode j arriving from +infinity:
    /// w_j^- for j < m, the wave packet w_m^- for j = m (augmented kind only).
    DiscreteField solve_incident(int j) const;

    /// Solve with a caller-provided full-size right-hand side.
    DiscreteField solve(const Eigen::VectorXcd& rhs_full) const;

    enum class Face { right, left };
    /// Trace + normal-trace projection onto transverse cosines at a
    /// truncation face, split into the per-mode amplitude pair.
    ModalAmplitudes extract_amplitudes(const DiscreteField& u, Face face) const;

private:
    friend class HelmholtzOperator;
    System() = default;

    const HelmholtzOperator* op_ = nullptr;
    double lambda_ = 0.0;
    RadiationCondition rc_;
    TransverseModeSet modes_;
    double pivot_ = 0.0;
    Eigen::SparseLU<Eigen::SparseMatrix<cd>> lu_;
    // per face (right, left): b_k trace vectors on reduced dofs, and the
    // quadrature tables used for extraction
    struct FaceData;
    std::vector<std::shared_ptr<const FaceData>> faces_;

    cd dtn_coefficient(int k, Face face) const;
    const FaceData* face_data(Face f) const;
};

/// One-stop solve: factorize at lambda, solve incident j, extract amplitudes
/// at the right face.
std::pair<DiscreteField, ModalAmplitudes>
solve_scattering(const HelmholtzOperator& op, double lambda, int incident_j,
                 const RadiationCondition& rc);

/// Usual scattering matrix (m x m) from m standard incident solves.
ScatteringMatrix compute_scattering_matrix(const HelmholtzOperator& op, double lambda,
                                           int n_terms = 20);

/// Augmented scattering matrix ((m+1) x (m+1)) from m+1 augmented solves.
AugmentedScatteringMatrix compute_augmented_matrix(const HelmholtzOperator& op,
                                                   double lambda, int n_terms = 20);

/// Modal amplitudes measured on an interior vertical segment {x_e} x (0,1),
/// better conditioned than the face extraction for decaying components.
ModalAmplitudes extract_amplitudes_interior(const Mesh& mesh, const geo::PointLocator& loc,
                                            const DiscreteField& u, double x_e,
                                            int n_terms = 20);

/// Trace of a field along a boundary arc with its tangential derivative,
/// sampled on a 5-point Gauss rule per edge.
struct ArcTrace {
    std::vector<double> s;             ///< polygonal arclength of each sample
    std::vector<Eigen::Vector2d> p;    ///< sample points
    std::vector<double> w;             ///< quadrature weights (include |edge|)
    std::vector<cd> u;                 ///< trace values
    std::vector<cd> du_ds;             ///< tangential derivative
};
ArcTrace tangential_derivative_trace(const Mesh& mesh, const DiscreteField& u,
                                     const BoundaryArc& arc);

/// CSV export of a field at the P2 nodes (x, y, Re u, Im u) plus a companion
/// connectivity file, for external plotting.
void export_field_csv(const Mesh& mesh, const DiscreteField& u, const std::string& path,
                      const std::string& header_comment);

} // namespace fanoguide::fem
