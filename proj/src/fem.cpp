#include "fanoguide/fem.hpp"

#include "fanoguide/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>

namespace fanoguide::fem {

namespace {

constexpr double kPi = std::numbers::pi;
const cd kI(0.0, 1.0);

// Dunavant 7-point rule, exact to degree 5.
struct TriQP {
    Eigen::Vector3d bary;
    double w;
};
const std::array<TriQP, 7> kTriRule = {{
    {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, 0.225},
    {{0.059715871789770, 0.470142064105115, 0.470142064105115}, 0.132394152788506},
    {{0.470142064105115, 0.059715871789770, 0.470142064105115}, 0.132394152788506},
    {{0.470142064105115, 0.470142064105115, 0.059715871789770}, 0.132394152788506},
    {{0.797426985353087, 0.101286507323456, 0.101286507323456}, 0.125939180544827},
    {{0.101286507323456, 0.797426985353087, 0.101286507323456}, 0.125939180544827},
    {{0.101286507323456, 0.101286507323456, 0.797426985353087}, 0.125939180544827},
}};

// 5-point Gauss on [0,1].
const std::array<double, 5> kGx = {0.046910077030668, 0.230765344947158, 0.5,
                                   0.769234655052842, 0.953089922969332};
const std::array<double, 5> kGw = {0.118463442528095, 0.239314335249683,
                                   0.284444444444444, 0.239314335249683,
                                   0.118463442528095};

// 1D P2 shapes on an edge, ordered (n0, n1, mid).
std::array<double, 3> edge_shape(double t) {
    return {(1 - t) * (1 - 2 * t), t * (2 * t - 1), 4 * t * (1 - t)};
}
std::array<double, 3> edge_dshape(double t) {
    return {4 * t - 3, 4 * t - 1, 4 - 8 * t};
}

// Orthonormal transverse basis on (0,1): phi_0 = 1, phi_k = sqrt(2) cos(pi k y).
double phi(int k, double y) {
    return k == 0 ? 1.0 : std::sqrt(2.0) * std::cos(kPi * k * y);
}
// Coefficient of cos(pi k y) in terms of the phi_k coefficient.
double cos_from_phi(int k) { return k == 0 ? 1.0 : std::sqrt(2.0); }

Eigen::Vector3d barycentric(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                            const Eigen::Vector2d& c, const Eigen::Vector2d& p) {
    auto area2 = [](const Eigen::Vector2d& u, const Eigen::Vector2d& v,
                    const Eigen::Vector2d& w) {
        return (v.x() - u.x()) * (w.y() - u.y()) - (v.y() - u.y()) * (w.x() - u.x());
    };
    const double det = area2(a, b, c);
    const double l1 = area2(a, p, c) / det;
    const double l2 = area2(a, b, p) / det;
    return {1.0 - l1 - l2, l1, l2};
}

} // namespace

// ---------------------------------------------------------------------------
// HelmholtzOperator: assembly shared across spectral parameters
// ---------------------------------------------------------------------------

HelmholtzOperator::HelmholtzOperator(const Mesh& mesh, AbcKind abc)
    : mesh_(&mesh), abc_(abc) {
    const int n = mesh.node_count();

    // Dirichlet constraints on Upsilon.
    std::vector<char> constrained(n, 0);
    if (abc == AbcKind::dirichlet) {
        bool any = false;
        for (const auto& be : mesh.bedges) {
            if (be.tag != geo::BoundaryTag::upsilon) continue;
            constrained[be.n0] = constrained[be.n1] = constrained[be.mid] = 1;
            any = true;
        }
        if (!any)
            throw ConfigError("fem: dirichlet abc requested but mesh has no upsilon face");
    }
    full_to_red_.assign(n, -1);
    for (int i = 0; i < n; ++i) {
        if (constrained[i]) continue;
        full_to_red_[i] = n_reduced_++;
        red_to_full_.push_back(i);
    }

    // Element stiffness and mass.
    std::vector<Eigen::Triplet<double>> mass_full_trip;
    k_trip_.reserve(mesh.tris.size() * 36);
    m_trip_.reserve(mesh.tris.size() * 36);
    mass_full_trip.reserve(mesh.tris.size() * 36);
    for (const auto& t : mesh.tris) {
        const Eigen::Vector2d &a = mesh.nodes[t[0]], &b = mesh.nodes[t[1]],
                              &c = mesh.nodes[t[2]];
        Eigen::Matrix2d jac;
        jac.col(0) = b - a;
        jac.col(1) = c - a;
        const double detj = jac.determinant();
        const Eigen::Matrix2d jinv_t = jac.inverse().transpose();

        Eigen::Matrix<double, 6, 6> ke = Eigen::Matrix<double, 6, 6>::Zero();
        Eigen::Matrix<double, 6, 6> me = Eigen::Matrix<double, 6, 6>::Zero();
        for (const auto& qp : kTriRule) {
            const auto sh = geo::p2::shape(qp.bary);
            const auto dsh = geo::p2::dshape(qp.bary);
            std::array<Eigen::Vector2d, 6> grad;
            for (int k = 0; k < 6; ++k) grad[k] = jinv_t * dsh[k];
            const double w = qp.w * 0.5 * detj; // reference triangle area 1/2
            for (int i = 0; i < 6; ++i)
                for (int j = 0; j < 6; ++j) {
                    ke(i, j) += w * grad[i].dot(grad[j]);
                    me(i, j) += w * sh[i] * sh[j];
                }
        }
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) {
                mass_full_trip.emplace_back(t[i], t[j], me(i, j));
                const int ri = full_to_red_[t[i]], rj = full_to_red_[t[j]];
                if (ri < 0 || rj < 0) continue;
                k_trip_.emplace_back(ri, rj, ke(i, j));
                m_trip_.emplace_back(ri, rj, me(i, j));
            }
    }
    mass_full_.resize(n, n);
    mass_full_.setFromTriplets(mass_full_trip.begin(), mass_full_trip.end());

    for (std::size_t bi = 0; bi < mesh.bedges.size(); ++bi) {
        if (mesh.bedges[bi].tag != geo::BoundaryTag::trunc) continue;
        const double x = mesh.nodes[mesh.bedges[bi].n0].x();
        (x > 0 ? right_edges_ : left_edges_).push_back(static_cast<int>(bi));
    }
    if (right_edges_.empty())
        throw ConfigError("fem: mesh has no truncation face at x = +r_trunc");
}

cd HelmholtzOperator::l2_inner(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) const {
    const Eigen::VectorXd ur = u.real(), ui = u.imag();
    const Eigen::VectorXcd mu =
        (mass_full_ * ur).cast<cd>() + kI * (mass_full_ * ui).cast<cd>();
    return v.adjoint() * mu;
}

cd HelmholtzOperator::l2_bilinear(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) const {
    const Eigen::VectorXd ur = u.real(), ui = u.imag();
    const Eigen::VectorXcd mu =
        (mass_full_ * ur).cast<cd>() + kI * (mass_full_ * ui).cast<cd>();
    return v.transpose() * mu;
}

// ---------------------------------------------------------------------------
// Per-face trace tables
// ---------------------------------------------------------------------------

struct HelmholtzOperator::System::FaceData {
    Face which = Face::right;
    double x = 0.0; ///< signed abscissa of the face

    std::vector<int> face_red;            ///< reduced dof ids coupled by the DtN
    std::vector<Eigen::VectorXd> b;       ///< b_k over face_red, k = 0..n_terms-1

    struct QP {
        double y, w;
        std::array<int, 3> edge_nodes;   ///< full node ids (n0, n1, mid)
        std::array<double, 3> tr_shape;
        std::array<int, 6> tri_nodes;
        std::array<double, 6> grad_x;    ///< d/dx of the 6 P2 basis functions
    };
    std::vector<QP> qps;
};

namespace {

std::shared_ptr<const HelmholtzOperator::System::FaceData>
build_face_data(const Mesh& mesh, const std::vector<int>& full_to_red,
                const std::vector<int>& edges,
                HelmholtzOperator::System::Face which, int n_terms) {
    using FaceData = HelmholtzOperator::System::FaceData;
    auto fd = std::make_shared<FaceData>();
    fd->which = which;
    fd->x = mesh.nodes[mesh.bedges[edges.front()].n0].x();

    std::map<int, int> red_to_local;
    auto local_of = [&](int full) {
        const int red = full_to_red[full];
        if (red < 0) throw ConfigError("fem: truncation face carries a constrained dof");
        auto [it, fresh] = red_to_local.try_emplace(red, static_cast<int>(fd->face_red.size()));
        if (fresh) fd->face_red.push_back(red);
        return it->second;
    };

    struct Contribution {
        int local;
        double y, w, shape;
    };
    std::vector<Contribution> contribs;

    for (int bi : edges) {
        const auto& be = mesh.bedges[bi];
        const Eigen::Vector2d &p0 = mesh.nodes[be.n0], &p1 = mesh.nodes[be.n1];
        const double len = (p1 - p0).norm();
        const std::array<int, 3> enodes = {be.n0, be.n1, be.mid};

        const auto& tri = mesh.tris[be.tri];
        const Eigen::Vector2d &a = mesh.nodes[tri[0]], &b2 = mesh.nodes[tri[1]],
                              &c = mesh.nodes[tri[2]];
        Eigen::Matrix2d jac;
        jac.col(0) = b2 - a;
        jac.col(1) = c - a;
        const Eigen::Matrix2d jinv_t = jac.inverse().transpose();

        for (int g = 0; g < 5; ++g) {
            const double t = kGx[g];
            const Eigen::Vector2d p = p0 + t * (p1 - p0);
            FaceData::QP qp;
            qp.y = p.y();
            qp.w = kGw[g] * len;
            qp.edge_nodes = enodes;
            qp.tr_shape = edge_shape(t);
            const auto dsh = geo::p2::dshape(barycentric(a, b2, c, p));
            for (int k = 0; k < 6; ++k) {
                qp.tri_nodes[k] = tri[k];
                qp.grad_x[k] = (jinv_t * dsh[k]).x();
            }
            fd->qps.push_back(qp);
            for (int k = 0; k < 3; ++k)
                contribs.push_back({local_of(enodes[k]), qp.y, qp.w, qp.tr_shape[k]});
        }
    }

    fd->b.assign(n_terms, Eigen::VectorXd::Zero(fd->face_red.size()));
    for (int k = 0; k < n_terms; ++k)
        for (const auto& cb : contribs)
            fd->b[k][cb.local] += cb.w * cb.shape * phi(k, cb.y);
    return fd;
}

} // namespace

// ---------------------------------------------------------------------------
// Factorization at a given spectral parameter
// ---------------------------------------------------------------------------

std::unique_ptr<HelmholtzOperator::System>
HelmholtzOperator::factorize(double lambda, const RadiationCondition& rc) const {
    auto sys = std::unique_ptr<System>(new System());
    sys->op_ = this;
    sys->lambda_ = lambda;
    sys->rc_ = rc;
    sys->modes_ = modal::build_mode_set(lambda);
    const int m = sys->modes_.m;
    if (rc.n_terms < m + 1)
        throw ConfigError("fem: DtN needs at least m+1 modal terms");
    if (rc.kind == RadiationCondition::Kind::augmented) {
        if (!left_edges_.empty() || abc_ == AbcKind::none)
            throw ConfigError("fem: augmented condition is half-guide only");
        const double am = sys->modes_.alpha[m];
        if (am * mesh_->r_trunc > 8.0)
            throw ConfigError("fem: augmented condition needs alpha_m * R <= 8");
    }

    sys->faces_.push_back(build_face_data(*mesh_, full_to_red_, right_edges_,
                                          System::Face::right, rc.n_terms));
    if (!left_edges_.empty())
        sys->faces_.push_back(build_face_data(*mesh_, full_to_red_, left_edges_,
                                              System::Face::left, rc.n_terms));

    std::vector<Eigen::Triplet<cd>> trip;
    trip.reserve(k_trip_.size() + sys->faces_.size() * 80 * 80);
    for (std::size_t i = 0; i < k_trip_.size(); ++i)
        trip.emplace_back(k_trip_[i].row(), k_trip_[i].col(),
                          cd(k_trip_[i].value() - lambda * m_trip_[i].value(), 0.0));

    for (const auto& fd : sys->faces_) {
        const int nloc = static_cast<int>(fd->face_red.size());
        Eigen::MatrixXcd dtn = Eigen::MatrixXcd::Zero(nloc, nloc);
        for (int k = 0; k < rc.n_terms; ++k) {
            const cd coeff = sys->dtn_coefficient(k, fd->which);
            dtn.noalias() -= coeff * (fd->b[k] * fd->b[k].transpose()).cast<cd>();
        }
        for (int i = 0; i < nloc; ++i)
            for (int j = 0; j < nloc; ++j)
                trip.emplace_back(fd->face_red[i], fd->face_red[j], dtn(i, j));
    }

    Eigen::SparseMatrix<cd> A(n_reduced_, n_reduced_);
    A.setFromTriplets(trip.begin(), trip.end());
    sys->lu_.compute(A);
    if (sys->lu_.info() != Eigen::Success)
        throw SolverError("fem: sparse LU factorization failed at lambda = " +
                          std::to_string(lambda));
    sys->pivot_ = std::exp(sys->lu_.logAbsDeterminant().real() / n_reduced_);
    return sys;
}

cd HelmholtzOperator::System::dtn_coefficient(int k, Face /*face*/) const {
    const int m = modes_.m;
    if (k < m) return kI * modes_.alpha[k];
    if (k == m && rc_.kind == RadiationCondition::Kind::augmented) {
        const double am = modes_.alpha[m];
        const cd r = -kI * std::exp(-2.0 * am * op_->mesh_->r_trunc);
        return am * (1.0 - r) / (1.0 + r);
    }
    return cd(-modes_.beta(k), 0.0);
}

const HelmholtzOperator::System::FaceData*
HelmholtzOperator::System::face_data(Face f) const {
    for (const auto& fd : faces_)
        if (fd->which == f) return fd.get();
    throw ConfigError("fem: mesh has no such truncation face");
}

DiscreteField HelmholtzOperator::System::solve_incident(int j) const {
    const int m = modes_.m;
    const bool augmented = rc_.kind == RadiationCondition::Kind::augmented;
    if (j < 0 || j > m || (j == m && !augmented))
        throw ConfigError("fem: invalid incident mode index");

    // Trace mismatch of the incident wave against the radiation operator,
    // supported on the right face: g = dx(W) - ell_j W at x = R.
    const auto* fd = face_data(Face::right);
    const double R = fd->x;
    const double aj = modes_.a[j];
    cd W, dW;
    if (j < m) {
        const double alpha = modes_.alpha[j];
        W = std::exp(-kI * alpha * R) / std::sqrt(aj);
        dW = -kI * alpha * W;
    } else {
        const double am = modes_.alpha[m];
        W = (std::exp(am * R) + kI * std::exp(-am * R)) / std::sqrt(2.0 * aj);
        dW = am * (std::exp(am * R) - kI * std::exp(-am * R)) / std::sqrt(2.0 * aj);
    }
    const cd g_phi = (dW - dtn_coefficient(j, Face::right) * W) / cos_from_phi(j);

    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(op_->n_reduced_);
    for (std::size_t i = 0; i < fd->face_red.size(); ++i)
        rhs[fd->face_red[i]] += g_phi * fd->b[j][i];

    const Eigen::VectorXcd x = lu_.solve(rhs);
    DiscreteField u;
    u.lambda = lambda_;
    u.values = Eigen::VectorXcd::Zero(op_->mesh_->node_count());
    for (int i = 0; i < op_->n_reduced_; ++i) u.values[op_->red_to_full_[i]] = x[i];
    return u;
}

DiscreteField HelmholtzOperator::System::solve(const Eigen::VectorXcd& rhs_full) const {
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(op_->n_reduced_);
    for (int i = 0; i < op_->n_reduced_; ++i) rhs[i] = rhs_full[op_->red_to_full_[i]];
    const Eigen::VectorXcd x = lu_.solve(rhs);
    DiscreteField u;
    u.lambda = lambda_;
    u.values = Eigen::VectorXcd::Zero(op_->mesh_->node_count());
    for (int i = 0; i < op_->n_reduced_; ++i) u.values[op_->red_to_full_[i]] = x[i];
    return u;
}

namespace {

// Split the cos-coefficient pair (C, D) = (trace, normal trace) of mode k at
// abscissa x into global (c_plus, c_minus) amplitudes.
std::pair<cd, cd> split_amplitudes(const TransverseModeSet& modes, int k, double x, cd C,
                                   cd D) {
    if (k < modes.m) {
        const double alpha = modes.alpha[k];
        const double sa = std::sqrt(modes.a[k]);
        const cd cp = sa * std::exp(-kI * alpha * x) * 0.5 * (C + D / (kI * alpha));
        const cd cm = sa * std::exp(kI * alpha * x) * 0.5 * (C - D / (kI * alpha));
        return {cp, cm};
    }
    const double beta = (k == modes.m) ? modes.alpha[modes.m] : modes.beta(k);
    const double sa = std::sqrt(beta); // v-normalization a_k = beta_k
    const cd cp = sa * std::exp(-beta * x) * 0.5 * (C + D / beta);
    const cd cm = sa * std::exp(beta * x) * 0.5 * (C - D / beta);
    return {cp, cm};
}

} // namespace

ModalAmplitudes HelmholtzOperator::System::extract_amplitudes(const DiscreteField& u,
                                                              Face face) const {
    const auto* fd = face_data(face);
    const int n_terms = rc_.n_terms;
    std::vector<cd> p(n_terms, 0.0), q(n_terms, 0.0);
    for (const auto& qp : fd->qps) {
        cd val = 0.0, dxval = 0.0;
        for (int k = 0; k < 3; ++k) val += qp.tr_shape[k] * u.values[qp.edge_nodes[k]];
        for (int k = 0; k < 6; ++k) dxval += qp.grad_x[k] * u.values[qp.tri_nodes[k]];
        for (int k = 0; k < n_terms; ++k) {
            const double ph = qp.w * phi(k, qp.y);
            p[k] += ph * val;
            q[k] += ph * dxval;
        }
    }
    ModalAmplitudes amp;
    amp.m = modes_.m;
    amp.outgoing.resize(n_terms);
    amp.incoming.resize(n_terms);
    for (int k = 0; k < n_terms; ++k) {
        const cd C = p[k] * cos_from_phi(k);
        const cd D = q[k] * cos_from_phi(k);
        std::tie(amp.outgoing[k], amp.incoming[k]) =
            split_amplitudes(modes_, k, fd->x, C, D);
    }
    return amp;
}

// ---------------------------------------------------------------------------
// Driver-level operations
// ---------------------------------------------------------------------------

std::pair<DiscreteField, ModalAmplitudes>
solve_scattering(const HelmholtzOperator& op, double lambda, int incident_j,
                 const RadiationCondition& rc) {
    auto sys = op.factorize(lambda, rc);
    DiscreteField u = sys->solve_incident(incident_j);
    ModalAmplitudes amp =
        sys->extract_amplitudes(u, HelmholtzOperator::System::Face::right);
    return {std::move(u), std::move(amp)};
}

ScatteringMatrix compute_scattering_matrix(const HelmholtzOperator& op, double lambda,
                                           int n_terms) {
    RadiationCondition rc{RadiationCondition::Kind::standard, n_terms};
    auto sys = op.factorize(lambda, rc);
    const int m = sys->modes().m;
    ScatteringMatrix s;
    s.lambda = lambda;
    s.entries.resize(m, m);
    for (int j = 0; j < m; ++j) {
        const DiscreteField u = sys->solve_incident(j);
        const ModalAmplitudes amp =
            sys->extract_amplitudes(u, HelmholtzOperator::System::Face::right);
        for (int k = 0; k < m; ++k) s.entries(k, j) = amp.outgoing[k];
    }
    modal::measure_defects(s.entries, s.unitarity_defect, s.symmetry_defect);
    return s;
}

AugmentedScatteringMatrix compute_augmented_matrix(const HelmholtzOperator& op,
                                                   double lambda, int n_terms) {
    RadiationCondition rc{RadiationCondition::Kind::augmented, n_terms};
    auto sys = op.factorize(lambda, rc);
    const int m = sys->modes().m;
    AugmentedScatteringMatrix S;
    S.lambda = lambda;
    S.entries.resize(m + 1, m + 1);
    for (int j = 0; j <= m; ++j) {
        const DiscreteField u = sys->solve_incident(j);
        const ModalAmplitudes amp =
            sys->extract_amplitudes(u, HelmholtzOperator::System::Face::right);
        for (int k = 0; k < m; ++k) S.entries(k, j) = amp.outgoing[k];
        // Packet inversion anchored on the growing component:
        // c_v^+ = (delta_jm + S_mj) / sqrt(2).
        S.entries(m, j) = std::sqrt(2.0) * amp.outgoing[m] - (j == m ? 1.0 : 0.0);
    }
    modal::measure_defects(S.entries, S.unitarity_defect, S.symmetry_defect);
    return S;
}

ModalAmplitudes extract_amplitudes_interior(const Mesh& mesh, const geo::PointLocator& loc,
                                            const DiscreteField& u, double x_e,
                                            int n_terms) {
    const TransverseModeSet modes = modal::build_mode_set(u.lambda);
    std::vector<double> ynodes, yweights;
    const int n_edges = std::max(16, static_cast<int>(std::ceil(1.0 / mesh.h)));
    modal::composite_gauss_grid(n_edges, 4, ynodes, yweights);

    std::vector<cd> p(n_terms, 0.0), q(n_terms, 0.0);
    for (std::size_t i = 0; i < ynodes.size(); ++i) {
        const Eigen::Vector2d pt(x_e, ynodes[i]);
        const cd val = loc.eval(pt, u.values);
        const cd dxval = loc.eval_gradient(pt, u.values).x();
        for (int k = 0; k < n_terms; ++k) {
            const double ph = yweights[i] * phi(k, ynodes[i]);
            p[k] += ph * val;
            q[k] += ph * dxval;
        }
    }
    ModalAmplitudes amp;
    amp.m = modes.m;
    amp.outgoing.resize(n_terms);
    amp.incoming.resize(n_terms);
    for (int k = 0; k < n_terms; ++k) {
        const cd C = p[k] * cos_from_phi(k);
        const cd D = q[k] * cos_from_phi(k);
        std::tie(amp.outgoing[k], amp.incoming[k]) = split_amplitudes(modes, k, x_e, C, D);
    }
    return amp;
}

ArcTrace tangential_derivative_trace(const Mesh& mesh, const DiscreteField& u,
                                     const BoundaryArc& arc) {
    ArcTrace tr;
    double s0 = 0.0;
    for (std::size_t e = 0; e < arc.edges.size(); ++e) {
        const auto& be = mesh.bedges[arc.edges[e]];
        const bool fwd = arc.forward[e];
        const int na = fwd ? be.n0 : be.n1;
        const int nb = fwd ? be.n1 : be.n0;
        const Eigen::Vector2d &pa = mesh.nodes[na], &pb = mesh.nodes[nb];
        const double len = (pb - pa).norm();
        const std::array<cd, 3> uv = {u.values[na], u.values[nb], u.values[be.mid]};
        for (int g = 0; g < 5; ++g) {
            const double t = kGx[g];
            const auto sh = edge_shape(t);
            const auto dsh = edge_dshape(t);
            cd val = 0.0, dval = 0.0;
            for (int k = 0; k < 3; ++k) {
                val += sh[k] * uv[k];
                dval += dsh[k] * uv[k];
            }
            tr.s.push_back(s0 + t * len);
            tr.p.push_back(pa + t * (pb - pa));
            tr.w.push_back(kGw[g] * len);
            tr.u.push_back(val);
            tr.du_ds.push_back(dval / len);
        }
        s0 += len;
    }
    return tr;
}

void export_field_csv(const Mesh& mesh, const DiscreteField& u, const std::string& path,
                      const std::string& header_comment) {
    std::ofstream out(path);
    if (!out) throw ConfigError("fem: cannot open '" + path + "' for writing");
    out.precision(17);
    if (!header_comment.empty()) out << "# " << header_comment << "\n";
    out << "x,y,re_u,im_u\n";
    for (int i = 0; i < mesh.node_count(); ++i)
        out << mesh.nodes[i].x() << "," << mesh.nodes[i].y() << "," << u.values[i].real()
            << "," << u.values[i].imag() << "\n";
    std::ofstream tout(path + ".tris");
    if (!tout) throw ConfigError("fem: cannot open '" + path + ".tris' for writing");
    tout << "# n0,n1,n2,m01,m12,m20\n";
    for (const auto& t : mesh.tris) {
        for (int k = 0; k < 6; ++k) tout << t[k] << (k == 5 ? '\n' : ',');
    }
}

} // namespace fanoguide::fem
