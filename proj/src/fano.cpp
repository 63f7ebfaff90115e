#include "fanoguide/fano.hpp"

#include "fanoguide/errors.hpp"

#include <cmath>
#include <numbers>

namespace fanoguide::fano {

namespace {
constexpr double kPi = std::numbers::pi;
const cd kI(0.0, 1.0);
} // namespace

ProfileArc make_profile_arc(const geo::Mesh& mesh, const geo::WaveguideGeometry& g,
                            const geo::ProfileH& profile) {
    using geo::ProfileH;
    ProfileArc pa;
    switch (profile.arc) {
    case ProfileH::Arc::branch_end: {
        const double L = g.branch_height;
        pa.arc = geo::select_arc(mesh, geo::BoundaryTag::wall,
                                 [L](const Eigen::Vector2d& p) {
                                     return std::abs(p.y() - L) < 1e-9;
                                 });
        pa.param = [](const Eigen::Vector2d& p) { return p.x(); };
        break;
    }
    case ProfileH::Arc::inclusion_circle: {
        pa.arc = geo::select_arc(mesh, geo::BoundaryTag::inclusion);
        const Eigen::Vector2d c = g.center;
        pa.param = [c](const Eigen::Vector2d& p) {
            return std::atan2(p.y() - c.y(), p.x() - c.x());
        };
        break;
    }
    case ProfileH::Arc::top_wall: {
        const double s0 = profile.s0, s1 = profile.s1;
        pa.arc = geo::select_arc(mesh, geo::BoundaryTag::wall,
                                 [s0, s1](const Eigen::Vector2d& p) {
                                     return p.y() > 0.5 && p.x() >= s0 - 1e-9 &&
                                            p.x() <= s1 + 1e-9;
                                 });
        pa.param = [](const Eigen::Vector2d& p) { return p.x(); };
        break;
    }
    }
    return pa;
}

void orthogonalize_zeta(std::vector<fem::DiscreteField>& zetas,
                        const trapped::TrappedModeRecord& rec,
                        const geo::PointLocator& loc, double x_e, int n_terms,
                        Eigen::VectorXcd* removed) {
    if (!rec.slow_decay_ok || rec.K == 0.0)
        throw SolverError("fano: cannot orthogonalize against a trapped mode with "
                          "K ~ 0");
    const fem::ModalAmplitudes tr_amp = fem::extract_amplitudes_interior(
        *rec.mesh, loc, rec.field, x_e, n_terms);
    const cd c_tr = tr_amp.incoming[tr_amp.m];
    if (std::abs(c_tr) < 1e-10)
        throw SolverError("fano: trapped field has no measurable v_m^- content");
    if (removed) removed->resize(static_cast<Eigen::Index>(zetas.size()));
    for (std::size_t j = 0; j < zetas.size(); ++j) {
        const fem::ModalAmplitudes amp =
            fem::extract_amplitudes_interior(*rec.mesh, loc, zetas[j], x_e, n_terms);
        const cd c = amp.incoming[amp.m] / c_tr;
        zetas[j].values -= c * rec.field.values;
        if (removed) (*removed)[static_cast<Eigen::Index>(j)] = c;
    }
}

ZetaBasis compute_zeta_basis(const fem::HelmholtzOperator& op,
                             const trapped::TrappedModeRecord& rec, int n_terms) {
    fem::RadiationCondition rc{fem::RadiationCondition::Kind::standard, n_terms};
    auto sys = op.factorize(rec.lambda0, rc);
    const int m = sys->modes().m;

    ZetaBasis basis;
    basis.s0.lambda = rec.lambda0;
    basis.s0.entries.resize(m, m);
    for (int j = 0; j < m; ++j) {
        fem::DiscreteField u = sys->solve_incident(j);
        const fem::ModalAmplitudes amp =
            sys->extract_amplitudes(u, fem::HelmholtzOperator::System::Face::right);
        for (int k = 0; k < m; ++k) basis.s0.entries(k, j) = amp.outgoing[k];
        basis.zeta.push_back(std::move(u));
    }
    modal::measure_defects(basis.s0.entries, basis.s0.unitarity_defect,
                           basis.s0.symmetry_defect);

    const double x_e =
        rec.geometry.d + std::min(0.25, 0.5 * (rec.geometry.r_trunc - rec.geometry.d));
    orthogonalize_zeta(basis.zeta, rec, *rec.locator, x_e, n_terms, &basis.removed);
    return basis;
}

double compute_ell_m(const trapped::TrappedModeRecord& rec, const ProfileArc& arc,
                     const geo::ProfileH& H) {
    const fem::ArcTrace tr =
        fem::tangential_derivative_trace(*rec.mesh, rec.field, arc.arc);
    double acc = 0.0;
    for (std::size_t i = 0; i < tr.s.size(); ++i) {
        const double h = H.eval(arc.param(tr.p[i]));
        acc += tr.w[i] * h *
               (std::norm(tr.du_ds[i]) - rec.lambda0 * std::norm(tr.u[i]));
    }
    return acc;
}

VolumeRowPair compute_t_and_ell_row(const fem::HelmholtzOperator& op,
                                    const trapped::TrappedModeRecord& rec,
                                    const ZetaBasis& basis, const ProfileArc& arc,
                                    const geo::ProfileH& H, int n_terms) {
    const int m = static_cast<int>(basis.zeta.size());
    VolumeRowPair vr;
    vr.t.resize(m);
    vr.ell_row.resize(m);

    const modal::TransverseModeSet modes = modal::build_mode_set(rec.lambda0);
    const double am = modes.alpha[modes.m];
    const double R = rec.geometry.r_trunc;
    const double x_e =
        rec.geometry.d + std::min(0.25, 0.5 * (rec.geometry.r_trunc - rec.geometry.d));
    const fem::ModalAmplitudes tr_amp = fem::extract_amplitudes_interior(
        *rec.mesh, *rec.locator, rec.field, x_e, n_terms);

    const fem::ArcTrace tr_tr =
        fem::tangential_derivative_trace(*rec.mesh, rec.field, arc.arc);
    for (int j = 0; j < m; ++j) {
        // Meshed part of the volume product plus the analytic tail of the
        // first evanescent component beyond the truncation face.
        cd t = op.l2_inner(rec.field.values, basis.zeta[j].values);
        const fem::ModalAmplitudes zj_amp = fem::extract_amplitudes_interior(
            *rec.mesh, *rec.locator, basis.zeta[j], x_e, n_terms);
        t += tr_amp.incoming[modes.m] * std::conj(zj_amp.incoming[modes.m]) *
             std::exp(-2.0 * am * R) / (4.0 * am * am);
        vr.t[j] = t;

        const fem::ArcTrace tr_z =
            fem::tangential_derivative_trace(*rec.mesh, basis.zeta[j], arc.arc);
        cd acc = 0.0;
        for (std::size_t i = 0; i < tr_tr.s.size(); ++i) {
            const double h = H.eval(arc.param(tr_tr.p[i]));
            acc += tr_tr.w[i] * h *
                   (tr_tr.du_ds[i] * std::conj(tr_z.du_ds[i]) -
                    rec.lambda0 * tr_tr.u[i] * std::conj(tr_z.u[i]));
        }
        vr.ell_row[j] = acc;
    }
    return vr;
}

cd FanoCoefficients::sprime_mm(double lambda_prime) const {
    return -2.0 * kI / (alpha_m * K * K) * (lambda_prime - ell_m);
}

Eigen::RowVectorXcd FanoCoefficients::sprime_mrow(double lambda_prime) const {
    return -std::sqrt(2.0 / alpha_m) / K * (lambda_prime * t - ell_row) * s0;
}

FanoCoefficients assemble_coefficients(const trapped::TrappedModeRecord& rec,
                                       double ell_m, const VolumeRowPair& vr,
                                       const modal::ScatteringMatrix& s0) {
    const modal::TransverseModeSet modes = modal::build_mode_set(rec.lambda0);
    FanoCoefficients c;
    c.lambda0 = rec.lambda0;
    c.alpha_m = modes.alpha[modes.m];
    c.K = rec.K;
    c.ell_m = ell_m;
    c.t = vr.t;
    c.ell_row = vr.ell_row;
    c.s0 = s0.entries;
    c.assumption_margin = (c.ell_row - ell_m * c.t).norm();
    c.assumption_ok = c.assumption_margin > 1e-8;
    c.re_spp_mm = c.assumption_margin * c.assumption_margin / (c.alpha_m * c.K * c.K);
    return c;
}

Eigen::MatrixXcd fano_limit_matrix(const FanoCoefficients& c, double mu,
                                   double im_spp_mm) {
    if (!c.assumption_ok)
        throw ConfigError("fano: profile drives a fast resonance (ell_row = ell_m t); "
                          "the slow-window limit formula does not apply");
    const Eigen::RowVectorXcd row = c.sprime_mrow(c.ell_m);
    const Eigen::VectorXcd col = row.transpose();
    const cd denom =
        2.0 * kI / (c.alpha_m * c.K * c.K) * mu - cd(c.re_spp_mm, im_spp_mm);
    return c.s0 + (col * row) / denom;
}

cd monomode_circle(const FanoCoefficients& c, double mu_tilde) {
    if (c.s0.rows() != 1)
        throw ConfigError("fano: monomode circle needs a 1x1 scattering matrix");
    const double s2 = 2.0 * c.re_spp_mm; // |S'_mrow(ell_m)|^2
    return c.s0(0, 0) * (2.0 * kI * mu_tilde + s2) / (2.0 * kI * mu_tilde - s2);
}

double fit_im_spp_mm(const FanoCoefficients& c, cd s_eps_mm, double eps,
                     double lambda_prime) {
    const cd spp = (s_eps_mm + 1.0 - eps * c.sprime_mm(lambda_prime)) / (eps * eps);
    return spp.imag();
}

} // namespace fanoguide::fano
