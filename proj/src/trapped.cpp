#include "fanoguide/trapped.hpp"

#include "fanoguide/errors.hpp"
#include "fanoguide/modal.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace fanoguide::trapped {

namespace {

constexpr double kPi = std::numbers::pi;
const cd kI(0.0, 1.0);

// Single augmented column-m solve; returns S_mm.
cd augmented_smm(const fem::HelmholtzOperator& op, double lambda, int n_terms) {
    fem::RadiationCondition rc{fem::RadiationCondition::Kind::augmented, n_terms};
    auto sys = op.factorize(lambda, rc);
    const int m = sys->modes().m;
    const fem::DiscreteField u = sys->solve_incident(m);
    const fem::ModalAmplitudes amp =
        sys->extract_amplitudes(u, fem::HelmholtzOperator::System::Face::right);
    return std::sqrt(2.0) * amp.outgoing[m] - 1.0;
}

struct Evaluator {
    const ParamFamily& family;
    const LocateOptions& opts;
    // one-slot mesh cache: the disk family keeps its geometry fixed
    geo::WaveguideGeometry cached_geometry{};
    std::shared_ptr<geo::Mesh> mesh;
    std::unique_ptr<fem::HelmholtzOperator> op;

    static bool same_geometry(const geo::WaveguideGeometry& a,
                              const geo::WaveguideGeometry& b) {
        return a.variant == b.variant && a.abc == b.abc && a.r_trunc == b.r_trunc &&
               a.branch_width == b.branch_width && a.branch_height == b.branch_height &&
               a.center == b.center && a.radius == b.radius &&
               a.profile_eps == b.profile_eps;
    }

    double operator()(double p, cd* smm_out = nullptr) {
        auto [g, lambda] = family.at(p);
        if (!mesh || !same_geometry(g, cached_geometry)) {
            mesh = std::make_shared<geo::Mesh>(geo::generate_mesh(g, opts.h));
            op = std::make_unique<fem::HelmholtzOperator>(*mesh, g.abc);
            cached_geometry = g;
        }
        const cd smm = augmented_smm(*op, lambda, opts.n_terms);
        if (smm_out) *smm_out = smm;
        return std::norm(smm + 1.0);
    }
};

} // namespace

ParamFamily lshape_height_family(double k0, geo::AbcKind abc) {
    const double lambda0 = k0 * k0;
    const double bw = kPi / k0;
    return {"L", [lambda0, bw, abc, k0](double L) {
                auto g = geo::make_lshape(abc, bw, L);
                const double alpha_m = std::sqrt(kPi * kPi - lambda0);
                g.r_trunc = geo::resolve_r_trunc(g, alpha_m);
                return std::make_pair(g, lambda0);
            }};
}

ParamFamily disk_wavenumber_family(double eps, geo::AbcKind abc) {
    return {"k", [eps, abc](double k) {
                auto g = geo::make_disk(abc, eps);
                // Freeze the truncation for the whole scan so that the mesh is
                // reused; alpha_m < pi gives the conservative cap.
                g.r_trunc = geo::resolve_r_trunc(g, kPi);
                return std::make_pair(g, k * k);
            }};
}

TrappedModeRecord locate_trapped(const ParamFamily& family, double lo, double hi,
                                 const LocateOptions& opts) {
    if (!(lo < hi)) throw ConfigError("trapped: empty search window");
    Evaluator eval{family, opts};

    // Coarse scan.
    const int n = std::max(5, opts.scan_points);
    std::vector<double> ps(n), fs(n);
    std::ostringstream scan;
    scan << family.name << ",abs_smm_plus_1\n";
    for (int i = 0; i < n; ++i) {
        ps[i] = lo + (hi - lo) * i / (n - 1);
        fs[i] = eval(ps[i]);
        scan << ps[i] << "," << std::sqrt(fs[i]) << "\n";
    }
    int imin = 0;
    for (int i = 1; i < n; ++i)
        if (fs[i] < fs[imin]) imin = i;
    if (imin == 0 || imin == n - 1)
        throw NotFoundError("trapped: no interior |S_mm + 1| dip in the window",
                            scan.str());

    // Golden-section refinement on |S_mm + 1|^2.
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = ps[imin - 1], b = ps[imin + 1];
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = eval(x1), f2 = eval(x2);
    while (b - a > opts.param_tol) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = eval(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = eval(x2);
        }
    }
    const double p_star = 0.5 * (a + b);

    cd smm;
    eval(p_star, &smm);
    const double residual = std::abs(smm + 1.0);
    if (residual > opts.residual_tol)
        throw NotFoundError("trapped: dip at " + family.name + " = " +
                                std::to_string(p_star) + " has |S_mm+1| = " +
                                std::to_string(residual) + " above tolerance",
                            scan.str());

    auto [g, lambda0] = family.at(p_star);
    TrappedModeRecord rec;
    rec.geometry = g;
    rec.param = p_star;
    rec.lambda0 = lambda0;
    rec.residual = residual;
    rec.mesh = eval.mesh;
    rec.locator = std::make_shared<geo::PointLocator>(*rec.mesh);

    // Trapped field from the augmented solution Z_m.
    fem::RadiationCondition rc{fem::RadiationCondition::Kind::augmented, opts.n_terms};
    auto sys = eval.op->factorize(lambda0, rc);
    const int m = sys->modes().m;
    fem::DiscreteField field = sys->solve_incident(m);

    // Normalize over the unbounded half-guide: meshed part plus the analytic
    // tail of the decaying m-component beyond the truncation face.
    const modal::TransverseModeSet modes = modal::build_mode_set(lambda0);
    const double am = modes.alpha[m];
    const double x_e = g.d + std::min(0.25, 0.5 * (g.r_trunc - g.d));
    fem::ModalAmplitudes amp = fem::extract_amplitudes_interior(
        *rec.mesh, *rec.locator, field, x_e, opts.n_terms);
    const double norm_mesh2 = std::real(eval.op->l2_inner(field.values, field.values));
    const double tail2 =
        std::norm(amp.incoming[m]) * std::exp(-2.0 * am * g.r_trunc) / (4.0 * am * am);
    field.values /= std::sqrt(norm_mesh2 + tail2);

    // Global phase: rotate so that the real part carries the full L2 mass,
    // then pick the sign that makes K positive.
    const cd q = eval.op->l2_bilinear(field.values, field.values);
    if (std::abs(q) > 1e-12) field.values *= std::exp(-kI * (std::arg(q) / 2.0));
    bool violation = false;
    double K = extract_K(*rec.mesh, *rec.locator, field, x_e, &violation);
    if (K < 0.0) {
        field.values = -field.values;
        K = -K;
    }
    rec.K = K;
    rec.slow_decay_ok = !violation;
    rec.field = std::move(field);
    return rec;
}

double extract_K(const geo::Mesh& mesh, const geo::PointLocator& loc,
                 const fem::DiscreteField& field, double x_e, bool* violation) {
    const modal::TransverseModeSet modes = modal::build_mode_set(field.lambda);
    const int m = modes.m;
    std::vector<double> yn, yw;
    const int n_edges = std::max(16, static_cast<int>(std::ceil(1.0 / mesh.h)));
    modal::composite_gauss_grid(n_edges, 4, yn, yw);
    cd proj = 0.0;
    for (std::size_t i = 0; i < yn.size(); ++i)
        proj += yw[i] * loc.eval({x_e, yn[i]}, field.values) * std::cos(kPi * m * yn[i]);
    // ||cos(pi m y)||^2 = 1/2 on (0,1) for m >= 1
    const cd coeff = 2.0 * proj;
    const double K = coeff.real() * std::exp(modes.alpha[m] * x_e);
    if (violation) *violation = std::abs(K) < 1e-6;
    else if (std::abs(K) < 1e-6)
        throw SolverError("trapped: slow-decay amplitude K vanishes (the first-order "
                          "analysis does not apply)");
    return K;
}

} // namespace fanoguide::trapped
