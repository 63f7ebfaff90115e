#include "fanoguide/sweep.hpp"

#include "fanoguide/errors.hpp"
#include "fanoguide/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace fanoguide::sweep {

namespace {

constexpr double kPi = std::numbers::pi;
using scattering::principal_phase;

// Classic Brent root finder on [a, b] with f(a) f(b) < 0.
template <class F>
double brent(F&& f, double a, double b, double fa, double fb, double xtol, int* evals) {
    if (fa * fb > 0.0) throw ConfigError("sweep: root not bracketed");
    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int it = 0; it < 200; ++it) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol = 2.0 * 1e-15 * std::abs(b) + 0.5 * xtol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol || fb == 0.0) return b;
        if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
            // inverse quadratic / secant step
            const double s = fb / fa;
            double p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc, r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol) ? d : (xm > 0 ? tol : -tol);
        fb = f(b);
        if (evals) ++(*evals);
        if ((fb > 0) == (fc > 0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    return b;
}

} // namespace

HalfGuideSolver::HalfGuideSolver(const geo::WaveguideGeometry& g, double h, int n_terms)
    : n_terms_(n_terms) {
    geo::WaveguideGeometry gn = g;
    gn.abc = geo::AbcKind::neumann; // mesh carries the upsilon tag either way
    mesh_ = std::make_shared<geo::Mesh>(geo::generate_mesh(gn, h));
    op_n_ = std::make_unique<fem::HelmholtzOperator>(*mesh_, geo::AbcKind::neumann);
    op_d_ = std::make_unique<fem::HelmholtzOperator>(*mesh_, geo::AbcKind::dirichlet);
}

cd HalfGuideSolver::reflection(double lambda, geo::AbcKind abc) const {
    const fem::HelmholtzOperator& op =
        (abc == geo::AbcKind::dirichlet) ? *op_d_ : *op_n_;
    return scattering::half_guide_reflection(op, lambda, n_terms_);
}

SweepTable frequency_sweep(const PerturbationFamily& family, double eps, double k_lo,
                           double k_hi, int n, const SweepOptions& opts) {
    if (!(0.0 < k_lo && k_lo < k_hi && k_hi < kPi))
        throw ConfigError("sweep: k window must sit inside the monomode band (0, pi)");
    if (n < 2) throw ConfigError("sweep: need at least two samples");

    const geo::WaveguideGeometry g = family.at(eps);
    HalfGuideSolver solver(g, opts.h, opts.n_terms);

    SweepTable table;
    table.rows.resize(n);
    parallel_for(n, [&](int i) {
        SweepRow& row = table.rows[i];
        row.epsilon = eps;
        row.k = k_lo + (k_hi - k_lo) * i / (n - 1);
        row.lambda = row.k * row.k;
        try {
            row.RN = solver.reflection(row.lambda, geo::AbcKind::neumann);
            if (opts.with_dirichlet) {
                row.RD = solver.reflection(row.lambda, geo::AbcKind::dirichlet);
                const auto rt = scattering::compose_full(row.RN, row.RD, row.lambda, eps);
                row.R = rt.R;
                row.T = rt.T;
                row.energy_defect = rt.energy_defect();
            }
            row.ok = true;
        } catch (const std::exception&) {
            row.ok = false; // recorded and skipped
        }
    });

    // Nearest-branch phase unwrapping.
    double prev_n = 0.0, prev_d = 0.0;
    bool first = true;
    for (auto& row : table.rows) {
        if (!row.ok) continue;
        const double raw_n = std::arg(row.RN);
        const double raw_d = opts.with_dirichlet ? std::arg(row.RD) : 0.0;
        if (first) {
            row.theta_n = raw_n;
            row.theta_d = raw_d;
            first = false;
        } else {
            row.theta_n = prev_n + principal_phase(raw_n - prev_n);
            row.theta_d = prev_d + principal_phase(raw_d - prev_d);
        }
        prev_n = row.theta_n;
        prev_d = row.theta_d;
    }

    // Flag the resonance window: |dtheta_n/dk| above 10x its median.
    std::vector<double> slope(table.rows.size(), 0.0);
    std::vector<double> sorted;
    for (std::size_t i = 0; i + 1 < table.rows.size(); ++i) {
        const auto &r0 = table.rows[i], &r1 = table.rows[i + 1];
        if (!r0.ok || !r1.ok) continue;
        slope[i] = std::abs((r1.theta_n - r0.theta_n) / (r1.k - r0.k));
        sorted.push_back(slope[i]);
    }
    if (!sorted.empty()) {
        std::sort(sorted.begin(), sorted.end());
        const double median = sorted[sorted.size() / 2];
        double wlo = 0.0, whi = 0.0;
        bool any = false;
        for (std::size_t i = 0; i + 1 < table.rows.size(); ++i) {
            if (slope[i] > 10.0 * median && median > 0.0) {
                table.rows[i].flagged = table.rows[i + 1].flagged = true;
                if (!any) wlo = table.rows[i].k;
                whi = table.rows[i + 1].k;
                any = true;
            }
        }
        if (any) table.flagged_window = {wlo, whi};
    }
    return table;
}

double window_winding(const SweepTable& table) {
    if (!table.flagged_window) return 0.0;
    double acc = 0.0;
    cd prev;
    bool first = true;
    for (const auto& row : table.rows) {
        if (!row.ok || !row.flagged) continue;
        if (!first) acc += principal_phase(std::arg(row.RN) - std::arg(prev));
        prev = row.RN;
        first = false;
    }
    return acc / (2.0 * kPi);
}

namespace {

RootResult find_phase_crossing(const PerturbationFamily& family, double eps, double k_lo,
                               double k_hi, const SweepOptions& opts, double offset,
                               bool target_reflection) {
    // Precondition at the unperturbed point: the two half reflections must
    // differ (by a sign for R-roots) for the winding argument to produce a
    // crossing.
    {
        HalfGuideSolver solver0(family.at(0.0), opts.h, opts.n_terms);
        const double lambda0 = family.k0 * family.k0;
        const cd rn0 = solver0.reflection(lambda0, geo::AbcKind::neumann);
        const cd rd0 = solver0.reflection(lambda0, geo::AbcKind::dirichlet);
        const double sep = target_reflection ? std::abs(rn0 + rd0) : std::abs(rn0 - rd0);
        if (sep < 5e-2)
            throw NotFoundError("sweep: unperturbed half reflections too close for a "
                                "guaranteed crossing (separation " +
                                std::to_string(sep) + ")");
    }

    const geo::WaveguideGeometry g = family.at(eps);
    HalfGuideSolver solver(g, opts.h, opts.n_terms);
    int evals = 0;
    auto mismatch = [&](double k) {
        const double lambda = k * k;
        const cd rn = solver.reflection(lambda, geo::AbcKind::neumann);
        const cd rd = solver.reflection(lambda, geo::AbcKind::dirichlet);
        ++evals;
        return principal_phase(std::arg(rn) - std::arg(rd) - offset);
    };

    // Scan for a sign change that is not a branch jump.
    const int n = 25;
    std::vector<double> ks(n), fs(n);
    std::ostringstream scan;
    scan << "k,phase_mismatch\n";
    for (int i = 0; i < n; ++i) {
        ks[i] = k_lo + (k_hi - k_lo) * i / (n - 1);
        fs[i] = mismatch(ks[i]);
        scan << ks[i] << "," << fs[i] << "\n";
    }
    int bracket = -1;
    for (int i = 0; i + 1 < n; ++i) {
        if (fs[i] == 0.0) bracket = i;
        if (fs[i] * fs[i + 1] < 0.0 && std::abs(fs[i + 1] - fs[i]) < kPi) {
            bracket = i;
            break;
        }
    }
    if (bracket < 0)
        throw NotFoundError("sweep: no phase crossing in the window", scan.str());

    const double k_star = brent(mismatch, ks[bracket], ks[bracket + 1], fs[bracket],
                                fs[bracket + 1], 1e-10, &evals);

    const double lambda = k_star * k_star;
    const cd rn = solver.reflection(lambda, geo::AbcKind::neumann);
    const cd rd = solver.reflection(lambda, geo::AbcKind::dirichlet);
    const auto rt = scattering::compose_full(rn, rd, lambda, eps);
    RootResult res;
    res.k_star = k_star;
    res.residual = target_reflection ? std::abs(rt.R) : std::abs(rt.T);
    res.evaluations = evals;
    if (res.residual > 1e-3)
        throw NotFoundError("sweep: crossing at k = " + std::to_string(k_star) +
                                " leaves residual " + std::to_string(res.residual),
                            scan.str());
    return res;
}

} // namespace

RootResult find_nonreflection(const PerturbationFamily& family, double eps, double k_lo,
                              double k_hi, const SweepOptions& opts) {
    return find_phase_crossing(family, eps, k_lo, k_hi, opts, kPi, true);
}

RootResult find_perfect_reflection(const PerturbationFamily& family, double eps,
                                   double k_lo, double k_hi, const SweepOptions& opts) {
    return find_phase_crossing(family, eps, k_lo, k_hi, opts, 0.0, false);
}

std::vector<WidthRow> width_scaling(const PerturbationFamily& family,
                                    const std::vector<double>& eps_list, double k_lo,
                                    double k_hi, const SweepOptions& opts) {
    for (std::size_t i = 0; i + 1 < eps_list.size(); ++i)
        if (!(eps_list[i] > eps_list[i + 1]) || !(eps_list.back() > 0.0))
            throw ConfigError("sweep: eps list must be positive decreasing");

    SweepOptions phase_only = opts;
    phase_only.with_dirichlet = false;

    std::vector<WidthRow> out;
    for (double eps : eps_list) {
        double lo = k_lo, hi = k_hi;
        SweepTable table = frequency_sweep(family, eps, lo, hi, 41, phase_only);
        for (int round = 0; round < 3; ++round) {
            if (!table.flagged_window)
                throw NotFoundError("sweep: resonance not resolved at eps = " +
                                    std::to_string(eps) +
                                    "; refine the window or the grid");
            const auto [wlo, whi] = *table.flagged_window;
            const double pad = 1.5 * (whi - wlo);
            lo = std::max(lo, wlo - pad);
            hi = std::min(hi, whi + pad);
            table = frequency_sweep(family, eps, lo, hi, 41, phase_only);
        }
        if (!table.flagged_window)
            throw NotFoundError("sweep: resonance lost during refinement at eps = " +
                                std::to_string(eps));

        // Winding-accumulation quantiles over the final fine grid.
        std::vector<double> lam, acc;
        double w = 0.0;
        cd prev;
        bool first = true;
        for (const auto& row : table.rows) {
            if (!row.ok) continue;
            if (!first) w += principal_phase(std::arg(row.RN) - std::arg(prev));
            prev = row.RN;
            first = false;
            lam.push_back(row.lambda);
            acc.push_back(w);
        }
        const double total = acc.back();
        auto crossing = [&](double frac) {
            const double target = frac * total;
            for (std::size_t i = 0; i + 1 < acc.size(); ++i) {
                if ((acc[i] - target) * (acc[i + 1] - target) <= 0.0 &&
                    acc[i + 1] != acc[i]) {
                    const double t = (target - acc[i]) / (acc[i + 1] - acc[i]);
                    return lam[i] + t * (lam[i + 1] - lam[i]);
                }
            }
            return lam.back();
        };
        WidthRow row;
        row.epsilon = eps;
        row.center_lambda = crossing(0.5);
        row.width_lambda = crossing(0.75) - crossing(0.25);
        out.push_back(row);
    }
    return out;
}

} // namespace fanoguide::sweep
