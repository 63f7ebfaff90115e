#include "fanoguide/graph1d.hpp"

#include "fanoguide/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

namespace fanoguide::graph1d {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive_k(double k) {
    if (!(k > 0.0)) throw ConfigError("graph1d: wavenumber k must be positive");
}

// Junction system for the total field
//   lead:   e^{ikx} + R e^{-ikx},  edge2: A cos(k(y-1)),  edge3: B cos(k(x-1-eps)),
// continuity and flux balance at the origin, Neumann at the far ends.
Eigen::Matrix3cd junction_matrix(double epsilon, double k) {
    const cd i(0.0, 1.0);
    const double c1 = std::cos(k);
    const double ce = std::cos(k * (1.0 + epsilon));
    const double s1 = std::sin(k);
    const double se = std::sin(k * (1.0 + epsilon));
    Eigen::Matrix3cd m;
    m << cd(1.0), cd(-c1), cd(0.0),
         cd(0.0), cd(c1), cd(-ce),
         i, cd(s1), cd(se);
    return m;
}

} // namespace

cd reflection_closed_form(double epsilon, double k) {
    require_positive_k(k);
    const double a = std::cos(k) * std::cos(k * (1.0 + epsilon));
    const double b = std::sin(k * (2.0 + epsilon));
    // R = (a + ib)/(a - ib); when a and b both vanish the junction supports a
    // trapped mode and the limit value is -1 (the lead equation decouples).
    const double mag = std::hypot(a, b);
    if (mag < 1e-14) return cd(-1.0, 0.0);
    return cd(a, b) / cd(a, -b);
}

Junction1DSolution solve_junction(const Junction1DConfig& cfg) {
    require_positive_k(cfg.k);
    const Eigen::Matrix3cd m = junction_matrix(cfg.epsilon, cfg.k);
    Eigen::Vector3cd f;
    f << cd(-1.0), cd(0.0), cd(0.0, 1.0);

    const cd det = m.determinant();
    const double scale = m.cwiseAbs().maxCoeff();
    Junction1DSolution sol{};
    if (std::abs(det) < 1e-12 * scale) {
        // Singular junction: the amplitudes are defined only up to the trapped
        // mode, but R stays unique.
        sol.R = reflection_closed_form(cfg.epsilon, cfg.k);
        sol.A = cd(0.0);
        sol.B = cd(0.0);
        sol.is_resonant = true;
        return sol;
    }
    const Eigen::Vector3cd phi = m.partialPivLu().solve(f);
    sol.R = phi(0);
    sol.A = phi(1);
    sol.B = phi(2);
    sol.is_resonant = false;
    return sol;
}

cd mobius_limit(double mu) {
    if (!std::isfinite(mu)) throw ConfigError("graph1d: mu must be finite");
    const double t = 32.0 * mu - 4.0 * kPi;
    return cd(kPi * kPi, t) / cd(kPi * kPi, -t);
}

std::vector<PathPoint> path_limit_experiment(double lambda_lin, double mu,
                                             std::span<const double> eps_sequence) {
    if (eps_sequence.empty())
        throw ConfigError("graph1d: empty epsilon sequence");
    for (std::size_t i = 0; i + 1 < eps_sequence.size(); ++i)
        if (!(eps_sequence[i] > eps_sequence[i + 1]))
            throw ConfigError("graph1d: epsilon sequence must decrease strictly");
    if (!(eps_sequence.back() > 0.0))
        throw ConfigError("graph1d: epsilon sequence must stay positive");

    std::vector<PathPoint> out;
    out.reserve(eps_sequence.size());
    for (double eps : eps_sequence) {
        const double k = kPi / 2.0 + eps * lambda_lin + eps * eps * mu;
        out.push_back({eps, reflection_closed_form(eps, k)});
    }
    return out;
}

double TrappedMode1D::eval_edge2(double y) const { return std::sin(k * y); }
double TrappedMode1D::eval_edge3(double x) const { return -std::sin(k * x); }

std::optional<TrappedMode1D> trapped_mode_1d(double k) {
    if (!(k > 0.0)) throw ConfigError("graph1d: wavenumber k must be positive");
    // k in (2N+1) pi/2 <=> k/(pi/2) is an odd integer.
    const double q = k / (kPi / 2.0);
    const double rounded = std::round(q);
    if (std::abs(q - rounded) > 1e-9) return std::nullopt;
    const long n = static_cast<long>(rounded);
    if (n % 2 == 0) return std::nullopt;
    return TrappedMode1D{k};
}

} // namespace fanoguide::graph1d
