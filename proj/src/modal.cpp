#include "fanoguide/modal.hpp"

#include "fanoguide/errors.hpp"

#include <cmath>
#include <numbers>

namespace fanoguide::modal {

namespace {
constexpr double kPi = std::numbers::pi;
const cd kI(0.0, 1.0);
} // namespace

double TransverseModeSet::beta(int j) const {
    const double b2 = kPi * kPi * double(j) * double(j) - lambda;
    if (b2 <= 0.0) throw ConfigError("modal: beta requested for a propagating index");
    return std::sqrt(b2);
}

TransverseModeSet build_mode_set(double lambda) {
    if (!(lambda > 0.0)) throw ConfigError("modal: lambda must be positive");
    const double root = std::sqrt(lambda) / kPi;
    const double nearest = std::round(root);
    if (std::abs(lambda - kPi * kPi * nearest * nearest) <= 1e-10 * std::max(1.0, lambda))
        throw ConfigError("modal: lambda sits on a band edge (degenerate cutoff)");

    TransverseModeSet ms;
    ms.lambda = lambda;
    ms.m = static_cast<int>(std::floor(root)) + 1;
    ms.alpha.resize(ms.m + 1);
    ms.a.resize(ms.m + 1);
    for (int j = 0; j < ms.m; ++j) {
        ms.alpha[j] = std::sqrt(lambda - kPi * kPi * j * j);
        ms.a[j] = (j == 0) ? 2.0 * ms.alpha[j] : ms.alpha[j];
    }
    ms.alpha[ms.m] = std::sqrt(kPi * kPi * ms.m * ms.m - lambda);
    ms.a[ms.m] = ms.alpha[ms.m];
    return ms;
}

namespace {

void check_index(const TransverseModeSet& ms, int j) {
    if (j < 0 || j > ms.m) throw ConfigError("modal: mode index out of range");
}

} // namespace

cd eval_packet_vm(const TransverseModeSet& ms, Sign sign, double x, double y) {
    const double am = ms.alpha[ms.m];
    const double s = (sign == Sign::plus) ? 1.0 : -1.0;
    return std::exp(s * am * x) / std::sqrt(ms.a[ms.m]) * std::cos(kPi * ms.m * y);
}

cd eval_packet_vm_dx(const TransverseModeSet& ms, Sign sign, double x, double y) {
    const double am = ms.alpha[ms.m];
    const double s = (sign == Sign::plus) ? 1.0 : -1.0;
    return s * am * eval_packet_vm(ms, sign, x, y);
}

cd eval_mode(const TransverseModeSet& ms, int j, Sign sign, double x, double y) {
    check_index(ms, j);
    if (j == ms.m) {
        const cd vp = eval_packet_vm(ms, Sign::plus, x, y);
        const cd vm = eval_packet_vm(ms, Sign::minus, x, y);
        return (sign == Sign::plus) ? (vp - kI * vm) / std::sqrt(2.0)
                                    : (vp + kI * vm) / std::sqrt(2.0);
    }
    const double s = (sign == Sign::plus) ? 1.0 : -1.0;
    return std::exp(kI * (s * ms.alpha[j] * x)) / std::sqrt(ms.a[j]) * std::cos(kPi * j * y);
}

cd eval_mode_dx(const TransverseModeSet& ms, int j, Sign sign, double x, double y) {
    check_index(ms, j);
    if (j == ms.m) {
        const cd vp = eval_packet_vm_dx(ms, Sign::plus, x, y);
        const cd vm = eval_packet_vm_dx(ms, Sign::minus, x, y);
        return (sign == Sign::plus) ? (vp - kI * vm) / std::sqrt(2.0)
                                    : (vp + kI * vm) / std::sqrt(2.0);
    }
    const double s = (sign == Sign::plus) ? 1.0 : -1.0;
    return kI * (s * ms.alpha[j]) * eval_mode(ms, j, sign, x, y);
}

void composite_gauss_grid(int n_edges, int pts, std::vector<double>& nodes,
                          std::vector<double>& weights) {
    if (n_edges < 1 || pts < 1) throw ConfigError("modal: invalid quadrature spec");
    // Gauss-Legendre nodes on (-1, 1) for small fixed orders.
    static const std::vector<std::vector<double>> xs = {
        {0.0},
        {-0.5773502691896257, 0.5773502691896257},
        {-0.7745966692414834, 0.0, 0.7745966692414834},
        {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526},
        {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
         0.9061798459386640}};
    static const std::vector<std::vector<double>> ws = {
        {2.0},
        {1.0, 1.0},
        {0.5555555555555556, 0.8888888888888889, 0.5555555555555556},
        {0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538},
        {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
         0.2369268850561891}};
    if (pts > 5) throw ConfigError("modal: composite rule supports up to 5 points");

    nodes.clear();
    weights.clear();
    const double h = 1.0 / n_edges;
    for (int e = 0; e < n_edges; ++e) {
        const double a = e * h;
        for (int g = 0; g < pts; ++g) {
            nodes.push_back(a + 0.5 * h * (1.0 + xs[pts - 1][g]));
            weights.push_back(0.5 * h * ws[pts - 1][g]);
        }
    }
}

ModeTrace sample_mode_trace(const TransverseModeSet& ms, int j, Sign sign, double d,
                            int n_edges, int pts) {
    check_index(ms, j);
    ModeTrace t;
    t.d = d;
    composite_gauss_grid(n_edges, pts, t.y, t.w);
    t.u.resize(t.y.size());
    t.du_dx.resize(t.y.size());
    for (std::size_t i = 0; i < t.y.size(); ++i) {
        t.u[i] = eval_mode(ms, j, sign, d, t.y[i]);
        t.du_dx[i] = eval_mode_dx(ms, j, sign, d, t.y[i]);
    }
    return t;
}

cd symplectic_pairing(const ModeTrace& u, const ModeTrace& v) {
    if (u.y.size() != v.y.size()) throw ConfigError("modal: mismatched trace grids");
    for (std::size_t i = 0; i < u.y.size(); ++i)
        if (std::abs(u.y[i] - v.y[i]) > 1e-14)
            throw ConfigError("modal: mismatched trace grids");
    cd q(0.0);
    for (std::size_t i = 0; i < u.y.size(); ++i)
        q += u.w[i] * (u.du_dx[i] * std::conj(v.u[i]) - u.u[i] * std::conj(v.du_dx[i]));
    return q;
}

void measure_defects(const Eigen::MatrixXcd& s, double& unitarity, double& symmetry) {
    const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(s.rows(), s.cols());
    unitarity = (s * s.conjugate().transpose() - eye).norm();
    symmetry = (s - s.transpose()).norm();
}

ScatteringMatrix reduce_augmented(const AugmentedScatteringMatrix& S) {
    const int m = S.m();
    if (m < 1) throw ConfigError("modal: augmented matrix must be at least 2x2");

    const cd denom = 1.0 + S.s_mm();
    ScatteringMatrix out;
    out.lambda = S.lambda;
    if (std::abs(denom) < 1e-8) {
        const double off = S.block_bm().norm();
        // Unitarity forces ||S_bm||^2 <= 2 |1 + S_mm|; well beyond that the
        // input is inconsistent and the degenerate formula would be meaningless.
        if (off * off > 10.0 * std::abs(denom))
            throw ConfigError("modal: S_mm near -1 with non-small coupling block "
                              "(input violates unitarity)");
        out.entries = S.block_bb();
    } else {
        out.entries = S.block_bb() - (S.block_bm() * S.block_mb()) / denom;
    }
    measure_defects(out.entries, out.unitarity_defect, out.symmetry_defect);
    return out;
}

} // namespace fanoguide::modal
