#pragma once

// Transverse-mode catalogue for the unit strip with Neumann walls, the
// boundary symplectic pairing used to normalize modes, and the algebra
// connecting the usual and augmented scattering matrices.
//
// Conventions, for spectral parameter lambda in (pi^2 (m-1)^2, pi^2 m^2):
//   propagating  w_j^{+-} = a_j^{-1/2} e^{+-i alpha_j x} cos(pi j y),
//                alpha_j = sqrt(lambda - pi^2 j^2), a_0 = 2 alpha_0, a_j = alpha_j
//   evanescent   v_m^{+-} = a_m^{-1/2} e^{+- alpha_m x} cos(pi m y),
//                alpha_m = sqrt(pi^2 m^2 - lambda), a_m = alpha_m
//   wave packets w_m^{+-} = 2^{-1/2} (v_m^+ -+ i v_m^-)
// normalized so that q(w_j^s, w_k^s) = s*i*delta_jk and q(w_j^s, w_k^{-s}) = 0
// for the pairing q(u,v) = int_0^1 (dx u) conj(v) - u (dx conj(v)) dy.

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace fanoguide::modal {

using cd = std::complex<double>;

enum class Sign { plus, minus };

struct TransverseModeSet {
    double lambda = 0.0;        ///< spectral parameter (frequency squared)
    int m = 0;                  ///< first evanescent index: lambda in (pi^2(m-1)^2, pi^2 m^2)
    std::vector<double> alpha;  ///< alpha[j], j = 0..m
    std::vector<double> a;      ///< normalizations a[j], j = 0..m

    /// Decay rate of the j-th evanescent mode, j >= m.
    double beta(int j) const;
};

/// Build the mode catalogue at lambda. Throws on band edges lambda = (pi j)^2.
TransverseModeSet build_mode_set(double lambda);

/// w_j^{sign}(x, y) for j < m; the wave packet w_m^{sign} for j = m.
cd eval_mode(const TransverseModeSet& modes, int j, Sign sign, double x, double y);

/// Pure evanescent v_m^{sign}(x, y).
cd eval_packet_vm(const TransverseModeSet& modes, Sign sign, double x, double y);

/// d/dx of eval_mode / eval_packet_vm, used to sample mode traces.
cd eval_mode_dx(const TransverseModeSet& modes, int j, Sign sign, double x, double y);
cd eval_packet_vm_dx(const TransverseModeSet& modes, Sign sign, double x, double y);

/// A function trace on the segment {d} x (0,1), sampled at the nodes of a
/// composite Gauss rule together with its x-derivative samples.
struct ModeTrace {
    double d = 0.0;                 ///< abscissa of the segment
    std::vector<double> y;          ///< quadrature nodes in (0,1)
    std::vector<double> w;          ///< quadrature weights
    std::vector<cd> u;              ///< trace values
    std::vector<cd> du_dx;          ///< normal (x-) derivative values
};

/// Composite Gauss quadrature on (0,1): n_edges subintervals, pts points each.
void composite_gauss_grid(int n_edges, int pts, std::vector<double>& nodes,
                          std::vector<double>& weights);

/// Sample a mode (j <= m) on {d} x (0,1) with the given composite rule.
ModeTrace sample_mode_trace(const TransverseModeSet& modes, int j, Sign sign,
                            double d, int n_edges = 64, int pts = 4);

/// Symplectic pairing q(u, v) = int dx(u) conj(v) - u dx(conj(v)) dy.
/// Both traces must be sampled on the same grid.
cd symplectic_pairing(const ModeTrace& u, const ModeTrace& v);

struct ScatteringMatrix {
    Eigen::MatrixXcd entries;  ///< m x m
    double lambda = 0.0;
    double unitarity_defect = 0.0;  ///< ||S conj(S)^T - I||
    double symmetry_defect = 0.0;   ///< ||S - S^T||
};

struct AugmentedScatteringMatrix {
    Eigen::MatrixXcd entries;  ///< (m+1) x (m+1)
    double lambda = 0.0;
    double unitarity_defect = 0.0;
    double symmetry_defect = 0.0;

    int m() const { return static_cast<int>(entries.rows()) - 1; }
    Eigen::MatrixXcd block_bb() const { return entries.topLeftCorner(m(), m()); }
    Eigen::VectorXcd block_bm() const { return entries.topRightCorner(m(), 1); }
    Eigen::RowVectorXcd block_mb() const { return entries.bottomLeftCorner(1, m()); }
    cd s_mm() const { return entries(m(), m()); }
};

/// Measured defects of an arbitrary matrix, filled in by producers.
void measure_defects(const Eigen::MatrixXcd& s, double& unitarity, double& symmetry);

/// Reduction of the augmented matrix to the usual one:
///   s = S_bb - S_bm (1 + S_mm)^{-1} S_mb.
/// When |1 + S_mm| < 1e-8 the correction degenerates and S_bb is returned;
/// if the off block is too large for that to be consistent with unitarity,
/// an error is thrown.
ScatteringMatrix reduce_augmented(const AugmentedScatteringMatrix& S);

} // namespace fanoguide::modal
