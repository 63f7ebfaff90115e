#pragma once

// Trapped-mode detection through the augmented scattering matrix: a trapped
// mode with slow decay exists exactly where S_mm = -1, so candidate parameters
// are located by minimizing |S_mm + 1| along a one-parameter family, and the
// normalized trapped field is read off the augmented solution Z_m.

#include "fanoguide/fem.hpp"

#include <functional>
#include <memory>

namespace fanoguide::trapped {

using cd = std::complex<double>;

/// One-parameter family of problems p -> (geometry, lambda).
struct ParamFamily {
    std::string name; ///< "L" (geometry parameter) or "k" (wavenumber)
    std::function<std::pair<geo::WaveguideGeometry, double>(double)> at;
};

/// L-shape family: branch height varies, lambda fixed at k0^2.
ParamFamily lshape_height_family(double k0, geo::AbcKind abc);
/// Disk family: geometry fixed (given eps), wavenumber varies.
ParamFamily disk_wavenumber_family(double eps, geo::AbcKind abc);

struct LocateOptions {
    double h = 0.02;
    int n_terms = 20;
    int scan_points = 21;
    double residual_tol = 1e-3;  ///< required |S_mm + 1| at the minimizer
    double param_tol = 1e-4;     ///< golden-section interval tolerance
};

struct TrappedModeRecord {
    double lambda0 = 0.0;       ///< spectral parameter of the trapped mode
    double param = 0.0;         ///< located family parameter
    double residual = 0.0;      ///< |S_mm + 1| at the minimizer
    double K = 0.0;             ///< slow-decay amplitude, > 0
    bool slow_decay_ok = true;  ///< false when |K| ~ 0 (analysis assumptions fail)
    fem::DiscreteField field;   ///< normalized trapped mode, ||u||_L2 = 1
    geo::WaveguideGeometry geometry;
    std::shared_ptr<geo::Mesh> mesh;
    std::shared_ptr<geo::PointLocator> locator;
};

/// Scan the window, golden-section the |S_mm + 1|^2 dip, and build the record.
/// Throws NotFoundError (with the scan table) when no dip is bracketed.
TrappedModeRecord locate_trapped(const ParamFamily& family, double window_lo,
                                 double window_hi, const LocateOptions& opts = {});

/// Slow-decay amplitude K: cos(pi m y) trace coefficient at abscissa x_e,
/// rescaled by e^{+alpha_m x_e}.  With `violation` null, |K| < 1e-6 throws.
double extract_K(const geo::Mesh& mesh, const geo::PointLocator& loc,
                 const fem::DiscreteField& field, double x_e,
                 bool* violation = nullptr);

} // namespace fanoguide::trapped
