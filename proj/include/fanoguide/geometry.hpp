#pragma once

// Parameterized waveguide geometries on the reference strip R x (0,1) with
// Neumann walls: the straight strip (optionally with a smooth wall-profile
// perturbation), an L-shaped guide with a vertical side branch, and the strip
// with a circular non-penetrable inclusion.  All variants are straight beyond
// the abscissa d and are truncated at x = r_trunc for computations.

#include <Eigen/Dense>

#include <functional>
#include <string>

namespace fanoguide::geo {

/// Condition imposed on the artificial face Upsilon = {x = 0}.
/// `none` marks a full (two-sided) domain without an artificial face.
enum class AbcKind { neumann, dirichlet, none };

std::string to_string(AbcKind k);
AbcKind abc_from_string(const std::string& s);

/// Normal-displacement density H on a boundary arc; the perturbed wall is
/// displaced by eps*H(s) along the outward normal.  The arc is identified
/// by role rather than by coordinates.
struct ProfileH {
    enum class Arc { top_wall, branch_end, inclusion_circle };
    enum class Kind {
        zero,        ///< H = 0
        constant,    ///< H = value on the whole arc (exactly representable shifts)
        bump,        ///< smooth quartic bump: value * 16 t^2 (1-t)^2, t = (s-s0)/(s1-s0)
        rigid_vertical ///< H(s) = e_y . nu(s) on the circle: rigid vertical shift
    };
    Arc arc = Arc::top_wall;
    Kind kind = Kind::zero;
    double value = 0.0;        ///< amplitude for constant/bump
    double s0 = 0.0, s1 = 0.0; ///< support interval in arc parameter (bump/top_wall)

    double eval(double s) const;
    double deval(double s) const;
};

struct WaveguideGeometry {
    enum class Variant { straight, lshape, disk };

    Variant variant = Variant::straight;
    AbcKind abc = AbcKind::neumann;
    double d = 0.0;       ///< guide is the straight strip for x >= d
    double r_trunc = 0.0; ///< truncation abscissa, > d

    // lshape: vertical branch (0, branch_width) x (0, L), L > 1
    double branch_width = 0.0;
    double branch_height = 0.0;

    // disk: circular inclusion
    Eigen::Vector2d center{0.0, 0.0};
    double radius = 0.0;

    // straight with wall profile on y = 1
    ProfileH profile{};
    double profile_eps = 0.0;
};

/// Straight half-strip (0, r_trunc) x (0,1).
WaveguideGeometry make_straight(AbcKind abc, double r_trunc = 3.0);

/// Straight strip with wall profile displaced by eps*H on the top wall.
WaveguideGeometry make_straight_with_profile(AbcKind abc, const ProfileH& profile,
                                             double eps, double r_trunc = 3.0);

/// L-shaped half-guide: (0,inf) x (0,1) united with (0, branch_width) x (0, L).
WaveguideGeometry make_lshape(AbcKind abc, double branch_width, double L,
                              double r_trunc = 0.0);

/// Strip with a circular inclusion of radius 0.25 centered at (1, 0.5+eps).
WaveguideGeometry make_disk(AbcKind abc, double eps, double r_trunc = 0.0);

/// Displace the boundary of `base` by the profile eps*H.  Constant profiles on
/// the branch end and the rigid vertical shift of the circle are representable
/// exactly inside the geometry family; wall profiles on the straight variant
/// are stored for mesh-time node blending.
WaveguideGeometry displace_boundary(const WaveguideGeometry& base, const ProfileH& H,
                                    double eps);

/// Truncation abscissa satisfying alpha_m * R <= 8 for the augmented
/// radiation condition, while keeping R > d.
double resolve_r_trunc(const WaveguideGeometry& g, double alpha_m_max);

} // namespace fanoguide::geo
