#include "fanoguide/geometry.hpp"

#include "fanoguide/errors.hpp"

#include <cmath>

namespace fanoguide::geo {

std::string to_string(AbcKind k) {
    switch (k) {
    case AbcKind::neumann: return "neumann";
    case AbcKind::dirichlet: return "dirichlet";
    case AbcKind::none: return "none";
    }
    return "?";
}

AbcKind abc_from_string(const std::string& s) {
    if (s == "neumann") return AbcKind::neumann;
    if (s == "dirichlet") return AbcKind::dirichlet;
    if (s == "none") return AbcKind::none;
    throw ConfigError("geometry: unknown abc kind '" + s + "'");
}

double ProfileH::eval(double s) const {
    switch (kind) {
    case Kind::zero: return 0.0;
    case Kind::constant: return value;
    case Kind::bump: {
        if (s <= s0 || s >= s1) return 0.0;
        const double t = (s - s0) / (s1 - s0);
        const double u = t * (1.0 - t);
        return value * 16.0 * u * u;
    }
    case Kind::rigid_vertical:
        // On the circle the outward normal of the domain points towards the
        // center; with polar angle s (radians) this gives H = -sin(s).
        return -std::sin(s);
    }
    return 0.0;
}

double ProfileH::deval(double s) const {
    switch (kind) {
    case Kind::zero:
    case Kind::constant: return 0.0;
    case Kind::bump: {
        if (s <= s0 || s >= s1) return 0.0;
        const double w = s1 - s0;
        const double t = (s - s0) / w;
        return value * 32.0 * t * (1.0 - t) * (1.0 - 2.0 * t) / w;
    }
    case Kind::rigid_vertical: return -std::cos(s);
    }
    return 0.0;
}

namespace {

void check_truncation(const WaveguideGeometry& g) {
    if (!(g.r_trunc > g.d))
        throw ConfigError("geometry: r_trunc must exceed the straight abscissa d");
}

} // namespace

WaveguideGeometry make_straight(AbcKind abc, double r_trunc) {
    WaveguideGeometry g;
    g.variant = WaveguideGeometry::Variant::straight;
    g.abc = abc;
    g.d = 0.5;
    g.r_trunc = r_trunc;
    check_truncation(g);
    return g;
}

WaveguideGeometry make_straight_with_profile(AbcKind abc, const ProfileH& profile,
                                             double eps, double r_trunc) {
    if (profile.arc != ProfileH::Arc::top_wall)
        throw ConfigError("geometry: straight variant takes a top-wall profile");
    if (profile.kind == ProfileH::Kind::bump && !(profile.s0 < profile.s1))
        throw ConfigError("geometry: empty profile support");
    WaveguideGeometry g;
    g.variant = WaveguideGeometry::Variant::straight;
    g.abc = abc;
    g.profile = profile;
    g.profile_eps = eps;

    // Displacement bounds: the arc must stay clear of the opposite wall and of
    // the node-blending band, and may not reach the truncation face.
    double hmax = 0.0;
    for (int i = 0; i <= 200; ++i) {
        const double s = profile.s0 + (profile.s1 - profile.s0) * i / 200.0;
        hmax = std::max(hmax, std::abs(eps * profile.eval(s)));
    }
    if (hmax > 0.19)
        throw ConfigError("geometry: wall displacement too large (collides with "
                          "blending band)");
    g.d = (profile.kind == ProfileH::Kind::zero || eps == 0.0) ? 0.5
                                                               : std::max(0.5, profile.s1);
    g.r_trunc = r_trunc;
    check_truncation(g);
    return g;
}

WaveguideGeometry make_lshape(AbcKind abc, double branch_width, double L,
                              double r_trunc) {
    if (!(branch_width > 0.0)) throw ConfigError("geometry: branch width must be positive");
    if (!(L > 1.0)) throw ConfigError("geometry: branch height L must exceed 1");
    WaveguideGeometry g;
    g.variant = WaveguideGeometry::Variant::lshape;
    g.abc = abc;
    g.branch_width = branch_width;
    g.branch_height = L;
    g.d = branch_width;
    g.r_trunc = (r_trunc > 0.0) ? r_trunc : branch_width + 2.0;
    check_truncation(g);
    return g;
}

WaveguideGeometry make_disk(AbcKind abc, double eps, double r_trunc) {
    WaveguideGeometry g;
    g.variant = WaveguideGeometry::Variant::disk;
    g.abc = abc;
    g.center = Eigen::Vector2d(1.0, 0.5 + eps);
    g.radius = 0.25;
    if (g.radius + std::abs(eps) >= 0.5 - 0.02)
        throw ConfigError("geometry: inclusion touches the walls");
    g.d = g.center.x() + g.radius;
    g.r_trunc = (r_trunc > 0.0) ? r_trunc : g.d + 2.0;
    check_truncation(g);
    return g;
}

WaveguideGeometry displace_boundary(const WaveguideGeometry& base, const ProfileH& H,
                                    double eps) {
    if (eps == 0.0 || H.kind == ProfileH::Kind::zero) return base;

    switch (base.variant) {
    case WaveguideGeometry::Variant::lshape:
        if (H.arc == ProfileH::Arc::branch_end && H.kind == ProfileH::Kind::constant)
            // Displacing the branch-end wall by a constant is exactly the
            // longer branch.
            return make_lshape(base.abc, base.branch_width,
                               base.branch_height + eps * H.value, base.r_trunc);
        throw ConfigError("geometry: unsupported profile for the L-shape variant");
    case WaveguideGeometry::Variant::disk:
        if (H.arc == ProfileH::Arc::inclusion_circle &&
            H.kind == ProfileH::Kind::rigid_vertical)
            return make_disk(base.abc, (base.center.y() - 0.5) + eps, base.r_trunc);
        throw ConfigError("geometry: unsupported profile for the disk variant");
    case WaveguideGeometry::Variant::straight: {
        if (H.arc != ProfileH::Arc::top_wall)
            throw ConfigError("geometry: straight variant takes a top-wall profile");
        if (base.profile_eps != 0.0 && base.profile.kind != ProfileH::Kind::zero)
            throw ConfigError("geometry: straight variant already carries a profile");
        return make_straight_with_profile(base.abc, H, eps, base.r_trunc);
    }
    }
    throw ConfigError("geometry: unknown variant");
}

double resolve_r_trunc(const WaveguideGeometry& g, double alpha_m_max) {
    if (!(alpha_m_max > 0.0)) throw ConfigError("geometry: alpha_m must be positive");
    const double cap = 8.0 / alpha_m_max;
    const double lo = g.d + 0.5;
    if (cap < lo)
        throw ConfigError("geometry: cannot satisfy alpha_m * R <= 8 with R > d");
    return std::min(g.d + 2.0, cap);
}

} // namespace fanoguide::geo
