#include "fanoguide/scattering.hpp"

#include "fanoguide/errors.hpp"

#include <cmath>
#include <numbers>

namespace fanoguide::scattering {

namespace {
constexpr double kPi = std::numbers::pi;
}

double principal_phase(double theta) {
    double t = std::remainder(theta, 2.0 * kPi);
    if (t >= kPi) t -= 2.0 * kPi; // remainder returns (-pi, pi]; map pi -> -pi
    return t;
}

cd half_guide_reflection(const HelmholtzOperator& op, double lambda, int n_terms) {
    if (!(lambda > 0.0 && lambda < kPi * kPi))
        throw ConfigError("scattering: half-guide reflection is monomode only");
    if (op.abc() == geo::AbcKind::none)
        throw ConfigError("scattering: half-guide solve needs an Upsilon condition");
    RadiationCondition rc{RadiationCondition::Kind::standard, n_terms};
    auto sys = op.factorize(lambda, rc);
    const fem::DiscreteField u = sys->solve_incident(0);
    const fem::ModalAmplitudes amp =
        sys->extract_amplitudes(u, HelmholtzOperator::System::Face::right);
    return amp.outgoing[0];
}

RTPair compose_full(cd RN, cd RD, double lambda, double epsilon) {
    if (std::abs(std::abs(RN) - 1.0) > 1e-2 || std::abs(std::abs(RD) - 1.0) > 1e-2)
        throw ConfigError("scattering: half-guide reflections are far from the unit "
                          "circle; refusing to compose");
    RTPair rt;
    rt.R = 0.5 * (RN + RD);
    rt.T = 0.5 * (RN - RD);
    rt.lambda = lambda;
    rt.epsilon = epsilon;
    rt.source = RTPair::Source::composed;
    return rt;
}

RTPair full_guide_solve(const HelmholtzOperator& full_op, double lambda, double epsilon,
                        int n_terms) {
    if (!(lambda > 0.0 && lambda < kPi * kPi))
        throw ConfigError("scattering: full-guide solve is monomode only");
    if (!full_op.has_left_face())
        throw ConfigError("scattering: full-guide solve needs a mirrored mesh with "
                          "two truncation faces");
    RadiationCondition rc{RadiationCondition::Kind::standard, n_terms};
    auto sys = full_op.factorize(lambda, rc);
    const fem::DiscreteField u = sys->solve_incident(0);
    const fem::ModalAmplitudes right =
        sys->extract_amplitudes(u, HelmholtzOperator::System::Face::right);
    const fem::ModalAmplitudes left =
        sys->extract_amplitudes(u, HelmholtzOperator::System::Face::left);
    RTPair rt;
    rt.R = right.outgoing[0]; // reflected wave travelling back to +infinity
    rt.T = left.incoming[0];  // transmitted continuation of w_0^-
    rt.lambda = lambda;
    rt.epsilon = epsilon;
    rt.source = RTPair::Source::direct;
    return rt;
}

} // namespace fanoguide::scattering
