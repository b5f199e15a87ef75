#include "oriflag/analytic.hpp"

#include "oriflag/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oriflag {

namespace {

constexpr double kPi = std::numbers::pi;

enum class Solved { SO3, Partial, Full, Sphere, Projective, Point };

Solved classify(const SpaceId& space) {
    if (const auto* so = std::get_if<SpecialOrthogonal>(&space)) {
        if (so->n == 3) return Solved::SO3;
        if (so->n == 1) return Solved::Point;
    } else if (const auto* fq = std::get_if<FiniteQuotient>(&space)) {
        if (fq->spec.lambda().parts() == std::vector<int>{1, 1, 1}) {
            switch (fq->spec.p().kind()) {
                case PartitionKind::Complete: return Solved::SO3;
                case PartitionKind::Proper: return Solved::Partial;
                case PartitionKind::Trivial: return Solved::Full;
            }
        }
    } else if (std::holds_alternative<Sphere2>(space)) {
        return Solved::Sphere;
    } else if (std::holds_alternative<ProjectivePlane2>(space)) {
        return Solved::Projective;
    } else if (std::holds_alternative<PointSpace>(space)) {
        return Solved::Point;
    }
    throw UnsupportedError("no analytic result for " + space_name(space));
}

// arctan(sec t), stable as cos t -> 0.
double arctan_sec(double t) { return std::atan2(1.0, std::cos(t)); }

QuadratureResult scaled(QuadratureResult r, double factor, double offset = 0.0) {
    r.value = offset + factor * r.value;
    r.abs_error_bound *= std::abs(factor);
    return r;
}

}  // namespace

std::string to_string(ClosedFormTag tag) {
    switch (tag) {
        case ClosedFormTag::TwoOverPiPlusPiOverTwo: return "2/pi + pi/2";
        case ClosedFormTag::PiOverTwo: return "pi/2";
        case ClosedFormTag::One: return "1";
        case ClosedFormTag::OnePlusPiOverFour: return "1 + pi/4";
        case ClosedFormTag::Zero: return "0";
        case ClosedFormTag::FullFlagQuadrature: return "full-flag-quadrature";
    }
    return "?";
}

ClosedForm analytic_expected_distance(const SpaceId& space, double tol) {
    const auto closed = [](ClosedFormTag tag, PiExpr expr) {
        const double v = expr.value();
        return ClosedForm{tag, std::move(expr), v, std::nullopt};
    };
    switch (classify(space)) {
        case Solved::SO3:
            return closed(ClosedFormTag::TwoOverPiPlusPiOverTwo,
                          PiExpr(2, -1) + PiExpr(Rational(1, 2), 1));
        case Solved::Partial:
            return closed(ClosedFormTag::OnePlusPiOverFour, PiExpr(1) + PiExpr(Rational(1, 4), 1));
        case Solved::Sphere: return closed(ClosedFormTag::PiOverTwo, PiExpr(Rational(1, 2), 1));
        case Solved::Projective: return closed(ClosedFormTag::One, PiExpr(1));
        case Solved::Point: return closed(ClosedFormTag::Zero, PiExpr());
        case Solved::Full: {
            const auto q = expected_distance_full_flag(tol);
            return ClosedForm{ClosedFormTag::FullFlagQuadrature, std::nullopt, q.value, q};
        }
    }
    throw UnsupportedError("no analytic result for " + space_name(space));
}

double full_flag_integrand(double phi3) {
    if (!(phi3 >= 0.0 && phi3 <= kPi / 4.0))
        throw std::domain_error("full_flag_integrand: phi3 must lie in [0, pi/4]");
    const double sec = 1.0 / std::cos(phi3);
    const double t = std::tan(arctan_sec(phi3) / 2.0);
    const double r = std::sqrt(1.0 + sec * sec);
    const double a = std::atan(r);
    return std::atan(t * t) - a * a / r;
}

QuadratureResult expected_distance_full_flag(double tol) {
    if (!(tol >= 1e-13)) throw std::invalid_argument("expected_distance_full_flag: tol must be >= 1e-13");
    const double factor = 96.0 / (kPi * kPi);
    return scaled(integrate(full_flag_integrand, 0.0, kPi / 4.0, tol / factor), factor, 1.5 * kPi);
}

QuadratureResult expected_distance_full_flag_hyperspherical(double tol) {
    const double factor = 48.0 / (2.0 * kPi * kPi);
    const auto r = integrate_3d(
        [](double, double phi2, double phi1) {
            const double s1 = std::sin(phi1);
            return 2.0 * phi1 * 8.0 * s1 * s1 * std::sin(phi2);
        },
        0.0, kPi / 4.0, [](double) { return 0.0; }, [](double phi3) { return arctan_sec(phi3); },
        [](double, double) { return 0.0; }, [](double, double phi2) { return arctan_sec(phi2); },
        tol / factor);
    return scaled(r, factor);
}

QuadratureResult expected_distance_full_flag_join(double tol) {
    const double factor = 4.0 / (2.0 * kPi * kPi);
    const auto r = integrate_3d(
        [](double, double theta1, double alpha) {
            const double ca = std::cos(alpha);
            const double d = std::acos(std::clamp(ca * std::cos(theta1), -1.0, 1.0));
            return 2.0 * d * 8.0 * ca * std::sin(alpha);
        },
        -kPi / 4.0, kPi / 4.0, [](double) { return -kPi / 4.0; }, [](double) { return kPi / 4.0; },
        [](double, double) { return 0.0; },
        [](double theta2, double theta1) { return std::atan2(std::cos(theta1), std::cos(theta2)); },
        tol / factor);
    return scaled(r, factor);
}

QuadratureResult expected_distance_partial_flag_integral(double tol) {
    if (!(tol >= 1e-12))
        throw std::invalid_argument("expected_distance_partial_flag_integral: tol must be >= 1e-12");
    const double factor = 16.0 / kPi;
    const auto r = integrate_2d(
        [](double theta1, double alpha) {
            const double ca = std::cos(alpha);
            return std::acos(std::clamp(ca * std::cos(theta1), -1.0, 1.0)) * ca * std::sin(alpha);
        },
        0.0, kPi / 4.0, [](double) { return 0.0; }, [](double) { return kPi / 2.0; }, tol / factor);
    return scaled(r, factor);
}

QuadratureResult numeric_volume(const SpaceId& space, double tol) {
    const auto zero1 = [](double) { return 0.0; };
    const auto zero2 = [](double, double) { return 0.0; };
    // 8 sin^2(phi1) sin(phi2), integrated with phi3 outermost and phi1 innermost.
    const auto so3_density = [](double, double phi2, double phi1) {
        const double s1 = std::sin(phi1);
        return 8.0 * s1 * s1 * std::sin(phi2);
    };
    const auto sphere_density = [](double, double phi) { return std::sin(phi); };

    switch (classify(space)) {
        case Solved::SO3:
            return integrate_3d(so3_density, 0.0, 2.0 * kPi, zero1, [](double) { return kPi; }, zero2,
                                [](double, double) { return kPi / 2.0; }, tol);
        case Solved::Partial:
            return scaled(integrate_3d(so3_density, 0.0, 2.0 * kPi, zero1,
                                       [](double) { return kPi / 2.0; }, zero2,
                                       [](double, double phi2) { return arctan_sec(phi2); }, tol / 2.0),
                          2.0);
        case Solved::Full:
            return scaled(integrate_3d(so3_density, 0.0, kPi / 4.0, zero1,
                                       [](double phi3) { return arctan_sec(phi3); }, zero2,
                                       [](double, double phi2) { return arctan_sec(phi2); },
                                       tol / 48.0),
                          48.0);
        case Solved::Sphere:
            return integrate_2d(sphere_density, 0.0, 2.0 * kPi, zero1, [](double) { return kPi; }, tol);
        case Solved::Projective:
            return integrate_2d(sphere_density, 0.0, 2.0 * kPi, zero1, [](double) { return kPi / 2.0; },
                                tol);
        case Solved::Point: break;
    }
    throw UnsupportedError("numeric_volume: no iterated integral for " + space_name(space));
}

}  // namespace oriflag
