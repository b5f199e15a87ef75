#pragma once

#include "oriflag/montecarlo.hpp"
#include "oriflag/pi_expr.hpp"
#include "oriflag/quadrature.hpp"

#include <optional>
#include <string>

namespace oriflag {

enum class ClosedFormTag {
    TwoOverPiPlusPiOverTwo,  // SO(3), oriented (1,1,1) flags
    PiOverTwo,               // S^2
    One,                     // RP^2
    OnePlusPiOverFour,       // partially oriented (1,1,1) flags
    Zero,                    // SO(3)/SO(3)
    FullFlagQuadrature,      // unoriented (1,1,1) flags; no closed form known
};

std::string to_string(ClosedFormTag tag);

struct ClosedForm {
    ClosedFormTag tag;
    // Present for every tag except FullFlagQuadrature.
    std::optional<PiExpr> exact;
    double value = 0.0;
    // Quadrature diagnostics for FullFlagQuadrature.
    std::optional<QuadratureResult> quadrature;
};

/// Exact expected distance between two random points of one of the solved spaces.
/// The full flag manifold dispatches to expected_distance_full_flag(tol).
ClosedForm analytic_expected_distance(const SpaceId& space, double tol = 1e-12);

/// arctan(tan^2(arctan(sec t) / 2)) - arctan^2(sqrt(1 + sec^2 t)) / sqrt(1 + sec^2 t), t in [0, pi/4].
double full_flag_integrand(double phi3);

/// 3 pi / 2 + (96 / pi^2) int_0^{pi/4} full_flag_integrand. Requires tol >= 1e-13.
QuadratureResult expected_distance_full_flag(double tol = 1e-12);

/// The same expectation as the 48-fold hyperspherical triple integral over the
/// simplex x >= y >= z >= w >= 0 (cross-check of the one-dimensional reduction).
QuadratureResult expected_distance_full_flag_hyperspherical(double tol = 1e-10);

/// The same expectation as the join-coordinate triple integral with
/// alpha in [0, arctan(cos theta1 / cos theta2)], |theta1|, |theta2| <= pi/4.
QuadratureResult expected_distance_full_flag_join(double tol = 1e-10);

/// (16 / pi) int_0^{pi/4} int_0^{pi/2} arccos(cos a cos t) cos a sin a da dt  (= 1 + pi/4).
QuadratureResult expected_distance_partial_flag_integral(double tol = 1e-10);

/// Iterated volume integral in hyperspherical (or spherical) coordinates for
/// SO(3), the partial and full (1,1,1) flags, S^2 and RP^2.
QuadratureResult numeric_volume(const SpaceId& space, double tol = 1e-9);

}  // namespace oriflag
