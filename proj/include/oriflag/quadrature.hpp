#pragma once

#include <cstdint>
#include <functional>

namespace oriflag {

struct QuadratureResult {
    double value = 0.0;
    // Sum of |K15 - G7| over the final subintervals (plus nested-level allowances).
    double abs_error_bound = 0.0;
    std::uint64_t evaluations = 0;
};

inline constexpr std::uint64_t kDefaultQuadratureBudget = 4'000'000;

/// Globally adaptive 15-point Gauss-Kronrod: repeatedly bisects the subinterval
/// with the largest |K15 - G7| until the summed estimate is <= abs_tol.
/// Throws ConvergenceError when the evaluation budget runs out first or f is not finite.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                           std::uint64_t max_evaluations = kDefaultQuadratureBudget);

/// int_a^b int_{lo(x)}^{hi(x)} f(x, y) dy dx by nested adaptive rules. The inner
/// integrals get tol / 10 spread over the outer width.
QuadratureResult integrate_2d(const std::function<double(double, double)>& f, double a, double b,
                              const std::function<double(double)>& lo,
                              const std::function<double(double)>& hi, double abs_tol);

/// int_a^b int_{lo1(x)}^{hi1(x)} int_{lo2(x,y)}^{hi2(x,y)} f(x, y, z) dz dy dx.
QuadratureResult integrate_3d(const std::function<double(double, double, double)>& f, double a, double b,
                              const std::function<double(double)>& lo1,
                              const std::function<double(double)>& hi1,
                              const std::function<double(double, double)>& lo2,
                              const std::function<double(double, double)>& hi2, double abs_tol);

}  // namespace oriflag
