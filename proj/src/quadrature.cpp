#include "oriflag/quadrature.hpp"

#include "oriflag/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace oriflag {

namespace {

// Kronrod abscissae on [-1, 1] (nonnegative half); odd indices are the Gauss points.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[static_cast<std::size_t>(j)];
        const double sum = f(center - dx) + f(center + dx);
        kronrod += kWgk[static_cast<std::size_t>(j)] * sum;
        if (j % 2 == 1) gauss += kWg[static_cast<std::size_t>(j / 2)] * sum;
    }
    const Segment seg{a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
    if (!std::isfinite(seg.value) || !std::isfinite(seg.error))
        throw ConvergenceError("integrate: integrand is not finite on [" + std::to_string(a) + ", " +
                               std::to_string(b) + "]");
    return seg;
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                           std::uint64_t max_evaluations) {
    if (!(abs_tol > 0.0)) throw std::invalid_argument("integrate: tolerance must be positive");
    if (!std::isfinite(a) || !std::isfinite(b)) throw std::invalid_argument("integrate: infinite bounds");
    if (a == b) return {};

    std::priority_queue<Segment> heap;
    Segment first = gauss_kronrod(f, a, b);
    std::uint64_t evaluations = 15;
    double total_value = first.value;
    double total_error = first.error;
    heap.push(first);

    while (total_error > abs_tol) {
        if (evaluations + 30 > max_evaluations)
            throw ConvergenceError("integrate: error estimate " + std::to_string(total_error) +
                                   " above tolerance " + std::to_string(abs_tol) + " after " +
                                   std::to_string(evaluations) + " evaluations");
        const Segment worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b))
            throw ConvergenceError("integrate: subinterval width reached machine precision");
        heap.pop();
        const Segment left = gauss_kronrod(f, worst.a, mid);
        const Segment right = gauss_kronrod(f, mid, worst.b);
        evaluations += 30;
        total_value += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum from the leaves to drop the drift of incremental updates.
    double value = 0.0, error = 0.0;
    while (!heap.empty()) {
        value += heap.top().value;
        error += heap.top().error;
        heap.pop();
    }
    return {value, error, evaluations};
}

QuadratureResult integrate_2d(const std::function<double(double, double)>& f, double a, double b,
                              const std::function<double(double)>& lo,
                              const std::function<double(double)>& hi, double abs_tol) {
    const double width = std::abs(b - a);
    const double inner_tol = abs_tol / 10.0 / std::max(width, 1.0);
    std::uint64_t evaluations = 0;
    double inner_error = 0.0;
    const auto outer = [&](double x) {
        const auto r = integrate([&](double y) { return f(x, y); }, lo(x), hi(x), inner_tol);
        evaluations += r.evaluations;
        inner_error = std::max(inner_error, r.abs_error_bound);
        return r.value;
    };
    auto result = integrate(outer, a, b, abs_tol - abs_tol / 10.0);
    result.abs_error_bound += inner_error * width;
    result.evaluations = evaluations;
    return result;
}

QuadratureResult integrate_3d(const std::function<double(double, double, double)>& f, double a, double b,
                              const std::function<double(double)>& lo1,
                              const std::function<double(double)>& hi1,
                              const std::function<double(double, double)>& lo2,
                              const std::function<double(double, double)>& hi2, double abs_tol) {
    const double width = std::abs(b - a);
    const double inner_tol = abs_tol / 10.0 / std::max(width, 1.0);
    std::uint64_t evaluations = 0;
    double inner_error = 0.0;
    const auto outer = [&](double x) {
        const auto r = integrate_2d([&](double y, double z) { return f(x, y, z); }, lo1(x), hi1(x),
                                    [&](double y) { return lo2(x, y); },
                                    [&](double y) { return hi2(x, y); }, inner_tol);
        evaluations += r.evaluations;
        inner_error = std::max(inner_error, r.abs_error_bound);
        return r.value;
    };
    auto result = integrate(outer, a, b, abs_tol - abs_tol / 10.0);
    result.abs_error_bound += inner_error * width;
    result.evaluations = evaluations;
    return result;
}

}  // namespace oriflag
