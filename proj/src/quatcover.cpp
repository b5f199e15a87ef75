#include "oriflag/quatcover.hpp"

#include "oriflag/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace oriflag {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHemisphereTieTol = 1e-14;

using Quat = std::array<double, 4>;

Quat hamilton(const Quat& a, const Quat& b) {
    return {a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
            a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
            a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
            a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
}

bool finite_all(std::initializer_list<double> values) {
    return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

// Maps atan2's closed endpoint -pi onto pi so the range is (-pi, pi].
double half_open_angle(double theta) { return theta <= -kPi ? kPi : theta; }

}  // namespace

// ---------------------------------------------------------------------------
// UnitQuaternion

UnitQuaternion::UnitQuaternion(double x, double y, double z, double w) : c_{x, y, z, w} {
    const double norm2 = x * x + y * y + z * z + w * w;
    if (!finite_all({x, y, z, w}) || !(std::abs(std::sqrt(norm2) - 1.0) <= kNormTol))
        throw std::invalid_argument("UnitQuaternion: |q| = " + std::to_string(std::sqrt(norm2)) +
                                    " is not 1");
}

UnitQuaternion UnitQuaternion::normalized(double x, double y, double z, double w) {
    const double norm = std::sqrt(x * x + y * y + z * z + w * w);
    if (!(norm > 0.0) || !std::isfinite(norm))
        throw std::invalid_argument("UnitQuaternion::normalized: zero or non-finite vector");
    return {x / norm, y / norm, z / norm, w / norm};
}

double UnitQuaternion::dot(const UnitQuaternion& o) const {
    return c_[0] * o.c_[0] + c_[1] * o.c_[1] + c_[2] * o.c_[2] + c_[3] * o.c_[3];
}

UnitQuaternion operator*(const UnitQuaternion& a, const UnitQuaternion& b) {
    const Quat p = hamilton(a.c_, b.c_);
    return UnitQuaternion::normalized(p[0], p[1], p[2], p[3]);
}

// ---------------------------------------------------------------------------
// Double cover

Eigen::Vector3d rotate_vector(const UnitQuaternion& q, const Eigen::Vector3d& u) {
    if (!(std::abs(u.norm() - 1.0) <= 1e-12))
        throw std::invalid_argument("rotate_vector: u must be a unit vector");
    const Quat pure{0.0, u.x(), u.y(), u.z()};
    const Quat out = hamilton(hamilton(q.coords(), pure), q.conjugate().coords());
    return {out[1], out[2], out[3]};
}

Eigen::Matrix3d quaternion_to_matrix(const UnitQuaternion& q) {
    const double x = q.x(), y = q.y(), z = q.z(), w = q.w();
    const double s = 2.0 / (x * x + y * y + z * z + w * w);
    Eigen::Matrix3d r;
    r << 1.0 - s * (z * z + w * w), s * (y * z - x * w), s * (y * w + x * z),
        s * (y * z + x * w), 1.0 - s * (y * y + w * w), s * (z * w - x * y),
        s * (y * w - x * z), s * (z * w + x * y), 1.0 - s * (y * y + z * z);
    return r;
}

Rotation quaternion_to_rotation(const UnitQuaternion& q) {
    return Rotation(Eigen::MatrixXd(quaternion_to_matrix(q)));
}

UnitQuaternion rotation_to_quaternion(const Rotation& rot) {
    if (rot.dim() != 3) throw std::invalid_argument("rotation_to_quaternion: needs a 3x3 rotation");
    const auto& r = rot.matrix();
    const double trace = r.trace();
    double x, y, z, w;
    // Branch on the largest of 4x^2, 4y^2, 4z^2, 4w^2 (up to a common offset).
    const double best = std::max({trace, r(0, 0), r(1, 1), r(2, 2)});
    if (best == trace) {
        x = std::sqrt(std::max(0.0, 1.0 + trace)) / 2.0;
        y = (r(2, 1) - r(1, 2)) / (4.0 * x);
        z = (r(0, 2) - r(2, 0)) / (4.0 * x);
        w = (r(1, 0) - r(0, 1)) / (4.0 * x);
    } else if (best == r(0, 0)) {
        y = std::sqrt(std::max(0.0, 1.0 + r(0, 0) - r(1, 1) - r(2, 2))) / 2.0;
        x = (r(2, 1) - r(1, 2)) / (4.0 * y);
        z = (r(0, 1) + r(1, 0)) / (4.0 * y);
        w = (r(0, 2) + r(2, 0)) / (4.0 * y);
    } else if (best == r(1, 1)) {
        z = std::sqrt(std::max(0.0, 1.0 - r(0, 0) + r(1, 1) - r(2, 2))) / 2.0;
        x = (r(0, 2) - r(2, 0)) / (4.0 * z);
        y = (r(0, 1) + r(1, 0)) / (4.0 * z);
        w = (r(1, 2) + r(2, 1)) / (4.0 * z);
    } else {
        w = std::sqrt(std::max(0.0, 1.0 - r(0, 0) - r(1, 1) + r(2, 2))) / 2.0;
        x = (r(1, 0) - r(0, 1)) / (4.0 * w);
        y = (r(0, 2) + r(2, 0)) / (4.0 * w);
        z = (r(1, 2) + r(2, 1)) / (4.0 * w);
    }

    bool flip = x < 0.0;
    if (std::abs(x) <= kHemisphereTieTol) {
        x = 0.0;
        flip = false;
        for (double v : {y, z, w}) {
            if (std::abs(v) > kHemisphereTieTol) {
                flip = v < 0.0;
                break;
            }
        }
    }
    if (flip) {
        x = -x;
        y = -y;
        z = -z;
        w = -w;
    }
    return UnitQuaternion::normalized(x, y, z, w);
}

double sphere_distance(const UnitQuaternion& p, const UnitQuaternion& q) {
    return std::acos(std::clamp(p.dot(q), -1.0, 1.0));
}

std::vector<UnitQuaternion> lifted_orbit(const FlagSpec& spec, const UnitQuaternion& q) {
    if (spec.lambda().parts() != std::vector<int>{1, 1, 1})
        throw UnsupportedError("lifted_orbit: only lambda = (1,1,1) lifts to S^3, got " +
                               spec.to_string());
    const auto group = isotropy_group(spec);
    std::vector<UnitQuaternion> orbit;
    orbit.reserve(2 * group.elements.size());
    for (const auto& h : group.elements) {
        // Right cosets A H lift to q g with g a lift of h.
        const UnitQuaternion lifted = q * rotation_to_quaternion(h);
        orbit.push_back(lifted);
        orbit.push_back(-lifted);
    }
    return orbit;
}

double lifted_quotient_distance(const FlagSpec& spec, const UnitQuaternion& p,
                                const UnitQuaternion& q) {
    const auto orbit_p = lifted_orbit(spec, p);
    const auto orbit_q = lifted_orbit(spec, q);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& a : orbit_p)
        for (const auto& b : orbit_q) best = std::min(best, sphere_distance(a, b));
    return 2.0 * best;
}

// ---------------------------------------------------------------------------
// Coordinates

UnitQuaternion hyperspherical_to_cartesian(const Hyperspherical& h) {
    if (!finite_all({h.phi1, h.phi2, h.phi3}) || h.phi1 < 0.0 || h.phi1 > kPi || h.phi2 < 0.0 ||
        h.phi2 > kPi || h.phi3 < 0.0 || h.phi3 >= 2.0 * kPi)
        throw std::invalid_argument("hyperspherical_to_cartesian: angles out of range");
    const double s1 = std::sin(h.phi1), s2 = std::sin(h.phi2);
    return UnitQuaternion::normalized(std::cos(h.phi1), s1 * std::cos(h.phi2),
                                      s1 * s2 * std::cos(h.phi3), s1 * s2 * std::sin(h.phi3));
}

Hyperspherical cartesian_to_hyperspherical(const UnitQuaternion& q) {
    const double zw = std::hypot(q.z(), q.w());
    const double yzw = std::hypot(q.y(), zw);
    double phi3 = std::atan2(q.w(), q.z());
    if (phi3 < 0.0) phi3 += 2.0 * kPi;
    if (phi3 >= 2.0 * kPi) phi3 = 0.0;
    return {std::atan2(yzw, q.x()), std::atan2(zw, q.y()), phi3};
}

UnitQuaternion join_to_cartesian(const JoinCoords& j) {
    if (!finite_all({j.alpha, j.theta1, j.theta2}) || j.alpha < 0.0 || j.alpha > kPi / 2.0 ||
        j.theta1 <= -kPi || j.theta1 > kPi || j.theta2 <= -kPi || j.theta2 > kPi)
        throw std::invalid_argument("join_to_cartesian: angles out of range");
    const double ca = std::cos(j.alpha), sa = std::sin(j.alpha);
    return UnitQuaternion::normalized(ca * std::cos(j.theta1), ca * std::sin(j.theta1),
                                      sa * std::cos(j.theta2), sa * std::sin(j.theta2));
}

JoinCoords cartesian_to_join(const UnitQuaternion& q) {
    return {std::atan2(std::hypot(q.z(), q.w()), std::hypot(q.x(), q.y())),
            half_open_angle(std::atan2(q.y(), q.x())), half_open_angle(std::atan2(q.w(), q.z()))};
}

}  // namespace oriflag
