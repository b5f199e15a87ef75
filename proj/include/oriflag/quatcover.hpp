#pragma once

#include "oriflag/flagspec.hpp"
#include "oriflag/orthogonal.hpp"

#include <Eigen/Core>

#include <array>
#include <vector>

namespace oriflag {

/// Unit quaternion x + y i + z j + w k, |q| = 1 within 1e-12.
class UnitQuaternion {
public:
    static constexpr double kNormTol = 1e-12;

    UnitQuaternion(double x, double y, double z, double w);
    // Scales (x,y,z,w) to unit length; throws on a zero vector.
    static UnitQuaternion normalized(double x, double y, double z, double w);
    static UnitQuaternion one() { return {1, 0, 0, 0}; }
    static UnitQuaternion i() { return {0, 1, 0, 0}; }
    static UnitQuaternion j() { return {0, 0, 1, 0}; }
    static UnitQuaternion k() { return {0, 0, 0, 1}; }

    double x() const { return c_[0]; }
    double y() const { return c_[1]; }
    double z() const { return c_[2]; }
    double w() const { return c_[3]; }
    const std::array<double, 4>& coords() const { return c_; }

    UnitQuaternion conjugate() const { return {c_[0], -c_[1], -c_[2], -c_[3]}; }
    UnitQuaternion operator-() const { return {-c_[0], -c_[1], -c_[2], -c_[3]}; }
    double dot(const UnitQuaternion& o) const;

    // Hamilton product; renormalized so long chains stay on S^3.
    friend UnitQuaternion operator*(const UnitQuaternion& a, const UnitQuaternion& b);
    friend bool operator==(const UnitQuaternion&, const UnitQuaternion&) = default;

private:
    std::array<double, 4> c_;
};

/// (phi1, phi2, phi3) with x = cos phi1, y = sin phi1 cos phi2,
/// z = sin phi1 sin phi2 cos phi3, w = sin phi1 sin phi2 sin phi3.
struct Hyperspherical {
    double phi1;  // [0, pi]
    double phi2;  // [0, pi]
    double phi3;  // [0, 2 pi)
};

/// (alpha, theta1, theta2) with (x + y i, z + w i) = (cos alpha e^{i theta1}, sin alpha e^{i theta2}).
struct JoinCoords {
    double alpha;   // [0, pi/2]
    double theta1;  // (-pi, pi]
    double theta2;  // (-pi, pi]
};

/// q u q^{-1} for a unit 3-vector u (Rodrigues rotation by 2 theta about n for q = cos theta + sin theta n).
Eigen::Vector3d rotate_vector(const UnitQuaternion& q, const Eigen::Vector3d& u);

/// The rotation whose columns are rotate_vector(q, e_i). Even in q: R(q) == R(-q) bit for bit.
Rotation quaternion_to_rotation(const UnitQuaternion& q);
Eigen::Matrix3d quaternion_to_matrix(const UnitQuaternion& q);

/// Lift to the hemisphere x >= 0. On the boundary x = 0 the first nonzero
/// of (y, z, w) is made positive.
UnitQuaternion rotation_to_quaternion(const Rotation& r);

/// Great-circle distance on S^3, in [0, pi].
double sphere_distance(const UnitQuaternion& p, const UnitQuaternion& q);

/// Full preimage in S^3 of the coset R(q) SG_lambda^P, for lambda = (1,1,1):
/// { +-q g : g a lift of an isotropy element }. Ordered as +g, -g per element.
std::vector<UnitQuaternion> lifted_orbit(const FlagSpec& spec, const UnitQuaternion& q);

/// 2 * min over the two lifted orbits of the S^3 distance.
double lifted_quotient_distance(const FlagSpec& spec, const UnitQuaternion& p, const UnitQuaternion& q);

UnitQuaternion hyperspherical_to_cartesian(const Hyperspherical& h);
Hyperspherical cartesian_to_hyperspherical(const UnitQuaternion& q);

UnitQuaternion join_to_cartesian(const JoinCoords& j);
JoinCoords cartesian_to_join(const UnitQuaternion& q);

}  // namespace oriflag
