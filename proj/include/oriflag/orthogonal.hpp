#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <vector>

namespace oriflag {

/// A point of SO(n). Construction checks max|Q^T Q - I| <= 1e-12 and |det Q - 1| <= 1e-10.
class Rotation {
public:
    static constexpr double kOrthogonalityTol = 1e-12;
    static constexpr double kDeterminantTol = 1e-10;

    explicit Rotation(Eigen::MatrixXd entries);

    static Rotation identity(int n);
    static Rotation diagonal(const std::vector<int>& signs);

    const Eigen::MatrixXd& matrix() const { return q_; }
    int dim() const { return static_cast<int>(q_.rows()); }
    double operator()(int r, int c) const { return q_(r, c); }

    Rotation transpose() const { return Rotation(q_.transpose(), Unchecked{}); }

    // Products of rotations are rotations; roundoff stays far below the tolerances.
    friend Rotation operator*(const Rotation& a, const Rotation& b);

private:
    struct Unchecked {};
    Rotation(Eigen::MatrixXd entries, Unchecked) : q_(std::move(entries)) {}

    Eigen::MatrixXd q_;
};

/// Principal rotation angles in [0, pi], floor(n/2) of them, sorted ascending.
struct RotationAngles {
    std::vector<double> angles;
    // sqrt(sum psi_j^2), the geodesic distance to the identity.
    double norm() const;
};

/// Reproducible random stream. Equal (seed, stream) pairs replay the same draws;
/// the pair is hashed through seed_seq so neighbouring stream ids decorrelate.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    double gaussian() { return normal_(engine_); }
    std::mt19937_64& engine() { return engine_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

enum class Orthogonalization {
    Householder,          // QR with R-diagonal sign normalization
    ModifiedGramSchmidt,  // column-by-column, closest to the textbook RandSO
};

/// Haar-distributed sample of SO(n): orthonormalize an n x n Gaussian matrix,
/// then left-multiply by the row swap E_{1,2} if the determinant is -1.
Rotation random_special_orthogonal(int n, RngStream& rng,
                                   Orthogonalization method = Orthogonalization::Householder);

/// d(A, B) = sqrt(1/2 sum_k |log mu_k|^2) over the eigenvalues mu_k of A B^T.
double geodesic_distance(const Rotation& a, const Rotation& b);

/// Principal angles read off the 2x2 blocks of the real Schur form.
RotationAngles rotation_angles(const Rotation& a);

namespace detail {

// Max-abs deviation of Q^T Q from the identity.
double orthogonality_error(const Eigen::Ref<const Eigen::MatrixXd>& q);

// Fills an n x n matrix with independent standard normals, row-major draw order.
template <typename Matrix>
void fill_gaussian(Matrix& a, RngStream& rng) {
    for (Eigen::Index r = 0; r < a.rows(); ++r)
        for (Eigen::Index c = 0; c < a.cols(); ++c) a(r, c) = rng.gaussian();
}

// Haar sample into a preallocated square matrix (fixed or dynamic size).
template <typename Matrix>
void sample_special_orthogonal(Matrix& q, RngStream& rng, Orthogonalization method);

// Angles (unsorted, padded with zeros to floor(n/2)) of a special orthogonal matrix.
template <typename Matrix>
void principal_angles(const Matrix& a, std::vector<double>& out);

// sqrt(sum psi^2) for a special orthogonal matrix, without allocating for fixed sizes.
template <typename Matrix>
double distance_to_identity(const Matrix& a);

}  // namespace detail

}  // namespace oriflag
