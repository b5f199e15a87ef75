#include "oriflag/orthogonal.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace oriflag {

namespace {

std::seed_seq make_seed_seq(std::uint64_t seed, std::uint64_t stream) {
    const auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
    const auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
    return std::seed_seq{lo(seed), hi(seed), lo(stream), hi(stream), 0x6f726966u};
}

// Calls fn(angle) for every principal angle of a special orthogonal matrix
// (zeros for +1 eigenvalues are not reported).
template <typename Matrix, typename Fn>
void for_each_angle(const Matrix& a, Fn&& fn) {
    const Eigen::Index n = a.rows();
    if (n < 2) return;
    if (n == 2) {
        fn(std::atan2(std::abs(a(1, 0) - a(0, 1)) / 2.0, (a(0, 0) + a(1, 1)) / 2.0));
        return;
    }
    Eigen::RealSchur<Matrix> schur(a, /*computeU=*/false);
    const auto& t = schur.matrixT();
    int negatives = 0;
    Eigen::Index i = 0;
    while (i < n) {
        if (i + 1 < n && t(i + 1, i) != 0.0) {
            const double half_trace = (t(i, i) + t(i + 1, i + 1)) / 2.0;
            const double half_diff = (t(i, i) - t(i + 1, i + 1)) / 2.0;
            const double disc = half_diff * half_diff + t(i, i + 1) * t(i + 1, i);
            if (disc < 0.0) {
                fn(std::atan2(std::sqrt(-disc), half_trace));
            } else {
                const double root = std::sqrt(disc);
                negatives += (half_trace + root < 0.0) + (half_trace - root < 0.0);
            }
            i += 2;
        } else {
            negatives += t(i, i) < 0.0;
            i += 1;
        }
    }
    // Real eigenvalue -1 appears an even number of times in SO(n); each pair is one angle pi.
    for (int p = 0; p < (negatives + 1) / 2; ++p) fn(std::numbers::pi);
}

}  // namespace

// ---------------------------------------------------------------------------
// Rotation

Rotation::Rotation(Eigen::MatrixXd entries) : q_(std::move(entries)) {
    if (q_.rows() == 0 || q_.rows() != q_.cols())
        throw std::invalid_argument("Rotation: matrix must be square and non-empty");
    const double ortho = detail::orthogonality_error(q_);
    if (!(ortho <= kOrthogonalityTol))
        throw std::invalid_argument("Rotation: not orthogonal (max |Q^T Q - I| = " +
                                    std::to_string(ortho) + ")");
    const double det = q_.determinant();
    if (!(std::abs(det - 1.0) <= kDeterminantTol))
        throw std::invalid_argument("Rotation: determinant " + std::to_string(det) + " != 1");
}

Rotation Rotation::identity(int n) {
    if (n < 1) throw std::invalid_argument("Rotation::identity: n must be >= 1");
    return Rotation(Eigen::MatrixXd::Identity(n, n), Unchecked{});
}

Rotation Rotation::diagonal(const std::vector<int>& signs) {
    Eigen::VectorXd d(static_cast<Eigen::Index>(signs.size()));
    for (std::size_t i = 0; i < signs.size(); ++i) {
        if (signs[i] != 1 && signs[i] != -1)
            throw std::invalid_argument("Rotation::diagonal: entries must be +1 or -1");
        d(static_cast<Eigen::Index>(i)) = signs[i];
    }
    return Rotation(Eigen::MatrixXd(d.asDiagonal()));
}

Rotation operator*(const Rotation& a, const Rotation& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("Rotation product: dimension mismatch");
    return Rotation(a.q_ * b.q_, Rotation::Unchecked{});
}

double RotationAngles::norm() const {
    double s = 0.0;
    for (double psi : angles) s += psi * psi;
    return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// RngStream

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {
    auto seq = make_seed_seq(seed, stream);
    engine_.seed(seq);
}

// ---------------------------------------------------------------------------
// detail

namespace detail {

double orthogonality_error(const Eigen::Ref<const Eigen::MatrixXd>& q) {
    const Eigen::Index n = q.cols();
    return (q.transpose() * q - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
}

template <typename Matrix>
void sample_special_orthogonal(Matrix& q, RngStream& rng, Orthogonalization method) {
    const Eigen::Index n = q.rows();
    if (n == 1) {
        q(0, 0) = 1.0;
        return;
    }
    Matrix a(n, n);
    for (;;) {
        fill_gaussian(a, rng);
        bool degenerate = false;
        if (method == Orthogonalization::Householder) {
            Eigen::HouseholderQR<Matrix> qr(a);
            const auto diag = qr.matrixQR().diagonal();
            const double scale = diag.cwiseAbs().maxCoeff();
            degenerate = !(diag.cwiseAbs().minCoeff() > 1e-12 * scale);
            if (!degenerate) {
                q = qr.householderQ();
                for (Eigen::Index c = 0; c < n; ++c)
                    if (diag(c) < 0.0) q.col(c) *= -1.0;
            }
        } else {
            q = a;
            for (Eigen::Index j = 0; j < n && !degenerate; ++j) {
                // Two sweeps keep Q orthogonal to working precision on ill-conditioned draws.
                for (int sweep = 0; sweep < 2; ++sweep)
                    for (Eigen::Index i = 0; i < j; ++i) q.col(j) -= q.col(i).dot(q.col(j)) * q.col(i);
                const double norm = q.col(j).norm();
                degenerate = !(norm > 1e-12 * a.col(j).norm());
                if (!degenerate) q.col(j) /= norm;
            }
        }
        if (!degenerate) break;
    }
    if (q.determinant() < 0.0) q.row(0).swap(q.row(1));
}

template <typename Matrix>
void principal_angles(const Matrix& a, std::vector<double>& out) {
    out.clear();
    for_each_angle(a, [&](double psi) { out.push_back(psi); });
    out.resize(std::max<std::size_t>(out.size(), static_cast<std::size_t>(a.rows() / 2)), 0.0);
}

template <typename Matrix>
double distance_to_identity(const Matrix& a) {
    double s = 0.0;
    for_each_angle(a, [&](double psi) { s += psi * psi; });
    return std::sqrt(s);
}

template void sample_special_orthogonal(Eigen::Matrix3d&, RngStream&, Orthogonalization);
template void sample_special_orthogonal(Eigen::MatrixXd&, RngStream&, Orthogonalization);
template void principal_angles(const Eigen::Matrix3d&, std::vector<double>&);
template void principal_angles(const Eigen::MatrixXd&, std::vector<double>&);
template double distance_to_identity(const Eigen::Matrix3d&);
template double distance_to_identity(const Eigen::MatrixXd&);

}  // namespace detail

// ---------------------------------------------------------------------------
// Public operations

Rotation random_special_orthogonal(int n, RngStream& rng, Orthogonalization method) {
    if (n < 1) throw std::invalid_argument("random_special_orthogonal: n must be >= 1");
    if (n == 3) {
        Eigen::Matrix3d q;
        detail::sample_special_orthogonal(q, rng, method);
        return Rotation(Eigen::MatrixXd(q));
    }
    Eigen::MatrixXd q(n, n);
    detail::sample_special_orthogonal(q, rng, method);
    return Rotation(std::move(q));
}

double geodesic_distance(const Rotation& a, const Rotation& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("geodesic_distance: dimension mismatch (" +
                                    std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) +
                                    ")");
    if (a.dim() == 3) {
        const Eigen::Matrix3d m = a.matrix() * b.matrix().transpose();
        return detail::distance_to_identity(m);
    }
    const Eigen::MatrixXd m = a.matrix() * b.matrix().transpose();
    return detail::distance_to_identity(m);
}

RotationAngles rotation_angles(const Rotation& a) {
    RotationAngles out;
    detail::principal_angles(a.matrix(), out.angles);
    std::sort(out.angles.begin(), out.angles.end());
    return out;
}

}  // namespace oriflag
