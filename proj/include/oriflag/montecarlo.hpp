#pragma once

#include "oriflag/flagspec.hpp"
#include "oriflag/orthogonal.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace oriflag {

// ---------------------------------------------------------------------------
// Spaces

struct SpecialOrthogonal {
    int n = 3;
    friend bool operator==(const SpecialOrthogonal&, const SpecialOrthogonal&) = default;
};

/// SO(n) / SG_lambda^P with lambda = (1,...,1): a finite isotropy group.
struct FiniteQuotient {
    FlagSpec spec;
    friend bool operator==(const FiniteQuotient&, const FiniteQuotient&) = default;
};

struct Sphere2 {
    friend bool operator==(const Sphere2&, const Sphere2&) = default;
};

struct ProjectivePlane2 {
    friend bool operator==(const ProjectivePlane2&, const ProjectivePlane2&) = default;
};

/// SO(n)/SO(n): lambda = (n), a single point.
struct PointSpace {
    int n = 3;
    friend bool operator==(const PointSpace&, const PointSpace&) = default;
};

using SpaceId = std::variant<SpecialOrthogonal, FiniteQuotient, Sphere2, ProjectivePlane2, PointSpace>;

/// Maps a flag spec onto the space machinery that can sample it:
/// (1,...,1) -> FiniteQuotient; (n) -> PointSpace; (1,2)/(2,1) complete -> Sphere2,
/// trivial -> ProjectivePlane2. Anything else throws UnsupportedError.
SpaceId resolve_space(const FlagSpec& spec);

/// Accepts the aliases so3, soN, s2, rp2, full-flag, partial-flag-1/2/3, trivial-flag,
/// a "lambda=... P=..." spec, or its JSON form.
SpaceId parse_space(std::string_view text);

/// Stable display name: the alias when one exists, otherwise the spec text.
std::string space_name(const SpaceId& space);

/// The flag spec behind a space, when it has one.
std::optional<FlagSpec> space_flag_spec(const SpaceId& space);

// ---------------------------------------------------------------------------
// Statistics

/// Welford accumulator. merge() is Chan's pairwise update, so chunked runs can
/// be combined in a fixed order.
class RunningStats {
public:
    void push(double x);
    void merge(const RunningStats& other);

    std::uint64_t count() const { return count_; }
    double mean() const { return mean_; }
    // Sample variance (n - 1 denominator); 0 for fewer than two samples.
    double variance() const;
    double standard_error() const;

private:
    std::uint64_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

struct Estimate {
    double mean = 0.0;
    double standard_error = 0.0;
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;
};

struct EstimateOptions {
    std::uint64_t n_samples = 1'000'000;
    std::uint64_t seed = 1;
    int workers = 1;
    // Draw both points at random instead of fixing the second at the base point.
    bool two_point = false;
};

// ---------------------------------------------------------------------------
// Operations

/// min over h in H of d(a h, b): the distance between the cosets aH and bH.
double quotient_distance(const Rotation& a, const Rotation& b, const FiniteIsotropy& h);

/// v / |v| for a Gaussian 3-vector; returns false when |v| is too small to normalize.
bool normalize_sphere_sample(Eigen::Vector3d& v);
/// Uniform point on S^2 from three standard normals (rejecting near-zero draws).
Eigen::Vector3d sphere_point(RngStream& rng);
/// arccos(v . e3) and arccos|v . e3|.
double sphere_pole_distance(const Eigen::Vector3d& unit);
double projective_pole_distance(const Eigen::Vector3d& unit);

/// Sizes of the contiguous chunks N is split into: the first N % workers get one extra.
std::vector<std::uint64_t> chunk_sizes(std::uint64_t n_samples, int workers);

/// Per-sample distances drawn from RngStream(seed, chunk), in draw order.
/// Concatenating chunks 0..workers-1 (sized by chunk_sizes) reproduces the
/// samples behind estimate_expected_distance.
std::vector<double> sample_distances(const SpaceId& space, std::uint64_t count, std::uint64_t seed,
                                     std::uint64_t chunk, bool two_point = false);

/// Monte Carlo mean distance from a Haar-random point to the base point.
/// N is split into `workers` contiguous chunks, chunk i using RngStream(seed, i),
/// run on their own threads and merged in chunk order.
Estimate estimate_expected_distance(const SpaceId& space, const EstimateOptions& options);

}  // namespace oriflag
