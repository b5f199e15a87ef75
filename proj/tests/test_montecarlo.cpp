#include "oracles.hpp"

#include "oriflag/analytic.hpp"
#include "oriflag/errors.hpp"
#include "oriflag/montecarlo.hpp"

#include <doctest.h>

#include <cmath>

using namespace oriflag;

namespace {

constexpr double kPi = oracle::kPi;

FiniteIsotropy group_of(const char* p) {
    return isotropy_group(FlagSpec::parse(std::string("lambda=1,1,1 P=") + p));
}

}  // namespace

TEST_CASE("space names and resolution") {
    CHECK(std::holds_alternative<SpecialOrthogonal>(parse_space("so3")));
    CHECK(std::get<SpecialOrthogonal>(parse_space("so5")).n == 5);
    CHECK(std::holds_alternative<Sphere2>(parse_space("s2")));
    CHECK(std::holds_alternative<ProjectivePlane2>(parse_space("rp2")));
    CHECK(std::holds_alternative<PointSpace>(parse_space("trivial-flag")));
    CHECK(parse_space("lambda=1,1,1 P={1}{2,3}") == parse_space("partial-flag-1"));
    CHECK(parse_space(R"({"lambda":[1,1,1],"P":[[1,3],[2]]})") == parse_space("partial-flag-2"));
    CHECK(parse_space("lambda=1,1,1 P={1,2,3}") == parse_space("full-flag"));
    CHECK(parse_space("lambda=1,1,1 P={1}{2}{3}") == parse_space("so3"));
    CHECK(parse_space("lambda=1,2 P={1}{2}") == parse_space("s2"));
    CHECK(parse_space("lambda=2,1 P={1,2}") == parse_space("rp2"));
    CHECK(parse_space("lambda=3 P={1}") == parse_space("trivial-flag"));
    CHECK(std::holds_alternative<FiniteQuotient>(parse_space("lambda=1,1,1,1 P={1,2}{3,4}")));

    CHECK(space_name(parse_space("lambda=1,1,1 P={3}{1,2}")) == "partial-flag-3");
    CHECK(space_name(parse_space("so3")) == "so3");

    CHECK_THROWS_AS(parse_space("so3x"), ParseError);
    CHECK_THROWS_AS(parse_space("lambda=1,1 P={1}"), ParseError);
    CHECK_THROWS_AS(parse_space("lambda=2,2 P={1}{2}"), UnsupportedError);
}

TEST_CASE("quotient distance examples") {
    const auto klein = group_of("{1,2,3}");
    const auto p1 = group_of("{1}{2,3}");
    const auto id = Rotation::identity(3);
    CHECK(quotient_distance(id, id, klein) == 0.0);
    CHECK(quotient_distance(Rotation::diagonal({-1, -1, 1}), id, klein) <= 1e-15);
    const Rotation quarter(oracle::axis_angle(kPi / 2, Eigen::Vector3d(1, 0, 0)));
    CHECK(quotient_distance(quarter, id, p1) == doctest::Approx(kPi / 2).epsilon(1e-14));
    CHECK_THROWS_AS(quotient_distance(Rotation::identity(4), id, p1), std::invalid_argument);
}

TEST_CASE("quotient distance is well defined on cosets and symmetric") {
    RngStream rng(12, 0);
    for (const char* p : {"{1,2,3}", "{1}{2,3}", "{2}{1,3}", "{3}{1,2}"}) {
        const auto h = group_of(p);
        const auto brute = oracle::brute_isotropy(FlagSpec::parse(std::string("lambda=1,1,1 P=") + p).p().blocks(), 3);
        for (int s = 0; s < 1000; ++s) {
            const auto a = random_special_orthogonal(3, rng);
            const auto b = random_special_orthogonal(3, rng);
            const double d = quotient_distance(a, b, h);
            REQUIRE(std::abs(quotient_distance(b, a, h) - d) <= 1e-10);
            for (const auto& g : h.elements) {
                REQUIRE(std::abs(quotient_distance(a * g, b, h) - d) <= 1e-10);
                REQUIRE(std::abs(quotient_distance(a, b * g, h) - d) <= 1e-10);
            }
            REQUIRE(std::abs(d - oracle::brute_quotient_distance(a.matrix(), b.matrix(), brute)) <= 1e-7);
        }
    }
    // Larger finite quotients: lambda = (1,1,1,1).
    const auto h4 = isotropy_group(FlagSpec::parse("lambda=1,1,1,1 P={1,2}{3,4}"));
    for (int s = 0; s < 200; ++s) {
        const auto a = random_special_orthogonal(4, rng);
        const auto b = random_special_orthogonal(4, rng);
        const double d = quotient_distance(a, b, h4);
        REQUIRE(std::abs(quotient_distance(b, a, h4) - d) <= 1e-10);
        REQUIRE(d <= geodesic_distance(a, b) + 1e-12);
    }
}

TEST_CASE("sphere sampling") {
    Eigen::Vector3d v(0, 0, 5);
    REQUIRE(normalize_sphere_sample(v));
    CHECK(v == Eigen::Vector3d(0, 0, 1));
    CHECK(sphere_pole_distance(v) == 0.0);
    CHECK(sphere_pole_distance(Eigen::Vector3d(1, 0, 0)) == doctest::Approx(kPi / 2).epsilon(1e-15));
    CHECK(projective_pole_distance(Eigen::Vector3d(1, 0, 0)) == doctest::Approx(kPi / 2).epsilon(1e-15));
    CHECK(sphere_pole_distance(Eigen::Vector3d(0, 0, -1)) == doctest::Approx(kPi).epsilon(1e-15));
    CHECK(projective_pole_distance(Eigen::Vector3d(0, 0, -1)) == 0.0);
    Eigen::Vector3d tiny(1e-14, 0, 0);
    CHECK_FALSE(normalize_sphere_sample(tiny));
}

TEST_CASE("sphere points are uniform: octant counts") {
    RngStream rng(31, 0);
    const int n = 400'000;
    std::array<int, 8> counts{};
    for (int s = 0; s < n; ++s) {
        const auto v = sphere_point(rng);
        REQUIRE(std::abs(v.norm() - 1.0) <= 1e-12);
        counts[(v.x() > 0) | (v.y() > 0) << 1 | (v.z() > 0) << 2]++;
    }
    const double expected = n / 8.0;
    const double sigma = std::sqrt(n * (1.0 / 8) * (7.0 / 8));
    for (int c : counts) CHECK(std::abs(c - expected) <= 5 * sigma);
}

TEST_CASE("running statistics") {
    RngStream rng(1, 1);
    std::vector<double> xs;
    for (int i = 0; i < 10'001; ++i) xs.push_back(rng.gaussian() * 3 + 10);
    RunningStats all, left, right;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        all.push(xs[i]);
        (i < 3'333 ? left : right).push(xs[i]);
    }
    left.merge(right);
    const auto [mean, var] = oracle::mean_variance(xs);
    CHECK(all.count() == xs.size());
    CHECK(all.mean() == doctest::Approx(mean).epsilon(1e-13));
    CHECK(all.variance() == doctest::Approx(var).epsilon(1e-11));
    CHECK(left.mean() == doctest::Approx(mean).epsilon(1e-13));
    CHECK(left.variance() == doctest::Approx(var).epsilon(1e-11));
    CHECK(all.standard_error() == doctest::Approx(std::sqrt(var / xs.size())).epsilon(1e-11));

    RunningStats single, empty;
    single.push(4.0);
    CHECK(single.variance() == 0.0);
    single.merge(empty);
    CHECK(single.count() == 1);
    empty.merge(single);
    CHECK(empty.mean() == 4.0);
}

TEST_CASE("chunk sizes") {
    CHECK(chunk_sizes(10, 3) == std::vector<std::uint64_t>{4, 3, 3});
    CHECK(chunk_sizes(2, 4) == std::vector<std::uint64_t>{1, 1, 0, 0});
    CHECK(chunk_sizes(9, 1) == std::vector<std::uint64_t>{9});
    CHECK_THROWS_AS(chunk_sizes(9, 0), std::invalid_argument);
}

TEST_CASE("estimates are bit-exact for fixed seed and workers") {
    for (const char* name : {"so3", "partial-flag-2", "full-flag", "s2", "rp2", "so4"}) {
        const auto space = parse_space(name);
        for (int workers : {1, 3}) {
            const auto a = estimate_expected_distance(space, {20'000, 9, workers, false});
            const auto b = estimate_expected_distance(space, {20'000, 9, workers, false});
            REQUIRE(a.mean == b.mean);
            REQUIRE(a.standard_error == b.standard_error);
            REQUIRE(a.n_samples == 20'000);
            REQUIRE(a.seed == 9);
        }
    }
}

TEST_CASE("estimates are the chunk-ordered aggregate of the per-chunk samples") {
    const auto space = parse_space("partial-flag-1");
    const int workers = 3;
    const std::uint64_t n = 10'000;
    std::vector<double> all;
    const auto sizes = chunk_sizes(n, workers);
    for (int c = 0; c < workers; ++c) {
        const auto part = sample_distances(space, sizes[c], 5, c);
        all.insert(all.end(), part.begin(), part.end());
    }
    const auto est = estimate_expected_distance(space, {n, 5, workers, false});
    const auto [mean, var] = oracle::mean_variance(all);
    CHECK(est.mean == doctest::Approx(mean).epsilon(1e-13));
    CHECK(est.standard_error == doctest::Approx(std::sqrt(var / n)).epsilon(1e-10));
}

TEST_CASE("trivial flag has expected distance exactly zero") {
    const auto est = estimate_expected_distance(parse_space("trivial-flag"), {1000, 1, 2, false});
    CHECK(est.mean == 0.0);
    CHECK(est.standard_error == 0.0);
}

TEST_CASE("refinement monotonicity per sample") {
    const std::uint64_t n = 20'000;
    const auto so3 = sample_distances(parse_space("so3"), n, 3, 0);
    const auto full = sample_distances(parse_space("full-flag"), n, 3, 0);
    for (const char* p : {"partial-flag-1", "partial-flag-2", "partial-flag-3"}) {
        const auto partial = sample_distances(parse_space(p), n, 3, 0);
        for (std::uint64_t i = 0; i < n; ++i) {
            REQUIRE(full[i] <= partial[i]);
            REQUIRE(partial[i] <= so3[i]);
        }
    }
}

TEST_CASE("Monte Carlo agrees with the closed forms") {
    for (const char* name : {"so3", "partial-flag-1", "partial-flag-2", "partial-flag-3", "full-flag", "s2", "rp2"}) {
        const auto space = parse_space(name);
        const auto est = estimate_expected_distance(space, {100'000, 21, 2, false});
        const double ref = analytic_expected_distance(space).value;
        INFO(name);
        CHECK(std::abs(est.mean - ref) <= 5 * est.standard_error);
    }
}

TEST_CASE("two-point sampling agrees with the single-point reduction") {
    for (const char* name : {"so3", "partial-flag-1", "full-flag", "s2", "rp2"}) {
        const auto space = parse_space(name);
        const auto one = estimate_expected_distance(space, {100'000, 8, 1, false});
        const auto two = estimate_expected_distance(space, {100'000, 8, 1, true});
        INFO(name);
        CHECK(std::abs(one.mean - two.mean) <= 5 * std::hypot(one.standard_error, two.standard_error));
    }
}

TEST_CASE("higher-dimensional finite quotients sit below SO(n)") {
    const auto so4 = estimate_expected_distance(parse_space("so4"), {20'000, 4, 1, false});
    const auto flag4 = estimate_expected_distance(parse_space("lambda=1,1,1,1 P={1,2,3,4}"), {20'000, 4, 1, false});
    CHECK(flag4.mean < so4.mean);
    CHECK_THROWS_AS(estimate_expected_distance(parse_space("so3"), {0, 1, 1, false}), std::invalid_argument);
}
