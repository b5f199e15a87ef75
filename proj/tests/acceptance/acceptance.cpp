// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "../oracles.hpp"

#include "oriflag/analytic.hpp"
#include "oriflag/cli.hpp"
#include "oriflag/flagspec.hpp"
#include "oriflag/montecarlo.hpp"
#include "oriflag/quatcover.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

using namespace oriflag;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kSeed = 20260101;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* pattern, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

FlagSpec flag(const std::string& p) { return FlagSpec::parse("lambda=1,1,1 P=" + p); }

UnitQuaternion random_quaternion(RngStream& rng) {
    while (true) {
        const double x = rng.gaussian(), y = rng.gaussian(), z = rng.gaussian(), w = rng.gaussian();
        if (x * x + y * y + z * z + w * w > 1e-12) return UnitQuaternion::normalized(x, y, z, w);
    }
}

Outcome quadrature() {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    std::ostringstream out, err;
    const int code = run_cli({"oriflag", "expected", "--space", "full-flag", "--mode", "quadrature", "--tol", "1e-12"},
                             out, err);
    const double elapsed = seconds_since(start);
    o.require(code == 0, "exit code " + std::to_string(code));
    if (code != 0) return o;
    const double value = nlohmann::json::parse(out.str())["value"].get<double>();
    const double error = std::abs(value - 1.3117250347224445929);
    o.require(error <= 1e-10, fmt("|value - reference| = %.3g", error));
    o.require(elapsed < 1.0, fmt("runtime %.3f s", elapsed));
    o.detail += o.pass ? fmt("value %.17g, error %.2g, %.3f s", value, error, elapsed) : "";
    return o;
}

Outcome closed_forms() {
    Outcome o;
    const PiExpr so3 = PiExpr(2, -1) + PiExpr(Rational(1, 2), 1);
    const PiExpr partial = PiExpr(1) + PiExpr(Rational(1, 4), 1);
    const std::vector<std::pair<std::string, PiExpr>> cases = {
        {"so3", so3},
        {"s2", PiExpr(Rational(1, 2), 1)},
        {"rp2", PiExpr(1)},
        {"partial-flag-1", partial},
        {"partial-flag-2", partial},
        {"partial-flag-3", partial},
        {"trivial-flag", PiExpr()},
    };
    for (const auto& [name, expected] : cases) {
        const auto cf = analytic_expected_distance(parse_space(name));
        o.require(cf.exact && *cf.exact == expected, name + " is not " + expected.to_string());
        std::ostringstream out, err;
        run_cli({"oriflag", "expected", "--space", name, "--mode", "analytic"}, out, err);
        const auto j = nlohmann::json::parse(out.str());
        o.require(j["symbolic"] == expected.to_string(), name + " CLI symbolic mismatch");
    }
    if (o.pass) o.detail = "7 spaces symbolically equal";
    return o;
}

Outcome monte_carlo() {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    std::string summary;
    for (const char* name : {"so3", "s2", "rp2", "partial-flag-1", "full-flag"}) {
        const auto space = parse_space(name);
        const auto est = estimate_expected_distance(space, {1'000'000, kSeed, 1, false});
        const double ref = analytic_expected_distance(space).value;
        const double err = std::abs(est.mean - ref);
        o.require(err <= 5 * est.standard_error,
                  std::string(name) + fmt(" |mean - ref| = %.3g > 5 stderr (%.3g)", err, 5 * est.standard_error));
        o.require(est.standard_error <= 2e-3, std::string(name) + fmt(" stderr %.3g", est.standard_error));
        summary += std::string(summary.empty() ? "" : ", ") + name + fmt(" %.2f sigma", err / est.standard_error);
    }
    const double elapsed = seconds_since(start);
    o.require(elapsed <= 60.0, fmt("runtime %.1f s", elapsed));
    if (o.pass) o.detail = summary + fmt(", %.1f s total", elapsed);
    return o;
}

Outcome volumes() {
    Outcome o;
    const std::vector<std::pair<std::string, PiExpr>> exact = {
        {"lambda=1,1,1 P={1}{2}{3}", PiExpr(8, 2)}, {"lambda=1,1,1 P={1}{2,3}", PiExpr(4, 2)},
        {"lambda=1,1,1 P={1,2,3}", PiExpr(2, 2)},   {"lambda=1,2 P={1}{2}", PiExpr(4, 1)},
        {"lambda=1,2 P={1,2}", PiExpr(2, 1)},        {"lambda=3 P={1}", PiExpr(1)},
    };
    for (const auto& [text, expected] : exact) {
        const auto v = flag_volume(FlagSpec::parse(text));
        o.require(v == expected, text + " gives " + v.to_string());
    }
    double worst = 0;
    for (const auto& [name, expected] : std::vector<std::pair<std::string, double>>{
             {"so3", 8 * kPi * kPi}, {"partial-flag-1", 4 * kPi * kPi}, {"full-flag", 2 * kPi * kPi}}) {
        const double rel = std::abs(numeric_volume(parse_space(name)).value - expected) / expected;
        worst = std::max(worst, rel);
        o.require(rel <= 1e-6, name + fmt(" relative error %.3g", rel));
    }
    if (o.pass) o.detail = fmt("6 symbolic volumes exact, worst numeric relative error %.2g", worst);
    return o;
}

Outcome oracle_equivalence() {
    Outcome o;
    RngStream rng(kSeed, 5);
    double worst = 0;
    for (const char* p : {"{1}{2}{3}", "{1}{2,3}", "{2}{1,3}", "{3}{1,2}", "{1,2,3}"}) {
        const auto spec = flag(p);
        const auto group = isotropy_group(spec);
        for (int s = 0; s < 1000; ++s) {
            const auto a = random_special_orthogonal(3, rng);
            const auto b = random_special_orthogonal(3, rng);
            const double eigen = quotient_distance(a, b, group);
            const double lifted = lifted_quotient_distance(spec, rotation_to_quaternion(a), rotation_to_quaternion(b));
            worst = std::max(worst, std::abs(eigen - lifted));
        }
    }
    o.require(worst <= 1e-9, fmt("max discrepancy %.3g", worst));
    if (o.pass) o.detail = fmt("5 x 1000 pairs, max discrepancy %.2g", worst);
    return o;
}

Outcome property_suites() {
    Outcome o;

    // Metric axioms.
    for (int n : {3, 5}) {
        RngStream rng(kSeed, 10 + n);
        double worst_inv = 0, worst_sym = 0, worst_self = 0, worst_tri = -1e9;
        for (int s = 0; s < 1000; ++s) {
            const auto g = random_special_orthogonal(n, rng);
            const auto a = random_special_orthogonal(n, rng);
            const auto b = random_special_orthogonal(n, rng);
            const auto c = random_special_orthogonal(n, rng);
            const double dab = geodesic_distance(a, b);
            worst_inv = std::max(worst_inv, std::abs(geodesic_distance(g * a, g * b) - dab));
            worst_sym = std::max(worst_sym, std::abs(geodesic_distance(b, a) - dab));
            worst_self = std::max(worst_self, geodesic_distance(a, a));
            worst_tri = std::max(worst_tri, geodesic_distance(a, c) - dab - geodesic_distance(b, c));
        }
        o.require(worst_inv <= 1e-10, fmt("SO(%g) left invariance %.3g", n, worst_inv));
        o.require(worst_sym <= 1e-10, fmt("SO(%g) symmetry %.3g", n, worst_sym));
        o.require(worst_self <= 1e-10, fmt("SO(%g) d(A,A) %.3g", n, worst_self));
        if (n == 3) o.require(worst_tri <= 1e-9, fmt("triangle inequality excess %.3g", worst_tri));
    }

    // Haar angle distribution.
    {
        RngStream rng(kSeed, 20);
        std::vector<double> angles;
        const int n = 1'000'000;
        angles.reserve(n);
        for (int s = 0; s < n; ++s)
            angles.push_back(geodesic_distance(random_special_orthogonal(3, rng), Rotation::identity(3)));
        const double d = oracle::ks_statistic(std::move(angles), oracle::haar_so3_angle_cdf);
        o.require(d < 1.95 / std::sqrt(double(n)), fmt("KS statistic %.3g", d));
    }

    // Conjugation involution.
    for (int n = 1; n <= 12; ++n)
        for (const auto& lambda : oracle::partitions(n)) {
            const auto c = conjugate_partition(lambda);
            if (conjugate_partition(c) != lambda || c != oracle::transpose_young(lambda))
                o.require(false, "conjugation fails at n = " + std::to_string(n));
        }

    // Covering multiplicities.
    for (int k = 1; k <= 5; ++k) {
        const auto all = oracle::set_partitions(k);
        for (const auto& coarse : all)
            for (const auto& fine : all) {
                const SetPartition p(coarse, k), q(fine, k);
                if (!q.refines(p)) continue;
                const auto m = covering_multiplicity(p, q);
                const OrderedPartition ones(std::vector<int>(k, 1));
                const bool ok = m == (std::uint64_t{1} << (q.block_count() - p.block_count())) &&
                                flag_volume(FlagSpec(ones, q)) == flag_volume(FlagSpec(ones, p)) * PiExpr(Rational(m));
                if (!ok) o.require(false, "covering multiplicity fails for k = " + std::to_string(k));
            }
    }

    // Coordinate roundtrips and the double cover.
    {
        oracle::AxisAngleDraw draw(kSeed);
        double worst_h = 0, worst_j = 0;
        for (int s = 0; s < 1000; ++s) {
            const Hyperspherical h{draw.uniform(1e-3, kPi - 1e-3), draw.uniform(1e-3, kPi - 1e-3),
                                   draw.uniform(1e-3, 2 * kPi - 1e-3)};
            const auto hb = cartesian_to_hyperspherical(hyperspherical_to_cartesian(h));
            worst_h = std::max({worst_h, std::abs(hb.phi1 - h.phi1), std::abs(hb.phi2 - h.phi2),
                                std::abs(hb.phi3 - h.phi3)});
            const JoinCoords j{draw.uniform(1e-3, kPi / 2 - 1e-3), draw.uniform(-kPi + 1e-3, kPi),
                               draw.uniform(-kPi + 1e-3, kPi)};
            const auto jb = cartesian_to_join(join_to_cartesian(j));
            worst_j = std::max({worst_j, std::abs(jb.alpha - j.alpha), std::abs(jb.theta1 - j.theta1),
                                std::abs(jb.theta2 - j.theta2)});
        }
        o.require(worst_h <= 1e-12, fmt("hyperspherical roundtrip %.3g", worst_h));
        o.require(worst_j <= 1e-12, fmt("join roundtrip %.3g", worst_j));

        RngStream rng(kSeed, 30);
        double worst_cover = 0;
        for (int s = 0; s < 1000; ++s) {
            const auto q = random_quaternion(rng);
            const double d = sphere_distance(UnitQuaternion::one(), q);
            worst_cover = std::max(worst_cover, std::abs(geodesic_distance(quaternion_to_rotation(q),
                                                                           Rotation::identity(3)) -
                                                         2 * std::min(d, kPi - d)));
        }
        o.require(worst_cover <= 1e-10, fmt("double-cover scaling %.3g", worst_cover));
    }

    // Reproducibility.
    for (const char* name : {"so3", "partial-flag-1", "full-flag", "s2", "rp2"})
        for (int workers : {1, 4}) {
            const auto a = estimate_expected_distance(parse_space(name), {50'000, kSeed, workers, false});
            const auto b = estimate_expected_distance(parse_space(name), {50'000, kSeed, workers, false});
            if (a.mean != b.mean || a.standard_error != b.standard_error)
                o.require(false, std::string(name) + " not bit-exact with " + std::to_string(workers) + " workers");
        }

    if (o.pass)
        o.detail = "metric axioms, KS at 1e6, conjugation n <= 12, covers k <= 5, roundtrips, double cover, "
                   "reproducibility";
    return o;
}

Outcome monotonicity() {
    Outcome o;
    const std::uint64_t n = 100'000;
    const auto so3 = sample_distances(parse_space("so3"), n, kSeed, 0);
    const auto full = sample_distances(parse_space("full-flag"), n, kSeed, 0);
    const auto mean = [](const std::vector<double>& xs) {
        double s = 0;
        for (double x : xs) s += x;
        return s / static_cast<double>(xs.size());
    };
    for (const char* p : {"partial-flag-1", "partial-flag-2", "partial-flag-3"}) {
        const auto partial = sample_distances(parse_space(p), n, kSeed, 0);
        std::uint64_t violations = 0;
        for (std::uint64_t i = 0; i < n; ++i) violations += !(full[i] <= partial[i] && partial[i] <= so3[i]);
        o.require(violations == 0, std::string(p) + ": " + std::to_string(violations) + " per-sample violations");
        o.require(mean(full) <= mean(partial) && mean(partial) <= mean(so3), std::string(p) + ": means out of order");
    }
    const double m_so3 = estimate_expected_distance(parse_space("so3"), {n, kSeed, 1, false}).mean;
    const double m_p1 = estimate_expected_distance(parse_space("partial-flag-1"), {n, kSeed, 1, false}).mean;
    const double m_full = estimate_expected_distance(parse_space("full-flag"), {n, kSeed, 1, false}).mean;
    o.require(m_full <= m_p1 && m_p1 <= m_so3, "estimated means out of order");
    if (o.pass) o.detail = fmt("means %.6f <= %.6f <= %.6f", m_full, m_p1, m_so3);
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"1 quadrature of the full-flag expectation", quadrature},
        {"2 closed-form expected distances", closed_forms},
        {"3 Monte Carlo agrees with references at N = 1e6", monte_carlo},
        {"4 flag volumes, symbolic and numeric", volumes},
        {"5 eigenvalue and S^3-lift quotient distances agree", oracle_equivalence},
        {"6 property suites", property_suites},
        {"7 refinement monotonicity at N = 1e5", monotonicity},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failures += !o.pass;
        std::printf("%s criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
