#include "oriflag/cli.hpp"

#include "oriflag/analytic.hpp"
#include "oriflag/errors.hpp"
#include "oriflag/flagspec.hpp"
#include "oriflag/montecarlo.hpp"
#include "oriflag/quatcover.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>

#ifndef ORIFLAG_VERSION
#define ORIFLAG_VERSION "0.0.0"
#endif

namespace oriflag {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

std::string format_double(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void render(const Json& j, std::string& out) {
    switch (j.type()) {
        case Json::value_t::object: {
            out += '{';
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) out += ',';
                first = false;
                out += Json(key).dump();
                out += ':';
                render(value, out);
            }
            out += '}';
            break;
        }
        case Json::value_t::array: {
            out += '[';
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ',';
                render(j[i], out);
            }
            out += ']';
            break;
        }
        case Json::value_t::number_float: out += format_double(j.get<double>()); break;
        default: out += j.dump(); break;
    }
}

std::string render(const Json& j) {
    std::string out;
    render(j, out);
    return out;
}

std::uint64_t default_seed() {
    const char* env = std::getenv("ORIFLAG_SEED");
    if (env == nullptr || *env == '\0') return 1;
    std::uint64_t seed = 0;
    const std::string_view text(env);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ParseError("ORIFLAG_SEED must be an unsigned 64-bit integer, got '" + std::string(text) + "'");
    return seed;
}

Json quadrature_json(const QuadratureResult& q) {
    return Json{{"value", q.value}, {"abs_error_bound", q.abs_error_bound}, {"evaluations", q.evaluations}};
}

Json spec_json(const SpaceId& space) {
    const auto spec = space_flag_spec(space);
    if (!spec) return nullptr;
    return Json::parse(spec->to_json());
}

Json closed_form_json(const ClosedForm& cf) {
    Json j{{"tag", to_string(cf.tag)}};
    j["symbolic"] = cf.exact ? Json(cf.exact->to_string()) : Json(nullptr);
    j["value"] = cf.value;
    if (cf.quadrature) j["quadrature"] = quadrature_json(*cf.quadrature);
    return j;
}

// Reference value for Monte Carlo comparisons, when one is known.
std::optional<double> reference_value(const SpaceId& space) {
    try {
        return analytic_expected_distance(space).value;
    } catch (const UnsupportedError&) {
        return std::nullopt;
    }
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

Json manifest(const std::string& command, const std::string& space, std::uint64_t n, std::uint64_t seed,
              int workers, const Timer& timer) {
    return Json{{"command", command}, {"space", space},     {"n", n},
                {"seed", seed},       {"workers", workers}, {"version", ORIFLAG_VERSION},
                {"wall_time_s", timer.seconds()}};
}

// ---------------------------------------------------------------------------
// Commands

struct VolumeArgs {
    std::string lambda, p, space;
    bool numeric = false;
    double tol = 1e-9;
};

int cmd_volume(const VolumeArgs& a, std::ostream& out) {
    std::optional<FlagSpec> spec;
    std::optional<SpaceId> space;
    if (!a.space.empty()) {
        space = parse_space(a.space);
        spec = space_flag_spec(*space);
    } else {
        if (a.lambda.empty() || a.p.empty()) throw ParseError("volume: give --space or both --lambda and --P");
        OrderedPartition lambda(parse_int_list(a.lambda));
        spec = FlagSpec(lambda, parse_set_partition(a.p, lambda.size()));
    }
    const PiExpr vol = flag_volume(*spec);
    Json j{{"schema", kSchemaVersion}, {"command", "volume"}, {"space", spec->to_string()}};
    j["spec"] = Json::parse(spec->to_json());
    j["symbolic"] = vol.to_string();
    j["value"] = vol.value();
    if (a.numeric) {
        if (!space) space = resolve_space(*spec);
        const auto q = numeric_volume(*space, a.tol);
        j["numeric"] = quadrature_json(q);
        j["discrepancy"] = std::abs(q.value - vol.value());
    }
    out << render(j) << '\n';
    return kExitOk;
}

struct ExpectedArgs {
    std::string space;
    std::string mode = "analytic";
    std::uint64_t n = 1'000'000;
    std::uint64_t seed = 1;
    int workers = 1;
    double tol = 1e-12;
    bool two_point = false;
    bool all = false;
    std::string format = "json";
};

Json estimate_json(const Estimate& e) {
    return Json{{"mean", e.mean}, {"stderr", e.standard_error}, {"n", e.n_samples}, {"seed", e.seed}};
}

int cmd_expected_all(const ExpectedArgs& a, std::ostream& out) {
    const Timer timer;
    const char* names[] = {"so3", "partial-flag-1", "partial-flag-2", "partial-flag-3",
                           "full-flag", "s2", "rp2", "trivial-flag"};
    Json rows = Json::array();
    for (const char* name : names) {
        const SpaceId space = parse_space(name);
        const auto cf = analytic_expected_distance(space, a.tol);
        const auto est = estimate_expected_distance(space, {a.n, a.seed, a.workers, a.two_point});
        rows.push_back(Json{{"space", name},
                            {"analytic", cf.value},
                            {"symbolic", cf.exact ? Json(cf.exact->to_string()) : Json(to_string(cf.tag))},
                            {"mean", est.mean},
                            {"stderr", est.standard_error},
                            {"abs_error", std::abs(est.mean - cf.value)}});
    }
    if (a.format == "csv") {
        out << "space,analytic,mean,stderr,abs_error\n";
        for (const auto& r : rows)
            out << r["space"].get<std::string>() << ',' << format_double(r["analytic"].get<double>()) << ','
                << format_double(r["mean"].get<double>()) << ',' << format_double(r["stderr"].get<double>())
                << ',' << format_double(r["abs_error"].get<double>()) << '\n';
        return kExitOk;
    }
    Json j{{"schema", kSchemaVersion}, {"command", "expected"}, {"mode", "all"}, {"rows", rows}};
    j["manifest"] = manifest("expected --all", "all", a.n, a.seed, a.workers, timer);
    out << render(j) << '\n';
    return kExitOk;
}

int cmd_expected(const ExpectedArgs& a, std::ostream& out) {
    if (a.all) return cmd_expected_all(a, out);
    if (a.space.empty()) throw ParseError("expected: --space is required (or --all)");
    const Timer timer;
    const SpaceId space = parse_space(a.space);
    const std::string name = space_name(space);
    Json j{{"schema", kSchemaVersion}, {"command", "expected"}, {"space", name}, {"mode", a.mode}};
    j["spec"] = spec_json(space);

    if (a.mode == "analytic") {
        const Json cf = closed_form_json(analytic_expected_distance(space, a.tol));
        for (const auto& [k, v] : cf.items()) j[k] = v;
    } else if (a.mode == "quadrature") {
        const auto* fq = std::get_if<FiniteQuotient>(&space);
        if (fq == nullptr || fq->spec.lambda().parts() != std::vector<int>{1, 1, 1})
            throw UnsupportedError("quadrature mode needs full-flag or a partial flag, got " + name);
        const auto q = fq->spec.p().is_trivial() ? expected_distance_full_flag(a.tol)
                                                 : expected_distance_partial_flag_integral(a.tol);
        j["value"] = q.value;
        j["abs_error_bound"] = q.abs_error_bound;
        j["evaluations"] = q.evaluations;
    } else if (a.mode == "montecarlo") {
        const Json est = estimate_json(estimate_expected_distance(space, {a.n, a.seed, a.workers, a.two_point}));
        for (const auto& [k, v] : est.items()) j[k] = v;
        const double mean = est["mean"].get<double>();
        j["workers"] = a.workers;
        j["two_point"] = a.two_point;
        if (const auto ref = reference_value(space)) {
            j["reference"] = *ref;
            j["abs_error"] = std::abs(mean - *ref);
        }
        j["manifest"] = manifest("expected --mode montecarlo", name, a.n, a.seed, a.workers, timer);
    } else {
        throw ParseError("expected: --mode must be analytic, quadrature or montecarlo");
    }
    out << render(j) << '\n';
    return kExitOk;
}

int cmd_estimate(const ExpectedArgs& a, std::ostream& out) {
    const Timer timer;
    const SpaceId space = parse_space(a.space);
    const auto est = estimate_expected_distance(space, {a.n, a.seed, a.workers, a.two_point});
    Json j{{"schema", kSchemaVersion}};
    const Json fields = estimate_json(est);
    for (const auto& [k, v] : fields.items()) j[k] = v;
    j["manifest"] = manifest("estimate", space_name(space), a.n, a.seed, a.workers, timer);
    out << render(j) << '\n';
    return kExitOk;
}

struct SampleArgs {
    std::string space;
    std::uint64_t n = 1;
    std::uint64_t seed = 1;
    std::string format = "json";
    bool lift = false;
};

void emit_row(std::ostream& out, const std::vector<double>& flat, const Json& nested, bool csv) {
    if (csv) {
        for (std::size_t i = 0; i < flat.size(); ++i) out << (i ? "," : "") << format_double(flat[i]);
        out << '\n';
    } else {
        out << render(nested) << '\n';
    }
}

int cmd_sample(const SampleArgs& a, std::ostream& out) {
    if (a.n < 1) throw ParseError("sample: --n must be >= 1");
    const SpaceId space = parse_space(a.space);
    const bool csv = a.format == "csv";
    RngStream rng(a.seed, 0);

    const auto emit_vector = [&](const Eigen::Vector3d& v) {
        emit_row(out, {v.x(), v.y(), v.z()}, Json{v.x(), v.y(), v.z()}, csv);
    };
    if (std::holds_alternative<Sphere2>(space) || std::holds_alternative<ProjectivePlane2>(space)) {
        for (std::uint64_t s = 0; s < a.n; ++s) emit_vector(sphere_point(rng));
        return kExitOk;
    }
    if (std::holds_alternative<PointSpace>(space))
        throw UnsupportedError("sample: " + space_name(space) + " is a single point");

    const int n = space_flag_spec(space)->n();
    if (a.lift && n != 3) throw UnsupportedError("sample: --lift needs a 3x3 rotation space");
    for (std::uint64_t s = 0; s < a.n; ++s) {
        const Rotation r = random_special_orthogonal(n, rng);
        if (a.lift) {
            const auto q = rotation_to_quaternion(r);
            const auto& c = q.coords();
            emit_row(out, {c.begin(), c.end()}, Json{c[0], c[1], c[2], c[3]}, csv);
            continue;
        }
        std::vector<double> flat;
        Json rows = Json::array();
        for (int i = 0; i < n; ++i) {
            Json row = Json::array();
            for (int k = 0; k < n; ++k) {
                flat.push_back(r(i, k));
                row.push_back(r(i, k));
            }
            rows.push_back(row);
        }
        emit_row(out, flat, rows, csv);
    }
    return kExitOk;
}

struct ConvergenceArgs {
    std::string space;
    std::string n_list = "1000,10000,100000";
    std::uint64_t seed = 1;
    int workers = 1;
    std::string format = "csv";
};

int cmd_convergence(const ConvergenceArgs& a, std::ostream& out) {
    const SpaceId space = parse_space(a.space);
    const auto sizes = parse_int_list(a.n_list);
    for (std::size_t i = 0; i < sizes.size(); ++i)
        if (sizes[i] < 1 || (i > 0 && sizes[i] <= sizes[i - 1]))
            throw ParseError("convergence: --n-list must be positive and strictly increasing");
    const auto ref = reference_value(space);
    const Timer timer;

    Json rows = Json::array();
    for (int size : sizes) {
        const auto est = estimate_expected_distance(
            space, {static_cast<std::uint64_t>(size), a.seed, a.workers, false});
        Json row{{"n", est.n_samples}, {"mean", est.mean}, {"stderr", est.standard_error}};
        row["abs_error"] = ref ? Json(std::abs(est.mean - *ref)) : Json(nullptr);
        rows.push_back(row);
    }
    if (a.format == "json") {
        Json j{{"schema", kSchemaVersion}, {"command", "convergence"}, {"space", space_name(space)}};
        j["reference"] = ref ? Json(*ref) : Json(nullptr);
        j["rows"] = rows;
        j["manifest"] = manifest("convergence", space_name(space), static_cast<std::uint64_t>(sizes.back()),
                                 a.seed, a.workers, timer);
        out << render(j) << '\n';
        return kExitOk;
    }
    out << "n,mean,stderr,abs_error\n";
    for (const auto& r : rows) {
        out << r["n"].get<std::uint64_t>() << ',' << format_double(r["mean"].get<double>()) << ','
            << format_double(r["stderr"].get<double>()) << ',';
        if (!r["abs_error"].is_null()) out << format_double(r["abs_error"].get<double>());
        out << '\n';
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Volumes and expected distances on partially oriented flag manifolds", "oriflag"};
    app.set_version_flag("--version", ORIFLAG_VERSION);
    app.require_subcommand(1);

    std::uint64_t seed = 1;
    VolumeArgs vol;
    ExpectedArgs exp;
    SampleArgs smp;
    ConvergenceArgs conv;
    std::string quad_space = "full-flag";

    auto* volume = app.add_subcommand("volume", "Exact (and optionally numeric) volume of Fl(lambda;P)");
    volume->add_option("--lambda", vol.lambda, "Ordered partition, e.g. 1,1,1");
    volume->add_option("--P", vol.p, "Set partition, e.g. {1}{2,3}");
    volume->add_option("--space", vol.space, "Alias or 'lambda=... P=...' instead of --lambda/--P");
    volume->add_flag("--numeric", vol.numeric, "Also evaluate the iterated volume integral");
    volume->add_option("--tol", vol.tol, "Absolute tolerance for --numeric")->check(CLI::PositiveNumber);

    const auto add_mc = [&](CLI::App* sub, std::string* format) {
        sub->add_option("--n", exp.n, "Number of Monte Carlo samples")->check(CLI::PositiveNumber);
        sub->add_option("--seed", seed, "Random seed (default: $ORIFLAG_SEED or 1)");
        sub->add_option("--workers,--streams", exp.workers, "Parallel RNG streams")->check(CLI::PositiveNumber);
        sub->add_flag("--two-point", exp.two_point, "Sample both points instead of fixing one");
        if (format) sub->add_option("--format", *format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    };

    auto* expected = app.add_subcommand("expected", "Expected distance between two random points");
    expected->add_option("--space", exp.space, "so3, s2, rp2, full-flag, partial-flag-1/2/3, trivial-flag, or a spec");
    expected->add_option("--mode", exp.mode, "analytic, quadrature or montecarlo")
        ->check(CLI::IsMember({"analytic", "quadrature", "montecarlo"}));
    expected->add_option("--tol", exp.tol, "Quadrature tolerance")->check(CLI::PositiveNumber);
    expected->add_flag("--all", exp.all, "Analytic vs Monte Carlo table for every SO(3)-derived space");
    add_mc(expected, &exp.format);

    auto* estimate = app.add_subcommand("estimate", "Monte Carlo estimate of the expected distance");
    estimate->add_option("--space", exp.space, "Space alias or spec")->required();
    add_mc(estimate, nullptr);

    auto* analytic = app.add_subcommand("analytic", "Closed-form expected distance");
    analytic->add_option("--space", exp.space, "Space alias or spec")->required();

    auto* quadrature = app.add_subcommand("quadrature", "High-precision quadrature of the full-flag expectation");
    quadrature->add_option("--tol", exp.tol, "Absolute tolerance")->check(CLI::PositiveNumber);
    quadrature->add_option("--space", quad_space, "full-flag (default) or partial-flag-1/2/3");

    auto* sample = app.add_subcommand("sample", "Emit Haar samples as JSON lines or CSV");
    sample->add_option("--space", smp.space, "Space alias or spec")->required();
    sample->add_option("--n", smp.n, "Number of samples")->check(CLI::PositiveNumber);
    sample->add_option("--seed", seed, "Random seed (default: $ORIFLAG_SEED or 1)");
    sample->add_option("--format", smp.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sample->add_flag("--lift", smp.lift, "Emit hemisphere quaternion lifts instead of matrices");

    auto* convergence = app.add_subcommand("convergence", "Monte Carlo mean and stderr over increasing N");
    convergence->add_option("--space", conv.space, "Space alias or spec")->required();
    convergence->add_option("--n-list", conv.n_list, "Comma-separated increasing sample counts");
    convergence->add_option("--seed", seed, "Random seed (default: $ORIFLAG_SEED or 1)");
    convergence->add_option("--workers,--streams", conv.workers, "Parallel RNG streams")
        ->check(CLI::PositiveNumber);
    convergence->add_option("--format", conv.format, "csv or json")->check(CLI::IsMember({"json", "csv"}));

    try {
        seed = default_seed();
        std::vector<std::string> rest(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
        app.parse(rest);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitParse;
    } catch (const ParseError& e) {
        err << "oriflag: " << e.what() << '\n';
        return kExitParse;
    }

    try {
        exp.seed = smp.seed = conv.seed = seed;
        if (*volume) return cmd_volume(vol, out);
        if (*expected) return cmd_expected(exp, out);
        if (*estimate) return cmd_estimate(exp, out);
        if (*analytic) {
            exp.mode = "analytic";
            return cmd_expected(exp, out);
        }
        if (*quadrature) {
            exp.space = quad_space;
            exp.mode = "quadrature";
            return cmd_expected(exp, out);
        }
        if (*sample) return cmd_sample(smp, out);
        if (*convergence) return cmd_convergence(conv, out);
    } catch (const ParseError& e) {
        err << "oriflag: " << e.what() << '\n';
        return kExitParse;
    } catch (const UnsupportedError& e) {
        err << "oriflag: unsupported: " << e.what() << '\n';
        return kExitUnsupported;
    } catch (const ConvergenceError& e) {
        err << "oriflag: " << e.what() << '\n';
        return kExitConvergence;
    } catch (const std::invalid_argument& e) {
        err << "oriflag: " << e.what() << '\n';
        return kExitParse;
    } catch (const std::exception& e) {
        err << "oriflag: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitFailure;
}

}  // namespace oriflag
