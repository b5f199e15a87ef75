#include "oriflag/montecarlo.hpp"

#include "oriflag/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>

namespace oriflag {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

FlagSpec make_spec(std::vector<int> parts, std::vector<std::vector<int>> blocks) {
    OrderedPartition lambda(std::move(parts));
    const int k = lambda.size();
    return FlagSpec(std::move(lambda), SetPartition(std::move(blocks), k));
}

const FlagSpec& full_flag_spec() {
    static const FlagSpec spec = make_spec({1, 1, 1}, {{1, 2, 3}});
    return spec;
}

const FlagSpec& partial_flag_spec(int which) {
    static const FlagSpec specs[3] = {make_spec({1, 1, 1}, {{1}, {2, 3}}),
                                      make_spec({1, 1, 1}, {{2}, {1, 3}}),
                                      make_spec({1, 1, 1}, {{3}, {1, 2}})};
    return specs[which - 1];
}

// Streams per-sample distances for one chunk into sink(double).
template <typename Sink>
void run_chunk(const SpaceId& space, std::uint64_t count, std::uint64_t seed, std::uint64_t chunk,
               bool two_point, Sink&& sink) {
    RngStream rng(seed, chunk);
    std::visit(
        overloaded{
            [&](const SpecialOrthogonal& so) {
                const auto draw = [&](auto& a, auto& b) {
                    for (std::uint64_t s = 0; s < count; ++s) {
                        detail::sample_special_orthogonal(a, rng, Orthogonalization::Householder);
                        if (two_point) {
                            detail::sample_special_orthogonal(b, rng, Orthogonalization::Householder);
                            a = (a * b.transpose()).eval();
                        }
                        sink(detail::distance_to_identity(a));
                    }
                };
                if (so.n == 3) {
                    Eigen::Matrix3d a, b;
                    draw(a, b);
                } else {
                    Eigen::MatrixXd a(so.n, so.n), b(so.n, so.n);
                    draw(a, b);
                }
            },
            [&](const FiniteQuotient& fq) {
                const auto group = isotropy_group(fq.spec);
                const auto draw = [&](auto& a, auto& b, auto& m, const auto& elements) {
                    for (std::uint64_t s = 0; s < count; ++s) {
                        detail::sample_special_orthogonal(a, rng, Orthogonalization::Householder);
                        if (two_point)
                            detail::sample_special_orthogonal(b, rng, Orthogonalization::Householder);
                        double best = std::numeric_limits<double>::infinity();
                        for (const auto& h : elements) {
                            if (two_point)
                                m = a * h * b.transpose();
                            else
                                m = a * h;
                            best = std::min(best, detail::distance_to_identity(m));
                        }
                        sink(best);
                    }
                };
                const int n = fq.spec.n();
                if (n == 3) {
                    std::vector<Eigen::Matrix3d> elements;
                    for (const auto& h : group.elements) elements.emplace_back(h.matrix());
                    Eigen::Matrix3d a, b, m;
                    draw(a, b, m, elements);
                } else {
                    std::vector<Eigen::MatrixXd> elements;
                    for (const auto& h : group.elements) elements.push_back(h.matrix());
                    Eigen::MatrixXd a(n, n), b(n, n), m(n, n);
                    draw(a, b, m, elements);
                }
            },
            [&](const Sphere2&) {
                for (std::uint64_t s = 0; s < count; ++s) {
                    const Eigen::Vector3d u = sphere_point(rng);
                    if (two_point) {
                        const Eigen::Vector3d v = sphere_point(rng);
                        sink(std::acos(std::clamp(u.dot(v), -1.0, 1.0)));
                    } else {
                        sink(sphere_pole_distance(u));
                    }
                }
            },
            [&](const ProjectivePlane2&) {
                for (std::uint64_t s = 0; s < count; ++s) {
                    const Eigen::Vector3d u = sphere_point(rng);
                    if (two_point) {
                        const Eigen::Vector3d v = sphere_point(rng);
                        sink(std::acos(std::min(1.0, std::abs(u.dot(v)))));
                    } else {
                        sink(projective_pole_distance(u));
                    }
                }
            },
            [&](const PointSpace&) {
                for (std::uint64_t s = 0; s < count; ++s) sink(0.0);
            },
        },
        space);
}

}  // namespace

// ---------------------------------------------------------------------------
// Spaces

SpaceId resolve_space(const FlagSpec& spec) {
    const auto& parts = spec.lambda().parts();
    const int n = spec.n();
    if (spec.lambda().all_ones()) {
        if (spec.p().is_complete()) return SpecialOrthogonal{n};
        return FiniteQuotient{spec};
    }
    if (parts.size() == 1) return PointSpace{n};
    if (n == 3 && parts.size() == 2) {
        if (spec.p().is_complete()) return Sphere2{};
        return ProjectivePlane2{};
    }
    throw UnsupportedError("no sampler for " + spec.to_string() +
                           " (continuous isotropy beyond the sphere and projective plane)");
}

SpaceId parse_space(std::string_view text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)) || !s.empty()) s += c;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();

    if (s == "s2") return Sphere2{};
    if (s == "rp2") return ProjectivePlane2{};
    if (s == "full-flag") return FiniteQuotient{full_flag_spec()};
    if (s == "trivial-flag") return PointSpace{3};
    for (int i = 1; i <= 3; ++i)
        if (s == "partial-flag-" + std::to_string(i)) return FiniteQuotient{partial_flag_spec(i)};
    if (s.size() > 2 && s.rfind("so", 0) == 0) {
        int n = 0;
        const auto [ptr, ec] = std::from_chars(s.data() + 2, s.data() + s.size(), n);
        if (ec != std::errc{} || ptr != s.data() + s.size() || n < 1)
            throw ParseError("bad space name '" + s + "'");
        return SpecialOrthogonal{n};
    }
    if (!s.empty() && s.front() == '{') return resolve_space(FlagSpec::from_json(s));
    if (s.find("lambda=") != std::string::npos) return resolve_space(FlagSpec::parse(s));
    throw ParseError("unknown space '" + s +
                     "' (expected so3, s2, rp2, full-flag, partial-flag-1/2/3, trivial-flag, "
                     "or 'lambda=... P=...')");
}

std::string space_name(const SpaceId& space) {
    return std::visit(overloaded{
                          [](const SpecialOrthogonal& so) { return "so" + std::to_string(so.n); },
                          [](const FiniteQuotient& fq) -> std::string {
                              if (fq.spec == full_flag_spec()) return "full-flag";
                              for (int i = 1; i <= 3; ++i)
                                  if (fq.spec == partial_flag_spec(i))
                                      return "partial-flag-" + std::to_string(i);
                              return fq.spec.to_string();
                          },
                          [](const Sphere2&) -> std::string { return "s2"; },
                          [](const ProjectivePlane2&) -> std::string { return "rp2"; },
                          [](const PointSpace& p) -> std::string {
                              if (p.n == 3) return "trivial-flag";
                              return "lambda=" + std::to_string(p.n) + " P={1}";
                          },
                      },
                      space);
}

std::optional<FlagSpec> space_flag_spec(const SpaceId& space) {
    return std::visit(overloaded{
                          [](const SpecialOrthogonal& so) -> std::optional<FlagSpec> {
                              return FlagSpec(OrderedPartition(std::vector<int>(
                                                  static_cast<std::size_t>(so.n), 1)),
                                              SetPartition::complete(so.n));
                          },
                          [](const FiniteQuotient& fq) -> std::optional<FlagSpec> { return fq.spec; },
                          [](const Sphere2&) -> std::optional<FlagSpec> {
                              return make_spec({1, 2}, {{1}, {2}});
                          },
                          [](const ProjectivePlane2&) -> std::optional<FlagSpec> {
                              return make_spec({1, 2}, {{1, 2}});
                          },
                          [](const PointSpace& p) -> std::optional<FlagSpec> {
                              return make_spec({p.n}, {{1}});
                          },
                      },
                      space);
}

// ---------------------------------------------------------------------------
// Statistics

void RunningStats::push(double x) {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
}

void RunningStats::merge(const RunningStats& other) {
    if (other.count_ == 0) return;
    if (count_ == 0) {
        *this = other;
        return;
    }
    const double na = static_cast<double>(count_);
    const double nb = static_cast<double>(other.count_);
    const double total = na + nb;
    const double delta = other.mean_ - mean_;
    mean_ += delta * nb / total;
    m2_ += other.m2_ + delta * delta * na * nb / total;
    count_ += other.count_;
}

double RunningStats::variance() const {
    return count_ < 2 ? 0.0 : m2_ / static_cast<double>(count_ - 1);
}

double RunningStats::standard_error() const {
    return count_ == 0 ? 0.0 : std::sqrt(variance() / static_cast<double>(count_));
}

// ---------------------------------------------------------------------------
// Operations

double quotient_distance(const Rotation& a, const Rotation& b, const FiniteIsotropy& h) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("quotient_distance: rotations differ in dimension");
    if (h.elements.empty()) throw std::invalid_argument("quotient_distance: empty isotropy group");
    if (h.dimension() != a.dim())
        throw std::invalid_argument("quotient_distance: isotropy group has the wrong dimension");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& g : h.elements) best = std::min(best, geodesic_distance(a * g, b));
    return best;
}

bool normalize_sphere_sample(Eigen::Vector3d& v) {
    const double norm = v.norm();
    if (!(norm > 1e-12) || !std::isfinite(norm)) return false;
    v /= norm;
    return true;
}

Eigen::Vector3d sphere_point(RngStream& rng) {
    Eigen::Vector3d v;
    do {
        v = {rng.gaussian(), rng.gaussian(), rng.gaussian()};
    } while (!normalize_sphere_sample(v));
    return v;
}

double sphere_pole_distance(const Eigen::Vector3d& unit) {
    return std::acos(std::clamp(unit.z(), -1.0, 1.0));
}

double projective_pole_distance(const Eigen::Vector3d& unit) {
    return std::acos(std::min(1.0, std::abs(unit.z())));
}

std::vector<std::uint64_t> chunk_sizes(std::uint64_t n_samples, int workers) {
    if (workers < 1) throw std::invalid_argument("workers must be >= 1");
    const auto w = static_cast<std::uint64_t>(workers);
    std::vector<std::uint64_t> sizes(w, n_samples / w);
    for (std::uint64_t i = 0; i < n_samples % w; ++i) ++sizes[i];
    return sizes;
}

std::vector<double> sample_distances(const SpaceId& space, std::uint64_t count, std::uint64_t seed,
                                     std::uint64_t chunk, bool two_point) {
    std::vector<double> out;
    out.reserve(count);
    run_chunk(space, count, seed, chunk, two_point, [&](double d) { out.push_back(d); });
    return out;
}

Estimate estimate_expected_distance(const SpaceId& space, const EstimateOptions& options) {
    if (options.n_samples < 1) throw std::invalid_argument("estimate: n_samples must be >= 1");
    // Fail fast on the caller's thread for spaces without a sampler.
    if (const auto* fq = std::get_if<FiniteQuotient>(&space)) (void)isotropy_group(fq->spec);

    const auto sizes = chunk_sizes(options.n_samples, options.workers);
    std::vector<RunningStats> partial(sizes.size());
    std::vector<std::exception_ptr> errors(sizes.size());
    const auto work = [&](std::size_t i) {
        try {
            run_chunk(space, sizes[i], options.seed, i, options.two_point,
                      [&](double d) { partial[i].push(d); });
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };
    if (sizes.size() == 1) {
        work(0);
    } else {
        std::vector<std::jthread> threads;
        threads.reserve(sizes.size());
        for (std::size_t i = 0; i < sizes.size(); ++i) threads.emplace_back(work, i);
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    RunningStats total;
    for (const auto& p : partial) total.merge(p);
    return {total.mean(), total.standard_error(), total.count(), options.seed};
}

}  // namespace oriflag
