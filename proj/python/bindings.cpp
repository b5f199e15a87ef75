#include "oriflag/analytic.hpp"
#include "oriflag/errors.hpp"
#include "oriflag/flagspec.hpp"
#include "oriflag/montecarlo.hpp"
#include "oriflag/orthogonal.hpp"
#include "oriflag/quatcover.hpp"

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace oriflag;

namespace {

using Quat4 = std::array<double, 4>;

FlagSpec make_spec(std::vector<int> lambda, std::vector<std::vector<int>> blocks) {
    OrderedPartition parts(std::move(lambda));
    const int k = parts.size();
    return FlagSpec(std::move(parts), SetPartition(std::move(blocks), k));
}

UnitQuaternion to_quat(const Quat4& q) { return UnitQuaternion(q[0], q[1], q[2], q[3]); }
Quat4 from_quat(const UnitQuaternion& q) { return q.coords(); }

py::dict quadrature_dict(const QuadratureResult& q) {
    py::dict d;
    d["value"] = q.value;
    d["abs_error_bound"] = q.abs_error_bound;
    d["evaluations"] = q.evaluations;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "C++ core of oriflag";

    py::register_exception<UnsupportedError>(m, "UnsupportedError", PyExc_ValueError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

    // flagspec
    m.def("conjugate_partition", [](const std::vector<int>& parts) { return conjugate_partition(parts); },
          py::arg("parts"));
    m.def("sphere_volume", &sphere_volume, py::arg("i"), "Vol(S^{i-1})");
    m.def(
        "flag_volume",
        [](std::vector<int> lambda, std::vector<std::vector<int>> blocks) {
            const auto v = flag_volume(make_spec(std::move(lambda), std::move(blocks)));
            return py::make_tuple(v.to_string(), v.value());
        },
        py::arg("lambda_"), py::arg("P"), "Returns (symbolic, value).");
    m.def(
        "covering_multiplicity",
        [](std::vector<std::vector<int>> p, std::vector<std::vector<int>> refined, int k) {
            return covering_multiplicity(SetPartition(std::move(p), k), SetPartition(std::move(refined), k));
        },
        py::arg("P"), py::arg("P_refined"), py::arg("k"));
    m.def(
        "isotropy_group",
        [](std::vector<int> lambda, std::vector<std::vector<int>> blocks) {
            std::vector<Eigen::MatrixXd> out;
            for (const auto& h : isotropy_group(make_spec(std::move(lambda), std::move(blocks))).elements)
                out.push_back(h.matrix());
            return out;
        },
        py::arg("lambda_"), py::arg("P"));

    // orthogonal
    m.def(
        "random_special_orthogonal",
        [](int n, std::uint64_t seed, std::uint64_t stream, const std::string& method) {
            RngStream rng(seed, stream);
            const auto how = method == "gram-schmidt" ? Orthogonalization::ModifiedGramSchmidt
                                                      : Orthogonalization::Householder;
            if (method != "householder" && method != "gram-schmidt")
                throw std::invalid_argument("method must be 'householder' or 'gram-schmidt'");
            return random_special_orthogonal(n, rng, how).matrix();
        },
        py::arg("n"), py::arg("seed") = 1, py::arg("stream") = 0, py::arg("method") = "householder");
    m.def(
        "geodesic_distance",
        [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
            return geodesic_distance(Rotation(a), Rotation(b));
        },
        py::arg("a"), py::arg("b"));
    m.def(
        "rotation_angles", [](const Eigen::MatrixXd& a) { return rotation_angles(Rotation(a)).angles; },
        py::arg("a"));

    // quatcover
    m.def(
        "quaternion_to_rotation", [](const Quat4& q) { return quaternion_to_matrix(to_quat(q)); },
        py::arg("q"));
    m.def(
        "rotation_to_quaternion",
        [](const Eigen::MatrixXd& r) { return from_quat(rotation_to_quaternion(Rotation(r))); }, py::arg("r"));
    m.def(
        "rotate_vector",
        [](const Quat4& q, const Eigen::Vector3d& u) { return Eigen::Vector3d(rotate_vector(to_quat(q), u)); },
        py::arg("q"), py::arg("u"));
    m.def(
        "sphere_distance", [](const Quat4& p, const Quat4& q) { return sphere_distance(to_quat(p), to_quat(q)); },
        py::arg("p"), py::arg("q"));
    m.def(
        "lifted_orbit",
        [](const std::string& space, const Quat4& q) {
            const auto spec = space_flag_spec(parse_space(space));
            std::vector<Quat4> out;
            for (const auto& p : lifted_orbit(*spec, to_quat(q))) out.push_back(from_quat(p));
            return out;
        },
        py::arg("space"), py::arg("q"));

    // montecarlo
    m.def(
        "quotient_distance",
        [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const std::string& space) {
            const auto spec = space_flag_spec(parse_space(space));
            return quotient_distance(Rotation(a), Rotation(b), isotropy_group(*spec));
        },
        py::arg("a"), py::arg("b"), py::arg("space"));
    m.def(
        "estimate_expected_distance",
        [](const std::string& space, std::uint64_t n, std::uint64_t seed, int workers, bool two_point) {
            const auto id = parse_space(space);
            Estimate e;
            {
                py::gil_scoped_release release;
                e = estimate_expected_distance(id, {n, seed, workers, two_point});
            }
            py::dict d;
            d["mean"] = e.mean;
            d["stderr"] = e.standard_error;
            d["n"] = e.n_samples;
            d["seed"] = e.seed;
            return d;
        },
        py::arg("space"), py::arg("n") = 100000, py::arg("seed") = 1, py::arg("workers") = 1,
        py::arg("two_point") = false);
    m.def(
        "sample_distances",
        [](const std::string& space, std::uint64_t n, std::uint64_t seed, std::uint64_t chunk) {
            const auto samples = sample_distances(parse_space(space), n, seed, chunk);
            return py::array_t<double>(static_cast<py::ssize_t>(samples.size()), samples.data());
        },
        py::arg("space"), py::arg("n"), py::arg("seed") = 1, py::arg("chunk") = 0);

    // analytic
    m.def(
        "analytic_expected_distance",
        [](const std::string& space, double tol) {
            const auto cf = analytic_expected_distance(parse_space(space), tol);
            py::dict d;
            d["tag"] = to_string(cf.tag);
            d["symbolic"] = cf.exact ? py::object(py::str(cf.exact->to_string())) : py::object(py::none());
            d["value"] = cf.value;
            return d;
        },
        py::arg("space"), py::arg("tol") = 1e-12);
    m.def(
        "expected_distance_full_flag", [](double tol) { return quadrature_dict(expected_distance_full_flag(tol)); },
        py::arg("tol") = 1e-12);
    m.def(
        "expected_distance_partial_flag_integral",
        [](double tol) { return quadrature_dict(expected_distance_partial_flag_integral(tol)); },
        py::arg("tol") = 1e-10);
    m.def(
        "numeric_volume",
        [](const std::string& space, double tol) { return quadrature_dict(numeric_volume(parse_space(space), tol)); },
        py::arg("space"), py::arg("tol") = 1e-9);
}
