#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qw/errors.hpp"
#include "qw/evolution.hpp"
#include "qw/genfun.hpp"
#include "qw/limits.hpp"
#include "qw/verify.hpp"

namespace py = pybind11;
using namespace qw;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

template <class F>
py::array_t<double> vectorize(F f, const py::array_t<double, py::array::c_style | py::array::forcecast>& xs) {
    py::array_t<double> out(xs.request().shape);
    const double* in = xs.data();
    double* o = out.mutable_data();
    for (py::ssize_t i = 0; i < xs.size(); ++i) o[i] = f(in[i]);
    return out;
}

py::dict check_dict(const CheckRecord& c) {
    py::dict d;
    d["name"] = c.name;
    d["passed"] = c.passed;
    d["value"] = c.value;
    d["tolerance"] = c.tolerance;
    d["detail"] = c.detail;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Two-phase quantum walk with one defect";

    auto base = py::register_exception<Error>(m, "QWError", PyExc_RuntimeError);
    auto domain = py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<ZeroStateError>(m, "ZeroStateError", domain.ptr());
    py::register_exception<BinError>(m, "BinError", domain.ptr());
    py::register_exception<ResourceError>(m, "ResourceError", base.ptr());
    py::register_exception<QuadratureError>(m, "QuadratureError", base.ptr());
    py::register_exception<DegenerateError>(m, "DegenerateError", base.ptr());
    py::register_exception<BranchError>(m, "BranchError", base.ptr());

    py::class_<CoinParameters>(m, "CoinParameters")
        .def(py::init<double, double>(), py::arg("sigma_plus"), py::arg("sigma_minus"))
        .def_property_readonly("sigma_plus", &CoinParameters::sigma_plus)
        .def_property_readonly("sigma_minus", &CoinParameters::sigma_minus)
        .def_property_readonly("sigma", &CoinParameters::sigma)
        .def("__repr__", [](const CoinParameters& p) {
            return "CoinParameters(" + std::to_string(p.sigma_plus()) + ", " + std::to_string(p.sigma_minus()) + ")";
        });

    py::class_<InitialState>(m, "InitialState")
        .def(py::init(&make_initial_state), py::arg("alpha"), py::arg("beta"))
        .def_property_readonly("alpha", &InitialState::alpha)
        .def_property_readonly("beta", &InitialState::beta)
        .def_property_readonly("a", &InitialState::a)
        .def_property_readonly("b", &InitialState::b);

    m.def("example_parameters", &example_parameters);
    m.attr("SUPPORT_EDGE") = kSupportEdge;

    m.def(
        "simulate",
        [](const CoinParameters& p, const InitialState& init, long t) {
            std::vector<double> probs;
            {
                py::gil_scoped_release release;
                probs = distribution(evolve(p, init, t)).probs();
            }
            std::vector<double> xs;
            for (long x = -t; x <= t; ++x) xs.push_back(static_cast<double>(x));
            return py::make_tuple(to_array(xs), to_array(probs));
        },
        py::arg("params"), py::arg("init"), py::arg("t"),
        "Sites -t..t and P_t(x) for each.");

    m.def(
        "weight", [](py::array_t<double, py::array::c_style | py::array::forcecast> xs, const CoinParameters& p,
                     const InitialState& init) { return vectorize([&](double x) { return weight(x, p, init); }, xs); },
        py::arg("x"), py::arg("params"), py::arg("init"));
    m.def(
        "limit_density",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> xs, const CoinParameters& p,
           const InitialState& init) { return vectorize([&](double x) { return limit_density(x, p, init); }, xs); },
        py::arg("x"), py::arg("params"), py::arg("init"));
    m.def(
        "konno_density",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> xs, double a) {
            return vectorize([&](double x) { return konno_density(x, a); }, xs);
        },
        py::arg("x"), py::arg("a") = kSupportEdge);
    m.def("one_defect_weight", &one_defect_weight, py::arg("x"), py::arg("sigma"), py::arg("init"));
    m.def("ac_mass", &ac_mass, py::arg("params"), py::arg("init"));
    m.def("loc_mass", &loc_mass, py::arg("params"), py::arg("init"));
    m.def("time_averaged_measure", &time_averaged_measure, py::arg("x"), py::arg("params"), py::arg("init"));
    m.def("assemble_density", &assemble_density, py::arg("x"), py::arg("params"), py::arg("init"));

    m.def(
        "gf_at",
        [](complex z, const CoinParameters& p) {
            const GFValue g = gf_at(z, p);
            py::dict d;
            d["f_plus"] = g.f_plus;
            d["f_minus"] = g.f_minus;
            d["lambda_plus"] = g.lambda_plus;
            d["lambda_minus"] = g.lambda_minus;
            d["Lambda0"] = g.Lambda0;
            return d;
        },
        py::arg("z"), py::arg("params"));

    m.def(
        "mass_check",
        [](const CoinParameters& p, const InitialState& init) {
            const MassCheck c = mass_check(p, init);
            return py::make_tuple(c.C, c.ac_mass, c.sum());
        },
        py::arg("params"), py::arg("init"), "(C, ac_mass, C + ac_mass)");
    m.def("residue_theorem_check", [](const CoinParameters& p, const InitialState& init) {
        return residue_theorem_check(p, init, residue_grid());
    });
    m.def(
        "convergence_report",
        [](const CoinParameters& p, const InitialState& init, const std::vector<long>& ts) {
            ConvergenceReport rep;
            {
                py::gil_scoped_release release;
                rep = convergence_report(p, init, ts);
            }
            py::list out;
            for (const auto& e : rep.entries) {
                py::dict d;
                d["t"] = e.t;
                d["binned_mad"] = e.binned_mad;
                d["cdf_sup"] = e.cdf_sup;
                d["mean_empirical"] = e.mean_empirical;
                d["mean_limit"] = e.mean_limit;
                out.append(d);
            }
            return out;
        },
        py::arg("params"), py::arg("init"), py::arg("ts"));
    m.def(
        "run_mass_suite",
        [](const std::vector<std::pair<CoinParameters, InitialState>>& tuples) {
            std::vector<ParameterTuple> in;
            for (const auto& [p, s] : tuples) in.push_back({p, s});
            py::list out;
            for (const auto& c : run_mass_suite(in)) out.append(check_dict(c));
            return out;
        },
        py::arg("tuples"));
}
