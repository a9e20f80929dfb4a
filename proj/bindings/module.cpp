#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "macbounds/cli.hpp"
#include "macbounds/dm_region.hpp"
#include "macbounds/gauss_oracle.hpp"
#include "macbounds/gauss_region.hpp"
#include "macbounds/region_geom.hpp"
#include "macbounds/verify.hpp"

namespace py = pybind11;
using namespace macbounds;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Inner/outer capacity-region bounds for the two-user state-dependent MAC "
              "with one informed encoder and degraded message sets";

    py::class_<RatePair>(m, "RatePair")
        .def(py::init<double, double>(), py::arg("rc") = 0.0, py::arg("r1") = 0.0)
        .def_readwrite("rc", &RatePair::rc)
        .def_readwrite("r1", &RatePair::r1)
        .def("__repr__", [](const RatePair& p) {
            return "RatePair(rc=" + std::to_string(p.rc) + ", r1=" + std::to_string(p.r1) + ")";
        });

    py::class_<RateConstraints>(m, "RateConstraints")
        .def(py::init<double, double, double>(), py::arg("r1_a") = 0.0, py::arg("r1_b") = kInf,
             py::arg("sum_c") = 0.0)
        .def_readwrite("r1_a", &RateConstraints::r1_a)
        .def_readwrite("r1_b", &RateConstraints::r1_b)
        .def_readwrite("sum_c", &RateConstraints::sum_c)
        .def("__repr__", [](const RateConstraints& c) {
            return "RateConstraints(r1_a=" + std::to_string(c.r1_a) +
                   ", r1_b=" + std::to_string(c.r1_b) + ", sum_c=" + std::to_string(c.sum_c) + ")";
        });

    py::class_<RegionBoundary>(m, "RegionBoundary")
        .def(py::init<>())
        .def_readwrite("rc_grid", &RegionBoundary::rc_grid)
        .def_readwrite("r1_max", &RegionBoundary::r1_max);

    py::class_<ChannelParams>(m, "ChannelParams")
        .def(py::init<double, double, double, double>(), py::arg("p1") = 1.0, py::arg("p2") = 1.0,
             py::arg("q") = 1.0, py::arg("n0") = 1.0)
        .def_readwrite("p1", &ChannelParams::p1)
        .def_readwrite("p2", &ChannelParams::p2)
        .def_readwrite("q", &ChannelParams::q)
        .def_readwrite("n0", &ChannelParams::n0);

    py::class_<InnerParams>(m, "InnerParams")
        .def(py::init<double, double, double, double>(), py::arg("theta") = 1.0,
             py::arg("xi") = 1.0, py::arg("rho") = 0.0, py::arg("alpha") = 1.0)
        .def_readwrite("theta", &InnerParams::theta)
        .def_readwrite("xi", &InnerParams::xi)
        .def_readwrite("rho", &InnerParams::rho)
        .def_readwrite("alpha", &InnerParams::alpha);

    py::class_<OuterParams>(m, "OuterParams")
        .def(py::init<double, double>(), py::arg("rho12") = 0.0, py::arg("rho2s") = 0.0)
        .def_readwrite("rho12", &OuterParams::rho12)
        .def_readwrite("rho2s", &OuterParams::rho2s);

    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init<>())
        .def_readwrite("theta_points", &GridSpec::theta_points)
        .def_readwrite("xi_points", &GridSpec::xi_points)
        .def_readwrite("rho_points", &GridSpec::rho_points)
        .def_readwrite("alpha_points", &GridSpec::alpha_points)
        .def_readwrite("alpha_lo", &GridSpec::alpha_lo)
        .def_readwrite("alpha_hi", &GridSpec::alpha_hi)
        .def_readwrite("xi_floor", &GridSpec::xi_floor)
        .def_readwrite("rho12_points", &GridSpec::rho12_points)
        .def_readwrite("rho2s_points", &GridSpec::rho2s_points)
        .def_readwrite("arc_points", &GridSpec::arc_points);

    py::class_<BoundPair>(m, "BoundPair")
        .def_readwrite("lower", &BoundPair::lower)
        .def_readwrite("upper", &BoundPair::upper)
        .def("__repr__", [](const BoundPair& b) {
            return "BoundPair(lower=" + std::to_string(b.lower) +
                   ", upper=" + std::to_string(b.upper) + ")";
        });

    // region geometry
    m.def("constraint_polygon", &constraint_polygon, py::arg("constraints"));
    m.def("union_upper_boundary", &union_upper_boundary, py::arg("polygons"), py::arg("rc_grid"));
    m.def("boundary_of_constraints", &boundary_of_constraints, py::arg("constraints"),
          py::arg("rc_grid"));
    m.def("default_rc_grid", &default_rc_grid, py::arg("constraints"), py::arg("points") = 201);
    m.def("upper_concave_envelope", &upper_concave_envelope, py::arg("boundary"));
    m.def("dominates", &dominates, py::arg("outer"), py::arg("inner"), py::arg("tol"));

    // Gaussian closed forms
    m.def("q_tilde", &q_tilde, py::arg("channel"), py::arg("rho"));
    m.def("inner_constraints", &inner_constraints, py::arg("channel"), py::arg("params"),
          "Achievable triple, or None when the binning constraint fails");
    m.def("outer_constraints", &outer_constraints, py::arg("channel"), py::arg("params"));
    m.def("inner_boundary", &inner_boundary, py::arg("channel"), py::arg("grid") = GridSpec{});
    m.def("outer_boundary", &outer_boundary, py::arg("channel"), py::arg("grid") = GridSpec{});
    m.def("common_message_capacity", &common_message_capacity, py::arg("channel"),
          py::arg("grid") = GridSpec{});
    m.def("helper_rate_bounds", &helper_rate_bounds, py::arg("channel"),
          py::arg("grid") = GridSpec{});
    m.def("strong_interference_reference", &strong_interference_reference, py::arg("channel"));

    // covariance oracle
    py::class_<CovMatrix>(m, "CovMatrix")
        .def_readonly("labels", &CovMatrix::labels)
        .def_readonly("sigma", &CovMatrix::sigma);
    py::class_<OracleInner>(m, "OracleInner")
        .def_readonly("rates", &OracleInner::rates)
        .def_readonly("feasibility", &OracleInner::feasibility);
    m.def("assemble_inner_covariance", &assemble_inner_covariance, py::arg("channel"),
          py::arg("params"));
    m.def("assemble_outer_covariance", &assemble_outer_covariance, py::arg("channel"),
          py::arg("params"));
    m.def("gaussian_cmi", &gaussian_cmi, py::arg("cov"), py::arg("a"), py::arg("b"),
          py::arg("c") = std::vector<std::string>{});
    m.def("oracle_inner", &oracle_inner, py::arg("channel"), py::arg("params"));
    m.def("oracle_outer", &oracle_outer, py::arg("channel"), py::arg("params"));

    // discrete memoryless case
    py::class_<FiniteDist>(m, "FiniteDist")
        .def(py::init([](std::vector<double> p) { return FiniteDist{std::move(p)}; }), py::arg("p"))
        .def_readwrite("p", &FiniteDist::p);
    py::class_<DmChannel>(m, "DmChannel")
        .def(py::init([](std::size_t ns, std::size_t nx1, std::size_t nx2, std::size_t ny,
                         std::vector<double> state, std::vector<double> kernel) {
                 DmChannel ch;
                 ch.ns = ns;
                 ch.nx1 = nx1;
                 ch.nx2 = nx2;
                 ch.ny = ny;
                 ch.state_dist.p = std::move(state);
                 ch.kernel = std::move(kernel);
                 validate(ch);
                 return ch;
             }),
             py::arg("ns"), py::arg("nx1"), py::arg("nx2"), py::arg("ny"), py::arg("state_dist"),
             py::arg("kernel"))
        .def_readonly("ns", &DmChannel::ns)
        .def_readonly("nx1", &DmChannel::nx1)
        .def_readonly("nx2", &DmChannel::nx2)
        .def_readonly("ny", &DmChannel::ny);
    py::class_<InnerFactorization>(m, "InnerFactorization")
        .def(py::init<>())
        .def_readwrite("nu1", &InnerFactorization::nu1)
        .def_readwrite("nu2", &InnerFactorization::nu2)
        .def_readwrite("p_u1", &InnerFactorization::p_u1)
        .def_readwrite("p_x1_given_u1", &InnerFactorization::p_x1_given_u1)
        .def_readwrite("p_u2_given_u1_s", &InnerFactorization::p_u2_given_u1_s)
        .def_readwrite("p_x2_given_u1_u2_s", &InnerFactorization::p_x2_given_u1_u2_s);
    py::class_<OuterFactorization>(m, "OuterFactorization")
        .def(py::init<>())
        .def_readwrite("p_x1", &OuterFactorization::p_x1)
        .def_readwrite("p_x2_given_x1_s", &OuterFactorization::p_x2_given_x1_s);
    py::class_<JointPmf>(m, "JointPmf")
        .def_readonly("labels", &JointPmf::labels)
        .def_readonly("dims", &JointPmf::dims)
        .def_readonly("p", &JointPmf::p);
    py::class_<DmInnerEval>(m, "DmInnerEval")
        .def_readonly("rates", &DmInnerEval::rates)
        .def_readonly("feasibility", &DmInnerEval::feasibility)
        .def("feasible", &DmInnerEval::feasible);

    m.def("inner_joint", &inner_joint, py::arg("channel"), py::arg("factorization"));
    m.def("outer_joint", &outer_joint, py::arg("channel"), py::arg("factorization"));
    m.def("mutual_info", &mutual_info, py::arg("joint"), py::arg("a"), py::arg("b"),
          py::arg("c") = std::vector<std::string>{});
    m.def("dm_inner_constraints", &dm_inner_constraints, py::arg("joint"));
    m.def("dm_outer_constraints", &dm_outer_constraints, py::arg("joint"));
    m.def("dm_inner_search", &dm_inner_search, py::arg("channel"), py::arg("u1_size"),
          py::arg("u2_size"), py::arg("budget"), py::arg("seed"));
    m.def("dm_outer_search", &dm_outer_search, py::arg("channel"), py::arg("budget"),
          py::arg("seed"));
    m.def("fm_equivalence_check", &fm_equivalence_check, py::arg("a"), py::arg("b"), py::arg("c"),
          py::arg("d"), py::arg("grid_step"));
    m.def("load_dm_channel", &load_dm_channel, py::arg("path"));
    m.def("save_dm_channel", &save_dm_channel, py::arg("channel"), py::arg("path"));
    m.def("xor_channel", &xor_channel);

    // command-level helpers
    m.def("run_figure", &run_figure, py::arg("preset"), py::arg("out_dir"),
          py::arg("envelope") = false, py::arg("grid") = GridSpec{});
    m.def("run_sweep", &run_sweep, py::arg("channel"), py::arg("grid"), py::arg("envelope"),
          py::arg("out_dir"));

    m.attr("__version__") = "0.1.0";
}
