#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fluxbvp/analysis.hpp"
#include "fluxbvp/classify.hpp"
#include "fluxbvp/integrator.hpp"
#include "fluxbvp/model.hpp"
#include "fluxbvp/shooting.hpp"

namespace py = pybind11;
using namespace fluxbvp;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Shooting solver and certification toolkit for the similarity "
              "boundary value problem f''' + f f'' + g(f') = 0 with f(0)=a, "
              "f''(0)=c<0, f'(inf)=0";

    py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

    py::enum_<GKind>(m, "GKind")
        .value("Quadratic", GKind::Quadratic)
        .value("OracleCubic", GKind::OracleCubic)
        .value("Polynomial", GKind::Polynomial);

    py::class_<GSpec>(m, "GSpec")
        .def_static("quadratic", &GSpec::quadratic, py::arg("beta"))
        .def_static("oracle_cubic", &GSpec::oracle_cubic)
        .def_static("polynomial", &GSpec::polynomial, py::arg("coeffs"))
        .def("with_delta_margin", &GSpec::with_delta_margin, py::arg("delta"))
        .def_property_readonly("kind", &GSpec::kind)
        .def_property_readonly("beta", &GSpec::beta)
        .def("__call__", &GSpec::operator())
        .def("__repr__", &GSpec::describe);

    py::class_<SolverControls>(m, "SolverControls")
        .def(py::init<>())
        .def_readwrite("abs_tol", &SolverControls::abs_tol)
        .def_readwrite("rel_tol", &SolverControls::rel_tol)
        .def_readwrite("t_max", &SolverControls::t_max)
        .def_readwrite("blowup_threshold", &SolverControls::blowup_threshold)
        .def_readwrite("zero_eps", &SolverControls::zero_eps)
        .def_readwrite("event_tol", &SolverControls::event_tol)
        .def_readwrite("bisect_tol", &SolverControls::bisect_tol)
        .def_readwrite("max_bisect_iters", &SolverControls::max_bisect_iters)
        .def_readwrite("stop_at_first_downcrossing",
                       &SolverControls::stop_at_first_downcrossing)
        .def_readwrite("shoot_override", &SolverControls::shoot_override)
        .def("validate", &SolverControls::validate);

    py::class_<ProblemSpec>(m, "ProblemSpec")
        .def(py::init([](double a, double c, const GSpec& g,
                         std::optional<SolverControls> controls) {
                 ProblemSpec p;
                 p.a = a;
                 p.c = c;
                 p.g = g;
                 if (controls) p.controls = *controls;
                 p.validate();
                 return p;
             }),
             py::arg("a"), py::arg("c"), py::arg("g"),
             py::arg("controls") = std::nullopt)
        .def_readwrite("a", &ProblemSpec::a)
        .def_readwrite("c", &ProblemSpec::c)
        .def_readwrite("g", &ProblemSpec::g)
        .def_readwrite("controls", &ProblemSpec::controls);

    py::class_<ShootState>(m, "ShootState")
        .def(py::init([](double t, double f, double fp, double fpp) {
                 return ShootState{t, f, fp, fpp};
             }),
             py::arg("t"), py::arg("f"), py::arg("fp"), py::arg("fpp"))
        .def_readonly("t", &ShootState::t)
        .def_readonly("f", &ShootState::f)
        .def_readonly("fp", &ShootState::fp)
        .def_readonly("fpp", &ShootState::fpp)
        .def("__repr__", [](const ShootState& s) {
            return "ShootState(t=" + std::to_string(s.t) + ", f=" + std::to_string(s.f) +
                   ", fp=" + std::to_string(s.fp) + ", fpp=" + std::to_string(s.fpp) + ")";
        });

    py::enum_<TerminationKind>(m, "TerminationKind")
        .value("ReachedTmax", TerminationKind::ReachedTmax)
        .value("ZeroCrossing", TerminationKind::ZeroCrossing)
        .value("BlowUp", TerminationKind::BlowUp);

    py::class_<Termination>(m, "Termination")
        .def_readonly("kind", &Termination::kind)
        .def_readonly("value", &Termination::value);

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("b", &Trajectory::b)
        .def_readonly("samples", &Trajectory::samples)
        .def_readonly("termination", &Trajectory::termination)
        .def_readonly("first_downcrossing", &Trajectory::first_downcrossing)
        .def_readonly("step_underflow", &Trajectory::step_underflow)
        .def("final_time", &Trajectory::final_time)
        .def("at", &Trajectory::at, py::arg("t"));

    py::class_<Classification> cls(m, "Classification");
    py::enum_<Classification::Kind>(cls, "Kind")
        .value("TypeI", Classification::Kind::TypeI)
        .value("TypeII", Classification::Kind::TypeII)
        .value("Inconclusive", Classification::Kind::Inconclusive);
    cls.def_readonly("kind", &Classification::kind)
        .def_readonly("bounded_hint", &Classification::bounded_hint)
        .def_readonly("t0", &Classification::t0)
        .def_readonly("Tb_est", &Classification::Tb_est)
        .def_readonly("reason", &Classification::reason)
        .def("is_type_one", &Classification::is_type_one)
        .def("is_type_two", &Classification::is_type_two);

    py::class_<CheckResult>(m, "CheckResult")
        .def_readonly("name", &CheckResult::name)
        .def_readonly("applicable", &CheckResult::applicable)
        .def_readonly("passed", &CheckResult::passed)
        .def_readonly("details", &CheckResult::details);

    py::class_<BStarResult>(m, "BStarResult")
        .def_readonly("b_star", &BStarResult::b_star)
        .def_readonly("b_lo", &BStarResult::b_lo)
        .def_readonly("b_hi", &BStarResult::b_hi)
        .def_readonly("mu", &BStarResult::mu)
        .def_readonly("iterations", &BStarResult::iterations)
        .def_readonly("diagnostics", &BStarResult::diagnostics);

    py::class_<TailFit>(m, "TailFit")
        .def_readonly("mu_hat", &TailFit::mu_hat)
        .def_readonly("A_hat", &TailFit::A_hat)
        .def_readonly("rate_hat", &TailFit::rate_hat)
        .def_readonly("t_start", &TailFit::t_start)
        .def_readonly("t_end", &TailFit::t_end)
        .def_readonly("residual_norm", &TailFit::residual_norm);

    py::class_<VProfile>(m, "VProfile")
        .def_readonly("b", &VProfile::b)
        .def_readonly("y", &VProfile::y)
        .def_readonly("v", &VProfile::v)
        .def_readonly("vp", &VProfile::vp);

    m.def("g_eval", &g_eval, py::arg("g"), py::arg("x"));
    m.def(
        "check_subquadratic",
        [](const GSpec& g, std::optional<std::vector<double>> grid) {
            const std::vector<double> pts =
                grid ? *grid : default_subquadratic_grid();
            const SubquadraticReport rep = check_subquadratic(g, pts);
            py::list viols;
            for (const auto& v : rep.violations)
                viols.append(py::make_tuple(static_cast<int>(v.kind), v.x, v.gx));
            return py::make_tuple(rep.ok(), viols);
        },
        py::arg("g"), py::arg("grid") = std::nullopt,
        "Returns (ok, [(violation_kind, x, g(x)), ...])");

    m.def("integrate", &integrate, py::arg("problem"), py::arg("b"));
    m.def("sample", &sample, py::arg("trajectory"), py::arg("t"));
    m.def("classify", &classify, py::arg("trajectory"));
    m.def(
        "classify_slope",
        [](const ProblemSpec& p, double b) {
            const ClassifiedRun run = classify_slope(p, b);
            return py::make_tuple(run.cls, run.traj, run.escalations);
        },
        py::arg("problem"), py::arg("b"),
        "Returns (classification, trajectory, t_max_escalations)");
    m.def("bracket", &bracket, py::arg("problem"));
    m.def("find_bstar", &find_bstar, py::arg("problem"));
    m.def(
        "critical_trajectory",
        [](const ProblemSpec& p, const BStarResult& r) {
            const CriticalTrajectory crit = critical_trajectory(p, r);
            return py::make_tuple(crit.traj, crit.mu, crit.bound_check);
        },
        py::arg("problem"), py::arg("result"),
        "Returns (trajectory, mu, bound_check)");

    m.def("identity_residuals", &identity_residuals, py::arg("trajectory"),
          py::arg("which"));
    m.def("fit_exponential_tail", &fit_exponential_tail, py::arg("trajectory"));
    m.def("fit_power_tail", &fit_power_tail, py::arg("trajectory"), py::arg("beta"));
    m.def("v_transform", &v_transform, py::arg("trajectory"),
          py::arg("n_samples") = 2048, py::arg("y_min") = 1e-6);
    m.def("v_ode_residual", &v_ode_residual, py::arg("profile"), py::arg("beta"));
    m.def("lemma_bound_checks", &lemma_bound_checks, py::arg("trajectory"));
    m.def("map_m_to_beta", &map_m_to_beta, py::arg("m"));
    m.def("m_form_residual", &m_form_residual, py::arg("trajectory_beta"), py::arg("m"));
    m.def("beta_ode_residual", &beta_ode_residual, py::arg("trajectory"));

#ifdef VERSION_INFO
    m.attr("__version__") = VERSION_INFO;
#else
    m.attr("__version__") = "0.1.0";
#endif
}
