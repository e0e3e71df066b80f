#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "adaswitch/harness.hpp"
#include "adaswitch/portfolio.hpp"
#include "adaswitch/potential.hpp"
#include "adaswitch/scalar_learners.hpp"
#include "adaswitch/suites.hpp"
#include "adaswitch/vector_learners.hpp"

namespace py = pybind11;
using namespace adaswitch;

namespace {

py::array_t<double> to_numpy(const Matrix& m) {
    py::array_t<double> out({m.rows, m.cols});
    std::copy(m.data.begin(), m.data.end(), out.mutable_data());
    return out;
}

Matrix from_numpy(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 2) throw std::invalid_argument("expected a 2-D array");
    Matrix m(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
    std::copy(a.data(), a.data() + a.size(), m.data.begin());
    return m;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Comparator-adaptive online learners with switching costs";

    auto range_error = py::register_exception<RangeError>(m, "RangeError", PyExc_OverflowError);
    py::register_exception<LifecycleError>(m, "LifecycleError", PyExc_RuntimeError);
    py::register_exception<GradientBoundError>(m, "GradientBoundError", PyExc_ValueError);
    (void)range_error;

    py::class_<LearnerConfig>(m, "LearnerConfig")
        .def_static("switching", &LearnerConfig::switching, py::arg("C"), py::arg("G"), py::arg("lam"))
        .def_static("doubling", &LearnerConfig::doubling, py::arg("C"), py::arg("G"), py::arg("lam"))
        .def_static("with_alpha", &LearnerConfig::with_alpha, py::arg("C"), py::arg("G"),
                    py::arg("lam"), py::arg("alpha"))
        .def_readonly("C", &LearnerConfig::C)
        .def_readonly("G", &LearnerConfig::G)
        .def_readonly("lam", &LearnerConfig::lambda)
        .def_readonly("alpha", &LearnerConfig::alpha);

    m.def("erfi", &erfi, py::arg("z"));
    m.def("erfi_inv", &erfi_inv, py::arg("y"));
    m.def("potential_value",
          [](const LearnerConfig& c, double t, double S) { return potential_value(c, {t, S}); },
          py::arg("cfg"), py::arg("t"), py::arg("S"));
    m.def("discrete_derivs",
          [](const LearnerConfig& c, double t, double S) {
              const auto d = discrete_derivs(c, {t, S});
              return py::make_tuple(d.gradS, d.gradT, d.laplS);
          },
          py::arg("cfg"), py::arg("t"), py::arg("S"), "(gradS, gradT, laplS)");
    m.def("analytic_derivs",
          [](const LearnerConfig& c, double t, double S) {
              const auto d = analytic_derivs(c, {t, S});
              return py::make_tuple(d.dS, d.dt, d.dSS, d.dSSS);
          },
          py::arg("cfg"), py::arg("t"), py::arg("S"), "(dS, dt, dSS, dSSS)");
    m.def("residual_delta",
          [](const LearnerConfig& c, double t, double S) { return residual_delta(c, {t, S}); },
          py::arg("cfg"), py::arg("t"), py::arg("S"));

    py::class_<ScalarLearner>(m, "ScalarLearner")
        .def("predict", &ScalarLearner::predict)
        .def("observe", &ScalarLearner::observe, py::arg("g"))
        .def_property_readonly("lipschitz", &ScalarLearner::lipschitz);
    py::class_<PotentialLearner, ScalarLearner>(m, "PotentialLearner")
        .def(py::init<const LearnerConfig&>(), py::arg("cfg"))
        .def_property_readonly("t", [](const PotentialLearner& l) { return l.state().t; })
        .def_property_readonly("S", [](const PotentialLearner& l) { return l.state().S; });
    py::class_<BaselineLearner, ScalarLearner>(m, "BaselineLearner")
        .def(py::init<double, double, double>(), py::arg("C"), py::arg("G"), py::arg("lam"))
        .def_property_readonly("wealth", [](const BaselineLearner& l) { return l.state().wealth; });
    py::class_<DoublingLearner, ScalarLearner>(m, "DoublingLearner")
        .def(py::init<double, double, double>(), py::arg("C"), py::arg("G"), py::arg("lam"))
        .def_property_readonly("epoch", &DoublingLearner::epoch);

    py::class_<VectorLearner>(m, "VectorLearner")
        .def("predict", &VectorLearner::predict)
        .def("observe", [](VectorLearner& l, const std::vector<double>& g) { l.observe(g); },
             py::arg("g"))
        .def_property_readonly("dim", &VectorLearner::dim);
    m.def("coordinate_olo",
          [](std::size_t d, double C, double G, double lam) -> std::unique_ptr<VectorLearner> {
              return make_coordinate_olo(d, C, G, lam);
          },
          py::arg("d"), py::arg("C"), py::arg("G"), py::arg("lam"));
    m.def("coordinate_baseline",
          [](std::size_t d, double C, double G, double lam) -> std::unique_ptr<VectorLearner> {
              return make_coordinate_baseline(d, C, G, lam);
          },
          py::arg("d"), py::arg("C"), py::arg("G"), py::arg("lam"));
    m.def("lea_learner",
          [](const std::vector<double>& prior, double G, double lam) -> std::unique_ptr<VectorLearner> {
              return std::make_unique<LeaLearner>(SimplexPoint(prior), G, lam);
          },
          py::arg("prior"), py::arg("G"), py::arg("lam"));
    m.def("lea_project",
          [](const std::vector<double>& w) { return lea_project(w).weights(); }, py::arg("w"));
    m.def("divergences",
          [](const std::vector<double>& u, const std::vector<double>& p) {
              const auto d = divergences(u, p);
              return py::dict(py::arg("tv") = d.tv, py::arg("kl") = d.kl, py::arg("f_div") = d.f_div);
          },
          py::arg("u"), py::arg("p"));

    m.def("potential_bound",
          [](double C, double G, double lam, double u, double T) {
              BoundParams p;
              p.C = C;
              p.G = G;
              p.lambda = lam;
              return theoretical_bound(TheoremId::potential_regret, p, std::vector<double>{u}, T);
          },
          py::arg("C"), py::arg("G"), py::arg("lam"), py::arg("u"), py::arg("T"));

    m.def("gen_synthetic_market",
          [](int model, std::int64_t T, std::uint64_t seed, bool noise) {
              return to_numpy(gen_synthetic_market(model, T, seed, noise));
          },
          py::arg("model"), py::arg("T"), py::arg("seed"), py::arg("include_noise") = true);
    m.def("backtest",
          [](VectorLearner& learner, const py::array_t<double, py::array::c_style | py::array::forcecast>& g,
             double lam) { return backtest(learner, from_numpy(g), lam).wealth; },
          py::arg("learner"), py::arg("gradients"), py::arg("lam"),
          "Wealth curve of the learner trading on the given gradients.");

    m.def("run_suite",
          [](const std::string& name, std::uint64_t seed, std::int64_t T) {
              SuiteOptions opts;
              opts.seed = seed;
              opts.T = T;
              opts.negative_controls = false;
              py::list out;
              for (const auto& c : run_suite(name, opts).checks) {
                  out.append(py::dict(py::arg("name") = c.name, py::arg("passed") = c.passed,
                                      py::arg("control") = c.control, py::arg("worst") = c.worst,
                                      py::arg("detail") = c.detail));
              }
              return out;
          },
          py::arg("name"), py::arg("seed") = 0, py::arg("T") = 4096);
}
