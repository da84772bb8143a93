#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mdcs/analysis.hpp"
#include "mdcs/commands.hpp"
#include "mdcs/optimizers.hpp"
#include "mdcs/persist.hpp"
#include "mdcs/problems.hpp"
#include "mdcs/version.hpp"

namespace py = pybind11;
using namespace mdcs;

namespace {

GradientOracle oracle_from_callable(std::size_t dim, std::string description,
                                    py::function fn) {
  GradientOracle oracle;
  oracle.dim = dim;
  oracle.description = std::move(description);
  oracle.eval = [fn](const Point& z) {
    py::tuple result = fn(z.data()).cast<py::tuple>();
    return LossGrad{result[0].cast<double>(),
                    Point(result[1].cast<std::vector<double>>())};
  };
  return oracle;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Box-constrained sign-based attack optimizers with "
            "monotonically decreasing coordinate-wise step caps";
  m.attr("__version__") = kVersion;

  py::class_<Point>(m, "Point")
      .def(py::init<std::vector<double>>())
      .def(py::init<std::vector<double>, std::vector<std::size_t>>())
      .def("__len__", &Point::size)
      .def("__getitem__",
           [](const Point& p, std::size_t i) {
             if (i >= p.size()) throw py::index_error();
             return p[i];
           })
      .def("tolist", [](const Point& p) { return p.data(); })
      .def_property_readonly("shape", &Point::shape)
      .def("__eq__", [](const Point& a, const Point& b) { return a == b; })
      .def("__repr__", [](const Point& p) {
        return "Point(dim=" + std::to_string(p.size()) + ")";
      });

  m.def("l1_norm", &l1_norm);
  m.def("l2_norm", &l2_norm);
  m.def("linf_norm", &linf_norm);
  m.def("l1_normalize", &l1_normalize);
  m.def("sign", &sign);

  py::class_<SeededRng>(m, "SeededRng")
      .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"),
           py::arg("stream_id") = 0)
      .def("next_u64", &SeededRng::next_u64)
      .def("uniform", py::overload_cast<>(&SeededRng::uniform))
      .def("uniform",
           py::overload_cast<double, double>(&SeededRng::uniform))
      .def("normal", &SeededRng::normal, py::arg("mean") = 0.0,
           py::arg("stddev") = 1.0);

  py::class_<BoxConstraint>(m, "BoxConstraint")
      .def(py::init<Point, double, double, double>(), py::arg("center"),
           py::arg("radius"), py::arg("value_lo"), py::arg("value_hi"))
      .def_readonly("center", &BoxConstraint::center)
      .def_readonly("radius", &BoxConstraint::radius)
      .def_readonly("value_lo", &BoxConstraint::value_lo)
      .def_readonly("value_hi", &BoxConstraint::value_hi)
      .def("dim", &BoxConstraint::dim);

  py::class_<DiagScaling>(m, "DiagScaling").def(py::init<Point>());

  m.def("clip", &clip);
  m.def("project_diag", &project_diag);
  m.def("membership", &membership, py::arg("box"), py::arg("z"),
        py::arg("tol") = kMembershipTol);

  py::enum_<Algorithm>(m, "Algorithm")
      .value("FGSM", Algorithm::Fgsm)
      .value("IFGSM", Algorithm::Ifgsm)
      .value("PGD", Algorithm::Pgd)
      .value("MI_FGSM", Algorithm::MiFgsm)
      .value("MDCS_MI", Algorithm::MdcsMi)
      .value("ADAM", Algorithm::Adam)
      .value("AMSGRAD", Algorithm::Amsgrad)
      .value("MDCS_MEF", Algorithm::MdcsMef)
      .value("MDCS_OPS", Algorithm::MdcsOps);

  py::enum_<StepSchedule>(m, "StepSchedule")
      .value("PRACTICE", StepSchedule::Practice)
      .value("THEOREM", StepSchedule::Theorem);

  py::enum_<BetaMode>(m, "BetaMode")
      .value("DECAY", BetaMode::Decay)
      .value("CONSTANT", BetaMode::Constant);

  py::class_<MefParams>(m, "MefParams")
      .def(py::init<>())
      .def_readwrite("n_samples", &MefParams::n_samples)
      .def_readwrite("xi", &MefParams::xi)
      .def_readwrite("explore_radius", &MefParams::explore_radius)
      .def_readwrite("mu_inner", &MefParams::mu_inner)
      .def_readwrite("mu_outer", &MefParams::mu_outer);

  py::class_<OpsParams>(m, "OpsParams")
      .def(py::init<>())
      .def_readwrite("n_ops", &OpsParams::n_ops)
      .def_readwrite("n_perturb", &OpsParams::n_perturb)
      .def_readwrite("perturb_radius", &OpsParams::perturb_radius);

  py::class_<AttackConfig>(m, "AttackConfig")
      .def(py::init<>())
      .def_readwrite("epsilon", &AttackConfig::epsilon)
      .def_readwrite("total_iters", &AttackConfig::total_iters)
      .def_readwrite("gamma", &AttackConfig::gamma)
      .def_readwrite("beta", &AttackConfig::beta)
      .def_readwrite("lambda_", &AttackConfig::lambda)
      .def_readwrite("mu", &AttackConfig::mu)
      .def_readwrite("schedule", &AttackConfig::schedule)
      .def_readwrite("beta_mode", &AttackConfig::beta_mode)
      .def_readwrite("algorithm", &AttackConfig::algorithm)
      .def_readwrite("seed", &AttackConfig::seed)
      .def_readwrite("tracked_coord", &AttackConfig::tracked_coord)
      .def_readwrite("mdcs_clamp", &AttackConfig::mdcs_clamp)
      .def_readwrite("adam_beta1", &AttackConfig::adam_beta1)
      .def_readwrite("adam_beta2", &AttackConfig::adam_beta2)
      .def_readwrite("mef", &AttackConfig::mef)
      .def_readwrite("ops", &AttackConfig::ops)
      .def("step_size", &AttackConfig::step_size)
      .def("momentum_decay", &AttackConfig::momentum_decay)
      .def("validate", &AttackConfig::validate);

  py::class_<StepRecord>(m, "StepRecord")
      .def_readonly("iter", &StepRecord::iter)
      .def_readonly("alpha", &StepRecord::alpha)
      .def_readonly("step_min", &StepRecord::step_min)
      .def_readonly("step_max", &StepRecord::step_max)
      .def_readonly("step_mean", &StepRecord::step_mean)
      .def_readonly("step_tracked", &StepRecord::step_tracked)
      .def_readonly("clamped_coords", &StepRecord::clamped_coords);

  py::class_<RunAudit>(m, "RunAudit")
      .def_readonly("m_inf_max", &RunAudit::m_inf_max)
      .def_readonly("d_min", &RunAudit::d_min)
      .def_readonly("grad_l1_max", &RunAudit::grad_l1_max)
      .def_readonly("d_monotone_violations", &RunAudit::d_monotone_violations)
      .def_readonly("d_range_violations", &RunAudit::d_range_violations)
      .def_readonly("displacement_violations",
                    &RunAudit::displacement_violations)
      .def_readonly("membership_violations",
                    &RunAudit::membership_violations);

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("points", &Trajectory::points)
      .def_readonly("losses", &Trajectory::losses)
      .def_readonly("step_records", &Trajectory::step_records)
      .def_readonly("audit", &Trajectory::audit)
      .def_readonly("valid", &Trajectory::valid);

  py::class_<GradientOracle>(m, "GradientOracle")
      .def_readonly("dim", &GradientOracle::dim)
      .def_readonly("description", &GradientOracle::description)
      .def("eval", [](const GradientOracle& o, const Point& z) {
        const LossGrad lg = o.eval(z);
        return py::make_tuple(lg.loss, lg.grad);
      });

  py::class_<ZooProblem>(m, "ZooProblem")
      .def_readonly("oracle", &ZooProblem::oracle)
      .def("argmax",
           [](const ZooProblem& p, const BoxConstraint& box) {
             return p.argmax(box);
           });

  m.def("quadratic_oracle", &quadratic_oracle, py::arg("target"),
        py::arg("scale") = 1.0);
  m.def("reddi_counterexample", &reddi_counterexample, py::arg("C"),
        py::arg("p"), py::arg("seed"));
  m.def("reddi_box", &reddi_box);
  m.def("custom_oracle", &oracle_from_callable, py::arg("dim"),
        py::arg("description"), py::arg("fn"),
        "Wrap a python callable point -> (loss, grad_list) as an oracle");

  py::class_<OscillationFixture>(m, "OscillationFixture")
      .def_readonly("problem", &OscillationFixture::problem)
      .def_readonly("box", &OscillationFixture::box)
      .def_readonly("alpha", &OscillationFixture::alpha)
      .def_readonly("period", &OscillationFixture::period)
      .def_readonly("cycle_lo", &OscillationFixture::cycle_lo)
      .def_readonly("cycle_hi", &OscillationFixture::cycle_hi)
      .def_readonly("ifgsm_suboptimality",
                    &OscillationFixture::ifgsm_suboptimality);
  m.def("sign_oscillation_fixture", &sign_oscillation_fixture);

  m.def("fgsm", &fgsm);
  m.def("pgd_init", &pgd_init);
  m.def("run", &run, py::arg("algorithm"), py::arg("oracle"), py::arg("box"),
        py::arg("cfg"));
  m.def("averaged_iterate", &averaged_iterate);
  m.def("mdcs_mef_run", &mdcs_mef_run);

  py::enum_<ClassifierKind>(m, "ClassifierKind")
      .value("LOGISTIC", ClassifierKind::Logistic)
      .value("MLP", ClassifierKind::Mlp);
  py::enum_<Activation>(m, "Activation")
      .value("RELU", Activation::ReLU)
      .value("TANH", Activation::Tanh);

  py::class_<Dataset>(m, "Dataset")
      .def(py::init<>())
      .def_readwrite("inputs", &Dataset::inputs)
      .def_readwrite("labels", &Dataset::labels)
      .def_readwrite("n_classes", &Dataset::n_classes)
      .def("__len__", &Dataset::size);

  m.def("make_blobs", &make_blobs, py::arg("rng"), py::arg("n_per_class"),
        py::arg("n_classes"), py::arg("dim"), py::arg("separation"),
        py::arg("value_lo") = 0.0, py::arg("value_hi") = 1.0);

  py::class_<ToyClassifier>(m, "ToyClassifier")
      .def_readonly("kind", &ToyClassifier::kind)
      .def_readonly("activation", &ToyClassifier::activation)
      .def("logits", &ToyClassifier::logits)
      .def("predict", &ToyClassifier::predict)
      .def("n_classes", &ToyClassifier::n_classes)
      .def("input_dim", &ToyClassifier::input_dim);

  py::class_<TrainHyper>(m, "TrainHyper")
      .def(py::init<>())
      .def_readwrite("epochs", &TrainHyper::epochs)
      .def_readwrite("batch_size", &TrainHyper::batch_size)
      .def_readwrite("learning_rate", &TrainHyper::learning_rate)
      .def_readwrite("hidden", &TrainHyper::hidden)
      .def_readwrite("activation", &TrainHyper::activation)
      .def_readwrite("init_scale", &TrainHyper::init_scale)
      .def_readwrite("seed", &TrainHyper::seed);

  py::class_<TrainResult>(m, "TrainResult")
      .def_readonly("model", &TrainResult::model)
      .def_readonly("train_accuracy", &TrainResult::train_accuracy)
      .def_readonly("final_loss", &TrainResult::final_loss);

  m.def("train_classifier", &train_classifier);
  m.def("classifier_attack_oracle", &classifier_attack_oracle);
  m.def("save_model", &save_model);
  m.def("load_model", &load_model);
  m.def("load_csv", &load_csv, py::arg("path"), py::arg("value_lo") = 0.0,
        py::arg("value_hi") = 1.0);
  m.def("save_csv", &save_csv);

  py::class_<TheoremConstants>(m, "TheoremConstants")
      .def(py::init<>())
      .def_readwrite("M", &TheoremConstants::M)
      .def_readwrite("M2", &TheoremConstants::M2)
      .def_readwrite("G", &TheoremConstants::G)
      .def_readwrite("dim", &TheoremConstants::dim)
      .def_readwrite("gamma", &TheoremConstants::gamma)
      .def_readwrite("beta", &TheoremConstants::beta)
      .def_readwrite("lambda_", &TheoremConstants::lambda);
  m.def("measured_constants", &measured_constants);
  m.def("theorem_bound", [](const TheoremConstants& k, int T) {
    const BoundPair b = theorem_bound(k, T);
    return py::make_tuple(b.printed, b.corrected);
  });

  m.def("suboptimality", &suboptimality, py::arg("problem"), py::arg("box"),
        py::arg("traj"), py::arg("averaged") = true);

  py::class_<RateFit>(m, "RateFit")
      .def_readonly("exponent", &RateFit::exponent)
      .def_readonly("coefficient", &RateFit::coefficient)
      .def_readonly("r_squared", &RateFit::r_squared)
      .def_readonly("n_used", &RateFit::n_used);
  m.def("fit_rate", &fit_rate);

  m.def("attack_success_rate", &attack_success_rate);
  py::enum_<DistortionNorm>(m, "DistortionNorm")
      .value("TWO", DistortionNorm::Two)
      .value("INF", DistortionNorm::Inf);
  m.def("ald", &ald);
  m.def("psnr", &psnr);

  py::class_<StabilityReport>(m, "StabilityReport")
      .def_readonly("asr_by_T", &StabilityReport::asr_by_T)
      .def_readonly("peak", &StabilityReport::peak)
      .def_readonly("trough", &StabilityReport::trough)
      .def_readonly("max_drawdown", &StabilityReport::max_drawdown);
  m.def("stability_report", &stability_report);
  m.def("concavity_violations", &concavity_violations, py::arg("oracle"),
        py::arg("traj"), py::arg("tol") = 1e-10);
}
