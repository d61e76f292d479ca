#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "jhtrack/association.hpp"
#include "jhtrack/geometry.hpp"
#include "jhtrack/image_filter.hpp"
#include "jhtrack/io.hpp"
#include "jhtrack/metrics.hpp"
#include "jhtrack/synth.hpp"
#include "jhtrack/tracker.hpp"
#include "jhtrack/tuner.hpp"

namespace py = pybind11;
using namespace jhtrack;

PYBIND11_MODULE(_core, m) {
  m.doc() = "joint homography and ground-plane state tracking";

  py::register_exception<TrackingError>(m, "TrackingError");

  py::class_<BBox>(m, "BBox")
      .def(py::init<>())
      .def(py::init([](double l, double t, double r, double b) {
             return BBox{l, t, r, b};
           }),
           py::arg("l"), py::arg("t"), py::arg("r"), py::arg("b"))
      .def_static("from_ltwh", &BBox::from_ltwh, py::arg("left"),
                  py::arg("top"), py::arg("width"), py::arg("height"))
      .def_readwrite("l", &BBox::l)
      .def_readwrite("t", &BBox::t)
      .def_readwrite("r", &BBox::r)
      .def_readwrite("b", &BBox::b)
      .def("width", &BBox::width)
      .def("height", &BBox::height)
      .def("__repr__", [](const BBox& b) {
        return "BBox(l=" + std::to_string(b.l) + ", t=" + std::to_string(b.t) +
               ", r=" + std::to_string(b.r) + ", b=" + std::to_string(b.b) + ")";
      });

  py::class_<Homography>(m, "Homography")
      .def(py::init<>())
      .def(py::init<const Eigen::Matrix3d&>(), py::arg("matrix"))
      .def_property_readonly("matrix",
                             [](const Homography& h) { return h.m; });

  py::class_<AffineMotion>(m, "AffineMotion")
      .def(py::init<>())
      .def(py::init([](const Eigen::Matrix<double, 2, 3>& a) {
             AffineMotion motion;
             motion.a = a;
             return motion;
           }),
           py::arg("matrix"))
      .def_property_readonly("matrix",
                             [](const AffineMotion& a) { return a.a; });

  m.def("project", &project, py::arg("h"), py::arg("ground"));
  m.def("unproject", &unproject, py::arg("h"), py::arg("image"));
  m.def("jacobian_ground", &jacobian_ground, py::arg("h"), py::arg("ground"));
  m.def("jacobian_homography", &jacobian_homography, py::arg("h"),
        py::arg("ground"));
  m.def("apply_affine", &apply_affine, py::arg("a"), py::arg("h"));
  m.def("bottom_centre", &bottom_centre, py::arg("box"));
  m.def("biou", &biou, py::arg("a"), py::arg("b"), py::arg("buffer") = 0.0);

  m.def("chi2_cdf", &chi2_cdf, py::arg("x"), py::arg("k"));
  m.def("p_of_d", &p_of_d, py::arg("d"), py::arg("dof") = 24);

  m.def(
      "solve_assignment",
      [](const Eigen::MatrixXd& scores, double gate) {
        const Assignment a = solve_assignment(ScoreMatrix{scores, gate});
        return py::make_tuple(a.matches, a.unmatched_rows, a.unmatched_cols);
      },
      py::arg("scores"), py::arg("gate") = 0.0,
      "returns (matches, unmatched_rows, unmatched_cols)");

  py::class_<TrackerConfig>(m, "TrackerConfig")
      .def(py::init<>())
      .def_readwrite("sigma_x", &TrackerConfig::sigma_x)
      .def_readwrite("sigma_y", &TrackerConfig::sigma_y)
      .def_readwrite("alpha1", &TrackerConfig::alpha1)
      .def_readwrite("alpha2", &TrackerConfig::alpha2)
      .def_readwrite("alpha3", &TrackerConfig::alpha3)
      .def_readwrite("omega", &TrackerConfig::omega)
      .def_readwrite("b", &TrackerConfig::b)
      .def_readwrite("d_high", &TrackerConfig::d_high)
      .def_readwrite("d_low", &TrackerConfig::d_low)
      .def_readwrite("p_ss", &TrackerConfig::p_ss)
      .def_readwrite("p_dd", &TrackerConfig::p_dd)
      .def_readwrite("p_ww", &TrackerConfig::p_ww)
      .def_readwrite("p_ii", &TrackerConfig::p_ii)
      .def_readwrite("v", &TrackerConfig::v)
      .def_readwrite("sigma_m", &TrackerConfig::sigma_m)
      .def_readwrite("n", &TrackerConfig::n)
      .def_readwrite("m", &TrackerConfig::m)
      .def_readwrite("chi2_dof", &TrackerConfig::chi2_dof)
      .def_readwrite("dt", &TrackerConfig::dt)
      .def_readwrite("stage2_ground_only", &TrackerConfig::stage2_ground_only)
      .def_readwrite("coast_coupling", &TrackerConfig::coast_coupling)
      .def("validate", &TrackerConfig::validate);

  py::class_<Detection>(m, "Detection")
      .def(py::init<>())
      .def(py::init([](const BBox& box, double conf) {
             return Detection{box, conf};
           }),
           py::arg("box"), py::arg("conf") = 1.0)
      .def_readwrite("box", &Detection::box)
      .def_readwrite("conf", &Detection::conf);

  py::class_<OutputRow>(m, "OutputRow")
      .def_readonly("id", &OutputRow::id)
      .def_readonly("box", &OutputRow::box)
      .def_readonly("conf", &OutputRow::conf);

  py::class_<TrackDiag>(m, "TrackDiag")
      .def_readonly("id", &TrackDiag::id)
      .def_readonly("mu_static", &TrackDiag::mu_static)
      .def_readonly("mu_dynamic", &TrackDiag::mu_dynamic)
      .def_readonly("mu_image", &TrackDiag::mu_image)
      .def_readonly("mu_ground", &TrackDiag::mu_ground)
      .def_readonly("updated", &TrackDiag::updated);

  py::class_<FrameResult>(m, "FrameResult")
      .def_readonly("frame", &FrameResult::frame)
      .def_readonly("rows", &FrameResult::rows)
      .def_readonly("diags", &FrameResult::diags);

  py::class_<Tracker>(m, "Tracker")
      .def(py::init<const Homography&, const TrackerConfig&>(), py::arg("h0"),
           py::arg("config"))
      .def("step", &Tracker::step, py::arg("frame"), py::arg("detections"),
           py::arg("affine") = AffineMotion{});

  py::class_<TrackRow>(m, "TrackRow")
      .def(py::init([](long frame, int id, const BBox& box, double conf) {
             return TrackRow{frame, id, box, conf};
           }),
           py::arg("frame"), py::arg("id"), py::arg("box"),
           py::arg("conf") = 1.0)
      .def_readwrite("frame", &TrackRow::frame)
      .def_readwrite("id", &TrackRow::id)
      .def_readwrite("box", &TrackRow::box)
      .def_readwrite("conf", &TrackRow::conf);

  py::class_<SceneSpec>(m, "SceneSpec")
      .def(py::init<>())
      .def_readwrite("name", &SceneSpec::name)
      .def_readwrite("frames", &SceneSpec::frames)
      .def_readwrite("seed", &SceneSpec::seed)
      .def_readwrite("noise_px", &SceneSpec::noise_px)
      .def_readwrite("dropout", &SceneSpec::dropout);

  py::class_<SyntheticScene>(m, "SyntheticScene")
      .def_readonly("gt", &SyntheticScene::gt)
      .def_readonly("fps", &SyntheticScene::fps)
      .def_property_readonly("h0",
                             [](const SyntheticScene& s) { return s.h0; });

  m.def(
      "generate_scene",
      [](const std::string& name, py::object seed) {
        SceneSpec spec = named_scene(name);
        if (!seed.is_none()) {
          spec.seed = seed.cast<std::uint64_t>();
        }
        return generate(spec);
      },
      py::arg("name"), py::arg("seed") = py::none());

  m.def("track_scene", &track_scene, py::arg("scene"), py::arg("config"));

  py::class_<MotaResult>(m, "MotaResult")
      .def_readonly("mota", &MotaResult::mota)
      .def_readonly("tp", &MotaResult::tp)
      .def_readonly("fn", &MotaResult::fn)
      .def_readonly("fp", &MotaResult::fp)
      .def_readonly("idsw", &MotaResult::idsw);

  py::class_<Idf1Result>(m, "Idf1Result")
      .def_readonly("idf1", &Idf1Result::idf1)
      .def_readonly("idtp", &Idf1Result::idtp)
      .def_readonly("idfp", &Idf1Result::idfp)
      .def_readonly("idfn", &Idf1Result::idfn);

  m.def("mota", &mota, py::arg("gt"), py::arg("res"), py::arg("iou_gate") = 0.5);
  m.def("idf1", &idf1, py::arg("gt"), py::arg("res"), py::arg("iou_gate") = 0.5);

  m.def(
      "pattern_search",
      [](const std::function<double(const std::vector<double>&)>& objective,
         const std::vector<std::tuple<std::string, double, double, double,
                                      double>>& params,
         int max_iters) {
        SearchSpace space;
        for (const auto& [name, init, step, lo, hi] : params) {
          space.params.push_back(SearchParam{name, init, step, lo, hi, false});
        }
        const PatternSearchResult r =
            pattern_search(objective, space, max_iters);
        return py::make_tuple(r.best_point, r.best_value, r.trace.size());
      },
      py::arg("objective"), py::arg("params"), py::arg("max_iters") = 200,
      "params: (name, initial, step, lower, upper); returns (best_point, "
      "best_value, evaluations)");
}
