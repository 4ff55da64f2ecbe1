#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "steklov/ball_factor.hpp"
#include "steklov/development.hpp"
#include "steklov/dtn.hpp"
#include "steklov/errors.hpp"
#include "steklov/mesh.hpp"
#include "steklov/product.hpp"
#include "steklov/trace.hpp"

namespace py = pybind11;
using namespace steklov;

namespace {

// pybind11 holders cannot point to const.
using MutableChart = std::shared_ptr<MetricChart>;

Eigen::MatrixXd vertex_array(const TriangleMesh& mesh) {
  Eigen::MatrixXd out(mesh.vertices.size(), 2);
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) out.row(i) = mesh.vertices[i].transpose();
  return out;
}

Eigen::MatrixXi triangle_array(const TriangleMesh& mesh) {
  Eigen::MatrixXi out(mesh.triangles.size(), 3);
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
    for (int k = 0; k < 3; ++k) out(i, k) = mesh.triangles[i][k];
  }
  return out;
}

SampledPath make_path(std::vector<double> t, const Eigen::MatrixXd& x) {
  if (static_cast<Eigen::Index>(t.size()) != x.rows()) {
    fail(ErrorCode::InvalidArgument, "path needs one row of coordinates per time sample");
  }
  SampledPath p;
  p.t = std::move(t);
  for (Eigen::Index i = 0; i < x.rows(); ++i) p.x.push_back(x.row(i).transpose());
  return p;
}

py::dict spectral_dict(const SpectralResult& r) {
  py::dict d;
  d["eigenvalues"] = r.eigenvalues;
  d["eigenvectors"] = r.eigenvectors;
  d["boundary_index"] = r.boundary_index;
  d["vol"] = r.vol;
  d["boundary_vol"] = r.boundary_vol;
  d["h"] = r.h;
  d["num_vertices"] = r.num_vertices;
  d["num_boundary"] = r.num_boundary;
  return d;
}

py::dict transport_dict(const TransportResult& r) {
  std::vector<double> t;
  std::vector<Vector> x;
  for (const auto& s : r.samples) {
    t.push_back(s.t);
    x.push_back(s.x);
  }
  py::dict d;
  d["t"] = t;
  d["x"] = x;
  d["end"] = r.samples.back().x;
  d["frame"] = r.samples.back().frame;
  d["max_frame_defect"] = r.max_frame_defect;
  d["refinement_gap"] = r.refinement_gap;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Steklov spectra, trace estimates, product spectra and holonomy experiments";

  static py::exception<Error> error(m, "SteklovError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  py::class_<Disk>(m, "Disk").def(py::init<double>(), py::arg("radius") = 1.0).def_readwrite("radius", &Disk::radius);
  py::class_<Ellipse>(m, "Ellipse")
      .def(py::init<double, double>(), py::arg("a"), py::arg("b"))
      .def_readwrite("a", &Ellipse::a)
      .def_readwrite("b", &Ellipse::b);
  py::class_<Rectangle>(m, "Rectangle")
      .def(py::init<double, double>(), py::arg("width"), py::arg("height"))
      .def_readwrite("width", &Rectangle::width)
      .def_readwrite("height", &Rectangle::height);
  py::class_<Annulus>(m, "Annulus")
      .def(py::init<double, double>(), py::arg("r_in"), py::arg("r_out"))
      .def_readwrite("r_in", &Annulus::r_in)
      .def_readwrite("r_out", &Annulus::r_out);
  py::class_<Polygon>(m, "Polygon")
      .def(py::init([](const std::vector<std::pair<double, double>>& pts) {
             Polygon p;
             for (const auto& [x, y] : pts) p.vertices.emplace_back(x, y);
             return p;
           }),
           py::arg("vertices"));
  py::class_<PerturbedDisk>(m, "PerturbedDisk")
      .def(py::init<double, int>(), py::arg("eps"), py::arg("k"))
      .def_readwrite("eps", &PerturbedDisk::eps)
      .def_readwrite("k", &PerturbedDisk::k);

  m.def(
      "build_mesh",
      [](const DomainShape& shape, double h) {
        const TriangleMesh mesh = build_mesh(shape, h);
        return py::make_tuple(vertex_array(mesh), triangle_array(mesh));
      },
      py::arg("shape"), py::arg("h"), "Vertices (n x 2) and triangles (t x 3) of the shape's mesh.");

  m.def(
      "steklov_spectrum",
      [](const DomainShape& shape, double h, int num) { return spectral_dict(steklov_spectrum(build_mesh(shape, h), num)); },
      py::arg("shape"), py::arg("h"), py::arg("num") = 4);

  py::class_<TraceReport>(m, "TraceReport")
      .def_readonly("shape", &TraceReport::shape)
      .def_readonly("param", &TraceReport::param)
      .def_readonly("h", &TraceReport::h)
      .def_readonly("sigma1", &TraceReport::sigma1)
      .def_readonly("sigma2", &TraceReport::sigma2)
      .def_readonly("trace_sum", &TraceReport::trace_sum)
      .def_readonly("vol", &TraceReport::vol)
      .def_readonly("boundary_vol", &TraceReport::boundary_vol)
      .def_readonly("ratio", &TraceReport::ratio)
      .def_readonly("deficit", &TraceReport::deficit)
      .def_readonly("inverse_trace", &TraceReport::inverse_trace)
      .def_readonly("cauchy_schwarz_bound", &TraceReport::cauchy_schwarz_bound)
      .def_readonly("brock_bound", &TraceReport::brock_bound);
  m.def("trace_report", py::overload_cast<const DomainShape&, double>(&trace_report), py::arg("shape"), py::arg("h"));
  m.def("trace_tolerance", &trace_tolerance, py::arg("h"));
  m.def(
      "sweep",
      [](const std::string& family, double from, double to, int steps, double h, int k, int threads) {
        SweepSpec spec;
        if (family == "ellipse-aspect") {
          spec.family = SweepFamily::EllipseAspect;
        } else if (family == "perturbed-disk") {
          spec.family = SweepFamily::PerturbedDisk;
        } else {
          fail(ErrorCode::InvalidArgument, "unknown family '" + family + "'");
        }
        spec.from = from;
        spec.to = to;
        spec.steps = steps;
        spec.h = h;
        spec.k = k;
        py::gil_scoped_release release;
        return sweep(spec, threads);
      },
      py::arg("family"), py::arg("from_"), py::arg("to"), py::arg("steps"), py::arg("h"), py::arg("k") = 3,
      py::arg("threads") = 0);

  py::enum_<Parity>(m, "Parity").value("Even", Parity::Even).value("Odd", Parity::Odd);
  m.def("sigma_mu_interval", &sigma_mu_interval, py::arg("R"), py::arg("mu"), py::arg("parity"));
  m.def("sigma_mu_disk", &sigma_mu_disk, py::arg("R"), py::arg("mu"), py::arg("k"));
  m.def("sigma_mu_disk_series", &sigma_mu_disk_series, py::arg("R"), py::arg("mu"), py::arg("k"));
  m.def(
      "sigma_of_mu", [](int dim, double R, double mu) { return sigma_of_mu(BallFactorQuery{dim, R, mu, 0}); },
      py::arg("m"), py::arg("R"), py::arg("mu"));

  py::class_<CircleFactor>(m, "CircleFactor").def(py::init<double>(), py::arg("L"));
  py::class_<TorusFactor>(m, "TorusFactor").def(py::init<double, double>(), py::arg("L1"), py::arg("L2"));
  py::class_<ListedFactor>(m, "ListedFactor").def(py::init<std::vector<double>>(), py::arg("values"));

  m.def(
      "product_steklov_spectrum",
      [](int dim, double R, const ClosedFactor& fiber, int num) {
        std::vector<std::pair<double, int>> out;
        for (const auto& v : product_steklov_spectrum(ProductSpec{dim, R, fiber, num})) {
          out.emplace_back(v.value, v.multiplicity);
        }
        return out;
      },
      py::arg("m"), py::arg("R"), py::arg("fiber"), py::arg("num"), "Ascending (value, multiplicity) pairs.");
  m.def(
      "rigidity_condition",
      [](int dim, double R, const ClosedFactor& fiber) {
        const RigidityCheck c = rigidity_condition(ProductSpec{dim, R, fiber, 2});
        py::dict d;
        d["holds"] = c.holds;
        d["mu1"] = c.mu1;
        d["sigma_mu1"] = c.sigma_mu1;
        d["threshold"] = c.threshold;
        return d;
      },
      py::arg("m"), py::arg("R"), py::arg("fiber"));
  m.def("critical_length", &critical_length, py::arg("R") = 1.0);

  py::class_<MetricChart, MutableChart>(m, "MetricChart")
      .def_property_readonly("dim", &MetricChart::dim)
      .def_property_readonly("name", &MetricChart::name)
      .def("metric", &MetricChart::metric)
      .def("contains", &MetricChart::contains)
      .def("is_flat", &MetricChart::is_flat);
  m.def(
      "chart_by_name", [](const std::string& name) { return std::const_pointer_cast<MetricChart>(chart_by_name(name)); },
      py::arg("name"));
  m.def(
      "orthonormal_frame", [](const MutableChart& c, const Vector& x) { return orthonormal_frame(*c, x); }, py::arg("chart"),
      py::arg("x"));

  py::class_<SampledPath>(m, "SampledPath")
      .def(py::init(&make_path), py::arg("t"), py::arg("x"))
      .def_readonly("t", &SampledPath::t)
      .def_readonly("x", &SampledPath::x);

  m.def(
      "parallel_transport",
      [](const MutableChart& c, const SampledPath& curve, const Matrix& frame0, int steps) {
        return transport_dict(parallel_transport(*c, curve, frame0, steps));
      },
      py::arg("chart"), py::arg("curve"), py::arg("frame0"), py::arg("steps_per_unit") = kStepsPerUnit);
  m.def(
      "develop",
      [](const MutableChart& c, const Vector& p, const Matrix& frame0, const Profile& v, double t0, double t1, int steps) {
        return transport_dict(develop(*c, p, frame0, v, t0, t1, steps));
      },
      py::arg("chart"), py::arg("p"), py::arg("frame0"), py::arg("v"), py::arg("t0") = 0.0, py::arg("t1") = 1.0,
      py::arg("steps_per_unit") = kStepsPerUnit);
  m.def(
      "horizontal_lift",
      [](const MutableChart& c, const SampledPath& base, const Vector& fiber_start) {
        return horizontal_lift(*c, base, fiber_start);
      },
      py::arg("chart"), py::arg("base_path"), py::arg("fiber_start"));
  m.def(
      "holonomy_path_independence",
      [](const MutableChart& c, const SampledPath& a, const SampledPath& b, const Vector& fiber_start) {
        const HolonomyResult r = holonomy_path_independence(*c, a, b, fiber_start);
        py::dict d;
        d["gap"] = r.gap;
        d["winding"] = r.winding;
        d["end_a"] = r.end_a;
        d["end_b"] = r.end_b;
        d["max_frame_defect"] = r.max_frame_defect;
        d["frames_ok"] = r.frames_ok;
        return d;
      },
      py::arg("chart"), py::arg("path_a"), py::arg("path_b"), py::arg("fiber_start"));
  m.def(
      "jacobi_transport",
      [](const MutableChart& c, const Vector& p, const Matrix& frame0, const VelocityField& v, const std::vector<double>& us,
         int steps) {
        const JacobiResult r = jacobi_transport(*c, p, frame0, v, us, steps);
        py::dict d;
        d["u"] = r.u;
        d["U"] = r.U_end;
        d["refinement_gap"] = r.refinement_gap;
        return d;
      },
      py::arg("chart"), py::arg("p"), py::arg("frame0"), py::arg("v"), py::arg("us"), py::arg("steps") = kStepsPerUnit);
}
