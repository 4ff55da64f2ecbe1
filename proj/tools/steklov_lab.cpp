#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "steklov/development.hpp"
#include "steklov/dtn.hpp"
#include "steklov/errors.hpp"
#include "steklov/io.hpp"
#include "steklov/mesh.hpp"
#include "steklov/product.hpp"
#include "steklov/trace.hpp"

using namespace steklov;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

struct ShapeFlags {
  std::string shape;
  std::string mesh;
  double radius = 1.0;
  double a = 2.0;
  double b = 1.0;
  double w = 1.0;
  double h_len = 1.0;
  double r_in = 0.5;
  double r_out = 1.0;
  double eps = 0.05;
  int k = 3;
  std::string vertices;
};

struct Output {
  std::string out;
  std::string format = "json";
};

// Numbers separated by commas, semicolons or whitespace.
std::vector<double> parse_numbers(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::size_t i = 0;
  auto is_sep = [](char c) { return c == ',' || c == ';' || std::isspace(static_cast<unsigned char>(c)); };
  while (i < text.size()) {
    while (i < text.size() && is_sep(text[i])) ++i;
    if (i == text.size()) break;
    std::size_t j = i;
    while (j < text.size() && !is_sep(text[j])) ++j;
    double v = 0.0;
    const auto res = std::from_chars(text.data() + i, text.data() + j, v);
    if (res.ec != std::errc() || res.ptr != text.data() + j) {
      fail(ErrorCode::InvalidArgument, what + ": cannot parse '" + text.substr(i, j - i) + "'");
    }
    out.push_back(v);
    i = j;
  }
  return out;
}

Vector parse_vector(const std::string& text, int dim, const std::string& what) {
  const auto v = parse_numbers(text, what);
  if (static_cast<int>(v.size()) != dim) {
    fail(ErrorCode::InvalidArgument, what + " needs " + std::to_string(dim) + " components");
  }
  return Eigen::Map<const Vector>(v.data(), dim);
}

DomainShape make_shape(const ShapeFlags& f) {
  if (f.shape == "disk") return Disk{f.radius};
  if (f.shape == "ellipse") return Ellipse{f.a, f.b};
  if (f.shape == "rectangle") return Rectangle{f.w, f.h_len};
  if (f.shape == "annulus") return Annulus{f.r_in, f.r_out};
  if (f.shape == "perturbed-disk") return PerturbedDisk{f.eps, f.k};
  if (f.shape == "polygon") {
    const auto xy = parse_numbers(f.vertices, "--vertices");
    if (xy.size() % 2 != 0) fail(ErrorCode::InvalidShape, "--vertices needs x,y pairs");
    Polygon p;
    for (std::size_t i = 0; i < xy.size(); i += 2) p.vertices.emplace_back(xy[i], xy[i + 1]);
    return p;
  }
  fail(ErrorCode::InvalidShape, "unknown shape '" + f.shape + "'");
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::MalformedInput, "cannot open " + path);
  return in;
}

void emit(const Output& o, const std::string& payload) {
  if (o.out.empty()) {
    std::cout << payload;
  } else {
    write_file_atomic(o.out, payload);
  }
}

void add_shape_flags(CLI::App* app, ShapeFlags& f) {
  app->add_option("--shape", f.shape, "disk | ellipse | rectangle | annulus | polygon | perturbed-disk");
  app->add_option("--mesh", f.mesh, "Read a .tmesh file instead of meshing a shape");
  app->add_option("--radius", f.radius, "Disk radius")->capture_default_str();
  app->add_option("--a", f.a, "Ellipse semi-axis along x")->capture_default_str();
  app->add_option("--b", f.b, "Ellipse semi-axis along y")->capture_default_str();
  app->add_option("--w", f.w, "Rectangle width")->capture_default_str();
  app->add_option("--h-len", f.h_len, "Rectangle height")->capture_default_str();
  app->add_option("--r-in", f.r_in, "Annulus inner radius")->capture_default_str();
  app->add_option("--r-out", f.r_out, "Annulus outer radius")->capture_default_str();
  app->add_option("--eps", f.eps, "Perturbed disk amplitude")->capture_default_str();
  app->add_option("--k", f.k, "Perturbed disk frequency")->capture_default_str();
  app->add_option("--vertices", f.vertices, "Polygon vertices 'x,y;x,y;...'");
}

void add_output_flags(CLI::App* app, Output& o, bool csv) {
  app->add_option("--out", o.out, "Output file (stdout when omitted)");
  if (csv) app->add_option("--format", o.format, "json | csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
}

struct UsageError {
  std::string message;
  const CLI::App* app;
};

void require_shape(const CLI::App* app, const ShapeFlags& f) {
  if (f.shape.empty() && f.mesh.empty()) throw UsageError{"--shape is required", app};
}

// Mesh from --mesh, else from the shape flags; the label is used in reports.
TriangleMesh load_mesh(const ShapeFlags& f, double h, std::string& label) {
  if (!f.mesh.empty()) {
    auto in = open_input(f.mesh);
    label = "mesh(" + f.mesh + ")";
    return read_tmesh(in);
  }
  const DomainShape shape = make_shape(f);
  label = describe(shape);
  return build_mesh(shape, h);
}

std::string spectrum_csv(const SpectralResult& r) {
  std::string out = "index,sigma\n";
  for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
    out += std::to_string(i) + "," + format_number(r.eigenvalues[i]) + "\n";
  }
  return out;
}

Vector default_point(const std::string& chart) {
  if (chart == "flat-polar") return (Vector(2) << 1.0, 0.0).finished();
  if (chart == "strip-cover") return (Vector(2) << 0.0, 1.5).finished();
  if (chart == "sphere") return (Vector(2) << std::numbers::pi / 2, 0.0).finished();
  if (chart == "product-disk-circle") return Vector::Zero(3);
  return Vector::Zero(2);
}

void write_vector(JsonWriter& w, const Vector& v) { w.array(std::span<const double>(v.data(), v.size())); }

void write_frame(JsonWriter& w, const Matrix& e) {
  w.begin_array();
  for (Eigen::Index c = 0; c < e.cols(); ++c) write_vector(w, e.col(c));
  w.end_array();
}

struct DevelopFlags {
  std::string chart;
  std::string mode = "transport";
  std::vector<std::string> path;
  std::string paths;
  std::string v;
  std::string p;
  std::string fiber_start;
  std::string grid;
  std::string us;
  int steps = kStepsPerUnit;
};

std::string run_develop(const DevelopFlags& f) {
  const ChartPtr chart = chart_by_name(f.chart);
  const int d = chart->dim();
  const Vector p = f.p.empty() ? default_point(f.chart) : parse_vector(f.p, d, "--p");
  if (f.steps < 1) fail(ErrorCode::InvalidArgument, "--steps must be positive");

  JsonWriter w;
  w.begin_object().field("chart", chart->name()).field("mode", f.mode);
  auto single_path = [&](int dim) {
    if (f.path.size() != 1) fail(ErrorCode::InvalidArgument, "mode " + f.mode + " needs exactly one --path");
    auto in = open_input(f.path.front());
    return read_path(in, dim);
  };
  auto report_transport = [&](const TransportResult& r) {
    const FrameSample& end = r.samples.back();
    w.key("end");
    write_vector(w, end.x);
    w.key("frame");
    write_frame(w, end.frame);
    w.field("max_frame_defect", r.max_frame_defect)
        .field("frames_ok", r.max_frame_defect <= 1e-8)
        .field("refinement_gap", r.refinement_gap);
  };

  if (f.mode == "transport") {
    const SampledPath curve = single_path(d);
    report_transport(parallel_transport(*chart, curve, orthonormal_frame(*chart, curve.front()), f.steps));
  } else if (f.mode == "develop") {
    if (f.v.empty()) fail(ErrorCode::InvalidArgument, "mode develop needs --v");
    auto in = open_input(f.v);
    const SampledPath v = read_path(in, d);
    w.key("start");
    write_vector(w, p);
    report_transport(develop(*chart, p, orthonormal_frame(*chart, p), v, f.steps));
  } else if (f.mode == "lift" || f.mode == "holonomy") {
    const auto* product = dynamic_cast<const ProductChart*>(chart.get());
    const auto* strip = dynamic_cast<const StripCoverChart*>(chart.get());
    if (!product && !strip) fail(ErrorCode::NotASubmersionChart, "chart " + chart->name() + " is not a product or covering chart");
    const int base_dim = strip ? 2 : product->base_dim();
    const int fiber_dim = strip ? 1 : d - base_dim;
    const Vector fiber = f.fiber_start.empty() ? Vector::Zero(fiber_dim) : parse_vector(f.fiber_start, fiber_dim, "--fiber-start");
    if (f.mode == "lift") {
      const SampledPath lift = horizontal_lift(*chart, single_path(base_dim), fiber, f.steps);
      w.key("start");
      write_vector(w, lift.front());
      w.key("end");
      write_vector(w, lift.back());
    } else {
      std::vector<SampledPath> pair;
      if (!f.paths.empty()) {
        auto in = open_input(f.paths);
        pair = read_paths(in, base_dim);
      } else {
        for (const auto& file : f.path) {
          auto in = open_input(file);
          pair.push_back(read_path(in, base_dim));
        }
      }
      if (pair.size() == 1) {
        // A single loop is compared with the constant path at its base point.
        SampledPath still;
        still.t = {pair[0].t.front(), pair[0].t.back()};
        still.x = {pair[0].front(), pair[0].front()};
        pair.push_back(still);
      }
      if (pair.size() != 2) fail(ErrorCode::InvalidArgument, "holonomy needs one loop or two paths");
      const HolonomyResult r = holonomy_path_independence(*chart, pair[0], pair[1], fiber);
      w.field("gap", r.gap).field("winding", r.winding).field("frames_ok", r.frames_ok);
      w.field("max_frame_defect", r.max_frame_defect);
      w.key("end_a");
      write_vector(w, r.end_a);
      w.key("end_b");
      write_vector(w, r.end_b);
    }
  } else if (f.mode == "jacobi") {
    if (f.grid.empty()) fail(ErrorCode::InvalidArgument, "mode jacobi needs --grid");
    auto in = open_input(f.grid);
    const GridVelocity grid = GridVelocity::read(in, d);
    const std::vector<double> us = f.us.empty() ? grid.us() : parse_numbers(f.us, "--u");
    const VelocityField v = [&grid](double u, double t) { return grid(u, t); };
    const Matrix frame0 = orthonormal_frame(*chart, p);
    const JacobiResult r = jacobi_transport(*chart, p, frame0, v, us, f.steps);
    double fd_gap = 0.0;
    w.key("u").array(r.u).key("U").begin_array();
    for (const auto& U : r.U_end) write_vector(w, U);
    w.end_array().key("finite_difference").begin_array();
    for (std::size_t i = 0; i < r.u.size(); ++i) {
      const Vector fd = finite_difference_variation(*chart, p, frame0, v, r.u[i], 1e-3, f.steps);
      fd_gap = std::max(fd_gap, (fd - r.U_end[i]).cwiseAbs().maxCoeff());
      write_vector(w, fd);
    }
    w.end_array().field("max_fd_gap", fd_gap).field("refinement_gap", r.refinement_gap);
  } else {
    fail(ErrorCode::InvalidArgument, "unknown mode '" + f.mode + "'");
  }
  w.end_object();
  return w.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steklov spectra, trace estimates and holonomy experiments"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  ShapeFlags shape;
  Output output;
  double h = 0.05;
  int num = 4;

  auto* steklov_cmd = app.add_subcommand("steklov", "Steklov eigenvalues of a planar domain");
  add_shape_flags(steklov_cmd, shape);
  add_output_flags(steklov_cmd, output, true);
  steklov_cmd->add_option("--h", h, "Target mesh size")->capture_default_str();
  steklov_cmd->add_option("--num", num, "Number of positive eigenvalues")->capture_default_str();

  auto* mesh_cmd = app.add_subcommand("mesh", "Write the triangulation of a shape");
  add_shape_flags(mesh_cmd, shape);
  mesh_cmd->add_option("--h", h, "Target mesh size")->capture_default_str();
  mesh_cmd->add_option("--out", output.out, "Output .tmesh file (stdout when omitted)");

  auto* trace_cmd = app.add_subcommand("trace", "Trace estimate diagnostics for one domain");
  add_shape_flags(trace_cmd, shape);
  add_output_flags(trace_cmd, output, true);
  trace_cmd->add_option("--h", h, "Target mesh size")->capture_default_str();

  SweepSpec sweep_spec;
  std::string family = "ellipse-aspect";
  int threads = 0;
  auto* sweep_cmd = app.add_subcommand("sweep", "Trace diagnostics over a shape family");
  sweep_cmd->add_option("--family", family, "ellipse-aspect | perturbed-disk")
      ->check(CLI::IsMember({"ellipse-aspect", "perturbed-disk"}))
      ->capture_default_str();
  sweep_cmd->add_option("--from", sweep_spec.from, "First parameter")->capture_default_str();
  sweep_cmd->add_option("--to", sweep_spec.to, "Last parameter")->capture_default_str();
  sweep_cmd->add_option("--steps", sweep_spec.steps, "Number of parameters")->capture_default_str();
  sweep_cmd->add_option("--h", sweep_spec.h, "Target mesh size")->capture_default_str();
  sweep_cmd->add_option("--k", sweep_spec.k, "Perturbation frequency")->capture_default_str();
  sweep_cmd->add_option("--threads", threads, "Worker threads (0: STEKLOV_LAB_THREADS or all cores)");
  output.format = "json";
  std::string sweep_format = "csv";
  sweep_cmd->add_option("--out", output.out, "Output file (stdout when omitted)");
  sweep_cmd->add_option("--format", sweep_format, "json | csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

  ProductSpec product;
  std::string fiber = "circle";
  double L = 1.0, L1 = 1.0, L2 = 1.0;
  std::string mu_list;
  bool critical = false;
  int product_num = 5;
  auto* product_cmd = app.add_subcommand("product", "Steklov spectrum of a ball times a closed manifold");
  product_cmd->add_option("--m", product.m, "Ball dimension (1 or 2)")->capture_default_str();
  product_cmd->add_option("--R", product.R, "Ball radius")->capture_default_str();
  product_cmd->add_option("--fiber", fiber, "circle | torus | list")
      ->check(CLI::IsMember({"circle", "torus", "list"}))
      ->capture_default_str();
  product_cmd->add_option("--L", L, "Circle radius")->capture_default_str();
  product_cmd->add_option("--L1", L1, "First torus radius")->capture_default_str();
  product_cmd->add_option("--L2", L2, "Second torus radius")->capture_default_str();
  product_cmd->add_option("--mu-list", mu_list, "Laplace spectrum of the fibre, e.g. '0,1,1,4'");
  product_cmd->add_option("--num", product_num, "Eigenvalues to report, with multiplicity")->capture_default_str();
  product_cmd->add_flag("--critical-L", critical, "Only report the critical circle radius");
  product_cmd->add_option("--out", output.out, "Output file (stdout when omitted)");

  DevelopFlags dev;
  auto* develop_cmd = app.add_subcommand("develop", "Parallel transport, development and holonomy on a chart");
  develop_cmd->add_option("--chart", dev.chart, "flat-cartesian | flat-polar | product-disk-circle | strip-cover | sphere")
      ->required();
  develop_cmd->add_option("--mode", dev.mode, "transport | develop | lift | holonomy | jacobi")
      ->check(CLI::IsMember({"transport", "develop", "lift", "holonomy", "jacobi"}))
      ->capture_default_str();
  develop_cmd->add_option("--path", dev.path, "Path file (repeat for two holonomy paths)");
  develop_cmd->add_option("--paths", dev.paths, "File with two paths separated by a blank line");
  develop_cmd->add_option("--v", dev.v, "Velocity profile file");
  develop_cmd->add_option("--p", dev.p, "Start point 'x1,x2,...'");
  develop_cmd->add_option("--fiber-start", dev.fiber_start, "Fibre coordinates of the lift start");
  develop_cmd->add_option("--grid", dev.grid, "Velocity grid file with rows 'u t v1 ... vd'");
  develop_cmd->add_option("--u", dev.us, "Homotopy parameters for jacobi (default: grid u values)");
  develop_cmd->add_option("--steps", dev.steps, "RK4 steps per unit parameter")->capture_default_str();
  develop_cmd->add_option("--out", output.out, "Output file (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (steklov_cmd->parsed()) {
      require_shape(steklov_cmd, shape);
      std::string label;
      const TriangleMesh mesh = load_mesh(shape, h, label);
      const SpectralResult r = steklov_spectrum(mesh, num);
      emit(output, output.format == "csv" ? spectrum_csv(r) : spectral_result_json(r, label));
    } else if (mesh_cmd->parsed()) {
      require_shape(mesh_cmd, shape);
      std::string label;
      const TriangleMesh mesh = load_mesh(shape, h, label);
      std::ostringstream os;
      write_tmesh(os, mesh);
      emit(output, os.str());
    } else if (trace_cmd->parsed()) {
      require_shape(trace_cmd, shape);
      std::string label;
      const TriangleMesh mesh = load_mesh(shape, h, label);
      const TraceReport r = trace_report(mesh, label);
      emit(output, output.format == "csv" ? sweep_csv({r}) : trace_json(r));
    } else if (sweep_cmd->parsed()) {
      sweep_spec.family = family == "perturbed-disk" ? SweepFamily::PerturbedDisk : SweepFamily::EllipseAspect;
      const auto reports = sweep(sweep_spec, threads);
      if (sweep_format == "csv") {
        emit(output, sweep_csv(reports));
      } else {
        std::string doc = "[";
        for (std::size_t i = 0; i < reports.size(); ++i) {
          std::string item = trace_json(reports[i]);
          item.pop_back();
          doc += (i ? "," : "") + item;
        }
        emit(output, doc + "]\n");
      }
    } else if (product_cmd->parsed()) {
      if (critical) {
        const double Lstar = critical_length(product.R);
        JsonWriter w;
        w.begin_object()
            .field("R", product.R)
            .field("critical_L", Lstar)
            .field("f", product.R / Lstar * std::tanh(product.R / Lstar))
            .end_object();
        emit(output, w.str());
      } else {
        if (fiber == "circle") {
          product.fiber = CircleFactor{L};
        } else if (fiber == "torus") {
          product.fiber = TorusFactor{L1, L2};
        } else {
          if (mu_list.empty()) fail(ErrorCode::InvalidSpectrumList, "--fiber list needs --mu-list");
          product.fiber = ListedFactor{parse_numbers(mu_list, "--mu-list")};
        }
        product.num = product_num;
        const auto spectrum = product_steklov_spectrum(product);
        std::optional<RigidityCheck> rigidity;
        try {
          rigidity = rigidity_condition(product);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::NoPositiveEigenvalue) throw;
        }
        emit(output, product_json(product, spectrum, rigidity));
      }
    } else if (develop_cmd->parsed()) {
      emit(output, run_develop(dev));
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.message << "\n\n" << e.app->help();
    return kExitValidation;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_validation(e.code()) ? kExitValidation : kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return 0;
}
