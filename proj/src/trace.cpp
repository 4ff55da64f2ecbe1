#include "steklov/trace.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <numbers>
#include <thread>

#include "steklov/dtn.hpp"
#include "steklov/errors.hpp"
#include "steklov/io.hpp"

namespace steklov {

double trace_tolerance(double h) { return kTraceTolSlope * h; }

TraceReport trace_report(const TriangleMesh& mesh, const std::string& shape_description) {
  const SpectralResult spectrum = steklov_spectrum(mesh, 2);
  TraceReport r;
  r.shape = shape_description;
  r.h = mesh.h;
  r.sigma1 = spectrum.eigenvalues[1];
  r.sigma2 = spectrum.eigenvalues[2];
  r.trace_sum = r.sigma1 + r.sigma2;
  r.vol = spectrum.vol;
  r.boundary_vol = spectrum.boundary_vol;
  r.ratio = r.boundary_vol / r.vol;
  r.deficit = r.ratio - r.trace_sum;
  r.inverse_trace = 1.0 / r.sigma1 + 1.0 / r.sigma2;
  const double n = r.n;
  r.cauchy_schwarz_bound = n * n * r.vol / r.boundary_vol;
  r.brock_bound = n * std::pow(r.vol / std::numbers::pi, 1.0 / n);
  return r;
}

TraceReport trace_report(const DomainShape& shape, double h) { return trace_report(build_mesh(shape, h), describe(shape)); }

DomainShape sweep_member(const SweepSpec& spec, double p) {
  if (spec.family == SweepFamily::EllipseAspect) return Ellipse{p, 1.0};
  return PerturbedDisk{p, spec.k};
}

std::vector<double> sweep_parameters(const SweepSpec& spec) {
  if (spec.steps < 1) fail(ErrorCode::InvalidArgument, "sweep needs at least one step");
  std::vector<double> out;
  for (int i = 0; i < spec.steps; ++i) {
    out.push_back(spec.steps == 1 ? spec.from : spec.from + (spec.to - spec.from) * i / (spec.steps - 1));
  }
  return out;
}

int default_threads() {
  if (const char* env = std::getenv("STEKLOV_LAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<TraceReport> sweep(const SweepSpec& spec, int threads) {
  const std::vector<double> params = sweep_parameters(spec);
  std::vector<DomainShape> shapes;
  for (double p : params) {
    shapes.push_back(sweep_member(spec, p));
    validate(shapes.back());
  }
  std::vector<TraceReport> reports(params.size());
  std::vector<std::exception_ptr> errors(params.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < params.size();) {
      try {
        reports[i] = trace_report(shapes[i], spec.h);
        reports[i].param = params[i];
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int workers = std::clamp(threads > 0 ? threads : default_threads(), 1, static_cast<int>(params.size()));
  {
    std::vector<std::jthread> pool;
    for (int t = 1; t < workers; ++t) pool.emplace_back(work);
    work();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return reports;
}

InverseTraceChecks inverse_trace_checks(const TraceReport& r) {
  if (!(r.sigma1 > 0.0 && r.sigma2 > 0.0)) fail(ErrorCode::InvalidArgument, "inverse trace needs sigma1, sigma2 > 0");
  const double tol = trace_tolerance(r.h);
  InverseTraceChecks c;
  c.cs_ok = r.inverse_trace >= r.cauchy_schwarz_bound - tol;
  c.brock_ok = r.inverse_trace >= r.brock_bound - tol;
  c.brock_stronger = r.brock_bound >= r.cauchy_schwarz_bound - 1e-12;
  return c;
}

std::string trace_json(const TraceReport& r) {
  const InverseTraceChecks checks = inverse_trace_checks(r);
  JsonWriter w;
  w.begin_object()
      .field("shape", r.shape)
      .field("h", r.h)
      .field("n", r.n)
      .field("sigma1", r.sigma1)
      .field("sigma2", r.sigma2)
      .field("trace_sum", r.trace_sum)
      .field("vol", r.vol)
      .field("bvol", r.boundary_vol)
      .field("ratio", r.ratio)
      .field("deficit", r.deficit)
      .field("tol", trace_tolerance(r.h))
      .field("inverse_trace", r.inverse_trace)
      .field("cs_bound", r.cauchy_schwarz_bound)
      .field("brock_bound", r.brock_bound)
      .field("cs_ok", checks.cs_ok)
      .field("brock_ok", checks.brock_ok)
      .field("brock_stronger", checks.brock_stronger)
      .end_object();
  return w.str();
}

std::string sweep_csv(const std::vector<TraceReport>& reports) {
  std::string out = "param,sigma1,sigma2,trace_sum,ratio,deficit,cs_bound,brock_bound\n";
  for (const auto& r : reports) {
    for (double v : {r.param, r.sigma1, r.sigma2, r.trace_sum, r.ratio, r.deficit, r.cauchy_schwarz_bound}) {
      out += format_number(v);
      out += ',';
    }
    out += format_number(r.brock_bound);
    out += '\n';
  }
  return out;
}

}  // namespace steklov
