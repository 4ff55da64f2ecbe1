// Acceptance checks: one PASS/FAIL line per criterion. argv[1], when given, is
// the steklov_lab executable used for the determinism check.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "steklov/ball_factor.hpp"
#include "steklov/development.hpp"
#include "steklov/dtn.hpp"
#include "steklov/io.hpp"
#include "steklov/product.hpp"
#include "steklov/trace.hpp"

using namespace steklov;

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::vector<DomainShape> catalog() {
  return {Disk{1.0},     Ellipse{2.0, 1.0},        Rectangle{1.0, 1.0},
          Annulus{0.5, 1.0}, PerturbedDisk{0.05, 3}, Polygon{{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}}};
}

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

std::string fmt(double v) { return format_label(v); }

Outcome disk_spectrum() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  const SpectralResult fine = steklov_spectrum(build_mesh(Disk{1.0}, 0.05), 4);
  const SpectralResult coarse = steklov_spectrum(build_mesh(Disk{1.0}, 0.1), 4);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double expected[] = {0, 1, 1, 2, 2};
  double worst = 0.0, err_fine = 0.0, err_coarse = 0.0;
  for (int k = 1; k <= 4; ++k) {
    worst = std::max(worst, std::abs(fine.eigenvalues[k] - expected[k]) / expected[k]);
    err_fine = std::max(err_fine, std::abs(fine.eigenvalues[k] - expected[k]));
    err_coarse = std::max(err_coarse, std::abs(coarse.eigenvalues[k] - expected[k]));
  }
  o.require(worst <= 0.02, "sigma_1..4 within 2%");
  o.require(std::abs(fine.eigenvalues[0]) <= 1e-6, "sigma_0 <= 1e-6");
  o.require(err_coarse / err_fine >= 3.0, "refinement error ratio >= 3");
  o.require(seconds <= 60.0, "runtime <= 60 s");
  o.detail << "max rel err " << fmt(worst) << ", sigma_0 " << fmt(fine.eigenvalues[0]) << ", error ratio "
           << fmt(err_coarse / err_fine) << ", " << fmt(std::round(seconds * 100) / 100) << " s";
  return o;
}

Outcome ball_trace_equality() {
  Outcome o;
  const TraceReport r = trace_report(Disk{1.0}, 0.05);
  const TraceReport finer = trace_report(Disk{1.0}, 0.025);
  o.require(std::abs(r.deficit) <= 0.05, "|deficit| <= 0.05 at h=0.05");
  o.require(std::abs(r.deficit) / std::abs(finer.deficit) >= 1.5, "deficit shrinks by >= 1.5");
  o.detail << "deficit(0.05) " << fmt(r.deficit) << ", deficit(0.025) " << fmt(finer.deficit);
  return o;
}

Outcome strict_deficit() {
  Outcome o;
  for (const DomainShape& shape : {DomainShape{Ellipse{2, 1}}, DomainShape{Rectangle{1, 1}}, DomainShape{PerturbedDisk{0.05, 3}}}) {
    double last = 0.0;
    for (double h : {0.1, 0.05, 0.025}) {
      last = trace_report(shape, h).deficit;
      o.require(last > 0.0, describe(shape) + " deficit > 0 at h=" + fmt(h));
    }
    o.detail << describe(shape) << " " << fmt(last) << "; ";
  }
  SweepSpec spec;
  spec.family = SweepFamily::EllipseAspect;
  spec.from = 1.25;
  spec.to = 2.0;
  spec.steps = 4;
  spec.h = 0.05;
  const auto reports = sweep(spec);
  o.require(reports.back().deficit > reports.front().deficit, "deficit(a=2) > deficit(a=1.25)");
  o.detail << "sweep a=1.25 " << fmt(reports.front().deficit) << ", a=2 " << fmt(reports.back().deficit);
  return o;
}

Outcome inequality_matrix() {
  Outcome o;
  double worst = -1e300;
  int cases = 0;
  for (const auto& shape : catalog()) {
    for (double h : {0.1, 0.05}) {
      const TraceReport r = trace_report(shape, h);
      const double excess = r.trace_sum - r.ratio - trace_tolerance(h);
      worst = std::max(worst, excess);
      o.require(excess <= 0.0, describe(shape) + " at h=" + fmt(h));
      ++cases;
    }
  }
  o.detail << cases << " cases, max(trace_sum - ratio - tol) " << fmt(worst);
  return o;
}

Outcome cylinder() {
  Outcome o;
  double worst = 0.0;
  for (double L : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const auto s = expand(product_steklov_spectrum({1, 1.0, CircleFactor{L}, 2}));
    const double expected = std::min(std::tanh(1 / L) / L, 1.0);
    worst = std::max(worst, std::abs(s[1] - expected));
  }
  o.require(worst <= 1e-10, "sigma_1 = min{(1/L)tanh(1/L), 1} to 1e-10");
  const double Lstar = critical_length();
  const double fL = std::tanh(1 / Lstar) / Lstar;
  o.require(std::abs(fL - 1.0) <= 1e-8, "|f(L*) - 1| <= 1e-8");
  o.require(rigidity_condition({1, 1.0, CircleFactor{Lstar * (1 - 1e-7)}, 2}).holds, "holds just below L*");
  o.require(!rigidity_condition({1, 1.0, CircleFactor{Lstar * (1 + 1e-7)}, 2}).holds, "fails just above L*");
  o.detail << "max err " << fmt(worst) << ", L* " << fmt(Lstar) << ", |f(L*)-1| " << fmt(std::abs(fL - 1.0));
  return o;
}

// P1 minimum of ∫₀^R (f'² + μf²) over f(R) = 1 on n elements (odd modes pin f(0) = 0).
// Callers Richardson-extrapolate n and 2n.
double interval_p1(double R, double mu, int n, bool odd) {
  const double dr = R / n;
  const double kd = 1 / dr + mu * dr / 3, ko = -1 / dr + mu * dr / 6;
  std::vector<double> d(n + 1, 0.0);
  for (int k = 0; k < n; ++k) {
    d[k] += kd;
    d[k + 1] += kd;
  }
  for (int i = odd ? 1 : 0; i < n; ++i) d[i + 1] -= ko * ko / d[i];
  return d[n];
}

Outcome sigma_oracles() {
  Outcome o;
  double interval_gap = 0.0;
  for (double R : {0.5, 1.0, 2.0}) {
    for (double mu : {0.25, 1.0, 4.0}) {
      for (bool odd : {false, true}) {
        const double rayleigh = (4.0 * interval_p1(R, mu, 4000, odd) - interval_p1(R, mu, 2000, odd)) / 3.0;
        interval_gap = std::max(interval_gap, std::abs(rayleigh - sigma_mu_interval(R, mu, odd ? Parity::Odd : Parity::Even)));
      }
    }
  }
  o.require(interval_gap <= 1e-6, "interval vs Rayleigh discretization within 1e-6");
  double disk_gap = 0.0;
  for (int k = 0; k <= 3; ++k) {
    for (int i = 0; i <= 20; ++i) {
      const double mu = std::pow(10.0, -2.0 + 4.0 * i / 20);
      const double series = sigma_mu_disk_series(1.0, mu, k);
      disk_gap = std::max(disk_gap, std::abs(sigma_mu_disk(1.0, mu, k) - series) / series);
    }
  }
  o.require(disk_gap <= 1e-8, "shooting vs Bessel series within 1e-8");
  bool monotone = true;
  for (int m : {1, 2}) {
    double prev = -1.0;
    for (int i = 0; i < 50; ++i) {
      const double s = sigma_of_mu({m, 1.0, std::pow(10.0, -2.0 + 4.0 * i / 49), 0});
      monotone = monotone && s >= prev;
      prev = s;
    }
  }
  o.require(monotone, "sigma(mu) nondecreasing on a 50-point log grid");
  o.detail << "interval gap " << fmt(interval_gap) << ", disk rel gap " << fmt(disk_gap);
  return o;
}

Outcome inverse_trace() {
  Outcome o;
  for (const auto& shape : catalog()) {
    const TraceReport r = trace_report(shape, 0.05);
    const double tol = trace_tolerance(0.05);
    o.require(r.inverse_trace >= r.brock_bound - tol, describe(shape) + " inverse_trace >= brock - tol");
    o.require(r.brock_bound >= r.cauchy_schwarz_bound - 1e-12, describe(shape) + " brock >= cs");
    if (std::holds_alternative<Disk>(shape)) {
      o.require(std::abs(r.inverse_trace - r.brock_bound) <= tol && std::abs(r.brock_bound - r.cauchy_schwarz_bound) <= tol,
                "equality at the disk");
      o.detail << "disk: inverse " << fmt(r.inverse_trace) << ", brock " << fmt(r.brock_bound) << ", cs "
               << fmt(r.cauchy_schwarz_bound);
    }
  }
  return o;
}

SampledPath polyline(const std::vector<Vector>& points) {
  SampledPath p;
  for (std::size_t i = 0; i < points.size(); ++i) {
    p.t.push_back(double(i) / (points.size() - 1));
    p.x.push_back(points[i]);
  }
  return p;
}

SampledPath arc(double r0, double r1, double a0, double a1, int n) {
  SampledPath p;
  for (int i = 0; i <= n; ++i) {
    const double t = double(i) / n;
    const double r = r0 + (r1 - r0) * t, th = a0 + (a1 - a0) * t;
    p.t.push_back(t);
    p.x.push_back(vec({r * std::cos(th), r * std::sin(th)}));
  }
  return p;
}

Outcome holonomy_suite() {
  Outcome o;
  const ChartPtr product = chart_by_name("product-disk-circle");
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> angle(0, kTwoPi), radius(0, 0.8);
  auto point = [&] {
    const double a = angle(rng), r = radius(rng);
    return vec({r * std::cos(a), r * std::sin(a)});
  };
  double product_gap = 0.0, defect = 0.0;
  for (int trial = 0; trial < 24; ++trial) {
    const Vector a = point(), b = point();
    std::vector<Vector> detour{a};
    for (int k = 0; k <= trial % 3; ++k) detour.push_back(point());
    detour.push_back(b);
    const HolonomyResult r = holonomy_path_independence(*product, polyline({a, b}), polyline(detour), vec({angle(rng)}));
    product_gap = std::max(product_gap, r.gap);
    defect = std::max(defect, r.max_frame_defect);
  }
  o.require(product_gap <= 1e-6, "product gap <= 1e-6 over 24 pairs");

  const ChartPtr strip = strip_cover(1.0, 2.0);
  std::uniform_real_distribution<double> rad(1.1, 1.9);
  double quantization = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const double a0 = angle(rng), a1 = a0 + angle(rng), r0 = rad(rng), r1 = rad(rng);
    const int turns = trial % 4 - 1;
    const HolonomyResult r =
        holonomy_path_independence(*strip, arc(r0, r1, a0, a1, 300), arc(r0, r1, a0, a1 + kTwoPi * turns, 300), vec({0.0}));
    const double expected = std::abs(turns) * kTwoPi;
    quantization = std::max(quantization, std::abs(r.gap - expected));
    quantization = std::max(quantization, std::abs(r.gap - kTwoPi * std::round(r.gap / kTwoPi)));
    defect = std::max(defect, r.max_frame_defect);
  }
  o.require(quantization <= 1e-6, "strip-cover gaps are multiples of 2pi");
  o.require(defect <= 1e-8, "frames g-orthonormal to 1e-8");

  double jacobi_gap = 0.0;
  const VelocityField v = [](double u, double t) { return vec({0.5 + u * t, 0.4 - u + 0.2 * std::sin(u + t)}); };
  for (const char* name : {"flat-cartesian", "flat-polar", "sphere"}) {
    const ChartPtr c = chart_by_name(name);
    const Vector p = vec({1.2, 0.1});
    const Matrix e0 = orthonormal_frame(*c, p);
    const std::vector<double> us{-0.1, 0.0, 0.2};
    const JacobiResult r = jacobi_transport(*c, p, e0, v, us);
    for (std::size_t i = 0; i < us.size(); ++i) {
      jacobi_gap = std::max(jacobi_gap, (finite_difference_variation(*c, p, e0, v, us[i]) - r.U_end[i]).cwiseAbs().maxCoeff());
    }
  }
  o.require(jacobi_gap <= 1e-4, "jacobi vs finite differences within 1e-4");
  o.detail << "product gap " << fmt(product_gap) << ", quantization err " << fmt(quantization) << ", frame defect "
           << fmt(defect) << ", jacobi gap " << fmt(jacobi_gap);
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism(const std::string& cli) {
  Outcome o;
  // In-process repeats.
  o.require(spectral_result_json(steklov_spectrum(build_mesh(Disk{1}, 0.05), 4), "disk") ==
                spectral_result_json(steklov_spectrum(build_mesh(Disk{1}, 0.05), 4), "disk"),
            "spectrum payload");
  SweepSpec spec;
  spec.steps = 3;
  spec.h = 0.1;
  o.require(sweep_csv(sweep(spec, 1)) == sweep_csv(sweep(spec, 4)), "sweep payload across thread counts");
  if (cli.empty()) {
    o.detail << "in-process only (no CLI path given)";
    return o;
  }

  const auto dir = std::filesystem::temp_directory_path() / ("steklov_acceptance_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  {
    std::ofstream loop(dir / "loop.txt");
    loop.precision(17);
    for (int i = 0; i <= 200; ++i) {
      const double t = i / 200.0;
      loop << t << ' ' << 1.5 * std::cos(kTwoPi * t) << ' ' << 1.5 * std::sin(kTwoPi * t) << '\n';
    }
    std::ofstream pair(dir / "pair.txt");
    pair << "0 -0.5 0\n1 0.5 0\n\n0 -0.5 0\n0.5 0 0.6\n1 0.5 0\n";
    std::ofstream v(dir / "const.txt");
    v << "0 1 0\n1 1 0\n";
  }
  const std::string d = dir.string();
  const std::vector<std::string> commands{
      "steklov --shape disk --radius 1 --h 0.05 --num 4",
      "trace --shape disk --radius 1 --h 0.05",
      "trace --shape ellipse --a 2 --b 1 --h 0.05",
      "sweep --family ellipse-aspect --from 1 --to 2 --steps 5 --h 0.05",
      "product --m 1 --R 1 --fiber circle --L 1 --num 5",
      "product --critical-L",
      "develop --chart strip-cover --mode holonomy --path " + d + "/loop.txt",
      "develop --chart product-disk-circle --mode holonomy --paths " + d + "/pair.txt",
      "develop --chart flat-cartesian --mode develop --v " + d + "/const.txt",
  };
  int identical = 0;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    std::string payload[2];
    for (int run = 0; run < 2; ++run) {
      const auto out = dir / ("run" + std::to_string(i) + "_" + std::to_string(run) + ".out");
      const std::string cmd = "\"" + cli + "\" " + commands[i] + " --out \"" + out.string() + "\"";
      const int status = std::system(cmd.c_str());
      o.require(status == 0, "exit status of: " + commands[i]);
      payload[run] = slurp(out);
    }
    const bool same = !payload[0].empty() && payload[0] == payload[1];
    o.require(same, "byte-identical output of: " + commands[i]);
    identical += same;
  }
  std::filesystem::remove_all(dir);
  o.detail << identical << "/" << commands.size() << " CLI commands byte-identical";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"disk spectrum", disk_spectrum},
      {"trace equality at the ball", ball_trace_equality},
      {"strict deficit off the ball", strict_deficit},
      {"trace inequality across the catalog", inequality_matrix},
      {"cylinder example", cylinder},
      {"sigma(mu) oracles", sigma_oracles},
      {"inverse-trace ordering", inverse_trace},
      {"holonomy suite", holonomy_suite},
      {"determinism", [&] { return determinism(cli); }},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "threw: " << e.what();
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << i + 1 << ": " << criteria[i].name << " -- "
              << o.detail.str() << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
