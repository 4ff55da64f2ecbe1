#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "catalog.hpp"
#include "steklov/trace.hpp"

using namespace steklov;

TEST_SUITE("trace") {
  TEST_CASE("disk is the equality case") {
    const TraceReport r = trace_report(Disk{1}, 0.05);
    CHECK(std::abs(r.deficit) <= 0.05);
    CHECK(std::abs(r.deficit) <= trace_tolerance(0.05));
    CHECK(r.ratio == doctest::Approx(2.0).epsilon(1e-3));
    const TraceReport coarse = trace_report(Disk{1}, 0.1);
    CHECK(std::abs(coarse.deficit) / std::abs(r.deficit) >= 1.5);
    // Calibration: the disk passes at h = 0.1 with a factor-2 margin.
    CHECK(2 * std::abs(coarse.deficit) <= trace_tolerance(0.1));
  }

  TEST_CASE("ellipse deficit is positive and stable") {
    const TraceReport a = trace_report(Ellipse{2, 1}, 0.05);
    const TraceReport b = trace_report(Ellipse{2, 1}, 0.025);
    CHECK(a.deficit > 0.0);
    CHECK(b.deficit > 0.0);
    CHECK(std::abs(a.deficit - b.deficit) <= 0.05 * b.deficit);
  }

  TEST_CASE("unit square ratio") {
    const TraceReport r = trace_report(Rectangle{1, 1}, 0.1);
    CHECK(r.ratio == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(r.trace_sum < 4.0);
    CHECK(r.brock_bound == doctest::Approx(2.0 / std::sqrt(std::numbers::pi)).epsilon(1e-14));
    CHECK(r.cauchy_schwarz_bound == doctest::Approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("trace inequality and inverse-trace ordering across the catalog") {
    for (const auto& shape : test_support::catalog()) {
      for (double h : {0.1, 0.05}) {
        const TraceReport r = trace_report(shape, h);
        CAPTURE(r.shape);
        CAPTURE(h);
        CHECK(r.trace_sum <= r.ratio + trace_tolerance(h));
        const InverseTraceChecks c = inverse_trace_checks(r);
        CHECK(c.cs_ok);
        CHECK(c.brock_ok);
        CHECK(c.brock_stronger);
        CHECK(r.brock_bound >= r.cauchy_schwarz_bound - 1e-12);
      }
    }
  }

  TEST_CASE("bounds coincide at the disk") {
    const TraceReport r = trace_report(Disk{1}, 0.05);
    const double tol = trace_tolerance(0.05);
    CHECK(std::abs(r.inverse_trace - r.brock_bound) <= tol);
    CHECK(std::abs(r.brock_bound - r.cauchy_schwarz_bound) <= tol);
    CHECK(r.brock_bound >= r.cauchy_schwarz_bound - 1e-12);
  }

  TEST_CASE("brock is strictly stronger off the disk") {
    const TraceReport r = trace_report(Ellipse{2, 1}, 0.05);
    CHECK(r.brock_bound > r.cauchy_schwarz_bound);
  }

  TEST_CASE("ellipse sweep is minimized at the disk") {
    SweepSpec spec;
    spec.family = SweepFamily::EllipseAspect;
    spec.from = 1.0;
    spec.to = 2.0;
    spec.steps = 5;
    spec.h = 0.05;
    const auto reports = sweep(spec);
    REQUIRE(reports.size() == 5);
    for (const auto& r : reports) CHECK(reports[0].deficit <= r.deficit + trace_tolerance(spec.h));
    CHECK(reports[4].deficit > reports[1].deficit);
    CHECK(reports[1].param == 1.25);
  }

  TEST_CASE("perturbed disk sweep is minimized at eps = 0") {
    SweepSpec spec;
    spec.family = SweepFamily::PerturbedDisk;
    spec.h = 0.05;
    spec.k = 3;
    const TraceReport base = trace_report(sweep_member(spec, 0.0), spec.h);
    for (double eps : {0.02, 0.05}) {
      CHECK(base.deficit <= trace_report(sweep_member(spec, eps), spec.h).deficit + trace_tolerance(spec.h));
    }
  }

  TEST_CASE("single-step sweep equals trace_report") {
    SweepSpec spec;
    spec.from = 1.5;
    spec.to = 3.0;
    spec.steps = 1;
    spec.h = 0.1;
    const auto reports = sweep(spec, 1);
    REQUIRE(reports.size() == 1);
    const TraceReport direct = trace_report(Ellipse{1.5, 1.0}, 0.1);
    CHECK(reports[0].sigma1 == direct.sigma1);
    CHECK(reports[0].deficit == direct.deficit);
  }

  TEST_CASE("sweep output does not depend on the thread count") {
    SweepSpec spec;
    spec.from = 1.0;
    spec.to = 1.6;
    spec.steps = 4;
    spec.h = 0.1;
    CHECK(sweep_csv(sweep(spec, 1)) == sweep_csv(sweep(spec, 3)));
    const std::string csv = sweep_csv(sweep(spec, 1));
    CHECK(csv.rfind("param,sigma1,sigma2,trace_sum,ratio,deficit,cs_bound,brock_bound\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  }

  TEST_CASE("rigid motions leave the report unchanged") {
    const Polygon l = test_support::l_shape();
    const TraceReport a = trace_report(l, 0.1);
    const TraceReport b = trace_report(transformed(l, 0.7, Point2(3.0, -1.5)), 0.1);
    CHECK(std::abs(a.sigma1 - b.sigma1) <= 1e-8);
    CHECK(std::abs(a.sigma2 - b.sigma2) <= 1e-8);
    CHECK(std::abs(a.deficit - b.deficit) <= 1e-8);
  }
}
