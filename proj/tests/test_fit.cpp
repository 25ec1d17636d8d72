#include "rydqsl/geometry.hpp"
#include "rydqsl/observables.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace rydqsl;

namespace {

CorrelationSeries synthetic(const LatticePatch& p, double A, double xi, double kappa, double phi, double B) {
  CorrelationSeries s;
  s.a_um = p.a();
  s.entries.push_back({0.0, 0.2, p.size()});
  for (double d : distinct_distances(p)) {
    const double r = d / p.a();
    s.entries.push_back({d, A * std::exp(-r / xi) * std::cos(kappa * r + phi) + B, 1});
  }
  return s;
}

double wrap(double phi) { return std::remainder(phi, 2.0 * std::numbers::pi); }

}  // namespace

TEST_SUITE("fit") {

TEST_CASE("recovers synthetic damped cosine parameters") {
  for (const char* name : {"kagome-21", "kagome-18", "kagome-30"}) {
    CAPTURE(name);
    const auto p = load_ruby_patch(name);
    const auto s = synthetic(p, 0.1, 3.6, 1.2, 0.4, 0.0);
    const auto fit = fit_correlation_length(s);
    CHECK_FALSE(fit.degenerate);
    CHECK(fit.A == doctest::Approx(0.1).epsilon(0.01));
    CHECK(fit.xi_over_a == doctest::Approx(3.6).epsilon(0.01));
    CHECK(fit.kappa_a == doctest::Approx(1.2).epsilon(0.01));
    CHECK(wrap(fit.phi) == doctest::Approx(0.4).epsilon(0.01));
    CHECK(std::abs(fit.B) < 0.01 * 0.1);
    CHECK(fit.rms_residual <= fit.seed_rms);
    CHECK(fit.rms_residual < 1e-8);
    CHECK(fit(2.0) == doctest::Approx(0.1 * std::exp(-2.0 / 3.6) * std::cos(2.4 + 0.4) + 0.0).epsilon(1e-6));
  }
}

TEST_CASE("recovers an offset and a negative phase") {
  const auto p = load_ruby_patch("kagome-21");
  const auto s = synthetic(p, 0.05, 1.8, 2.1, -1.0, 0.01);
  const auto fit = fit_correlation_length(s);
  CHECK(fit.A == doctest::Approx(0.05).epsilon(0.01));
  CHECK(fit.xi_over_a == doctest::Approx(1.8).epsilon(0.01));
  CHECK(fit.kappa_a == doctest::Approx(2.1).epsilon(0.01));
  CHECK(wrap(fit.phi) == doctest::Approx(-1.0).epsilon(0.01));
  CHECK(fit.B == doctest::Approx(0.01).epsilon(0.01));
}

TEST_CASE("degenerate inputs") {
  const auto p = load_ruby_patch("kagome-21");
  const auto zero = synthetic(p, 0.0, 1.0, 1.0, 0.0, 0.0);
  const auto fit = fit_correlation_length(zero);
  CHECK(fit.degenerate);
  CHECK(fit.A == 0.0);
  CorrelationSeries tiny;
  tiny.a_um = 4.0;
  tiny.entries = {{0.0, 0.1, 3}, {4.0, 0.1, 1}, {8.0, 0.0, 1}};
  CHECK_THROWS_AS(fit_correlation_length(tiny), std::invalid_argument);
}

TEST_CASE("deterministic for a fixed seed") {
  const auto p = load_ruby_patch("kagome-21");
  auto s = synthetic(p, 0.08, 2.5, 1.5, 0.2, 0.0);
  // small deterministic perturbation so the optimum is not exact
  for (std::size_t k = 1; k < s.entries.size(); ++k) s.entries[k].g2 += 1e-3 * std::sin(7.0 * k);
  FitOptions o;
  o.rng_seed = 42;
  const auto f1 = fit_correlation_length(s, o);
  const auto f2 = fit_correlation_length(s, o);
  CHECK(f1.A == f2.A);
  CHECK(f1.xi_over_a == f2.xi_over_a);
  CHECK(f1.kappa_a == f2.kappa_a);
  CHECK(f1.rms_residual <= f1.seed_rms);
}

TEST_CASE("r_max restricts the fitted entries") {
  const auto p = load_ruby_patch("kagome-21");
  auto s = synthetic(p, 0.1, 3.6, 1.2, 0.4, 0.0);
  for (auto& e : s.entries)
    if (e.r_um > 5.0 * p.a()) e.g2 = 1.0;
  FitOptions o;
  o.r_max_over_a = 5.0;
  const auto fit = fit_correlation_length(s, o);
  CHECK(fit.xi_over_a == doctest::Approx(3.6).epsilon(0.01));
}

}  // TEST_SUITE
