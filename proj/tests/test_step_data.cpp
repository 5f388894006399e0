#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "talbot/step_data.hpp"

using namespace talbot;

TEST_CASE("step data: validation names the problem") {
  CHECK_THROWS_AS(StepDataSpec({}, {}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(StepDataSpec({0.0, 1.0}, {1.0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(StepDataSpec({1.0, 1.0}, {1.0, 0.0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(StepDataSpec({0.0, 7.0}, {1.0, 0.0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(StepDataSpec({0.0}, {cplx(INFINITY, 0.0)}).validate(), std::invalid_argument);
  CHECK_NOTHROW(StepDataSpec::half_indicator().validate());
}

TEST_CASE("step data: single plateau is a constant") {
  const auto u = synthesize_step(StepDataSpec{{1.0}, {2.5}}, GridSpec(64));
  CHECK(std::abs(u.coeff(0) - 2.5) < 1e-15);
  for (auto k = u.grid().min_mode(); k <= u.grid().max_mode(); ++k) {
    if (k != 0) CHECK(std::abs(u.coeff(k)) < 1e-15);
  }
}

TEST_CASE("step data: indicator of [0, pi) has exact odd coefficients") {
  const auto spec = StepDataSpec::half_indicator();
  const auto u = synthesize_step(spec, GridSpec(256));
  CHECK(u.coeff(0) == cplx(0.5, 0.0));
  for (auto k = -128; k < 128; ++k) {
    if (k == 0) continue;
    if (k % 2 == 0) {
      CHECK(u.coeff(k) == cplx{});
    } else {
      const cplx expect = 1.0 / cplx(0.0, kPi * k);
      CHECK(std::abs(u.coeff(k) - expect) < 1e-15);
    }
    if (std::abs(k) <= 40) {
      CHECK(std::abs(u.coeff(k) - oracle::step_coefficient_quadrature(spec.breakpoints, spec.values, k)) < 1e-10);
    }
  }
}

TEST_CASE("step data: random specs agree with quadrature") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> pos(0.0, kTwoPi), val(-2.0, 2.0);
  std::uniform_int_distribution<int> pieces(1, 8);
  for (int trial = 0; trial < 6; ++trial) {
    StepDataSpec s;
    const int m = pieces(rng);
    while (static_cast<int>(s.breakpoints.size()) < m) {
      s.breakpoints.push_back(pos(rng));
      std::sort(s.breakpoints.begin(), s.breakpoints.end());
      s.breakpoints.erase(std::unique(s.breakpoints.begin(), s.breakpoints.end()), s.breakpoints.end());
    }
    for (int i = 0; i < m; ++i) s.values.emplace_back(val(rng), val(rng));
    const auto u = synthesize_step(s, GridSpec(64));
    for (auto k = -24; k <= 24; ++k) {
      CHECK(std::abs(u.coeff(k) - oracle::step_coefficient_quadrature(s.breakpoints, s.values, k)) < 1e-10);
    }
  }
}

TEST_CASE("step data: scaling is exact and jumps keep a 1/k tail") {
  StepDataSpec s{{0.3, 2.0, 4.1}, {1.0, cplx(0.0, -1.0), 0.25}};
  const auto u = synthesize_step(s, GridSpec(512));
  const auto v = synthesize_step(s.scaled(3.0), GridSpec(512));
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(std::abs(v.coeffs()[i] - 3.0 * u.coeffs()[i]) <= 1e-15 * std::abs(v.coeffs()[i]) + 1e-300);
  double best = 0.0;
  for (auto k = 128; k < 256; ++k) best = std::max(best, std::abs(double(k) * u.coeff(k)));
  CHECK(best > 0.01 * s.total_variation());
  CHECK(s.max_jump() == doctest::Approx(std::abs(cplx(0.0, -1.0) - 1.0)));
}

TEST_CASE("certify: step decays like 1/k, band-limited is superpolynomial") {
  const auto step = certify_sobolev_class(synthesize_step(StepDataSpec::half_indicator(), GridSpec(2048)));
  CHECK(step.exponent == doctest::Approx(1.0).epsilon(0.01));
  CHECK(step.critical_index == doctest::Approx(0.5).epsilon(0.02));
  CHECK(step.r_squared > 0.99);
  CHECK(step.window_lo == 256);
  CHECK(step.window_hi == 1023);

  FourierField band(GridSpec(1024));
  band.coeff(3) = 1.0;
  band.coeff(-5) = 0.5;
  const auto b = certify_sobolev_class(band);
  CHECK(b.superpolynomial);
  CHECK(std::isinf(b.exponent));
}

TEST_CASE("certify: smooth e^{cos x} decays fast, thin tails are rejected") {
  // c_k = I_k(1) / e exactly.
  FourierField u(GridSpec(256));
  for (auto k = -128; k < 128; ++k) u.coeff(k) = std::cyl_bessel_i(std::abs(k), 1.0) / std::exp(1.0);
  const auto r = certify_sobolev_class(u, 64);
  CHECK(r.exponent > 4.0);

  FourierField sparse(GridSpec(256));
  for (auto k = 40; k < 60; ++k) sparse.coeff(k) = 1.0 / k;
  CHECK_THROWS_AS(certify_sobolev_class(sparse), InsufficientData);
}
