#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "talbot/fractal.hpp"
#include "talbot/quantization.hpp"
#include "talbot/spectral.hpp"
#include "talbot/step_data.hpp"

using namespace talbot;

namespace {

FourierField random_field(GridSpec g, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> d;
  FourierField u(g);
  for (auto& c : u.coeffs()) c = cplx(d(rng), d(rng));
  return u;
}

double rel_diff(const FourierField& a, const FourierField& b) { return (a - b).l2_norm() / b.l2_norm(); }

}  // namespace

TEST_CASE("gauss sums: small cases and modulus") {
  CHECK(std::abs(gauss_sum(1, 2, 0)) < 1e-15);
  CHECK(std::abs(gauss_sum(1, 2, 1) - 2.0) < 1e-15);
  CHECK(std::abs(gauss_sum(1, 4, 0) - cplx(2.0, -2.0)) < 1e-14);
  CHECK(std::abs(gauss_sum(0, 1, 5) - 1.0) < 1e-15);
  for (std::int64_t q : {3, 5, 7, 9, 15, 21}) {
    for (std::int64_t p = 1; p < q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      for (std::int64_t m = 0; m < q; ++m) CHECK(std::abs(gauss_sum(p, q, m)) == doctest::Approx(std::sqrt(double(q))));
    }
  }
  CHECK_THROWS_AS(gauss_sum(2, 4, 0), std::invalid_argument);
  CHECK_THROWS_AS(gauss_sum(1, 0, 0), std::invalid_argument);
}

TEST_CASE("quantization: half period is a half-turn translate") {
  const auto a = quantization_coefficients(RationalTime(1, 2));
  REQUIRE(a.q == 2);
  CHECK(std::abs(a.coefficients[0]) < 1e-15);
  CHECK(std::abs(a.coefficients[1] - 1.0) < 1e-15);
}

TEST_CASE("quantization: multiplier reproduces the propagator for q <= 64") {
  double worst = 0.0;
  for (std::int64_t q = 1; q <= 64; ++q) {
    for (std::int64_t p = 0; p < q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      const RationalTime rt(p, q);
      const auto combo = quantization_coefficients(rt);
      for (std::int64_t k = -2 * q; k <= 2 * q; ++k) {
        const cplx expect = std::polar(1.0, -kTwoPi * double(rt.residue_times(k * k)) / double(q));
        worst = std::max(worst, std::abs(combo.multiplier(k) - expect));
      }
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("quantization: q = 4 coefficients by direct inverse DFT of the multiplier") {
  const std::int64_t q = 4;
  const auto combo = quantization_coefficients(RationalTime(1, q));
  for (std::int64_t m = 0; m < q; ++m) {
    cplx a{};
    for (std::int64_t k = 0; k < q; ++k)
      a += std::polar(1.0, -kTwoPi * double(k * k) / double(q)) * std::polar(1.0, kTwoPi * double(k * m) / double(q));
    a /= double(q);
    CHECK(std::abs(combo.coefficients[std::size_t(m)] - a) < 1e-14);
  }
}

TEST_CASE("quantization: matched orientation agrees with the flow, mirror does not") {
  const GridSpec g(256);
  const auto u = random_field(g, 31);
  const RationalTime rt(1, 3);
  const auto flow = linear_propagate(u, rt);
  CHECK(rel_diff(quantized_evolution(u, rt), flow) < 1e-12);
  const auto mirror = quantized_evolution(u, quantization_coefficients(rt, GaussOrientation::mirror));
  CHECK(rel_diff(mirror, flow) > 0.1);
  CHECK(rel_diff(mirror, linear_propagate(u, RationalTime(-1, 3))) < 1e-12);
}

TEST_CASE("quantization: random rational times and unitarity") {
  const GridSpec g(512);
  const auto u = random_field(g, 32);
  std::mt19937 rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    const std::int64_t q = std::uniform_int_distribution<std::int64_t>(1, 60)(rng);
    std::int64_t p = std::uniform_int_distribution<std::int64_t>(0, q - 1)(rng);
    while (std::gcd(p, q) != 1) p = (p + 1) % q;
    const RationalTime rt(p, q);
    const auto v = quantized_evolution(u, rt);
    CHECK(rel_diff(v, linear_propagate(u, rt)) < 1e-10);
    CHECK(v.l2_norm() == doctest::Approx(u.l2_norm()).epsilon(1e-12));
  }
}

TEST_CASE("quantization: translate shifts the samples") {
  const GridSpec g(64);
  const auto u = random_field(g, 34);
  const auto shifted = inverse_transform(translate(u, 1, 8));
  const auto base = inverse_transform(u);
  for (std::size_t j = 0; j < 64; ++j) CHECK(std::abs(shifted[(j + 8) % 64] - base[j]) < 1e-12);
}

TEST_CASE("quantization: jumps persist at rational times") {
  const GridSpec g(8192);
  const auto step = synthesize_step(StepDataSpec::half_indicator(), g);
  const double jump0 = max_increment(inverse_transform(step));
  for (const auto& rt : {RationalTime(1, 3), RationalTime(2, 5), RationalTime(1, 4)}) {
    const double inc = max_increment(inverse_transform(quantized_evolution(step, rt)));
    CHECK(inc > 0.2 * jump0);
  }
}
