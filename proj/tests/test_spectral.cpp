#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "talbot/phase.hpp"
#include "talbot/spectral.hpp"

using namespace talbot;

namespace {

FourierField random_field(GridSpec g, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> d;
  FourierField u(g);
  for (auto& c : u.coeffs()) c = {d(rng), d(rng)};
  return u;
}

double rel_diff(const FourierField& a, const FourierField& b) { return (a - b).l2_norm() / b.l2_norm(); }

}  // namespace

TEST_CASE("propagator: identity at t = 0 and t = 2 pi, analytic phase at pi/2") {
  const GridSpec g(64);
  const auto u = random_field(g, 5);
  const auto a = linear_propagate(u, 0.0);
  const auto b = linear_propagate(u, kTwoPi);
  for (std::size_t i = 0; i < u.size(); ++i) {
    CHECK(a.coeffs()[i] == u.coeffs()[i]);
    CHECK(b.coeffs()[i] == u.coeffs()[i]);
  }
  FourierField one(g);
  one.coeff(1) = 1.0;
  CHECK(linear_propagate(one, kPi / 2).coeff(1) == cplx(0.0, -1.0));
  CHECK(linear_propagate(one, RationalTime(1, 4)).coeff(1) == cplx(0.0, -1.0));
}

TEST_CASE("propagator: unitarity for t in {0.1, 1, 10}") {
  const auto u = random_field(GridSpec(256), 6);
  for (double t : {0.1, 1.0, 10.0}) CHECK(linear_propagate(u, t).l2_norm() == doctest::Approx(u.l2_norm()).epsilon(1e-12));
}

// A double t carries an absolute error of about |t| * 2^-52, which moves the
// phase of mode k by k^2 times that.
double phase_tolerance(const GridSpec& g, double t) {
  const double k = double(g.n_modes() / 2);
  return 4.0 * k * k * std::numeric_limits<double>::epsilon() * (std::abs(t) + kTwoPi);
}

TEST_CASE("propagator: group law and periodicity") {
  const auto u = random_field(GridSpec(512), 7);
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> d(0.0, 20.0);
  for (int trial = 0; trial < 10; ++trial) {
    const double t1 = d(rng), t2 = d(rng);
    CHECK(rel_diff(linear_propagate(linear_propagate(u, t1), t2), linear_propagate(u, t1 + t2)) < phase_tolerance(u.grid(), t1 + t2));
    CHECK(rel_diff(linear_propagate(u, t1 + kTwoPi), linear_propagate(u, t1)) < phase_tolerance(u.grid(), t1));
  }
}

TEST_CASE("propagator: rational route matches the real-time route") {
  const auto u = random_field(GridSpec(4096), 9);
  for (auto [p, q] : {std::pair{1, 2}, {1, 3}, {3, 7}, {5, 8}, {11, 13}}) {
    const RationalTime rt(p, q);
    CHECK(rel_diff(linear_propagate(u, rt.seconds()), linear_propagate(u, rt)) < phase_tolerance(u.grid(), rt.seconds()));
  }
}

TEST_CASE("propagator: rational route is exact at the period and at half periods") {
  const auto u = random_field(GridSpec(1024), 10);
  const auto full = linear_propagate(u, RationalTime(1, 1));
  const auto half = linear_propagate(u, RationalTime(1, 2));
  for (auto k = u.grid().min_mode(); k <= u.grid().max_mode(); ++k) {
    CHECK(full.coeff(k) == u.coeff(k));
    CHECK(half.coeff(k) == (k % 2 == 0 ? u.coeff(k) : -u.coeff(k)));
  }
}

TEST_CASE("sobolev norm: single modes and direct summation") {
  const GridSpec g(32);
  FourierField u(g);
  u.coeff(0) = 1.0;
  CHECK(sobolev_norm(u, 3.0) == doctest::Approx(1.0));
  u.coeff(0) = 0.0;
  u.coeff(1) = 1.0;
  CHECK(sobolev_norm(u, 1.0) == doctest::Approx(std::sqrt(2.0)));
  const auto r = random_field(g, 10);
  double direct = 0.0;
  for (auto k = g.min_mode(); k <= g.max_mode(); ++k) direct += std::pow(1.0 + double(k * k), 0.75) * std::norm(r.coeff(k));
  CHECK(sobolev_norm(r, 0.75) == doctest::Approx(std::sqrt(direct)).epsilon(1e-12));
  CHECK(std::sqrt(kTwoPi) * sobolev_norm(r, 0.0) == doctest::Approx(inverse_transform(r).l2_norm()).epsilon(1e-10));
}

TEST_CASE("littlewood-paley: block membership and partition") {
  const GridSpec g(64);
  const auto u = random_field(g, 11);
  FourierField sum(g);
  for (int j = 0; j <= max_block_index(g); ++j) {
    const auto b = littlewood_paley_block(u, j);
    CHECK_FALSE(b.outside_grid);
    for (auto k = g.min_mode(); k <= g.max_mode(); ++k) {
      const auto a = std::abs(k);
      const bool inside = j == 0 ? a <= 1 : (a > (1 << (j - 1)) && a <= (1 << j));
      CHECK(b.field.coeff(k) == (inside ? u.coeff(k) : cplx{}));
    }
    sum += b.field;
  }
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(sum.coeffs()[i] == u.coeffs()[i]);
  const auto far = littlewood_paley_block(u, max_block_index(g) + 1);
  CHECK(far.outside_grid);
  CHECK(far.field.coeff_energy() == 0.0);
  CHECK_THROWS_AS(littlewood_paley_block(u, -1), std::invalid_argument);
}

TEST_CASE("littlewood-paley: j = 3 keeps |k| in 5..8") {
  const GridSpec g(32);
  FourierField u(g);
  for (auto k = g.min_mode(); k <= g.max_mode(); ++k) u.coeff(k) = 1.0;
  const auto b = littlewood_paley_block(u, 3).field;
  for (auto k = g.min_mode(); k <= g.max_mode(); ++k) CHECK((b.coeff(k) != cplx{}) == (std::abs(k) >= 5 && std::abs(k) <= 8));
}

TEST_CASE("besov seminorm: constants, single modes, direct definition") {
  const GridSpec g(64);
  FourierField c(g);
  c.coeff(0) = 1.0;
  CHECK(besov_seminorm(c, 2.0, kInfinity) == doctest::Approx(1.0));
  CHECK(besov_seminorm(c, 0.0, 2.0) == doctest::Approx(std::sqrt(kTwoPi)));
  FourierField m(g);
  m.coeff(4) = 1.0;  // |k| = 4 lies in block j = 2
  CHECK(besov_seminorm(m, 1.0, kInfinity) == doctest::Approx(4.0));
  const auto r = random_field(g, 12);
  double direct = 0.0;
  for (int j = 0; j <= max_block_index(g); ++j) {
    FourierField b(g);
    for (auto k = g.min_mode(); k <= g.max_mode(); ++k) {
      const auto a = std::abs(k);
      if (j == 0 ? a <= 1 : (a > (1 << (j - 1)) && a <= (1 << j))) b.coeff(k) = r.coeff(k);
    }
    const auto s = inverse_transform(b);
    double acc = 0.0;
    for (const auto& v : s.samples()) acc += std::abs(v) * g.spacing();
    direct = std::max(direct, std::exp2(0.5 * j) * acc);
  }
  CHECK(besov_seminorm(r, 0.5, 1.0) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("lp norm: constant function") {
  SpatialField f(GridSpec(16));
  for (auto& v : f.samples()) v = 1.0;
  CHECK(lp_norm(f, kInfinity) == 1.0);
  CHECK(lp_norm(f, 2.0) == doctest::Approx(std::sqrt(kTwoPi)));
  CHECK(lp_norm(f, 1.0) == doctest::Approx(kTwoPi));
  CHECK_THROWS_AS(lp_norm(f, 0.5), std::invalid_argument);
}
