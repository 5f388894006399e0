#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "talbot/field.hpp"
#include "talbot/grid.hpp"
#include "talbot/phase.hpp"
#include "talbot/rational_time.hpp"

using namespace talbot;

namespace {

FourierField random_field(GridSpec g, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> d;
  FourierField u(g);
  for (auto& c : u.coeffs()) c = {d(rng), d(rng)};
  return u;
}

std::vector<cplx> natural(const FourierField& u) {
  std::vector<cplx> out;
  for (auto k = u.grid().min_mode(); k <= u.grid().max_mode(); ++k) out.push_back(u.coeff(k));
  return out;
}

}  // namespace

TEST_CASE("grid: mode/slot round trip and FFT ordering") {
  const GridSpec g(16);
  CHECK(g.min_mode() == -8);
  CHECK(g.max_mode() == 7);
  CHECK(g.mode(0) == 0);
  CHECK(g.mode(7) == 7);
  CHECK(g.mode(8) == -8);
  CHECK(g.mode(15) == -1);
  for (std::size_t s = 0; s < 16; ++s) CHECK(g.slot(g.mode(s)) == s);
  CHECK_THROWS_AS(g.slot(8), std::out_of_range);
  CHECK(g.x(4) == doctest::Approx(kPi / 2));
}

TEST_CASE("grid: non power of two rejected") {
  CHECK_THROWS_AS(GridSpec(12), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec(4), std::invalid_argument);
  CHECK_NOTHROW(GridSpec(8));
}

TEST_CASE("phase: unit_turn exact at quarter turns, frac_product keeps digits") {
  CHECK(unit_turn(0.25) == cplx(0.0, 1.0));
  CHECK(unit_turn(-0.5) == cplx(-1.0, 0.0));
  CHECK(unit_turn(3.0) == cplx(1.0, 0.0));
  CHECK(frac(-0.25) == 0.75);
  // (2^26)^2 * 0.1 has a fractional part that naive rounding loses.
  const std::int64_t m = std::int64_t{1} << 52;
  CHECK(frac_product(m, 0.5) == 0.0);
  CHECK(frac_product(3, 0.5) == 0.5);
}

TEST_CASE("rational time: validation, reduction and residues") {
  CHECK_THROWS_AS(RationalTime(2, 4), std::invalid_argument);
  CHECK_THROWS_AS(RationalTime(1, 0), std::invalid_argument);
  const auto r = RationalTime::reduced(2, 4);
  CHECK(r == RationalTime(1, 2));
  CHECK(RationalTime::reduced(3, -6) == RationalTime(-1, 2));
  CHECK(RationalTime::reduced(0, 5) == RationalTime(0, 1));
  CHECK(r.to_string() == "1/2");
  CHECK(r.seconds() == doctest::Approx(kPi));
  const RationalTime s(3, 7);
  for (std::int64_t m = -20; m <= 20; ++m) CHECK(s.residue_times(m) == ((3 * m) % 7 + 7) % 7);
  CHECK(s.residue_times(std::int64_t{1} << 62) == static_cast<std::int64_t>((static_cast<__int128>(3) << 62) % 7));
}

TEST_CASE("field: transforms agree with a direct DFT") {
  const GridSpec g(32);
  const auto u = random_field(g, 1);
  const auto samples = inverse_transform(u);
  const auto ref = oracle::direct_synthesis(natural(u));
  for (std::size_t j = 0; j < 32; ++j) CHECK(std::abs(samples[j] - ref[j]) < 1e-12);
  const auto back = forward_transform(samples);
  const auto coeffs = oracle::direct_dft(std::vector<cplx>(samples.samples().begin(), samples.samples().end()));
  for (auto k = g.min_mode(); k <= g.max_mode(); ++k) {
    CHECK(std::abs(back.coeff(k) - u.coeff(k)) < 1e-12);
    CHECK(std::abs(back.coeff(k) - coeffs[static_cast<std::size_t>(k + 16)]) < 1e-12);
  }
}

TEST_CASE("field: Parseval between coefficient and Riemann-sum norms") {
  const GridSpec g(64);
  const auto u = random_field(g, 2);
  CHECK(inverse_transform(u).l2_norm() == doctest::Approx(u.l2_norm()).epsilon(1e-13));
}

TEST_CASE("field: zero padding evaluates the same trigonometric polynomial") {
  const GridSpec g(16), fine(64);
  auto u = random_field(g, 3);
  const auto f = inverse_transform(u, fine);
  for (std::size_t j = 0; j < 64; j += 4) CHECK(std::abs(f[j] - inverse_transform(u)[j / 4]) < 1e-12);
  CHECK_THROWS_AS(inverse_transform(random_field(fine, 4), g), std::invalid_argument);
  const auto r = resample(resample(u, fine), g);
  for (auto k = g.min_mode(); k <= g.max_mode(); ++k) CHECK(r.coeff(k) == u.coeff(k));
}

TEST_CASE("field: non-finite samples rejected with the index") {
  SpatialField f(GridSpec(8));
  f[5] = {std::nan(""), 0.0};
  try {
    (void)forward_transform(f);
    FAIL("expected an exception");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("5") != std::string::npos);
  }
}

TEST_CASE("field: arithmetic rejects grid mismatch") {
  FourierField a(GridSpec(8)), b(GridSpec(16));
  CHECK_THROWS_AS(a += b, std::invalid_argument);
  CHECK_THROWS_AS(FourierField(GridSpec(8), std::vector<cplx>(7)), std::invalid_argument);
}
