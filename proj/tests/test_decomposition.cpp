#include "amhd/decomposition.hpp"
#include "amhd/random.hpp"
#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <limits>
#include <numbers>

using namespace amhd;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double inf = std::numeric_limits<double>::infinity();

}  // namespace

TEST_CASE("split of x-independent and oscillating fields", "[split]") {
  const auto g = make_grid(16, 16, 1.0);
  const auto profile = [](double y) { return std::sin(2 * pi * y) + 0.25 * std::cos(6 * pi * y); };
  const auto f = project_function(g, [&](double, double y) { return profile(y); });
  const auto s = split(f);
  for (int j = 0; j < g.ny(); ++j) CHECK_THAT(s.bar(j), WithinAbs(profile(g.y(j)), 1e-14));
  CHECK(s.tilde.coeffs().abs().maxCoeff() < 1e-16);

  const auto h = project_function(g, [&](double x, double y) { return std::cos(2 * pi * x) * profile(y); });
  const auto sh = split(h);
  CHECK(sh.bar.abs().maxCoeff() < 1e-15);
  CHECK((sh.tilde.coeffs() - h.coeffs()).abs().maxCoeff() < 1e-15);
}

TEST_CASE("split reconstructs and tilde has zero x-mean", "[split]") {
  Rng rng(1);
  const auto g = make_grid(16, 12, 2.0);
  const auto f = random_field(g, rng, false);
  const auto s = split(f);
  CHECK(s.tilde.coeffs().row(0).abs().maxCoeff() == 0.0);

  const auto samples = oracle::evaluate(f);
  const auto tilde = oracle::evaluate(s.tilde);
  const auto mean_tilde = oracle::x_mean(tilde);
  const auto mean_f = oracle::x_mean(samples);
  for (int j = 0; j < g.ny(); ++j) {
    CHECK(std::abs(mean_tilde[j]) < 1e-12);
    CHECK_THAT(s.bar(j), WithinAbs(mean_f[j], 1e-12));
    for (int i = 0; i < g.nx(); ++i) CHECK_THAT(s.bar(j) + tilde[i][j], WithinAbs(samples[i][j], 1e-12));
  }

  // Linearity of the tilde projection.
  const auto h = random_field(g, rng, false);
  const auto lhs = split(2.0 * f + (-3.0) * h).tilde;
  const auto rhs = 2.0 * split(f).tilde + (-3.0) * split(h).tilde;
  CHECK((lhs.coeffs() - rhs.coeffs()).abs().maxCoeff() < 1e-15);
}

TEST_CASE("anisotropic norms", "[norms]") {
  const auto g = make_grid(16, 16, 1.0);
  const auto one = project_function(g, [](double, double) { return 1.0; });
  CHECK_THAT(anisotropic_norm(one, 2, 2), WithinRel(1.0, 1e-14));

  const auto g4 = make_grid(16, 16, 4.0);
  const auto c = project_function(g4, [](double x, double) { return std::cos(2 * pi * x); });
  CHECK_THAT(anisotropic_norm(c, inf, 2), WithinRel(2.0, 1e-14));
  CHECK_THAT(anisotropic_norm(c, 2, inf), WithinRel(std::sqrt(0.5), 1e-14));
  CHECK_THAT(anisotropic_norm(c, inf, inf), WithinRel(1.0, 1e-14));

  Rng rng(2);
  const auto f = random_field(g4, rng, false);
  CHECK_THAT(anisotropic_norm(f, 2, 2), WithinRel(l2_norm(f), 1e-10));
  CHECK_THROWS_AS(anisotropic_norm(f, 1, 2), std::invalid_argument);
  CHECK_THROWS_AS(anisotropic_norm(f, 2, 3), std::invalid_argument);
}

TEST_CASE("Poincare ratio", "[poincare]") {
  const auto g = make_grid(16, 16, 1.0);
  const auto c1 = project_function(g, [](double x, double y) { return std::cos(2 * pi * x) * (1 + std::sin(2 * pi * y)); });
  CHECK_THAT(poincare_ratio(c1), WithinAbs(1 / (2 * pi), 1e-12));
  const auto c2 = project_function(g, [](double x, double) { return std::cos(4 * pi * x); });
  CHECK_THAT(poincare_ratio(c2), WithinAbs(1 / (4 * pi), 1e-12));
  const auto bar_only = project_function(g, [](double, double y) { return std::cos(2 * pi * y); });
  CHECK(poincare_ratio(bar_only) == 0.0);

  Rng rng(3);
  for (int n = 0; n < 20; ++n) CHECK(poincare_ratio(random_field(g, rng, false)) <= 1 / (2 * pi) + 1e-12);
}

TEST_CASE("Agmon ratio", "[agmon]") {
  const auto g = make_grid(32, 16, 1.0);
  const auto c = project_function(g, [](double x, double) { return std::cos(2 * pi * x); });
  // |cos|_inf = 1, |cos|_2 = 1/sqrt2, |d_x cos|_2 = 2 pi / sqrt2.
  const double expected = 1.0 / std::sqrt((1 / std::sqrt(2.0)) * (2 * pi / std::sqrt(2.0)));
  CHECK_THAT(agmon_ratio(c), WithinRel(expected, 1e-12));
  CHECK(agmon_ratio(c) <= std::sqrt(2.0));
  CHECK_THAT(agmon_ratio(10.0 * c), WithinRel(agmon_ratio(c), 1e-13));

  Rng rng(4);
  double worst = 0;
  for (int n = 0; n < 100; ++n) worst = std::max(worst, agmon_ratio(random_field(g, rng)));
  CHECK(worst <= std::sqrt(2.0) + 1e-6);

  const auto bar_only = project_function(g, [](double, double y) { return std::cos(2 * pi * y); });
  CHECK_THROWS_AS(agmon_ratio(bar_only), std::invalid_argument);
}

TEST_CASE("bar structure of divergence-free fields", "[bar]") {
  const auto g = make_grid(16, 16, 1.0);
  const VectorField<double> cell(project_function(g, [](double, double y) { return std::sin(2 * pi * y); }),
                                 project_function(g, [](double x, double) { return std::sin(2 * pi * x); }));
  const auto r1 = verify_lemma23(cell);
  CHECK(r1.passed);
  CHECK(r1.bar_u2 < 1e-15);

  Rng rng(5);
  const auto r2 = verify_lemma23(random_div_free(make_grid(32, 24, 3.0), rng));
  CHECK(r2.passed);
  CHECK(r2.bar_u2 <= 1e-12);
  CHECK(r2.dy_bar_u2 <= 1e-12);
  CHECK(r2.tilde_divergence <= 1e-12);

  const VectorField<double> shear_y(SpectralField<double>(g),
                                    project_function(g, [](double, double y) { return std::cos(2 * pi * y); }));
  const auto r3 = verify_lemma23(shear_y);
  CHECK_FALSE(r3.passed);
  CHECK(r3.input_divergence > 0.5);

  CHECK(verify_lemma23(VectorField<double>(g)).passed);
}
