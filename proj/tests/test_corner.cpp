#include <doctest.h>

#include <cmath>
#include <limits>

#include "glcorner/corner.hpp"
#include "glcorner/extrapolation.hpp"

using namespace glcorner;

namespace {

CornerOptions quick(double h = 0.2) {
  CornerOptions o;
  o.h = h;
  o.tol = 1e-10;
  o.random_start = false;
  return o;
}

}  // namespace

TEST_SUITE("corner") {
  TEST_CASE("flat angle: corner energy vanishes to roundoff") {
    CornerEnergyReport r = compute_corner_energy({M_PI, 4, 6}, 1.5, quick(0.3));
    CHECK(std::abs(r.energy) <= 1e-9);
    CHECK(r.e2d < 0);
  }

  TEST_CASE("right angle: negative corner energy, mirror-symmetric density") {
    CornerOptions o = quick(0.3);
    o.random_start = true;
    CornerEnergyReport r = compute_corner_energy({M_PI / 2, 6, 6}, 1.5, o);
    CHECK(r.energy < -0.05);
    CornerMesh cm = build_corner_mesh({M_PI / 2, 6, 6}, 0.3);
    REQUIRE(cm.mesh.mirror.size() == r.psi.size());
    double worst = 0;
    for (size_t i = 0; i < r.psi.size(); ++i)
      worst = std::max(worst, std::abs(std::abs(r.psi[i]) - std::abs(r.psi[cm.mesh.mirror[i]])));
    CHECK(worst <= 1e-4);
  }

  TEST_CASE("domain validation") {
    CHECK_THROWS_AS((CornerDomainSpec{0.0, 8, 6}.validate()), UsageError);
    CHECK_THROWS_AS((CornerDomainSpec{2 * M_PI, 8, 6}.validate()), UsageError);
    CHECK_THROWS_AS((CornerDomainSpec{M_PI / 2, 8, 10}.validate()), UsageError);
    CHECK_NOTHROW((CornerDomainSpec{3 * M_PI / 2, 8, 10}.validate()));
    CHECK_THROWS_AS(build_corner_mesh({M_PI / 2, 8, 6}, 1.0), UsageError);
  }

  TEST_CASE("conjecture rows") {
    ConjectureReport c = conjecture_check(1.5, 0.04, {M_PI, M_PI - 0.1, M_PI + 0.1}, {0.0, -0.0041, 0.0039},
                                          {1e-9, 1e-6, 1e-6});
    REQUIRE(c.rows.size() == 3);
    CHECK(c.rows[1].predicted == doctest::Approx(-0.004));
    CHECK(c.rows[1].ratio == doctest::Approx(1e-4 / std::pow(0.1, 4.0 / 3)));
    CHECK(c.C == doctest::Approx(std::max(c.rows[1].ratio, c.rows[2].ratio)));
    CHECK(c.rows[0].ratio == 0.0);
  }
}

TEST_SUITE("extrapolation") {
  TEST_CASE("Aitken recovers a geometric limit") {
    SequenceLimit r = extrapolate_geometric({1.5, 1.25, 1.125});
    CHECK(r.method == "aitken");
    CHECK(r.limit == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.plateau);
  }

  TEST_CASE("power fit recovers a + c x^-p") {
    std::vector<double> xs{8, 12, 16}, v;
    for (double x : xs) v.push_back(-0.15 - 2.0 * std::pow(x, -2.5));
    SequenceLimit r = extrapolate_power(xs, v);
    CHECK(r.method == "power");
    CHECK(r.limit == doctest::Approx(-0.15).epsilon(1e-10));
    CHECK(r.error >= std::abs(v.back() - r.limit));
  }

  TEST_CASE("non-monotone differences are not a plateau") {
    CHECK_FALSE(extrapolate_geometric({1.0, 1.1, 0.8}).plateau);
    CHECK(extrapolate_geometric({1.0, 1.0 + 1e-14, 1.0}, 1e-13).plateau);
    CHECK_THROWS_AS(extrapolate_geometric({1.0}), UsageError);
  }

  TEST_CASE("ladder with an infeasible cell") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> Ls{8, 12, 16}, ells{6, 8, 10};
    std::vector<std::vector<double>> t;
    for (double L : Ls) {
      std::vector<double> row;
      for (double e : ells) row.push_back(-0.15 - std::pow(L, -2.0) - 0.01 * std::pow(0.5, e));
      t.push_back(row);
    }
    t[0][2] = nan;
    LadderLimit lim = extrapolate_limit(Ls, ells, t);
    CHECK(lim.ell_monotone);
    CHECK(lim.L_monotone);
    CHECK(lim.limit == doctest::Approx(-0.15).epsilon(2e-3));
    t[1][1] = t[1][2] = nan;
    CHECK_THROWS_AS(extrapolate_limit(Ls, ells, t), UsageError);
  }
}
