#include <doctest.h>

#include <cmath>

#include "glcorner/spectral.hpp"

using namespace glcorner;

TEST_SUITE("spectral") {
  TEST_CASE("Theta0: Richardson estimate is consistent") {
    Theta0Result th = compute_theta0();
    CHECK(th.theta0 > 0);
    CHECK(th.theta0 < 1);
    CHECK(std::abs(th.fine - th.theta0) <= 4 * th.error_estimate + 1e-12);
  }

  TEST_CASE("sector ground states: flat angle gives Theta0, right angle lies below") {
    const double theta0 = 0.5901061257;
    SectorSpec flat;
    flat.beta = M_PI;
    flat.R = 14;
    flat.h = 0.3;
    flat.accuracy = 1e-2;
    flat.estimate_truncation = false;
    EigenResult mf = compute_mu(flat);
    CHECK(mf.value == doctest::Approx(theta0).epsilon(1e-2));
    SectorSpec right = flat;
    right.beta = M_PI / 2;
    EigenResult mr = compute_mu(right);
    CHECK(mr.value < theta0 - 0.05);
    CHECK(mr.residual <= 1e-6);
  }

  TEST_CASE("sector validation") {
    SectorSpec s;
    s.beta = 0;
    CHECK_THROWS_AS(s.validate(), UsageError);
    s.beta = 1;
    s.R = -1;
    CHECK_THROWS_AS(s.validate(), UsageError);
  }

  TEST_CASE("critical field ladder is sorted and clamped") {
    auto sq = make_square(2.0);
    CriticalFields cf = critical_fields(0.1, sq, 0.59, [](double beta) { return beta < 2 ? 0.5 : 0.7; });
    CHECK(cf.hc2 == doctest::Approx(100));
    CHECK(cf.hstar == doctest::Approx(100 / 0.59));
    REQUIRE(cf.corner_fields.size() == 4);
    for (double f : cf.corner_fields) CHECK(f == doctest::Approx(100 / 0.5));
    CriticalFields cp = critical_fields(0.1, make_notched_pentagon(), 0.59,
                                        [](double beta) { return beta < 2 ? 0.5 : 0.7; });
    CHECK(cp.corner_fields.front() == doctest::Approx(cp.hstar));  // reflex corner: mu >= Theta0
    for (size_t i = 1; i < cp.corner_fields.size(); ++i) CHECK(cp.corner_fields[i] >= cp.corner_fields[i - 1]);
  }
}
