#include <doctest.h>

#include <cmath>

#include "glcorner/diagnostics.hpp"
#include "glcorner/oned.hpp"
#include "support/properties.hpp"

using namespace glcorner;
using namespace glcorner::testing;

TEST_SUITE("diagnostics") {
  TEST_CASE("winding number of known fields") {
    Mesh2D m = small_disc_mesh();
    ComplexField2D psi(m.num_nodes());
    for (int n : {-7, 0, 3}) {
      for (int i = 0; i < m.num_nodes(); ++i) psi[i] = std::polar(0.5, n * std::atan2(m.nodes[i].y, m.nodes[i].x));
      CHECK(winding_number(m, psi, 0.2) == n);
    }
    for (int i = 0; i < m.num_nodes(); ++i) psi[i] = 0.3 + m.nodes[i].x;  // real, positive on the outer ring
    CHECK(winding_number(m, psi, 0.0) == 0);
    for (int i = 0; i < m.num_nodes(); ++i) psi[i] = std::max(0.0, m.nodes[i].x);  // zero on half of every ring
    CHECK_THROWS_AS(winding_number(m, psi, 0.2), NumericalError);
  }

  TEST_CASE("degree prediction and boundary flux on the unit disc") {
    auto d = make_disc(1.0);
    CHECK(boundary_flux(d, d.perimeter()) == doctest::Approx(M_PI).epsilon(1e-12));
    CHECK(predicted_degree(d, 0.04, -0.78) == doctest::Approx(1 / (2 * 0.0016) - 0.78 / 0.04).epsilon(1e-12));
  }

  TEST_CASE("tubular ansatz reproduces its own profile and degree") {
    const double eps = 0.1;
    auto d = make_disc(1.0);
    SurfaceConstants sc = compute_ecorr(1.5);
    LayerMeshOptions o;
    o.h_s = 0.3;
    o.h_t = 0.2;
    o.depth = 6;
    Mesh2D m = build_layer_mesh(d, eps, o);
    Ansatz a = tubular_ansatz(m, d, eps, sc.profile, sc.alpha0);
    CHECK(a.degree == static_cast<int>(std::lround(predicted_degree(d, eps, sc.alpha0))));
    CHECK(surface_profile_deviation(m, a.psi, eps, sc.profile) <= 1e-3);
    CHECK(winding_number(m, a.psi, eps) == -a.degree);
    AgmonReport ag = agmon_profile(m, a.psi, eps);
    CHECK_FALSE(ag.no_mass);
    CHECK(ag.rate > 0);
    for (size_t i = 1; i < ag.mass.size(); ++i) CHECK(ag.mass[i] <= ag.mass[i - 1]);
  }

  TEST_CASE("supercurrent is gauge invariant") {
    Mesh2D m = small_disc_mesh();
    Connection c = make_connection(m, 0.2);
    ComplexField2D psi = random_field(m.num_nodes(), 21);
    std::vector<double> phi(m.num_nodes());
    ComplexField2D q(psi.size());
    for (int i = 0; i < m.num_nodes(); ++i) {
      phi[i] = 3.0 * m.nodes[i].x * m.nodes[i].y + i;
      q[i] = psi[i] * std::polar(1.0, phi[i]);
    }
    Supercurrent j1 = supercurrent(m, c, psi), j2 = supercurrent(m, gauge_transform(m, c, phi), q);
    double worst = 0;
    for (size_t e = 0; e < j1.edge.size(); ++e) worst = std::max(worst, std::abs(j1.edge[e] - j2.edge[e]));
    CHECK(worst <= 1e-12);
  }

  TEST_CASE("agmon profile of the zero field reports no mass") {
    Mesh2D m = small_disc_mesh();
    CHECK(agmon_profile(m, ComplexField2D(m.num_nodes()), 0.2).no_mass);
  }

  TEST_CASE("density windows on a symmetric field are equal") {
    const double eps = 0.1;
    auto d = make_disc(1.0);
    SurfaceConstants sc = compute_ecorr(1.5);
    LayerMeshOptions o;
    o.h_s = 0.3;
    o.h_t = 0.2;
    o.depth = 6;
    Mesh2D m = build_layer_mesh(d, eps, o);
    Ansatz a = tubular_ansatz(m, d, eps, sc.profile, sc.alpha0);
    const double P = d.perimeter();
    auto rows = density_vs_curvature(m, a.psi, eps, 1.5, d, sc, {{0, P / 2}, {P / 2, P}});
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].quartic == doctest::Approx(rows[1].quartic).epsilon(1e-2));
    CHECK(rows[0].curvature == doctest::Approx(M_PI).epsilon(1e-12));
    CHECK(rows[0].leading == doctest::Approx(-eps * sc.E0 * P / 2).epsilon(1e-12));
  }
}
