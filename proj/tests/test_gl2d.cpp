#include <doctest.h>

#include <cmath>

#include "glcorner/gl2d.hpp"
#include "glcorner/mesh.hpp"
#include "support/properties.hpp"

using namespace glcorner;
using namespace glcorner::testing;

TEST_SUITE("gl2d") {
  TEST_CASE("energy is gauge invariant") {
    CHECK(gauge_defect(small_disc_mesh(), 0.2, 5, 11) <= 1e-12);
    CHECK(gauge_defect(flat_rectangle_mesh(0.4), 1.0, 5, 12) <= 1e-12);
  }

  TEST_CASE("discrete curl of the link phases equals the cell area") {
    CHECK(curl_defect(small_disc_mesh()) <= 1e-12);
    CHECK(curl_defect(flat_rectangle_mesh(0.4)) <= 1e-12);
    CHECK(curl_defect(build_sector_mesh(M_PI / 3, 10.0, 0.5)) <= 1e-12);
  }

  TEST_CASE("mesh sanity: total mass equals area") {
    Mesh2D m = flat_rectangle_mesh(0.4);
    double total = 0;
    for (double v : m.mass) total += v;
    CHECK(total == doctest::Approx(m.area()).epsilon(1e-12));
    CHECK(m.area() == doctest::Approx(32.0).epsilon(1e-12));
  }

  TEST_CASE("zero field is a critical point") {
    Mesh2D m = small_disc_mesh();
    ComplexField2D zero(m.num_nodes());
    Connection c = make_connection(m, 0.2);
    GLParams p{0.2, 1.5};
    CHECK(gl_energy(m, c, zero, p) == 0.0);
    for (const auto& g : gl_gradient(m, c, zero, p)) CHECK(std::abs(g) == 0.0);
  }

  TEST_CASE("gradient is the Wirtinger derivative of the energy") {
    Mesh2D m = small_disc_mesh();
    Connection c = make_connection(m, 0.2);
    GLParams p{0.2, 1.5};
    ComplexField2D psi = random_field(m.num_nodes(), 5, 0.8);
    ComplexField2D g = gl_gradient(m, c, psi, p);
    for (int i : {0, 17, m.num_nodes() - 1}) {
      for (Complex dir : {Complex(1, 0), Complex(0, 1)}) {
        auto pp = psi, pm = psi;
        const double d = 1e-6;
        pp[i] += d * dir;
        pm[i] -= d * dir;
        double fd = (gl_energy(m, c, pp, p) - gl_energy(m, c, pm, p)) / (2 * d);
        double an = 2 * std::real(std::conj(g[i]) * dir);
        CHECK(an == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
      }
    }
  }

  TEST_CASE("gradient flow: monotone descent and maximum principle") {
    DescentCheck d = descent_check(small_disc_mesh(), 0.2, 1.5, 3);
    CHECK(d.converged);
    CHECK(d.accepted > 10);
    CHECK(d.max_change <= 0.0);
    CHECK(d.max_modulus <= 1.0 + 1e-10);
    CHECK(d.energy < 0.0);
  }

  TEST_CASE("Dirichlet mode keeps frozen nodes") {
    Mesh2D m = small_disc_mesh();
    ComplexField2D init = random_field(m.num_nodes(), 9, 0.5);
    for (int i = 0; i < m.num_nodes(); ++i)
      if (m.tag[i] == NodeTag::Dirichlet) init[i] = 0;
    SolveReport r = minimize(m, {0.2, 1.5}, init, BoundaryMode::Dirichlet);
    for (int i = 0; i < m.num_nodes(); ++i)
      if (m.tag[i] == NodeTag::Dirichlet) CHECK(r.psi[i] == Complex(0, 0));
  }

  TEST_CASE("grid halving: second-order energies in 1D and 2D") {
    CHECK(order_1d(0.04) >= 1.9);
    CHECK(order_2d(0.4) >= 1.9);
  }

  TEST_CASE("parameter validation") {
    CHECK_THROWS_AS((GLParams{0.0, 1.5}.validate()), UsageError);
    CHECK_THROWS_AS((GLParams{0.1, -1.0}.validate()), UsageError);
  }
}
