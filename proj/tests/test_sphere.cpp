#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cmcfol/sphere_harmonics.hpp"

#include <cmath>
#include <random>

using namespace cmcfol;

namespace {

Eigen::VectorXd sample(const SphereGrid& grid, const std::function<double(Vec3)>& f) {
  Eigen::VectorXd v(grid.node_count());
  for (int k = 0; k < grid.node_count(); ++k) v[k] = f(grid.direction(k));
  return v;
}

HarmonicCoeffs random_coeffs(int L, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  HarmonicCoeffs c(L);
  for (int i = 0; i < c.size(); ++i) c.a[i] = dist(rng);
  return c;
}

}  // namespace

TEST_CASE("quadrature weights sum to 4pi") {
  for (int L : {8, 16, 24}) {
    SphereGrid grid(L);
    double sum = 0;
    for (int k = 0; k < grid.node_count(); ++k) sum += grid.weight(k);
    CHECK(sum == doctest::Approx(kFourPi).epsilon(1e-12));
  }
}

TEST_CASE("basis orthonormality under quadrature") {
  const int L = 8;
  SphereGrid grid(L);
  const int B = (L + 1) * (L + 1);
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(B, B);
  for (int k = 0; k < grid.node_count(); ++k) {
    Eigen::VectorXd y(B);
    int a = 0;
    for (int l = 0; l <= L; ++l)
      for (int m = -l; m <= l; ++m) y[a++] = grid.basis(l, m, k);
    G += grid.weight(k) * y * y.transpose();
  }
  CHECK((G - Eigen::MatrixXd::Identity(B, B)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("analysis of elementary fields") {
  SphereGrid grid(12);
  SUBCASE("constant one gives a00 = sqrt(4pi)") {
    auto c = grid.analysis(Eigen::VectorXd::Ones(grid.node_count()));
    CHECK(c.at(0, 0) == doctest::Approx(std::sqrt(kFourPi)).epsilon(1e-13));
    c.at(0, 0) = 0.0;
    CHECK(c.a.cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("sampled Y20 gives a20 = 1") {
    Eigen::VectorXd v(grid.node_count());
    for (int k = 0; k < grid.node_count(); ++k) v[k] = grid.basis(2, 0, k);
    auto c = grid.analysis(v);
    CHECK(c.at(2, 0) == doctest::Approx(1.0).epsilon(1e-13));
    c.at(2, 0) = 0.0;
    CHECK(c.a.cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("Cartesian z is pure l=1, m=0") {
    auto c = grid.analysis(sample(grid, [](Vec3 w) { return w.z(); }));
    CHECK(c.at(1, 0) == doctest::Approx(std::sqrt(kFourPi / 3.0)).epsilon(1e-13));
    c.at(1, 0) = 0.0;
    CHECK(c.a.cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("synthesis basics and round trip") {
  SphereGrid grid(16);
  SUBCASE("zero coefficients synthesize to zero") {
    CHECK(grid.synthesis(HarmonicCoeffs(16)).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("single a10 reproduces Y10 at nodes") {
    HarmonicCoeffs c(16);
    c.at(1, 0) = 1.0;
    auto v = grid.synthesis(c);
    for (int k = 0; k < grid.node_count(); k += 7)
      CHECK(v[k] == doctest::Approx(grid.basis(1, 0, k)).epsilon(1e-14));
  }
  SUBCASE("analysis(synthesis(a)) = a on random band-limited data") {
    for (unsigned seed : {1u, 2u, 3u}) {
      auto c = random_coeffs(16, seed);
      auto back = grid.analysis(grid.synthesis(c));
      CHECK((back.a - c.a).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("laplace_beltrami eigenvalues") {
  HarmonicCoeffs c(4);
  c.at(0, 0) = 1.0;
  c.at(1, -1) = 2.0;
  c.at(2, 1) = -3.0;
  auto lap = laplace_beltrami_apply(c);
  CHECK(lap.at(0, 0) == 0.0);
  CHECK(lap.at(1, -1) == doctest::Approx(2.0 * 2.0));
  CHECK(lap.at(2, 1) == doctest::Approx(6.0 * -3.0));
}

TEST_CASE("l1 projection") {
  SphereGrid grid(8);
  SUBCASE("pure l=1 field 3y1 - y3") {
    auto c = grid.analysis(sample(grid, [](Vec3 w) { return 3.0 * w.x() - w.z(); }));
    auto split = l1_projection(c);
    CHECK((split.b - Vec3(3, 0, -1)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(split.remainder.a.cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("Y20 passes through untouched") {
    HarmonicCoeffs c(8);
    c.at(2, 0) = 1.0;
    auto split = l1_projection(c);
    CHECK(split.b.norm() == 0.0);
    CHECK((split.remainder.a - c.a).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("5 + 2y2") {
    auto c = grid.analysis(sample(grid, [](Vec3 w) { return 5.0 + 2.0 * w.y(); }));
    auto split = l1_projection(c);
    CHECK((split.b - Vec3(0, 2, 0)).cwiseAbs().maxCoeff() < 1e-12);
    auto rem = grid.synthesis(split.remainder);
    CHECK((rem.array() - 5.0).abs().maxCoeff() < 1e-12);
  }
  SUBCASE("idempotent and commutes with the Laplacian") {
    auto c = random_coeffs(8, 77);
    auto s1 = l1_projection(c);
    auto s2 = l1_projection(s1.remainder);
    CHECK(s2.b.norm() == 0.0);
    auto a = l1_projection(laplace_beltrami_apply(c)).remainder;
    auto b = laplace_beltrami_apply(l1_projection(c).remainder);
    CHECK((a.a - b.a).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("quadrature integrals") {
  SphereGrid grid(10);
  CHECK(grid.quadrature_integral(Eigen::VectorXd::Ones(grid.node_count())) ==
        doctest::Approx(kFourPi).epsilon(1e-13));
  CHECK(std::abs(grid.quadrature_integral(sample(grid, [](Vec3 w) { return w.z(); }))) < 1e-12);
  // int z^2 over the unit sphere = 4pi/3
  CHECK(grid.quadrature_integral(sample(grid, [](Vec3 w) { return w.z() * w.z(); })) ==
        doctest::Approx(kFourPi / 3.0).epsilon(1e-13));
}

TEST_CASE("Parseval identity") {
  SphereGrid grid(12);
  auto c = random_coeffs(12, 5);
  auto v = grid.synthesis(c);
  Eigen::VectorXd v2 = v.array().square();
  CHECK(grid.quadrature_integral(v2) ==
        doctest::Approx(c.a.squaredNorm()).epsilon(1e-10));
}

TEST_CASE("spectral accuracy for exp(z) at L=24") {
  SphereGrid grid(24);
  auto c = grid.analysis(sample(grid, [](Vec3 w) { return std::exp(w.z()); }));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double max_err = 0.0;
  for (int t = 0; t < 100; ++t) {
    const double theta = std::acos(2.0 * u(rng) - 1.0);
    const double phi = 2.0 * kPi * u(rng);
    const double approx = SphereGrid::evaluate(c, theta, phi);
    max_err = std::max(max_err, std::abs(approx - std::exp(std::cos(theta))));
  }
  CHECK(max_err < 1e-10);
}

TEST_CASE("angular derivatives of the basis are spectrally exact") {
  SphereGrid grid(10);
  HarmonicCoeffs c(10);
  c.at(1, 0) = 1.0;
  auto jet = grid.synthesis_with_derivatives(c);
  const double n10 = std::sqrt(3.0 / kFourPi);
  for (int k = 0; k < grid.node_count(); k += 5) {
    const int i = k / grid.n_phi();
    // Y10 = n10 cos(theta): d/dtheta = -n10 sin, d2 = -n10 cos
    CHECK(jet.f_t[k] == doctest::Approx(-n10 * grid.sin_theta(i)).epsilon(1e-12));
    CHECK(jet.f_tt[k] == doctest::Approx(-n10 * grid.cos_theta(i)).epsilon(1e-12));
    CHECK(std::abs(jet.f_p[k]) < 1e-14);
  }
  // mixed and phi derivatives against an analytic Y11 = n10 sin(th) cos(ph)
  HarmonicCoeffs c2(10);
  c2.at(1, 1) = 1.0;
  auto jet2 = grid.synthesis_with_derivatives(c2);
  for (int k = 0; k < grid.node_count(); k += 7) {
    const int i = k / grid.n_phi(), j = k % grid.n_phi();
    const double th = grid.theta(i), ph = grid.phi(j);
    CHECK(jet2.f[k] == doctest::Approx(n10 * std::sin(th) * std::cos(ph)).epsilon(1e-12));
    CHECK(jet2.f_p[k] == doctest::Approx(-n10 * std::sin(th) * std::sin(ph)).epsilon(1e-12));
    CHECK(jet2.f_tp[k] == doctest::Approx(-n10 * std::cos(th) * std::sin(ph)).epsilon(1e-12));
    CHECK(jet2.f_pp[k] == doctest::Approx(-n10 * std::sin(th) * std::cos(ph)).epsilon(1e-12));
  }
}

TEST_CASE("antipodal node map is exact") {
  SphereGrid grid(9);
  for (int k = 0; k < grid.node_count(); ++k) {
    const int a = grid.antipodal_node(k);
    CHECK((grid.direction(a) + grid.direction(k)).norm() < 1e-14);
    CHECK(grid.antipodal_node(a) == k);
  }
}

TEST_CASE("analysis rejects non-finite input") {
  SphereGrid grid(4);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(grid.node_count());
  v[3] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS((void)grid.analysis(v), NonFiniteInput);
}
