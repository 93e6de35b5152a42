#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "stap/scene.hpp"

using namespace stap;

namespace {

RadarScenario small_scenario(int n, int j) {
  RadarScenario sc;
  sc.num_elements = n;
  sc.num_pulses = j;
  return sc;
}

double max_abs(const CMatrix& a) { return a.cwiseAbs().maxCoeff(); }

int count_above(const CMatrix& a, double threshold) {
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(a, Eigen::EigenvaluesOnly);
  return static_cast<int>((eig.eigenvalues().array() > threshold).count());
}

}  // namespace

TEST_CASE("spatial steering") {
  const RadarScenario sc = small_scenario(2, 2);
  const CVector a0 = spatial_steering(sc, 0.0);
  CHECK(a0.size() == 2);
  CHECK((a0 - CVector::Ones(2)).norm() == doctest::Approx(0.0));

  // d = lambda/2, sin(30) = 1/2: phase pi/2 per element.
  const CVector a30 = spatial_steering(sc, 30.0);
  CHECK(std::abs(a30[0] - cdouble(1, 0)) < 1e-15);
  CHECK(std::abs(a30[1] - cdouble(0, 1)) < 1e-15);

  CHECK_THROWS_AS(spatial_steering(sc, 90.0), std::invalid_argument);
  CHECK_THROWS_AS(spatial_steering(sc, -90.0), std::invalid_argument);
  CHECK_THROWS_AS(spatial_steering(sc, 120.0), std::invalid_argument);
}

TEST_CASE("temporal steering") {
  CHECK((temporal_steering(small_scenario(2, 8), 0.0) - CVector::Ones(8)).norm() == doctest::Approx(0.0));

  const CVector half = temporal_steering(small_scenario(2, 2), 0.5);
  CHECK(std::abs(half[0] - cdouble(1, 0)) < 1e-15);
  CHECK(std::abs(half[1] - cdouble(-1, 0)) < 1e-15);

  const CVector quarter = temporal_steering(small_scenario(2, 4), 0.25);
  const cdouble expected[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (int j = 0; j < 4; ++j) CHECK(std::abs(quarter[j] - expected[j]) < 1e-15);
}

TEST_CASE("space-time steering is the normalized Kronecker product") {
  const RadarScenario broadside = small_scenario(8, 8);
  const SteeringVector s0 = space_time_steering(broadside, 0.0, 0.0);
  CHECK((s0.entries - CVector::Constant(64, 1.0 / 8.0)).norm() < 1e-14);

  const SteeringVector s = space_time_steering(small_scenario(2, 2), 30.0, 0.5);
  const cdouble expected[] = {{0.5, 0}, {0, 0.5}, {-0.5, 0}, {0, -0.5}};
  for (int k = 0; k < 4; ++k) CHECK(std::abs(s.entries[k] - expected[k]) < 1e-15);

  const RadarScenario table = RadarScenario{};
  for (double az : {-80.0, -45.0, 0.0, 12.5, 60.0, 89.0})
    for (double f : {-0.5, -0.1, 0.0, 0.25, 0.4}) CHECK(std::abs(space_time_steering(table, az, f).entries.norm() - 1.0) <= 1e-12);
}

TEST_CASE("clutter covariance") {
  const RadarScenario sc;
  const CMatrix rc = clutter_covariance(sc);
  const int m = sc.full_dimension();

  CHECK(rc.trace().real() / m == doctest::Approx(1e4).epsilon(1e-12));
  CHECK(max_abs(rc - rc.adjoint()) <= 1e-12 * max_abs(rc));

  Eigen::SelfAdjointEigenSolver<CMatrix> eig(rc, Eigen::EigenvaluesOnly);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-10 * rc.trace().real());

  // Brennan rule N + (J - 1) * slope = 8 + 7 * 1 = 15.
  const int significant = count_above(rc, sc.noise_power);
  CHECK(significant >= 12);
  CHECK(significant <= 18);

  RadarScenario off = sc;
  off.cnr_db = -std::numeric_limits<double>::infinity();
  CHECK(clutter_covariance(off).isZero(0.0));
}

TEST_CASE("jammer covariance") {
  RadarScenario sc;
  const CMatrix rj = jammer_covariance(sc);
  CHECK(max_abs(rj - rj.adjoint()) <= 1e-12 * max_abs(rj));
  CHECK(count_above(rj, 1e-8 * max_abs(rj)) == 2 * sc.num_pulses);
  // Per-element jammer power = 2 jammers * JNR.
  CHECK(rj.diagonal().real().mean() == doctest::Approx(2e3).epsilon(1e-12));

  RadarScenario none = sc;
  none.jammer_azimuths.clear();
  CHECK(jammer_covariance(none).isZero(0.0));

  RadarScenario single = small_scenario(4, 1);
  single.jammer_azimuths = {20.0};
  const CVector a = spatial_steering(single, 20.0);
  const CMatrix expected = db_to_linear(single.jnr_db) * a * a.adjoint();
  CHECK(max_abs(jammer_covariance(single) - expected) < 1e-10);
  CHECK(count_above(jammer_covariance(single), 1e-6) == 1);
}

TEST_CASE("assemble covariance") {
  SUBCASE("noise only") {
    RadarScenario sc = small_scenario(4, 3);
    sc.cnr_db = -std::numeric_limits<double>::infinity();
    sc.jammer_azimuths.clear();
    sc.noise_power = 2.5;
    const CovarianceSet cov = assemble_covariance(sc);
    CHECK(max_abs(cov.total - 2.5 * CMatrix::Identity(12, 12)) == 0.0);
    CHECK(max_abs(cov.coloring - std::sqrt(2.5) * CMatrix::Identity(12, 12)) < 1e-15);
  }
  SUBCASE("reference scenario") {
    const CovarianceSet cov = assemble_covariance(RadarScenario{});
    CHECK(cov.dimension() == 64);
    CHECK(max_abs(cov.total - cov.clutter - cov.jammer - cov.noise) <= 1e-14 * max_abs(cov.total));
    CHECK(max_abs(cov.total - cov.total.adjoint()) <= 1e-12 * max_abs(cov.total));
    CHECK(max_abs(cov.coloring * cov.coloring.adjoint() - cov.total) <= 1e-10 * max_abs(cov.total));
    CHECK(cov.coloring.isLowerTriangular(0.0));
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(cov.total, Eigen::EigenvaluesOnly);
    CHECK(eig.eigenvalues().minCoeff() > 0.0);
  }
  SUBCASE("invalid scenario rejected") {
    RadarScenario sc;
    sc.jammer_azimuths = {95.0};
    CHECK_THROWS_AS(assemble_covariance(sc), ConfigError);
    sc = RadarScenario{};
    sc.prf = 0.0;
    CHECK_THROWS_AS(assemble_covariance(sc), ConfigError);
    sc = RadarScenario{};
    sc.num_elements = 0;
    CHECK_THROWS_AS(assemble_covariance(sc), ConfigError);
  }
}

TEST_CASE("snapshot draws") {
  SUBCASE("H0 forces zero gain and H1 adds the target") {
    const RadarScenario sc = small_scenario(2, 2);
    const CovarianceSet cov = assemble_covariance(sc);
    const SteeringVector s = space_time_steering(sc, 10.0, 0.1);
    Rng a(7), b(7);
    const Snapshot h0 = draw_snapshot(cov, Hypothesis::kH0, cdouble(3, 1), s, a);
    const Snapshot h1 = draw_snapshot(cov, Hypothesis::kH1, cdouble(3, 1), s, b);
    CHECK(h0.target_gain == cdouble(0, 0));
    CHECK((h1.data - h0.data - cdouble(3, 1) * s.entries).norm() < 1e-14);

    Rng c(7);
    const Snapshot h1_zero = draw_snapshot(cov, Hypothesis::kH1, cdouble(0, 0), s, c);
    CHECK((h1_zero.data - h0.data).norm() == 0.0);
  }

  SUBCASE("identity covariance, 1e5 draws") {
    RadarScenario sc = small_scenario(2, 2);
    sc.cnr_db = -std::numeric_limits<double>::infinity();
    sc.jammer_azimuths.clear();
    const CovarianceSet cov = assemble_covariance(sc);
    Rng rng(12345);
    CMatrix acc = CMatrix::Zero(4, 4);
    CVector r;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
      draw_interference(cov.coloring, rng, r);
      acc += r * r.adjoint();
    }
    acc /= n;
    CHECK(max_abs(acc - CMatrix::Identity(4, 4)) <= 0.05);
  }

  SUBCASE("fixed seed is reproducible") {
    const CovarianceSet cov = assemble_covariance(RadarScenario{});
    Rng a = trial_rng(99, 3), b = trial_rng(99, 3), c = trial_rng(99, 4);
    CVector ra, rb, rc;
    for (int i = 0; i < 5; ++i) {
      draw_interference(cov.coloring, a, ra);
      draw_interference(cov.coloring, b, rb);
      draw_interference(cov.coloring, c, rc);
      CHECK(ra == rb);
      CHECK(ra != rc);
    }
  }
}
