#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "relaybeam/channel.hpp"
#include "relaybeam/rng.hpp"

using namespace relaybeam;

TEST_CASE("path loss") {
  CHECK(path_loss(1.0, 10.0, 2.0) == doctest::Approx(std::sqrt(10.0)).epsilon(1e-12));
  CHECK(path_loss(0.5, 0.0, 2.0) == doctest::Approx(2.0).epsilon(1e-12));
  // frozen from an independent arbitrary-precision evaluation
  CHECK(path_loss(0.7, 10.0, 3.0) ==
        doctest::Approx(5.39949247156038896).epsilon(1e-12));
  CHECK_THROWS_AS(path_loss(0.0, 10.0, 2.0), std::domain_error);
  CHECK_THROWS_AS(path_loss(-1.0, 10.0, 2.0), std::domain_error);
}

TEST_CASE("shadowing") {
  CHECK(shadowing_factor(0.0, 1.7) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(shadowing_factor(3.0, 1.0) ==
        doctest::Approx(1.99526231496887960).epsilon(1e-12));
  CHECK_THROWS_AS(shadowing_factor(-0.5, 0.0), std::domain_error);

  RandomEngine rng = make_stream(11, 0);
  CHECK(shadowing(0.0, rng) == 1.0);

  // log-domain moments of 10^(sigma z / 10)
  const int n = 1'000'000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double log_beta = 10.0 * std::log10(shadowing(3.0, rng));
    sum += log_beta;
    sumsq += log_beta * log_beta;
  }
  const double mean = sum / n;
  const double stddev = std::sqrt(sumsq / n - mean * mean);
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(stddev - 3.0) < 0.02 * 3.0);
}

TEST_CASE("relay geometry") {
  CHECK(relay_dest_distance(0.5, 0.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(relay_dest_distance(0.5, M_PI / 2) ==
        doctest::Approx(1.11803398874989485).epsilon(1e-12));
  CHECK(relay_dest_distance(0.9, M_PI / 3) ==
        doctest::Approx(0.95393920141694565).epsilon(1e-12));

  RandomEngine rng = make_stream(12, 0);
  const auto geo = sample_geometry<double>(64, rng);
  CHECK(geo.source_relay_distances.minCoeff() >= 0.5);
  CHECK(geo.source_relay_distances.maxCoeff() <= 0.9);
  CHECK(geo.relay_source_dest_angles.minCoeff() >= -M_PI / 2);
  CHECK(geo.relay_source_dest_angles.maxCoeff() <= M_PI / 2);
  for (Eigen::Index i = 0; i < 64; ++i) {
    const double d = geo.source_relay_distances(i);
    const double th = geo.relay_source_dest_angles(i);
    CHECK(geo.relay_dest_distances(i) ==
          doctest::Approx(std::sqrt(d * d + 1 - 2 * d * std::cos(th)))
              .epsilon(1e-12));
  }

  // independent law-of-cosines route: place the relay in the plane and take
  // the euclidean distance to the destination at (1, 0)
  double worst = 0.0;
  for (int i = 0; i < 10'000; ++i) {
    const double d = uniform_real(rng, 0.5, 0.9);
    const double th = uniform_real(rng, -M_PI / 2, M_PI / 2);
    const double dx = 1.0 - d * std::cos(th);
    const double dy = d * std::sin(th);
    const double oracle = std::hypot(dx, dy);
    worst = std::max(worst,
                     std::abs(relay_dest_distance(d, th) - oracle) / oracle);
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("channel sampling statistics") {
  RandomEngine rng = make_stream(13, 0);

  // all large-scale factors collapse to 1 => entries are CN(0,1)
  RelayGeometry<double> unit;
  unit.source_relay_distances = Eigen::VectorXd::Ones(1000);
  unit.relay_source_dest_angles = Eigen::VectorXd::Zero(1000);
  unit.relay_dest_distances = Eigen::VectorXd::Ones(1000);
  double re_var = 0.0, im_var = 0.0, power = 0.0;
  const int reps = 100;
  for (int r = 0; r < reps; ++r) {
    const auto [f, g] = sample_channels(unit, 1, 0.0, 2.0, 0.0, rng);
    re_var += f.real().cwiseAbs2().sum();
    im_var += f.imag().cwiseAbs2().sum();
    power += g.cwiseAbs2().sum();
  }
  const double n = 1000.0 * reps;
  // real/imag variances within 3 standard errors of 1/2
  const double se = 0.5 * std::sqrt(2.0 / n);
  CHECK(std::abs(re_var / n - 0.5) < 3 * se);
  CHECK(std::abs(im_var / n - 0.5) < 3 * se);
  CHECK(std::abs(power / n - 1.0) < 0.02);

  // fixed gamma from the geometry, sigma_s = 0: E|g|^2 = gamma^2
  RelayGeometry<double> fixed;
  fixed.source_relay_distances = Eigen::VectorXd::Constant(1000, 0.7);
  fixed.relay_source_dest_angles = Eigen::VectorXd::Zero(1000);
  fixed.relay_dest_distances = Eigen::VectorXd::Constant(1000, 0.8);
  const double gamma = path_loss(0.8, 10.0, 2.0);
  double gp = 0.0;
  for (int r = 0; r < reps; ++r) {
    const auto [f, g] = sample_channels(fixed, 1, 10.0, 2.0, 0.0, rng);
    gp += g.cwiseAbs2().sum();
  }
  CHECK(std::abs(gp / n - gamma * gamma) < 0.02 * gamma * gamma);

  // default experiment dimensions
  RandomEngine rng2 = make_stream(13, 1);
  const auto geo = sample_geometry<double>(8, rng2);
  const auto [f, g] = sample_channels(geo, 3, 10.0, 2.0, 3.0, rng2);
  CHECK(f.rows() == 8);
  CHECK(f.cols() == 3);
  CHECK(g.size() == 8);
  CHECK(f.allFinite());
  CHECK(g.allFinite());
}

TEST_CASE("mismatch injection") {
  RandomEngine rng = make_stream(14, 0);
  const Eigen::MatrixXcd f = complex_normal_matrix(rng, 4, 2, 1.0);
  const Eigen::VectorXcd g = complex_normal_vector(rng, 4, 1.0);
  const Eigen::VectorXd norms = Eigen::VectorXd::Constant(2, 2.0);

  SUBCASE("vanishing perturbation") {
    const auto st = apply_mismatch(f, g, 1e-12, true, norms, 2.0, rng);
    CHECK((st.F_mismatched - f).norm() <= 1e-4 * f.norm());
    CHECK((st.g_mismatched - g).norm() <= 1e-4 * g.norm());
    CHECK(st.epsilon_draw == 1e-12);
  }

  SUBCASE("error variance matches the covariance norm scale") {
    // epsilon = 0.5, ||R||_F = 2 => per-element error variance 1.0
    RandomEngine r2 = make_stream(14, 1);
    const Eigen::MatrixXcd big_f = Eigen::MatrixXcd::Zero(100, 1);
    const Eigen::VectorXcd big_g = Eigen::VectorXcd::Zero(100);
    const Eigen::VectorXd big_norms = Eigen::VectorXd::Constant(1, 2.0);
    double sum = 0.0;
    const int reps = 1000;
    for (int i = 0; i < reps; ++i) {
      const auto st = apply_mismatch(big_f, big_g, 0.5, false, big_norms, 2.0, r2);
      sum += st.F_mismatched.cwiseAbs2().sum();
    }
    const double avg = sum / (100.0 * reps);
    CHECK(std::abs(avg - 1.0) < 0.02);
  }

  SUBCASE("epsilon distribution is uniform on (0, eps_max]") {
    RandomEngine r2 = make_stream(14, 2);
    const int n = 10'000;
    std::vector<double> eps(n);
    for (int i = 0; i < n; ++i)
      eps[i] = inject_mismatch(f, g, 0.5, false, norms, 2.0, r2).epsilon_draw;
    std::sort(eps.begin(), eps.end());
    double ks = 0.0;
    for (int i = 0; i < n; ++i) {
      CHECK(eps[i] > 0.0);
      CHECK(eps[i] <= 0.5);
      const double cdf = eps[i] / 0.5;
      ks = std::max(ks, std::abs((i + 1.0) / n - cdf));
      ks = std::max(ks, std::abs(cdf - static_cast<double>(i) / n));
    }
    CHECK(ks < 0.02);
  }

  SUBCASE("g mismatch toggle") {
    const auto st = inject_mismatch(f, g, 0.5, false, norms, 2.0, rng);
    CHECK((st.g_mismatched.array() == st.g.array()).all());
    CHECK((st.F_mismatched - f).norm() > 0.0);
  }

  SUBCASE("invalid norms") {
    Eigen::VectorXd bad = norms;
    bad(1) = 0.0;
    CHECK_THROWS_AS(apply_mismatch(f, g, 0.5, false, bad, 2.0, rng),
                    std::domain_error);
    CHECK_THROWS_AS(apply_mismatch(f, g, 0.5, true, norms, -1.0, rng),
                    std::domain_error);
    CHECK_THROWS_AS(inject_mismatch(f, g, 0.0, false, norms, 2.0, rng),
                    std::domain_error);
  }
}

TEST_CASE("seeded generation is bit-identical") {
  RandomEngine a = make_stream(99, 7);
  RandomEngine b = make_stream(99, 7);
  const auto geo_a = sample_geometry<double>(8, a);
  const auto geo_b = sample_geometry<double>(8, b);
  CHECK((geo_a.source_relay_distances.array() ==
         geo_b.source_relay_distances.array()).all());
  CHECK((geo_a.relay_dest_distances.array() ==
         geo_b.relay_dest_distances.array()).all());
  const auto [fa, ga] = sample_channels(geo_a, 3, 10.0, 2.0, 3.0, a);
  const auto [fb, gb] = sample_channels(geo_b, 3, 10.0, 2.0, 3.0, b);
  CHECK((fa.array() == fb.array()).all());
  CHECK((ga.array() == gb.array()).all());

  RandomEngine c = make_stream(99, 8);  // different substream
  const auto geo_c = sample_geometry<double>(8, c);
  CHECK_FALSE((geo_a.source_relay_distances.array() ==
               geo_c.source_relay_distances.array()).all());
}
