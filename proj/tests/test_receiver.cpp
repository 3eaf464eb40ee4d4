#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "qtr/error.hpp"
#include "qtr/oracles.hpp"
#include "qtr/receiver.hpp"

using namespace qtr;
using doctest::Approx;
using cd = std::complex<double>;

namespace {

constexpr double pi = std::numbers::pi;

// Distance between two axis angles, modulo pi.
double axis_distance(double a, double b) {
  const double r = std::remainder(a - b, pi);
  return std::abs(r);
}

std::vector<cd> random_outcomes(RandomStream& rng, int d) {
  std::vector<cd> a(d);
  for (auto& x : a) x = rng.complex_normal(2.0 + 10 * rng.uniform());
  return a;
}

ProtocolParams high_snr() {
  ProtocolParams p;
  p.kappa = 0.5;
  p.n_s = 5;
  p.n_b = 1;
  p.d = 3;
  p.m_pulses = 50;
  p.mode = SamplingMode::Asymptotic;
  return p;
}

}  // namespace

TEST_CASE("normalize_angle range") {
  CHECK(normalize_angle(0.0) == 0.0);
  CHECK(normalize_angle(pi / 2) == Approx(pi / 2));
  CHECK(normalize_angle(-pi / 2) == Approx(pi / 2));
  CHECK(normalize_angle(pi) == Approx(0.0).epsilon(1e-15));
  CHECK(normalize_angle(3.0) == Approx(3.0 - pi));
  for (double t = -20; t < 20; t += 0.37) {
    const double r = normalize_angle(t);
    CHECK(r > -pi / 2);
    CHECK(r <= pi / 2);
    CHECK(axis_distance(r, t) < 1e-12);
  }
}

TEST_CASE("homodyne angle examples") {
  CHECK(homodyne_angle(std::vector<cd>{{1, 0}, {-1, 0}}) == 0.0);
  CHECK(homodyne_angle(std::vector<cd>{{0, 1}, {0, -1}}) == Approx(pi / 2));
  CHECK(homodyne_angle(std::vector<cd>{{1, 1}, {-1, -1}}) == Approx(-pi / 4));
  // Degenerate resultant: coincident points and the isotropic square.
  CHECK(homodyne_angle(std::vector<cd>{{2, 3}, {2, 3}}) == 0.0);
  CHECK(homodyne_angle(std::vector<cd>{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}) == 0.0);
  CHECK_THROWS_AS(homodyne_angle(std::vector<cd>{{1, 0}}), ParameterError);
}

TEST_CASE("scatter matrix examples") {
  const auto a = scatter_matrix(std::vector<cd>{{1, 0}, {-1, 0}});
  CHECK(a.s_xx == 2.0);
  CHECK(a.s_yy == 0.0);
  CHECK(a.s_xy == 0.0);
  const auto b = scatter_matrix(std::vector<cd>{{1, 1}, {-1, -1}});
  CHECK(b.s_xx == 2.0);
  CHECK(b.s_yy == 2.0);
  CHECK(b.s_xy == -2.0);
  CHECK_THROWS_AS(scatter_matrix(std::vector<cd>{}), ParameterError);
}

TEST_CASE("scatter matrix is positive semidefinite") {
  RandomStream rng(21, 0);
  for (int i = 0; i < 2000; ++i) {
    const auto s = scatter_matrix(random_outcomes(rng, 2 + static_cast<int>(rng.below(14))));
    CHECK(s.s_xx >= 0);
    CHECK(s.s_yy >= 0);
    CHECK(s.s_xy * s.s_xy <= s.s_xx * s.s_yy * (1 + 1e-12));
  }
}

TEST_CASE("angle matches the principal eigenvector") {
  RandomStream rng(22, 0);
  for (int d : {2, 5, 15}) {
    for (int i = 0; i < 3000; ++i) {
      const auto a = random_outcomes(rng, d);
      const double theta = homodyne_angle(a);
      CHECK(theta > -pi / 2);
      CHECK(theta <= pi / 2);
      CHECK(axis_distance(theta, principal_angle_eig(scatter_matrix(a))) < 1e-9);
    }
  }
}

TEST_CASE("rotation covariance") {
  RandomStream rng(23, 0);
  const double g = 0.7;
  for (int i = 0; i < 500; ++i) {
    const int d = 2 + static_cast<int>(rng.below(6));
    const auto a = random_outcomes(rng, d);
    const double phi = 2 * pi * rng.uniform();
    std::vector<cd> rotated(a);
    for (auto& x : rotated) x *= std::polar(1.0, phi);

    const double theta = homodyne_angle(a);
    const double theta_rot = homodyne_angle(rotated);
    CHECK(axis_distance(theta_rot, theta - phi) < 1e-9);

    // Regenerate X from the target with the same noise draw; distances agree.
    const auto t = rng.below(static_cast<std::uint32_t>(d));
    const double noise = rng.normal();
    // theta_rot may sit a half turn from theta - phi; that measures -x, so
    // the same physical noise enters with the opposite sign.
    const double flip = std::cos(theta_rot - (theta - phi)) > 0 ? 1.0 : -1.0;
    auto homodyne = [&](const std::vector<cd>& alphas, double angle, double sign) {
      return g * std::real(std::conj(alphas[t]) * std::polar(1.0, -angle)) + sign * noise;
    };
    DistanceAccumulator base(d, g), turned(d, g);
    base.add_pulse(a, theta, homodyne(a, theta, 1.0));
    turned.add_pulse(rotated, theta_rot, homodyne(rotated, theta_rot, flip));
    for (int k = 0; k < d; ++k) {
      CHECK(turned.distances()[k] == Approx(base.distances()[k]).epsilon(1e-9));
    }
  }
}

TEST_CASE("permutation equivariance") {
  RandomStream rng(24, 0);
  ProtocolParams p;
  p.kappa = 0.2;
  p.n_s = 1;
  p.n_b = 1;
  p.d = 5;
  p.m_pulses = 8;
  const std::size_t d = 5, m = 8;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<cd> het(d * m);
    for (auto& x : het) x = rng.complex_normal(1.0);
    std::vector<double> thetas(m), xs(m);
    for (std::size_t l = 0; l < m; ++l) {
      thetas[l] = homodyne_angle(std::span<const cd>(het).subspan(l * d, d));
      xs[l] = 3 * rng.normal();
    }
    std::vector<std::size_t> perm(d);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t k = d - 1; k > 0; --k) std::swap(perm[k], perm[rng.below(k + 1)]);

    // permuted[l, perm[k]] = het[l, k]
    std::vector<cd> permuted(d * m);
    for (std::size_t l = 0; l < m; ++l) {
      for (std::size_t k = 0; k < d; ++k) permuted[l * d + perm[k]] = het[l * d + k];
      const double t = homodyne_angle(std::span<const cd>(permuted).subspan(l * d, d));
      CHECK(axis_distance(t, thetas[l]) < 1e-12);
    }
    const int est = ml_estimate(het, thetas, xs, p);
    const int est_perm = ml_estimate(permuted, thetas, xs, p);
    CHECK(est_perm == static_cast<int>(perm[est - 1]) + 1);
  }
}

TEST_CASE("ml estimate examples") {
  ProtocolParams p;
  p.d = 2;
  p.m_pulses = 1;
  p.mode = SamplingMode::Asymptotic;
  // Pick n_b so g = 2 sqrt(kappa n_s) / n_b = 1.
  p.kappa = 0.25;
  p.n_s = 1.0;
  p.n_b = 1.0;
  REQUIRE(ml_gain(p) == Approx(1.0));
  const std::vector<cd> het{{1, 0}, {-1, 0}};
  const std::vector<double> thetas{0.0};
  CHECK(ml_estimate(het, thetas, std::vector<double>{0.9}, p) == 1);
  CHECK(ml_estimate(het, thetas, std::vector<double>{-0.9}, p) == 2);

  // X equal to the target's mean is at zero distance.
  p.d = 3;
  const std::vector<cd> het3{{0.5, 0.1}, {2.0, -1.0}, {-1.5, 0.3}};
  const double x = ml_gain(p) * het3[1].real();
  CHECK(ml_estimate(het3, thetas, std::vector<double>{x}, p) == 2);

  // No signal: every distance ties and the lowest index wins.
  p.kappa = 0.0;
  CHECK(ml_gain(p) == 0.0);
  CHECK(ml_estimate(het3, thetas, std::vector<double>{0.4}, p) == 1);

  CHECK_THROWS_AS(ml_estimate(het3, std::vector<double>{0, 0}, std::vector<double>{0.4}, p),
                  ParameterError);
  CHECK_THROWS_AS(ml_estimate(het, thetas, std::vector<double>{0.4}, p), ParameterError);
}

TEST_CASE("ml gain per mode") {
  ProtocolParams p;
  p.kappa = 0.01;
  p.n_s = 0.1;
  p.n_b = 600;
  p.mode = SamplingMode::Asymptotic;
  CHECK(ml_gain(p) == Approx(2 * std::sqrt(0.001) / 600));
  p.mode = SamplingMode::Exact;
  CHECK(ml_gain(p) == Approx(2 * std::sqrt(0.001 * 1.1) / 601.001));
}

TEST_CASE("run_trial record and streaming agree") {
  for (auto mode : {SamplingMode::Asymptotic, SamplingMode::Exact}) {
    ProtocolParams p;
    p.kappa = 0.1;
    p.n_s = 0.5;
    p.n_b = 10;
    p.d = 4;
    p.m_pulses = 60;
    p.mode = mode;
    for (std::uint64_t trial = 0; trial < 50; ++trial) {
      const TrialStreams streams(99, trial, p.d);
      const int target = 1 + static_cast<int>(trial % 4);
      const auto rec = run_trial(p, target, streams);
      CHECK(rec.true_index == target);
      CHECK(rec.heterodyne.size() == 240);
      CHECK(rec.thetas.size() == 60);
      CHECK(rec.homodyne.size() == 60);
      CHECK(rec.estimate >= 1);
      CHECK(rec.estimate <= 4);
      CHECK(run_trial_streaming(p, target, streams) == rec.estimate);
      for (int l = 0; l < rec.m; ++l) {
        CHECK(rec.thetas[l] == homodyne_angle(rec.pulse_outcomes(l)));
      }
      const auto again = run_trial(p, target, streams);
      CHECK(again.heterodyne == rec.heterodyne);
      CHECK(again.homodyne == rec.homodyne);
    }
  }
}

TEST_CASE("run_trial draws follow the substream layout") {
  ProtocolParams p;
  p.kappa = 0.1;
  p.n_s = 0.5;
  p.n_b = 10;
  p.d = 3;
  p.m_pulses = 4;
  const TrialStreams streams(5, 17, p.d);
  const auto rec = run_trial(p, 2, streams);
  for (int l = 0; l < 4; ++l) {
    for (int k = 0; k < 3; ++k) {
      auto lane = streams.mode_stream(l, k);
      CHECK(rec.alpha(k, l) == lane.complex_normal(p.n_b));
    }
  }
}

TEST_CASE("run_trial errors") {
  auto p = high_snr();
  const TrialStreams streams(1, 0, p.d);
  CHECK_THROWS_AS(run_trial(p, 0, streams), ParameterError);
  CHECK_THROWS_AS(run_trial_streaming(p, 4, streams), ParameterError);
  CHECK_THROWS_AS(TrialStreams(1, 0, 1), ParameterError);
  p.m_pulses = 2'000'000'000;
  CHECK_THROWS_AS(run_trial_streaming(p, 1, streams), ParameterError);
}

TEST_CASE("high SNR trials are nearly always right") {
  const auto p = high_snr();
  int correct = 0;
  const int trials = 10000;
  for (int i = 0; i < trials; ++i) {
    const TrialStreams streams(31, i, p.d);
    const int target = 1 + i % p.d;
    correct += run_trial_streaming(p, target, streams) == target;
  }
  CHECK(correct >= 0.99 * trials);
}

TEST_CASE("no signal means guessing") {
  auto p = high_snr();
  p.kappa = 0;
  p.m_pulses = 5;
  int correct = 0;
  const int trials = 6000;
  for (int i = 0; i < trials; ++i) {
    const TrialStreams streams(32, i, p.d);
    const int target = 1 + i % p.d;
    correct += run_trial_streaming(p, target, streams) == target;
  }
  // g = 0 ties every candidate, so index 1 is always chosen.
  CHECK(correct == trials / 3);
}
