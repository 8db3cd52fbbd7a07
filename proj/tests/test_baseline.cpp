#include "doctest.h"

#include "aqpe/baseline.hpp"
#include "aqpe/phase.hpp"
#include "aqpe/rng.hpp"
#include "aqpe/sensor.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

using namespace aqpe;

TEST_CASE("make_baseline_config scales instances with the square of the rounds") {
  BaselineConfig cfg = make_baseline_config(15);
  CHECK(cfg.n_qubits == 15);
  CHECK(cfg.k_instances == 2250);
}

TEST_CASE("count_outcomes degenerate phases") {
  BaselineConfig cfg;
  cfg.n_qubits = 40;
  RngStream rng = RngStream::from_seed(1);
  SUBCASE("phase equal to the control always reads zero") {
    BinCount c = count_outcomes(cfg.control_theta, cfg, rng);
    CHECK(c.n_zero == 40);
    CHECK(c.n_total == 40);
  }
  SUBCASE("antipodal phase never reads zero") {
    BinCount c = count_outcomes(canonical_phase(cfg.control_theta + kPi), cfg, rng);
    CHECK(c.n_zero == 0);
  }
  SUBCASE("zero-measurement request is rejected") {
    BaselineConfig bad = cfg;
    bad.n_qubits = 0;
    CHECK_THROWS_AS((void)count_outcomes(1.0, bad, rng), std::domain_error);
  }
}

TEST_CASE("count_outcomes matches binomial moments") {
  BaselineConfig cfg;
  cfg.n_qubits = 50;
  const double delta = kPi / 2.0;  // p = 1/2
  RngStream root = RngStream::from_seed(314);
  const int reps = 25000;
  double sum = 0.0, sq = 0.0;
  for (int r = 0; r < reps; ++r) {
    RngStream s = root.substream(static_cast<std::uint64_t>(r));
    BinCount c = count_outcomes(delta, cfg, s);
    sum += static_cast<double>(c.n_zero);
    sq += static_cast<double>(c.n_zero) * static_cast<double>(c.n_zero);
  }
  const double mean = sum / reps;
  const double var = sq / reps - mean * mean;
  // Binomial(50, 1/2): mean 25, variance 12.5
  CHECK(std::fabs(mean - 25.0) < 3.0 * std::sqrt(12.5 / reps));
  CHECK(var == doctest::Approx(12.5).epsilon(0.05));
}

TEST_CASE("estimate_phase pinned values") {
  SUBCASE("all zeros lands on the control") {
    CHECK(estimate_phase({50, 50}, 0.0, QubitPrep::Plus) == 0.0);
  }
  SUBCASE("half and half is a quarter turn") {
    CHECK(estimate_phase({25, 50}, 0.0, QubitPrep::Plus) ==
          doctest::Approx(kPi / 2.0).epsilon(1e-15));
  }
  SUBCASE("no zeros is the antipode") {
    CHECK(estimate_phase({0, 50}, 0.0, QubitPrep::Plus) == doctest::Approx(kPi).epsilon(1e-15));
  }
  SUBCASE("opposite preparation mirrors the fraction") {
    CHECK(estimate_phase({50, 50}, 0.0, QubitPrep::Minus) == doctest::Approx(kPi).epsilon(1e-15));
    CHECK(estimate_phase({0, 50}, 0.0, QubitPrep::Minus) == 0.0);
    CHECK(estimate_phase({25, 50}, 0.0, QubitPrep::Minus) ==
          doctest::Approx(kPi / 2.0).epsilon(1e-15));
  }
  SUBCASE("control offset shifts the estimate") {
    CHECK(estimate_phase({25, 50}, 1.0, QubitPrep::Plus) ==
          doctest::Approx(1.0 + kPi / 2.0).epsilon(1e-15));
  }
  SUBCASE("result is canonical") {
    const double e = estimate_phase({0, 50}, kTwoPi - 0.5, QubitPrep::Plus);
    CHECK(e >= 0.0);
    CHECK(e < kTwoPi);
    CHECK(e == doctest::Approx(kPi - 0.5).epsilon(1e-12));
  }
  SUBCASE("empty count is rejected") {
    CHECK_THROWS_AS((void)estimate_phase({0, 0}, 0.0, QubitPrep::Plus), std::domain_error);
  }
}

TEST_CASE("estimator inverts the expected count up to integer rounding") {
  const std::size_t n = 1000000;
  for (double delta = 0.1; delta < kPi - 0.1; delta += 0.13) {
    const double p = 0.5 * (1.0 + std::cos(delta));
    BinCount c;
    c.n_total = n;
    c.n_zero = static_cast<std::size_t>(std::llround(p * static_cast<double>(n)));
    const double est = estimate_phase(c, 0.0, QubitPrep::Plus);
    CHECK(est == doctest::Approx(delta).epsilon(1e-4));
  }
}

TEST_CASE("noise-free variance tracks the shot-noise line") {
  // With K large, V approximates 1/N; tolerance covers the Monte-Carlo spread
  // and the estimator's own small-N bias.
  for (std::size_t n : {50, 100}) {
    BaselineConfig cfg = make_baseline_config(n);
    cfg.k_instances = 40000;
    EvalResult res = baseline_variance(cfg, RngStream::from_seed(123));
    const double target = 1.0 / static_cast<double>(n);
    CHECK(res.holevo == doctest::Approx(target).epsilon(0.15));
  }
}

TEST_CASE("reduced visibility never beats the adjusted shot-noise floor") {
  BaselineConfig cfg = make_baseline_config(50);
  cfg.k_instances = 20000;
  cfg.deco.nu = 0.6;
  const double floor = 1.0 / (0.6 * 0.6 * 50.0);
  std::vector<double> vs;
  RngStream root = RngStream::from_seed(88);
  for (int r = 0; r < 10; ++r)
    vs.push_back(baseline_variance(cfg, root.substream(static_cast<std::uint64_t>(r))).holevo);
  double mean = 0.0;
  for (double v : vs) mean += v;
  mean /= static_cast<double>(vs.size());
  double sd = 0.0;
  for (double v : vs) sd += (v - mean) * (v - mean);
  sd = std::sqrt(sd / static_cast<double>(vs.size() - 1)) /
       std::sqrt(static_cast<double>(vs.size()));
  CHECK(mean >= floor - 3.0 * sd);
}

TEST_CASE("actuation timing changes the noisy variance as expected") {
  // Control corruption of width 0.8 at N = 15: redrawing the offset per
  // measurement averages much of it away; setting it once per instance leaves
  // the full bias in place. Reference values from an independent
  // binomial-enumeration quadrature: 0.2069 per draw, 0.7869 per instance.
  BaselineConfig cfg = make_baseline_config(15);
  cfg.k_instances = 60000;
  cfg.channel = NoiseChannel::gaussian(0.8);
  cfg.actuation = ActuationNoise::PerDraw;
  EvalResult per_draw = baseline_variance(cfg, RngStream::from_seed(5));
  CHECK(per_draw.holevo > 0.18);
  CHECK(per_draw.holevo < 0.24);
  cfg.actuation = ActuationNoise::PerInstance;
  EvalResult per_instance = baseline_variance(cfg, RngStream::from_seed(5));
  CHECK(per_instance.holevo > 0.70);
  CHECK(per_instance.holevo < 0.88);
}

TEST_CASE("full-circle sampling degrades the folded estimator") {
  // The arccos estimator cannot resolve the sign of the error, so scoring
  // over the whole circle collapses the sharpness.
  BaselineConfig cfg = make_baseline_config(20);
  cfg.k_instances = 20000;
  cfg.sampling = PhaseSampling::FoldedHalf;
  EvalResult folded = baseline_variance(cfg, RngStream::from_seed(9));
  cfg.sampling = PhaseSampling::FullCircle;
  EvalResult full = baseline_variance(cfg, RngStream::from_seed(9));
  CHECK(folded.holevo < 0.1);
  CHECK(full.holevo > 1.0);
}

TEST_CASE("parallel and serial baseline agree bit for bit") {
  std::vector<BaselineConfig> cfgs;
  {
    BaselineConfig c = make_baseline_config(10);
    c.k_instances = 500;
    cfgs.push_back(c);
    c.channel = NoiseChannel::gaussian(0.4);
    cfgs.push_back(c);
    c.channel = NoiseChannel::rtn(0.2, 0.4);
    c.actuation = ActuationNoise::PerInstance;
    cfgs.push_back(c);
    c.deco.nu = 0.8;
    c.sampling = PhaseSampling::FullCircle;
    c.prep = QubitPrep::Minus;
    c.control_theta = 1.2;
    cfgs.push_back(c);
  }
  for (const BaselineConfig& cfg : cfgs) {
    EvalResult p = baseline_variance(cfg, RngStream::from_seed(33));
    EvalResult s = baseline_variance_serial(cfg, RngStream::from_seed(33));
    CHECK(p.holevo == s.holevo);
    CHECK(p.sharpness == s.sharpness);
  }
}

TEST_CASE("baseline scoring is pure in its stream argument") {
  BaselineConfig cfg = make_baseline_config(5);
  cfg.k_instances = 100;
  RngStream probe = RngStream::from_seed(2);
  (void)baseline_variance(cfg, probe);
  CHECK(probe.counter == 0);
  EvalResult a = baseline_variance(cfg, RngStream::from_seed(2));
  EvalResult b = baseline_variance(cfg, RngStream::from_seed(2));
  CHECK(a.holevo == b.holevo);
}
