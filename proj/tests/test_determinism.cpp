#include "doctest.h"

#include "aqpe/baseline.hpp"
#include "aqpe/bayes.hpp"
#include "aqpe/config.hpp"
#include "aqpe/csv.hpp"
#include "aqpe/experiment.hpp"
#include "aqpe/policy_eval.hpp"
#include "aqpe/presets.hpp"
#include "aqpe/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <string>
#include <vector>

using namespace aqpe;

namespace {

void set_threads(int n) {
#ifdef _OPENMP
  omp_set_num_threads(n);
#else
  (void)n;
#endif
}

}  // namespace

TEST_CASE("policy scoring is identical across thread counts") {
  const std::vector<double> policy = {1.1, 0.4, 2.0, 0.7, 2.9};
  EvalConfig cfg = make_eval_config(5);
  cfg.k_instances = 300;
  cfg.m_repeats = 4;
  cfg.channel = NoiseChannel::gaussian(0.4);
  const EvalResult serial = evaluate_policy_serial(policy, cfg, RngStream::from_seed(3));
  for (int threads : {1, 2, 3}) {
    set_threads(threads);
    EvalResult r = evaluate_policy(policy, cfg, RngStream::from_seed(3));
    CHECK(r.holevo == serial.holevo);
    CHECK(r.sharpness == serial.sharpness);
    CHECK(r.per_repeat == serial.per_repeat);
  }
#ifdef _OPENMP
  omp_set_num_threads(omp_get_num_procs());
#endif
}

TEST_CASE("baseline scoring is identical across thread counts") {
  BaselineConfig cfg = make_baseline_config(12);
  cfg.k_instances = 800;
  cfg.channel = NoiseChannel::rtn(0.2, 0.4);
  const EvalResult serial = baseline_variance_serial(cfg, RngStream::from_seed(11));
  for (int threads : {1, 2, 3}) {
    set_threads(threads);
    EvalResult r = baseline_variance(cfg, RngStream::from_seed(11));
    CHECK(r.holevo == serial.holevo);
    CHECK(r.sharpness == serial.sharpness);
  }
#ifdef _OPENMP
  omp_set_num_threads(omp_get_num_procs());
#endif
}

TEST_CASE("exact enumeration is identical across thread counts") {
  const std::vector<double> policy = {1.1, 0.4, 2.0};
  set_threads(1);
  const double one = exact_policy_variance(policy, DecoherenceModel{0.9});
  set_threads(3);
  const double three = exact_policy_variance(policy, DecoherenceModel{0.9});
  CHECK(one == three);
#ifdef _OPENMP
  omp_set_num_threads(omp_get_num_procs());
#endif
}

TEST_CASE("a full experiment emits byte-identical output across thread counts") {
  const char* preset = find_preset("accept-determinism");
  REQUIRE(preset != nullptr);
  ExperimentConfig cfg = parse_experiment_config(preset);
  set_threads(1);
  const std::string csv_one = render_results_csv(run_experiment(cfg));
  set_threads(3);
  const std::string csv_three = render_results_csv(run_experiment(cfg));
  CHECK(csv_one == csv_three);
  // and re-running in the same process changes nothing
  const std::string csv_again = render_results_csv(run_experiment(cfg));
  CHECK(csv_one == csv_again);
  CHECK(csv_one.rfind("scenario,optimizer,n,seed,", 0) == 0);
#ifdef _OPENMP
  omp_set_num_threads(omp_get_num_procs());
#endif
}
