#include <doctest.h>

#include "mafl/rng.hpp"
#include "mafl/staleness.hpp"

using namespace mafl;

namespace {
SimConfig defaults() { return parse_config(""); }
}

TEST_CASE("upload weight is gamma^(delay-1)") {
  SimConfig cfg = defaults();  // gamma = 0.9
  CHECK(upload_weight(cfg, 1.0) == 1.0);
  CHECK(upload_weight(cfg, 2.0) == doctest::Approx(0.9));
  // frozen: 0.9^(1.6723888647e-3 - 1), independent calculator
  CHECK(upload_weight(cfg, 1.6723888647191945e-3) ==
        doctest::Approx(1.1109153464108915).epsilon(1e-9));
}

TEST_CASE("training delay is D*Cy/delta") {
  SimConfig cfg = defaults();
  VehicleProfile v1{1, 6000, 9e8, 0.0};
  VehicleProfile v10{10, 39750, 2.25e9, 0.0};
  CHECK(train_delay(v1, cfg) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(train_delay(v10, cfg) == doctest::Approx(1.7666666666666666).epsilon(1e-12));
  VehicleProfile unit{1, 1000, 1000.0 * cfg.cycles_per_sample, 0.0};
  CHECK(train_delay(unit, cfg) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("training weight is zeta^(delay-1)") {
  SimConfig cfg = defaults();  // zeta = 0.9
  CHECK(train_weight(cfg, 1.0) == 1.0);
  // frozen: 0.9^0.76666..., 0.9^(-1/3); independent calculator
  CHECK(train_weight(cfg, 1.7666666666666666) ==
        doctest::Approx(0.9223999213097097).epsilon(1e-9));
  CHECK(train_weight(cfg, 0.6666666666666666) ==
        doctest::Approx(1.0357441686512863).epsilon(1e-9));
}

TEST_CASE("both weights strictly decrease with delay") {
  SimConfig cfg = defaults();
  Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    double a = rng.uniform(0.0, 10.0);
    double b = a + rng.uniform(1e-6, 5.0);
    CHECK(upload_weight(cfg, a) > upload_weight(cfg, b));
    CHECK(train_weight(cfg, a) > train_weight(cfg, b));
  }
}

TEST_CASE("weighting the local model scales every entry") {
  SimConfig cfg = defaults();
  ModelParams m{{2.0}, "scalar"};
  DelayWeights unit = make_weights(cfg, 1.0, 1.0);
  CHECK(weight_local_model(m, unit).values[0] == 2.0);

  DelayWeights w;
  w.upload_weight = 1.1109153464108915;
  w.train_weight = 0.9223999213097097;
  // frozen: 2 * 1.1109153 * 0.9223999
  CHECK(weight_local_model(m, w).values[0] ==
        doctest::Approx(2.0494164562223105).epsilon(1e-9));

  ModelParams zeros{{0.0, 0.0, 0.0}, "v3"};
  auto z = weight_local_model(zeros, w);
  for (double v : z.values) CHECK(v == 0.0);
}

TEST_CASE("weighting is linear in the model") {
  SimConfig cfg = defaults();
  Rng rng(8);
  DelayWeights w = make_weights(cfg, 0.37, 2.9);
  for (int rep = 0; rep < 50; ++rep) {
    ModelParams a{{}, "v8"}, b{{}, "v8"};
    for (int i = 0; i < 8; ++i) {
      a.values.push_back(rng.uniform(-3, 3));
      b.values.push_back(rng.uniform(-3, 3));
    }
    auto lhs = weight_local_model(add(a, b), w);
    auto rhs = add(weight_local_model(a, w), weight_local_model(b, w));
    for (int i = 0; i < 8; ++i)
      CHECK(lhs.values[i] ==
            doctest::Approx(rhs.values[i]).epsilon(1e-12));
  }
}

TEST_CASE("plain AFL forces both weights to one") {
  SimConfig cfg = defaults();
  cfg.scheme = Scheme::afl;
  DelayWeights w = make_weights(cfg, 4.2, 9.9);
  CHECK(w.upload_weight == 1.0);
  CHECK(w.train_weight == 1.0);
  ModelParams m{{1.5, -2.5}, "v2"};
  auto out = weight_local_model(m, w);
  CHECK(out.values[0] == 1.5);
  CHECK(out.values[1] == -2.5);
}
