#include <doctest.h>

#include <random>

#include "evps/temporal_mask.hpp"

using namespace evps;

TEST_CASE("arcs round trip membership") {
  TemporalMask mask(1.0);
  mask.add_arc(0.2, 0.3);  // [0.2, 0.5)
  mask.add_arc(0.7, 0.1);  // [0.7, 0.8)

  CHECK(mask.contains(0.2));
  CHECK(mask.contains(0.35));
  CHECK_FALSE(mask.contains(0.5));  // half-open end
  CHECK_FALSE(mask.contains(0.6));
  CHECK(mask.contains(0.7));
  CHECK_FALSE(mask.contains(0.8));
  CHECK(mask.selected_length() == doctest::Approx(0.4));
}

TEST_CASE("wrap-around arcs split at the boundary") {
  TemporalMask mask(1.0);
  mask.add_arc(0.9, 0.3);  // [0.9, 1) + [0, 0.2)
  CHECK(mask.contains(0.95));
  CHECK(mask.contains(0.0));
  CHECK(mask.contains(0.19));
  CHECK_FALSE(mask.contains(0.2));
  CHECK_FALSE(mask.contains(0.5));
  CHECK(mask.selected_length() == doctest::Approx(0.3));
  // periodic query
  CHECK(mask.contains(1.95));
  CHECK(mask.contains(-0.05));
}

TEST_CASE("overlapping arcs merge") {
  TemporalMask mask(2.0);
  mask.add_arc(0.5, 0.5);
  mask.add_arc(0.8, 0.6);
  CHECK(mask.selected_length() == doctest::Approx(0.9));
  CHECK(mask.segments().size() == 1);
}

TEST_CASE("full-cycle arc selects everything") {
  TemporalMask mask(0.5);
  mask.add_arc(0.3, 0.5);
  CHECK(mask.full());
  CHECK(mask.contains(0.0));
  CHECK(mask.contains(0.49));
  CHECK(mask.selected_length() == doctest::Approx(0.5));
}

TEST_CASE("selected and complement lengths partition the period") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    TemporalMask mask(1.0);
    double expected = 0.0;
    // Disjoint arcs by construction
    double cursor = dist(rng) * 0.1;
    while (cursor < 0.95) {
      const double len = 0.02 + 0.05 * dist(rng);
      mask.add_arc(cursor, len);
      expected += len;
      cursor += len + 0.02 + 0.1 * dist(rng);
    }
    CHECK(mask.selected_length() == doctest::Approx(expected).epsilon(1e-9));
    // Sampled membership agrees with the arc arithmetic.
    int hits = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i)
      if (mask.contains(static_cast<double>(i) / n)) ++hits;
    CHECK(std::fabs(static_cast<double>(hits) / n - expected) < 5e-3);
  }
}

TEST_CASE("invalid period is rejected") {
  CHECK_THROWS_AS(TemporalMask(0.0), ConfigError);
  CHECK_THROWS_AS(TemporalMask(-1.0), ConfigError);
}
