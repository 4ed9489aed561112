#include <cmath>
#include <map>

#include "doctest.h"
#include "rsn/error.hpp"
#include "rsn/growth.hpp"
#include "rsn/oracle.hpp"

using namespace rsn;

TEST_SUITE("growth") {
  TEST_CASE("corner weights on the empty staircase") {
    CHECK(corner_weight(GrowthState(Shape::staircase(0, 3)), {-1, 1}) == doctest::Approx(0.5).epsilon(1e-14));
    const GrowthState e4(Shape::staircase(0, 4));
    CHECK(corner_weight(e4, {0, 1}) == doctest::Approx(3.0 / 8).epsilon(1e-14));
    CHECK(corner_weight(e4, {-2, 1}) == doctest::Approx(5.0 / 16).epsilon(1e-14));
    CHECK_THROWS_AS(corner_weight(e4, {0, 3}), PreconditionError);
  }

  TEST_CASE("corner distributions") {
    const auto d4 = corner_distribution(GrowthState(Shape::staircase(0, 4)));
    REQUIRE(d4.entries.size() == 3);
    double total = 0.0;
    for (std::size_t k = 0; k < 3; ++k) total += d4.probability(k);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    const auto single = corner_distribution(GrowthState::from_cells(Shape::staircase(0, 3), {{-1, 1}, {1, 1}}));
    REQUIRE(single.entries.size() == 1);
    CHECK(single.entries[0].cell == Cell{0, 2});
    CHECK(single.probability(0) == doctest::Approx(1.0));
    GrowthState full(Shape::staircase(0, 3));
    for (const Cell z : full.shape().cells()) full.add_cell(z);
    CHECK_THROWS_AS(corner_distribution(full), TerminalStateError);
  }

  TEST_CASE("weights match exact tableau count ratios on every state of T(0,5)") {
    const Shape t5 = Shape::staircase(0, 5);
    for (const auto& s : enumerate_states(t5)) {
      if (s.residual_size() == 0) continue;
      for (const Cell z : s.corners())
        CHECK(corner_weight(s, z) == doctest::Approx(exact_corner_weight(s, z).convert_to<double>()).epsilon(1e-12));
    }
  }

  TEST_CASE("incremental and naive engines pick the same cells") {
    const Shape shape = Shape::staircase(0, 4);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      Stream a(seed, 0);
      Stream b(seed, 0);
      GrowthState sa(shape);
      GrowthState sb(shape);
      while (sa.residual_size() > 0) CHECK(step_incremental(sa, a) == step_naive(sb, b));
    }
  }

  TEST_CASE("weight drift stays small over a full run") {
    GrowthState s(Shape::staircase(0, 60));
    Stream rng(3, 0);
    double worst = 0.0;
    while (s.residual_size() > 0) {
      worst = std::max(worst, s.max_weight_drift());
      step_incremental(s, rng);
    }
    CHECK(worst < 1e-9);
  }

  TEST_CASE("sample_tableau") {
    Stream rng(1, 0);
    const auto one = sample_tableau(Shape::staircase(1, 2), rng);
    CHECK(one.rank({1, 1}) == 1);
    int left_first = 0;
    const int runs = 10000;
    for (int r = 0; r < runs; ++r) {
      Stream s(11, static_cast<std::uint64_t>(r));
      left_first += sample_tableau(Shape::staircase(0, 3), s).rank({-1, 1}) == 1;
    }
    CHECK(std::abs(left_first - runs / 2) < 3 * std::sqrt(runs * 0.25));
  }

  TEST_CASE("hook walk matches the first-corner law") {
    const GrowthState e4(Shape::staircase(0, 4));
    std::map<Cell, int> hits;
    const int walks = 100000;
    Stream rng(5, 0);
    for (int k = 0; k < walks; ++k) ++hits[hook_walk_corner(e4, rng)];
    const std::map<Cell, double> want{{{-2, 1}, 5.0 / 16}, {{0, 1}, 3.0 / 8}, {{2, 1}, 5.0 / 16}};
    for (const auto& [z, p] : want) CHECK(std::abs(hits[z] - walks * p) < 3 * std::sqrt(walks * p * (1 - p)));
    const auto single = GrowthState::from_cells(Shape::staircase(0, 3), {{-1, 1}, {1, 1}});
    for (int k = 0; k < 20; ++k) CHECK(hook_walk_corner(single, rng) == Cell{0, 2});
  }

  TEST_CASE("poissonized run to absorption") {
    ProcessSpec spec;
    spec.shape = Shape::staircase(0, 3);
    spec.rate = 2.0;
    Stream rng(9, 0);
    const auto f = run_poissonized(spec, rng);
    CHECK(f.size() == 3);
    CHECK(f.absorbed);
    for (const Cell z : spec.shape.cells()) CHECK(std::isfinite(f.time_of(z)));
  }

  TEST_CASE("jump counts are Poisson(rt) far from absorption") {
    ProcessSpec spec;
    spec.shape = Shape::staircase(0, 100);
    spec.rate = 50.0;
    spec.horizon.time = 1.0;
    double sum = 0.0;
    double sq = 0.0;
    const int runs = 2000;
    for (int r = 0; r < runs; ++r) {
      Stream rng(17, static_cast<std::uint64_t>(r));
      const double k = static_cast<double>(run_poissonized(spec, rng).size());
      sum += k;
      sq += k * k;
    }
    const double mean = sum / runs;
    const double var = sq / runs - mean * mean;
    CHECK(std::abs(mean - 50.0) < 4 * std::sqrt(50.0 / runs));
    CHECK(var == doctest::Approx(50.0).epsilon(0.15));
  }

  TEST_CASE("rate r path equals rate 1 path with times divided by r") {
    ProcessSpec slow;
    slow.shape = Shape::staircase(0, 8);
    ProcessSpec fast = slow;
    fast.rate = 4.0;
    Stream a(21, 0);
    Stream b(21, 0);
    const auto fs = run_process(slow, a);
    const auto ff = run_process(fast, b);
    REQUIRE(fs.size() == ff.size());
    for (std::size_t k = 0; k < fs.size(); ++k) {
      CHECK(fs.entries()[k].cell == ff.entries()[k].cell);
      CHECK(ff.entries()[k].time == doctest::Approx(fs.entries()[k].time / 4.0).epsilon(1e-12));
    }
  }

  TEST_CASE("modified rate") {
    const GrowthState e(Shape::staircase(0, 6));
    for (const Cell z : e.shape().bottom_row())
      CHECK(modified_rate(e, z, 6.0) == doctest::Approx(6.0 * corner_weight(e, z)).epsilon(1e-12));

    // Monotone along a growth path.
    GrowthState s(Shape::staircase(0, 20));
    Stream rng(4, 0);
    std::vector<double> prev;
    for (const Cell z : s.shape().bottom_row()) prev.push_back(modified_rate(s, z, 20.0));
    for (int step = 0; step < 150; ++step) {
      step_incremental(s, rng);
      const auto bottom = s.shape().bottom_row();
      for (std::size_t k = 0; k < bottom.size(); ++k) {
        const double w = modified_rate(s, bottom[k], 20.0);
        CHECK(w >= prev[k] * (1 - 1e-12));
        prev[k] = w;
      }
    }
  }

  TEST_CASE("conditioned process avoids its cell and keeps total rate n") {
    const Shape shape = Shape::staircase(0, 10);
    const Cell avoided{0, 1};
    for (std::uint64_t r = 0; r < 50; ++r) {
      Stream rng(31, r);
      ProcessSpec spec;
      spec.shape = shape;
      spec.rate = 10.0;
      const auto f = run_conditioned(spec, avoided, rng);
      CHECK_FALSE(std::isfinite(f.time_of(avoided)));
      CHECK(f.frozen);
    }
  }

  TEST_CASE("plain and conditioned runs agree until the avoided cell appears") {
    const Shape shape = Shape::staircase(0, 10);
    const Cell avoided{2, 1};
    for (std::uint64_t r = 0; r < 50; ++r) {
      Stream rng(37, r);
      const auto run = run_conditioned_coupled(shape, 10.0, avoided, {}, rng);
      for (std::size_t k = 0; k < run.plain.size() && k < run.conditioned.size(); ++k) {
        if (run.plain.entries()[k].time >= run.split_time) break;
        CHECK(run.plain.entries()[k] == run.conditioned.entries()[k]);
      }
    }
  }

  TEST_CASE("inclusion function validation") {
    const Shape s = Shape::staircase(0, 3);
    CHECK_NOTHROW(InclusionFunction::from_entries(s, {{{-1, 1}, 0.1}, {{1, 1}, 0.2}}));
    CHECK_THROWS_AS(InclusionFunction::from_entries(s, {{{0, 2}, 0.1}}), ValidationError);
    CHECK_THROWS_AS(InclusionFunction::from_entries(s, {{{-1, 1}, 0.2}, {{1, 1}, 0.2}}), ValidationError);
    CHECK_THROWS_AS(InclusionFunction::from_entries(s, {{{-1, 1}, 0.1}, {{-1, 1}, 0.2}}), ValidationError);
    CHECK_THROWS_AS(InclusionFunction::from_entries(s, {{{-1, 1}, 0.2}, {{1, 1}, 0.3}, {{0, 2}, 0.1}}), ValidationError);
  }

  TEST_CASE("cylinder process fills the cylinder") {
    ProcessSpec spec;
    spec.shape = Shape::cylinder(6);
    spec.rate = 6.0;
    spec.variant = Variant::cylinder;
    Stream rng(2, 0);
    const auto f = run_process(spec, rng);
    CHECK(f.size() == 25);
  }
}
