#include "doctest.h"
#include "rsn/eg.hpp"
#include "rsn/error.hpp"
#include "rsn/swapproc.hpp"

using namespace rsn;

TEST_SUITE("swapproc") {
  TEST_CASE("apply_word") {
    const auto two = apply_word({1}, 2);
    REQUIRE(two.size() == 2);
    CHECK(two[0] == Permutation{0, 1, 2});
    CHECK(two[1] == Permutation{0, 2, 1});
    CHECK(apply_word({1, 2, 1}, 3).back() == Permutation{0, 3, 2, 1});
    CHECK(apply_word({}, 4).size() == 1);
    CHECK_THROWS_AS(apply_word({3}, 3), ValidationError);
  }

  TEST_CASE("trajectories") {
    CHECK(trajectory({1, 2, 1}, 3, 2) == std::vector<int>{2, 1, 1, 2});
    CHECK(trajectory({1, 2, 1}, 3, 1).back() == 3);
    int displacement = 0;
    for (int k = 1; k <= 3; ++k) displacement += std::abs(trajectory({1, 2, 1}, 3, k).back() - k);
    CHECK(displacement == 4);
  }

  TEST_CASE("extension rule") {
    const auto ext = extend_word({1, 2, 1}, 3, 6);
    CHECK(ext == std::vector<int>{1, 2, 1, 2, 1, 2});
    // Any N consecutive steps form a sorting network.
    const std::vector<int> base{1, 2, 3, 1, 2, 1};
    const auto longer = extend_word(base, 4, 20);
    for (std::size_t s = 0; s + 6 <= longer.size(); ++s) {
      const std::vector<int> slice(longer.begin() + static_cast<long>(s), longer.begin() + static_cast<long>(s) + 6);
      CHECK(apply_word(slice, 4).back() == Permutation{0, 4, 3, 2, 1});
    }
  }

  TEST_CASE("window process sections") {
    // T(0,3) filling order (-1,1), (1,1), (0,2): word -1, 1, -1 = indices 1, 2, 1.
    const std::vector<SwapEvent> events{{-1, 0.2}, {1, 0.5}, {-1, 0.9}};
    const WindowSpec spec{3, 1, 0.0, 0, Clock::poisson};
    const auto trace = window_process(events, 3, 0, spec);
    CHECK(trace.section(0.0) == std::vector<int>{0, 1});
    CHECK(trace.section(0.3) == std::vector<int>{1, 0});
    CHECK(trace.section(100.0) == trace.section(0.95));
    CHECK(check_swap_axioms(trace).empty());
    CHECK_THROWS_AS(window_process(events, 3, 0, WindowSpec{3, 1, 0.0, 1, Clock::poisson}), DomainError);
  }

  TEST_CASE("counts at time zero") {
    const std::vector<SwapEvent> events{{0, 0.0}, {0, 0.5}};
    CHECK(swap_count(events, 0, 0.0) == 0);
    const std::vector<TimedCell> cells{{{0, 1}, 0.0}};
    CHECK(height_count(cells, 0, 0.0) == 0);
    CHECK(height_count(cells, 0, 0.1) == 1);
    CHECK(height_count(cells, -1, 0.1) == 1);
    CHECK(height_count(cells, 1, 0.1) == 0);
  }

  TEST_CASE("stationary continuation") {
    SortingNetwork net{3, 0, {-1, 1, -1}, {0.1, 0.2, 0.3}};
    Stream rng(1, 0);
    const auto trace = stationarize(net, 5.0, rng);
    REQUIRE(trace.events().size() > 4);
    CHECK(trace.events()[3].position == 2);
    CHECK(trace.events()[4].position == 1);
    CHECK(check_swap_axioms(trace).empty());
  }

  TEST_CASE("axiom checker flags bad traces") {
    CHECK_FALSE(check_swap_axioms(SwapTrace(0, 2, {{0, 0.5}, {1, 0.5}})).empty());
    CHECK_FALSE(check_swap_axioms(SwapTrace(0, 2, {{3, 0.5}})).empty());
  }

  TEST_CASE("wiring diagram") {
    const auto svg = wiring_svg(SwapTrace(1, 2, {{1, 0.1}, {2, 0.2}, {1, 0.3}}));
    CHECK(svg.find("<svg") == 0);
    std::size_t lines = 0;
    for (std::size_t p = svg.find("<polyline"); p != std::string::npos; p = svg.find("<polyline", p + 1)) ++lines;
    CHECK(lines == 3);
  }
}
