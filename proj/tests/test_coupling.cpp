#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "rsn/coupling.hpp"
#include "rsn/error.hpp"
#include "rsn/stats.hpp"

using namespace rsn;

TEST_SUITE("coupling") {
  TEST_CASE("threshold values") {
    CHECK(theta_threshold(10, 1000, 0, 0.5) == doctest::Approx(2.2246).epsilon(1e-4));
    CHECK(theta_threshold(10, 100, 0, 0.5) == doctest::Approx(2.25668).epsilon(1e-5));
    CHECK_THROWS_AS(theta_threshold(10, 20, 8, 0.5), InfeasibleError);
    CHECK_THROWS_AS(theta_threshold(10, 100, 0, 1.5), DomainError);
  }

  TEST_CASE("dominating coupling keeps the lower process inside") {
    const double theta = theta_threshold(10, 100, 0, 0.5);
    StoppingRule stop;
    stop.lower_additions = 22;
    for (std::uint64_t r = 0; r < 50; ++r) {
      Stream rng(1, r);
      const auto t = couple_dominating({Shape::staircase(0, 10), 10.0}, {Shape::staircase(0, 100), theta * 100.0}, stop, rng);
      CHECK(t.contained);
      CHECK(t.violation_count == 0);
      CHECK(t.lower_added[0] == 22);
    }
  }

  TEST_CASE("identical sides move together") {
    StoppingRule stop;
    stop.lower_additions = 15;
    Stream rng(2, 0);
    const auto t = couple_dominating({Shape::staircase(0, 6), 6.0}, {Shape::staircase(0, 6), 6.0}, stop, rng);
    for (const auto& e : t.events) CHECK(e.which == Which::both);
    CHECK(t.upper_added == 15);
  }

  TEST_CASE("nesting is required") {
    Stream rng(3, 0);
    CHECK_THROWS_AS(couple_dominating({Shape::staircase(0, 10), 10.0}, {Shape::staircase(0, 5), 5.0}, {}, rng), ShapeError);
    CHECK_THROWS_AS(couple_pair_vs_one({Shape::staircase(0, 8), 8.0}, {Shape::staircase(2, 8), 8.0},
                                       {Shape::staircase(0, 80), 80.0}, {}, rng),
                    ShapeError);
  }

  TEST_CASE("pair coupling keeps both components inside") {
    const double theta = theta_threshold(8, 80, 20, 0.5);
    StoppingRule stop;
    stop.lower_additions = 14;
    for (std::uint64_t r = 0; r < 100; ++r) {
      Stream rng(4, r);
      const auto t = couple_pair_vs_one({Shape::staircase(0, 8), 8.0}, {Shape::staircase(-40, 8), 8.0},
                                        {Shape::staircase(-20, 80), theta * 80.0}, stop, rng);
      CHECK(t.contained);
      CHECK(t.violation_count == 0);
      CHECK(std::max(t.lower_added[0], t.lower_added[1]) == 14);
    }
  }

  TEST_CASE("lower components grow independently") {
    const double theta = theta_threshold(8, 80, 20, 0.5);
    StoppingRule stop;
    stop.time = 0.5;
    std::vector<double> left;
    std::vector<double> right;
    const int runs = 4000;
    for (int r = 0; r < runs; ++r) {
      Stream rng(4, 1000 + static_cast<std::uint64_t>(r));
      const auto t = couple_pair_vs_one({Shape::staircase(0, 8), 8.0}, {Shape::staircase(-40, 8), 8.0},
                                        {Shape::staircase(-20, 80), theta * 80.0}, stop, rng);
      left.push_back(static_cast<double>(t.lower_added[0]));
      right.push_back(static_cast<double>(t.lower_added[1]));
    }
    CHECK(std::abs(correlation(left, right)) < 4.0 / std::sqrt(runs));
  }

  TEST_CASE("degenerate pair with a single-cell component") {
    StoppingRule stop;
    stop.lower_additions = 1;
    Stream rng(5, 0);
    const auto t = couple_pair_vs_one({Shape::staircase(0, 2), 2.0}, {Shape::staircase(-40, 8), 8.0},
                                      {Shape::staircase(-20, 80), 200.0}, stop, rng);
    CHECK(t.contained);
  }

  TEST_CASE("cylinder coupling") {
    for (std::uint64_t r = 0; r < 20; ++r) {
      Stream rng(6, r);
      const auto t = couple_cylinder(12, rng);
      CHECK(t.contained);
      CHECK(t.lower_added[0] == 36);
      CHECK(t.max_size_ratio <= 8.0);
    }
  }

  TEST_CASE("transcript output") {
    StoppingRule stop;
    stop.lower_additions = 3;
    Stream rng(7, 0);
    const auto t = couple_dominating({Shape::staircase(0, 4), 4.0}, {Shape::staircase(0, 10), 30.0}, stop, rng);
    std::ostringstream os;
    write_transcript(os, t);
    const std::string s = os.str();
    CHECK(s.rfind("time\tx\ty\twhich\tcontained\n", 0) == 0);
    CHECK(static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')) == t.events.size() + 1);
  }
}
