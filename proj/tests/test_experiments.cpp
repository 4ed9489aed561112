#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "rsn/error.hpp"
#include "rsn/experiments.hpp"
#include "rsn/stats.hpp"

using namespace rsn;

namespace {

ExperimentConfig base(const std::string& id) {
  ExperimentConfig c;
  c.id = id;
  c.n = 40;
  c.replicas = 200;
  c.seed = 3;
  return c;
}

std::string csv(const StatsReport& r) {
  std::ostringstream os;
  write_csv(os, r);
  return os.str();
}

}  // namespace

TEST_SUITE("experiments") {
  TEST_CASE("config parsing") {
    const auto c = parse_config("# comment\nexperiment = swap-rate\nn = 120\nu = -0.25\nt_grid = 1, 2,4\nlags=2,20\nseed=9\n");
    CHECK(c.id == "swap-rate");
    CHECK(c.n == 120);
    CHECK(c.u == -0.25);
    CHECK(c.t_grid == std::vector<double>{1, 2, 4});
    CHECK(c.lags == std::vector<int>{2, 20});
    CHECK(c.seed == 9);
    const auto again = parse_config(c.echo());
    CHECK(again.echo() == c.echo());
    CHECK_THROWS_AS(parse_config("n = 12x\n"), DomainError);
    CHECK_THROWS_AS(parse_config("colour = blue\n"), DomainError);
    CHECK_THROWS_AS(parse_config("just words\n"), DomainError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.txt"), DomainError);
    auto bad = base("swap-rate");
    bad.u = 1.0;
    CHECK_THROWS_AS(check(bad), DomainError);
    bad = base("swap-rate");
    bad.replicas = 0;
    CHECK_THROWS_AS(check(bad), DomainError);
  }

  TEST_CASE("window index is mirror symmetric") {
    for (int n : {7, 8, 300, 1000})
      for (double u : {0.1, 0.25, 0.5, 0.9}) CHECK(window_index(n, u) + window_index(n, -u) == n);
    CHECK(window_index(300, 0.0) == 150);
    CHECK(bottom_cell(300, 150) == Cell{0, 1});
  }

  TEST_CASE("swap rate is zero at t=0") {
    auto c = base("swap-rate");
    c.t = 0.0;
    const auto r = estimate_swap_rate(c);
    CHECK(r.row("swap_rate").estimate == 0.0);
    CHECK(r.failures.empty());
  }

  TEST_CASE("swap rate responds to the scaled clock") {
    auto c = base("swap-rate");
    c.n = 120;
    c.replicas = 1500;
    const auto centre = estimate_swap_rate(c);
    c.u = 0.6;
    c.seed = 4;
    const auto off = estimate_swap_rate(c);
    const auto& a = centre.row("swap_rate");
    const auto& b = off.row("swap_rate");
    CHECK(std::abs(a.estimate - b.estimate) < 3.0 * std::hypot(a.std_error, b.std_error));
  }

  TEST_CASE("results do not depend on the worker count") {
    auto c = base("swap-height");
    c.replicas = 60;
    c.threads = 1;
    const auto one = csv(swap_height_identity(c));
    c.threads = 4;
    CHECK(csv(swap_height_identity(c)) == one);
  }

  TEST_CASE("swap-height identity holds pathwise and is zero at t=0") {
    auto c = base("swap-height");
    const auto r = swap_height_identity(c);
    CHECK(r.row("identity_failures").estimate == 0.0);
    c.t = 0.0;
    const auto z = swap_height_identity(c);
    CHECK(z.row("height").estimate == 0.0);
    CHECK(z.row("swaps").estimate == 0.0);
  }

  TEST_CASE("semicircle tables") {
    auto c = base("semicircle");
    c.n = 4;
    c.exact = true;
    c.u_grid = {-0.5, 0.0, 0.5};
    const auto r = semicircle_curve(c);
    CHECK(r.row("n_prob_u0").estimate == doctest::Approx(4.0 * 3.0 / 8));
    CHECK(r.row("n_prob_u-0.5").estimate == doctest::Approx(4.0 * 5.0 / 16));
    c.n = 1000;
    c.exact = false;
    const auto f = semicircle_curve(c);
    CHECK(std::abs(f.row("rel_error_u0").estimate) < 0.02);
    CHECK(std::abs(f.row("n_prob_u0.5").estimate - f.row("n_prob_u-0.5").estimate) < 1e-12);
  }

  TEST_CASE("scaling collapse at u=0 is a null comparison") {
    auto c = base("scaling-collapse");
    c.u = 0.0;
    c.replicas = 400;
    const auto r = scaling_collapse(c);
    CHECK(r.row("ks").estimate < r.row("ks_critical").estimate);
  }

  TEST_CASE("gap tail at t=0 is one") {
    auto c = base("gap-tail");
    c.t_grid = {0.0, 0.5};
    const auto r = gap_tail(c);
    CHECK(r.row("survival_t0").estimate == 1.0);
    CHECK(r.row("survival_t0.5").estimate <= 1.0);
    CHECK(r.row("survival_is_t0").estimate == 1.0);
  }

  TEST_CASE("reweighted tail matches direct counting") {
    auto c = base("gap-tail");
    c.replicas = 4000;
    c.radius = 0;
    c.t_grid = {0.5, 1.0, 3.0};
    const auto r = gap_tail(c);
    for (const char* t : {"0.5", "1"}) {
      const auto& direct = r.row(std::string("survival_t") + t);
      const auto& weighted = r.row(std::string("survival_is_t") + t);
      CHECK(std::abs(direct.estimate - weighted.estimate) < 4.0 * std::hypot(direct.std_error, weighted.std_error));
    }
    CHECK(r.row("survival_is_t3").estimate > 0.0);
    CHECK(r.row("survival_is_t3").estimate < r.row("survival_is_t1").estimate);
  }

  TEST_CASE("bottom-row gaps near the centre at t=1") {
    auto c = base("gap-tail");
    c.n = 400;
    c.replicas = 300;
    c.radius = 30;
    c.t = 1.0;
    c.t_grid = {0.0};
    const auto r = gap_tail(c);
    CHECK(r.row("gap_fraction").estimate >= 0.99);
    CHECK(r.row("gap_count").estimate >= 1.0);
  }

  TEST_CASE("rate audits on small cylinders") {
    auto c = base("rate-audits");
    c.n = 12;
    c.replicas = 100;
    const auto r = rate_audits(c);
    CHECK(r.row("bound48_violations").estimate == 0.0);
    CHECK(r.row("bound48_empty_ratio").estimate <= 1.0);
    CHECK(r.row("maxheight_violations").estimate == 0.0);
    CHECK(r.failures.empty());
  }

  TEST_CASE("translation and mixing rows") {
    auto c = base("translation-mixing");
    c.n = 80;
    c.lags = {2, 10};
    const auto r = translation_and_mixing(c);
    CHECK(r.has_row("corr_K2"));
    CHECK(r.has_row("corr_K10"));
    CHECK(r.has_row("translation_ks"));
    c.lags = {60};
    CHECK_THROWS_AS(translation_and_mixing(c), DomainError);
  }

  TEST_CASE("dispatch") {
    auto c = base("no-such-thing");
    CHECK_THROWS_AS(run_experiment(c), DomainError);
    c.id = "semicircle";
    CHECK(run_experiment(c).has_row("curve_u0"));
  }

  TEST_CASE("statistics helpers") {
    Accumulator a;
    for (double v : {1.0, 2.0, 3.0, 4.0}) a.add(v);
    CHECK(a.mean() == doctest::Approx(2.5));
    CHECK(a.variance() == doctest::Approx(5.0 / 3));
    Accumulator b;
    b.add(10.0);
    a.merge(b);
    CHECK(a.count == 5);
    CHECK(ks_distance({1, 2, 3}, {1, 2, 3}) == 0.0);
    CHECK(ks_distance({1, 2}, {3, 4}) == 1.0);
    CHECK(ks_critical(0.999, 10000, 10000) == doctest::Approx(0.0276).epsilon(0.01));
    CHECK(correlation({1, 2, 3}, {2, 4, 6}) == doctest::Approx(1.0));
  }
}
