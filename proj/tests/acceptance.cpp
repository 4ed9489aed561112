// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <thread>

#include "rsn/coupling.hpp"
#include "rsn/eg.hpp"
#include "rsn/experiments.hpp"
#include "rsn/growth.hpp"
#include "rsn/oracle.hpp"
#include "rsn/parallel.hpp"

using namespace rsn;

namespace {

constexpr std::uint64_t kSeed = 20240601;

int worker_count() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

double elapsed(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

Outcome counting() {
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t want[] = {2, 16, 768, 292864};
  bool ok = true;
  std::ostringstream d;
  for (int n = 3; n <= 6; ++n) {
    const std::uint64_t counted = count_fillings(n);
    const BigInt exact = exact_tableau_count(Shape::staircase(0, n));
    const long double logged = log_tableau_count(Shape::staircase(0, n));
    const auto rounded = static_cast<std::uint64_t>(std::llround(std::exp(logged)));
    ok = ok && counted == want[n - 3] && exact == BigInt(counted) && rounded == counted &&
         std::abs(std::exp(logged) / static_cast<long double>(counted) - 1.0L) < 1e-12L;
    d << "d(" << n << ")=" << counted << ' ';
  }
  const double secs = elapsed(start);
  d << "in " << secs << " s";
  return {ok && secs < 60.0, d.str()};
}

Outcome bijectivity() {
  const auto start = std::chrono::steady_clock::now();
  std::set<std::vector<int>> words;
  bool valid = true;
  std::size_t count = 0;
  for (const auto& f : enumerate_fillings(5)) {
    const auto net = eg_map(f);
    valid = valid && validate_network(net);
    words.insert(net.word);
    ++count;
  }
  const double secs = elapsed(start);
  std::ostringstream d;
  d << count << " fillings, " << words.size() << " distinct networks, all valid=" << valid << ", " << secs << " s";
  return {count == 768 && words.size() == 768 && valid && secs < 10.0, d.str()};
}

Outcome sampler_uniformity() {
  std::map<std::vector<int>, std::size_t> slot;
  for (const auto& f : enumerate_fillings(4)) slot.emplace(eg_map(f).word, slot.size());
  const std::int64_t samples = 100000;
  const Shape shape = Shape::staircase(0, 4);
  const auto picks = map_replicas(samples, worker_count(), [&](std::int64_t r) {
    Stream rng(kSeed + 3, static_cast<std::uint64_t>(r));
    return slot.at(eg_map(sample_tableau(shape, rng)).word);
  });
  std::vector<std::int64_t> observed(slot.size(), 0);
  for (auto k : picks) ++observed[k];
  const auto cs = chi_square(observed, std::vector<double>(slot.size(), 1.0 / static_cast<double>(slot.size())));
  const double q = chi_square_quantile(0.999, 15);
  std::ostringstream d;
  d << "chi2=" << cs.statistic << " on " << cs.dof << " dof, 0.999 quantile " << q;
  return {slot.size() == 16 && cs.dof == 15 && cs.statistic < q, d.str()};
}

Outcome first_swap_law() {
  const auto dist = corner_distribution(GrowthState(Shape::staircase(0, 4)));
  const double want[] = {5.0 / 16, 3.0 / 8, 5.0 / 16};
  const auto exact = exact_first_swap_distribution(4);
  const Rational rwant[] = {Rational(5, 16), Rational(3, 8), Rational(5, 16)};
  bool ok = dist.entries.size() == 3 && exact.outcomes.size() == 3;
  double worst = 0.0;
  for (std::size_t k = 0; ok && k < 3; ++k) {
    worst = std::max(worst, std::abs(dist.probability(k) - want[k]));
    ok = exact.outcomes[k].probability == rwant[k] &&
         std::abs(exact.outcomes[k].probability.convert_to<double>() - dist.probability(k)) < 1e-12;
  }
  std::ostringstream d;
  d << "max float error " << worst << ", rational law matches exactly: " << ok;
  return {ok && worst < 1e-12, d.str()};
}

Outcome semicircle() {
  const auto start = std::chrono::steady_clock::now();
  ExperimentConfig c;
  c.id = "semicircle";
  c.n = 1000;
  c.u_grid = {-0.5, 0.0, 0.5};
  const auto rep = semicircle_curve(c);
  bool ok = true;
  std::ostringstream d;
  for (double u : c.u_grid) {
    std::ostringstream key;
    key << u;
    const double rel = rep.row("rel_error_u" + key.str()).estimate;
    ok = ok && std::abs(rel) < 0.02;
    d << "u=" << u << " rel " << rel << "; ";
  }
  const double asym = std::abs(rep.row("n_prob_u0.5").estimate - rep.row("n_prob_u-0.5").estimate);
  const double secs = elapsed(start);
  d << "mirror gap " << asym << ", " << secs << " s";
  return {ok && asym < 1e-12 && secs < 60.0, d.str()};
}

Outcome swap_rate() {
  ExperimentConfig c;
  c.id = "swap-rate";
  c.n = 200;
  c.u = 0.0;
  c.t = 1.0;
  c.replicas = 10000;
  c.seed = kSeed + 6;
  c.threads = 1;  // single-thread timing
  const auto rep = estimate_swap_rate(c);
  const auto& r = rep.row("swap_rate");
  const double target = 4.0 / std::numbers::pi;
  const double z = (r.estimate - target) / r.std_error;
  std::ostringstream d;
  d << "estimate " << r.estimate << " +- " << r.std_error << " vs " << target << " (z=" << z << "), single thread "
    << rep.wall_seconds << " s; " << worker_count() << " hardware threads available";
  return {std::abs(z) < 3.0 && rep.failures.empty() && rep.wall_seconds < 300.0, d.str()};
}

Outcome swap_height() {
  ExperimentConfig c;
  c.id = "swap-height";
  c.n = 200;
  c.t = 1.0;
  c.replicas = 10000;
  c.seed = kSeed + 7;
  c.threads = worker_count();
  const auto rep = swap_height_identity(c);
  const auto& diff = rep.row("difference");
  const double fails = rep.row("identity_failures").estimate;
  std::ostringstream d;
  d << "pathwise identity failures " << fails << "; E h=" << rep.row("height").estimate << " E s=" << rep.row("swaps").estimate
    << " diff " << diff.estimate << " +- " << diff.std_error;
  return {fails == 0 && std::abs(diff.estimate) < 3.0 * diff.std_error && rep.failures.empty(), d.str()};
}

Outcome scaling() {
  ExperimentConfig c;
  c.id = "scaling-collapse";
  c.n = 300;
  c.u = 0.5;
  c.replicas = 10000;
  c.seed = kSeed + 8;
  c.threads = worker_count();
  const auto rep = scaling_collapse(c);
  const double ks = rep.row("ks").estimate;
  const double crit = rep.row("ks_critical").estimate;
  std::ostringstream d;
  d << "KS " << ks << " vs critical " << crit << "; means " << rep.row("mean_center").estimate << " / "
    << rep.row("mean_shifted").estimate << ", censored " << rep.row("censored").estimate << ", " << rep.wall_seconds << " s";
  return {ks < crit, d.str()};
}

Outcome couplings() {
  const double theta = theta_threshold(10, 100, 0, 0.5);
  StoppingRule stop;
  stop.lower_additions = 22;  // floor(0.5 * 45)
  const auto run = [&](double speed) {
    return map_replicas(1000, worker_count(), [&](std::int64_t r) {
      Stream rng(kSeed + 9, static_cast<std::uint64_t>(r));
      return couple_dominating({Shape::staircase(0, 10), 10.0}, {Shape::staircase(0, 100), speed * 100.0}, stop, rng);
    });
  };
  std::int64_t violations = 0;
  std::int64_t broken = 0;
  std::int64_t checks = 0;
  std::int64_t short_runs = 0;
  for (const auto& t : run(theta)) {
    violations += t.violation_count;
    broken += !t.contained;
    checks += t.rate_checks;
    short_runs += t.lower_added.front() < stop.lower_additions;
  }
  std::int64_t control = 0;
  std::int64_t control_runs = 0;
  for (const auto& t : run(1.0)) {
    control += t.violation_count;
    control_runs += t.violation_count > 0;
  }
  std::ostringstream d;
  d << "theta=" << theta << ": " << checks << " rate checks, " << violations << " violations, " << broken
    << " containment failures, " << short_runs << " runs short of the stop; theta=1: " << control << " violations on "
    << control_runs << " runs";
  return {violations == 0 && broken == 0 && short_runs == 0 && control > 0, d.str()};
}

Outcome cylinder_audits() {
  ExperimentConfig c;
  c.id = "rate-audits";
  c.n = 20;
  c.replicas = 1000;
  c.seed = kSeed + 10;
  c.threads = worker_count();
  const auto rep = rate_audits(c);
  const double bad48 = rep.row("bound48_violations").estimate;
  const auto runs = map_replicas(1000, worker_count(), [&](std::int64_t r) {
    Stream rng(kSeed + 10, 1000000 + static_cast<std::uint64_t>(r));
    return couple_cylinder(12, rng);
  });
  std::int64_t broken = 0;
  std::int64_t violations = 0;
  std::int64_t modified = 0;
  double ratio = 0.0;
  for (const auto& t : runs) {
    broken += !t.contained;
    violations += t.violation_count;
    modified += t.modified_violations;
    ratio = std::max(ratio, t.max_size_ratio);
  }
  std::ostringstream d;
  d << "48(|A|+n): " << bad48 << " violations, max ratio " << rep.row("bound48_max_ratio").estimate
    << "; cylinder coupling n=12: " << broken << " containment failures, " << violations << " rate violations, " << modified
    << " modified-rate violations, max size ratio " << ratio;
  return {bad48 == 0 && rep.row("bound48_empty_ratio").estimate <= 1.0 && broken == 0, d.str()};
}

Outcome tail() {
  ExperimentConfig c;
  c.id = "gap-tail";
  c.n = 300;
  c.replicas = 10000;
  c.t_grid = {1.0, 2.0, 4.0};
  c.radius = 0;
  c.seed = kSeed + 11;
  c.threads = worker_count();
  const auto rep = gap_tail(c);
  const auto& d1 = rep.row("survival_t1");
  const auto& d2 = rep.row("survival_t2");
  const auto& w1 = rep.row("survival_is_t1");
  const auto& w2 = rep.row("survival_is_t2");
  const auto& w4 = rep.row("survival_is_t4");
  // The reweighted estimator must agree with direct counting where counting resolves it.
  const bool agree = std::abs(w1.estimate - d1.estimate) < 3.0 * std::hypot(w1.std_error, d1.std_error) &&
                     std::abs(w2.estimate - d2.estimate) < 3.0 * std::hypot(w2.std_error, d2.std_error);
  std::ostringstream d;
  d << "reweighted P(F>1)=" << w1.estimate << " P(F>2)=" << w2.estimate << " P(F>4)=" << w4.estimate << " +- "
    << w4.std_error << "; direct " << d1.estimate << " / " << d2.estimate << " / "
    << rep.row("survival_t4").estimate << ", agree=" << agree << ", " << rep.wall_seconds << " s";
  return {w4.estimate > 0.0 && w1.estimate > w2.estimate && w2.estimate > w4.estimate && agree, d.str()};
}

Outcome engines() {
  const Shape shape = Shape::staircase(0, 60);
  const auto same = map_replicas(1000, worker_count(), [&](std::int64_t r) {
    Stream a(kSeed + 12, static_cast<std::uint64_t>(r));
    Stream b(kSeed + 12, static_cast<std::uint64_t>(r));
    GrowthState sa(shape);
    GrowthState sb(shape);
    while (sa.residual_size() > 0) {
      if (!(step_incremental(sa, a) == step_naive(sb, b))) return false;
    }
    return true;
  });
  std::int64_t agree = 0;
  for (bool s : same) agree += s;
  const auto start = std::chrono::steady_clock::now();
  Stream rng(kSeed + 12, 99999999);
  const auto big = sample_tableau(Shape::staircase(0, 300), rng);
  const double secs = elapsed(start);
  const bool full = big.size() == 300 * 299 / 2;
  std::ostringstream d;
  d << agree << "/1000 seeds identical at n=60; n=300 incremental network in " << secs << " s";
  return {agree == 1000 && full && secs < 60.0, d.str()};
}

Outcome mixing() {
  ExperimentConfig c;
  c.id = "translation-mixing";
  c.n = 400;
  c.t = 1.0;
  c.lags = {2, 20};
  c.replicas = 10000;
  c.seed = kSeed + 13;
  c.threads = worker_count();
  const auto rep = translation_and_mixing(c);
  const double c2 = rep.row("corr_K2").estimate;
  const double c20 = rep.row("corr_K20").estimate;
  std::ostringstream d;
  d << "corr(K=2)=" << c2 << " corr(K=20)=" << c20 << ", " << rep.wall_seconds << " s";
  return {std::abs(c20) < 0.05 && std::abs(c20) < std::abs(c2) && rep.failures.empty(), d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"counting", counting},
      {"bijectivity", bijectivity},
      {"sampler uniformity", sampler_uniformity},
      {"exact first-swap law", first_swap_law},
      {"semicircle", semicircle},
      {"local swap rate", swap_rate},
      {"swap-height identity", swap_height},
      {"scaling collapse", scaling},
      {"couplings", couplings},
      {"cylinder audits", cylinder_audits},
      {"tail positivity", tail},
      {"determinism and engine equivalence", engines},
      {"mixing diagnostic", mixing},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o{false, ""};
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
