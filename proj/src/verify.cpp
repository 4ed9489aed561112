#include "rsn/verify.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "rsn/coupling.hpp"
#include "rsn/eg.hpp"
#include "rsn/error.hpp"
#include "rsn/experiments.hpp"
#include "rsn/growth.hpp"
#include "rsn/oracle.hpp"
#include "rsn/parallel.hpp"
#include "rsn/records.hpp"

namespace rsn {

namespace {

void oracle_suite(std::vector<CheckResult>& out) {
  const std::uint64_t expected[] = {2, 16, 768, 292864};
  for (int n = 3; n <= 6; ++n) {
    const std::uint64_t want = expected[n - 3];
    const std::uint64_t counted = count_fillings(n);
    const BigInt formula = exact_tableau_count(Shape::staircase(0, n));
    const double logged = std::exp(log_tableau_count(Shape::staircase(0, n)));
    const bool ok = counted == want && formula == BigInt(want) && std::abs(logged / static_cast<double>(want) - 1.0) < 1e-12;
    std::ostringstream d;
    d << "enumerated " << counted << ", hook formula " << formula << ", float " << logged;
    out.push_back({"d(" + std::to_string(n) + ")=" + std::to_string(want), ok, d.str()});
  }

  const auto dist = corner_distribution(GrowthState(Shape::staircase(0, 4)));
  const double want[] = {5.0 / 16, 3.0 / 8, 5.0 / 16};
  bool ok = dist.entries.size() == 3;
  for (std::size_t k = 0; ok && k < 3; ++k) ok = std::abs(dist.probability(k) - want[k]) < 1e-12;
  const auto exact = exact_first_swap_distribution(4);
  const Rational rwant[] = {Rational(5, 16), Rational(3, 8), Rational(5, 16)};
  bool exact_ok = exact.outcomes.size() == 3 && exact.total() == 1;
  for (std::size_t k = 0; exact_ok && k < 3; ++k) exact_ok = exact.outcomes[k].probability == rwant[k];
  out.push_back({"first swap law T(0,4) = {5/16,3/8,5/16}", ok && exact_ok, ""});

  // Sliding map is injective onto valid networks at n=5.
  std::unordered_set<std::uint64_t> seen;
  bool all_valid = true;
  for (const auto& f : enumerate_fillings(5)) {
    const auto net = eg_map(f);
    all_valid = all_valid && validate_network(net);
    seen.insert(digest(net.word));
  }
  out.push_back({"sliding map bijective at n=5", all_valid && seen.size() == 768,
                 std::to_string(seen.size()) + " distinct networks"});

  // Hook lengths against direct leg counting on every state of T(0,5).
  bool hooks = true;
  const Shape t5 = Shape::staircase(0, 5);
  for (const auto& s : enumerate_states(t5))
    for (const Cell z : t5.cells())
      if (!s.is_member(z) && s.hook_length(z) != brute_hook_length(s, z)) hooks = false;
  out.push_back({"hook lengths match leg counts on T(0,5)", hooks, ""});
}

void coupling_suite(std::vector<CheckResult>& out, std::uint64_t seed, int threads) {
  const double theta = theta_threshold(10, 100, 0, 0.5);
  StoppingRule stop;
  stop.lower_additions = 22;  // floor(alpha * 45)
  const auto run = [&](double speed, std::int64_t count) {
    return map_replicas(count, threads, [&](std::int64_t r) {
      Stream rng(seed, static_cast<std::uint64_t>(r));
      return couple_dominating({Shape::staircase(0, 10), 10.0}, {Shape::staircase(0, 100), speed * 100.0}, stop, rng);
    });
  };
  std::int64_t violations = 0;
  std::int64_t checks = 0;
  std::int64_t broken = 0;
  for (const auto& t : run(theta, 200)) {
    violations += t.violation_count;
    checks += t.rate_checks;
    broken += !t.contained;
  }
  std::ostringstream d;
  d << "theta=" << theta << ", 200 transcripts, " << checks << " rate checks, " << violations << " violations, "
    << broken << " containment failures";
  out.push_back({"domination T(0,10) under T(0,100) at rate theta*100", violations == 0 && broken == 0, d.str()});

  std::int64_t control = 0;
  for (const auto& t : run(1.0, 200)) control += t.violation_count;
  out.push_back({"negative control theta=1 records violations", control > 0, std::to_string(control) + " violations"});

  const double pair_theta = theta_threshold(8, 80, 20, 0.5);
  StoppingRule pair_stop;
  pair_stop.lower_additions = 14;  // floor(alpha * 28)
  const auto pairs = map_replicas(100, threads, [&](std::int64_t r) {
    Stream rng(seed ^ 0x7f4a7c15ULL, static_cast<std::uint64_t>(r));
    return couple_pair_vs_one({Shape::staircase(0, 8), 8.0}, {Shape::staircase(-40, 8), 8.0},
                              {Shape::staircase(-20, 80), pair_theta * 80.0}, pair_stop, rng);
  });
  std::int64_t pv = 0;
  std::int64_t pb = 0;
  for (const auto& t : pairs) {
    pv += t.violation_count;
    pb += !t.contained;
  }
  out.push_back({"pair T(0,8)+T(-40,8) under T(-20,80)", pv == 0 && pb == 0,
                 std::to_string(pv) + " violations, " + std::to_string(pb) + " containment failures"});

  const auto cyl = map_replicas(100, threads, [&](std::int64_t r) {
    Stream rng(seed ^ 0x2545f491ULL, static_cast<std::uint64_t>(r));
    return couple_cylinder(12, rng);
  });
  std::int64_t cb = 0;
  std::int64_t mv = 0;
  double ratio = 0.0;
  for (const auto& t : cyl) {
    cb += !t.contained || t.violation_count > 0;
    mv += t.modified_violations;
    ratio = std::max(ratio, t.max_size_ratio);
  }
  std::ostringstream cd;
  cd << cb << " failed runs, " << mv << " modified-rate violations, max size ratio " << ratio;
  out.push_back({"T(0,12) under C(12) at rate 8n through n^2/4 additions", cb == 0 && mv == 0 && ratio <= 8.0, cd.str()});
}

void rate_suite(std::vector<CheckResult>& out, std::uint64_t seed, int threads) {
  ExperimentConfig c;
  c.id = "rate-audits";
  c.n = 20;
  c.replicas = 200;
  c.seed = seed;
  c.threads = threads;
  const auto rep = rate_audits(c);
  std::ostringstream d;
  d << "200 cylinder states at n=20, max ratio " << rep.row("bound48_max_ratio").estimate;
  out.push_back({"bottom-row modified rates <= 48(|A|+n)", rep.row("bound48_violations").estimate == 0 &&
                                                               rep.row("bound48_empty_ratio").estimate <= 1.0,
                 d.str()});
  std::ostringstream h;
  h << "max ratio " << rep.row("maxheight_max_ratio").estimate;
  out.push_back({"reverse-hook products < 2n(beta+1)", rep.row("maxheight_violations").estimate == 0, h.str()});
}

}  // namespace

std::vector<CheckResult> run_suite(const std::string& suite, std::uint64_t seed, int threads) {
  std::vector<CheckResult> out;
  const bool all = suite == "all";
  if (!all && suite != "oracle" && suite != "couplings" && suite != "rates")
    throw DomainError("unknown suite '" + suite + "'");
  if (all || suite == "oracle") oracle_suite(out);
  if (all || suite == "couplings") coupling_suite(out, seed, threads);
  if (all || suite == "rates") rate_suite(out, seed, threads);
  return out;
}

std::vector<CheckResult> verify_network_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DomainError("cannot open '" + path + "'");
  std::vector<CheckResult> out;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string name = path + ":" + std::to_string(lineno);
    try {
      const auto net = parse_network(line);
      out.push_back({name, validate_network(net), validate_network(net) ? "" : "not a sorting network"});
    } catch (const Error& e) {
      out.push_back({name, false, e.what()});
    }
  }
  return out;
}

bool print_results(std::ostream& os, const std::vector<CheckResult>& results) {
  bool ok = true;
  for (const auto& r : results) {
    os << r.name << ": " << (r.pass ? "PASS" : "FAIL");
    if (!r.detail.empty()) os << " (" << r.detail << ')';
    os << '\n';
    ok = ok && r.pass;
  }
  return ok;
}

}  // namespace rsn
