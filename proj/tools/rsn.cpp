// rsn: sampling, sliding, experiments and verification from the command line.
// Exit codes: 0 ok, 1 verification or record failure, 2 usage error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "rsn/eg.hpp"
#include "rsn/error.hpp"
#include "rsn/experiments.hpp"
#include "rsn/growth.hpp"
#include "rsn/oracle.hpp"
#include "rsn/records.hpp"
#include "rsn/swapproc.hpp"
#include "rsn/verify.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct UsageError : rsn::Error {
  using rsn::Error::Error;
};

// Output stream for a path, "-" meaning stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) : path_(path) {
    if (path_ != "-") {
      file_.open(path_, std::ios::binary);
      if (!file_) throw UsageError("cannot write '" + path_ + "'");
    }
  }
  std::ostream& stream() { return path_ == "-" ? std::cout : file_; }
  bool is_file() const { return path_ != "-"; }
  void close() {
    if (is_file()) file_.close();
  }

 private:
  std::string path_;
  std::ofstream file_;
};

rsn::Engine parse_engine(const std::string& s) {
  if (s == "incremental") return rsn::Engine::incremental;
  if (s == "naive") return rsn::Engine::naive;
  if (s == "hook-walk") return rsn::Engine::hook_walk;
  throw UsageError("unknown engine '" + s + "'");
}

struct SampleArgs {
  int n = 0;
  int center = 0;
  std::uint64_t seed = 1;
  std::int64_t count = 1;
  std::string out = "-";
  bool times = false;
  std::string engine = "incremental";
};

int sample_tableau(const SampleArgs& a) {
  const auto engine = parse_engine(a.engine);
  if (a.times && engine == rsn::Engine::hook_walk) throw UsageError("--times needs a Poisson engine");
  rsn::ProcessSpec spec;
  spec.shape = rsn::Shape::staircase(a.center, a.n);
  spec.rate = a.n;
  spec.engine = engine;
  Sink sink(a.out);
  for (std::int64_t r = 0; r < a.count; ++r) {
    rsn::Stream rng(a.seed, static_cast<std::uint64_t>(r));
    const auto f = rsn::run_process(spec, rng);
    sink.stream() << rsn::to_jsonl(rsn::tableau_record(f, a.seed, static_cast<std::uint64_t>(r), a.times)) << '\n';
  }
  sink.close();
  if (sink.is_file()) {
    std::ostringstream cfg;
    cfg << "n = " << a.n << "\ncenter = " << a.center << "\ncount = " << a.count << "\ntimes = " << a.times
        << "\nengine = " << a.engine << '\n';
    rsn::write_manifest({"sample-tableau", cfg.str(), a.seed, {{a.out, rsn::file_digest(a.out)}}}, a.out);
  }
  return kOk;
}

struct EgArgs {
  std::string in;
  std::string out = "-";
  std::string svg;
};

int eg(const EgArgs& a) {
  std::ifstream in(a.in);
  if (!in) throw UsageError("cannot open '" + a.in + "'");
  if (!a.svg.empty()) std::filesystem::create_directories(a.svg);
  Sink sink(a.out);
  std::vector<std::pair<std::string, std::string>> outputs;
  bool failed = false;
  std::string line;
  int lineno = 0;
  int written = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const auto rec = rsn::parse_tableau(line);
      auto net = rsn::eg_map(rec.filling);
      net.times = rec.times;
      sink.stream() << rsn::to_jsonl(net) << '\n';
      if (!a.svg.empty()) {
        std::vector<rsn::TraceEvent> events;
        const auto idx = rsn::to_indices(net);
        for (std::size_t k = 0; k < idx.size(); ++k)
          events.push_back({idx[k], net.times.empty() ? static_cast<double>(k + 1) / net.order : net.times[k]});
        const std::string path = a.svg + "/network_" + std::to_string(written) + ".svg";
        std::ofstream svg(path);
        svg << rsn::wiring_svg(rsn::SwapTrace(1, net.order - 1, std::move(events)));
        svg.close();
        outputs.emplace_back(path, rsn::file_digest(path));
      }
      ++written;
    } catch (const rsn::Error& e) {
      std::cerr << a.in << ':' << lineno << ": " << e.what() << '\n';
      failed = true;
    }
  }
  sink.close();
  if (sink.is_file()) {
    outputs.insert(outputs.begin(), {a.out, rsn::file_digest(a.out)});
    rsn::write_manifest({"eg", "in = " + a.in + "\nsvg = " + a.svg + '\n', 0, outputs}, a.out);
  }
  return failed ? kFailed : kOk;
}

struct ExperimentArgs {
  std::string config;
  std::int64_t replicas = 0;
  int threads = 0;
  std::string out;
  std::string raw;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

int experiment(const ExperimentArgs& a) {
  rsn::ExperimentConfig c;
  try {
    c = rsn::load_config(a.config);
    if (a.replicas > 0) c.replicas = a.replicas;
    if (a.threads > 0) c.threads = a.threads;
    if (!a.out.empty()) c.out = a.out;
    if (!a.raw.empty()) c.raw_out = a.raw;
    if (a.seed_given) c.seed = a.seed;
    rsn::check(c);
    const auto& ids = rsn::experiment_ids();
    if (std::find(ids.begin(), ids.end(), c.id) == ids.end()) throw UsageError("unknown experiment id '" + c.id + "'");
  } catch (const rsn::DomainError& e) {
    throw UsageError(e.what());
  }
  const auto report = rsn::run_experiment(c);
  const std::string path = c.out.empty() ? "-" : c.out;
  Sink sink(path);
  rsn::write_csv(sink.stream(), report);
  sink.close();
  for (const auto& f : report.failures) std::cerr << "check failed: " << f << '\n';
  if (sink.is_file()) {
    // Thread count does not affect results; keep it out of the replay config.
    rsn::ExperimentConfig echo = c;
    echo.threads = 1;
    std::vector<std::pair<std::string, std::string>> outputs{{path, rsn::file_digest(path)}};
    if (!c.raw_out.empty()) outputs.emplace_back(c.raw_out, rsn::file_digest(c.raw_out));
    rsn::write_manifest({"experiment", echo.echo(), c.seed, outputs}, path);
  }
  std::cerr << "wall time " << report.wall_seconds << " s\n";
  return report.failures.empty() ? kOk : kFailed;
}

struct VerifyArgs {
  std::string suite = "all";
  std::string network;
  std::uint64_t seed = 1;
  int threads = 1;
};

int verify(const VerifyArgs& a) {
  std::vector<rsn::CheckResult> results;
  if (!a.network.empty()) {
    try {
      results = rsn::verify_network_file(a.network);
    } catch (const rsn::DomainError& e) {
      throw UsageError(e.what());
    }
  } else {
    results = rsn::run_suite(a.suite, a.seed, a.threads);
  }
  return rsn::print_results(std::cout, results) ? kOk : kFailed;
}

int enumerate(int n, const std::string& out) {
  Sink sink(out);
  std::uint64_t count = 0;
  const auto shape = rsn::Shape::staircase(0, n);
  rsn::for_each_filling(n, [&](const std::vector<rsn::Cell>& order) {
    sink.stream() << rsn::to_jsonl(rsn::TableauRecord{0, count++, rsn::StandardFilling::from_order(shape, order), {}}) << '\n';
  });
  sink.close();
  std::cerr << count << " fillings\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random sorting networks via staircase tableaux"};
  app.set_version_flag("--version", rsn::code_version());
  app.require_subcommand(1);

  SampleArgs sample;
  auto* s = app.add_subcommand("sample-tableau", "Sample uniform staircase tableaux as JSON lines");
  s->add_option("--n", sample.n, "Staircase order")->required()->check(CLI::Range(2, 1 << 20));
  s->add_option("--center", sample.center, "Apex column");
  s->add_option("--seed", sample.seed, "Master seed")->envname("RSN_SEED");
  s->add_option("--count", sample.count, "Number of records")->check(CLI::PositiveNumber);
  s->add_option("--out", sample.out, "Output path, - for stdout");
  s->add_flag("--times", sample.times, "Include Poisson inclusion times");
  s->add_option("--engine", sample.engine, "incremental, naive or hook-walk");

  EgArgs egargs;
  auto* e = app.add_subcommand("eg", "Map tableau records to sorting networks");
  e->add_option("--in", egargs.in, "Tableau JSON lines")->required();
  e->add_option("--out", egargs.out, "Output path, - for stdout");
  e->add_option("--svg", egargs.svg, "Directory for wiring diagrams");

  ExperimentArgs exp;
  auto* x = app.add_subcommand("experiment", "Run a Monte Carlo experiment from a config file");
  x->add_option("--config", exp.config, "key = value config file")->required();
  x->add_option("--replicas", exp.replicas, "Override the replica count")->check(CLI::PositiveNumber);
  x->add_option("--threads", exp.threads, "Worker threads")->check(CLI::PositiveNumber);
  x->add_option("--out", exp.out, "CSV path (stdout when absent)");
  x->add_option("--raw", exp.raw, "JSON-lines event dump (swap-rate only)");
  auto* seed_opt = x->add_option("--seed", exp.seed, "Override the master seed")->envname("RSN_SEED");

  VerifyArgs ver;
  auto* v = app.add_subcommand("verify", "Run check suites or validate a network file");
  v->add_option("--suite", ver.suite, "oracle, couplings, rates or all")
      ->check(CLI::IsMember({"oracle", "couplings", "rates", "all"}));
  v->add_option("--network", ver.network, "Network JSON lines to validate");
  v->add_option("--seed", ver.seed, "Master seed")->envname("RSN_SEED");
  v->add_option("--threads", ver.threads, "Worker threads")->check(CLI::PositiveNumber);

  int enum_n = 0;
  std::string enum_out = "-";
  auto* en = app.add_subcommand("enumerate", "List every filling of T(0,n), n <= 6");
  en->add_option("--n", enum_n, "Staircase order")->required()->check(CLI::Range(2, 6));
  en->add_option("--out", enum_out, "Output path, - for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kOk : kUsage;
  }
  try {
    if (s->parsed()) return sample_tableau(sample);
    if (e->parsed()) return eg(egargs);
    if (x->parsed()) {
      exp.seed_given = seed_opt->count() > 0 || std::getenv("RSN_SEED") != nullptr;
      return experiment(exp);
    }
    if (v->parsed()) return verify(ver);
    if (en->parsed()) return enumerate(enum_n, enum_out);
  } catch (const UsageError& err) {
    std::cerr << "usage error: " << err.what() << '\n';
    return kUsage;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kFailed;
  }
  return kUsage;
}
