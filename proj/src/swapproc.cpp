#include "rsn/swapproc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "rsn/error.hpp"

namespace rsn {

std::vector<Permutation> apply_word(const std::vector<int>& indices, int order) {
  if (order < 1) throw ValidationError("order must be positive");
  Permutation p(static_cast<std::size_t>(order) + 1);
  std::iota(p.begin(), p.end(), 0);
  std::vector<Permutation> out{p};
  out.reserve(indices.size() + 1);
  for (int i : indices) {
    if (i < 1 || i >= order) throw ValidationError("swap index " + std::to_string(i) + " is not adjacent within 1.." + std::to_string(order));
    std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(i) + 1]);
    out.push_back(p);
  }
  return out;
}

std::vector<int> trajectory(const std::vector<int>& indices, int order, int particle) {
  if (particle < 1 || particle > order) throw ValidationError("particle out of range");
  std::vector<int> out{particle};
  out.reserve(indices.size() + 1);
  int pos = particle;
  for (int i : indices) {
    if (i < 1 || i >= order) throw ValidationError("swap index out of range");
    if (i == pos)
      ++pos;
    else if (i + 1 == pos)
      --pos;
    out.push_back(pos);
  }
  return out;
}

SwapTrace::SwapTrace(int lo, int hi, std::vector<TraceEvent> events) : lo_(lo), hi_(hi), events_(std::move(events)) {
  if (hi < lo) throw ValidationError("empty window");
  std::stable_sort(events_.begin(), events_.end(), [](const TraceEvent& a, const TraceEvent& b) { return a.time < b.time; });
}

std::vector<int> SwapTrace::section(double t) const {
  std::vector<int> s(static_cast<std::size_t>(hi_ - lo_ + 2));
  std::iota(s.begin(), s.end(), lo_);
  for (const auto& e : events_) {
    if (e.time > t) break;
    const auto k = static_cast<std::size_t>(e.position - lo_);
    std::swap(s[k], s[k + 1]);
  }
  return s;
}

std::vector<int> SwapTrace::path(int x) const {
  if (x < lo_ || x > hi_ + 1) throw ValidationError("particle outside the window");
  std::vector<int> out{x};
  out.reserve(events_.size() + 1);
  int pos = x;
  for (const auto& e : events_) {
    if (e.position == pos)
      ++pos;
    else if (e.position + 1 == pos)
      --pos;
    out.push_back(pos);
  }
  return out;
}

namespace {

void check_window(const WindowSpec& spec) {
  if (!(std::abs(spec.u) < 1.0)) throw DomainError("|u| must be < 1");
  if (spec.radius < 0) throw DomainError("radius must be nonnegative");
  if (spec.center_index - spec.radius < 1 || spec.center_index + spec.radius > spec.order - 1)
    throw DomainError("window escapes the particle range");
}

}  // namespace

SwapTrace window_process(const std::vector<SwapEvent>& events, int order, int center, const WindowSpec& spec) {
  check_window(spec);
  if (spec.order != order) throw DomainError("window order does not match the events");
  const double scale = std::sqrt(1.0 - spec.u * spec.u);
  std::vector<TraceEvent> out;
  std::int64_t step = 0;
  for (const auto& e : events) {
    ++step;
    const int x = native_to_index(e.position, order, center) - spec.center_index;
    if (std::abs(x) > spec.radius) continue;
    const double t = spec.clock == Clock::poisson ? e.time * scale : static_cast<double>(step) * scale / order;
    out.push_back({x, t});
  }
  return SwapTrace(-spec.radius, spec.radius, std::move(out));
}

SwapTrace window_process(const SortingNetwork& net, const WindowSpec& spec) {
  std::vector<SwapEvent> events;
  events.reserve(net.word.size());
  for (std::size_t k = 0; k < net.word.size(); ++k) {
    const double t = net.times.empty() ? static_cast<double>(k + 1) / net.order : net.times[k];
    events.push_back({net.word[k], t});
  }
  return window_process(events, net.order, net.center, spec);
}

std::vector<int> extend_word(const std::vector<int>& indices, int order, std::int64_t total_steps) {
  if (indices.empty()) throw ValidationError("cannot extend an empty word");
  std::vector<int> out(indices);
  const auto period = static_cast<std::int64_t>(indices.size());
  out.reserve(static_cast<std::size_t>(std::max<std::int64_t>(total_steps, period)));
  for (std::int64_t m = period; m < total_steps; ++m) out.push_back(order - out[static_cast<std::size_t>(m - period)]);
  return out;
}

SwapTrace stationarize(const SortingNetwork& net, double horizon, Stream& rng) {
  if (!validate_network(net)) throw ValidationError("stationarize needs a complete sorting network");
  const auto base = to_indices(net);
  std::vector<TraceEvent> events;
  std::vector<int> word = base;
  double t = 0.0;
  for (std::size_t m = 0;; ++m) {
    if (m < net.times.size())
      t = net.times[m];
    else
      t += rng.exponential(static_cast<double>(net.order));
    if (t > horizon) break;
    if (m >= word.size()) word.push_back(net.order - word[m - base.size()]);
    events.push_back({word[m], t});
  }
  return SwapTrace(1, net.order - 1, std::move(events));
}

std::int64_t swap_count(const SwapTrace& trace, int x, double t) {
  std::int64_t c = 0;
  for (const auto& e : trace.events())
    if (e.position == x && e.time < t) ++c;
  return c;
}

std::int64_t swap_count(const std::vector<SwapEvent>& events, int position, double t) {
  std::int64_t c = 0;
  for (const auto& e : events)
    if (e.position == position && e.time < t) ++c;
  return c;
}

std::int64_t height_count(const std::vector<TimedCell>& cells, int x, double t) {
  std::int64_t c = 0;
  for (const auto& e : cells)
    if ((e.cell.x == x || e.cell.x == x + 1) && e.time < t) ++c;
  return c;
}

std::int64_t height_count(const InclusionFunction& f, int x, double t) { return height_count(f.entries(), x, t); }

std::string check_swap_axioms(const SwapTrace& trace) {
  const int width = trace.hi() - trace.lo() + 2;
  std::vector<int> s(static_cast<std::size_t>(width));
  std::iota(s.begin(), s.end(), trace.lo());
  std::vector<int> where(static_cast<std::size_t>(width));
  std::iota(where.begin(), where.end(), trace.lo());
  double last = -HUGE_VAL;
  for (const auto& e : trace.events()) {
    if (e.position < trace.lo() || e.position > trace.hi()) return "swap at " + std::to_string(e.position) + " leaves the window";
    if (!(e.time >= 0.0)) return "negative event time";
    if (e.time <= last) return "two swaps share a time";
    last = e.time;
    const auto k = static_cast<std::size_t>(e.position - trace.lo());
    const int a = s[k];
    const int b = s[k + 1];
    std::swap(s[k], s[k + 1]);
    auto& pa = where[static_cast<std::size_t>(a - trace.lo())];
    auto& pb = where[static_cast<std::size_t>(b - trace.lo())];
    // Each particle moves by exactly one position.
    if (pa != e.position || pb != e.position + 1) return "trajectory out of step with the section";
    pa = e.position + 1;
    pb = e.position;
  }
  std::vector<int> seen(s);
  std::sort(seen.begin(), seen.end());
  for (int k = 0; k < width; ++k)
    if (seen[static_cast<std::size_t>(k)] != trace.lo() + k) return "section is not a permutation";
  return {};
}

std::string wiring_svg(const SwapTrace& trace) {
  const int width = trace.hi() - trace.lo() + 2;
  const double t_end = trace.events().empty() ? 1.0 : trace.events().back().time * 1.05 + 1e-9;
  const double px_per_t = 800.0 / t_end;
  const double lane = 20.0;  // two units of 10px
  const double margin = 20.0;
  const double cross = std::min(6.0, 0.4 * 800.0 / std::max<std::size_t>(1, trace.events().size()));
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };
  std::vector<std::string> lines(static_cast<std::size_t>(width));
  std::vector<int> lane_of(static_cast<std::size_t>(width));
  std::iota(lane_of.begin(), lane_of.end(), 0);
  std::vector<int> at_lane(lane_of);
  auto point = [&](int particle, double t, int l) {
    lines[static_cast<std::size_t>(particle)] += fmt(margin + t * px_per_t) + "," + fmt(margin + l * lane) + " ";
  };
  for (int p = 0; p < width; ++p) point(p, 0.0, p);
  for (const auto& e : trace.events()) {
    const int l = e.position - trace.lo();
    const int a = at_lane[static_cast<std::size_t>(l)];
    const int b = at_lane[static_cast<std::size_t>(l) + 1];
    const double t0 = std::max(0.0, e.time - cross / (2 * px_per_t));
    const double t1 = e.time + cross / (2 * px_per_t);
    point(a, t0, l);
    point(a, t1, l + 1);
    point(b, t0, l + 1);
    point(b, t1, l);
    std::swap(at_lane[static_cast<std::size_t>(l)], at_lane[static_cast<std::size_t>(l) + 1]);
    lane_of[static_cast<std::size_t>(a)] = l + 1;
    lane_of[static_cast<std::size_t>(b)] = l;
  }
  for (int p = 0; p < width; ++p) point(p, t_end, lane_of[static_cast<std::size_t>(p)]);
  const double w = 2 * margin + 800.0;
  const double h = 2 * margin + (width - 1) * lane;
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(w) + "\" height=\"" + fmt(h) +
                    "\" viewBox=\"0 0 " + fmt(w) + " " + fmt(h) + "\">\n";
  for (int p = 0; p < width; ++p) {
    const int hue = static_cast<int>(360.0 * p / width);
    svg += "<polyline fill=\"none\" stroke=\"hsl(" + std::to_string(hue) + ",70%,40%)\" stroke-width=\"1.5\" points=\"" +
           lines[static_cast<std::size_t>(p)] + "\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace rsn
