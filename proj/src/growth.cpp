#include "rsn/growth.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "rsn/error.hpp"

namespace rsn {

double CornerDistribution::probability(std::size_t k) const { return std::exp(entries.at(k).log_weight); }

double corner_log_weight(const GrowthState& state, Cell z) {
  state.shape().require(z);
  if (!state.is_corner(z)) throw PreconditionError("cell " + to_string(z) + " is not a corner");
  const int i = state.shape().s_index(z);
  return state.fresh_log_weight(i) - std::log(static_cast<double>(state.residual_size()));
}

double corner_weight(const GrowthState& state, Cell z) { return std::exp(corner_log_weight(state, z)); }

CornerDistribution corner_distribution(const GrowthState& state) {
  CornerDistribution out;
  const double log_b = std::log(static_cast<double>(state.residual_size()));
  for (int i = 0; i < state.shape().lines(); ++i)
    if (state.corner_on(i)) out.entries.push_back({state.corner_cell(i), state.fresh_log_weight(i) - log_b});
  if (out.entries.empty()) throw TerminalStateError("residual diagram is empty");
  double m = -HUGE_VAL;
  for (const auto& e : out.entries) m = std::max(m, e.log_weight);
  double s = 0.0;
  for (const auto& e : out.entries) s += std::exp(e.log_weight - m);
  out.log_norm = m + std::log(s);
  return out;
}

std::size_t select_index(const double* log_w, std::size_t count, double u) {
  if (count == 0) throw TerminalStateError("nothing to select");
  thread_local std::vector<double> cum;
  cum.resize(count);
  double m = log_w[0];
  for (std::size_t k = 1; k < count; ++k) m = std::max(m, log_w[k]);
  double total = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    total += std::exp(log_w[k] - m);
    cum[k] = total;
  }
  const double target = u * total;
  for (std::size_t k = 0; k < count; ++k)
    if (target < cum[k]) return k;
  return count - 1;
}

namespace {

thread_local std::vector<int> tl_lines;
thread_local std::vector<double> tl_logw;

enum class WeightSource { cached, fresh };

// Gathers corners (optionally skipping one s-line) and their reverse-hook log products.
void gather(const GrowthState& state, WeightSource src, int skip_line) {
  state.corner_lines(tl_lines);
  if (skip_line >= 0) std::erase(tl_lines, skip_line);
  tl_logw.resize(tl_lines.size());
  for (std::size_t k = 0; k < tl_lines.size(); ++k)
    tl_logw[k] = src == WeightSource::cached ? state.cached_log_weight(tl_lines[k]) : state.fresh_log_weight(tl_lines[k]);
}

Cell add_selected(GrowthState& state, double u) {
  const int line = tl_lines[select_index(tl_logw.data(), tl_logw.size(), u)];
  const Cell z = state.corner_cell(line);
  state.add_on_line(line);
  return z;
}

}  // namespace

Cell step_incremental(GrowthState& state, Stream& rng) {
  gather(state, WeightSource::cached, -1);
  if (tl_lines.empty()) throw TerminalStateError("residual diagram is empty");
  return add_selected(state, rng.uniform());
}

Cell step_naive(GrowthState& state, Stream& rng) {
  gather(state, WeightSource::fresh, -1);
  if (tl_lines.empty()) throw TerminalStateError("residual diagram is empty");
  return add_selected(state, rng.uniform());
}

Cell hook_walk_corner(const GrowthState& state, Stream& rng) {
  const Shape& shape = state.shape();
  if (!shape.is_staircase()) throw DomainError("hook walk is implemented for staircases");
  if (state.residual_size() == 0) throw TerminalStateError("residual diagram is empty");
  const auto lines = static_cast<std::uint64_t>(shape.lines());
  int i = 0;
  int j = 0;
  for (;;) {
    i = static_cast<int>(rng.below(lines));
    j = static_cast<int>(rng.below(lines));
    if (shape.valid_pair(i, j) && shape.height(i, j) > state.s_tops()[static_cast<std::size_t>(i)]) break;
  }
  for (;;) {
    const int y = shape.height(i, j);
    const int down_s = y - 1 - state.s_tops()[static_cast<std::size_t>(i)];
    const int down_d = y - 1 - state.d_tops()[static_cast<std::size_t>(j)];
    if (down_s + down_d == 0) return shape.cell_at(i, j);
    const auto k = static_cast<int>(rng.below(static_cast<std::uint64_t>(down_s + down_d)));
    if (k < down_s)
      j += k + 1;  // down the s-line
    else
      i += k - down_s + 1;  // down the d-line
  }
}

Cell step(GrowthState& state, Stream& rng, Engine engine) {
  switch (engine) {
    case Engine::incremental:
      return step_incremental(state, rng);
    case Engine::naive:
      return step_naive(state, rng);
    case Engine::hook_walk: {
      const Cell z = hook_walk_corner(state, rng);
      state.add_cell(z);
      return z;
    }
  }
  throw DomainError("unknown engine");
}

StandardFilling sample_tableau(Shape shape, Stream& rng, Engine engine) {
  if (!shape.is_staircase()) throw DomainError("tableaux are sampled on staircases");
  GrowthState state(shape);
  std::vector<Cell> order;
  order.reserve(static_cast<std::size_t>(shape.cell_count()));
  while (state.residual_size() > 0) order.push_back(step(state, rng, engine));
  return StandardFilling::from_order(shape, order);
}

// ---- InclusionFunction ---------------------------------------------------

InclusionFunction InclusionFunction::from_entries(Shape shape, std::vector<TimedCell> entries) {
  std::sort(entries.begin(), entries.end(), [](const TimedCell& a, const TimedCell& b) { return a.time < b.time; });
  std::unordered_set<Cell, CellHash> seen;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    if (!(e.time >= 0.0) || !std::isfinite(e.time)) throw ValidationError("inclusion times must be finite and nonnegative");
    if (k > 0 && entries[k - 1].time == e.time) throw ValidationError("inclusion times must be distinct");
    if (!shape.contains(e.cell)) throw ValidationError("cell " + to_string(e.cell) + " is outside " + shape.describe());
    const Cell z = shape.canonical(e.cell);
    if (z.y > 1 && (!seen.count(shape.canonical({z.x - 1, z.y - 1})) || !seen.count(shape.canonical({z.x + 1, z.y - 1}))))
      throw ValidationError("support is not downward closed when " + to_string(z) + " is added");
    if (!seen.insert(z).second) throw ValidationError("cell " + to_string(z) + " repeated");
  }
  InclusionFunction f(shape);
  f.entries_ = std::move(entries);
  return f;
}

double InclusionFunction::time_of(Cell z) const {
  const Cell c = shape_.canonical(z);
  for (const auto& e : entries_)
    if (e.cell == c) return e.time;
  return std::numeric_limits<double>::infinity();
}

std::unordered_map<Cell, double, CellHash> InclusionFunction::index() const {
  std::unordered_map<Cell, double, CellHash> m;
  m.reserve(entries_.size());
  for (const auto& e : entries_) m.emplace(e.cell, e.time);
  return m;
}

std::size_t InclusionFunction::count_at(double t) const {
  return static_cast<std::size_t>(
      std::upper_bound(entries_.begin(), entries_.end(), t, [](double v, const TimedCell& e) { return v < e.time; }) -
      entries_.begin());
}

std::vector<Cell> InclusionFunction::support_at(double t) const {
  std::vector<Cell> out;
  const std::size_t k = count_at(t);
  out.reserve(k);
  for (std::size_t m = 0; m < k; ++m) out.push_back(entries_[m].cell);
  return out;
}

InclusionFunction InclusionFunction::scaled(double factor) const {
  InclusionFunction f = *this;
  for (auto& e : f.entries_) e.time *= factor;
  return f;
}

// ---- processes -------------------------------------------------------------

void validate(const ProcessSpec& spec) {
  if (!(spec.rate > 0.0) || !std::isfinite(spec.rate)) throw DomainError("process rate must be positive");
  if (spec.variant == Variant::cylinder && spec.shape.is_staircase())
    throw DomainError("cylinder variant needs a cylinder shape");
  if (spec.variant != Variant::cylinder && !spec.shape.is_staircase())
    throw DomainError("staircase variants need a staircase shape");
  if (spec.variant == Variant::conditioned) {
    if (!spec.avoided) throw DomainError("conditioned variant needs an avoided cell");
    if (!spec.shape.contains(*spec.avoided) || spec.avoided->y != 1)
      throw DomainError("avoided cell must lie in the bottom row of the shape");
  }
  if (spec.variant != Variant::plain && spec.engine == Engine::hook_walk)
    throw DomainError("hook walk is only available for the plain staircase process");
}

InclusionFunction run_process(const ProcessSpec& spec, Stream& rng, const GrowthObserver& observer) {
  validate(spec);
  GrowthState state(spec.shape);
  return run_process(spec, state, rng, observer);
}

InclusionFunction run_process(const ProcessSpec& spec, GrowthState& state, Stream& rng, const GrowthObserver& observer) {
  validate(spec);
  if (!(state.shape() == spec.shape)) throw ShapeError("state shape does not match the process");
  InclusionFunction out(spec.shape);
  const int skip = spec.variant == Variant::conditioned ? spec.shape.s_index(*spec.avoided) : -1;
  const WeightSource src = spec.engine == Engine::naive ? WeightSource::fresh : WeightSource::cached;
  double t = 0.0;
  std::int64_t steps = 0;
  for (;;) {
    if (state.residual_size() == 0) {
      out.absorbed = true;
      break;
    }
    if (spec.variant == Variant::conditioned && state.is_corner(*spec.avoided) && state.corner_count() == 1) {
      out.frozen = true;
      break;
    }
    if (steps >= spec.horizon.max_steps) {
      out.budget_binding = std::isfinite(spec.horizon.time);
      break;
    }
    double total = spec.rate;
    if (spec.variant == Variant::cylinder) {
      gather(state, src, -1);
      double s = 0.0;
      for (double lw : tl_logw) s += std::exp(lw);
      total = spec.rate * s / static_cast<double>(state.residual_size());
    }
    t += rng.exponential(total);
    if (t > spec.horizon.time) break;
    Cell z{};
    if (spec.engine == Engine::hook_walk) {
      z = hook_walk_corner(state, rng);
      state.add_cell(z);
    } else {
      if (spec.variant != Variant::cylinder) gather(state, src, skip);
      z = add_selected(state, rng.uniform());
    }
    ++steps;
    const TimedCell e{z, t};
    out.append(z, t);
    if (observer && !observer(state, e)) break;
    if (spec.stop_after && *spec.stop_after == z) break;
  }
  return out;
}

InclusionFunction run_poissonized(ProcessSpec spec, Stream& rng) {
  spec.variant = Variant::plain;
  return run_process(spec, rng);
}

InclusionFunction run_conditioned(ProcessSpec spec, Cell avoided, Stream& rng) {
  spec.variant = Variant::conditioned;
  spec.avoided = avoided;
  return run_process(spec, rng);
}

CoupledConditionedRun run_conditioned_coupled(Shape shape, double rate, Cell avoided, Horizon horizon, Stream& rng) {
  ProcessSpec probe{shape, rate, horizon, Variant::conditioned, avoided};
  validate(probe);
  CoupledConditionedRun out{InclusionFunction(shape), InclusionFunction(shape)};
  GrowthState plain(shape);
  GrowthState cond(shape);
  const int skip = shape.s_index(avoided);
  bool split = false;
  bool cond_frozen = false;
  double t = 0.0;
  std::int64_t steps = 0;
  while (plain.residual_size() > 0 && steps < horizon.max_steps) {
    t += rng.exponential(rate);
    if (t > horizon.time) break;
    ++steps;
    gather(plain, WeightSource::cached, -1);
    const Cell zp = add_selected(plain, rng.uniform());
    out.plain.append(zp, t);
    if (!split && zp == avoided) {
      split = true;
      out.split_time = t;
    }
    if (cond_frozen) continue;
    if (cond.is_corner(avoided) && cond.corner_count() == 1) {
      cond_frozen = true;
      out.conditioned.frozen = true;
      continue;
    }
    if (!split) {
      cond.add_cell(zp);
      out.conditioned.append(zp, t);
    } else {
      gather(cond, WeightSource::cached, skip);
      const Cell zc = add_selected(cond, rng.uniform());
      out.conditioned.append(zc, t);
    }
  }
  out.plain.absorbed = plain.residual_size() == 0;
  return out;
}

double modified_log_product(const GrowthState& state, Cell z, std::int64_t* residual_out) {
  const Shape& shape = state.shape();
  shape.require(z);
  const int lines = shape.lines();
  const int iz = shape.s_index(z);
  const int jz = shape.d_index(z);
  std::vector<int> s = state.s_tops();
  std::vector<int> d = state.d_tops();
  // On the line k steps to the upper side of z, the cone starts at height y_z + k.
  for (int i = 0; i < lines; ++i) {
    int k = iz - i;
    if (!shape.is_staircase()) k = ((k % lines) + lines) % lines;
    if (k >= 0) s[static_cast<std::size_t>(i)] = std::min(s[static_cast<std::size_t>(i)], z.y - 1 + k);
  }
  for (int j = 0; j < lines; ++j) {
    int k = jz - j;
    if (!shape.is_staircase()) k = ((k % lines) + lines) % lines;
    if (k >= 0) d[static_cast<std::size_t>(j)] = std::min(d[static_cast<std::size_t>(j)], z.y - 1 + k);
  }
  // z must be addable once the cone is removed; its lower neighbours lie outside the cone.
  if (z.y > 1 && (s[static_cast<std::size_t>(iz)] < z.y - 1 || d[static_cast<std::size_t>(jz)] < z.y - 1))
    return -HUGE_VAL;
  if (residual_out) {
    std::int64_t kept = 0;
    for (int v : s) kept += v;
    *residual_out = shape.cell_count() - kept;
  }
  return log_reverse_hook_product(shape, s, d, z);
}

double modified_rate(const GrowthState& state, Cell z, double rate) {
  std::int64_t residual = 0;
  const double lp = modified_log_product(state, z, &residual);
  if (!std::isfinite(lp)) return 0.0;
  return rate * std::exp(lp) / static_cast<double>(residual);
}

}  // namespace rsn
