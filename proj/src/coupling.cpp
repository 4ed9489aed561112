#include "rsn/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "rsn/error.hpp"

namespace rsn {

double theta_threshold(int n1, int n2, int d, double alpha) {
  if (n1 < 2 || n2 < 3 || d < 0) throw DomainError("threshold needs n1 >= 2, n2 >= 3, d >= 0");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0,1)");
  const double ratio = static_cast<double>(n1 + d) / static_cast<double>(n2 - 2);
  const double inside = 1.0 - ratio * ratio;
  if (!(inside > 0.0) || n1 + d >= n2 - 2) throw InfeasibleError("threshold has no real value: n1 + d >= n2 - 2");
  const double lead = static_cast<double>(n2 - 1) * n1 / (static_cast<double>(n1 - 1) * (n2 - 2));
  return lead / ((1.0 - alpha) * std::sqrt(inside));
}

const char* to_string(Which w) {
  switch (w) {
    case Which::lower:
      return "lower";
    case Which::upper:
      return "upper";
    case Which::both:
      return "both";
  }
  return "?";
}

namespace {

struct Transition {
  double rate;
  int component;  // lower component, -1 for upper-only
  int upper_line; // upper s-line, -1 for lower-only
  Cell cell;
  Which which;
};

double rate_of(const GrowthState& s, int line, double r) {
  return r * std::exp(s.cached_log_weight(line) - std::log(static_cast<double>(s.residual_size())));
}

struct JointChain {
  std::vector<GrowthState> lower;
  std::vector<double> lower_rate;
  GrowthState upper;
  double upper_rate;
  bool cylinder_audit = false;
  std::int64_t outside = 0;  // lower cells missing from upper

  bool in_lower(Cell z) const {
    for (const auto& s : lower)
      if (s.is_member(z)) return true;
    return false;
  }
};

void audit_cylinder(const JointChain& chain, CouplingTranscript& out) {
  const GrowthState& low = chain.lower.front();
  const Shape& stair = low.shape();
  const double ratio = static_cast<double>(chain.upper.shape().cell_count() - low.added()) /
                       static_cast<double>(low.residual_size());
  out.max_size_ratio = std::max(out.max_size_ratio, ratio);
  for (const Cell z : stair.bottom_row()) {
    const double wx = modified_rate(low, z, chain.lower_rate.front());
    const double wc = modified_rate(chain.upper, z, chain.upper_rate);
    ++out.modified_checks;
    if (wx > wc * (1.0 + 1e-12)) ++out.modified_violations;
  }
}

CouplingTranscript run_joint(JointChain& chain, const StoppingRule& stop, Stream& rng) {
  CouplingTranscript out;
  out.lower_added.assign(chain.lower.size(), 0);
  std::vector<Transition> moves;
  std::vector<int> lines;
  std::vector<char> handled;
  double t = 0.0;
  for (;;) {
    bool done = false;
    for (std::size_t m = 0; m < chain.lower.size(); ++m)
      if (out.lower_added[m] >= stop.lower_additions) done = true;
    if (done) break;
    if (chain.cylinder_audit) audit_cylinder(chain, out);

    moves.clear();
    handled.assign(static_cast<std::size_t>(chain.upper.shape().lines()), 0);
    for (std::size_t m = 0; m < chain.lower.size(); ++m) {
      const GrowthState& low = chain.lower[m];
      low.corner_lines(lines);
      for (int line : lines) {
        const Cell z = low.corner_cell(line);
        const double v1 = rate_of(low, line, chain.lower_rate[m]);
        if (chain.upper.is_member(z) || !chain.upper.is_corner(z)) {
          moves.push_back({v1, static_cast<int>(m), -1, z, Which::lower});
          continue;
        }
        const int uline = chain.upper.shape().s_index(z);
        handled[static_cast<std::size_t>(uline)] = 1;
        const double v2 = rate_of(chain.upper, uline, chain.upper_rate);
        ++out.rate_checks;
        if (v1 > v2 * (1.0 + 1e-12)) {
          ++out.violation_count;
          if (!out.first_violation) out.first_violation = RateViolation{t, z, v1, v2};
        }
        moves.push_back({std::min(v1, v2), static_cast<int>(m), uline, z, Which::both});
        if (v1 > v2) moves.push_back({v1 - v2, static_cast<int>(m), -1, z, Which::lower});
        if (v2 > v1) moves.push_back({v2 - v1, -1, uline, z, Which::upper});
      }
    }
    chain.upper.corner_lines(lines);
    for (int uline : lines)
      if (!handled[static_cast<std::size_t>(uline)])
        moves.push_back({rate_of(chain.upper, uline, chain.upper_rate), -1, uline, chain.upper.corner_cell(uline), Which::upper});

    double total = 0.0;
    for (const auto& mv : moves) total += mv.rate;
    if (!(total > 0.0)) break;
    const double gap = rng.exponential(total);
    if (t + gap > stop.time) break;
    t += gap;
    double target = rng.uniform() * total;
    std::size_t pick = moves.size() - 1;
    for (std::size_t k = 0; k < moves.size(); ++k) {
      if (target < moves[k].rate) {
        pick = k;
        break;
      }
      target -= moves[k].rate;
    }
    const Transition mv = moves[pick];
    if (mv.which != Which::upper) {
      auto& low = chain.lower[static_cast<std::size_t>(mv.component)];
      low.add_cell(mv.cell);
      ++out.lower_added[static_cast<std::size_t>(mv.component)];
      if (mv.which == Which::lower && !chain.upper.is_member(mv.cell)) ++chain.outside;
    }
    if (mv.which != Which::lower) {
      chain.upper.add_on_line(mv.upper_line);
      ++out.upper_added;
      if (mv.which == Which::upper && chain.in_lower(mv.cell)) --chain.outside;
    }
    const bool contained = chain.outside == 0;
    out.contained = out.contained && contained;
    out.events.push_back({t, mv.cell, mv.which, contained});
  }
  out.stop_time = t;
  return out;
}

void require_nested(const Shape& outer, const Shape& inner) {
  if (!outer.contains_shape(inner))
    throw ShapeError(inner.describe() + " is not contained in " + outer.describe());
}

}  // namespace

CouplingTranscript couple_dominating(const ProcessSide& lower, const ProcessSide& upper, const StoppingRule& stop,
                                     Stream& rng) {
  require_nested(upper.shape, lower.shape);
  if (!(lower.rate > 0.0) || !(upper.rate > 0.0)) throw DomainError("rates must be positive");
  JointChain chain{{GrowthState(lower.shape)}, {lower.rate}, GrowthState(upper.shape), upper.rate};
  return run_joint(chain, stop, rng);
}

CouplingTranscript couple_pair_vs_one(const ProcessSide& left, const ProcessSide& right, const ProcessSide& upper,
                                      const StoppingRule& stop, Stream& rng) {
  require_nested(upper.shape, left.shape);
  require_nested(upper.shape, right.shape);
  for (const Cell z : left.shape.cells())
    if (right.shape.contains(z)) throw ShapeError(left.shape.describe() + " overlaps " + right.shape.describe());
  JointChain chain{{GrowthState(left.shape), GrowthState(right.shape)}, {left.rate, right.rate}, GrowthState(upper.shape),
                   upper.rate};
  return run_joint(chain, stop, rng);
}

CouplingTranscript couple_cylinder(int order, Stream& rng) {
  if (order < 3) throw DomainError("cylinder coupling needs n >= 3");
  const Shape stair = Shape::staircase(0, order);
  JointChain chain{{GrowthState(stair)}, {static_cast<double>(order)}, GrowthState(Shape::cylinder(order)), 8.0 * order};
  chain.cylinder_audit = true;
  StoppingRule stop;
  stop.lower_additions = static_cast<std::int64_t>(order) * order / 4;
  auto out = run_joint(chain, stop, rng);
  audit_cylinder(chain, out);
  return out;
}

void write_transcript(std::ostream& os, const CouplingTranscript& t) {
  os << "time\tx\ty\twhich\tcontained\n";
  for (const auto& e : t.events)
    os << e.time << '\t' << e.cell.x << '\t' << e.cell.y << '\t' << to_string(e.which) << '\t' << (e.contained ? 1 : 0)
       << '\n';
}

}  // namespace rsn
