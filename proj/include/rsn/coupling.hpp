#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <vector>

#include "rsn/growth.hpp"
#include "rsn/hdiagram.hpp"
#include "rsn/rng.hpp"

namespace rsn {

// Smallest speed-up that lets the process on T(c2,n2) dominate the one on T(c1,n1)
// (centres d apart) until a fraction alpha of the smaller staircase has been added.
double theta_threshold(int n1, int n2, int d, double alpha);

struct ProcessSide {
  Shape shape;
  double rate;
};

struct StoppingRule {
  std::int64_t lower_additions = std::numeric_limits<std::int64_t>::max();  // per lower component
  double time = std::numeric_limits<double>::infinity();
};

enum class Which { lower, upper, both };
const char* to_string(Which w);

struct CouplingEvent {
  double time;
  Cell cell;
  Which which;
  bool contained;  // lower subset of upper after the event
};

struct RateViolation {
  double time;
  Cell cell;
  double lower_rate;
  double upper_rate;
};

struct CouplingTranscript {
  std::vector<CouplingEvent> events;
  std::optional<RateViolation> first_violation;
  std::int64_t violation_count = 0;
  std::int64_t rate_checks = 0;
  bool contained = true;  // held after every event
  std::vector<std::int64_t> lower_added;  // per lower component
  std::int64_t upper_added = 0;
  double stop_time = 0.0;
  // Cylinder audits.
  std::int64_t modified_checks = 0;
  std::int64_t modified_violations = 0;
  double max_size_ratio = 0.0;
};

// Joint chain of two growth processes: shared corners move together at the smaller
// rate, the excess goes to whichever side has the larger rate, exclusive corners move
// alone. Every shared corner is checked for lower rate <= upper rate; failures are
// recorded, not fatal.
CouplingTranscript couple_dominating(const ProcessSide& lower, const ProcessSide& upper, const StoppingRule& stop,
                                     Stream& rng);
// Lower side is the union of two independent processes on disjoint staircases. Stops
// when either reaches the addition budget.
CouplingTranscript couple_pair_vs_one(const ProcessSide& left, const ProcessSide& right, const ProcessSide& upper,
                                      const StoppingRule& stop, Stream& rng);
// T(0,n) at rate n under the cylinder C(n) at rate 8n, up to n^2/4 staircase additions,
// auditing modified rates of the staircase bottom row and the residual size ratio.
CouplingTranscript couple_cylinder(int order, Stream& rng);

// One event per line: time, x, y, which, contained.
void write_transcript(std::ostream& os, const CouplingTranscript& t);

}  // namespace rsn
