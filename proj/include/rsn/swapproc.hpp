#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rsn/eg.hpp"
#include "rsn/growth.hpp"
#include "rsn/rng.hpp"

namespace rsn {

// Permutations are stored as position -> particle, 1-based (index 0 unused).
using Permutation = std::vector<int>;

// sigma_0 .. sigma_N for a word of 1-based adjacent-transposition indices.
std::vector<Permutation> apply_word(const std::vector<int>& indices, int order);
// Position of particle k after each step, k and positions 1-based.
std::vector<int> trajectory(const std::vector<int>& indices, int order, int particle);

struct TraceEvent {
  int position;  // left position of the swapped pair, window coordinates
  double time;
  bool operator==(const TraceEvent&) const = default;
};

// Swap process restricted to positions lo..hi (window coordinates). Outside the
// window the section is the identity; after the last event it stays frozen.
class SwapTrace {
 public:
  SwapTrace(int lo, int hi, std::vector<TraceEvent> events);

  int lo() const { return lo_; }
  int hi() const { return hi_; }
  const std::vector<TraceEvent>& events() const { return events_; }

  // Section at time t: entry x-lo holds the label at position x. Particles are
  // labelled by their starting position.
  std::vector<int> section(double t) const;
  // Position of the particle starting at x after each event (index 0 is the start).
  std::vector<int> path(int x) const;

 private:
  int lo_;
  int hi_;
  std::vector<TraceEvent> events_;
};

enum class Clock { poisson, count };

struct WindowSpec {
  int order = 2;
  int center_index = 1;  // 1-based swap index of the window centre
  double u = 0.0;
  int radius = 0;        // positions centre-radius .. centre+radius
  Clock clock = Clock::poisson;
};

// Window of the swap process around the centre, recentred so the centre swap sits at
// 0, with times scaled by sqrt(1-u^2). Events come from the sliding map on the
// inclusion function (poisson clock) or from swap counts divided by n (count clock).
SwapTrace window_process(const std::vector<SwapEvent>& events, int order, int center, const WindowSpec& spec);
SwapTrace window_process(const SortingNetwork& net, const WindowSpec& spec);

// Step-indexed continuation: step N+j uses index n - (index of step j).
std::vector<int> extend_word(const std::vector<int>& indices, int order, std::int64_t total_steps);
// Periodic continuation of a complete network with fresh rate-n exponential gaps up to
// the horizon, returned as a trace over positions 1..n-1.
SwapTrace stationarize(const SortingNetwork& net, double horizon, Stream& rng);

// Swaps at position x strictly before time t.
std::int64_t swap_count(const SwapTrace& trace, int x, double t);
std::int64_t swap_count(const std::vector<SwapEvent>& events, int position, double t);
// Cells in columns x and x+1 with inclusion time strictly before t.
std::int64_t height_count(const InclusionFunction& f, int x, double t);
std::int64_t height_count(const std::vector<TimedCell>& cells, int x, double t);

// Checks the swap-function axioms on a trace; returns an empty string or the first failure.
std::string check_swap_axioms(const SwapTrace& trace);

// Wiring diagram: time on the horizontal axis, one polyline per particle.
std::string wiring_svg(const SwapTrace& trace);

}  // namespace rsn
