#pragma once

#include <vector>

#include "rsn/filling.hpp"
#include "rsn/growth.hpp"
#include "rsn/hdiagram.hpp"

namespace rsn {

// Swap word in native positions: swap k exchanges the particles at k-1 and k+1, with
// the n particles of T(c,n) sitting at c-(n-1), c-(n-3), ..., c+(n-1).
struct SortingNetwork {
  int order = 2;
  int center = 0;
  std::vector<int> word;
  std::vector<double> times;  // empty, or one per swap
  bool operator==(const SortingNetwork&) const = default;
};

// Direction the sliding path takes when both upper neighbours are empty. The output
// does not depend on it.
enum class TieRule { left, right };

SortingNetwork eg_map(const StandardFilling& filling, TieRule tie = TieRule::left);
// Full map on a complete inclusion function, carrying its sorted times.
SortingNetwork eg_timed(const InclusionFunction& f, TieRule tie = TieRule::left);

// Native position k <-> 1-based adjacent-transposition index i = (k - c + n)/2.
int native_to_index(int k, int order, int center);
int index_to_native(int i, int order, int center);
std::vector<int> to_indices(const SortingNetwork& net);

// True iff the word has length n(n-1)/2, every swap exchanges an increasing pair, and
// the result is the reversal. Throws ValidationError on positions off the axis.
bool validate_network(const std::vector<int>& word, int order, int center);
bool validate_network(const SortingNetwork& net);

struct Component {
  Shape window;                  // minimal staircase holding the component
  std::vector<TimedCell> cells;  // time order
};

// Groups {z : time(z) <= t} into pieces separated by empty bottom-row positions.
std::vector<Component> decompose_components(const std::vector<TimedCell>& cells, double t);

struct SwapEvent {
  int position;  // native position
  double time;
  bool operator==(const SwapEvent&) const = default;
};

// Runs the sliding map on each component of {time <= t} and merges the swaps by time.
std::vector<SwapEvent> eg_partial(const std::vector<TimedCell>& cells, double t, TieRule tie = TieRule::left);
std::vector<SwapEvent> eg_partial(const InclusionFunction& f, double t, TieRule tie = TieRule::left);

}  // namespace rsn
