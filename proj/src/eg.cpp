#include "rsn/eg.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <unordered_set>

#include "rsn/error.hpp"

namespace rsn {

namespace {

constexpr int kEmpty = INT_MAX;

// Sliding on the staircase window T(center, order). values is indexed by
// s-line * lines + d-line; kEmpty marks cells without a value. Runs `steps`
// extractions and returns the native positions.
std::vector<int> slide(int order, int center, std::vector<int>& values, int steps, TieRule tie) {
  const int lines = order - 1;
  auto at = [&](int i, int j) -> int& { return values[static_cast<std::size_t>(i * lines + j)]; };
  std::vector<int> word;
  word.reserve(static_cast<std::size_t>(steps));
  for (int step = 0; step < steps; ++step) {
    int bi = -1;
    int best = kEmpty;
    for (int i = 0; i < lines; ++i) {
      const int v = at(i, lines - 1 - i);
      if (v < best) {
        best = v;
        bi = i;
      }
    }
    if (bi < 0) throw ValidationError("filling ran out of values");
    int i = bi;
    int j = lines - 1 - bi;
    word.push_back(center - i + j);
    for (;;) {
      // Up-left neighbour is (i, j-1), up-right is (i-1, j).
      const bool has_left = j >= 1;
      const bool has_right = i >= 1;
      const int left = has_left ? at(i, j - 1) : kEmpty;
      const int right = has_right ? at(i - 1, j) : kEmpty;
      bool go_left;
      if (left != kEmpty || right != kEmpty) {
        go_left = left < right;
      } else {
        if (!has_left && !has_right) {
          at(i, j) = kEmpty;
          break;
        }
        go_left = tie == TieRule::left ? has_left : !has_right;
      }
      if (go_left) {
        at(i, j) = left;
        --j;
      } else {
        at(i, j) = right;
        --i;
      }
    }
  }
  return word;
}

}  // namespace

SortingNetwork eg_map(const StandardFilling& filling, TieRule tie) {
  const Shape& shape = filling.shape();
  const int lines = shape.lines();
  std::vector<int> values(static_cast<std::size_t>(lines * lines), kEmpty);
  for (const auto& [z, r] : filling.entries())
    values[static_cast<std::size_t>(shape.s_index(z) * lines + shape.d_index(z))] = r;
  SortingNetwork net{shape.order(), shape.center(), {}, {}};
  net.word = slide(shape.order(), shape.center(), values, filling.size(), tie);
  return net;
}

SortingNetwork eg_timed(const InclusionFunction& f, TieRule tie) {
  const Shape& shape = f.shape();
  if (!shape.is_staircase()) throw DomainError("sorting networks come from staircase fillings");
  if (static_cast<std::int64_t>(f.size()) != shape.cell_count()) throw ValidationError("inclusion function is incomplete");
  std::vector<Cell> order;
  order.reserve(f.size());
  for (const auto& e : f.entries()) order.push_back(e.cell);
  SortingNetwork net = eg_map(StandardFilling::from_order(shape, order), tie);
  for (const auto& e : f.entries()) net.times.push_back(e.time);
  return net;
}

int native_to_index(int k, int order, int center) { return (k - center + order) / 2; }
int index_to_native(int i, int order, int center) { return 2 * i + center - order; }

std::vector<int> to_indices(const SortingNetwork& net) {
  std::vector<int> out;
  out.reserve(net.word.size());
  for (int k : net.word) out.push_back(native_to_index(k, net.order, net.center));
  return out;
}

bool validate_network(const std::vector<int>& word, int order, int center) {
  if (order < 2) throw ValidationError("network order must be >= 2");
  for (int k : word) {
    if (((k - center - order) % 2 + 2) % 2 != 0 || std::abs(k - center) > order - 2)
      throw ValidationError("swap position " + std::to_string(k) + " is off the particle axis");
  }
  if (static_cast<std::int64_t>(word.size()) != static_cast<std::int64_t>(order) * (order - 1) / 2) return false;
  std::vector<int> perm(static_cast<std::size_t>(order) + 1);
  for (int p = 1; p <= order; ++p) perm[static_cast<std::size_t>(p)] = p;
  for (int k : word) {
    const auto i = static_cast<std::size_t>(native_to_index(k, order, center));
    if (perm[i] > perm[i + 1]) return false;
    std::swap(perm[i], perm[i + 1]);
  }
  for (int p = 1; p <= order; ++p)
    if (perm[static_cast<std::size_t>(p)] != order + 1 - p) return false;
  return true;
}

bool validate_network(const SortingNetwork& net) {
  if (!net.times.empty() && net.times.size() != net.word.size()) return false;
  return validate_network(net.word, net.order, net.center);
}

std::vector<Component> decompose_components(const std::vector<TimedCell>& cells, double t) {
  std::vector<TimedCell> live;
  for (const auto& e : cells)
    if (e.time <= t) live.push_back(e);
  std::sort(live.begin(), live.end(), [](const TimedCell& a, const TimedCell& b) { return a.time < b.time; });
  std::unordered_set<Cell, CellHash> set;
  for (const auto& e : live)
    if (!set.insert(e.cell).second) throw ValidationError("cell " + to_string(e.cell) + " repeated");
  std::vector<int> bottom;
  for (const auto& e : live) {
    const Cell z = e.cell;
    if (z.y < 1) throw ValidationError("cell below the bottom row");
    if (z.y > 1 && (!set.count({z.x - 1, z.y - 1}) || !set.count({z.x + 1, z.y - 1})))
      throw ValidationError("support is not downward closed at " + to_string(z));
    if (z.y == 1) bottom.push_back(z.x);
  }
  std::sort(bottom.begin(), bottom.end());
  // Runs of bottom positions spaced by 2.
  std::vector<std::pair<int, int>> runs;
  for (int x : bottom) {
    if (!runs.empty() && x == runs.back().second + 2)
      runs.back().second = x;
    else
      runs.emplace_back(x, x);
  }
  std::vector<Component> out;
  out.reserve(runs.size());
  for (const auto& [lo, hi] : runs) out.push_back({Shape::staircase((lo + hi) / 2, (hi - lo) / 2 + 2), {}});
  for (const auto& e : live) {
    const int foot = e.cell.x - (e.cell.y - 1);
    auto it = std::upper_bound(runs.begin(), runs.end(), foot, [](int v, const std::pair<int, int>& r) { return v < r.first; });
    out[static_cast<std::size_t>(it - runs.begin() - 1)].cells.push_back(e);
  }
  return out;
}

std::vector<SwapEvent> eg_partial(const std::vector<TimedCell>& cells, double t, TieRule tie) {
  std::vector<SwapEvent> events;
  for (const auto& comp : decompose_components(cells, t)) {
    const Shape& w = comp.window;
    const int lines = w.lines();
    std::vector<int> values(static_cast<std::size_t>(lines * lines), kEmpty);
    for (std::size_t k = 0; k < comp.cells.size(); ++k) {
      if (k > 0 && comp.cells[k - 1].time == comp.cells[k].time) throw ValidationError("inclusion times are not distinct");
      const Cell z = comp.cells[k].cell;
      values[static_cast<std::size_t>(w.s_index(z) * lines + w.d_index(z))] = static_cast<int>(k) + 1;
    }
    const auto word = slide(w.order(), w.center(), values, static_cast<int>(comp.cells.size()), tie);
    for (std::size_t k = 0; k < word.size(); ++k) events.push_back({word[k], comp.cells[k].time});
  }
  std::sort(events.begin(), events.end(), [](const SwapEvent& a, const SwapEvent& b) { return a.time < b.time; });
  return events;
}

std::vector<SwapEvent> eg_partial(const InclusionFunction& f, double t, TieRule tie) {
  if (!f.shape().is_staircase()) throw DomainError("sliding map needs a staircase inclusion function");
  return eg_partial(f.entries(), t, tie);
}

}  // namespace rsn
