#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <unordered_map>
#include <vector>

#include "rsn/filling.hpp"
#include "rsn/hdiagram.hpp"
#include "rsn/rng.hpp"

namespace rsn {

struct CornerEntry {
  Cell cell;
  double log_weight;  // log of the hook probability
};

struct CornerDistribution {
  std::vector<CornerEntry> entries;  // s-line order
  double log_norm = 0.0;             // log of the weight sum
  double probability(std::size_t k) const;
};

// Hook probability of corner z in the residual of state: product of h/(h-1) over the
// reverse hook, divided by the residual size. For cylinders this is a raw weight.
double corner_weight(const GrowthState& state, Cell z);
double corner_log_weight(const GrowthState& state, Cell z);
CornerDistribution corner_distribution(const GrowthState& state);

// Shared selection kernel: index k with probability proportional to exp(log_w[k]),
// chosen by inverse CDF at u in (0,1).
std::size_t select_index(const double* log_w, std::size_t count, double u);

enum class Engine { incremental, naive, hook_walk };

// One addition driven by a single uniform draw. Returns the added cell.
Cell step_incremental(GrowthState& state, Stream& rng);
Cell step_naive(GrowthState& state, Stream& rng);
Cell step(GrowthState& state, Stream& rng, Engine engine);

// Classical random hook walk on a staircase residual.
Cell hook_walk_corner(const GrowthState& state, Stream& rng);

StandardFilling sample_tableau(Shape shape, Stream& rng, Engine engine = Engine::incremental);

struct TimedCell {
  Cell cell;
  double time;
  bool operator==(const TimedCell&) const = default;
};

// Cell -> inclusion time, infinite off the support. Entries are kept in time order.
class InclusionFunction {
 public:
  explicit InclusionFunction(Shape shape) : shape_(shape) {}
  // Checks distinct increasing times and downward closure at every threshold.
  static InclusionFunction from_entries(Shape shape, std::vector<TimedCell> entries);

  const Shape& shape() const { return shape_; }
  const std::vector<TimedCell>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  void append(Cell z, double t) { entries_.push_back({z, t}); }

  double time_of(Cell z) const;
  std::unordered_map<Cell, double, CellHash> index() const;
  std::size_t count_at(double t) const;  // entries with time <= t
  std::vector<Cell> support_at(double t) const;
  InclusionFunction scaled(double factor) const;

  bool budget_binding = false;  // stopped on the step budget before the time horizon
  bool frozen = false;          // conditioned run reached the state where only the avoided cell is addable
  bool absorbed = false;        // shape filled

 private:
  Shape shape_;
  std::vector<TimedCell> entries_;
};

struct Horizon {
  double time = std::numeric_limits<double>::infinity();
  std::int64_t max_steps = std::numeric_limits<std::int64_t>::max();
};

enum class Variant { plain, conditioned, cylinder };

struct ProcessSpec {
  Shape shape = Shape::staircase(0, 2);
  double rate = 1.0;
  Horizon horizon{};
  Variant variant = Variant::plain;
  std::optional<Cell> avoided{};      // conditioned variant only
  Engine engine = Engine::incremental;
  std::optional<Cell> stop_after{};   // stop right after this cell is added
};

// Called after every addition with the updated state; return false to stop.
using GrowthObserver = std::function<bool(const GrowthState&, const TimedCell&)>;

void validate(const ProcessSpec& spec);
InclusionFunction run_process(const ProcessSpec& spec, Stream& rng, const GrowthObserver& observer = {});
InclusionFunction run_process(const ProcessSpec& spec, GrowthState& state, Stream& rng,
                              const GrowthObserver& observer = {});
InclusionFunction run_poissonized(ProcessSpec spec, Stream& rng);
InclusionFunction run_conditioned(ProcessSpec spec, Cell avoided, Stream& rng);

struct CoupledConditionedRun {
  InclusionFunction plain;
  InclusionFunction conditioned;
  double split_time = std::numeric_limits<double>::infinity();  // when the plain run added the avoided cell
};

// Plain and conditioned processes on one clock: they add the same cells until the
// plain process picks the avoided cell.
CoupledConditionedRun run_conditioned_coupled(Shape shape, double rate, Cell avoided, Horizon horizon, Stream& rng);

// Rate of adding z with the upward cone above z removed from the state.
double modified_rate(const GrowthState& state, Cell z, double rate);
// Log reverse-hook product of z in the state with the cone above z removed, and the
// residual size of that reduced state. -inf when z is not addable there.
double modified_log_product(const GrowthState& state, Cell z, std::int64_t* residual_out = nullptr);

}  // namespace rsn
