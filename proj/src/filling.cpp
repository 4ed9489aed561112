#include "rsn/filling.hpp"

#include <algorithm>

#include "rsn/error.hpp"

namespace rsn {

namespace {

std::size_t slot(const Shape& s, Cell z) {
  return static_cast<std::size_t>(s.s_index(z) * s.lines() + s.d_index(z));
}

}  // namespace

StandardFilling::StandardFilling(Shape shape, std::vector<Cell> order, std::vector<int> ranks)
    : shape_(shape), order_(std::move(order)), ranks_(std::move(ranks)) {}

StandardFilling StandardFilling::from_order(Shape shape, const std::vector<Cell>& order) {
  if (!shape.is_staircase()) throw ValidationError("fillings are defined on staircases");
  if (static_cast<std::int64_t>(order.size()) != shape.cell_count())
    throw ValidationError("filling has " + std::to_string(order.size()) + " cells, shape has " +
                          std::to_string(shape.cell_count()));
  const auto lines = static_cast<std::size_t>(shape.lines());
  std::vector<int> ranks(lines * lines, 0);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Cell z = order[k];
    if (!shape.contains(z)) throw ValidationError("cell " + to_string(z) + " is outside " + shape.describe());
    int& r = ranks[slot(shape, z)];
    if (r != 0) throw ValidationError("cell " + to_string(z) + " appears twice");
    r = static_cast<int>(k) + 1;
  }
  for (const Cell z : order) {
    if (z.y == 1) continue;
    const int r = ranks[slot(shape, z)];
    for (const Cell w : {Cell{z.x - 1, z.y - 1}, Cell{z.x + 1, z.y - 1}})
      if (ranks[slot(shape, w)] >= r) throw ValidationError("filling is not order preserving at " + to_string(z));
  }
  return StandardFilling(shape, order, std::move(ranks));
}

StandardFilling StandardFilling::from_entries(Shape shape, const std::vector<std::pair<Cell, int>>& entries) {
  std::vector<Cell> order(entries.size(), Cell{0, 0});
  for (const auto& [z, r] : entries) {
    if (r < 1 || r > static_cast<int>(entries.size())) throw ValidationError("rank out of range");
    if (order[static_cast<std::size_t>(r - 1)].y != 0) throw ValidationError("rank " + std::to_string(r) + " repeated");
    order[static_cast<std::size_t>(r - 1)] = z;
  }
  return from_order(shape, order);
}

int StandardFilling::rank(Cell z) const {
  if (!shape_.contains(z)) throw DomainError("cell " + to_string(z) + " is outside the filling");
  return ranks_[slot(shape_, z)];
}

std::vector<std::pair<Cell, int>> StandardFilling::entries() const {
  std::vector<std::pair<Cell, int>> out;
  out.reserve(order_.size());
  for (std::size_t k = 0; k < order_.size(); ++k) out.emplace_back(order_[k], static_cast<int>(k) + 1);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace rsn
