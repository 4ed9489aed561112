#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rsn/hdiagram.hpp"

namespace rsn {

// Order-preserving bijection from the cells of a staircase onto 1..N.
class StandardFilling {
 public:
  // Cells listed in rank order (first cell gets rank 1).
  static StandardFilling from_order(Shape shape, const std::vector<Cell>& order);
  static StandardFilling from_entries(Shape shape, const std::vector<std::pair<Cell, int>>& entries);

  const Shape& shape() const { return shape_; }
  int size() const { return static_cast<int>(order_.size()); }
  int rank(Cell z) const;
  // Cells sorted by rank.
  const std::vector<Cell>& order() const { return order_; }
  // (cell, rank) sorted by cell.
  std::vector<std::pair<Cell, int>> entries() const;

  bool operator==(const StandardFilling& o) const { return shape_ == o.shape_ && order_ == o.order_; }

 private:
  StandardFilling(Shape shape, std::vector<Cell> order, std::vector<int> ranks);
  Shape shape_;
  std::vector<Cell> order_;
  std::vector<int> ranks_;  // indexed by s-line * lines + d-line
};

}  // namespace rsn
