#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace rsn {

struct Cell {
  int x = 0;
  int y = 1;
  auto operator<=>(const Cell&) const = default;
};

struct CellHash {
  std::size_t operator()(const Cell& c) const noexcept {
    auto k = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.x)) << 32) |
             static_cast<std::uint32_t>(c.y);
    k ^= k >> 33;
    k *= 0xff51afd7ed558ccdULL;
    k ^= k >> 33;
    return static_cast<std::size_t>(k);
  }
};

std::string to_string(const Cell& c);

struct StaircaseShape {
  int center = 0;
  int order = 2;
};

struct CylinderShape {
  int order = 3;
};

enum class ShapeKind { staircase, cylinder };

// A staircase T(c,n) or a cylinder C(n).
//
// Cells are addressed by two line families. The s-line index i counts
// anti-diagonals x+y = const downwards from the top-right boundary, the d-line
// index j counts diagonals y-x = const from the top-left boundary. Both run over
// 0..n-2. Walking up an s-line decreases j, walking up a d-line decreases i.
//
// Staircase: x+y = c+n-1-2i, y-x = n-1-c-2j, y = n-1-i-j, valid iff i+j <= n-2.
// Cylinder: the same residues taken mod 2(n-1); every (i,j) pair is a cell.
class Shape {
 public:
  Shape(StaircaseShape s);  // NOLINT(google-explicit-constructor)
  Shape(CylinderShape s);   // NOLINT(google-explicit-constructor)

  static Shape staircase(int center, int order) { return Shape(StaircaseShape{center, order}); }
  static Shape cylinder(int order) { return Shape(CylinderShape{order}); }

  ShapeKind kind() const { return kind_; }
  bool is_staircase() const { return kind_ == ShapeKind::staircase; }
  int order() const { return n_; }
  int center() const { return c_; }
  int lines() const { return n_ - 1; }
  // Residue of x+y mod 2 shared by every cell.
  int parity() const;
  std::int64_t cell_count() const;

  bool contains(Cell z) const;
  void require(Cell z) const;  // DomainError when off-shape
  Cell canonical(Cell z) const;

  int s_index(Cell z) const;
  int d_index(Cell z) const;
  int height(int i, int j) const;
  Cell cell_at(int i, int j) const;
  bool valid_pair(int i, int j) const;
  // Line index of the cell at height y on a given line of the other family, -1 if none.
  int j_at(int i, int y) const;
  int i_at(int j, int y) const;
  int max_height_s(int i) const;
  int max_height_d(int j) const;

  std::vector<Cell> cells() const;
  std::vector<Cell> bottom_row() const;
  // Cells strictly above z on its two up-diagonals, sorted.
  std::vector<Cell> reverse_hook(Cell z) const;
  // Staircase nesting: every cell of inner lies in this shape.
  bool contains_shape(const Shape& inner) const;

  bool operator==(const Shape& o) const { return kind_ == o.kind_ && n_ == o.n_ && c_ == o.c_; }
  std::string describe() const;

 private:
  ShapeKind kind_;
  int n_;
  int c_;
};

// Downward-closed subset of a shape, stored as the top occupied height on every
// s-line and d-line. Corners are tracked per s-line together with the log of their
// reverse-hook product, which is updated incrementally as cells are added.
class GrowthState {
 public:
  explicit GrowthState(Shape shape);

  static GrowthState from_cells(Shape shape, const std::vector<Cell>& cells);
  static GrowthState from_tops(Shape shape, std::vector<int> s_tops);

  const Shape& shape() const { return shape_; }
  std::int64_t added() const { return added_; }
  std::int64_t residual_size() const { return shape_.cell_count() - added_; }
  const std::vector<int>& s_tops() const { return s_top_; }
  const std::vector<int>& d_tops() const { return d_top_; }
  int max_height() const;

  bool is_member(Cell z) const;
  bool is_corner(Cell z) const;
  int hook_length(Cell z) const;

  std::vector<Cell> corners() const;
  void corner_lines(std::vector<int>& out) const;
  int corner_count() const;
  bool corner_on(int i) const { return corner_[static_cast<std::size_t>(i)] != 0; }
  Cell corner_cell(int i) const;
  // Log of the reverse-hook product of the corner on s-line i.
  double cached_log_weight(int i) const { return logw_[static_cast<std::size_t>(i)]; }
  double fresh_log_weight(int i) const;

  void add_cell(Cell z);
  void add_on_line(int i);
  void refresh_weights();
  double max_weight_drift() const;
  // Full refresh cadence in additions; 0 disables periodic refresh.
  void set_refresh_interval(int steps) { refresh_every_ = steps; }

  std::vector<Cell> member_cells() const;
  bool operator==(const GrowthState& o) const {
    return shape_ == o.shape_ && s_top_ == o.s_top_ && d_top_ == o.d_top_;
  }

 private:
  void derive_d_tops();
  void rebuild_corners();
  void update_corner(int i);
  int hook_at(int i, int j) const;

  Shape shape_;
  std::vector<int> s_top_;
  std::vector<int> d_top_;
  std::vector<char> corner_;
  std::vector<double> logw_;
  std::int64_t added_ = 0;
  int refresh_every_ = 0;
  int since_refresh_ = 0;
};

// log(h/(h-1)) for h >= 2.
double log_hook_factor(int h);

bool is_downward_closed(const std::vector<Cell>& cells);

// Natural log of the number of standard fillings of the residual diagram.
long double log_tableau_count(const GrowthState& state);
long double log_tableau_count(const Shape& shape);

// Log reverse-hook product of z evaluated on explicit top arrays (which may be
// modified copies of a state's arrays).
double log_reverse_hook_product(const Shape& shape, const std::vector<int>& s_tops,
                                const std::vector<int>& d_tops, Cell z);

}  // namespace rsn
