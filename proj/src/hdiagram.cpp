#include "rsn/hdiagram.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "rsn/error.hpp"

namespace rsn {

namespace {

int pmod(int a, int m) {
  const int r = a % m;
  return r < 0 ? r + m : r;
}

constexpr int kFactorTable = 1 << 16;

const std::vector<double>& factor_table() {
  static const std::vector<double> table = [] {
    std::vector<double> t(kFactorTable, 0.0);
    for (int h = 2; h < kFactorTable; ++h) t[static_cast<std::size_t>(h)] = std::log1p(1.0 / (h - 1));
    return t;
  }();
  return table;
}

}  // namespace

std::string to_string(const Cell& c) {
  return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
}

double log_hook_factor(int h) {
  if (h < 2) throw DomainError("hook factor needs h >= 2, got " + std::to_string(h));
  if (h < kFactorTable) return factor_table()[static_cast<std::size_t>(h)];
  return std::log1p(1.0 / (h - 1));
}

// ---- Shape ---------------------------------------------------------------

Shape::Shape(StaircaseShape s) : kind_(ShapeKind::staircase), n_(s.order), c_(s.center) {
  if (n_ < 2) throw ShapeError("staircase order must be >= 2");
}

Shape::Shape(CylinderShape s) : kind_(ShapeKind::cylinder), n_(s.order), c_(0) {
  if (n_ < 3) throw ShapeError("cylinder order must be >= 3");
}

int Shape::parity() const { return pmod(c_ + n_ - 1, 2); }

std::int64_t Shape::cell_count() const {
  const std::int64_t n = n_;
  return is_staircase() ? n * (n - 1) / 2 : (n - 1) * (n - 1);
}

bool Shape::contains(Cell z) const {
  if (z.y < 1 || pmod(z.x + z.y, 2) != parity()) return false;
  if (is_staircase()) return z.x + z.y <= c_ + n_ - 1 && z.y - z.x <= n_ - 1 - c_;
  return z.y <= n_ - 1;
}

void Shape::require(Cell z) const {
  if (!contains(z)) throw DomainError("cell " + to_string(z) + " is not in " + describe());
}

Cell Shape::canonical(Cell z) const {
  if (is_staircase()) return z;
  const int period = 2 * (n_ - 1);
  return {pmod(z.x + n_ - 2, period) - (n_ - 2), z.y};
}

int Shape::s_index(Cell z) const {
  if (is_staircase()) return (c_ + n_ - 1 - (z.x + z.y)) / 2;
  return pmod(n_ - 1 - (z.x + z.y), 2 * (n_ - 1)) / 2;
}

int Shape::d_index(Cell z) const {
  if (is_staircase()) return (n_ - 1 - c_ - (z.y - z.x)) / 2;
  return pmod(n_ - 1 - (z.y - z.x), 2 * (n_ - 1)) / 2;
}

bool Shape::valid_pair(int i, int j) const {
  if (i < 0 || j < 0 || i > n_ - 2 || j > n_ - 2) return false;
  return !is_staircase() || i + j <= n_ - 2;
}

int Shape::height(int i, int j) const {
  if (i + j <= n_ - 2) return n_ - 1 - i - j;
  return 2 * (n_ - 1) - i - j;
}

Cell Shape::cell_at(int i, int j) const {
  const int y = height(i, j);
  if (is_staircase()) return {c_ - i + j, y};
  return canonical({n_ - 1 - 2 * i - y, y});
}

int Shape::j_at(int i, int y) const {
  if (y < 1 || y > n_ - 1 || i < 0 || i > n_ - 2) return -1;
  if (is_staircase()) {
    const int j = n_ - 1 - i - y;
    return j >= 0 ? j : -1;
  }
  return pmod(n_ - 1 - i - y, n_ - 1);
}

int Shape::i_at(int j, int y) const {
  if (y < 1 || y > n_ - 1 || j < 0 || j > n_ - 2) return -1;
  if (is_staircase()) {
    const int i = n_ - 1 - j - y;
    return i >= 0 ? i : -1;
  }
  return pmod(n_ - 1 - j - y, n_ - 1);
}

int Shape::max_height_s(int i) const { return is_staircase() ? n_ - 1 - i : n_ - 1; }
int Shape::max_height_d(int j) const { return is_staircase() ? n_ - 1 - j : n_ - 1; }

std::vector<Cell> Shape::cells() const {
  std::vector<Cell> out;
  out.reserve(static_cast<std::size_t>(cell_count()));
  for (int i = 0; i <= n_ - 2; ++i)
    for (int j = 0; j <= n_ - 2; ++j)
      if (valid_pair(i, j)) out.push_back(cell_at(i, j));
  std::sort(out.begin(), out.end(), [](Cell a, Cell b) { return a.y != b.y ? a.y < b.y : a.x < b.x; });
  return out;
}

std::vector<Cell> Shape::bottom_row() const {
  std::vector<Cell> out;
  for (int i = 0; i <= n_ - 2; ++i) out.push_back(cell_at(i, j_at(i, 1)));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Cell> Shape::reverse_hook(Cell z) const {
  require(z);
  const int i = s_index(z);
  const int j = d_index(z);
  std::vector<Cell> out;
  for (int y = z.y + 1; y <= max_height_s(i); ++y) out.push_back(cell_at(i, j_at(i, y)));
  for (int y = z.y + 1; y <= max_height_d(j); ++y) out.push_back(cell_at(i_at(j, y), j));
  std::sort(out.begin(), out.end());
  return out;
}

bool Shape::contains_shape(const Shape& inner) const {
  if (!inner.is_staircase() || inner.parity() != parity()) return false;
  if (is_staircase()) return contains({inner.c_, inner.n_ - 1});
  return inner.n_ <= n_;
}

std::string Shape::describe() const {
  if (is_staircase()) return "T(" + std::to_string(c_) + "," + std::to_string(n_) + ")";
  return "C(" + std::to_string(n_) + ")";
}

// ---- GrowthState ---------------------------------------------------------

GrowthState::GrowthState(Shape shape)
    : shape_(shape),
      s_top_(static_cast<std::size_t>(shape.lines()), 0),
      d_top_(static_cast<std::size_t>(shape.lines()), 0),
      corner_(static_cast<std::size_t>(shape.lines()), 0),
      logw_(static_cast<std::size_t>(shape.lines()), 0.0),
      refresh_every_(shape.order()) {
  rebuild_corners();
}

GrowthState GrowthState::from_tops(Shape shape, std::vector<int> s_tops) {
  GrowthState st(shape);
  if (static_cast<int>(s_tops.size()) != shape.lines()) throw ValidationError("top array has wrong length");
  std::int64_t total = 0;
  for (int i = 0; i < shape.lines(); ++i) {
    const int t = s_tops[static_cast<std::size_t>(i)];
    if (t < 0 || t > shape.max_height_s(i)) throw ValidationError("top value out of range");
    total += t;
  }
  st.s_top_ = std::move(s_tops);
  st.added_ = total;
  st.derive_d_tops();
  for (int i = 0; i < shape.lines(); ++i) {
    for (int y = 2; y <= st.s_top_[static_cast<std::size_t>(i)]; ++y) {
      const int j = shape.j_at(i, y);
      const int il = shape.i_at(j, y - 1);
      if (st.s_top_[static_cast<std::size_t>(il)] < y - 1) throw ValidationError("tops do not describe a downward-closed set");
    }
  }
  st.rebuild_corners();
  return st;
}

GrowthState GrowthState::from_cells(Shape shape, const std::vector<Cell>& cells) {
  std::unordered_set<Cell, CellHash> set;
  for (Cell z : cells) {
    shape.require(z);
    if (!set.insert(shape.canonical(z)).second) throw ValidationError("duplicate cell " + to_string(z));
  }
  for (Cell z : set) {
    if (z.y == 1) continue;
    if (!set.count(shape.canonical({z.x - 1, z.y - 1})) || !set.count(shape.canonical({z.x + 1, z.y - 1})))
      throw ValidationError("cell set is not downward closed at " + to_string(z));
  }
  std::vector<int> tops(static_cast<std::size_t>(shape.lines()), 0);
  for (Cell z : set) {
    auto& t = tops[static_cast<std::size_t>(shape.s_index(z))];
    t = std::max(t, z.y);
  }
  return from_tops(shape, std::move(tops));
}

void GrowthState::derive_d_tops() {
  std::fill(d_top_.begin(), d_top_.end(), 0);
  for (int i = 0; i < shape_.lines(); ++i)
    for (int y = 1; y <= s_top_[static_cast<std::size_t>(i)]; ++y) {
      auto& d = d_top_[static_cast<std::size_t>(shape_.j_at(i, y))];
      d = std::max(d, y);
    }
}

int GrowthState::max_height() const {
  int m = 0;
  for (int t : s_top_) m = std::max(m, t);
  return m;
}

bool GrowthState::is_member(Cell z) const {
  if (!shape_.contains(z)) return false;
  return z.y <= s_top_[static_cast<std::size_t>(shape_.s_index(z))];
}

bool GrowthState::is_corner(Cell z) const {
  if (!shape_.contains(z)) return false;
  const int i = shape_.s_index(z);
  return corner_on(i) && s_top_[static_cast<std::size_t>(i)] + 1 == z.y;
}

int GrowthState::hook_at(int i, int j) const {
  const int y = shape_.height(i, j);
  return 2 * y - 1 - s_top_[static_cast<std::size_t>(i)] - d_top_[static_cast<std::size_t>(j)];
}

int GrowthState::hook_length(Cell z) const {
  shape_.require(z);
  if (is_member(z)) throw DomainError("cell " + to_string(z) + " is already in the state");
  return hook_at(shape_.s_index(z), shape_.d_index(z));
}

std::vector<Cell> GrowthState::corners() const {
  std::vector<Cell> out;
  for (int i = 0; i < shape_.lines(); ++i)
    if (corner_on(i)) out.push_back(corner_cell(i));
  return out;
}

void GrowthState::corner_lines(std::vector<int>& out) const {
  out.clear();
  for (int i = 0; i < shape_.lines(); ++i)
    if (corner_on(i)) out.push_back(i);
}

int GrowthState::corner_count() const {
  return static_cast<int>(std::count(corner_.begin(), corner_.end(), 1));
}

Cell GrowthState::corner_cell(int i) const {
  const int y = s_top_[static_cast<std::size_t>(i)] + 1;
  return shape_.cell_at(i, shape_.j_at(i, y));
}

double GrowthState::fresh_log_weight(int i) const {
  const int lines = shape_.lines();
  const int y = s_top_[static_cast<std::size_t>(i)] + 1;
  const int j = shape_.j_at(i, y);
  const int top_i = s_top_[static_cast<std::size_t>(i)];
  const int top_j = d_top_[static_cast<std::size_t>(j)];
  double sum = 0.0;
  int jw = j;
  for (int yw = y + 1; yw <= shape_.max_height_s(i); ++yw) {
    if (--jw < 0) jw += lines;
    sum += log_hook_factor(2 * yw - 1 - top_i - d_top_[static_cast<std::size_t>(jw)]);
  }
  int iw = i;
  for (int yw = y + 1; yw <= shape_.max_height_d(j); ++yw) {
    if (--iw < 0) iw += lines;
    sum += log_hook_factor(2 * yw - 1 - s_top_[static_cast<std::size_t>(iw)] - top_j);
  }
  return sum;
}

void GrowthState::update_corner(int i) {
  const auto k = static_cast<std::size_t>(i);
  const int y = s_top_[k] + 1;
  corner_[k] = 0;
  if (y > shape_.max_height_s(i)) return;
  const int j = shape_.j_at(i, y);
  if (j < 0 || d_top_[static_cast<std::size_t>(j)] != y - 1) return;
  corner_[k] = 1;
  logw_[k] = fresh_log_weight(i);
}

void GrowthState::rebuild_corners() {
  for (int i = 0; i < shape_.lines(); ++i) update_corner(i);
  since_refresh_ = 0;
}

void GrowthState::refresh_weights() { rebuild_corners(); }

double GrowthState::max_weight_drift() const {
  double drift = 0.0;
  for (int i = 0; i < shape_.lines(); ++i)
    if (corner_on(i)) drift = std::max(drift, std::abs(logw_[static_cast<std::size_t>(i)] - fresh_log_weight(i)));
  return drift;
}

void GrowthState::add_cell(Cell z) {
  shape_.require(z);
  if (!is_corner(z)) throw PreconditionError("cell " + to_string(z) + " is not addable");
  add_on_line(shape_.s_index(z));
}

void GrowthState::add_on_line(int iu) {
  if (iu < 0 || iu >= shape_.lines() || !corner_on(iu)) throw PreconditionError("no addable cell on that line");
  const int lines = shape_.lines();
  const int yu = s_top_[static_cast<std::size_t>(iu)] + 1;
  const int ju = shape_.j_at(iu, yu);

  // Every cell above u on either up-diagonal loses one from its hook. A corner whose
  // reverse hook contains such a cell sits below it on the cell's other diagonal.
  int jw = ju;
  for (int yw = yu + 1; yw <= shape_.max_height_s(iu); ++yw) {
    if (--jw < 0) jw += lines;
    const int dt = d_top_[static_cast<std::size_t>(jw)];
    const int yc = dt + 1;
    if (yc >= yw) continue;
    const int ic = shape_.i_at(jw, yc);
    if (!corner_on(ic) || s_top_[static_cast<std::size_t>(ic)] != yc - 1) continue;
    const int hw = 2 * yw - 1 - (yu - 1) - dt;
    logw_[static_cast<std::size_t>(ic)] += log_hook_factor(hw - 1) - log_hook_factor(hw);
  }
  int iw = iu;
  for (int yw = yu + 1; yw <= shape_.max_height_d(ju); ++yw) {
    if (--iw < 0) iw += lines;
    const int st = s_top_[static_cast<std::size_t>(iw)];
    if (!corner_on(iw) || st + 1 >= yw) continue;
    const int hw = 2 * yw - 1 - st - (yu - 1);
    logw_[static_cast<std::size_t>(iw)] += log_hook_factor(hw - 1) - log_hook_factor(hw);
  }

  s_top_[static_cast<std::size_t>(iu)] = yu;
  d_top_[static_cast<std::size_t>(ju)] = yu;
  ++added_;
  if (refresh_every_ > 0 && ++since_refresh_ >= refresh_every_) {
    rebuild_corners();
    return;
  }
  update_corner(iu);
  if (yu + 1 <= shape_.max_height_d(ju)) update_corner(shape_.i_at(ju, yu + 1));
}

std::vector<Cell> GrowthState::member_cells() const {
  std::vector<Cell> out;
  out.reserve(static_cast<std::size_t>(added_));
  for (int i = 0; i < shape_.lines(); ++i)
    for (int y = 1; y <= s_top_[static_cast<std::size_t>(i)]; ++y) out.push_back(shape_.cell_at(i, shape_.j_at(i, y)));
  std::sort(out.begin(), out.end());
  return out;
}

// ---- free functions ------------------------------------------------------

bool is_downward_closed(const std::vector<Cell>& cells) {
  std::unordered_set<Cell, CellHash> set(cells.begin(), cells.end());
  for (Cell z : cells) {
    if (z.y < 1) return false;
    if (z.y > 1 && (!set.count({z.x - 1, z.y - 1}) || !set.count({z.x + 1, z.y - 1}))) return false;
  }
  return true;
}

long double log_tableau_count(const GrowthState& state) {
  const Shape& shape = state.shape();
  if (!shape.is_staircase()) throw DomainError("tableau counts are defined for staircase residuals only");
  // Neumaier-compensated sum of -log h over residual cells.
  long double sum = lgammal(static_cast<long double>(state.residual_size()) + 1.0L);
  long double comp = 0.0L;
  for (int i = 0; i < shape.lines(); ++i)
    for (int j = 0; j < shape.lines(); ++j) {
      if (!shape.valid_pair(i, j) || state.is_member(shape.cell_at(i, j))) continue;
      const long double term = -logl(static_cast<long double>(state.hook_length(shape.cell_at(i, j))));
      const long double t = sum + term;
      if (fabsl(sum) >= fabsl(term))
        comp += (sum - t) + term;
      else
        comp += (term - t) + sum;
      sum = t;
    }
  return sum + comp;
}

long double log_tableau_count(const Shape& shape) { return log_tableau_count(GrowthState(shape)); }

double log_reverse_hook_product(const Shape& shape, const std::vector<int>& s_tops, const std::vector<int>& d_tops,
                                Cell z) {
  shape.require(z);
  const int lines = shape.lines();
  const int i = shape.s_index(z);
  const int j = shape.d_index(z);
  double sum = 0.0;
  int jw = j;
  for (int yw = z.y + 1; yw <= shape.max_height_s(i); ++yw) {
    if (--jw < 0) jw += lines;
    const int h = 2 * yw - 1 - s_tops[static_cast<std::size_t>(i)] - d_tops[static_cast<std::size_t>(jw)];
    if (h < 2) return HUGE_VAL;
    sum += log_hook_factor(h);
  }
  int iw = i;
  for (int yw = z.y + 1; yw <= shape.max_height_d(j); ++yw) {
    if (--iw < 0) iw += lines;
    const int h = 2 * yw - 1 - s_tops[static_cast<std::size_t>(iw)] - d_tops[static_cast<std::size_t>(j)];
    if (h < 2) return HUGE_VAL;
    sum += log_hook_factor(h);
  }
  return sum;
}

}  // namespace rsn
