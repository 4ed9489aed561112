#include "rsn/oracle.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <numeric>
#include <sstream>

#include "rsn/error.hpp"

namespace rsn {

namespace {

Shape enumeration_shape(int order) {
  if (order < 2) throw DomainError("order must be >= 2");
  if (order > kMaxEnumerationOrder) throw BudgetError("enumeration is capped at order " + std::to_string(kMaxEnumerationOrder));
  return Shape::staircase(0, order);
}

}  // namespace

void for_each_filling(int order, const std::function<void(const std::vector<Cell>&)>& visit) {
  const Shape shape = enumeration_shape(order);
  const std::vector<Cell> cells = shape.cells();
  const int n = static_cast<int>(cells.size());
  std::vector<std::uint32_t> need(cells.size(), 0);
  for (int k = 0; k < n; ++k) {
    const Cell z = cells[static_cast<std::size_t>(k)];
    if (z.y == 1) continue;
    for (int m = 0; m < n; ++m) {
      const Cell w = cells[static_cast<std::size_t>(m)];
      if (w.y == z.y - 1 && (w.x == z.x - 1 || w.x == z.x + 1)) need[static_cast<std::size_t>(k)] |= 1u << m;
    }
  }
  std::vector<int> chosen(cells.size());
  std::vector<int> cursor(cells.size() + 1, 0);
  std::vector<Cell> order_cells(cells.size());
  std::uint32_t mask = 0;
  int depth = 0;
  auto pop = [&] {
    --depth;
    mask &= ~(1u << chosen[static_cast<std::size_t>(depth)]);
    cursor[static_cast<std::size_t>(depth)] = chosen[static_cast<std::size_t>(depth)] + 1;
  };
  for (;;) {
    if (depth == n) {
      for (int k = 0; k < n; ++k) order_cells[static_cast<std::size_t>(k)] = cells[static_cast<std::size_t>(chosen[static_cast<std::size_t>(k)])];
      visit(order_cells);
      pop();
      continue;
    }
    int k = cursor[static_cast<std::size_t>(depth)];
    while (k < n && (((mask >> k) & 1u) != 0 || (need[static_cast<std::size_t>(k)] & mask) != need[static_cast<std::size_t>(k)])) ++k;
    if (k == n) {
      if (depth == 0) break;
      pop();
      continue;
    }
    chosen[static_cast<std::size_t>(depth)] = k;
    mask |= 1u << k;
    ++depth;
    cursor[static_cast<std::size_t>(depth)] = 0;
  }
}

std::uint64_t count_fillings(int order) {
  std::uint64_t count = 0;
  for_each_filling(order, [&](const std::vector<Cell>&) { ++count; });
  return count;
}

std::vector<StandardFilling> enumerate_fillings(int order) {
  const Shape shape = enumeration_shape(order);
  std::vector<StandardFilling> out;
  for_each_filling(order, [&](const std::vector<Cell>& cells) { out.push_back(StandardFilling::from_order(shape, cells)); });
  return out;
}

std::vector<GrowthState> enumerate_states(const Shape& shape) {
  if (!shape.is_staircase() || shape.order() > 8) throw BudgetError("state enumeration needs a staircase of order <= 8");
  const int lines = shape.lines();
  std::vector<GrowthState> out;
  std::vector<int> tops(static_cast<std::size_t>(lines), 0);
  for (;;) {
    try {
      out.push_back(GrowthState::from_tops(shape, tops));
    } catch (const ValidationError&) {
    }
    int i = 0;
    while (i < lines && tops[static_cast<std::size_t>(i)] == shape.max_height_s(i)) tops[static_cast<std::size_t>(i++)] = 0;
    if (i == lines) break;
    ++tops[static_cast<std::size_t>(i)];
  }
  return out;
}

BigInt exact_tableau_count(const GrowthState& state) {
  const Shape& shape = state.shape();
  if (!shape.is_staircase()) throw DomainError("tableau counts are defined for staircase residuals only");
  BigInt num = 1;
  for (std::int64_t k = 2; k <= state.residual_size(); ++k) num *= k;
  BigInt den = 1;
  for (const Cell z : shape.cells())
    if (!state.is_member(z)) den *= state.hook_length(z);
  return num / den;
}

BigInt exact_tableau_count(const Shape& shape) { return exact_tableau_count(GrowthState(shape)); }

Rational exact_corner_weight(const GrowthState& state, Cell z) {
  if (!state.is_corner(z)) throw PreconditionError("cell " + to_string(z) + " is not a corner");
  GrowthState next = state;
  next.add_cell(z);
  return Rational(exact_tableau_count(next), exact_tableau_count(state));
}

Rational ExactDistribution::total() const {
  Rational s = 0;
  for (const auto& o : outcomes) s += o.probability;
  return s;
}

ExactDistribution exact_first_swap_distribution(int order) {
  if (order < 2) throw DomainError("order must be >= 2");
  if (order > kMaxExactOrder) throw BudgetError("exact first-swap law is capped at order " + std::to_string(kMaxExactOrder));
  const GrowthState empty(Shape::staircase(0, order));
  const BigInt whole = exact_tableau_count(empty);
  ExactDistribution out;
  for (const Cell z : empty.shape().bottom_row()) {
    GrowthState next = empty;
    next.add_cell(z);
    const std::string label = to_string(z);
    out.outcomes.push_back({label, fnv1a(label), Rational(exact_tableau_count(next), whole)});
  }
  return out;
}

std::string to_csv(const ExactDistribution& d) {
  std::ostringstream os;
  os << "digest,label,numerator,denominator\n";
  for (const auto& o : d.outcomes)
    os << std::hex << o.digest << std::dec << ",\"" << o.label << "\"," << numerator(o.probability) << ','
       << denominator(o.probability) << '\n';
  return os.str();
}

ChiSquare chi_square(const std::vector<std::int64_t>& observed, const std::vector<double>& probabilities,
                     double min_expected) {
  if (observed.size() != probabilities.size() || observed.empty()) throw DomainError("count and probability vectors differ");
  const double total = static_cast<double>(std::accumulate(observed.begin(), observed.end(), std::int64_t{0}));
  if (!(total > 0)) throw PreconditionError("chi-square needs a positive total count");
  std::vector<std::size_t> idx(observed.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return probabilities[a] < probabilities[b]; });
  // Ascending by expected count: small cells accumulate until the pool is large enough.
  std::vector<std::pair<double, double>> cells;  // (observed, expected)
  double pool_o = 0.0;
  double pool_e = 0.0;
  for (std::size_t k : idx) {
    pool_o += static_cast<double>(observed[k]);
    pool_e += total * probabilities[k];
    if (pool_e >= min_expected) {
      cells.emplace_back(pool_o, pool_e);
      pool_o = pool_e = 0.0;
    }
  }
  if (pool_e > 0.0 || pool_o > 0.0) {
    if (cells.empty()) {
      cells.emplace_back(pool_o, pool_e);
    } else {
      cells.back().first += pool_o;
      cells.back().second += pool_e;
    }
  }
  double stat = 0.0;
  for (const auto& [o, e] : cells) {
    if (e <= 0.0) {
      if (o > 0.0) return {HUGE_VAL, static_cast<int>(cells.size()) - 1};
      continue;
    }
    stat += (o - e) * (o - e) / e;
  }
  return {stat, static_cast<int>(cells.size()) - 1};
}

double chi_square_quantile(double p, int dof) {
  if (dof < 1) throw DomainError("chi-square needs at least one degree of freedom");
  return boost::math::quantile(boost::math::chi_squared(dof), p);
}

int brute_hook_length(const Shape& shape, const std::unordered_set<Cell, CellHash>& members, Cell z) {
  shape.require(z);
  const Cell c = shape.canonical(z);
  if (members.count(c)) throw DomainError("cell " + to_string(z) + " is a member");
  int h = 1;
  for (const int dx : {-1, 1}) {
    for (Cell w{c.x + dx, c.y - 1}; w.y >= 1; w = {w.x + dx, w.y - 1}) {
      const Cell cw = shape.canonical(w);
      if (!shape.contains(cw) || members.count(cw)) break;
      ++h;
    }
  }
  return h;
}

int brute_hook_length(const GrowthState& state, Cell z) {
  const auto cells = state.member_cells();
  return brute_hook_length(state.shape(), std::unordered_set<Cell, CellHash>(cells.begin(), cells.end()), z);
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t digest(const std::vector<int>& values) {
  std::string s;
  for (int v : values) s += std::to_string(v) + ',';
  return fnv1a(s);
}

}  // namespace rsn
