// Finite filtered probability space over a rational time grid.
//
// The filtration is stored as one partition of the outcome set per grid
// index; measurability with respect to F_{t_j} means constancy on the blocks
// of partitions[j]. Completion and right-continuity are automatic on this
// model class, so there is nothing to store for them.
#pragma once

#include "stoptime/rational.hpp"
#include "stoptime/report.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace stoptime {

// Partition as a list of blocks, each a list of outcome indices.
using Partition = std::vector<std::vector<std::size_t>>;

class IndexOutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class FilteredSpace {
 public:
  std::size_t num_outcomes() const noexcept { return labels_.size(); }
  // Number of grid points m + 1.
  std::size_t num_times() const noexcept { return grid_.size(); }
  std::size_t last_index() const noexcept { return grid_.size() - 1; }

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<Rational>& probs() const noexcept { return probs_; }
  const std::vector<Rational>& grid() const noexcept { return grid_; }
  const Rational& prob(std::size_t i) const { return probs_.at(i); }
  const Rational& time(std::size_t j) const { return grid_.at(j); }
  const Rational& horizon() const { return grid_.back(); }

  // Only lifted spaces carry null atoms; build_space rejects them.
  bool is_null(std::size_t i) const { return probs_.at(i) == 0; }

  std::size_t block_of(std::size_t j, std::size_t i) const { return block_id_.at(j).at(i); }
  const Partition& partition(std::size_t j) const { return blocks_.at(j); }
  std::span<const std::size_t> block(std::size_t j, std::size_t id) const {
    return blocks_.at(j).at(id);
  }

  std::optional<std::size_t> index_of(const std::string& label) const {
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - labels_.begin());
  }

  bool same_shape(const FilteredSpace& other) const {
    return labels_ == other.labels_ && probs_ == other.probs_ && grid_ == other.grid_ &&
           blocks_ == other.blocks_;
  }
  friend bool operator==(const FilteredSpace& a, const FilteredSpace& b) { return a.same_shape(b); }

  // Unchecked construction from canonical partitions; callers guarantee the
  // invariants. Null atoms are allowed here (lifted spaces).
  static FilteredSpace from_trusted(std::vector<std::string> labels, std::vector<Rational> probs,
                                    std::vector<Rational> grid, std::vector<Partition> partitions) {
    FilteredSpace s;
    s.labels_ = std::move(labels);
    s.probs_ = std::move(probs);
    s.grid_ = std::move(grid);
    s.blocks_.reserve(partitions.size());
    for (auto& p : partitions) s.blocks_.push_back(canonical(std::move(p)));
    s.block_id_.assign(s.blocks_.size(), std::vector<std::size_t>(s.labels_.size(), 0));
    for (std::size_t j = 0; j < s.blocks_.size(); ++j)
      for (std::size_t b = 0; b < s.blocks_[j].size(); ++b)
        for (std::size_t i : s.blocks_[j][b]) s.block_id_[j][i] = b;
    return s;
  }

  // Blocks sorted internally and ordered by their smallest outcome.
  static Partition canonical(Partition p) {
    for (auto& b : p) std::sort(b.begin(), b.end());
    std::erase_if(p, [](const auto& b) { return b.empty(); });
    std::sort(p.begin(), p.end());
    return p;
  }

 private:
  FilteredSpace() = default;

  std::vector<std::string> labels_;
  std::vector<Rational> probs_;
  std::vector<Rational> grid_;
  std::vector<Partition> blocks_;
  std::vector<std::vector<std::size_t>> block_id_;
};

// Every violated invariant of the raw inputs; empty when build_space would succeed.
inline Report check_space(const std::vector<std::string>& labels, const std::vector<Rational>& probs,
                          const std::vector<Rational>& grid, const std::vector<Partition>& partitions) {
  Report report;
  const std::size_t n = labels.size();
  if (n == 0) report.push_back({ViolationKind::ShapeMismatch, {}, {}, "no outcomes"});
  if (probs.size() != n)
    report.push_back({ViolationKind::ShapeMismatch, {}, {}, "probs length differs from outcomes"});
  {
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < n; ++i)
      if (!seen.insert(labels[i]).second)
        report.push_back({ViolationKind::ShapeMismatch, {}, {i}, "duplicate label " + labels[i]});
  }

  Rational total = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0)
      report.push_back({ViolationKind::NonPositiveProb, {}, {i}, "P = " + to_string(probs[i])});
    total += probs[i];
  }
  if (total != 1)
    report.push_back({ViolationKind::ProbsNotSummingToOne, {}, {}, "sum = " + to_string(total)});

  if (grid.empty()) {
    report.push_back({ViolationKind::GridNotIncreasing, {}, {}, "empty grid"});
  } else {
    if (grid.front() != 0)
      report.push_back({ViolationKind::GridNotIncreasing, 0, {}, "grid must start at 0"});
    for (std::size_t j = 1; j < grid.size(); ++j)
      if (grid[j] <= grid[j - 1])
        report.push_back({ViolationKind::GridNotIncreasing, j, {},
                          to_string(grid[j - 1]) + " >= " + to_string(grid[j])});
  }

  if (partitions.size() != grid.size()) {
    report.push_back({ViolationKind::ShapeMismatch, {}, {}, "need one partition per grid point"});
    return report;
  }

  bool partitions_ok = true;
  for (std::size_t j = 0; j < partitions.size(); ++j) {
    std::vector<int> hits(n, 0);
    for (const auto& block : partitions[j]) {
      if (block.empty())
        report.push_back({ViolationKind::NotAPartition, j, {}, "empty block"});
      for (std::size_t i : block) {
        if (i >= n) {
          report.push_back({ViolationKind::NotAPartition, j, {i}, "unknown outcome"});
          partitions_ok = false;
        } else {
          ++hits[i];
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      if (hits[i] != 1) {
        report.push_back({ViolationKind::NotAPartition, j, {i},
                          hits[i] == 0 ? "outcome not covered" : "outcome in several blocks"});
        partitions_ok = false;
      }
  }
  if (!partitions_ok) return report;

  for (std::size_t j = 0; j + 1 < partitions.size(); ++j) {
    std::vector<std::size_t> coarse(n);
    for (std::size_t b = 0; b < partitions[j].size(); ++b)
      for (std::size_t i : partitions[j][b]) coarse[i] = b;
    for (const auto& fine : partitions[j + 1]) {
      if (fine.empty()) continue;
      const std::size_t parent = coarse[fine.front()];
      for (std::size_t i : fine)
        if (coarse[i] != parent) {
          report.push_back({ViolationKind::RefinementViolated, j + 1, fine,
                            "block straddles two blocks of level " + std::to_string(j)});
          break;
        }
    }
  }
  return report;
}

// Throws ValidationError carrying every violated invariant.
inline FilteredSpace build_space(std::vector<std::string> labels, std::vector<Rational> probs,
                                 std::vector<Rational> grid, std::vector<Partition> partitions) {
  require_valid(check_space(labels, probs, grid, partitions));
  return FilteredSpace::from_trusted(std::move(labels), std::move(probs), std::move(grid),
                                     std::move(partitions));
}

// Outcome indices of the block of partitions[j] containing outcome i.
inline std::span<const std::size_t> atom_of(const FilteredSpace& space, std::size_t j, std::size_t i) {
  if (j >= space.num_times() || i >= space.num_outcomes())
    throw IndexOutOfRange("atom_of: index (" + std::to_string(j) + ", " + std::to_string(i) +
                          ") out of range");
  return space.block(j, space.block_of(j, i));
}

// Dense outcomes x grid table of rationals.
class Table {
 public:
  Table() = default;
  Table(std::size_t rows, std::size_t cols, Rational fill = 0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const Rational> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<Rational> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

  friend bool operator==(const Table&, const Table&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

// Process values x_{t_j}(omega_i). Adaptedness is checked separately, because
// reward processes only need to be bounded and jointly measurable.
struct Process {
  Table values;

  const Rational& operator()(std::size_t i, std::size_t j) const { return values(i, j); }
  Rational& operator()(std::size_t i, std::size_t j) { return values(i, j); }

  static Process constant(const FilteredSpace& space, const Rational& c) {
    return {Table(space.num_outcomes(), space.num_times(), c)};
  }
  // x_{t_j}(omega) = t_j.
  static Process clock(const FilteredSpace& space) {
    Process p{Table(space.num_outcomes(), space.num_times())};
    for (std::size_t i = 0; i < space.num_outcomes(); ++i)
      for (std::size_t j = 0; j < space.num_times(); ++j) p(i, j) = space.time(j);
    return p;
  }

  friend bool operator==(const Process&, const Process&) = default;
};

inline bool has_shape(const FilteredSpace& space, const Table& t) {
  return t.rows() == space.num_outcomes() && t.cols() == space.num_times();
}

namespace detail {

// Reports every (level, block) on which value(i, j) is not constant across
// the non-null atoms of the block.
template <typename ValueAt>
void check_block_constant(const FilteredSpace& space, ValueAt&& value, ViolationKind kind,
                          Report& report) {
  for (std::size_t j = 0; j < space.num_times(); ++j) {
    for (const auto& block : space.partition(j)) {
      std::optional<std::size_t> ref;
      std::vector<std::size_t> differing;
      for (std::size_t i : block) {
        if (space.is_null(i)) continue;
        if (!ref) {
          ref = i;
        } else if (value(i, j) != value(*ref, j)) {
          differing.push_back(i);
        }
      }
      if (!differing.empty()) {
        std::string detail = "differs from outcome " + std::to_string(*ref) + ":";
        for (std::size_t i : differing) detail += " " + std::to_string(i);
        report.push_back({kind, j, block, std::move(detail)});
      }
    }
  }
}

}  // namespace detail

// Empty iff the process is constant on every block of every level.
inline Report validate_adapted(const FilteredSpace& space, const Process& process) {
  Report report;
  if (!has_shape(space, process.values)) {
    report.push_back({ViolationKind::ShapeMismatch, {}, {}, "process table is not outcomes x grid"});
    return report;
  }
  detail::check_block_constant(
      space, [&](std::size_t i, std::size_t j) -> const Rational& { return process(i, j); },
      ViolationKind::NotAdapted, report);
  return report;
}

}  // namespace stoptime
