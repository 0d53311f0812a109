#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gsr/graph.hpp"

namespace gsr {

struct RowMeta {
  int group_id = 0;
  bool is_hub_sum = false;
  /// Nodes whose sum is subtracted from this row before decoding its group.
  NodeSet hub_nodes;

  friend bool operator==(const RowMeta&, const RowMeta&) = default;
};

/// A block of nodes recovered together.
///
/// If `hub_sum_row` is set, the hub contribution of every row in the group is
/// taken from that measurement. Otherwise the hub nodes must belong to groups
/// with a smaller `recovery_order`, whose values are then subtracted.
struct Group {
  NodeSet members;
  std::optional<int> hub_sum_row;
  int recovery_order = 0;

  friend bool operator==(const Group&, const Group&) = default;
};

/// 0-1 measurement matrix stored by row supports, plus the decoding structure.
struct MeasurementPlan {
  int n = 0;
  int k = 1;
  std::string method;
  std::vector<NodeSet> rows;
  std::vector<RowMeta> row_meta;
  std::vector<Group> groups;
  /// False when a randomized block could not be checked at its size.
  bool verified = true;

  [[nodiscard]] std::size_t row_count() const { return rows.size(); }

  /// Appends `other`'s rows and groups, renumbering group ids and row indices.
  void append(const MeasurementPlan& other);

  /// Adds a group with one singleton row per member.
  void add_direct_group(const NodeSet& members, int recovery_order);

  /// Throws InvalidArgument if the structural invariants are violated
  /// (row ranges, hub-sum indices, disjoint groups).
  void validate() const;

  friend bool operator==(const MeasurementPlan&, const MeasurementPlan&) = default;
};

/// Row-major 0/1 matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(std::size_t(rows) * cols, 0) {}
  explicit DenseMatrix(const MeasurementPlan& plan);

  [[nodiscard]] int rows() const { return rows_; }
  [[nodiscard]] int cols() const { return cols_; }
  [[nodiscard]] int operator()(int r, int c) const { return data_[std::size_t(r) * cols_ + c]; }
  void set(int r, int c, int value) { data_[std::size_t(r) * cols_ + c] = static_cast<signed char>(value); }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<signed char> data_;
};

/// y_i = sum of x over row i.
std::vector<double> apply(const MeasurementPlan& plan, std::span<const double> x);
/// apply() plus caller-supplied per-row noise.
std::vector<double> apply_noisy(const MeasurementPlan& plan, std::span<const double> x,
                                std::span<const double> noise);

// JSON-shaped plan file and CSV matrix export.
std::string plan_to_json(const MeasurementPlan& plan);
MeasurementPlan plan_from_json(const std::string& text);
void save_plan(const std::string& path, const MeasurementPlan& plan);
MeasurementPlan load_plan(const std::string& path);

void write_matrix_csv(std::ostream& out, const DenseMatrix& m);
DenseMatrix read_matrix_csv(std::istream& in);

}  // namespace gsr
