#pragma once

#include <map>
#include <string>
#include <vector>

#include "ubf/fields.hpp"

namespace ubf {

enum class LeafKind { kState, kInput, kStability };
enum class SetOp { kUnion, kIntersection };

struct ConstraintLeaf {
  std::string id;
  LeafKind kind = LeafKind::kState;
  ScalarField barrier;
  int relative_degree = 1;  // inputs and the stability leaf are fixed at 1
};

using LeafRegistry = std::map<std::string, ConstraintLeaf>;

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, std::size_t position);
  std::size_t position;
};

/// A maximal run of identical operators: `indices` are 1-based positions into
/// the operator sequence.
struct LevelRun {
  SetOp op;
  std::vector<int> indices;
};

/// Left-to-right fold of `values` under `ops` with max (union) / min
/// (intersection). ops.size() must equal values.size() - 1.
double crisp_fold(const std::vector<double>& values,
                  const std::vector<SetOp>& ops);

/// Same fold on sign tests: OR for union, AND for intersection.
bool crisp_membership(const std::vector<double>& values,
                      const std::vector<SetOp>& ops);

/// Maximal runs of identical operators, in order.
std::vector<LevelRun> level_runs(const std::vector<SetOp>& ops);

/// A level-structured constraint specification: leaves joined by a flat
/// sequence of union/intersection operators, folded strictly left-to-right.
/// There is NO operator precedence: `&` does not bind tighter than `|`.
class SpecExpr {
 public:
  SpecExpr() = default;
  SpecExpr(std::vector<ConstraintLeaf> leaves, std::vector<SetOp> ops);

  /// Parses "name (| or &) name ..." against the registry. Errors carry the
  /// character position. Leaf names are case-sensitive identifiers.
  static SpecExpr parse(const std::string& text, const LeafRegistry& registry);

  int size() const { return static_cast<int>(leaves_.size()); }
  const std::vector<ConstraintLeaf>& leaves() const { return leaves_; }
  const std::vector<SetOp>& ops() const { return ops_; }

  /// 1-based operator indices followed by union / intersection (the P and Q
  /// index sets).
  std::vector<int> union_indices() const;
  std::vector<int> intersection_indices() const;

  std::vector<LevelRun> levels() const { return level_runs(ops_); }
  int level_count() const { return static_cast<int>(levels().size()); }

  /// Ground-truth crisp evaluation of the set expression at (x, u).
  bool exact_membership(const Vec& x, const Vec& u) const;
  /// Crisp left-fold value of the leaf barriers at (x, u).
  double crisp_value(const Vec& x, const Vec& u) const;

  /// Canonical rendering "a | b & c" (single spaces around operators).
  std::string render() const;

  /// Returns a copy with the stability leaf appended by a final intersection
  /// (the stability specification always intersects the rest).
  SpecExpr with_stability_leaf(ConstraintLeaf leaf) const;

 private:
  std::vector<ConstraintLeaf> leaves_;
  std::vector<SetOp> ops_;
};

}  // namespace ubf
