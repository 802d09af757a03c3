#include "ubf/spec_lang.hpp"

#include <cctype>

namespace ubf {

ParseError::ParseError(const std::string& what, std::size_t pos)
    : std::runtime_error(what + " (at position " + std::to_string(pos) + ")"),
      position(pos) {}

double crisp_fold(const std::vector<double>& values,
                  const std::vector<SetOp>& ops) {
  if (values.empty()) throw std::invalid_argument("crisp_fold: no values");
  if (ops.size() != values.size() - 1) {
    throw std::invalid_argument("crisp_fold: operator count mismatch");
  }
  double acc = values[0];
  for (std::size_t i = 0; i < ops.size(); ++i) {
    acc = ops[i] == SetOp::kUnion ? std::max(acc, values[i + 1])
                                  : std::min(acc, values[i + 1]);
  }
  return acc;
}

bool crisp_membership(const std::vector<double>& values,
                      const std::vector<SetOp>& ops) {
  if (values.empty()) throw std::invalid_argument("crisp_membership: no values");
  if (ops.size() != values.size() - 1) {
    throw std::invalid_argument("crisp_membership: operator count mismatch");
  }
  bool acc = values[0] >= 0.0;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const bool next = values[i + 1] >= 0.0;
    acc = ops[i] == SetOp::kUnion ? (acc || next) : (acc && next);
  }
  return acc;
}

std::vector<LevelRun> level_runs(const std::vector<SetOp>& ops) {
  std::vector<LevelRun> runs;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (runs.empty() || runs.back().op != ops[i]) {
      runs.push_back({ops[i], {}});
    }
    runs.back().indices.push_back(static_cast<int>(i) + 1);
  }
  return runs;
}

SpecExpr::SpecExpr(std::vector<ConstraintLeaf> leaves, std::vector<SetOp> ops)
    : leaves_(std::move(leaves)), ops_(std::move(ops)) {
  if (leaves_.empty()) {
    throw std::invalid_argument("SpecExpr: at least one leaf required");
  }
  if (ops_.size() != leaves_.size() - 1) {
    throw std::invalid_argument("SpecExpr: operator count mismatch");
  }
}

SpecExpr SpecExpr::parse(const std::string& text, const LeafRegistry& registry) {
  std::vector<ConstraintLeaf> leaves;
  std::vector<SetOp> ops;
  std::size_t i = 0;
  const std::size_t n = text.size();
  auto skip_ws = [&] {
    while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  bool expect_leaf = true;
  while (true) {
    skip_ws();
    if (i == n) break;
    if (expect_leaf) {
      const std::size_t start = i;
      if (!(std::isalpha(static_cast<unsigned char>(text[i])) ||
            text[i] == '_')) {
        throw ParseError("expected a leaf name", i);
      }
      while (i < n && (std::isalnum(static_cast<unsigned char>(text[i])) ||
                       text[i] == '_')) {
        ++i;
      }
      const std::string name = text.substr(start, i - start);
      const auto it = registry.find(name);
      if (it == registry.end()) {
        throw ParseError("unknown leaf '" + name + "'", start);
      }
      leaves.push_back(it->second);
    } else {
      if (text[i] == '|') {
        ops.push_back(SetOp::kUnion);
      } else if (text[i] == '&') {
        ops.push_back(SetOp::kIntersection);
      } else {
        throw ParseError("expected '|' or '&'", i);
      }
      ++i;
    }
    expect_leaf = !expect_leaf;
  }
  if (leaves.empty()) throw ParseError("empty specification", 0);
  if (expect_leaf) throw ParseError("trailing operator", n);
  return SpecExpr(std::move(leaves), std::move(ops));
}

std::vector<int> SpecExpr::union_indices() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    if (ops_[i] == SetOp::kUnion) out.push_back(static_cast<int>(i) + 1);
  }
  return out;
}

std::vector<int> SpecExpr::intersection_indices() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    if (ops_[i] == SetOp::kIntersection) out.push_back(static_cast<int>(i) + 1);
  }
  return out;
}

bool SpecExpr::exact_membership(const Vec& x, const Vec& u) const {
  std::vector<double> values;
  values.reserve(leaves_.size());
  for (const auto& leaf : leaves_) values.push_back(leaf.barrier.value(x, u));
  return crisp_membership(values, ops_);
}

double SpecExpr::crisp_value(const Vec& x, const Vec& u) const {
  std::vector<double> values;
  values.reserve(leaves_.size());
  for (const auto& leaf : leaves_) values.push_back(leaf.barrier.value(x, u));
  return crisp_fold(values, ops_);
}

std::string SpecExpr::render() const {
  std::string out = leaves_[0].id;
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    out += ops_[i] == SetOp::kUnion ? " | " : " & ";
    out += leaves_[i + 1].id;
  }
  return out;
}

SpecExpr SpecExpr::with_stability_leaf(ConstraintLeaf leaf) const {
  auto leaves = leaves_;
  auto ops = ops_;
  leaf.kind = LeafKind::kStability;
  leaves.push_back(std::move(leaf));
  ops.push_back(SetOp::kIntersection);
  return SpecExpr(std::move(leaves), std::move(ops));
}

}  // namespace ubf
