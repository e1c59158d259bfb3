#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ltlmon {

enum class FormulaKind {
  Atom,
  True,
  False,
  Not,
  And,
  Or,
  Next,
  Until,
  Release,
  Eventually,
  Always,
};

/// Immutable LTL syntax tree. Copies share structure.
class Formula {
 public:
  static Formula atom(std::string name);
  static Formula top();
  static Formula bottom();
  static Formula negation(Formula f);
  static Formula conjunction(Formula lhs, Formula rhs);
  static Formula disjunction(Formula lhs, Formula rhs);
  static Formula next(Formula f);
  static Formula until(Formula lhs, Formula rhs);
  static Formula release(Formula lhs, Formula rhs);
  static Formula eventually(Formula f);
  static Formula always(Formula f);

  FormulaKind kind() const { return node_->kind; }
  const std::string& name() const { return node_->name; }
  std::size_t arity() const { return node_->children.size(); }
  const Formula& child(std::size_t i) const { return node_->children.at(i); }
  const Formula& lhs() const { return child(0); }
  const Formula& rhs() const { return child(1); }

  /// Number of nodes in the tree.
  std::size_t size() const;
  /// Sorted, deduplicated atom names.
  std::vector<std::string> atoms() const;

  std::string to_string() const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

 private:
  struct Node {
    FormulaKind kind;
    std::string name;
    std::vector<Formula> children;
  };
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula make(FormulaKind kind, std::vector<Formula> children, std::string name = {});

  std::shared_ptr<const Node> node_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(what + " at line " + std::to_string(line) + ", column " +
                           std::to_string(column)),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Operators, loosest first: "->" (right assoc), "|"/OR, "&"/AND, U/R (right assoc),
// then the prefix operators !, NOT, X, F, G.
Formula parse_ltl(std::string_view text);

/// Negation normal form: negations only in front of atoms. F and G are kept.
Formula to_nnf(const Formula& f);
/// Language-preserving rewrites on an NNF formula (constant folding, F F a = F a,
/// G G a = G a, F(a U b) = F b, G(a R b) = G b, ...). The result is again in NNF.
Formula simplify(const Formula& nnf);

}  // namespace ltlmon
