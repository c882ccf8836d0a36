// Formulas and sequents of unit-free multiplicative-additive linear logic.
//
// Formulas are in negation normal form: negation (~) applies to atoms only,
// and the connectives are * (tensor), | (par), & (with), + (plus).
// A sequent is a non-empty ordered list of formulas; its leaves (literal
// occurrences) are numbered 1..n left to right across the whole sequent.
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mall {

// ---------------------------------------------------------------- literals

struct Literal {
  std::string atom;  // [a-z][a-z0-9_]*
  bool positive = true;

  bool operator==(const Literal& o) const {
    return atom == o.atom && positive == o.positive;
  }
  bool operator!=(const Literal& o) const { return !(*this == o); }
};

inline Literal negate(const Literal& l) { return {l.atom, !l.positive}; }

// Two literals are dual iff same atom, opposite polarity.
inline bool dual_pair(const Literal& a, const Literal& b) {
  return a.atom == b.atom && a.positive != b.positive;
}

std::string render(const Literal& l);

// ---------------------------------------------------------------- formulas

enum class Conn { Tensor, Par, With, Plus };

// Dual connective under De Morgan: * <-> |, & <-> +.
Conn dual(Conn c);
char conn_char(Conn c);          // '*', '|', '&', '+'
const char* conn_name(Conn c);   // "tensor", "par", "with", "plus"

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Immutable tree. Leaf iff left == nullptr.
struct Formula {
  Literal lit;      // meaningful for leaves only
  Conn conn{};      // meaningful for internal vertices only
  FormulaPtr left;  // null for leaves
  FormulaPtr right;

  bool is_leaf() const { return left == nullptr; }
};

FormulaPtr make_leaf(Literal l);
FormulaPtr make_leaf(std::string atom, bool positive = true);
FormulaPtr make_bin(Conn c, FormulaPtr l, FormulaPtr r);

// Structural equality.
bool equal(const FormulaPtr& a, const FormulaPtr& b);

// De Morgan dual (negation normal form is preserved).
FormulaPtr negate(const FormulaPtr& f);

// Number of literal occurrences.
int leaf_count(const FormulaPtr& f);
// Literal occurrences, left to right.
std::vector<Literal> leaves(const FormulaPtr& f);
// Leaves plus internal connective vertices.
int vertex_count(const FormulaPtr& f);

// Canonical form: every compound formula is parenthesised, literals are
// bare; e.g. "(b + ~a)". Reparses to a structurally equal formula.
std::string render(const FormulaPtr& f);

// ----------------------------------------------------------------- parsing

// Grammar (all four connectives have equal precedence and require explicit
// parentheses for nesting):
//   formula := item | item BINOP item
//   item    := literal | '(' formula ')'
//   literal := '~'? atom
// i.e. an unparenthesised formula has at most one binary connective.
struct ParseError {
  std::string message;
  size_t position = 0;  // byte offset into the input
};

// Returns the formula or a parse error.
struct FormulaParseResult {
  FormulaPtr formula;  // null on error
  std::optional<ParseError> error;
};
FormulaParseResult parse_formula(std::string_view text);

// Parses one formula starting at text[pos] (after leading whitespace) and
// advances pos past it; trailing input is left unconsumed. Lets embedding
// grammars (proof s-expressions) reuse the formula syntax.
FormulaParseResult parse_formula_prefix(std::string_view text, size_t& pos);

// ---------------------------------------------------------------- sequents

// Ordered, non-empty list of formulas. Leaf ids are 1-based and global:
// formula k's leaves follow formula k-1's.
struct Sequent {
  std::vector<FormulaPtr> formulas;

  int size() const { return static_cast<int>(formulas.size()); }
  int leaf_count() const;

  // First (1-based) leaf id of formula index fi (0-based), and one past last.
  int leaf_begin(int fi) const;
  int leaf_end(int fi) const;

  // 0-based formula index owning 1-based leaf id; -1 if out of range.
  int formula_of_leaf(int leaf) const;

  // Literal at 1-based leaf id.
  const Literal& literal_at(int leaf) const;
};

bool equal(const Sequent& a, const Sequent& b);
std::string render(const Sequent& s);

// Comma-separated list of formulas; must be non-empty.
struct SequentParseResult {
  std::optional<Sequent> sequent;
  std::optional<ParseError> error;
};
SequentParseResult parse_sequent(std::string_view text);

// True iff leaves x and y (1-based, distinct) lie in the same formula and
// their least common ancestor vertex is an additive connective (& or +).
// This is the conflict relation of the sequent's coherence space; leaves of
// different formulas never additively join.
bool additive_join(const Sequent& s, int x, int y);

// Path of the 1-based leaf inside its own formula: string over {'0','1'}
// ('0' = left child). Empty string if the formula is a bare literal.
std::string leaf_path(const Sequent& s, int leaf);

}  // namespace mall
