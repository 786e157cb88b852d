#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

// The DiLL0 formula language: multiplicatives, exponentials, and the
// additive-style sum connective with unit 0. Formulas are immutable trees
// shared via shared_ptr; Tensor/Par/Sum are flattened n-ary nodes and the
// units 1, bot, 0 are the empty Tensor, Par and Sum respectively.
//
// A formula is *canonical* when it is the normal form of the oriented
// congruence: units absorbed, same-tag children spliced, 0 annihilating
// under tensor/par/bang/quest, and every connective distributed over +.
// Canonical formulas are additive-normal: 0, a MELL formula, or a Sum of
// at least two MELL formulas. Canonicalization is *stable*: it never
// reorders children, so subterm addresses survive a local rewrite.

namespace dill {

struct FormulaError : std::runtime_error {
  explicit FormulaError(const std::string& s) : std::runtime_error(s) {}
};
// Raised when distribution over + would exceed the summand budget.
struct BudgetExceeded : FormulaError {
  explicit BudgetExceeded(const std::string& s) : FormulaError(s) {}
};
// Raised by negate() on formulas containing + or 0.
struct NonMellNegation : FormulaError {
  explicit NonMellNegation(const std::string& s) : FormulaError(s) {}
};

enum class Tag : uint8_t { Atom, NegAtom, Tensor, Par, Bang, Quest, Sum, Hole };

class Formula {
 public:
  Formula() : n_(oneNode()) {}  // default: the unit 1

  static Formula atom(std::string name);
  static Formula negAtom(std::string name);
  static Formula tensor(std::vector<Formula> kids);
  static Formula par(std::vector<Formula> kids);
  static Formula bang(Formula f);
  static Formula quest(Formula f);
  static Formula sum(std::vector<Formula> kids);
  static Formula hole();
  static Formula one() { return tensor({}); }
  static Formula bot() { return par({}); }
  static Formula zero() { return sum({}); }

  Tag tag() const { return n_->tag; }
  const std::string& name() const { return n_->name; }
  const std::vector<Formula>& kids() const { return n_->kids; }
  size_t arity() const { return n_->kids.size(); }

  bool isOne() const { return tag() == Tag::Tensor && arity() == 0; }
  bool isBot() const { return tag() == Tag::Par && arity() == 0; }
  bool isZero() const { return tag() == Tag::Sum && arity() == 0; }
  bool isAtomic() const { return tag() == Tag::Atom || tag() == Tag::NegAtom; }
  // No + / 0 / hole anywhere.
  bool isMell() const;
  bool hasHole() const;
  size_t connectiveCount() const;  // tensor/par/bang/quest/units, atoms free

  // Structural equality (exact child order).
  bool operator==(const Formula& o) const;
  bool operator!=(const Formula& o) const { return !(*this == o); }

 private:
  struct Node {
    Tag tag;
    std::string name;           // Atom / NegAtom
    std::vector<Formula> kids;  // Tensor / Par / Sum; Bang/Quest have one
  };
  std::shared_ptr<const Node> n_;
  explicit Formula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  static const std::shared_ptr<const Node>& oneNode();
};

// Subterm addressing: child indices into the stored (insertion-order) lists.
using Path = std::vector<size_t>;

// Resolves a path; throws FormulaError if it does not exist.
Formula subterm(const Formula& f, const Path& p);
// Replaces the subterm at p (no re-canonicalization).
Formula replaceSubterm(const Formula& f, const Path& p, const Formula& g);

// The unique(ly oriented) canonical representative of f's congruence class.
// Idempotent and stable. `budget` caps the number of summands produced by
// distribution; exceeding it throws BudgetExceeded.
Formula canonicalize(const Formula& f, size_t budget = 4096);
bool isCanonical(const Formula& f);

// De Morgan dual of a canonical MELL formula; involutive.
Formula negate(const Formula& f);

// A total ordering key on canonical formulas: equal keys iff the formulas
// are congruent (children compared as multisets).
std::string sortKey(const Formula& f);

// Congruence test: canonicalizes both sides and compares keys.
bool equiv(const Formula& f, const Formula& g);

// n-fold sum 1 + ... + 1 (0 for n = 0, 1 for n = 1).
Formula ones(size_t n);
// Recognizes canonical formulas of the shape ones(n).
bool isOnes(const Formula& f, size_t* n = nullptr);

// A formula with exactly one hole.
struct Context {
  Formula shape;
  bool mell = false;  // no + / 0 anywhere in the shape
  explicit Context(Formula s);
};

// Substitutes f for the hole and canonicalizes.
Formula plug(const Context& c, const Formula& f);

// Text syntax (grammar shared by every CLI input):
//   atoms [a-z][a-z0-9_]*, ~a, *, |, +, ! ?, 1, bot, 0; precedence
//   ! ? ~  >  *  >  |  >  +; parentheses allowed.
struct ParseError : FormulaError {
  size_t column;
  ParseError(const std::string& s, size_t col)
      : FormulaError(s + " at column " + std::to_string(col)), column(col) {}
};
Formula parseFormula(const std::string& text);
std::string printFormula(const Formula& f);

}  // namespace dill
