#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dill/formula.hpp"

// DiLL0 sequent calculus: derivations as immutable trees, rule checking,
// the derivation congruence (canonical forms), eta-expansion, and the
// cut-elimination rewriting system.
//
// A sequent is a multiset of canonical MELL formulas; list order is kept
// for display only and all rule matching compares multisets through the
// formula ordering key.

namespace dill {

using Sequent = std::vector<Formula>;

bool sequentEqual(const Sequent& a, const Sequent& b);       // as multisets
std::string sequentKey(const Sequent& s);                    // multiset key
std::string printSequent(const Sequent& s);
// Removes one occurrence congruent to f (leftmost); nullopt if absent.
std::optional<size_t> findMember(const Sequent& s, const Formula& f);

enum class SRule : uint8_t {
  Ax, Par, Tensor, One, Bot, Cut,
  BangD, QuestD, BangC, QuestC, BangW, QuestW,
  Sum, Zero
};
const char* ruleName(SRule r);
std::optional<SRule> ruleFromName(const std::string& s);
size_t ruleArity(SRule r);

enum class CutMark : uint8_t { Left, Right };

struct SeqDeriv;
using SeqDerivPtr = std::shared_ptr<const SeqDeriv>;

// One rule application. `principal` indexes the principal formula in the
// conclusion (par/tensor/bot/exponentials). Par and tensor additionally
// record the two active formulas, since the flattened connectives admit
// several splits; cut records the cut formula held by the left premise
// and which premise's cut formula carries the translation mark.
struct SeqDeriv {
  SRule rule;
  Sequent conclusion;
  std::vector<SeqDerivPtr> premises;
  size_t principal = SIZE_MAX;
  Formula partA, partB;       // par/tensor split; cut: partA = cut formula
  CutMark mark = CutMark::Right;

  static SeqDerivPtr ax(Formula a);              // |- a, ~a
  static SeqDerivPtr axPair(Formula a, Formula negA);
  static SeqDerivPtr one();
  static SeqDerivPtr bangW(Formula a);           // |- !a
  static SeqDerivPtr zero(Sequent concl);
  static SeqDerivPtr bot(SeqDerivPtr p);                         // append bot
  static SeqDerivPtr par(SeqDerivPtr p, size_t posA, size_t posB);
  static SeqDerivPtr tensor(SeqDerivPtr l, size_t posA, SeqDerivPtr r, size_t posB);
  static SeqDerivPtr cut(SeqDerivPtr l, size_t posA, SeqDerivPtr r, size_t posNegA,
                         CutMark m = CutMark::Right);
  static SeqDerivPtr bangD(SeqDerivPtr p, size_t pos);
  static SeqDerivPtr questD(SeqDerivPtr p, size_t pos);
  static SeqDerivPtr questW(SeqDerivPtr p, Formula a);           // append ?a
  static SeqDerivPtr questC(SeqDerivPtr p, size_t posA, size_t posB);
  static SeqDerivPtr bangC(SeqDerivPtr l, size_t posL, SeqDerivPtr r, size_t posR);
  static SeqDerivPtr sum(SeqDerivPtr l, SeqDerivPtr r);
};

// Node addresses: premise indices from the root.
using NodePath = std::vector<size_t>;
SeqDerivPtr nodeAt(const SeqDerivPtr& d, const NodePath& p);
SeqDerivPtr replaceNode(const SeqDerivPtr& d, const NodePath& p, const SeqDerivPtr& n);

struct SeqCheckFailure {
  NodePath where;
  std::string reason;
};

// Local correctness of every node against the rule table; context splits
// verified as multiset partitions.
bool check(const SeqDerivPtr& d, SeqCheckFailure* fail = nullptr);

bool isSlice(const SeqDerivPtr& d);        // no sum / zero anywhere
bool isCutFree(const SeqDerivPtr& d);
bool isEtaExpanded(const SeqDerivPtr& d);  // every ax atomic
// zero | slice | sum(canonical, slice)
bool isCanonicalDeriv(const SeqDerivPtr& d);

size_t countRule(const SeqDerivPtr& d, SRule r);
std::string derivKey(const SeqDerivPtr& d);  // structural fingerprint
bool derivEqual(const SeqDerivPtr& a, const SeqDerivPtr& b);

// Pushes zero and sum towards the root (the oriented congruence) until the
// derivation is canonical; conclusion preserved.
SeqDerivPtr canonicalForm(const SeqDerivPtr& d);

// Rewrites every non-atomic ax by the eta-expansion relation.
SeqDerivPtr etaExpand(const SeqDerivPtr& d);

struct SequentError : FormulaError {
  explicit SequentError(const std::string& s) : FormulaError(s) {}
};

// Applies exactly one cut-elimination rewrite at the cut addressed by
// `redex`: a key case when both premises end in rules principal on the cut
// formulas, one commutative step otherwise; sum/zero premises collapse by
// the derivation congruence. Returns the rewritten derivation and the step
// name in `stepName`.
SeqDerivPtr cutStep(const SeqDerivPtr& d, const NodePath& redex,
                    std::string* stepName = nullptr);

struct CutTraceEntry {
  NodePath redex;
  std::string step;
  std::string digest;  // derivKey of the result
};
struct CutTrace {
  SeqDerivPtr initial;
  std::vector<CutTraceEntry> entries;
  bool fuelExhausted = false;
};

struct FuelExhausted : SequentError {
  CutTrace trace;
  explicit FuelExhausted(CutTrace t)
      : SequentError("fuel exhausted"), trace(std::move(t)) {}
};

// Iterates cutStep on the topmost-leftmost cut until cut-free.
// Throws FuelExhausted (carrying the partial trace) when fuel runs out.
std::pair<SeqDerivPtr, CutTrace> cutEliminate(const SeqDerivPtr& d,
                                              size_t fuel = 100000);

// Finds the topmost-leftmost cut (a cut with no cut above it, preferring
// left branches); nullopt when cut-free.
std::optional<NodePath> topmostCut(const SeqDerivPtr& d);

}  // namespace dill
