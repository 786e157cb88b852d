#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dill/formula.hpp"

// The deep inference system SDDI over sliced states. A state is the list
// of MELL summands of an additive-normal formula; the empty list is 0.
// MELL rules rewrite one subterm of one slice; the + / 0 rules act on
// whole slices (a deep +^ at C[X] is a slice duplication, since
// C[X+X] ~ C[X]+C[X]).
//
// Because tensor/par are flattened, a redex may be a sub-multiset of a
// node's children rather than a whole node; steps carry the selection.

namespace dill {

using SliceState = std::vector<Formula>;  // each slice canonical MELL

struct DeepError : FormulaError {
  explicit DeepError(const std::string& s) : FormulaError(s) {}
};

enum class DRule : uint8_t {
  AiD, AiU, S,
  BdD, QdD, BdU, QdU,
  BcD, QcD, BcU, QcU,
  BwD, QwD, BwU, QwU,
  ID, IU,  // macro (non-atomic) interaction rules
};
const char* ruleName(DRule r);
std::optional<DRule> deepRuleFromName(const std::string& s);
bool isDownRule(DRule r);  // in the down fragment (ai-down, s, d/c/w-down)
bool isUpModal(DRule r);   // bdU qdU bcU qcU bwU qwU
bool isDownModal(DRule r);

struct MellStep {
  size_t slice = 0;
  Path path;                    // addressed node
  DRule rule = DRule::AiD;
  std::string atom;             // AiD / AiU
  Formula arg;                  // BwD/QwD: inserted body; ID/IU: the formula
  std::vector<size_t> subset;   // AiU/BcD/QcD/IU: the selected children;
                                // BdD/QdD: optional child sub-multiset
  size_t at = SIZE_MAX;         // insertion position (AiD/BwD/QwD/ID)
  std::vector<size_t> tensorSubset;  // S: children kept on the tensor side
  size_t parChild = SIZE_MAX;        // S: the par child switched into
  std::vector<size_t> moved;         // S: par children moved in
};

struct DupSlice { size_t slice; };
struct MergeSlices { size_t i, j; };   // slices must be congruent; keeps i
struct AddSlice { Formula formula; };  // appended
struct DelSlice { size_t slice; };

using DeepStep = std::variant<MellStep, DupSlice, MergeSlices, AddSlice, DelSlice>;

std::string printStep(const DeepStep& s);

struct DeepDerivation {
  SliceState premise;
  std::vector<DeepStep> steps;
};

// Applies one step; throws DeepError("rule not applicable: ...") when the
// preconditions fail. The result is canonical and touches only the
// addressed slice (for MELL steps).
SliceState applyStep(const SliceState& s, const DeepStep& step);

// Inserts `factor` as a tensor (par) child of the node at `path`, through
// the unit isomorphism; returns the new state and the locus of the factor.
struct InsertResult {
  SliceState state;
  Path factorPath;  // in the rewritten slice
};
InsertResult insertFactor(const SliceState& s, size_t slice, const Path& path,
                          size_t at, const Formula& factor, bool intoPar);

struct DeepCheckFailure {
  size_t step;
  std::string reason;
};
// Folds applyStep over the steps; the conclusion lands in *conclusion.
bool checkDerivation(const DeepDerivation& d, SliceState* conclusion = nullptr,
                     DeepCheckFailure* fail = nullptr);
SliceState conclusionOf(const DeepDerivation& d);  // throws on bad steps

bool stateEquiv(const SliceState& a, const SliceState& b);  // slicewise, in order
std::string stateKey(const SliceState& s);
Formula stateFormula(const SliceState& s);  // the Sum-of-slices reading
std::string printState(const SliceState& s);

// Vertical composition: conclusion of d1 must match the premise of d2
// slicewise up to congruence.
DeepDerivation composeVertical(const DeepDerivation& d1, const DeepDerivation& d2);

enum class HComp : uint8_t { Tensor, Par, Plus };
// Horizontal composition: premise is the (distributed) product of the two
// premises; d1's steps are replayed inside every product cell, then d2's.
DeepDerivation composeHorizontal(HComp op, const DeepDerivation& d1,
                                 const DeepDerivation& d2);

// Replays `d` with its slice 0 embedded at `locus` of `host` slice
// `hostSlice`, inside the fixed MELL context given by that position.
// `d` must start single-slice; its premise must be congruent to the
// subformula selected by (path, subset). Appends the embedded steps to
// `out` and returns the updated host state.
struct EmbedLocus {
  size_t slice = 0;
  Path path;
  std::vector<size_t> subset;  // sub-multiset of the node's children; empty = whole
};
SliceState applyDeepInContext(const SliceState& host, const EmbedLocus& locus,
                              const DeepDerivation& d, std::vector<DeepStep>& out);

// Adjusts the premise from ones(n) to 1 by prepending slice steps.
DeepDerivation bigOne(const DeepDerivation& d);

// Lemma-1 gadgets: 1 -> f par ~f in {aiD, s, qdD, bdD}; dually
// f tensor ~f -> bot in {aiU, s, qdU, bdU}.
DeepDerivation expandIDown(const Formula& f);
DeepDerivation expandIUp(const Formula& f);

// Step-level emitters used to build gadgets inside larger derivations.
// Both return the updated state and append the emitted steps.
SliceState emitIDown(const SliceState& s, size_t slice, const Path& hostNode,
                     size_t at, const Formula& f, std::vector<DeepStep>& out,
                     Path* factorPath = nullptr);
// Consumes dual children (tensorKids forming f, dualKid holding ~f) of the
// tensor node at `path`.
SliceState emitIUp(const SliceState& s, size_t slice, const Path& path,
                   std::vector<size_t> fKids, size_t dualKid,
                   std::vector<DeepStep>& out);

// Replaces every up-modality step by the derivable gadget (i-down expanded,
// the dual down rule inside a switch sandwich, i-up kept as the IU macro on
// modal formulas and expanded on purely multiplicative ones), and every
// DupSlice by an AddSlice of a congruent slice. ID/IU macros on
// modality-free formulas are expanded away.
DeepDerivation eliminateUpRules(const DeepDerivation& d);

// All steps applicable to `s`, with insertion arguments drawn from `pool`
// and insertion positions canonicalized to appends. Duplication-heavy
// argument choices (subsets) are enumerated exhaustively per node.
std::vector<DeepStep> enumerateSteps(const SliceState& s,
                                     const std::vector<Formula>& pool,
                                     bool includeMacros = false);

}  // namespace dill
