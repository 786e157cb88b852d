#include "dill/sequent.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace dill {

bool sequentEqual(const Sequent& a, const Sequent& b) {
  return sequentKey(a) == sequentKey(b);
}

std::string sequentKey(const Sequent& s) {
  std::vector<std::string> keys;
  keys.reserve(s.size());
  for (const auto& f : s) keys.push_back(sortKey(f));
  std::sort(keys.begin(), keys.end());
  std::string out;
  for (const auto& k : keys) {
    out += k;
    out += ',';
  }
  return out;
}

std::string printSequent(const Sequent& s) {
  std::string out = "|-";
  for (size_t i = 0; i < s.size(); i++) {
    out += i ? ", " : " ";
    out += printFormula(s[i]);
  }
  return out;
}

std::optional<size_t> findMember(const Sequent& s, const Formula& f) {
  std::string k = sortKey(canonicalize(f));
  for (size_t i = 0; i < s.size(); i++)
    if (sortKey(s[i]) == k) return i;
  return std::nullopt;
}

namespace {

Sequent without(const Sequent& s, size_t i) {
  Sequent out = s;
  out.erase(out.begin() + static_cast<long>(i));
  return out;
}

// Removes one occurrence equivalent to f; false if absent.
bool removeOne(Sequent& s, const Formula& f) {
  auto i = findMember(s, f);
  if (!i) return false;
  s.erase(s.begin() + static_cast<long>(*i));
  return true;
}

}  // namespace

const char* ruleName(SRule r) {
  switch (r) {
    case SRule::Ax: return "ax";
    case SRule::Par: return "par";
    case SRule::Tensor: return "tensor";
    case SRule::One: return "one";
    case SRule::Bot: return "bot";
    case SRule::Cut: return "cut";
    case SRule::BangD: return "bangD";
    case SRule::QuestD: return "questD";
    case SRule::BangC: return "bangC";
    case SRule::QuestC: return "questC";
    case SRule::BangW: return "bangW";
    case SRule::QuestW: return "questW";
    case SRule::Sum: return "sum";
    case SRule::Zero: return "zero";
  }
  return "?";
}

std::optional<SRule> ruleFromName(const std::string& s) {
  static const std::map<std::string, SRule> m = {
      {"ax", SRule::Ax},       {"par", SRule::Par},     {"tensor", SRule::Tensor},
      {"one", SRule::One},     {"bot", SRule::Bot},     {"cut", SRule::Cut},
      {"bangD", SRule::BangD}, {"questD", SRule::QuestD}, {"bangC", SRule::BangC},
      {"questC", SRule::QuestC}, {"bangW", SRule::BangW}, {"questW", SRule::QuestW},
      {"sum", SRule::Sum},     {"zero", SRule::Zero}};
  auto it = m.find(s);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

size_t ruleArity(SRule r) {
  switch (r) {
    case SRule::Ax:
    case SRule::One:
    case SRule::BangW:
    case SRule::Zero:
      return 0;
    case SRule::Tensor:
    case SRule::Cut:
    case SRule::BangC:
    case SRule::Sum:
      return 2;
    default:
      return 1;
  }
}

// ----------------------------------------------------------- constructors

namespace {
SeqDerivPtr mk(SeqDeriv d) { return std::make_shared<const SeqDeriv>(std::move(d)); }
}  // namespace

SeqDerivPtr SeqDeriv::ax(Formula a) {
  Formula c = canonicalize(a);
  return axPair(c, negate(c));
}
SeqDerivPtr SeqDeriv::axPair(Formula a, Formula negA) {
  return mk({SRule::Ax, {canonicalize(a), canonicalize(negA)}, {}, SIZE_MAX, {}, {}, {}});
}
SeqDerivPtr SeqDeriv::one() {
  return mk({SRule::One, {Formula::one()}, {}, SIZE_MAX, {}, {}, {}});
}
SeqDerivPtr SeqDeriv::bangW(Formula a) {
  return mk({SRule::BangW, {canonicalize(Formula::bang(a))}, {}, SIZE_MAX, {}, {}, {}});
}
SeqDerivPtr SeqDeriv::zero(Sequent concl) {
  return mk({SRule::Zero, std::move(concl), {}, SIZE_MAX, {}, {}, {}});
}
SeqDerivPtr SeqDeriv::bot(SeqDerivPtr p) {
  Sequent c = p->conclusion;
  c.push_back(Formula::bot());
  size_t pos = c.size() - 1;
  return mk({SRule::Bot, std::move(c), {std::move(p)}, pos, {}, {}, {}});
}
SeqDerivPtr SeqDeriv::par(SeqDerivPtr p, size_t posA, size_t posB) {
  Formula a = p->conclusion[posA], b = p->conclusion[posB];
  Sequent c;
  size_t principal = SIZE_MAX;
  for (size_t i = 0; i < p->conclusion.size(); i++) {
    if (i == posA || i == posB) {
      if (principal == SIZE_MAX) {
        principal = c.size();
        c.push_back(canonicalize(Formula::par({a, b})));
      }
      continue;
    }
    c.push_back(p->conclusion[i]);
  }
  return mk({SRule::Par, std::move(c), {std::move(p)}, principal, a, b, {}});
}
SeqDerivPtr SeqDeriv::tensor(SeqDerivPtr l, size_t posA, SeqDerivPtr r, size_t posB) {
  Formula a = l->conclusion[posA], b = r->conclusion[posB];
  Sequent c = without(l->conclusion, posA);
  size_t principal = c.size();
  c.push_back(canonicalize(Formula::tensor({a, b})));
  Sequent rc = without(r->conclusion, posB);
  c.insert(c.end(), rc.begin(), rc.end());
  return mk({SRule::Tensor, std::move(c), {std::move(l), std::move(r)}, principal, a, b, {}});
}
SeqDerivPtr SeqDeriv::cut(SeqDerivPtr l, size_t posA, SeqDerivPtr r, size_t posNegA,
                          CutMark m) {
  Formula a = l->conclusion[posA];
  Sequent c = without(l->conclusion, posA);
  Sequent rc = without(r->conclusion, posNegA);
  c.insert(c.end(), rc.begin(), rc.end());
  return mk({SRule::Cut, std::move(c), {std::move(l), std::move(r)}, SIZE_MAX, a, {}, m});
}
SeqDerivPtr SeqDeriv::bangD(SeqDerivPtr p, size_t pos) {
  Sequent c = p->conclusion;
  c[pos] = canonicalize(Formula::bang(c[pos]));
  return mk({SRule::BangD, std::move(c), {std::move(p)}, pos, {}, {}, {}});
}
SeqDerivPtr SeqDeriv::questD(SeqDerivPtr p, size_t pos) {
  Sequent c = p->conclusion;
  c[pos] = canonicalize(Formula::quest(c[pos]));
  return mk({SRule::QuestD, std::move(c), {std::move(p)}, pos, {}, {}, {}});
}
SeqDerivPtr SeqDeriv::questW(SeqDerivPtr p, Formula a) {
  Sequent c = p->conclusion;
  c.push_back(canonicalize(Formula::quest(std::move(a))));
  size_t pos = c.size() - 1;
  return mk({SRule::QuestW, std::move(c), {std::move(p)}, pos, {}, {}, {}});
}
SeqDerivPtr SeqDeriv::questC(SeqDerivPtr p, size_t posA, size_t posB) {
  size_t lo = std::min(posA, posB), hi = std::max(posA, posB);
  Sequent c = without(p->conclusion, hi);
  return mk({SRule::QuestC, std::move(c), {std::move(p)}, lo, {}, {}, {}});
}
SeqDerivPtr SeqDeriv::bangC(SeqDerivPtr l, size_t posL, SeqDerivPtr r, size_t posR) {
  Formula b = l->conclusion[posL];
  Sequent c = without(l->conclusion, posL);
  size_t principal = c.size();
  c.push_back(b);
  Sequent rc = without(r->conclusion, posR);
  c.insert(c.end(), rc.begin(), rc.end());
  return mk({SRule::BangC, std::move(c), {std::move(l), std::move(r)}, principal, {}, {}, {}});
}
SeqDerivPtr SeqDeriv::sum(SeqDerivPtr l, SeqDerivPtr r) {
  Sequent c = l->conclusion;
  return mk({SRule::Sum, std::move(c), {std::move(l), std::move(r)}, SIZE_MAX, {}, {}, {}});
}

// ------------------------------------------------------------- traversal

SeqDerivPtr nodeAt(const SeqDerivPtr& d, const NodePath& p) {
  SeqDerivPtr cur = d;
  for (size_t i : p) {
    if (i >= cur->premises.size()) throw SequentError("node path does not resolve");
    cur = cur->premises[i];
  }
  return cur;
}

SeqDerivPtr replaceNode(const SeqDerivPtr& d, const NodePath& p, const SeqDerivPtr& n) {
  if (p.empty()) return n;
  if (p[0] >= d->premises.size()) throw SequentError("node path does not resolve");
  SeqDeriv copy = *d;
  copy.premises[p[0]] =
      replaceNode(d->premises[p[0]], NodePath(p.begin() + 1, p.end()), n);
  return mk(std::move(copy));
}

// --------------------------------------------------------------- checking

namespace {

bool fails(SeqCheckFailure* out, const NodePath& where, const std::string& why) {
  if (out) *out = {where, why};
  return false;
}

bool checkNode(const SeqDerivPtr& d, NodePath& where, SeqCheckFailure* out) {
  const SeqDeriv& n = *d;
  if (n.premises.size() != ruleArity(n.rule))
    return fails(out, where, "wrong number of premises");
  for (const auto& f : n.conclusion) {
    if (!f.isMell()) return fails(out, where, "sequent member is not MELL");
    if (!isCanonical(f)) return fails(out, where, "sequent member not canonical");
  }
  auto prem = [&](size_t i) -> const Sequent& { return n.premises[i]->conclusion; };
  auto principalIs = [&](auto pred) {
    return n.principal < n.conclusion.size() && pred(n.conclusion[n.principal]);
  };
  switch (n.rule) {
    case SRule::Ax:
      if (n.conclusion.size() != 2) return fails(out, where, "ax needs two formulas");
      if (!equiv(negate(n.conclusion[0]), n.conclusion[1]))
        return fails(out, where, "ax formulas are not dual");
      break;
    case SRule::One:
      if (n.conclusion.size() != 1 || !n.conclusion[0].isOne())
        return fails(out, where, "one concludes |- 1");
      break;
    case SRule::BangW:
      if (n.conclusion.size() != 1 || n.conclusion[0].tag() != Tag::Bang)
        return fails(out, where, "bangW concludes |- !A");
      break;
    case SRule::Zero:
      break;
    case SRule::Bot: {
      if (!principalIs([](const Formula& f) { return f.isBot(); }))
        return fails(out, where, "bot principal must be bot");
      if (!sequentEqual(prem(0), without(n.conclusion, n.principal)))
        return fails(out, where, "bot premise mismatch");
      break;
    }
    case SRule::Par: {
      if (!principalIs([&](const Formula& f) {
            return equiv(f, Formula::par({n.partA, n.partB}));
          }))
        return fails(out, where, "par principal does not match split");
      Sequent want = without(n.conclusion, n.principal);
      want.push_back(n.partA);
      want.push_back(n.partB);
      if (!sequentEqual(prem(0), want)) return fails(out, where, "par premise mismatch");
      break;
    }
    case SRule::Tensor: {
      if (!principalIs([&](const Formula& f) {
            return equiv(f, Formula::tensor({n.partA, n.partB}));
          }))
        return fails(out, where, "tensor principal does not match split");
      Sequent g = prem(0), dd = prem(1);
      if (!removeOne(g, n.partA)) return fails(out, where, "tensor left premise lacks A");
      if (!removeOne(dd, n.partB)) return fails(out, where, "tensor right premise lacks B");
      g.insert(g.end(), dd.begin(), dd.end());
      if (!sequentEqual(g, without(n.conclusion, n.principal)))
        return fails(out, where, "tensor context split mismatch");
      break;
    }
    case SRule::Cut: {
      Sequent g = prem(0), dd = prem(1);
      if (!removeOne(g, n.partA)) return fails(out, where, "cut left premise lacks A");
      if (!removeOne(dd, negate(n.partA)))
        return fails(out, where, "cut right premise lacks ~A");
      g.insert(g.end(), dd.begin(), dd.end());
      if (!sequentEqual(g, n.conclusion))
        return fails(out, where, "cut context split mismatch");
      break;
    }
    case SRule::BangD:
    case SRule::QuestD: {
      Tag t = n.rule == SRule::BangD ? Tag::Bang : Tag::Quest;
      if (!principalIs([&](const Formula& f) { return f.tag() == t; }))
        return fails(out, where, "dereliction principal has wrong modality");
      Sequent want = n.conclusion;
      want[n.principal] = n.conclusion[n.principal].kids()[0];
      if (!sequentEqual(prem(0), want))
        return fails(out, where, "dereliction premise mismatch");
      break;
    }
    case SRule::QuestW: {
      if (!principalIs([](const Formula& f) { return f.tag() == Tag::Quest; }))
        return fails(out, where, "questW principal must be ?A");
      if (!sequentEqual(prem(0), without(n.conclusion, n.principal)))
        return fails(out, where, "questW premise mismatch");
      break;
    }
    case SRule::QuestC: {
      if (!principalIs([](const Formula& f) { return f.tag() == Tag::Quest; }))
        return fails(out, where, "questC principal must be ?A");
      Sequent want = n.conclusion;
      want.push_back(n.conclusion[n.principal]);
      if (!sequentEqual(prem(0), want)) return fails(out, where, "questC premise mismatch");
      break;
    }
    case SRule::BangC: {
      if (!principalIs([](const Formula& f) { return f.tag() == Tag::Bang; }))
        return fails(out, where, "bangC principal must be !A");
      const Formula& b = n.conclusion[n.principal];
      Sequent g = prem(0), dd = prem(1);
      if (!removeOne(g, b)) return fails(out, where, "bangC left premise lacks !A");
      if (!removeOne(dd, b)) return fails(out, where, "bangC right premise lacks !A");
      g.insert(g.end(), dd.begin(), dd.end());
      if (!sequentEqual(g, without(n.conclusion, n.principal)))
        return fails(out, where, "bangC context split mismatch");
      break;
    }
    case SRule::Sum: {
      if (!sequentEqual(prem(0), n.conclusion) || !sequentEqual(prem(1), n.conclusion))
        return fails(out, where, "sum premises must repeat the conclusion");
      break;
    }
  }
  for (size_t i = 0; i < n.premises.size(); i++) {
    where.push_back(i);
    if (!checkNode(n.premises[i], where, out)) return false;
    where.pop_back();
  }
  return true;
}

}  // namespace

bool check(const SeqDerivPtr& d, SeqCheckFailure* fail) {
  NodePath where;
  return checkNode(d, where, fail);
}

// ------------------------------------------------------------- predicates

bool isSlice(const SeqDerivPtr& d) {
  if (d->rule == SRule::Sum || d->rule == SRule::Zero) return false;
  for (const auto& p : d->premises)
    if (!isSlice(p)) return false;
  return true;
}

bool isCutFree(const SeqDerivPtr& d) {
  if (d->rule == SRule::Cut) return false;
  for (const auto& p : d->premises)
    if (!isCutFree(p)) return false;
  return true;
}

bool isEtaExpanded(const SeqDerivPtr& d) {
  if (d->rule == SRule::Ax && !d->conclusion[0].isAtomic()) return false;
  for (const auto& p : d->premises)
    if (!isEtaExpanded(p)) return false;
  return true;
}

bool isCanonicalDeriv(const SeqDerivPtr& d) {
  if (d->rule == SRule::Zero) return true;
  if (isSlice(d)) return true;
  if (d->rule == SRule::Sum)
    return isCanonicalDeriv(d->premises[0]) && isSlice(d->premises[1]);
  return false;
}

size_t countRule(const SeqDerivPtr& d, SRule r) {
  size_t c = d->rule == r ? 1 : 0;
  for (const auto& p : d->premises) c += countRule(p, r);
  return c;
}

std::string derivKey(const SeqDerivPtr& d) {
  std::string out = ruleName(d->rule);
  out += '[';
  for (const auto& f : d->conclusion) out += sortKey(f);
  if (d->rule == SRule::Par || d->rule == SRule::Tensor)
    out += "|" + sortKey(d->partA) + sortKey(d->partB);
  if (d->rule == SRule::Cut)
    out += "|" + sortKey(d->partA) + (d->mark == CutMark::Left ? "L" : "R");
  if (d->principal != SIZE_MAX) out += "@" + std::to_string(d->principal);
  out += ']';
  out += '(';
  for (const auto& p : d->premises) out += derivKey(p);
  out += ')';
  return out;
}

bool derivEqual(const SeqDerivPtr& a, const SeqDerivPtr& b) {
  return derivKey(a) == derivKey(b);
}

// ---------------------------------------------------------- canonicalForm

namespace {

// Slices of a canonical derivation (zero -> none, slice -> itself,
// sum comb -> the comb's leaves).
void slicesOf(const SeqDerivPtr& d, std::vector<SeqDerivPtr>& out) {
  if (d->rule == SRule::Zero) return;
  if (d->rule == SRule::Sum) {
    slicesOf(d->premises[0], out);
    slicesOf(d->premises[1], out);
    return;
  }
  out.push_back(d);
}

SeqDerivPtr comb(const Sequent& concl, const std::vector<SeqDerivPtr>& slices) {
  if (slices.empty()) return SeqDeriv::zero(concl);
  SeqDerivPtr acc = slices[0];
  for (size_t i = 1; i < slices.size(); i++) acc = SeqDeriv::sum(acc, slices[i]);
  return acc;
}

SeqDerivPtr rebuildWith(const SeqDeriv& node, std::vector<SeqDerivPtr> prems) {
  SeqDeriv copy = node;
  copy.premises = std::move(prems);
  return mk(std::move(copy));
}

}  // namespace

SeqDerivPtr canonicalForm(const SeqDerivPtr& d) {
  std::vector<SeqDerivPtr> prems;
  prems.reserve(d->premises.size());
  for (const auto& p : d->premises) prems.push_back(canonicalForm(p));
  if (d->rule == SRule::Zero) return d;
  if (d->rule == SRule::Sum) {
    std::vector<SeqDerivPtr> slices;
    slicesOf(prems[0], slices);
    slicesOf(prems[1], slices);
    return comb(d->conclusion, slices);
  }
  for (const auto& p : prems)
    if (p->rule == SRule::Zero) return SeqDeriv::zero(d->conclusion);
  bool anySum = false;
  for (const auto& p : prems)
    if (p->rule == SRule::Sum) anySum = true;
  if (!anySum) {
    bool same = true;
    for (size_t i = 0; i < prems.size(); i++)
      if (prems[i] != d->premises[i]) same = false;
    return same ? d : rebuildWith(*d, std::move(prems));
  }
  // Distribute the rule over every combination of premise slices.
  std::vector<std::vector<SeqDerivPtr>> rows{{}};
  for (const auto& p : prems) {
    std::vector<SeqDerivPtr> slices;
    slicesOf(p, slices);
    std::vector<std::vector<SeqDerivPtr>> next;
    for (const auto& row : rows)
      for (const auto& s : slices) {
        auto r = row;
        r.push_back(s);
        next.push_back(std::move(r));
      }
    rows = std::move(next);
  }
  std::vector<SeqDerivPtr> out;
  out.reserve(rows.size());
  for (auto& row : rows) out.push_back(rebuildWith(*d, std::move(row)));
  return comb(d->conclusion, out);
}

// ------------------------------------------------------------- eta expand

namespace {

// Derivation of |- A, B with B ~ negate(A), using only atomic axioms.
SeqDerivPtr expandedAx(const Formula& a, const Formula& b) {
  if (a.isAtomic()) return SeqDeriv::axPair(a, b);
  if (a.tag() == Tag::Par || a.tag() == Tag::Quest || a.isBot())
    return expandedAx(b, a);
  if (a.isOne()) return SeqDeriv::bot(SeqDeriv::one());
  if (a.tag() == Tag::Bang) {
    Formula c = a.kids()[0];
    SeqDerivPtr d = expandedAx(c, negate(c));  // |- C, ~C
    d = SeqDeriv::questD(d, 1);                // |- C, ?~C
    return SeqDeriv::bangD(d, 0);              // |- !C, ?~C
  }
  // a = tensor with >= 2 children
  Formula c = a.kids()[0];
  std::vector<Formula> rest(a.kids().begin() + 1, a.kids().end());
  Formula dRest = rest.size() == 1 ? rest[0] : Formula::tensor(rest);
  SeqDerivPtr l = expandedAx(c, negate(c));          // |- C, ~C
  SeqDerivPtr r = expandedAx(dRest, negate(dRest));  // |- D, ~D
  SeqDerivPtr t = SeqDeriv::tensor(l, 0, r, 0);      // |- ~C, C@D, ~D
  return SeqDeriv::par(t, 0, 2);                     // |- ~C par ~D, C@D
}

}  // namespace

SeqDerivPtr etaExpand(const SeqDerivPtr& d) {
  if (d->rule == SRule::Ax && !d->conclusion[0].isAtomic())
    return expandedAx(d->conclusion[0], d->conclusion[1]);
  std::vector<SeqDerivPtr> prems;
  bool changed = false;
  for (const auto& p : d->premises) {
    SeqDerivPtr q = etaExpand(p);
    changed = changed || q != p;
    prems.push_back(std::move(q));
  }
  if (!changed) return d;
  return rebuildWith(*d, std::move(prems));
}

// ---------------------------------------------------------------- cut step

namespace {

bool principalOn(const SeqDerivPtr& p, const Formula& f) {
  switch (p->rule) {
    case SRule::One:
      return f.isOne();
    case SRule::BangW:
      return equiv(p->conclusion[0], f);
    case SRule::Par:
    case SRule::Tensor:
    case SRule::Bot:
    case SRule::BangD:
    case SRule::QuestD:
    case SRule::BangC:
    case SRule::QuestC:
    case SRule::QuestW:
      return p->principal < p->conclusion.size() &&
             equiv(p->conclusion[p->principal], f);
    default:
      return false;  // ax / zero / sum / cut handled separately
  }
}

size_t mustFind(const Sequent& s, const Formula& f) {
  auto i = findMember(s, f);
  if (!i) throw SequentError("expected formula not present: " + printFormula(f));
  return *i;
}

size_t mustFindOther(const Sequent& s, const Formula& f, size_t skip) {
  std::string k = sortKey(canonicalize(f));
  for (size_t i = 0; i < s.size(); i++)
    if (i != skip && sortKey(s[i]) == k) return i;
  throw SequentError("expected second occurrence not present");
}

// MLL lemma |- ~X, c1, ..., ck for X = Par[c1..ck]; tensor of axioms.
SeqDerivPtr splitLemma(const Formula& x) {
  const auto& kids = x.kids();
  SeqDerivPtr d = SeqDeriv::axPair(negate(kids[0]), kids[0]);
  for (size_t i = 1; i < kids.size(); i++)
    d = SeqDeriv::tensor(d, 0, SeqDeriv::axPair(negate(kids[i]), kids[i]), 0);
  return d;
}

// Splits the par member at `pos` into its children with one cut (or a
// one-cut for bot); returns the derivation with the member spread.
SeqDerivPtr spread(SeqDerivPtr d, size_t pos) {
  Formula f = d->conclusion[pos];
  if (f.isBot()) return SeqDeriv::cut(d, pos, SeqDeriv::one(), 0);
  if (f.tag() != Tag::Par) return d;
  return SeqDeriv::cut(d, pos, splitLemma(f), 0);
}

// Joins members congruent to the par-children of target into one member.
SeqDerivPtr join(SeqDerivPtr d, const Formula& target) {
  if (target.isBot()) return SeqDeriv::bot(d);
  if (target.tag() != Tag::Par) return d;
  const auto& kids = target.kids();
  size_t a = mustFind(d->conclusion, kids[0]);
  size_t b = mustFindOther(d->conclusion, kids[1], a);
  d = SeqDeriv::par(d, a, b);
  Formula acc = canonicalize(Formula::par({kids[0], kids[1]}));
  for (size_t i = 2; i < kids.size(); i++) {
    size_t pa = mustFind(d->conclusion, acc);
    size_t pb = mustFindOther(d->conclusion, kids[i], pa);
    d = SeqDeriv::par(d, pa, pb);
    acc = canonicalize(Formula::par({acc, kids[i]}));
  }
  return d;
}

struct CutParts {
  SeqDerivPtr left, right;  // left holds A, right holds ~A
  Formula a, na;
  CutMark mark;
};

SeqDerivPtr rebuildUnary(const SeqDerivPtr& orig, SeqDerivPtr inner);

// One cut-elimination rewrite on the cut node `n`; returns the replacement.
SeqDerivPtr stepCutNode(const SeqDerivPtr& n, std::string& name) {
  CutParts cp{n->premises[0], n->premises[1], n->partA, negate(n->partA), n->mark};
  auto mkCut = [&](SeqDerivPtr l, const Formula& f, SeqDerivPtr r,
                   CutMark m) -> SeqDerivPtr {
    size_t pa = mustFind(l->conclusion, f);
    size_t pn = mustFind(r->conclusion, negate(f));
    return SeqDeriv::cut(std::move(l), pa, std::move(r), pn, m);
  };

  // Congruence collapses for zero / sum premises (oriented Fig. 2).
  for (int side = 0; side < 2; side++) {
    const SeqDerivPtr& p = side == 0 ? cp.left : cp.right;
    if (p->rule == SRule::Zero) {
      name = "eq-zero";
      return SeqDeriv::zero(n->conclusion);
    }
    if (p->rule == SRule::Sum) {
      name = side == 0 ? "eq-sum-left" : "eq-sum-right";
      auto mkBranch = [&](const SeqDerivPtr& b) {
        SeqDeriv copy = *n;
        copy.premises[static_cast<size_t>(side)] = b;
        return mk(std::move(copy));
      };
      SeqDerivPtr l = mkBranch(p->premises[0]);
      SeqDerivPtr r = mkBranch(p->premises[1]);
      SeqDeriv s{SRule::Sum, n->conclusion, {l, r}, SIZE_MAX, {}, {}, {}};
      return mk(std::move(s));
    }
  }
  if (cp.left->rule == SRule::Ax) {
    name = "key-ax";
    return cp.right;
  }
  if (cp.right->rule == SRule::Ax) {
    name = "key-ax";
    return cp.left;
  }

  // Orient so the cut formula a is quest / par / bot side on the left.
  bool swapped = false;
  if (cp.a.tag() == Tag::Bang || cp.a.tag() == Tag::Tensor) {
    std::swap(cp.left, cp.right);
    std::swap(cp.a, cp.na);
    swapped = true;
  }
  bool lp = principalOn(cp.left, cp.a);
  bool rp = principalOn(cp.right, cp.na);

  if (lp && rp && cp.a.isBot()) {
    // bot against one
    name = "key-one-bot";
    return cp.left->premises[0];
  }
  if (lp && rp && cp.a.tag() == Tag::Par) {
    const SeqDerivPtr& pl = cp.left;   // ends in par
    const SeqDerivPtr& pr = cp.right;  // ends in tensor
    SeqDerivPtr body = pl->premises[0];
    SeqDerivPtr s1 = pr->premises[0], s2 = pr->premises[1];
    if (equiv(negate(pr->partA), pl->partA) && equiv(negate(pr->partB), pl->partB)) {
      name = "key-par-tensor";
      SeqDerivPtr inner = mkCut(body, pl->partA, s1, cp.mark);
      return mkCut(inner, pl->partB, s2, cp.mark);
    }
    // Splits disagree: spread the par fully, regroup along the tensor's
    // split, and cut the pieces (all cut formulas shrink).
    name = "key-par-tensor-regroup";
    SeqDerivPtr cur = body;
    size_t p1 = mustFind(cur->conclusion, pl->partA);
    cur = spread(cur, p1);
    size_t p2 = mustFind(cur->conclusion, pl->partB);
    cur = spread(cur, p2);
    Formula a1 = negate(pr->partA), a2 = negate(pr->partB);
    cur = join(cur, a1);
    cur = mkCut(cur, a1, s1, cp.mark);
    cur = join(cur, a2);
    return mkCut(cur, a2, s2, cp.mark);
  }
  if (lp && rp && cp.a.tag() == Tag::Quest) {
    Formula x = cp.a.kids()[0];
    SRule rl = cp.left->rule, rr = cp.right->rule;
    if (rl == SRule::QuestD && rr == SRule::BangD) {
      name = "key-qd-bd";
      return mkCut(cp.left->premises[0], x, cp.right->premises[0], cp.mark);
    }
    if (rl == SRule::QuestW && rr == SRule::BangW) {
      name = "key-qw-bw";
      return cp.left->premises[0];
    }
    if (rl == SRule::QuestD && rr == SRule::BangW) {
      name = "key-qd-bw";
      return SeqDeriv::zero(n->conclusion);
    }
    if (rl == SRule::QuestW && rr == SRule::BangD) {
      name = "key-qw-bd";
      return SeqDeriv::zero(n->conclusion);
    }
    if (rl == SRule::QuestC && rr == SRule::BangW) {
      name = "key-qc-bw";
      SeqDerivPtr inner = mkCut(cp.left->premises[0], cp.a, cp.right, cp.mark);
      return mkCut(inner, cp.a, cp.right, cp.mark);
    }
    if (rl == SRule::QuestW && rr == SRule::BangC) {
      name = "key-qw-bc";
      SeqDerivPtr c1 = mkCut(cp.left, cp.a, cp.right->premises[0], cp.mark);
      SeqDerivPtr q = SeqDeriv::questW(c1, x);
      return mkCut(q, cp.a, cp.right->premises[1], cp.mark);
    }
    if (rl == SRule::QuestD && rr == SRule::BangC) {
      name = "key-qd-bc";
      auto branch = [&](const SeqDerivPtr& first, const SeqDerivPtr& second) {
        SeqDerivPtr c = mkCut(cp.left, cp.a, first, cp.mark);
        SeqDerivPtr q = SeqDeriv::questW(c, x);
        return mkCut(q, cp.a, second, cp.mark);
      };
      SeqDerivPtr l = branch(cp.right->premises[0], cp.right->premises[1]);
      SeqDerivPtr r = branch(cp.right->premises[1], cp.right->premises[0]);
      return mk(SeqDeriv{SRule::Sum, n->conclusion, {l, r}, SIZE_MAX, {}, {}, {}});
    }
    if (rl == SRule::QuestC && rr == SRule::BangD) {
      name = "key-qc-bd";
      SeqDerivPtr bw = SeqDeriv::bangW(negate(x));
      auto branch = [&](const SeqDerivPtr& first, const SeqDerivPtr& second) {
        SeqDerivPtr c = mkCut(cp.left->premises[0], cp.a, first, cp.mark);
        return mkCut(c, cp.a, second, cp.mark);
      };
      SeqDerivPtr l = branch(cp.right, bw);
      SeqDerivPtr r = branch(bw, cp.right);
      return mk(SeqDeriv{SRule::Sum, n->conclusion, {l, r}, SIZE_MAX, {}, {}, {}});
    }
    if (rl == SRule::QuestC && rr == SRule::BangC) {
      name = "key-qc-bc";
      // Expands the contraction pair through eta-expanded axiom banks.
      auto bank = [&]() {
        SeqDerivPtr a1 = etaExpand(SeqDeriv::axPair(cp.a, cp.na));
        SeqDerivPtr a2 = etaExpand(SeqDeriv::axPair(cp.a, cp.na));
        return SeqDeriv::bangC(a1, mustFind(a1->conclusion, cp.na), a2,
                               mustFind(a2->conclusion, cp.na));  // |- ?X, !~X, ?X
      };
      SeqDerivPtr c1 = mkCut(cp.left->premises[0], cp.a, bank(), cp.mark);
      SeqDerivPtr c2 = mkCut(c1, cp.a, bank(), cp.mark);
      size_t q1 = mustFind(c2->conclusion, cp.a);
      size_t q2 = mustFindOther(c2->conclusion, cp.a, q1);
      SeqDerivPtr q = SeqDeriv::questC(c2, q1, q2);
      SeqDerivPtr c3 = mkCut(q, cp.a, cp.right->premises[0], cp.mark);
      size_t q3 = mustFind(c3->conclusion, cp.a);
      size_t q4 = mustFindOther(c3->conclusion, cp.a, q3);
      SeqDerivPtr qq = SeqDeriv::questC(c3, q3, q4);
      return mkCut(qq, cp.a, cp.right->premises[1], cp.mark);
    }
    throw SequentError("unhandled exponential key case");
  }

  // Commutative step: push the cut above a non-principal last rule.
  // Restore original orientation so the step is reported deterministically.
  SeqDerivPtr l = swapped ? cp.right : cp.left;
  SeqDerivPtr r = swapped ? cp.left : cp.right;
  Formula a = swapped ? cp.na : cp.a;
  bool commuteLeft = !principalOn(l, a) && l->rule != SRule::One &&
                     l->rule != SRule::BangW;
  SeqDerivPtr target = commuteLeft ? l : r;
  SeqDerivPtr other = commuteLeft ? r : l;
  Formula cutF = commuteLeft ? a : negate(a);
  name = std::string(commuteLeft ? "comm-left-" : "comm-right-") +
         ruleName(target->rule);
  auto cutInto = [&](const SeqDerivPtr& prem) -> SeqDerivPtr {
    size_t pa = mustFind(prem->conclusion, cutF);
    size_t pn = mustFind(other->conclusion, negate(cutF));
    return commuteLeft ? SeqDeriv::cut(prem, pa, other, pn, cp.mark)
                       : SeqDeriv::cut(other, pn, prem, pa, cp.mark);
  };
  switch (target->rule) {
    case SRule::Bot:
    case SRule::Par:
    case SRule::BangD:
    case SRule::QuestD:
    case SRule::QuestC:
    case SRule::QuestW:
      return rebuildUnary(target, cutInto(target->premises[0]));
    case SRule::Tensor:
    case SRule::BangC:
    case SRule::Cut: {
      // Send the cut into whichever premise still owns the cut formula.
      Formula held = target->rule == SRule::Tensor ? target->partA
                     : target->rule == SRule::Cut  ? target->partA
                     : target->conclusion[target->principal];
      Sequent g = target->premises[0]->conclusion;
      removeOne(g, held);
      bool goLeft = findMember(g, cutF).has_value();
      SeqDerivPtr inner = cutInto(target->premises[goLeft ? 0 : 1]);
      SeqDeriv shell = *target;
      shell.premises[goLeft ? 0 : 1] = inner;
      // Recompute the conclusion from the rebuilt premises.
      if (target->rule == SRule::Tensor) {
        size_t pa = mustFind(shell.premises[0]->conclusion, target->partA);
        size_t pb = mustFind(shell.premises[1]->conclusion, target->partB);
        return SeqDeriv::tensor(shell.premises[0], pa, shell.premises[1], pb);
      }
      if (target->rule == SRule::Cut) {
        size_t pa = mustFind(shell.premises[0]->conclusion, target->partA);
        size_t pn = mustFind(shell.premises[1]->conclusion, negate(target->partA));
        return SeqDeriv::cut(shell.premises[0], pa, shell.premises[1], pn,
                             target->mark);
      }
      size_t pl = mustFind(shell.premises[0]->conclusion, held);
      size_t pr = mustFind(shell.premises[1]->conclusion, held);
      return SeqDeriv::bangC(shell.premises[0], pl, shell.premises[1], pr);
    }
    default:
      throw SequentError(std::string("cut is stuck against ") +
                         ruleName(target->rule));
  }
}

// Re-applies the unary rule of `orig` on top of `inner`, re-locating its
// principal material in the larger context.
SeqDerivPtr rebuildUnary(const SeqDerivPtr& orig, SeqDerivPtr inner) {
  switch (orig->rule) {
    case SRule::Bot:
      return SeqDeriv::bot(std::move(inner));
    case SRule::Par: {
      size_t a = mustFind(inner->conclusion, orig->partA);
      size_t b = mustFindOther(inner->conclusion, orig->partB, a);
      return SeqDeriv::par(std::move(inner), a, b);
    }
    case SRule::BangD: {
      Formula body = orig->conclusion[orig->principal].kids()[0];
      return SeqDeriv::bangD(inner, mustFind(inner->conclusion, body));
    }
    case SRule::QuestD: {
      Formula body = orig->conclusion[orig->principal].kids()[0];
      return SeqDeriv::questD(inner, mustFind(inner->conclusion, body));
    }
    case SRule::QuestC: {
      Formula q = orig->conclusion[orig->principal];
      size_t a = mustFind(inner->conclusion, q);
      size_t b = mustFindOther(inner->conclusion, q, a);
      return SeqDeriv::questC(std::move(inner), a, b);
    }
    case SRule::QuestW: {
      Formula q = orig->conclusion[orig->principal];
      return SeqDeriv::questW(std::move(inner), q.kids()[0]);
    }
    default:
      throw SequentError("not a unary commutation target");
  }
}

}  // namespace

SeqDerivPtr cutStep(const SeqDerivPtr& d, const NodePath& redex, std::string* stepName) {
  SeqDerivPtr node = nodeAt(d, redex);
  if (node->rule != SRule::Cut) throw SequentError("not a cut");
  std::string name;
  SeqDerivPtr res = stepCutNode(node, name);
  if (stepName) *stepName = name;
  return replaceNode(d, redex, res);
}

std::optional<NodePath> topmostCut(const SeqDerivPtr& d) {
  for (size_t i = 0; i < d->premises.size(); i++) {
    if (auto p = topmostCut(d->premises[i])) {
      p->insert(p->begin(), i);
      return p;
    }
  }
  if (d->rule == SRule::Cut) return NodePath{};
  return std::nullopt;
}

std::pair<SeqDerivPtr, CutTrace> cutEliminate(const SeqDerivPtr& d, size_t fuel) {
  CutTrace trace;
  trace.initial = d;
  SeqDerivPtr cur = d;
  while (auto redex = topmostCut(cur)) {
    if (trace.entries.size() >= fuel) {
      trace.fuelExhausted = true;
      throw FuelExhausted(std::move(trace));
    }
    std::string name;
    cur = cutStep(cur, *redex, &name);
    trace.entries.push_back({*redex, name, std::to_string(
        std::hash<std::string>{}(derivKey(cur)))});
  }
  return {cur, std::move(trace)};
}

}  // namespace dill
