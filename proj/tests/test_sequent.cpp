#include "doctest.h"

#include "dill/sequent.hpp"

using namespace dill;

namespace {
Formula C(const std::string& s) { return canonicalize(parseFormula(s)); }
}

TEST_CASE("check accepts the figure-1 rules") {
  // ax with |- a, ~a
  CHECK(check(SeqDeriv::ax(C("a"))));
  // zero with any conclusion, no premises
  CHECK(check(SeqDeriv::zero({C("a"), C("a")})));
  // a par instance whose premise lacks the subformulas fails
  {
    SeqDerivPtr bad = SeqDeriv::par(SeqDeriv::ax(C("a")), 0, 1);
    SeqDeriv broken = *bad;
    broken.partA = C("b");
    SeqCheckFailure why;
    CHECK(!check(std::make_shared<const SeqDeriv>(broken), &why));
    CHECK(!why.reason.empty());
  }
  // tensor splits the context as a multiset partition
  {
    SeqDerivPtr l = SeqDeriv::ax(C("a"));                 // |- a, ~a
    SeqDerivPtr r = SeqDeriv::ax(C("b"));                 // |- b, ~b
    SeqDerivPtr t = SeqDeriv::tensor(l, 0, r, 0);         // |- ~a, a*b, ~b
    CHECK(check(t));
    CHECK(sequentEqual(t->conclusion, {C("~a"), C("a*b"), C("~b")}));
    SeqDerivPtr p = SeqDeriv::par(t, 0, 2);               // |- ~a|~b, a*b
    CHECK(check(p));
    SeqDerivPtr dual = SeqDeriv::ax(C("a*b"));            // |- a*b, ~a|~b
    SeqDerivPtr c = SeqDeriv::cut(p, 1, dual, 1);
    CHECK(check(c));
  }
  // one / bot / exponentials
  {
    SeqDerivPtr d = SeqDeriv::bot(SeqDeriv::one());  // |- 1, bot
    CHECK(check(d));
    SeqDerivPtr w = SeqDeriv::questW(d, C("a"));     // |- 1, bot, ?a
    CHECK(check(w));
    SeqDerivPtr qc = SeqDeriv::questC(SeqDeriv::questW(w, C("a")), 2, 3);
    CHECK(check(qc));
    CHECK(sequentEqual(qc->conclusion, {C("1"), C("bot"), C("?a")}));
    SeqDerivPtr bc = SeqDeriv::bangC(SeqDeriv::bangW(C("a")), 0, SeqDeriv::bangW(C("a")), 0);
    CHECK(check(bc));
    CHECK(sequentEqual(bc->conclusion, {C("!a")}));
  }
}

TEST_CASE("canonical form per definition 1") {
  SeqDerivPtr ax = SeqDeriv::ax(C("a"));
  // zero above a unary rule collapses to zero
  SeqDerivPtr z = SeqDeriv::questW(SeqDeriv::zero({C("a"), C("~a")}), C("b"));
  SeqDerivPtr cz = canonicalForm(z);
  CHECK(cz->rule == SRule::Zero);
  CHECK(sequentEqual(cz->conclusion, z->conclusion));
  // sum above a unary rule: the rule is duplicated above a sum
  SeqDerivPtr s = SeqDeriv::questW(SeqDeriv::sum(ax, ax), C("b"));
  SeqDerivPtr cs = canonicalForm(s);
  CHECK(cs->rule == SRule::Sum);
  CHECK(cs->premises[0]->rule == SRule::QuestW);
  CHECK(cs->premises[1]->rule == SRule::QuestW);
  CHECK(isCanonicalDeriv(cs));
  CHECK(check(cs));
  // already canonical derivations are fixed points
  SeqDerivPtr slice = SeqDeriv::questW(ax, C("b"));
  CHECK(canonicalForm(slice) == slice);
  // binary rule over sums distributes
  SeqDerivPtr t = SeqDeriv::tensor(SeqDeriv::sum(ax, ax), 0, ax, 0);
  SeqDerivPtr ct = canonicalForm(t);
  CHECK(isCanonicalDeriv(ct));
  CHECK(check(ct));
  CHECK(sequentEqual(ct->conclusion, t->conclusion));
}

TEST_CASE("eta expansion rewrites non-atomic axioms") {
  // exponential case: ax |- !a, ?~a becomes ax;?d;!d
  SeqDerivPtr ax = SeqDeriv::ax(C("!a"));
  SeqDerivPtr e = etaExpand(ax);
  CHECK(check(e));
  CHECK(isEtaExpanded(e));
  CHECK(sequentEqual(e->conclusion, ax->conclusion));
  CHECK(e->rule == SRule::BangD);
  CHECK(e->premises[0]->rule == SRule::QuestD);
  CHECK(e->premises[0]->premises[0]->rule == SRule::Ax);
  // unit case
  SeqDerivPtr u = etaExpand(SeqDeriv::ax(C("1")));
  CHECK(check(u));
  CHECK(u->rule == SRule::Bot);
  CHECK(u->premises[0]->rule == SRule::One);
  // atomic ax unchanged
  SeqDerivPtr aa = SeqDeriv::ax(C("a"));
  CHECK(etaExpand(aa) == aa);
  // multiplicative case preserves slices
  SeqDerivPtr m = etaExpand(SeqDeriv::ax(C("a * (b | c)")));
  CHECK(check(m));
  CHECK(isEtaExpanded(m));
  CHECK(isSlice(m));
  CHECK(sequentEqual(m->conclusion, {C("a * (b | c)"), C("~a | (~b * ~c)")}));
}

TEST_CASE("cut step key cases") {
  // ?d / !d: |- a twice derelicted against bang-derelicted dual
  SeqDerivPtr l = SeqDeriv::questD(SeqDeriv::ax(C("a")), 0);  // |- ?a, ~a
  SeqDerivPtr r = SeqDeriv::bangD(SeqDeriv::ax(C("~a")), 0);  // |- !~a, a
  SeqDerivPtr cut = SeqDeriv::cut(l, 0, r, 0);
  CHECK(check(cut));
  std::string name;
  SeqDerivPtr res = cutStep(cut, {}, &name);
  CHECK(name == "key-qd-bd");
  CHECK(check(res));
  CHECK(res->rule == SRule::Cut);
  CHECK(sequentEqual(res->conclusion, cut->conclusion));

  // ?d / !w: mismatch produces zero
  SeqDerivPtr l2 = SeqDeriv::questD(SeqDeriv::ax(C("a")), 0);   // |- ?a, ~a
  SeqDerivPtr r2 = SeqDeriv::bangW(C("~a"));                    // |- !~a
  SeqDerivPtr cut2 = SeqDeriv::cut(l2, 0, r2, 0);
  CHECK(check(cut2));
  SeqDerivPtr res2 = cutStep(cut2, {}, &name);
  CHECK(name == "key-qd-bw");
  CHECK(res2->rule == SRule::Zero);
  CHECK(sequentEqual(res2->conclusion, {C("~a")}));

  // ?c / !d: the non-deterministic choice produces a sum
  SeqDerivPtr qq = SeqDeriv::questW(SeqDeriv::questD(SeqDeriv::ax(C("a")), 0), C("a"));
  // |- ?a, ~a, ?a
  SeqDerivPtr qc = SeqDeriv::questC(qq, 0, 2);                 // |- ?a, ~a
  SeqDerivPtr bd = SeqDeriv::bangD(SeqDeriv::ax(C("~a")), 0);  // |- !~a, a
  SeqDerivPtr cut3 = SeqDeriv::cut(qc, 0, bd, 0);
  CHECK(check(cut3));
  SeqDerivPtr res3 = cutStep(cut3, {}, &name);
  CHECK(name == "key-qc-bd");
  CHECK(res3->rule == SRule::Sum);
  CHECK(check(res3));
  CHECK(sequentEqual(res3->conclusion, cut3->conclusion));
  CHECK(countRule(res3, SRule::BangD) == 2);
  CHECK(countRule(res3, SRule::BangW) == 2);

  // ax against anything returns the other premise
  SeqDerivPtr cut4 = SeqDeriv::cut(SeqDeriv::ax(C("!~a")), 0, l, 0);
  CHECK(check(cut4));
  SeqDerivPtr res4 = cutStep(cut4, {}, &name);
  CHECK(name == "key-ax");
  CHECK(res4 == l);
}

TEST_CASE("conclusion preserved by every cut step and congruence step") {
  // cut over sum duplicates; cut over zero collapses
  SeqDerivPtr sl = SeqDeriv::sum(SeqDeriv::ax(C("a")), SeqDeriv::ax(C("a")));
  SeqDerivPtr cut = SeqDeriv::cut(sl, 0, SeqDeriv::ax(C("~a")), 0);
  std::string name;
  SeqDerivPtr res = cutStep(cut, {}, &name);
  CHECK(name == "eq-sum-left");
  CHECK(res->rule == SRule::Sum);
  CHECK(check(res));
  CHECK(sequentEqual(res->conclusion, cut->conclusion));

  SeqDerivPtr zcut = SeqDeriv::cut(SeqDeriv::zero({C("b"), C("a")}), 1,
                                   SeqDeriv::ax(C("~a")), 0);
  SeqDerivPtr zres = cutStep(zcut, {}, &name);
  CHECK(name == "eq-zero");
  CHECK(zres->rule == SRule::Zero);
  CHECK(sequentEqual(zres->conclusion, zcut->conclusion));
}

TEST_CASE("paper section-2 counterexample: cut elimination differs after eta") {
  // pi = (ax |- !~a, ?a) cut (?w over zero |- ?a)
  SeqDerivPtr ax = SeqDeriv::axPair(C("!~a"), C("?a"));
  SeqDerivPtr qw = SeqDeriv::questW(SeqDeriv::zero({}), C("a"));  // |- ?a
  SeqDerivPtr pi = SeqDeriv::cut(ax, 0, qw, 0);
  CHECK(check(pi));

  auto [res, trace] = cutEliminate(pi);
  CHECK(isCutFree(res));
  CHECK(check(res));
  CHECK(derivEqual(res, qw));  // exactly the ?w proof

  SeqDerivPtr piEta = etaExpand(pi);
  CHECK(check(piEta));
  auto [res2, trace2] = cutEliminate(piEta);
  CHECK(isCutFree(res2));
  CHECK(derivEqual(res2, SeqDeriv::zero({C("?a")})));  // the zero proof
  CHECK(!derivEqual(res, res2));
  // eta-expandedness is preserved along the trace
  SeqDerivPtr cur = piEta;
  for (const auto& e : trace2.entries) {
    cur = cutStep(cur, e.redex);
    CHECK(isEtaExpanded(cur));
    CHECK(check(cur));
    CHECK(sequentEqual(cur->conclusion, piEta->conclusion));
  }
}

TEST_CASE("cut eliminate leaves cut-free derivations untouched") {
  SeqDerivPtr d = SeqDeriv::questW(SeqDeriv::ax(C("a")), C("b"));
  auto [res, trace] = cutEliminate(d);
  CHECK(res == d);
  CHECK(trace.entries.empty());
}

TEST_CASE("figure replay: example of the cut-elimination procedure") {
  // pi1 = zero |- a, a ; the contracted dereliction tower cut against !d(ax)
  Formula a = C("a");
  SeqDerivPtr pi1 = SeqDeriv::zero({a, a});
  SeqDerivPtr d1 = SeqDeriv::questD(pi1, 1);       // |- a, ?a
  SeqDerivPtr d2 = SeqDeriv::questD(d1, 0);        // |- ?a, ?a
  SeqDerivPtr qc = SeqDeriv::questC(d2, 0, 1);     // |- ?a
  SeqDerivPtr pi = SeqDeriv::ax(C("~a"));          // |- ~a, a
  SeqDerivPtr bd = SeqDeriv::bangD(pi, 0);         // |- !~a, a
  SeqDerivPtr root = SeqDeriv::cut(qc, 0, bd, 0);  // |- a
  CHECK(check(root));

  std::string name;
  // step 1: ?c / !d key case
  SeqDerivPtr s1 = cutStep(root, {}, &name);
  CHECK(name == "key-qc-bd");
  CHECK(check(s1));
  CHECK(sequentEqual(s1->conclusion, root->conclusion));
  // step 2: in the second branch, ?d / !w mismatch
  SeqDerivPtr s2 = cutStep(s1, {1, 0}, &name);
  CHECK(name == "key-qd-bw");
  CHECK(check(s2));
  // congruence: the zero premise absorbs the branch's outer cut
  SeqDerivPtr s3 = cutStep(s2, {1}, &name);
  CHECK(name == "eq-zero");
  CHECK(check(s3));
  CHECK(sequentEqual(s3->conclusion, root->conclusion));
  CHECK(s3->premises[1]->rule == SRule::Zero);
  // step 3: inner ?d / !d within the surviving branch
  SeqDerivPtr s4 = cutStep(s3, {0, 0}, &name);
  CHECK(name == "key-qd-bd");
  CHECK(check(s4));
  // step 4: commute the branch's outer cut past the inner cut
  SeqDerivPtr s5 = cutStep(s4, {0}, &name);
  CHECK(name == "comm-left-cut");
  CHECK(check(s5));
  // step 5: ?d / !w inside
  SeqDerivPtr s6 = cutStep(s5, {0, 0}, &name);
  CHECK(name == "key-qd-bw");
  CHECK(check(s6));
  SeqDerivPtr s7 = cutStep(s6, {0}, &name);
  CHECK(name == "eq-zero");
  // final congruence: a single zero with the original conclusion
  SeqDerivPtr s8 = canonicalForm(s7);
  CHECK(s8->rule == SRule::Zero);
  CHECK(sequentEqual(s8->conclusion, root->conclusion));
  // the strategy-driven eliminator agrees
  auto [nf, trace] = cutEliminate(root);
  CHECK(isCutFree(nf));
  CHECK(sequentEqual(nf->conclusion, root->conclusion));
  CHECK(canonicalForm(nf)->rule == SRule::Zero);
}
