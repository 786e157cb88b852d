#include "dill/formula.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace dill {

const std::shared_ptr<const Formula::Node>& Formula::oneNode() {
  static const auto n = std::make_shared<const Node>(Node{Tag::Tensor, "", {}});
  return n;
}

Formula Formula::atom(std::string name) {
  return Formula(std::make_shared<const Node>(Node{Tag::Atom, std::move(name), {}}));
}
Formula Formula::negAtom(std::string name) {
  return Formula(std::make_shared<const Node>(Node{Tag::NegAtom, std::move(name), {}}));
}
Formula Formula::tensor(std::vector<Formula> kids) {
  return Formula(std::make_shared<const Node>(Node{Tag::Tensor, "", std::move(kids)}));
}
Formula Formula::par(std::vector<Formula> kids) {
  return Formula(std::make_shared<const Node>(Node{Tag::Par, "", std::move(kids)}));
}
Formula Formula::bang(Formula f) {
  return Formula(std::make_shared<const Node>(Node{Tag::Bang, "", {std::move(f)}}));
}
Formula Formula::quest(Formula f) {
  return Formula(std::make_shared<const Node>(Node{Tag::Quest, "", {std::move(f)}}));
}
Formula Formula::sum(std::vector<Formula> kids) {
  return Formula(std::make_shared<const Node>(Node{Tag::Sum, "", std::move(kids)}));
}
Formula Formula::hole() {
  return Formula(std::make_shared<const Node>(Node{Tag::Hole, "", {}}));
}

bool Formula::isMell() const {
  if (tag() == Tag::Sum || tag() == Tag::Hole) return false;
  for (const auto& k : kids())
    if (!k.isMell()) return false;
  return true;
}

bool Formula::hasHole() const {
  if (tag() == Tag::Hole) return true;
  for (const auto& k : kids())
    if (k.hasHole()) return true;
  return false;
}

size_t Formula::connectiveCount() const {
  switch (tag()) {
    case Tag::Atom:
    case Tag::NegAtom:
    case Tag::Hole:
      return 0;
    case Tag::Bang:
    case Tag::Quest:
      return 1 + kids()[0].connectiveCount();
    default: {
      // n-ary node = n-1 binary connectives, units count as one.
      size_t c = arity() == 0 ? 1 : arity() - 1;
      for (const auto& k : kids()) c += k.connectiveCount();
      return c;
    }
  }
}

bool Formula::operator==(const Formula& o) const {
  if (n_ == o.n_) return true;
  if (tag() != o.tag() || name() != o.name() || arity() != o.arity()) return false;
  for (size_t i = 0; i < arity(); i++)
    if (!(kids()[i] == o.kids()[i])) return false;
  return true;
}

Formula subterm(const Formula& f, const Path& p) {
  Formula cur = f;
  for (size_t i : p) {
    if (i >= cur.arity()) throw FormulaError("path does not resolve");
    cur = cur.kids()[i];
  }
  return cur;
}

Formula replaceSubterm(const Formula& f, const Path& p, const Formula& g) {
  if (p.empty()) return g;
  if (p[0] >= f.arity()) throw FormulaError("path does not resolve");
  std::vector<Formula> kids = f.kids();
  kids[p[0]] = replaceSubterm(kids[p[0]], Path(p.begin() + 1, p.end()), g);
  switch (f.tag()) {
    case Tag::Tensor: return Formula::tensor(std::move(kids));
    case Tag::Par: return Formula::par(std::move(kids));
    case Tag::Sum: return Formula::sum(std::move(kids));
    case Tag::Bang: return Formula::bang(kids[0]);
    case Tag::Quest: return Formula::quest(kids[0]);
    default: throw FormulaError("cannot replace under a leaf");
  }
}

namespace {

// Cartesian distribution of an n-ary tensor/par over Sum children.
// Each element of the result is one choice of summand per child.
std::vector<std::vector<Formula>> distribute(const std::vector<Formula>& kids,
                                             size_t budget) {
  std::vector<std::vector<Formula>> acc{{}};
  for (const auto& k : kids) {
    if (k.tag() == Tag::Sum) {
      std::vector<std::vector<Formula>> next;
      if (acc.size() * k.arity() > budget)
        throw BudgetExceeded("summand budget exceeded while distributing over +");
      next.reserve(acc.size() * k.arity());
      for (const auto& row : acc)
        for (const auto& s : k.kids()) {
          auto r = row;
          r.push_back(s);
          next.push_back(std::move(r));
        }
      acc = std::move(next);
    } else {
      for (auto& row : acc) row.push_back(k);
    }
  }
  return acc;
}

Formula canonNary(Tag tag, std::vector<Formula> kids, size_t budget);

Formula canon(const Formula& f, size_t budget) {
  switch (f.tag()) {
    case Tag::Atom:
    case Tag::NegAtom:
    case Tag::Hole:
      return f;
    case Tag::Bang:
    case Tag::Quest: {
      Formula k = canon(f.kids()[0], budget);
      if (k.isZero()) return Formula::zero();
      if (k.tag() == Tag::Sum) {
        std::vector<Formula> out;
        out.reserve(k.arity());
        for (const auto& s : k.kids())
          out.push_back(f.tag() == Tag::Bang ? Formula::bang(s) : Formula::quest(s));
        return Formula::sum(std::move(out));
      }
      return f.tag() == Tag::Bang ? Formula::bang(k) : Formula::quest(k);
    }
    case Tag::Tensor:
    case Tag::Par:
    case Tag::Sum: {
      std::vector<Formula> kids;
      kids.reserve(f.arity());
      for (const auto& k : f.kids()) kids.push_back(canon(k, budget));
      return canonNary(f.tag(), std::move(kids), budget);
    }
  }
  throw FormulaError("unreachable");
}

// kids are already canonical.
Formula canonNary(Tag tag, std::vector<Formula> kids, size_t budget) {
  if (tag == Tag::Sum) {
    std::vector<Formula> out;
    for (auto& k : kids) {
      if (k.tag() == Tag::Sum) {
        for (const auto& s : k.kids()) out.push_back(s);
      } else {
        out.push_back(std::move(k));
      }
    }
    if (out.size() > budget) throw BudgetExceeded("summand budget exceeded");
    if (out.size() == 1) return out[0];
    return Formula::sum(std::move(out));
  }
  // tensor / par: 0 annihilates, then distribute over +, then splice.
  for (const auto& k : kids)
    if (k.isZero()) return Formula::zero();
  bool hasSum = false;
  for (const auto& k : kids)
    if (k.tag() == Tag::Sum) hasSum = true;
  if (hasSum) {
    auto rows = distribute(kids, budget);
    std::vector<Formula> out;
    out.reserve(rows.size());
    for (auto& row : rows) out.push_back(canonNary(tag, std::move(row), budget));
    return canonNary(Tag::Sum, std::move(out), budget);
  }
  std::vector<Formula> out;
  for (auto& k : kids) {
    if (k.tag() == tag) {
      for (const auto& s : k.kids()) out.push_back(s);  // splice; units vanish here
    } else {
      out.push_back(std::move(k));
    }
  }
  if (out.size() == 1) return out[0];
  return tag == Tag::Tensor ? Formula::tensor(std::move(out)) : Formula::par(std::move(out));
}

}  // namespace

Formula canonicalize(const Formula& f, size_t budget) { return canon(f, budget); }

bool isCanonical(const Formula& f) { return canonicalize(f) == f; }

Formula negate(const Formula& f) {
  switch (f.tag()) {
    case Tag::Atom: return Formula::negAtom(f.name());
    case Tag::NegAtom: return Formula::atom(f.name());
    case Tag::Bang: return Formula::quest(negate(f.kids()[0]));
    case Tag::Quest: return Formula::bang(negate(f.kids()[0]));
    case Tag::Tensor:
    case Tag::Par: {
      std::vector<Formula> out;
      out.reserve(f.arity());
      for (const auto& k : f.kids()) out.push_back(negate(k));
      return f.tag() == Tag::Tensor ? Formula::par(std::move(out))
                                    : Formula::tensor(std::move(out));
    }
    case Tag::Sum: throw NonMellNegation("negation of + / 0 is undefined");
    case Tag::Hole: throw FormulaError("negation of a hole");
  }
  throw FormulaError("unreachable");
}

std::string sortKey(const Formula& f) {
  switch (f.tag()) {
    case Tag::Atom: return "a" + f.name() + ";";
    case Tag::NegAtom: return "n" + f.name() + ";";
    case Tag::Bang: return "b(" + sortKey(f.kids()[0]) + ")";
    case Tag::Quest: return "q(" + sortKey(f.kids()[0]) + ")";
    case Tag::Hole: return "h;";
    default: {
      char c = f.tag() == Tag::Tensor ? 't' : f.tag() == Tag::Par ? 'p' : 's';
      std::vector<std::string> keys;
      keys.reserve(f.arity());
      for (const auto& k : f.kids()) keys.push_back(sortKey(k));
      std::sort(keys.begin(), keys.end());
      std::string out(1, c);
      out += '(';
      for (const auto& k : keys) out += k;
      out += ')';
      return out;
    }
  }
}

bool equiv(const Formula& f, const Formula& g) {
  return sortKey(canonicalize(f)) == sortKey(canonicalize(g));
}

Formula ones(size_t n) {
  if (n == 1) return Formula::one();
  return Formula::sum(std::vector<Formula>(n, Formula::one()));
}

bool isOnes(const Formula& f, size_t* n) {
  if (f.isOne()) {
    if (n) *n = 1;
    return true;
  }
  if (f.tag() == Tag::Sum) {
    for (const auto& k : f.kids())
      if (!k.isOne()) return false;
    if (n) *n = f.arity();
    return true;
  }
  return false;
}

Context::Context(Formula s) : shape(std::move(s)) {
  size_t holes = 0;
  std::vector<const Formula*> stack{&shape};
  bool sums = false;
  std::vector<Formula> work{shape};
  while (!work.empty()) {
    Formula cur = work.back();
    work.pop_back();
    if (cur.tag() == Tag::Hole) holes++;
    if (cur.tag() == Tag::Sum) sums = true;
    for (const auto& k : cur.kids()) work.push_back(k);
  }
  if (holes != 1) throw FormulaError("context must contain exactly one hole");
  mell = !sums;
}

namespace {
Formula plugRec(const Formula& c, const Formula& f) {
  if (c.tag() == Tag::Hole) return f;
  std::vector<Formula> kids;
  kids.reserve(c.arity());
  for (const auto& k : c.kids()) kids.push_back(plugRec(k, f));
  switch (c.tag()) {
    case Tag::Tensor: return Formula::tensor(std::move(kids));
    case Tag::Par: return Formula::par(std::move(kids));
    case Tag::Sum: return Formula::sum(std::move(kids));
    case Tag::Bang: return Formula::bang(kids[0]);
    case Tag::Quest: return Formula::quest(kids[0]);
    default: return c;
  }
}
}  // namespace

Formula plug(const Context& c, const Formula& f) {
  return canonicalize(plugRec(c.shape, f));
}

// ---------------------------------------------------------------- parsing

namespace {

struct Parser {
  const std::string& s;
  size_t i = 0;

  explicit Parser(const std::string& text) : s(text) {}

  void skipWs() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) i++;
  }
  bool eat(char c) {
    skipWs();
    if (i < s.size() && s[i] == c) {
      i++;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, i + 1); }

  Formula parseSum() {
    Formula f = parsePar();
    std::vector<Formula> kids{f};
    while (eat('+')) kids.push_back(parsePar());
    return kids.size() == 1 ? kids[0] : Formula::sum(std::move(kids));
  }
  Formula parsePar() {
    std::vector<Formula> kids{parseTensor()};
    while (eat('|')) kids.push_back(parseTensor());
    return kids.size() == 1 ? kids[0] : Formula::par(std::move(kids));
  }
  Formula parseTensor() {
    std::vector<Formula> kids{parseUnary()};
    while (eat('*')) kids.push_back(parseUnary());
    return kids.size() == 1 ? kids[0] : Formula::tensor(std::move(kids));
  }
  Formula parseUnary() {
    skipWs();
    if (i >= s.size()) fail("unexpected end of input");
    char c = s[i];
    if (c == '!') {
      i++;
      return Formula::bang(parseUnary());
    }
    if (c == '?') {
      i++;
      return Formula::quest(parseUnary());
    }
    if (c == '~') {
      i++;
      skipWs();
      std::string name = parseAtomName();
      return Formula::negAtom(name);
    }
    if (c == '(') {
      i++;
      Formula f = parseSum();
      if (!eat(')')) fail("expected ')'");
      return f;
    }
    if (c == '1') {
      i++;
      return Formula::one();
    }
    if (c == '0') {
      i++;
      return Formula::zero();
    }
    if (c == '[' ) {
      i++;
      if (!eat(']')) fail("expected ']'");
      return Formula::hole();
    }
    if (std::islower(static_cast<unsigned char>(c))) {
      size_t start = i;
      std::string name = parseAtomName();
      if (name == "bot") return Formula::bot();
      (void)start;
      return Formula::atom(name);
    }
    fail("expected a formula");
  }
  std::string parseAtomName() {
    skipWs();
    if (i >= s.size() || !std::islower(static_cast<unsigned char>(s[i])))
      fail("expected an atom");
    size_t start = i;
    while (i < s.size() && (std::islower(static_cast<unsigned char>(s[i])) ||
                            std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '_'))
      i++;
    return s.substr(start, i - start);
  }
};

int prec(Tag t) {
  switch (t) {
    case Tag::Sum: return 0;
    case Tag::Par: return 1;
    case Tag::Tensor: return 2;
    default: return 3;
  }
}

void printRec(const Formula& f, int parent, std::string& out) {
  switch (f.tag()) {
    case Tag::Atom: out += f.name(); return;
    case Tag::NegAtom:
      out += '~';
      out += f.name();
      return;
    case Tag::Hole: out += "[]"; return;
    case Tag::Bang:
    case Tag::Quest:
      out += f.tag() == Tag::Bang ? '!' : '?';
      printRec(f.kids()[0], 3, out);
      return;
    default: {
      if (f.isOne()) { out += '1'; return; }
      if (f.isBot()) { out += "bot"; return; }
      if (f.isZero()) { out += '0'; return; }
      if (f.arity() == 1) {  // non-canonical singleton; print transparently
        printRec(f.kids()[0], parent, out);
        return;
      }
      int p = prec(f.tag());
      bool paren = p < parent;
      if (paren) out += '(';
      const char* sep = f.tag() == Tag::Sum ? " + " : f.tag() == Tag::Par ? " | " : " * ";
      for (size_t i = 0; i < f.arity(); i++) {
        if (i) out += sep;
        printRec(f.kids()[i], p + 1, out);
      }
      if (paren) out += ')';
      return;
    }
  }
}

}  // namespace

Formula parseFormula(const std::string& text) {
  Parser p(text);
  Formula f = p.parseSum();
  p.skipWs();
  if (p.i != text.size()) p.fail("trailing input");
  return f;
}

std::string printFormula(const Formula& f) {
  std::string out;
  printRec(f, 0, out);
  return out;
}

}  // namespace dill
