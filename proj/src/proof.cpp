#include "mallnet/proof.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

namespace mall {

// ------------------------------------------------------------ constructors

ProofPtr ax(std::string atom) {
  auto p = std::make_shared<Proof>();
  p->rule = Rule::Ax;
  p->ax_lit = Literal{std::move(atom), true};
  return p;
}

ProofPtr perm(std::vector<int> sigma, ProofPtr sub) {
  auto p = std::make_shared<Proof>();
  p->rule = Rule::Perm;
  p->perm = std::move(sigma);
  p->sub0 = std::move(sub);
  return p;
}

ProofPtr parr(ProofPtr sub) {
  auto p = std::make_shared<Proof>();
  p->rule = Rule::Parr;
  p->sub0 = std::move(sub);
  return p;
}

ProofPtr plus1(FormulaPtr right_summand, ProofPtr sub) {
  auto p = std::make_shared<Proof>();
  p->rule = Rule::Plus1;
  p->other = std::move(right_summand);
  p->sub0 = std::move(sub);
  return p;
}

ProofPtr plus2(FormulaPtr left_summand, ProofPtr sub) {
  auto p = std::make_shared<Proof>();
  p->rule = Rule::Plus2;
  p->other = std::move(left_summand);
  p->sub0 = std::move(sub);
  return p;
}

ProofPtr tensor(ProofPtr left, ProofPtr right) {
  auto p = std::make_shared<Proof>();
  p->rule = Rule::Tensor;
  p->sub0 = std::move(left);
  p->sub1 = std::move(right);
  return p;
}

ProofPtr with(ProofPtr left, ProofPtr right) {
  auto p = std::make_shared<Proof>();
  p->rule = Rule::With;
  p->sub0 = std::move(left);
  p->sub1 = std::move(right);
  return p;
}

bool equal(const ProofPtr& a, const ProofPtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b || a->rule != b->rule) return false;
  switch (a->rule) {
    case Rule::Ax: return a->ax_lit == b->ax_lit;
    case Rule::Perm: return a->perm == b->perm && equal(a->sub0, b->sub0);
    case Rule::Parr: return equal(a->sub0, b->sub0);
    case Rule::Plus1:
    case Rule::Plus2:
      return equal(a->other, b->other) && equal(a->sub0, b->sub0);
    case Rule::Tensor:
    case Rule::With:
      return equal(a->sub0, b->sub0) && equal(a->sub1, b->sub1);
  }
  return false;
}

int rule_count(const ProofPtr& p) {
  if (!p) return 0;
  int n = p->rule == Rule::Perm ? 0 : 1;
  return n + rule_count(p->sub0) + rule_count(p->sub1);
}

ProofPtr subproof_at(const ProofPtr& p, std::string_view path) {
  ProofPtr cur = p;
  for (char c : path) {
    if (!cur) return nullptr;
    if (c == '0')
      cur = cur->sub0;
    else if (c == '1')
      cur = cur->sub1;
    else
      return nullptr;
  }
  return cur;
}

// ---------------------------------------------------------------- checking

namespace {

const Sequent* check_rec(const ProofPtr& p, std::string& path, RuleMismatch& err) {
  if (p->cached_conclusion) return p->cached_conclusion.get();
  auto fail = [&](std::string reason, bool ctx_mismatch = false) -> const Sequent* {
    err = RuleMismatch{path, std::move(reason), ctx_mismatch};
    return nullptr;
  };

  Sequent concl;
  switch (p->rule) {
    case Rule::Ax: {
      if (!p->ax_lit.positive || p->ax_lit.atom.empty())
        return fail("ax requires a positive atom");
      concl.formulas = {make_leaf(p->ax_lit), make_leaf(negate(p->ax_lit))};
      break;
    }
    case Rule::Perm: {
      path.push_back('0');
      const Sequent* s = check_rec(p->sub0, path, err);
      path.pop_back();
      if (!s) return nullptr;
      int n = s->size();
      if (static_cast<int>(p->perm.size()) != n)
        return fail("permutation length does not match the premise");
      std::vector<bool> seen(n, false);
      for (int v : p->perm) {
        if (v < 1 || v > n || seen[v - 1])
          return fail("permutation is not a bijection on 1..n");
        seen[v - 1] = true;
      }
      for (int i = 0; i < n; ++i)
        concl.formulas.push_back(s->formulas[p->perm[i] - 1]);
      break;
    }
    case Rule::Parr: {
      path.push_back('0');
      const Sequent* s = check_rec(p->sub0, path, err);
      path.pop_back();
      if (!s) return nullptr;
      int n = s->size();
      if (n < 2) return fail("parr needs at least two formulas");
      concl.formulas.assign(s->formulas.begin(), s->formulas.end() - 2);
      concl.formulas.push_back(
          make_bin(Conn::Par, s->formulas[n - 2], s->formulas[n - 1]));
      break;
    }
    case Rule::Plus1:
    case Rule::Plus2: {
      path.push_back('0');
      const Sequent* s = check_rec(p->sub0, path, err);
      path.pop_back();
      if (!s) return nullptr;
      if (!p->other) return fail("plus rule is missing the absent summand");
      concl.formulas.assign(s->formulas.begin(), s->formulas.end() - 1);
      FormulaPtr active = s->formulas.back();
      concl.formulas.push_back(p->rule == Rule::Plus1
                                   ? make_bin(Conn::Plus, active, p->other)
                                   : make_bin(Conn::Plus, p->other, active));
      break;
    }
    case Rule::Tensor: {
      path.push_back('0');
      const Sequent* s0 = check_rec(p->sub0, path, err);
      path.pop_back();
      if (!s0) return nullptr;
      path.push_back('1');
      const Sequent* s1 = check_rec(p->sub1, path, err);
      path.pop_back();
      if (!s1) return nullptr;
      concl.formulas.assign(s0->formulas.begin(), s0->formulas.end() - 1);
      concl.formulas.push_back(
          make_bin(Conn::Tensor, s0->formulas.back(), s1->formulas.front()));
      concl.formulas.insert(concl.formulas.end(), s1->formulas.begin() + 1,
                            s1->formulas.end());
      break;
    }
    case Rule::With: {
      path.push_back('0');
      const Sequent* s0 = check_rec(p->sub0, path, err);
      path.pop_back();
      if (!s0) return nullptr;
      path.push_back('1');
      const Sequent* s1 = check_rec(p->sub1, path, err);
      path.pop_back();
      if (!s1) return nullptr;
      bool ctx_ok = s0->size() == s1->size();
      for (int i = 0; ctx_ok && i < s0->size() - 1; ++i)
        ctx_ok = equal(s0->formulas[i], s1->formulas[i]);
      if (!ctx_ok)
        return fail("with premises do not share a context", true);
      concl.formulas.assign(s0->formulas.begin(), s0->formulas.end() - 1);
      concl.formulas.push_back(
          make_bin(Conn::With, s0->formulas.back(), s1->formulas.back()));
      break;
    }
  }
  p->cached_conclusion = std::make_shared<const Sequent>(std::move(concl));
  return p->cached_conclusion.get();
}

}  // namespace

CheckResult check_proof(const ProofPtr& p) {
  if (!p) return {std::nullopt, RuleMismatch{"", "null proof"}};
  std::string path;
  RuleMismatch err;
  const Sequent* s = check_rec(p, path, err);
  if (!s) return {std::nullopt, err};
  return {*s, std::nullopt};
}

const Sequent& conclusion(const ProofPtr& p) {
  if (!p->cached_conclusion) {
    auto r = check_proof(p);
    if (!r.ok())
      throw std::invalid_argument("invalid proof at node '" + r.error->path +
                                  "': " + r.error->reason);
  }
  return *p->cached_conclusion;
}

// -------------------------------------------------------------- text format

std::string render(const ProofPtr& p) {
  switch (p->rule) {
    case Rule::Ax: return "(ax " + p->ax_lit.atom + ")";
    case Rule::Perm: {
      std::string s = "(perm (";
      for (size_t i = 0; i < p->perm.size(); ++i) {
        if (i) s += ' ';
        s += std::to_string(p->perm[i]);
      }
      return s + ") " + render(p->sub0) + ")";
    }
    case Rule::Parr: return "(parr " + render(p->sub0) + ")";
    case Rule::Plus1:
      return "(plus1 " + render(p->other) + " " + render(p->sub0) + ")";
    case Rule::Plus2:
      return "(plus2 " + render(p->other) + " " + render(p->sub0) + ")";
    case Rule::Tensor:
      return "(tensor " + render(p->sub0) + " " + render(p->sub1) + ")";
    case Rule::With:
      return "(with " + render(p->sub0) + " " + render(p->sub1) + ")";
  }
  return "";
}

namespace {

struct ProofParser {
  std::string_view text;
  size_t pos = 0;
  std::optional<ParseError> err = std::nullopt;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool expect(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    fail(std::string("expected '") + c + "'");
    return false;
  }
  void fail(std::string msg) {
    if (!err) err = ParseError{std::move(msg), pos};
  }

  std::string read_symbol() {
    skip_ws();
    size_t start = pos;
    while (pos < text.size() &&
           (std::islower(static_cast<unsigned char>(text[pos])) ||
            std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    return std::string(text.substr(start, pos - start));
  }

  ProofPtr parse() {
    if (!expect('(')) return nullptr;
    std::string head = read_symbol();
    ProofPtr result;
    if (head == "ax") {
      std::string atom = read_symbol();
      if (atom.empty() || !std::islower(static_cast<unsigned char>(atom[0]))) {
        fail("ax expects an atom name");
        return nullptr;
      }
      result = ax(atom);
    } else if (head == "perm") {
      if (!expect('(')) return nullptr;
      std::vector<int> sigma;
      while (true) {
        skip_ws();
        if (pos < text.size() && text[pos] == ')') {
          ++pos;
          break;
        }
        if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) {
          fail("expected a 1-based position in permutation list");
          return nullptr;
        }
        int v = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
          v = v * 10 + (text[pos++] - '0');
        sigma.push_back(v);
      }
      ProofPtr sub = parse();
      if (!sub) return nullptr;
      result = perm(std::move(sigma), std::move(sub));
    } else if (head == "parr") {
      ProofPtr sub = parse();
      if (!sub) return nullptr;
      result = parr(std::move(sub));
    } else if (head == "plus1" || head == "plus2") {
      skip_ws();
      auto f = parse_formula_prefix(text, pos);
      if (!f.formula) {
        err = f.error;
        return nullptr;
      }
      ProofPtr sub = parse();
      if (!sub) return nullptr;
      result = head == "plus1" ? plus1(f.formula, std::move(sub))
                               : plus2(f.formula, std::move(sub));
    } else if (head == "tensor" || head == "with") {
      ProofPtr a = parse();
      if (!a) return nullptr;
      ProofPtr b = parse();
      if (!b) return nullptr;
      result = head == "tensor" ? tensor(std::move(a), std::move(b))
                                : with(std::move(a), std::move(b));
    } else {
      fail("unknown rule '" + head + "'");
      return nullptr;
    }
    if (!expect(')')) return nullptr;
    return result;
  }
};

}  // namespace

ProofParseResult parse_proof(std::string_view text) {
  ProofParser p{text};
  ProofPtr result = p.parse();
  if (!result) return {nullptr, p.err};
  p.skip_ws();
  if (p.pos < text.size())
    return {nullptr, ParseError{"unexpected trailing input", p.pos}};
  return {result, std::nullopt};
}

// -------------------------------------------------------------- enumeration

namespace {

std::string seq_key(const std::vector<FormulaPtr>& fs) {
  std::string k;
  for (const auto& f : fs) {
    k += render(f);
    k += '\n';
  }
  return k;
}

std::vector<FormulaPtr> sorted_by_render(std::vector<FormulaPtr> fs) {
  std::stable_sort(fs.begin(), fs.end(), [](const FormulaPtr& a, const FormulaPtr& b) {
    return render(a) < render(b);
  });
  return fs;
}

// sigma with to[j] = from[sigma(j)]; empty when identity. Duplicate formulas
// are matched left to right.
std::vector<int> perm_between(const std::vector<FormulaPtr>& from,
                              const std::vector<FormulaPtr>& to) {
  size_t n = from.size();
  std::vector<std::string> fk(n), tk(n);
  for (size_t i = 0; i < n; ++i) fk[i] = render(from[i]);
  for (size_t i = 0; i < n; ++i) tk[i] = render(to[i]);
  std::vector<bool> used(n, false);
  std::vector<int> sigma(n, 0);
  for (size_t j = 0; j < n; ++j) {
    bool found = false;
    for (size_t k = 0; k < n; ++k) {
      if (!used[k] && fk[k] == tk[j]) {
        used[k] = true;
        sigma[j] = static_cast<int>(k) + 1;
        found = true;
        break;
      }
    }
    if (!found) throw std::logic_error("perm_between: not a permutation");
  }
  bool identity = true;
  for (size_t j = 0; j < n; ++j) identity = identity && sigma[j] == static_cast<int>(j) + 1;
  if (identity) return {};
  return sigma;
}

ProofPtr maybe_perm(std::vector<int> sigma, ProofPtr p) {
  if (sigma.empty()) return p;
  return perm(std::move(sigma), std::move(p));
}

// Exhaustive multiset proof search, memoized on the sorted sequent.
struct Enumerator {
  std::map<std::string, std::vector<ProofPtr>> memo;

  // fs must be sorted by render.
  const std::vector<ProofPtr>& search(const std::vector<FormulaPtr>& fs) {
    std::string key = seq_key(fs);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;

    std::vector<ProofPtr> out;

    // Axiom: exactly two dual literals (sorting puts the positive first).
    if (fs.size() == 2 && fs[0]->is_leaf() && fs[1]->is_leaf() &&
        dual_pair(fs[0]->lit, fs[1]->lit)) {
      out.push_back(ax(fs[0]->lit.positive ? fs[0]->lit.atom : fs[1]->lit.atom));
    }

    // One principal per distinct formula value (duplicates yield the same
    // proof modulo perms).
    for (size_t i = 0; i < fs.size(); ++i) {
      if (i > 0 && render(fs[i]) == render(fs[i - 1])) continue;
      const FormulaPtr& f = fs[i];
      if (f->is_leaf()) continue;
      std::vector<FormulaPtr> ctx;
      for (size_t j = 0; j < fs.size(); ++j)
        if (j != i) ctx.push_back(fs[j]);

      auto finish = [&](ProofPtr q, const std::vector<FormulaPtr>& got) {
        out.push_back(maybe_perm(perm_between(got, fs), std::move(q)));
      };
      // Proofs of `target` (any order), via the sorted memo entry.
      auto prove_order = [&](const std::vector<FormulaPtr>& target)
          -> std::vector<ProofPtr> {
        auto sorted = sorted_by_render(target);
        std::vector<ProofPtr> r;
        for (const auto& q : search(sorted))
          r.push_back(maybe_perm(perm_between(sorted, target), q));
        return r;
      };

      switch (f->conn) {
        case Conn::Par: {
          auto target = ctx;
          target.push_back(f->left);
          target.push_back(f->right);
          std::vector<FormulaPtr> got = ctx;
          got.push_back(f);
          for (const auto& q : prove_order(target)) finish(parr(q), got);
          break;
        }
        case Conn::Plus: {
          std::vector<FormulaPtr> got = ctx;
          got.push_back(f);
          auto t1 = ctx;
          t1.push_back(f->left);
          for (const auto& q : prove_order(t1)) finish(plus1(f->right, q), got);
          auto t2 = ctx;
          t2.push_back(f->right);
          for (const auto& q : prove_order(t2)) finish(plus2(f->left, q), got);
          break;
        }
        case Conn::With: {
          auto t0 = ctx;
          t0.push_back(f->left);
          auto t1 = ctx;
          t1.push_back(f->right);
          auto ps0 = prove_order(t0);
          if (ps0.empty()) break;
          auto ps1 = prove_order(t1);
          std::vector<FormulaPtr> got = ctx;
          got.push_back(f);
          for (const auto& a : ps0)
            for (const auto& b : ps1) finish(with(a, b), got);
          break;
        }
        case Conn::Tensor: {
          size_t m = ctx.size();
          std::set<std::string> seen_splits;
          for (size_t mask = 0; mask < (size_t{1} << m); ++mask) {
            std::vector<FormulaPtr> gamma, delta;
            for (size_t j = 0; j < m; ++j)
              (mask >> j & 1 ? gamma : delta).push_back(ctx[j]);
            std::string split_key = seq_key(gamma) + "|" + seq_key(delta);
            if (!seen_splits.insert(split_key).second) continue;
            auto t0 = gamma;
            t0.push_back(f->left);
            std::vector<FormulaPtr> t1{f->right};
            t1.insert(t1.end(), delta.begin(), delta.end());
            auto ps0 = prove_order(t0);
            if (ps0.empty()) continue;
            auto ps1 = prove_order(t1);
            std::vector<FormulaPtr> got = gamma;
            got.push_back(f);
            got.insert(got.end(), delta.begin(), delta.end());
            for (const auto& a : ps0)
              for (const auto& b : ps1) finish(tensor(a, b), got);
          }
          break;
        }
      }
    }
    return memo.emplace(std::move(key), std::move(out)).first->second;
  }
};

}  // namespace

std::vector<ProofPtr> enumerate_proofs(const Sequent& s) {
  Enumerator e;
  auto sorted = sorted_by_render(s.formulas);
  std::vector<ProofPtr> out;
  for (const auto& q : e.search(sorted))
    out.push_back(maybe_perm(perm_between(sorted, s.formulas), q));
  return out;
}

bool provable(const Sequent& s) { return !enumerate_proofs(s).empty(); }

// --------------------------------------------------------------- generation

namespace {

const char* const kAtomPool[] = {"a", "b", "c"};

std::string rand_atom(std::mt19937& rng) { return kAtomPool[rng() % 3]; }

FormulaPtr rand_small_formula(std::mt19937& rng) {
  unsigned r = rng() % 6;
  auto lit = [&] { return make_leaf(rand_atom(rng), rng() % 2 == 0); };
  if (r < 4) return lit();
  Conn c = static_cast<Conn>(rng() % 4);
  return make_bin(c, lit(), lit());
}

ProofPtr wrap_random_perm(ProofPtr p, std::mt19937& rng) {
  int n = conclusion(p).size();
  std::vector<int> sigma(n);
  for (int i = 0; i < n; ++i) sigma[i] = i + 1;
  for (int i = n - 1; i > 0; --i) {
    int j = static_cast<int>(rng() % (i + 1));
    std::swap(sigma[i], sigma[j]);
  }
  bool identity = true;
  for (int i = 0; i < n; ++i) identity = identity && sigma[i] == i + 1;
  if (identity) return p;
  return perm(std::move(sigma), std::move(p));
}

// Random plus1/plus2 on the last formula; costs one rule.
ProofPtr rand_plus(ProofPtr p, std::mt19937& rng) {
  FormulaPtr f = rand_small_formula(rng);
  if (rng() % 2 == 0) return plus1(std::move(f), std::move(p));
  return plus2(std::move(f), std::move(p));
}

ProofPtr gen_rec(std::mt19937& rng, int& budget) {
  ProofPtr p = ax(rand_atom(rng));
  --budget;
  while (budget > 0) {
    if (conclusion(p).size() >= 2 && rng() % 2 == 0)
      p = wrap_random_perm(std::move(p), rng);
    unsigned r = rng() % 10;
    if (r < 4) {
      // Axiom extension: tensor the last formula with a fresh axiom.
      if (budget >= 2) {
        p = tensor(std::move(p), ax(rand_atom(rng)));
        budget -= 2;
      } else {
        p = rand_plus(std::move(p), rng);
        --budget;
      }
    } else if (r < 6) {
      if (conclusion(p).size() >= 2) {
        p = parr(std::move(p));
        --budget;
      } else {
        p = rand_plus(std::move(p), rng);
        --budget;
      }
    } else if (r < 8) {
      // Tensor-join with an independently generated right premise.
      if (budget >= 2) {
        --budget;  // the tensor itself
        ProofPtr q = gen_rec(rng, budget);
        p = tensor(std::move(p), std::move(q));
      } else {
        p = rand_plus(std::move(p), rng);
        --budget;
      }
    } else {
      // With: both premises grown from p by plus-rules on the last
      // formula, so the context is shared by construction. The second
      // premise duplicates p's whole derivation, which counts against
      // the budget like any other rules.
      const int dup = rule_count(p);
      if (rng() % 2 != 0 || budget < 1 + dup) {
        p = rand_plus(std::move(p), rng);
        --budget;
      } else {
        budget -= 1 + dup;  // the with itself plus the copied premise
        ProofPtr p0 = p, p1 = p;
        if (budget >= 1 && rng() % 2 == 0) {
          p0 = rand_plus(std::move(p0), rng);
          --budget;
        }
        if (budget >= 1 && rng() % 2 == 0) {
          p1 = rand_plus(std::move(p1), rng);
          --budget;
        }
        p = with(std::move(p0), std::move(p1));
      }
    }
  }
  return p;
}

}  // namespace

ProofPtr random_proof(unsigned seed, int max_rules) {
  if (max_rules < 1) throw std::invalid_argument("max_rules must be >= 1");
  std::mt19937 rng(seed);
  int budget = max_rules;
  return gen_rec(rng, budget);
}

// ------------------------------------------------------------ transposition

ProofPtr normalize_perms(const ProofPtr& p, std::string* tracked) {
  auto norm_child = [&](const ProofPtr& c, char idx) {
    std::string sub;
    std::string* subp = nullptr;
    if (tracked && !tracked->empty() && (*tracked)[0] == idx) {
      sub = tracked->substr(1);
      subp = &sub;
    }
    ProofPtr nc = normalize_perms(c, subp);
    if (subp) *tracked = std::string(1, idx) + sub;
    return nc;
  };

  switch (p->rule) {
    case Rule::Ax: return p;
    case Rule::Parr: return parr(norm_child(p->sub0, '0'));
    case Rule::Plus1: return plus1(p->other, norm_child(p->sub0, '0'));
    case Rule::Plus2: return plus2(p->other, norm_child(p->sub0, '0'));
    case Rule::Tensor: {
      auto a = norm_child(p->sub0, '0');
      auto b = norm_child(p->sub1, '1');
      return tensor(std::move(a), std::move(b));
    }
    case Rule::With: {
      auto a = norm_child(p->sub0, '0');
      auto b = norm_child(p->sub1, '1');
      return with(std::move(a), std::move(b));
    }
    case Rule::Perm: {
      ProofPtr c = norm_child(p->sub0, '0');
      std::vector<int> sigma = p->perm;
      while (c->rule == Rule::Perm) {
        // perm_sigma(perm_tau(X)) = perm_rho(X) with rho(i) = tau(sigma(i)).
        const auto& tau = c->perm;
        std::vector<int> rho(sigma.size());
        for (size_t i = 0; i < sigma.size(); ++i) rho[i] = tau[sigma[i] - 1];
        sigma = std::move(rho);
        c = c->sub0;
        if (tracked && !tracked->empty() && (*tracked)[0] == '0') {
          // The inner perm node vanished: "0" -> "", "00rest" -> "0rest".
          *tracked = tracked->size() == 1 ? std::string()
                                          : "0" + tracked->substr(2);
        }
      }
      bool identity = true;
      for (size_t i = 0; i < sigma.size(); ++i)
        identity = identity && sigma[i] == static_cast<int>(i) + 1;
      if (identity) {
        if (tracked && !tracked->empty() && (*tracked)[0] == '0')
          *tracked = tracked->substr(1);
        return c;
      }
      return perm(std::move(sigma), std::move(c));
    }
  }
  return p;
}

namespace {

// Rebuilds p with the node at `path` replaced.
ProofPtr splice(const ProofPtr& p, std::string_view path, const ProofPtr& repl) {
  if (path.empty()) return repl;
  char c = path[0];
  ProofPtr s0 = p->sub0, s1 = p->sub1;
  if (c == '0')
    s0 = splice(s0, path.substr(1), repl);
  else
    s1 = splice(s1, path.substr(1), repl);
  switch (p->rule) {
    case Rule::Perm: return perm(p->perm, s0);
    case Rule::Parr: return parr(s0);
    case Rule::Plus1: return plus1(p->other, s0);
    case Rule::Plus2: return plus2(p->other, s0);
    case Rule::Tensor: return tensor(s0, s1);
    case Rule::With: return with(s0, s1);
    case Rule::Ax: break;
  }
  throw std::logic_error("splice through a leaf");
}

}  // namespace

TransposeResult transpose_adjacent_withs(const ProofPtr& p, std::string_view path) {
  auto fail = [&](std::string why) {
    return TransposeResult{nullptr, "", std::move(why)};
  };
  auto full = check_proof(p);
  if (!full.ok()) return fail("proof does not check: " + full.error->reason);

  ProofPtr w = subproof_at(p, path);
  if (!w) return fail("no node at path");
  if (w->rule != Rule::With) return fail("node at path is not a &-rule");

  // Decompose each premise as perm_tau(with(Q0, Q1)).
  std::vector<int> tau[2];
  ProofPtr inner[2];
  ProofPtr prem[2] = {w->sub0, w->sub1};
  for (int i = 0; i < 2; ++i) {
    ProofPtr q = prem[i];
    if (q->rule == Rule::Perm) {
      tau[i] = q->perm;
      q = q->sub0;
    }
    if (q->rule != Rule::With)
      return fail("premise is not a (perm-wrapped) &-rule");
    inner[i] = q;
  }

  int len = conclusion(prem[0]).size();
  // Where does each inner &'s principal formula (last of its conclusion)
  // land after tau? It must land at a common context position k < len.
  int k[2];
  for (int i = 0; i < 2; ++i) {
    int inner_last = conclusion(inner[i]).size();
    if (tau[i].empty()) {
      k[i] = len;  // identity perm: still the last position
    } else {
      k[i] = -1;
      for (int j = 0; j < len; ++j)
        if (tau[i][j] == inner_last) k[i] = j + 1;
    }
    if (k[i] < 1 || k[i] >= len)
      return fail("inner &-rule does not act on a shared context position");
  }
  if (k[0] != k[1])
    return fail("the two inner &-rules act on different context positions");
  int kk = k[0];

  // New inner layer: branch j pairs the j-th premises of the two old inner
  // &-rules, each re-permuted by the old tau.
  ProofPtr branch[2];
  for (int j = 0; j < 2; ++j) {
    ProofPtr q0 = j == 0 ? inner[0]->sub0 : inner[0]->sub1;
    ProofPtr q1 = j == 0 ? inner[1]->sub0 : inner[1]->sub1;
    ProofPtr a0 = tau[0].empty() ? q0 : perm(tau[0], q0);
    ProofPtr a1 = tau[1].empty() ? q1 : perm(tau[1], q1);
    ProofPtr u = with(std::move(a0), std::move(a1));
    // Move context position kk to the end so the outer & can act on it.
    std::vector<int> pi(len);
    for (int i = 1; i < len; ++i) pi[i - 1] = i < kk ? i : i + 1;
    pi[len - 1] = kk;
    branch[j] = perm(std::move(pi), std::move(u));
  }
  ProofPtr f = with(branch[0], branch[1]);
  // Restore the original formula order.
  std::vector<int> rho(len);
  for (int i = 1; i <= len; ++i) {
    if (i < kk)
      rho[i - 1] = i;
    else if (i == kk)
      rho[i - 1] = len;
    else
      rho[i - 1] = i - 1;
  }
  ProofPtr replaced = splice(p, path, perm(std::move(rho), f));

  std::string new_path = std::string(path) + "0";
  ProofPtr normal = normalize_perms(replaced, &new_path);
  auto chk = check_proof(normal);
  if (!chk.ok() || !equal(*chk.conclusion, conclusion(p)))
    return fail("internal error: transposed proof does not re-check");
  return TransposeResult{normal, new_path, ""};
}

}  // namespace mall
