#include "mallnet/formula.hpp"

#include <cctype>
#include <stdexcept>

namespace mall {

std::string render(const Literal& l) {
  return l.positive ? l.atom : "~" + l.atom;
}

Conn dual(Conn c) {
  switch (c) {
    case Conn::Tensor: return Conn::Par;
    case Conn::Par: return Conn::Tensor;
    case Conn::With: return Conn::Plus;
    case Conn::Plus: return Conn::With;
  }
  throw std::logic_error("bad Conn");
}

char conn_char(Conn c) {
  switch (c) {
    case Conn::Tensor: return '*';
    case Conn::Par: return '|';
    case Conn::With: return '&';
    case Conn::Plus: return '+';
  }
  throw std::logic_error("bad Conn");
}

const char* conn_name(Conn c) {
  switch (c) {
    case Conn::Tensor: return "tensor";
    case Conn::Par: return "par";
    case Conn::With: return "with";
    case Conn::Plus: return "plus";
  }
  throw std::logic_error("bad Conn");
}

FormulaPtr make_leaf(Literal l) {
  auto f = std::make_shared<Formula>();
  f->lit = std::move(l);
  return f;
}

FormulaPtr make_leaf(std::string atom, bool positive) {
  return make_leaf(Literal{std::move(atom), positive});
}

FormulaPtr make_bin(Conn c, FormulaPtr l, FormulaPtr r) {
  auto f = std::make_shared<Formula>();
  f->conn = c;
  f->left = std::move(l);
  f->right = std::move(r);
  return f;
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->is_leaf() != b->is_leaf()) return false;
  if (a->is_leaf()) return a->lit == b->lit;
  return a->conn == b->conn && equal(a->left, b->left) &&
         equal(a->right, b->right);
}

FormulaPtr negate(const FormulaPtr& f) {
  if (f->is_leaf()) return make_leaf(negate(f->lit));
  return make_bin(dual(f->conn), negate(f->left), negate(f->right));
}

int leaf_count(const FormulaPtr& f) {
  if (f->is_leaf()) return 1;
  return leaf_count(f->left) + leaf_count(f->right);
}

static void collect_leaves(const FormulaPtr& f, std::vector<Literal>& out) {
  if (f->is_leaf()) {
    out.push_back(f->lit);
    return;
  }
  collect_leaves(f->left, out);
  collect_leaves(f->right, out);
}

std::vector<Literal> leaves(const FormulaPtr& f) {
  std::vector<Literal> out;
  collect_leaves(f, out);
  return out;
}

int vertex_count(const FormulaPtr& f) {
  if (f->is_leaf()) return 1;
  return 1 + vertex_count(f->left) + vertex_count(f->right);
}

static void render_rec(const FormulaPtr& f, std::string& out) {
  if (f->is_leaf()) {
    if (!f->lit.positive) out += '~';
    out += f->lit.atom;
    return;
  }
  out += '(';
  render_rec(f->left, out);
  out += ' ';
  out += conn_char(f->conn);
  out += ' ';
  render_rec(f->right, out);
  out += ')';
}

std::string render(const FormulaPtr& f) {
  std::string out;
  render_rec(f, out);
  return out;
}

// ----------------------------------------------------------------- parsing
//
// Tiny recursive-descent parser over a shared cursor. Whitespace is free
// between tokens.

namespace {

struct Cursor {
  std::string_view text;
  size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= text.size();
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
};

bool is_atom_start(char c) { return c >= 'a' && c <= 'z'; }
bool is_atom_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
}

std::optional<Conn> conn_of(char c) {
  switch (c) {
    case '*': return Conn::Tensor;
    case '|': return Conn::Par;
    case '&': return Conn::With;
    case '+': return Conn::Plus;
    default: return std::nullopt;
  }
}

struct Parser {
  Cursor cur;
  std::optional<ParseError> err = std::nullopt;

  void fail(std::string msg) {
    if (!err) err = ParseError{std::move(msg), cur.pos};
  }

  FormulaPtr parse_literal() {
    bool positive = true;
    if (cur.peek() == '~') {
      positive = false;
      ++cur.pos;
      cur.skip_ws();
    }
    if (cur.pos >= cur.text.size() || !is_atom_start(cur.text[cur.pos])) {
      fail("expected atom name ([a-z][a-z0-9_]*)");
      return nullptr;
    }
    size_t start = cur.pos;
    while (cur.pos < cur.text.size() && is_atom_char(cur.text[cur.pos])) ++cur.pos;
    return make_leaf(std::string(cur.text.substr(start, cur.pos - start)), positive);
  }

  // item := literal | '(' formula ')'
  FormulaPtr parse_item() {
    char c = cur.peek();
    if (c == '(') {
      ++cur.pos;
      FormulaPtr f = parse_formula_level();
      if (!f) return nullptr;
      if (cur.peek() != ')') {
        fail("expected ')'");
        return nullptr;
      }
      ++cur.pos;
      return f;
    }
    if (c == '~' || is_atom_start(c)) return parse_literal();
    fail("expected formula");
    return nullptr;
  }

  // formula := item (BINOP item)?  -- nesting requires parentheses, so a
  // second binary operator at the same level is an error.
  FormulaPtr parse_formula_level() {
    FormulaPtr lhs = parse_item();
    if (!lhs) return nullptr;
    auto c = conn_of(cur.peek());
    if (!c) return lhs;
    ++cur.pos;
    FormulaPtr rhs = parse_item();
    if (!rhs) return nullptr;
    if (conn_of(cur.peek())) {
      fail("connectives are non-associative; parenthesise nested applications");
      return nullptr;
    }
    return make_bin(*c, std::move(lhs), std::move(rhs));
  }
};

}  // namespace

FormulaParseResult parse_formula(std::string_view text) {
  Parser p{Cursor{text}};
  FormulaPtr f = p.parse_formula_level();
  if (!f) return {nullptr, p.err};
  if (!p.cur.eof()) {
    return {nullptr, ParseError{"unexpected trailing input", p.cur.pos}};
  }
  return {f, std::nullopt};
}

FormulaParseResult parse_formula_prefix(std::string_view text, size_t& pos) {
  Parser p{Cursor{text, pos}};
  FormulaPtr f = p.parse_formula_level();
  pos = p.cur.pos;
  if (!f) return {nullptr, p.err};
  return {f, std::nullopt};
}

// ---------------------------------------------------------------- sequents

int Sequent::leaf_count() const {
  int n = 0;
  for (const auto& f : formulas) n += mall::leaf_count(f);
  return n;
}

int Sequent::leaf_begin(int fi) const {
  int n = 1;
  for (int i = 0; i < fi; ++i) n += mall::leaf_count(formulas[i]);
  return n;
}

int Sequent::leaf_end(int fi) const {
  return leaf_begin(fi) + mall::leaf_count(formulas[fi]);
}

int Sequent::formula_of_leaf(int leaf) const {
  int n = 1;
  for (int i = 0; i < size(); ++i) {
    int m = n + mall::leaf_count(formulas[i]);
    if (leaf >= n && leaf < m) return i;
    n = m;
  }
  return -1;
}

static const Literal& literal_in(const FormulaPtr& f, int offset) {
  // offset is 0-based within f.
  if (f->is_leaf()) return f->lit;
  int nl = leaf_count(f->left);
  if (offset < nl) return literal_in(f->left, offset);
  return literal_in(f->right, offset - nl);
}

const Literal& Sequent::literal_at(int leaf) const {
  int fi = formula_of_leaf(leaf);
  if (fi < 0) throw std::out_of_range("leaf id out of range");
  return literal_in(formulas[fi], leaf - leaf_begin(fi));
}

bool equal(const Sequent& a, const Sequent& b) {
  if (a.size() != b.size()) return false;
  for (int i = 0; i < a.size(); ++i)
    if (!equal(a.formulas[i], b.formulas[i])) return false;
  return true;
}

std::string render(const Sequent& s) {
  std::string out;
  for (int i = 0; i < s.size(); ++i) {
    if (i) out += ", ";
    out += render(s.formulas[i]);
  }
  return out;
}

SequentParseResult parse_sequent(std::string_view text) {
  Parser p{Cursor{text}};
  Sequent s;
  if (p.cur.eof()) {
    return {std::nullopt, ParseError{"empty sequent", p.cur.pos}};
  }
  while (true) {
    FormulaPtr f = p.parse_formula_level();
    if (!f) return {std::nullopt, p.err};
    s.formulas.push_back(std::move(f));
    if (p.cur.peek() != ',') break;
    ++p.cur.pos;
  }
  if (!p.cur.eof()) {
    return {std::nullopt, ParseError{"unexpected trailing input", p.cur.pos}};
  }
  return {std::move(s), std::nullopt};
}

bool additive_join(const Sequent& s, int x, int y) {
  if (x == y) return false;
  int fx = s.formula_of_leaf(x), fy = s.formula_of_leaf(y);
  if (fx < 0 || fy < 0) throw std::out_of_range("leaf id out of range");
  if (fx != fy) return false;
  // Walk down from the formula root; the first vertex where the two offsets
  // split to different children is the least common ancestor.
  const Formula* v = s.formulas[fx].get();
  int ox = x - s.leaf_begin(fx), oy = y - s.leaf_begin(fx);
  while (true) {
    int nl = leaf_count(v->left);
    bool xl = ox < nl, yl = oy < nl;
    if (xl != yl) return v->conn == Conn::With || v->conn == Conn::Plus;
    if (!xl) { ox -= nl; oy -= nl; }
    v = (xl ? v->left : v->right).get();
  }
}

std::string leaf_path(const Sequent& s, int leaf) {
  int fi = s.formula_of_leaf(leaf);
  if (fi < 0) throw std::out_of_range("leaf id out of range");
  std::string path;
  const Formula* v = s.formulas[fi].get();
  int off = leaf - s.leaf_begin(fi);
  while (!v->is_leaf()) {
    int nl = leaf_count(v->left);
    if (off < nl) {
      path += '0';
      v = v->left.get();
    } else {
      path += '1';
      off -= nl;
      v = v->right.get();
    }
  }
  return path;
}

}  // namespace mall
