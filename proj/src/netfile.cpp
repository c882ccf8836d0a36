#include "mallnet/netfile.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace mall {

namespace {

// ------------------------------------------------------------ line scanning

struct Line {
  int number = 0;  // 1-based
  std::vector<std::string> tokens;
  std::string raw;  // comment stripped, trimmed
};

std::string strip_comment(const std::string& s) {
  auto pos = s.find('#');
  return pos == std::string::npos ? s : s.substr(0, pos);
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::vector<Line> significant_lines(const std::string& text) {
  std::vector<Line> out;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    std::string body = trim(strip_comment(raw));
    if (body.empty()) continue;
    out.push_back({number, split_ws(body), body});
  }
  return out;
}

struct LineError {
  int number;
  std::string message;
};

std::string format_error(const LineError& e) {
  return "line " + std::to_string(e.number) + ": " + e.message;
}

// Parses a non-negative integer; throws LineError otherwise.
int parse_int(const Line& ln, const std::string& tok, const char* what) {
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
    throw LineError{ln.number, std::string(what) + " must be a number, got '" + tok + "'"};
  long v = 0;
  for (char c : tok) {
    v = v * 10 + (c - '0');
    if (v > 1000000000L) throw LineError{ln.number, std::string(what) + " out of range"};
  }
  return static_cast<int>(v);
}

// Parses ids of the shape N<digits> / W<digits> used by circuit files.
int parse_prefixed_id(const Line& ln, const std::string& tok, char prefix,
                      const char* what) {
  if (tok.size() < 2 || tok[0] != prefix)
    throw LineError{ln.number, std::string(what) + " must look like " + prefix +
                                   std::string("<number>, got '") + tok + "'"};
  return parse_int(ln, tok.substr(1), what);
}

int leaf_index(const Line& ln, const std::string& tok, const Sequent& s) {
  int v = parse_int(ln, tok, "leaf index");
  if (v < 1 || v > s.leaf_count())
    throw LineError{ln.number, "leaf index " + tok + " out of range 1.." +
                                   std::to_string(s.leaf_count())};
  return v;
}

// Requires "sequent:" as the first body line and returns the parsed sequent.
Sequent take_sequent_line(const std::vector<Line>& lines, size_t& i) {
  if (i >= lines.size())
    throw LineError{lines.empty() ? 1 : lines.back().number + 1,
                    "expected a 'sequent:' line"};
  const Line& ln = lines[i];
  if (ln.tokens[0] != "sequent:" &&
      ln.raw.rfind("sequent:", 0) != 0)
    throw LineError{ln.number, "expected a 'sequent:' line, got '" + ln.raw + "'"};
  std::string rest = trim(ln.raw.substr(ln.raw.find(':') + 1));
  auto parsed = parse_sequent(rest);
  if (!parsed.sequent)
    throw LineError{ln.number, "bad sequent: " + parsed.error->message};
  ++i;
  return *parsed.sequent;
}

// --------------------------------------------------------- conflict parsing

NetFile parse_conflict_body(const std::vector<Line>& lines, size_t i) {
  Linking l;
  l.sequent = take_sequent_line(lines, i);

  std::map<std::string, int> index_of;
  std::vector<std::pair<std::string, std::string>> conflict_lines;
  std::vector<int> conflict_line_numbers;
  for (; i < lines.size(); ++i) {
    const Line& ln = lines[i];
    const auto& t = ln.tokens;
    if (t[0] == "link") {
      if (t.size() != 4)
        throw LineError{ln.number, "expected 'link <id> <leaf> <leaf>'"};
      if (index_of.count(t[1]))
        throw LineError{ln.number, "duplicate link id '" + t[1] + "'"};
      index_of[t[1]] = l.link_count();
      l.link_names.push_back(t[1]);
      int a = leaf_index(ln, t[2], l.sequent);
      int b = leaf_index(ln, t[3], l.sequent);
      l.links.push_back({a, b});
    } else if (t[0] == "conflict") {
      if (t.size() != 3)
        throw LineError{ln.number, "expected 'conflict <id> <id>'"};
      conflict_lines.emplace_back(t[1], t[2]);
      conflict_line_numbers.push_back(ln.number);
    } else {
      throw LineError{ln.number, "unknown line '" + t[0] + "' in a conflict net"};
    }
  }

  int n = l.link_count();
  l.conflict.assign(n, std::vector<bool>(n, false));
  for (size_t k = 0; k < conflict_lines.size(); ++k) {
    const auto& [ida, idb] = conflict_lines[k];
    int number = conflict_line_numbers[k];
    auto a = index_of.find(ida), b = index_of.find(idb);
    if (a == index_of.end())
      throw LineError{number, "conflict names unknown link '" + ida + "'"};
    if (b == index_of.end())
      throw LineError{number, "conflict names unknown link '" + idb + "'"};
    if (a->second == b->second)
      throw LineError{number, "a link cannot conflict with itself"};
    l.conflict[a->second][b->second] = true;
    l.conflict[b->second][a->second] = true;
  }
  materialize_overlap_conflicts(l);

  NetFile f;
  f.kind = NetKind::Conflict;
  f.conflict_net = std::move(l);
  return f;
}

// ---------------------------------------------------------- circuit parsing

NetFile parse_circuit_body(const std::vector<Line>& lines, size_t i) {
  Circuit x;
  std::map<int, size_t> node_line;  // id -> defining line, for duplicates
  std::map<int, size_t> wire_line;
  std::map<int, Literal> axiom_label;
  bool saw_exits = false;

  for (; i < lines.size(); ++i) {
    const Line& ln = lines[i];
    const auto& t = ln.tokens;
    if (t[0] == "node") {
      if (t.size() < 3)
        throw LineError{ln.number, "expected 'node <id> <kind>'"};
      int id = parse_prefixed_id(ln, t[1], 'N', "node id");
      if (node_line.count(id))
        throw LineError{ln.number, "duplicate node id '" + t[1] + "'"};
      node_line[id] = i;
      auto kind = node_kind_from(t[2]);
      if (!kind)
        throw LineError{ln.number, "unknown node kind '" + t[2] + "'"};
      if (*kind == NodeKind::Axiom) {
        if (t.size() != 4)
          throw LineError{ln.number, "an axiom node needs a literal label"};
        auto lit = parse_formula(t[3]);
        if (!lit.formula || !lit.formula->is_leaf())
          throw LineError{ln.number, "bad axiom literal '" + t[3] + "'"};
        axiom_label[id] = lit.formula->lit;
      } else if (t.size() != 3) {
        throw LineError{ln.number, "unexpected token after node kind"};
      }
      x.nodes.push_back({id, *kind});
    } else if (t[0] == "wire") {
      auto colon = ln.raw.find(':');
      if (colon == std::string::npos)
        throw LineError{ln.number, "a wire line needs ': <formula>'"};
      auto head = split_ws(ln.raw.substr(0, colon));
      auto parsed = parse_formula(trim(ln.raw.substr(colon + 1)));
      if (!parsed.formula)
        throw LineError{ln.number, "bad wire formula: " + parsed.error->message};
      if (head.size() < 5 || head.size() > 6 || head[3] != "->")
        throw LineError{ln.number,
                        "expected 'wire <id> <node> -> <node|exit> [left|right] : <formula>'"};
      Wire w;
      w.id = parse_prefixed_id(ln, head[1], 'W', "wire id");
      if (wire_line.count(w.id))
        throw LineError{ln.number, "duplicate wire id '" + head[1] + "'"};
      wire_line[w.id] = i;
      w.source = parse_prefixed_id(ln, head[2], 'N', "source node");
      if (head[4] == "exit") {
        if (head.size() != 5)
          throw LineError{ln.number, "an exit wire takes no side"};
        w.target = -1;
      } else {
        w.target = parse_prefixed_id(ln, head[4], 'N', "target node");
        if (head.size() == 6) {
          if (head[5] == "left")
            w.side = 0;
          else if (head[5] == "right")
            w.side = 1;
          else
            throw LineError{ln.number, "side must be 'left' or 'right'"};
        }
      }
      w.formula = parsed.formula;
      x.wires.push_back(std::move(w));
    } else if (t[0] == "exits") {
      if (saw_exits) throw LineError{ln.number, "duplicate 'exits' line"};
      saw_exits = true;
      for (size_t k = 1; k < t.size(); ++k)
        x.exits.push_back(parse_prefixed_id(ln, t[k], 'W', "exit wire"));
    } else {
      throw LineError{ln.number, "unknown line '" + t[0] + "' in a circuit"};
    }
  }
  if (!saw_exits)
    throw LineError{lines.back().number, "missing 'exits' line"};

  // The axiom label is informative; it must match one of the node's wires.
  for (const auto& [id, lit] : axiom_label) {
    bool found = false, any = false;
    for (const auto& w : x.wires)
      if (w.source == id) {
        any = true;
        if (w.formula->is_leaf() && w.formula->lit.atom == lit.atom &&
            w.formula->lit.positive == lit.positive)
          found = true;
      }
    if (any && !found)
      throw LineError{lines[node_line[id]].number,
                      "axiom label does not match any wire of node N" +
                          std::to_string(id)};
  }

  for (const auto& n : x.nodes) x.next_node_id = std::max(x.next_node_id, n.id + 1);
  for (const auto& w : x.wires) x.next_wire_id = std::max(x.next_wire_id, w.id + 1);

  NetFile f;
  f.kind = NetKind::Circuit;
  f.circuit = std::move(x);
  return f;
}

// --------------------------------------------------------- slice-net parsing

NetFile parse_slices_body(const std::vector<Line>& lines, size_t i) {
  LinkingSet ls;
  ls.sequent = take_sequent_line(lines, i);

  bool in_member = false;
  for (; i < lines.size(); ++i) {
    const Line& ln = lines[i];
    const auto& t = ln.tokens;
    if (t[0] == "linking") {
      if (t.size() != 1)
        throw LineError{ln.number, "unexpected token after 'linking'"};
      ls.members.emplace_back();
      in_member = true;
    } else if (t[0] == "link") {
      if (!in_member)
        throw LineError{ln.number, "'link' before the first 'linking' block"};
      if (t.size() != 3)
        throw LineError{ln.number, "expected 'link <leaf> <leaf>'"};
      int a = leaf_index(ln, t[1], ls.sequent);
      int b = leaf_index(ln, t[2], ls.sequent);
      ls.members.back().links.push_back({std::min(a, b), std::max(a, b)});
    } else {
      throw LineError{ln.number, "unknown line '" + t[0] + "' in a slice net"};
    }
  }
  canonicalize(ls);

  NetFile f;
  f.kind = NetKind::Slices;
  f.slice_net = std::move(ls);
  return f;
}

}  // namespace

// ------------------------------------------------------------------ parsing

const char* net_kind_name(NetKind k) {
  switch (k) {
    case NetKind::Conflict: return "conflict";
    case NetKind::Circuit: return "circuit";
    case NetKind::Slices: return "slices";
  }
  throw std::logic_error("bad NetKind");
}

NetParseResult parse_net_file(const std::string& text) {
  NetParseResult r;
  try {
    auto lines = significant_lines(text);
    if (lines.empty()) throw LineError{1, "empty file"};
    const Line& head = lines[0];
    if (head.tokens.size() != 2 || head.tokens[0] != "net")
      throw LineError{head.number,
                      "the first line must be 'net conflict|circuit|slices'"};
    const std::string& kind = head.tokens[1];
    if (kind == "conflict")
      r.net = parse_conflict_body(lines, 1);
    else if (kind == "circuit")
      r.net = parse_circuit_body(lines, 1);
    else if (kind == "slices")
      r.net = parse_slices_body(lines, 1);
    else
      throw LineError{head.number, "unknown net kind '" + kind + "'"};
  } catch (const LineError& e) {
    r.net.reset();
    r.error = format_error(e);
  }
  return r;
}

// ---------------------------------------------------------------- rendering

std::string render_net_file(const Linking& l) {
  std::ostringstream out;
  out << "net conflict\n";
  out << "sequent: " << render(l.sequent) << "\n";
  std::vector<std::string> names(l.link_count());
  for (int i = 0; i < l.link_count(); ++i) {
    names[i] = i < static_cast<int>(l.link_names.size()) &&
                       !l.link_names[i].empty()
                   ? l.link_names[i]
                   : "l" + std::to_string(i);
    out << "link " << names[i] << " " << l.links[i][0] << " " << l.links[i][1]
        << "\n";
  }
  for (int i = 0; i < l.link_count(); ++i)
    for (int j = i + 1; j < l.link_count(); ++j)
      if (l.conflict[i][j])
        out << "conflict " << names[i] << " " << names[j] << "\n";
  return out.str();
}

std::string render_net_file(const Circuit& x) {
  std::ostringstream out;
  out << "net circuit\n";
  for (const auto& n : x.nodes) {
    out << "node N" << n.id << " " << node_kind_name(n.kind);
    if (n.kind == NodeKind::Axiom) {
      // Label with the node's positive literal (any leaf as a fallback).
      std::string label = "a";
      for (const auto& w : x.wires)
        if (w.source == n.id && w.formula->is_leaf()) {
          label = render(w.formula);
          if (w.formula->lit.positive) break;
        }
      out << " " << label;
    }
    out << "\n";
  }
  for (const auto& w : x.wires) {
    out << "wire W" << w.id << " N" << w.source << " -> ";
    if (w.target < 0)
      out << "exit";
    else
      out << "N" << w.target;
    if (w.side == 0) out << " left";
    if (w.side == 1) out << " right";
    out << " : " << render(w.formula) << "\n";
  }
  out << "exits";
  for (int e : x.exits) out << " W" << e;
  out << "\n";
  return out.str();
}

std::string render_net_file(const LinkingSet& ls) {
  std::ostringstream out;
  out << "net slices\n";
  out << "sequent: " << render(ls.sequent) << "\n";
  for (const auto& m : ls.members) {
    out << "linking\n";
    for (const auto& lk : m.links)
      out << "  link " << lk[0] << " " << lk[1] << "\n";
  }
  return out.str();
}

// --------------------------------------------------------------- whole files

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw std::runtime_error("error reading file: " + path);
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("error writing file: " + path);
}

}  // namespace mall
