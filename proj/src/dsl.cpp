#include "td/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace td::dsl {

namespace {

struct Token {
  enum Kind { kName, kInt, kPunct, kEnd } kind;
  std::string text;
  int line, col;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  Token next() {
    skip_ws();
    if (pos_ >= text_.size()) return {Token::kEnd, "", line_, col_};
    int l = line_, c = col_;
    char ch = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::string s;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        s += take();
      return {Token::kName, s, l, c};
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::string s;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
        s += take();
      return {Token::kInt, s, l, c};
    }
    if (ch == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
      take();
      take();
      return {Token::kPunct, "->", l, c};
    }
    std::string s(1, take());
    return {Token::kPunct, s, l, c};
  }

 private:
  char take() {
    char ch = text_[pos_++];
    if (ch == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return ch;
  }
  void skip_ws() {
    while (pos_ < text_.size()) {
      char ch = text_[pos_];
      if (ch == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') take();
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        take();
      } else {
        break;
      }
    }
  }
  const std::string& text_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : lex_(text) { advance(); }

  Document parse_file() {
    Document doc;
    bool saw_dim = false;
    while (cur_.kind != Token::kEnd) {
      expect_name("statement");
      const std::string kw = cur_.text;
      if (kw == "dim") {
        if (saw_dim) fail("duplicate dim statement");
        advance();
        doc.dim = expect_int("dimension");
        if (doc.dim < 1) fail("dimension must be at least 1");
        saw_dim = true;
      } else if (kw == "matrix") {
        advance();
        std::string name = expect_fresh_name(doc, "matrix name");
        expect_punct("=");
        doc.matrices.emplace_back(name, parse_matrix(doc.dim, saw_dim));
      } else if (kw == "vector") {
        advance();
        std::string name = expect_fresh_name(doc, "vector name");
        expect_punct("=");
        doc.vectors.emplace_back(name, parse_row(doc.dim, saw_dim));
      } else if (kw == "diagram") {
        if (!saw_dim) fail("diagram before dim statement");
        advance();
        std::string name = expect_fresh_name(doc, "diagram name");
        expect_punct("{");
        doc.diagrams.emplace_back(name, parse_diagram(doc.dim));
      } else if (kw == "expr") {
        advance();
        std::string name = expect_fresh_name(doc, "expr name");
        expect_punct("=");
        doc.exprs.push_back(parse_expr(doc, name));
      } else {
        fail("unknown statement '" + kw + "'");
      }
    }
    if (!saw_dim) fail("missing dim statement");
    return doc;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) { throw ParseError(cur_.line, cur_.col, msg); }
  void advance() { cur_ = lex_.next(); }

  void expect_name(const char* what) {
    if (cur_.kind != Token::kName) fail(std::string("expected ") + what);
  }
  std::string take_name(const char* what) {
    expect_name(what);
    std::string s = cur_.text;
    advance();
    return s;
  }
  std::string expect_fresh_name(const Document& doc, const char* what) {
    std::string s = take_name(what);
    if (doc.has_name(s)) fail("duplicate name '" + s + "'");
    return s;
  }
  int expect_int(const char* what) {
    bool neg = false;
    if (cur_.kind == Token::kPunct && cur_.text == "-") {
      neg = true;
      advance();
    }
    if (cur_.kind != Token::kInt) fail(std::string("expected integer ") + what);
    long v = std::stol(cur_.text);
    advance();
    return static_cast<int>(neg ? -v : v);
  }
  void expect_punct(const std::string& p) {
    if (cur_.kind != Token::kPunct || cur_.text != p) fail("expected '" + p + "'");
    advance();
  }
  bool peek_punct(const std::string& p) const {
    return cur_.kind == Token::kPunct && cur_.text == p;
  }

  Rational parse_scalar() {
    long num = expect_int("scalar");
    if (peek_punct("/")) {
      advance();
      long den = expect_int("denominator");
      if (den == 0) fail("zero denominator");
      return rat(num, den);
    }
    return Rational(num);
  }

  oracle::Vec parse_row(int dim, bool saw_dim) {
    expect_punct("[");
    oracle::Vec row;
    row.push_back(parse_scalar());
    while (peek_punct(",")) {
      advance();
      row.push_back(parse_scalar());
    }
    expect_punct("]");
    if (saw_dim && static_cast<int>(row.size()) != dim)
      fail("expected " + std::to_string(dim) + " entries, got " + std::to_string(row.size()));
    return row;
  }

  oracle::Mat parse_matrix(int dim, bool saw_dim) {
    expect_punct("[");
    oracle::Mat m;
    m.push_back(parse_row(dim, saw_dim));
    while (peek_punct(",")) {
      advance();
      m.push_back(parse_row(dim, saw_dim));
    }
    expect_punct("]");
    if (saw_dim && static_cast<int>(m.size()) != dim)
      fail("expected " + std::to_string(dim) + " rows, got " + std::to_string(m.size()));
    return m;
  }

  struct PendingMark {
    std::string matrix;
    std::string edge;
    bool fwd;
    int line, col;
  };

  DiagramGraph parse_diagram(int dim) {
    DiagramGraph g;
    g.dim = dim;
    // edge name -> edge index; ends filled in mention order
    std::map<std::string, int> edge_ids;
    std::vector<std::string> edge_names;
    std::vector<int> mention_count;
    std::vector<PendingMark> marks;
    int next_input_slot = 1;
    std::set<int> output_slots;

    auto mention = [&](const std::string& ename, const Attachment& a, bool loop) -> void {
      auto [it, fresh] = edge_ids.try_emplace(ename, static_cast<int>(g.edges.size()));
      int idx = it->second;
      if (fresh) {
        g.edges.emplace_back();
        edge_names.push_back(ename);
        mention_count.push_back(0);
      }
      if (loop) {
        if (mention_count[idx] != 0) fail("edge '" + ename + "' already attached");
        g.edges[idx].closed = true;
        mention_count[idx] = 2;
        return;
      }
      if (g.edges[idx].closed || mention_count[idx] >= 2)
        fail("edge '" + ename + "' used more than twice");
      if (mention_count[idx] == 0)
        g.edges[idx].end1 = a;
      else
        g.edges[idx].end2 = a;
      ++mention_count[idx];
    };

    while (!peek_punct("}")) {
      if (cur_.kind == Token::kEnd) fail("unterminated diagram block");
      std::string kw = take_name("diagram item");
      if (kw == "node") {
        take_name("node name");
        expect_punct("(");
        int nd = g.node_count++;
        int slot = 0;
        while (true) {
          std::string ename = take_name("edge name");
          mention(ename, port(nd, slot++), false);
          if (peek_punct(",")) {
            advance();
            continue;
          }
          break;
        }
        expect_punct(")");
      } else if (kw == "input") {
        std::string vname = take_name("vector name");
        expect_punct("->");
        std::string ename = take_name("edge name");
        mention(ename, vin(vname, next_input_slot++), false);
      } else if (kw == "basis") {
        int label = expect_int("basis label");
        expect_punct("->");
        std::string ename = take_name("edge name");
        mention(ename, basis(label), false);
      } else if (kw == "output") {
        int slot = expect_int("output slot");
        expect_punct("->");
        std::string ename = take_name("edge name");
        if (!output_slots.insert(slot).second)
          fail("duplicate output slot " + std::to_string(slot));
        mention(ename, out(slot), false);
      } else if (kw == "mark") {
        PendingMark pm;
        pm.line = cur_.line;
        pm.col = cur_.col;
        pm.matrix = take_name("matrix name");
        if (take_name("'on'") != "on") fail("expected 'on'");
        pm.edge = take_name("edge name");
        if (take_name("'dir'") != "dir") fail("expected 'dir'");
        std::string d = take_name("'fwd' or 'rev'");
        if (d != "fwd" && d != "rev") fail("expected 'fwd' or 'rev'");
        pm.fwd = (d == "fwd");
        marks.push_back(std::move(pm));
      } else if (kw == "loop") {
        std::string ename = take_name("edge name");
        mention(ename, {}, true);
      } else {
        fail("unknown diagram item '" + kw + "'");
      }
    }
    advance();  // consume '}'

    for (size_t i = 0; i < g.edges.size(); ++i)
      if (mention_count[i] != 2)
        fail("edge '" + edge_names[i] + "' used " + std::to_string(mention_count[i]) +
             " times, expected 2");
    for (const PendingMark& pm : marks) {
      auto it = edge_ids.find(pm.edge);
      if (it == edge_ids.end())
        throw ParseError(pm.line, pm.col, "mark on unknown edge '" + pm.edge + "'");
      // fwd: the input side faces the first-mentioned end
      g.edges[it->second].markings.push_back({pm.matrix, pm.fwd});
    }

    ValidationReport rep = validate(g);
    if (!rep.ok) fail("invalid diagram: " + rep.faults[0].kind + " at " + rep.faults[0].where);
    return g;
  }

  Document::Expr parse_expr(const Document& doc, const std::string& name) {
    Document::Expr e;
    e.name = name;
    Rational sign(1);
    while (true) {
      Rational coeff = sign;
      // optional scalar '*'
      bool have_scalar = cur_.kind == Token::kInt || peek_punct("-");
      if (have_scalar) {
        coeff = sign * parse_scalar();
        expect_punct("*");
      }
      std::string ref = take_name("diagram or expr name");
      if (doc.find_diagram(ref) == nullptr && doc.find_expr(ref) == nullptr)
        fail("unknown name '" + ref + "' in expr");
      e.terms.emplace_back(coeff, ref);
      if (peek_punct("+")) {
        sign = 1;
        advance();
      } else if (peek_punct("-")) {
        sign = -1;
        advance();
      } else {
        break;
      }
    }
    return e;
  }

  Lexer lex_;
  Token cur_;
};

}  // namespace

const DiagramGraph* Document::find_diagram(const std::string& name) const {
  for (const auto& [n, g] : diagrams)
    if (n == name) return &g;
  return nullptr;
}

const Document::Expr* Document::find_expr(const std::string& name) const {
  for (const auto& e : exprs)
    if (e.name == name) return &e;
  return nullptr;
}

bool Document::has_name(const std::string& name) const {
  for (const auto& [n, m] : matrices)
    if (n == name) return true;
  for (const auto& [n, v] : vectors)
    if (n == name) return true;
  return find_diagram(name) != nullptr || find_expr(name) != nullptr;
}

DiagramExpression Document::materialize(const std::string& name) const {
  if (const DiagramGraph* g = find_diagram(name)) return DiagramExpression::of(*g);
  const Expr* e = find_expr(name);
  if (e == nullptr) throw std::invalid_argument("unknown diagram or expr: " + name);
  DiagramExpression out;
  for (const auto& [coeff, ref] : e->terms) {
    DiagramExpression sub = materialize(ref);
    for (const auto& [c2, g2] : sub.terms) out.add_term(coeff * c2, g2);
  }
  return out;
}

Environment<Rational> Document::environment() const {
  Environment<Rational> env(dim);
  for (const auto& [n, m] : matrices) env.bind_matrix(n, m);
  for (const auto& [n, v] : vectors) env.bind_vector(n, v);
  return env;
}

Document parse(const std::string& text) { return Parser(text).parse_file(); }

namespace {

std::string scalar_str(const Rational& q) { return to_string(q); }

void serialize_diagram(std::ostringstream& os, const std::string& name, const DiagramGraph& raw) {
  DiagramGraph g = canonicalize(raw);
  os << "diagram " << name << " {\n";
  auto ename = [](int i) { return "e" + std::to_string(i); };

  // which end of each edge the parser will see first, given the statement
  // order below: nodes (port order), inputs, basis, outputs, loops
  std::vector<int> first_end(g.edges.size(), -1);
  auto note = [&](int edge, int end) {
    if (first_end[edge] == -1) first_end[edge] = end;
  };
  std::vector<std::vector<std::pair<int, int>>> node_ports(g.node_count);  // slot -> (edge, end)
  for (size_t i = 0; i < g.edges.size(); ++i) {
    const Edge& e = g.edges[i];
    if (e.closed) continue;
    const Attachment* ends[2] = {&e.end1, &e.end2};
    for (int k = 0; k < 2; ++k)
      if (const auto* np = std::get_if<NodePort>(ends[k])) {
        node_ports[np->node].resize(g.dim);
        node_ports[np->node][np->slot] = {static_cast<int>(i), k};
      }
  }
  for (int nd = 0; nd < g.node_count; ++nd)
    for (int s = 0; s < g.dim; ++s) note(node_ports[nd][s].first, node_ports[nd][s].second);

  struct TermRef {
    int slot;
    int edge, end;
  };
  std::vector<TermRef> inputs, outputs;
  std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>> basis_refs;  // (label, edge) ...
  std::vector<std::string> input_names;
  for (size_t i = 0; i < g.edges.size(); ++i) {
    const Edge& e = g.edges[i];
    if (e.closed) continue;
    const Attachment* ends[2] = {&e.end1, &e.end2};
    for (int k = 0; k < 2; ++k) {
      if (const auto* vi = std::get_if<VectorInput>(ends[k])) {
        inputs.push_back({vi->slot, static_cast<int>(i), k});
        if (static_cast<int>(input_names.size()) < vi->slot) input_names.resize(vi->slot);
        input_names[vi->slot - 1] = vi->name;
      } else if (const auto* fo = std::get_if<FreeOutput>(ends[k])) {
        outputs.push_back({fo->slot, static_cast<int>(i), k});
      } else if (const auto* bl = std::get_if<BasisLabel>(ends[k])) {
        basis_refs.push_back({{bl->label, static_cast<int>(i)}, {static_cast<int>(i), k}});
      }
    }
  }
  auto by_slot = [](const TermRef& a, const TermRef& b) { return a.slot < b.slot; };
  std::sort(inputs.begin(), inputs.end(), by_slot);
  std::sort(outputs.begin(), outputs.end(), by_slot);
  std::sort(basis_refs.begin(), basis_refs.end());
  for (const TermRef& t : inputs) note(t.edge, t.end);
  for (const auto& [key, ref] : basis_refs) note(ref.first, ref.second);
  for (const TermRef& t : outputs) note(t.edge, t.end);

  for (int nd = 0; nd < g.node_count; ++nd) {
    os << "  node n" << nd << "(";
    for (int s = 0; s < g.dim; ++s) os << (s ? ", " : "") << ename(node_ports[nd][s].first);
    os << ")\n";
  }
  for (const TermRef& t : inputs)
    os << "  input " << input_names[t.slot - 1] << " -> " << ename(t.edge) << "\n";
  for (const auto& [key, ref] : basis_refs)
    os << "  basis " << key.first << " -> " << ename(ref.first) << "\n";
  for (const TermRef& t : outputs) os << "  output " << t.slot << " -> " << ename(t.edge) << "\n";
  for (size_t i = 0; i < g.edges.size(); ++i)
    if (g.edges[i].closed) os << "  loop " << ename(static_cast<int>(i)) << "\n";

  // markings, stacked from the parser's first-seen end
  for (size_t i = 0; i < g.edges.size(); ++i) {
    const Edge& e = g.edges[i];
    if (e.markings.empty()) continue;
    bool from_end1 = e.closed || first_end[i] != 1;
    std::vector<Marking> ms = e.markings;
    if (!from_end1) {
      std::reverse(ms.begin(), ms.end());
      for (Marking& mk : ms) mk.input_at_end1 = !mk.input_at_end1;
    }
    for (const Marking& mk : ms)
      os << "  mark " << mk.matrix << " on " << ename(static_cast<int>(i)) << " dir "
         << (mk.input_at_end1 ? "fwd" : "rev") << "\n";
  }
  os << "}\n";
}

}  // namespace

std::string serialize(const Document& doc) {
  std::ostringstream os;
  os << "dim " << doc.dim << "\n";
  for (const auto& [name, m] : doc.matrices) {
    os << "matrix " << name << " = [";
    for (size_t r = 0; r < m.size(); ++r) {
      os << (r ? ", " : "") << "[";
      for (size_t c = 0; c < m[r].size(); ++c) os << (c ? ", " : "") << scalar_str(m[r][c]);
      os << "]";
    }
    os << "]\n";
  }
  for (const auto& [name, v] : doc.vectors) {
    os << "vector " << name << " = [";
    for (size_t c = 0; c < v.size(); ++c) os << (c ? ", " : "") << scalar_str(v[c]);
    os << "]\n";
  }
  for (const auto& [name, g] : doc.diagrams) serialize_diagram(os, name, g);
  for (const auto& e : doc.exprs) {
    os << "expr " << e.name << " = ";
    for (size_t i = 0; i < e.terms.size(); ++i) {
      const auto& [coeff, ref] = e.terms[i];
      Rational c = coeff;
      if (i == 0) {
        if (sgn(c) < 0) {
          os << "-";
          c = -c;
        }
      } else {
        os << (sgn(c) < 0 ? " - " : " + ");
        if (sgn(c) < 0) c = -c;
      }
      if (c != 1) os << scalar_str(c) << " * ";
      os << ref;
    }
    os << "\n";
  }
  return os.str();
}

std::string to_dot(const DiagramGraph& raw) {
  DiagramGraph g = canonicalize(raw);
  std::ostringstream os;
  os << "digraph trace_diagram {\n";
  os << "  graph [rankdir=BT];\n";
  for (int nd = 0; nd < g.node_count; ++nd)
    os << "  n" << nd << " [shape=circle, style=filled, fillcolor=black, width=0.12, label=\"\""
       << "];\n";

  auto term_id = [](const std::string& prefix, int i) { return prefix + std::to_string(i); };
  int term_count = 0, mark_count = 0;
  auto attach_name = [&](const Attachment& a) -> std::string {
    if (const auto* np = std::get_if<NodePort>(&a)) return "n" + std::to_string(np->node);
    std::string id = term_id("t", term_count++);
    if (const auto* vi = std::get_if<VectorInput>(&a))
      os << "  " << id << " [shape=box, label=\"" << vi->name << "\"];\n";
    else if (const auto* bl = std::get_if<BasisLabel>(&a))
      os << "  " << id << " [shape=box, label=\"e" << bl->label << "\"];\n";
    else if (const auto* fo = std::get_if<FreeOutput>(&a))
      os << "  " << id << " [shape=box, style=dashed, label=\"out " << fo->slot << "\"];\n";
    return id;
  };
  auto port_label = [&](const Attachment& a) -> std::string {
    if (const auto* np = std::get_if<NodePort>(&a)) {
      std::string l = "p" + std::to_string(np->slot);
      if (np->slot == 0) l += " (cilium)";
      return l;
    }
    return "";
  };

  for (size_t i = 0; i < g.edges.size(); ++i) {
    const Edge& e = g.edges[i];
    // chevron chain between the two ends (or around a loop)
    std::vector<std::string> points;
    std::vector<std::string> labels;
    if (!e.closed) {
      points.push_back(attach_name(e.end1));
      labels.push_back(port_label(e.end1));
    }
    std::vector<std::string> mark_ids;
    for (const Marking& mk : e.markings) {
      std::string id = term_id("m", mark_count++);
      os << "  " << id << " [shape=cds, label=\"" << mk.matrix << "\"];\n";
      mark_ids.push_back(id);
      points.push_back(id);
      labels.push_back("");
    }
    if (!e.closed) {
      points.push_back(attach_name(e.end2));
      labels.push_back(port_label(e.end2));
    } else {
      if (points.empty()) {
        // bare circle: a single self-loop on an invisible anchor
        std::string id = term_id("t", term_count++);
        os << "  " << id << " [shape=point, label=\"\"];\n";
        os << "  " << id << " -> " << id << " [dir=none, label=\"circle\"];\n";
        continue;
      }
      points.push_back(points.front());  // close the cycle
      labels.push_back("");
    }
    for (size_t p = 0; p + 1 < points.size(); ++p) {
      std::string lab;
      if (!labels[p].empty()) lab += labels[p];
      if (p + 1 < labels.size() && !labels[p + 1].empty())
        lab += (lab.empty() ? "" : " / ") + labels[p + 1];
      os << "  " << points[p] << " -> " << points[p + 1] << " [dir=none";
      if (!lab.empty()) os << ", label=\"" << lab << "\"";
      os << "];\n";
    }
  }
  os << "}\n";
  return os.str();
}

namespace {

template <class S>
std::string tensor_json_impl(const Tensor<S>& t) {
  std::ostringstream os;
  os << "{\"dim\":" << t.dim() << ",\"arity\":" << t.arity() << ",\"entries\":[";
  std::vector<int> idx(t.arity(), 1);
  bool first = true;
  size_t off = 0;
  do {
    if (!first) os << ",";
    first = false;
    os << "{\"index\":[";
    for (size_t i = 0; i < idx.size(); ++i) os << (i ? "," : "") << idx[i];
    os << "],\"value\":\"" << Field<S>::str(t.entries()[off++]) << "\"}";
  } while (Tensor<S>::next_index(idx, t.dim()));
  os << "]}";
  return os.str();
}

}  // namespace

std::string tensor_to_json(const Tensor<Rational>& t) { return tensor_json_impl(t); }
std::string tensor_to_json(const Tensor<double>& t) { return tensor_json_impl(t); }

}  // namespace td::dsl
