#include "efg/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace efg {

namespace {

struct Position {
  std::size_t line = 1;
  std::size_t column = 1;
};

using Attrs = std::map<std::string, std::string>;

// Format-independent view of a document before validation.
struct RawNode {
  std::string name;
  Attrs attrs;
  Position pos;
};

struct RawEdge {
  std::string from, to;
  Attrs attrs;
  Position pos;
};

struct RawDocument {
  std::string name;
  std::vector<RawNode> nodes; // first appearance order
  std::vector<RawEdge> edges;
};

[[noreturn]] void fail(std::string_view source, std::string code,
                       std::string message, Position pos) {
  throw IngestError(Diagnostic{std::move(code), std::move(message), pos.line,
                               pos.column},
                    source);
}

// ---------------------------------------------------------------- lexer

enum class Tok { Id, LBrace, RBrace, LBracket, RBracket, Equal, Semi, Comma,
                 Arrow, Dash, Colon, End };

struct Token {
  Tok kind;
  std::string text;
  bool quoted = false;
  Position pos;
};

class Lexer {
public:
  Lexer(std::string_view text, std::string_view source)
      : text_(text), source_(source) {}

  Token next() {
    skip_space();
    Token t;
    t.pos = pos_;
    if (i_ >= text_.size()) {
      t.kind = Tok::End;
      return t;
    }
    char c = text_[i_];
    auto single = [&](Tok k) {
      bump();
      t.kind = k;
      return t;
    };
    switch (c) {
    case '{':
      return single(Tok::LBrace);
    case '}':
      return single(Tok::RBrace);
    case '[':
      return single(Tok::LBracket);
    case ']':
      return single(Tok::RBracket);
    case '=':
      return single(Tok::Equal);
    case ';':
      return single(Tok::Semi);
    case ',':
      return single(Tok::Comma);
    case ':':
      return single(Tok::Colon);
    case '"':
      return quoted(t);
    case '<':
      return html(t);
    default:
      break;
    }
    if (c == '-' && i_ + 1 < text_.size() && text_[i_ + 1] == '>') {
      bump();
      bump();
      t.kind = Tok::Arrow;
      return t;
    }
    if (c == '-' && i_ + 1 < text_.size() && text_[i_ + 1] == '-') {
      bump();
      bump();
      t.kind = Tok::Dash;
      return t;
    }
    if (is_id_start(c))
      return identifier(t);
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-')
      return numeral(t);
    fail(source_, "E001", std::string("unexpected character '") + c + "'",
         pos_);
  }

private:
  static bool is_id_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' ||
           static_cast<unsigned char>(c) >= 0x80;
  }

  void bump() {
    if (text_[i_] == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else {
      ++pos_.column;
    }
    ++i_;
  }

  bool at_line_start() const {
    for (std::size_t j = i_; j > 0 && text_[j - 1] != '\n'; --j)
      if (!std::isspace(static_cast<unsigned char>(text_[j - 1])))
        return false;
    return true;
  }

  void skip_space() {
    while (i_ < text_.size()) {
      char c = text_[i_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else if (c == '#' && at_line_start()) {
        while (i_ < text_.size() && text_[i_] != '\n')
          bump();
      } else if (text_.substr(i_, 2) == "//") {
        while (i_ < text_.size() && text_[i_] != '\n')
          bump();
      } else if (text_.substr(i_, 2) == "/*") {
        Position start = pos_;
        bump();
        bump();
        while (i_ < text_.size() && text_.substr(i_, 2) != "*/")
          bump();
        if (i_ >= text_.size())
          fail(source_, "E001", "unterminated comment", start);
        bump();
        bump();
      } else {
        break;
      }
    }
  }

  Token &quoted(Token &t) {
    bump();
    t.kind = Tok::Id;
    t.quoted = true;
    while (true) {
      if (i_ >= text_.size())
        fail(source_, "E001", "unterminated string", t.pos);
      char c = text_[i_];
      if (c == '"') {
        bump();
        break;
      }
      if (c == '\\' && i_ + 1 < text_.size()) {
        char n = text_[i_ + 1];
        if (n == '"' || n == '\\') {
          t.text += n;
          bump();
          bump();
          continue;
        }
        if (n == '\n') {
          bump();
          bump();
          continue;
        }
      }
      t.text += c;
      bump();
    }
    // "a" + "b" concatenation
    std::size_t save_i = i_;
    Position save_pos = pos_;
    skip_space();
    if (i_ < text_.size() && text_[i_] == '+') {
      bump();
      skip_space();
      if (i_ < text_.size() && text_[i_] == '"') {
        Token rest;
        rest.pos = pos_;
        quoted(rest);
        t.text += rest.text;
        return t;
      }
      fail(source_, "E001", "expected a string after '+'", pos_);
    }
    i_ = save_i;
    pos_ = save_pos;
    return t;
  }

  Token &html(Token &t) {
    bump();
    t.kind = Tok::Id;
    t.quoted = true;
    int depth = 1;
    while (true) {
      if (i_ >= text_.size())
        fail(source_, "E001", "unterminated HTML string", t.pos);
      char c = text_[i_];
      if (c == '<')
        ++depth;
      if (c == '>' && --depth == 0) {
        bump();
        return t;
      }
      t.text += c;
      bump();
    }
  }

  Token &identifier(Token &t) {
    t.kind = Tok::Id;
    while (i_ < text_.size() &&
           (is_id_start(text_[i_]) ||
            std::isdigit(static_cast<unsigned char>(text_[i_]))))
      t.text += text_[i_], bump();
    return t;
  }

  Token &numeral(Token &t) {
    t.kind = Tok::Id;
    if (text_[i_] == '-')
      t.text += '-', bump();
    bool digits = false, dot = false;
    while (i_ < text_.size()) {
      char c = text_[i_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        digits = true;
      } else if (c == '.' && !dot) {
        dot = true;
      } else {
        break;
      }
      t.text += c;
      bump();
    }
    if (!digits)
      fail(source_, "E001", "malformed numeral", t.pos);
    return t;
  }

  std::string_view text_;
  std::string_view source_;
  std::size_t i_ = 0;
  Position pos_;
};

// ---------------------------------------------------------------- parser

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool is_keyword(const Token &t, std::string_view kw) {
  return t.kind == Tok::Id && !t.quoted && lower(t.text) == kw;
}

class Parser {
public:
  Parser(std::string_view text, std::string_view source)
      : lexer_(text, source), source_(source) {
    advance();
  }

  RawDocument parse() {
    if (is_keyword(tok_, "strict"))
      advance();
    if (is_keyword(tok_, "graph"))
      fail(source_, "E002", "undirected graphs are not supported", tok_.pos);
    if (!is_keyword(tok_, "digraph"))
      fail(source_, "E001", "expected 'digraph'", tok_.pos);
    advance();
    if (tok_.kind == Tok::Id) {
      doc_.name = tok_.text;
      advance();
    }
    expect(Tok::LBrace, "'{'");
    while (tok_.kind != Tok::RBrace) {
      if (tok_.kind == Tok::End)
        fail(source_, "E001", "missing '}'", tok_.pos);
      statement();
    }
    advance();
    if (tok_.kind != Tok::End)
      fail(source_, "E001", "unexpected text after the graph", tok_.pos);
    return std::move(doc_);
  }

private:
  void advance() { tok_ = lexer_.next(); }

  void expect(Tok kind, std::string_view what) {
    if (tok_.kind != kind)
      fail(source_, "E001", "expected " + std::string(what), tok_.pos);
    advance();
  }

  void statement() {
    if (tok_.kind == Tok::LBrace || is_keyword(tok_, "subgraph"))
      fail(source_, "E002", "subgraphs are not supported", tok_.pos);
    if (tok_.kind == Tok::Semi || tok_.kind == Tok::Comma) {
      advance();
      return;
    }
    if (tok_.kind != Tok::Id)
      fail(source_, "E001", "expected a statement", tok_.pos);

    if (is_keyword(tok_, "node") || is_keyword(tok_, "edge") ||
        is_keyword(tok_, "graph")) {
      std::string which = lower(tok_.text);
      advance();
      Attrs attrs;
      attr_lists(attrs);
      auto &target = which == "node"   ? node_defaults_
                     : which == "edge" ? edge_defaults_
                                       : graph_attrs_;
      for (auto &[k, v] : attrs)
        target[k] = v;
      return;
    }

    Token first = tok_;
    advance();
    if (tok_.kind == Tok::Equal) {
      advance();
      if (tok_.kind != Tok::Id)
        fail(source_, "E001", "expected a value after '='", tok_.pos);
      graph_attrs_[first.text] = tok_.text;
      advance();
      return;
    }
    port_check();

    std::vector<Token> chain{first};
    while (tok_.kind == Tok::Arrow || tok_.kind == Tok::Dash) {
      if (tok_.kind == Tok::Dash)
        fail(source_, "E002", "undirected edge '--' in a digraph", tok_.pos);
      advance();
      if (tok_.kind == Tok::LBrace || is_keyword(tok_, "subgraph"))
        fail(source_, "E002", "subgraphs are not supported", tok_.pos);
      if (tok_.kind != Tok::Id)
        fail(source_, "E001", "expected a node after '->'", tok_.pos);
      chain.push_back(tok_);
      advance();
      port_check();
    }

    Attrs attrs;
    attr_lists(attrs);
    if (chain.size() == 1) {
      RawNode &n = touch(first);
      for (auto &[k, v] : attrs)
        n.attrs[k] = v;
      return;
    }
    for (const Token &t : chain)
      touch(t);
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      RawEdge e{chain[i].text, chain[i + 1].text, edge_defaults_, chain[i].pos};
      for (auto &[k, v] : attrs)
        e.attrs[k] = v;
      doc_.edges.push_back(std::move(e));
    }
  }

  void port_check() {
    if (tok_.kind == Tok::Colon)
      fail(source_, "E002", "node ports are not supported", tok_.pos);
  }

  void attr_lists(Attrs &attrs) {
    while (tok_.kind == Tok::LBracket) {
      advance();
      while (tok_.kind != Tok::RBracket) {
        if (tok_.kind != Tok::Id)
          fail(source_, "E001", "expected an attribute name", tok_.pos);
        std::string key = tok_.text;
        advance();
        expect(Tok::Equal, "'=' after attribute name");
        if (tok_.kind != Tok::Id)
          fail(source_, "E001", "expected an attribute value", tok_.pos);
        attrs[key] = tok_.text;
        advance();
        if (tok_.kind == Tok::Comma || tok_.kind == Tok::Semi)
          advance();
      }
      advance();
    }
  }

  RawNode &touch(const Token &t) {
    auto [it, fresh] = index_.try_emplace(t.text, doc_.nodes.size());
    if (fresh)
      doc_.nodes.push_back(RawNode{t.text, node_defaults_, t.pos});
    return doc_.nodes[it->second];
  }

  Lexer lexer_;
  std::string_view source_;
  Token tok_;
  RawDocument doc_;
  Attrs node_defaults_, edge_defaults_, graph_attrs_;
  std::map<std::string, std::size_t> index_;
};

// ---------------------------------------------------------------- validation

std::optional<NodeKind> kind_from(std::string_view s) {
  if (s == "entry")
    return NodeKind::Entry;
  if (s == "exit")
    return NodeKind::Exit;
  if (s == "event")
    return NodeKind::Event;
  if (s == "branch")
    return NodeKind::Branch;
  if (s == "plain")
    return NodeKind::Plain;
  return std::nullopt;
}

std::optional<EventRole> role_from(std::string_view s) {
  if (s == "first")
    return EventRole::First;
  if (s == "second")
    return EventRole::Second;
  if (s == "flow")
    return EventRole::Flow;
  return std::nullopt;
}

const std::string *find_attr(const Attrs &a, const char *key) {
  auto it = a.find(key);
  return it == a.end() ? nullptr : &it->second;
}

GraphDocument build_document(RawDocument raw, std::string_view source) {
  GraphDocument doc;
  doc.name = raw.name;

  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < raw.nodes.size(); ++i)
    index.emplace(raw.nodes[i].name, i);

  std::vector<std::size_t> out_count(raw.nodes.size(), 0);
  {
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto &e : raw.edges) {
      auto key = std::pair(index.at(e.from), index.at(e.to));
      if (!seen.insert(key).second)
        fail(source, "E032",
             "duplicate edge '" + e.from + "' -> '" + e.to + "'", e.pos);
      ++out_count[key.first];
    }
  }

  std::vector<NodeKind> kinds;
  std::vector<bool> colored;
  std::map<std::string, EventSpec> specs;
  std::optional<std::size_t> entry, exit;
  for (std::size_t i = 0; i < raw.nodes.size(); ++i) {
    const RawNode &n = raw.nodes[i];
    const std::string *kind_attr = find_attr(n.attrs, "kind");
    const std::string *role_attr = find_attr(n.attrs, "event_role");
    const std::string *object_attr = find_attr(n.attrs, "object");
    const std::string *colored_attr = find_attr(n.attrs, "colored");

    NodeKind kind;
    if (kind_attr) {
      auto k = kind_from(*kind_attr);
      if (!k)
        fail(source, "E020",
             "node '" + n.name + "': unknown kind '" + *kind_attr + "'", n.pos);
      kind = *k;
    } else if (role_attr) {
      kind = NodeKind::Event;
    } else {
      kind = out_count[i] >= 2 ? NodeKind::Branch : NodeKind::Plain;
    }

    std::optional<EventRole> role;
    if (role_attr) {
      role = role_from(*role_attr);
      if (!role)
        fail(source, "E020",
             "node '" + n.name + "': unknown event_role '" + *role_attr + "'",
             n.pos);
    }
    bool is_colored = kind == NodeKind::Event;
    if (colored_attr) {
      if (*colored_attr != "true" && *colored_attr != "false")
        fail(source, "E020",
             "node '" + n.name + "': colored must be true or false", n.pos);
      is_colored = *colored_attr == "true";
    }

    if (kind == NodeKind::Entry) {
      if (entry)
        fail(source, "E011", "second entry node '" + n.name + "'", n.pos);
      entry = i;
    }
    if (kind == NodeKind::Exit) {
      if (exit)
        fail(source, "E013", "second exit node '" + n.name + "'", n.pos);
      exit = i;
    }
    if (role && kind != NodeKind::Event)
      fail(source, "E021",
           "node '" + n.name + "': event_role on a node that is not an event",
           n.pos);
    if (is_colored && (kind == NodeKind::Entry || kind == NodeKind::Exit))
      fail(source, "E021",
           "node '" + n.name + "': entry and exit nodes cannot be colored",
           n.pos);
    if (role && !object_attr)
      fail(source, "E022",
           "node '" + n.name + "': event_role without an object", n.pos);
    if (object_attr && !role)
      fail(source, "E022",
           "node '" + n.name + "': object without an event_role", n.pos);
    if (object_attr && object_attr->empty())
      fail(source, "E022", "node '" + n.name + "': empty object id", n.pos);

    kinds.push_back(kind);
    colored.push_back(is_colored);
    if (role) {
      auto &spec = specs[*object_attr];
      spec.object_id = *object_attr;
      spec.events[NodeId{static_cast<std::uint32_t>(i)}] = *role;
    }
  }
  Position top;
  if (!entry)
    fail(source, "E010", "no node with kind=entry", top);
  if (!exit)
    fail(source, "E012", "no node with kind=exit", top);

  ColoredDirectedGraph &g = doc.graph;
  for (std::size_t i = 0; i < raw.nodes.size(); ++i) {
    NodeId id = g.add_node(raw.nodes[i].name, kinds[i]);
    g.set_colored(id, colored[i]);
  }
  for (const auto &e : raw.edges) {
    NodeId from{static_cast<std::uint32_t>(index.at(e.from))};
    NodeId to{static_cast<std::uint32_t>(index.at(e.to))};
    if (to.value == *entry)
      fail(source, "E040", "edge into the entry node '" + e.to + "'", e.pos);
    if (from.value == *exit)
      fail(source, "E041", "edge out of the exit node '" + e.from + "'",
           e.pos);
    const std::string *label = find_attr(e.attrs, "label");
    g.add_edge(from, to, label ? Label{*label} : Label{});
  }

  for (std::size_t i = 0; i < raw.nodes.size(); ++i) {
    NodeId id{static_cast<std::uint32_t>(i)};
    if (kinds[i] == NodeKind::Branch && g.out_degree(id) < 2)
      fail(source, "E030",
           "branch node '" + raw.nodes[i].name + "' has fewer than two out-edges",
           raw.nodes[i].pos);
    if (kinds[i] == NodeKind::Plain && g.out_degree(id) > 1)
      fail(source, "E031",
           "plain node '" + raw.nodes[i].name + "' has more than one out-edge",
           raw.nodes[i].pos);
  }

  auto sweep = [&](NodeId root, bool forward) {
    std::vector<char> seen(g.id_bound(), 0);
    std::vector<NodeId> stack{root};
    seen[root.value] = 1;
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      auto visit = [&](NodeId v) {
        if (!seen[v.value]) {
          seen[v.value] = 1;
          stack.push_back(v);
        }
      };
      if (forward)
        for (const Edge &e : g.out_edges(u))
          visit(e.to);
      else
        for (NodeId p : g.predecessors(u))
          visit(p);
    }
    return seen;
  };
  auto from_entry = sweep(g.entry(), true);
  auto to_exit = sweep(g.exit(), false);
  for (std::size_t i = 0; i < raw.nodes.size(); ++i) {
    if (!from_entry[i])
      fail(source, "E050",
           "node '" + raw.nodes[i].name + "' is unreachable from the entry",
           raw.nodes[i].pos);
    if (!to_exit[i])
      fail(source, "E051",
           "node '" + raw.nodes[i].name + "' cannot reach the exit",
           raw.nodes[i].pos);
  }
  g.validate();

  for (auto &[_, spec] : specs)
    doc.specs.push_back(std::move(spec));
  return doc;
}

// ---------------------------------------------------------------- emission

bool bare_id(std::string_view s) {
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0])))
    return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
      return false;
  static const std::set<std::string> keywords{"node",     "edge",   "graph",
                                               "digraph",  "subgraph",
                                               "strict"};
  return !keywords.contains(lower(std::string(s)));
}

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\')
      out += '\\';
    out += c;
  }
  return out + '"';
}

std::string dot_id(std::string_view s) {
  return bare_id(s) ? std::string(s) : quote(s);
}

std::string_view dialect_kind(NodeKind k) {
  // Contracted components never survive build_efg; they print as branches.
  return k == NodeKind::ContractedScc ? "branch" : to_string(k);
}

// (role, object) of every node named by a spec.
std::map<NodeId, std::pair<EventRole, std::string>>
roles_of(const GraphDocument &doc) {
  std::map<NodeId, std::pair<EventRole, std::string>> out;
  for (const auto &spec : doc.specs)
    for (const auto &[n, role] : spec.events)
      out.emplace(n, std::pair(role, spec.object_id));
  return out;
}

} // namespace

GraphDocument parse_dot(std::string_view text, std::string_view source) {
  Parser parser(text, source);
  return build_document(parser.parse(), source);
}

std::string emit_dot(const GraphDocument &doc) {
  const ColoredDirectedGraph &g = doc.graph;
  auto roles = roles_of(doc);
  std::ostringstream out;
  out << "digraph";
  if (!doc.name.empty())
    out << ' ' << dot_id(doc.name);
  out << " {\n";
  for (NodeId n : g.nodes()) {
    NodeKind kind = g.kind(n);
    out << "  " << dot_id(g.name(n)) << " [kind=" << dialect_kind(kind);
    if (g.is_colored(n) != (kind == NodeKind::Event))
      out << ", colored=" << (g.is_colored(n) ? "true" : "false");
    if (auto it = roles.find(n); it != roles.end())
      out << ", event_role=" << to_string(it->second.first)
          << ", object=" << quote(it->second.second);
    out << "];\n";
  }
  for (const Edge &e : g.edges()) {
    out << "  " << dot_id(g.name(e.from)) << " -> " << dot_id(g.name(e.to));
    if (e.label)
      out << " [label=" << quote(*e.label) << ']';
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

GraphDocument parse_document(std::string_view text, std::string_view source) {
  auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos || text[first] != '{')
    return parse_dot(text, source);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    throw IngestError(Diagnostic{"E001", e.what(), 0, 0}, source);
  }
  return graph_from_json(j, source);
}

nlohmann::ordered_json graph_to_json(const GraphDocument &doc) {
  const ColoredDirectedGraph &g = doc.graph;
  auto roles = roles_of(doc);
  nlohmann::ordered_json j;
  j["name"] = doc.name;
  auto &nodes = j["nodes"] = nlohmann::ordered_json::array();
  for (NodeId n : g.nodes()) {
    nlohmann::ordered_json node;
    node["name"] = g.name(n);
    node["kind"] = dialect_kind(g.kind(n));
    node["colored"] = g.is_colored(n);
    if (auto it = roles.find(n); it != roles.end()) {
      node["event_role"] = to_string(it->second.first);
      node["object"] = it->second.second;
    }
    nodes.push_back(std::move(node));
  }
  auto &edges = j["edges"] = nlohmann::ordered_json::array();
  for (const Edge &e : g.edges()) {
    nlohmann::ordered_json edge;
    edge["from"] = g.name(e.from);
    edge["to"] = g.name(e.to);
    if (e.label)
      edge["label"] = *e.label;
    edges.push_back(std::move(edge));
  }
  return j;
}

GraphDocument graph_from_json(const nlohmann::json &j,
                              std::string_view source) {
  RawDocument raw;
  Position nowhere;
  try {
    raw.name = j.value("name", "");
    std::set<std::string> names;
    for (const auto &node : j.at("nodes")) {
      RawNode n;
      n.name = node.at("name").get<std::string>();
      if (!names.insert(n.name).second)
        fail(source, "E001", "duplicate node '" + n.name + "'", nowhere);
      for (const char *key : {"kind", "event_role", "object"})
        if (node.contains(key))
          n.attrs[key] = node.at(key).get<std::string>();
      if (node.contains("colored"))
        n.attrs["colored"] = node.at("colored").get<bool>() ? "true" : "false";
      raw.nodes.push_back(std::move(n));
    }
    for (const auto &edge : j.at("edges")) {
      RawEdge e;
      e.from = edge.at("from").get<std::string>();
      e.to = edge.at("to").get<std::string>();
      for (const auto &end : {e.from, e.to})
        if (!names.contains(end))
          fail(source, "E001", "edge names unknown node '" + end + "'",
               nowhere);
      if (edge.contains("label") && !edge.at("label").is_null())
        e.attrs["label"] = edge.at("label").get<std::string>();
      raw.edges.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception &ex) {
    fail(source, "E001", std::string("malformed graph JSON: ") + ex.what(),
         nowhere);
  }
  return build_document(std::move(raw), source);
}

nlohmann::ordered_json stats_json(const GraphStats &s) {
  auto triple = [](std::size_t before, std::size_t after) {
    nlohmann::ordered_json t;
    t["before"] = before;
    t["after"] = after;
    t["percentage"] = reduction_percentage(before, after);
    return t;
  };
  nlohmann::ordered_json j;
  j["nodes"] = triple(s.nodes_before, s.nodes_after);
  j["edges"] = triple(s.edges_before, s.edges_after);
  j["branch_nodes"] = triple(s.branch_before, s.branch_after);
  return j;
}

nlohmann::ordered_json histograms_json(const CorpusStats &c) {
  auto hist = [](const Histogram &h) {
    auto arr = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < kBucketCount; ++i) {
      nlohmann::ordered_json b;
      b["bucket"] = h.labels[i];
      b["count"] = h.counts[i];
      arr.push_back(std::move(b));
    }
    return arr;
  };
  nlohmann::ordered_json j;
  j["nodes_before"] = hist(c.nodes_before);
  j["nodes_after"] = hist(c.nodes_after);
  j["edges_before"] = hist(c.edges_before);
  j["edges_after"] = hist(c.edges_after);
  j["branch_before"] = hist(c.branch_before);
  j["branch_after"] = hist(c.branch_after);
  return j;
}

nlohmann::ordered_json verdict_json(const ColoredDirectedGraph &g,
                                    const Verdict &v) {
  nlohmann::ordered_json j;
  j["object"] = v.object_id;
  j["status"] = to_string(v.status);
  auto &ws = j["witnesses"] = nlohmann::ordered_json::array();
  for (const auto &w : v.witnesses) {
    nlohmann::ordered_json wj;
    wj["trace"] = render(g, w.trace);
    wj["exit_state"] = to_string(w.exit_state);
    auto &cs = wj["conditions"] = nlohmann::ordered_json::array();
    for (const auto &c : w.conditions) {
      nlohmann::ordered_json cj;
      cj["node"] = g.name(c.node);
      cj["label"] = c.taken_label ? nlohmann::ordered_json(*c.taken_label)
                                  : nlohmann::ordered_json(nullptr);
      cs.push_back(std::move(cj));
    }
    ws.push_back(std::move(wj));
  }
  return j;
}

nlohmann::ordered_json bijection_json(const BijectionReport &r, unsigned k) {
  nlohmann::ordered_json j;
  j["k"] = k;
  j["ok"] = r.ok;
  j["cfg_classes"] = r.cfg_classes;
  j["efg_traces"] = r.efg_traces;
  j["missing_in_efg"] = r.missing_in_efg;
  j["missing_in_cfg"] = r.missing_in_cfg;
  return j;
}

nlohmann::ordered_json report_json(const Report &r) {
  nlohmann::ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["graph_id"] = r.graph_id;
  j["stats"] = stats_json(r.stats);
  if (r.classes)
    j["classes"] = *r.classes;
  if (r.verdicts) {
    auto &vs = j["verdicts"] = nlohmann::ordered_json::array();
    for (const auto &v : *r.verdicts)
      vs.push_back(verdict_json(*r.graph, v));
  }
  if (r.oracle)
    j["oracle"] = *r.oracle;
  return j;
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::NotFound, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace efg
