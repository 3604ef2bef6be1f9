#include "sfqsim/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace sfqsim {

namespace {

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

enum class Tok { Ident, Number, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceSpan span;
};

class Lexer {
public:
  Lexer(std::string_view text, std::string_view file)
      : text_(text), file_(file) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space_and_comments();
      Token t;
      t.span = here();
      if (pos_ >= text_.size()) {
        t.kind = Tok::End;
        out.push_back(t);
        return out;
      }
      char c = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Tok::Ident;
        while (pos_ < text_.size() && is_ident_char(text_[pos_]))
          t.text.push_back(advance());
      } else if (c == '\\') {
        // Escaped identifier: everything up to the next whitespace.
        advance();
        t.kind = Tok::Ident;
        while (pos_ < text_.size() &&
               !std::isspace(static_cast<unsigned char>(text_[pos_])))
          t.text.push_back(advance());
        if (t.text.empty())
          throw ParseError(t.span, "empty escaped identifier");
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        t.kind = Tok::Number;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                text_[pos_] == '\'' || text_[pos_] == '_'))
          t.text.push_back(advance());
      } else if (std::string_view("();,.[]:").find(c) != std::string_view::npos) {
        t.kind = Tok::Punct;
        t.text.push_back(advance());
      } else if (c == '#') {
        throw ParseError(t.span, "delays and parameter overrides ('#') are not "
                                 "supported in structural netlists");
      } else if (c == '`') {
        throw ParseError(t.span, "compiler directives are not supported");
      } else if (c == '=' || c == '@') {
        throw ParseError(t.span, std::string("behavioral construct '") + c +
                                     "' is not supported in structural netlists");
      } else {
        throw ParseError(t.span, std::string("unexpected character '") + c + "'");
      }
      out.push_back(std::move(t));
    }
  }

private:
  static bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
  }

  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  SourceSpan here() const { return SourceSpan{std::string(file_), line_, col_}; }

  void skip_space_and_comments() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n')
          advance();
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '*') {
        SourceSpan start = here();
        advance();
        advance();
        for (;;) {
          if (pos_ + 1 >= text_.size())
            throw ParseError(start, "unterminated block comment");
          if (text_[pos_] == '*' && text_[pos_ + 1] == '/') {
            advance();
            advance();
            break;
          }
          advance();
        }
      } else {
        return;
      }
    }
  }

  std::string_view text_;
  std::string_view file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

const std::set<std::string, std::less<>> kBehavioral = {
    "always",  "assign",    "reg",      "initial",    "integer", "real",
    "parameter", "localparam", "defparam", "generate", "genvar", "function",
    "task",    "begin",     "end",      "if",         "else",    "case",
    "specify", "supply0",   "supply1",  "tri",        "wand",    "wor",
    "inout",   "always_ff", "always_comb", "logic"};

class Parser {
public:
  Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  ParsedNetlist run() {
    ParsedNetlist out;
    std::set<std::string> names;
    while (peek().kind != Tok::End) {
      ModuleDecl m = module();
      if (!names.insert(m.name).second)
        throw ParseError(m.span, "duplicate module '" + m.name + "'");
      out.modules.push_back(std::move(m));
    }
    return out;
  }

private:
  const Token &peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  const Token &next() {
    const Token &t = toks_[pos_];
    if (pos_ + 1 < toks_.size())
      ++pos_;
    return t;
  }
  bool is_punct(char c, std::size_t k = 0) const {
    const Token &t = peek(k);
    return t.kind == Tok::Punct && t.text[0] == c;
  }
  bool is_word(std::string_view w, std::size_t k = 0) const {
    const Token &t = peek(k);
    return t.kind == Tok::Ident && t.text == w;
  }
  [[noreturn]] void fail(const Token &t, const std::string &msg) const {
    throw ParseError(t.span, msg);
  }
  std::string describe(const Token &t) const {
    if (t.kind == Tok::End)
      return "end of input";
    return "'" + t.text + "'";
  }
  void expect(char c) {
    if (!is_punct(c))
      fail(peek(), std::string("expected '") + c + "' but found " + describe(peek()));
    next();
  }
  std::string ident(const char *what) {
    const Token &t = peek();
    if (t.kind != Tok::Ident)
      fail(t, std::string("expected ") + what + " but found " + describe(t));
    if (kBehavioral.count(t.text))
      fail(t, "behavioral construct '" + t.text +
                  "' is not supported in structural netlists");
    return next().text;
  }
  int number() {
    const Token &t = peek();
    if (t.kind != Tok::Number)
      fail(t, "expected a number but found " + describe(t));
    for (char c : t.text)
      if (!std::isdigit(static_cast<unsigned char>(c)))
        fail(t, "expected a decimal integer but found '" + t.text + "'");
    if (t.text.size() > 9)
      fail(t, "index out of range");
    return std::stoi(next().text);
  }

  std::optional<BitRange> opt_range() {
    if (!is_punct('['))
      return std::nullopt;
    next();
    BitRange r;
    r.msb = number();
    expect(':');
    r.lsb = number();
    expect(']');
    return r;
  }

  static bool is_dir(const Token &t) {
    return t.kind == Tok::Ident &&
           (t.text == "input" || t.text == "output");
  }

  ModuleDecl module() {
    if (!is_word("module")) {
      const Token &t = peek();
      if (t.kind == Tok::Ident && kBehavioral.count(t.text))
        fail(t, "behavioral construct '" + t.text + "' outside a module");
      fail(t, "expected 'module' but found " + describe(t));
    }
    ModuleDecl m;
    m.span = next().span;
    m.name = ident("module name");

    std::set<std::string> declared_ports;
    if (is_punct('(')) {
      next();
      if (is_dir(peek())) {
        ansi_ports(m, declared_ports);
      } else if (!is_punct(')')) {
        for (;;) {
          m.port_order.push_back(ident("port name"));
          if (is_punct(','))
            next();
          else
            break;
        }
      }
      expect(')');
    }
    expect(';');

    std::set<std::string> instance_names;
    while (!is_word("endmodule")) {
      const Token &t = peek();
      if (t.kind == Tok::End)
        fail(t, "missing 'endmodule' for module '" + m.name + "'");
      if (is_dir(t) || is_word("wire")) {
        declaration(m, declared_ports);
      } else if (t.kind == Tok::Ident) {
        if (kBehavioral.count(t.text))
          fail(t, "behavioral construct '" + t.text +
                      "' is not supported in structural netlists");
        InstanceDecl inst = instance();
        if (!instance_names.insert(inst.name).second)
          throw ParseError(inst.span, "duplicate instance name '" + inst.name + "'");
        m.instances.push_back(std::move(inst));
      } else {
        fail(t, "unexpected " + describe(t) + " in module body");
      }
    }
    next(); // endmodule

    for (const auto &p : m.port_order)
      if (!declared_ports.count(p))
        throw ParseError(m.span, "port '" + p + "' of module '" + m.name +
                                     "' has no input/output declaration");
    return m;
  }

  void ansi_ports(ModuleDecl &m, std::set<std::string> &declared) {
    for (;;) {
      const Token &dir_tok = next();
      DeclKind kind = dir_tok.text == "input" ? DeclKind::Input : DeclKind::Output;
      if (is_word("wire"))
        next();
      auto range = opt_range();
      for (;;) {
        NetDecl d{kind, "", range, peek().span};
        d.name = ident("port name");
        if (!declared.insert(d.name).second)
          fail(dir_tok, "duplicate port '" + d.name + "'");
        m.port_order.push_back(d.name);
        m.decls.push_back(std::move(d));
        if ((is_punct(',') || is_punct(';')) && is_dir(peek(1))) {
          next();
          break;
        }
        if (is_punct(',')) {
          next();
          continue;
        }
        return;
      }
    }
  }

  void declaration(ModuleDecl &m, std::set<std::string> &declared) {
    const Token &kw = next();
    DeclKind kind = kw.text == "input"    ? DeclKind::Input
                    : kw.text == "output" ? DeclKind::Output
                                          : DeclKind::Wire;
    if (kind != DeclKind::Wire && is_word("wire"))
      next();
    auto range = opt_range();
    for (;;) {
      NetDecl d{kind, "", range, peek().span};
      d.name = ident("net name");
      if (kind == DeclKind::Wire) {
        // `wire` may restate a port's net type.
        if (!m.find_decl(d.name))
          m.decls.push_back(std::move(d));
        else if (m.find_decl(d.name)->kind == DeclKind::Wire)
          throw ParseError(d.span, "duplicate declaration of '" + d.name + "'");
      } else {
        if (std::find(m.port_order.begin(), m.port_order.end(), d.name) ==
            m.port_order.end())
          throw ParseError(d.span, "'" + d.name + "' is not in the port list of '" +
                                       m.name + "'");
        if (!declared.insert(d.name).second)
          throw ParseError(d.span, "duplicate declaration of port '" + d.name + "'");
        m.decls.push_back(std::move(d));
      }
      if (is_punct(',')) {
        next();
        continue;
      }
      break;
    }
    expect(';');
  }

  InstanceDecl instance() {
    InstanceDecl inst;
    inst.span = peek().span;
    inst.type = ident("cell type");
    inst.name = ident("instance name");
    expect('(');
    std::set<std::string> seen;
    if (!is_punct(')')) {
      for (;;) {
        if (!is_punct('.'))
          fail(peek(), "only named port connections (.port(net)) are supported");
        PortConnection pc;
        pc.span = next().span;
        pc.port = ident("port name");
        if (!seen.insert(pc.port).second)
          throw ParseError(pc.span, "port '" + pc.port + "' connected twice");
        expect('(');
        if (!is_punct(')'))
          pc.net = net_ref();
        expect(')');
        inst.connections.push_back(std::move(pc));
        if (is_punct(',')) {
          next();
          continue;
        }
        break;
      }
    }
    expect(')');
    if (is_punct(','))
      fail(peek(), "one instance per statement");
    expect(';');
    return inst;
  }

  NetRef net_ref() {
    NetRef r;
    r.span = peek().span;
    if (peek().kind == Tok::Number)
      fail(peek(), "constant connections are not supported");
    if (is_punct('{'))
      fail(peek(), "concatenations are not supported");
    r.name = ident("net name");
    if (is_punct('[')) {
      next();
      BitRange sel;
      sel.msb = number();
      if (is_punct(':')) {
        next();
        sel.lsb = number();
      } else {
        sel.lsb = sel.msb;
        r.single_bit = true;
      }
      expect(']');
      r.select = sel;
    }
    return r;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

} // namespace

const NetDecl *ModuleDecl::find_decl(std::string_view net) const {
  for (const auto &d : decls)
    if (d.name == net)
      return &d;
  return nullptr;
}

const ModuleDecl *ParsedNetlist::find(std::string_view name) const {
  for (const auto &m : modules)
    if (m.name == name)
      return &m;
  return nullptr;
}

ParsedNetlist parse_netlist(std::string_view text, std::string_view file) {
  Lexer lexer(text, file);
  Parser parser(lexer.run());
  return parser.run();
}

std::string print_netlist(const ParsedNetlist &netlist) {
  std::ostringstream os;
  auto range_str = [](const std::optional<BitRange> &r) {
    if (!r)
      return std::string();
    return "[" + std::to_string(r->msb) + ":" + std::to_string(r->lsb) + "] ";
  };
  bool first = true;
  for (const auto &m : netlist.modules) {
    if (!first)
      os << "\n";
    first = false;
    os << "module " << m.name << " (";
    for (std::size_t i = 0; i < m.port_order.size(); ++i)
      os << (i ? ", " : "") << m.port_order[i];
    os << ");\n";
    for (const auto &d : m.decls) {
      const char *kw = d.kind == DeclKind::Input    ? "input"
                       : d.kind == DeclKind::Output ? "output"
                                                    : "wire";
      os << "  " << kw << " " << range_str(d.range) << d.name << ";\n";
    }
    if (!m.instances.empty())
      os << "\n";
    for (const auto &inst : m.instances) {
      os << "  " << inst.type << " " << inst.name << " (";
      for (std::size_t i = 0; i < inst.connections.size(); ++i) {
        const auto &c = inst.connections[i];
        os << (i ? ", " : "") << "." << c.port << "(";
        if (c.net) {
          os << c.net->name;
          if (c.net->select) {
            if (c.net->single_bit)
              os << "[" << c.net->select->msb << "]";
            else
              os << "[" << c.net->select->msb << ":" << c.net->select->lsb << "]";
          }
        }
        os << ")";
      }
      os << ");\n";
    }
    os << "endmodule\n";
  }
  return os.str();
}

std::string find_top(const ParsedNetlist &netlist) {
  std::set<std::string> used;
  for (const auto &m : netlist.modules)
    for (const auto &i : m.instances)
      used.insert(i.type);
  std::vector<std::string> roots;
  for (const auto &m : netlist.modules)
    if (!used.count(m.name))
      roots.push_back(m.name);
  if (roots.size() == 1)
    return roots.front();
  if (roots.empty())
    throw Error("netlist has no top module (every module is instantiated)");
  std::string list;
  for (const auto &r : roots)
    list += (list.empty() ? "" : ", ") + r;
  throw Error("ambiguous top module (candidates: " + list + "); pass one explicitly");
}

// ---------------------------------------------------------------------------
// Elaboration
// ---------------------------------------------------------------------------

std::optional<NetId> Netlist::find_net(std::string_view name) const {
  auto it = net_index_.find(name);
  if (it == net_index_.end())
    return std::nullopt;
  return it->second;
}

std::optional<InstanceId> Netlist::find_instance(std::string_view path) const {
  auto it = instance_index_.find(path);
  if (it == instance_index_.end())
    return std::nullopt;
  return it->second;
}

std::vector<std::string> Netlist::top_bus_bits(std::string_view name) const {
  auto it = top_buses_.find(name);
  if (it != top_buses_.end())
    return it->second;
  return {};
}

std::string Netlist::endpoint_name(PortRef ref) const {
  const Instance &inst = instances_.at(ref.instance);
  return inst.path + "." + inst.cell->port(ref.port).name;
}

std::string Netlist::driver_name(NetId id) const {
  const Net &n = nets_.at(id);
  if (n.driver)
    return endpoint_name(*n.driver);
  return n.name;
}

namespace {

std::string bit_name(const std::string &base, const std::optional<BitRange> &range,
                     int index) {
  if (!range)
    return base;
  return base + "[" + std::to_string(index) + "]";
}

/// Bit indices of a declaration, msb first.
std::vector<int> declared_bits(const std::optional<BitRange> &range) {
  if (!range)
    return {0};
  std::vector<int> out;
  int step = range->msb >= range->lsb ? -1 : 1;
  for (int i = range->msb;; i += step) {
    out.push_back(i);
    if (i == range->lsb)
      break;
  }
  return out;
}

class Elaborator {
public:
  Elaborator(const ParsedNetlist &parsed, std::shared_ptr<const CellLibrary> lib,
             const ElaborateOptions &opts, Netlist &out,
             std::vector<Net> &nets, std::vector<Instance> &instances)
      : parsed_(parsed), lib_(std::move(lib)), opts_(opts), out_(out),
        nets_(nets), instances_(instances) {}

  struct Signal {
    std::optional<BitRange> range;
    std::vector<NetId> bits; // msb first
  };
  using Scope = std::map<std::string, Signal, std::less<>>;

  void error(const SourceSpan &span, std::string msg) {
    errors_.push_back({Diagnostic::Severity::Error, span, std::move(msg)});
  }
  void warn(const SourceSpan &span, std::string msg) {
    warnings_.push_back({Diagnostic::Severity::Warning, span, std::move(msg)});
  }

  NetId new_net(std::string name) {
    nets_.push_back(Net{std::move(name), std::nullopt, false, false, {}});
    drivers_.emplace_back();
    return static_cast<NetId>(nets_.size() - 1);
  }

  Scope top_scope(const ModuleDecl &m, std::vector<NetId> &inputs,
                  std::vector<NetId> &outputs) {
    Scope scope;
    for (const auto &d : m.decls) {
      Signal sig{d.range, {}};
      for (int i : declared_bits(d.range)) {
        NetId id = new_net(bit_name(d.name, d.range, i));
        if (d.kind == DeclKind::Input) {
          nets_[id].primary_input = true;
          inputs.push_back(id);
        } else if (d.kind == DeclKind::Output) {
          nets_[id].primary_output = true;
          outputs.push_back(id);
        }
        sig.bits.push_back(id);
      }
      scope.emplace(d.name, std::move(sig));
    }
    return scope;
  }

  std::optional<std::vector<NetId>> lookup(const Scope &scope, const NetRef &ref,
                                           const std::string &module) {
    auto it = scope.find(ref.name);
    if (it == scope.end()) {
      error(ref.span, "undeclared net '" + ref.name + "' in module '" + module + "'");
      return std::nullopt;
    }
    const Signal &sig = it->second;
    if (!ref.select)
      return sig.bits;
    if (!sig.range) {
      error(ref.span, "bit-select on scalar net '" + ref.name + "'");
      return std::nullopt;
    }
    auto position = [&](int idx) -> std::optional<std::size_t> {
      const BitRange &r = *sig.range;
      int lo = std::min(r.msb, r.lsb), hi = std::max(r.msb, r.lsb);
      if (idx < lo || idx > hi)
        return std::nullopt;
      return static_cast<std::size_t>(r.msb >= r.lsb ? r.msb - idx : idx - r.msb);
    };
    auto a = position(ref.select->msb);
    auto b = position(ref.select->lsb);
    if (!a || !b) {
      error(ref.span, "index out of range for '" + ref.name + "'");
      return std::nullopt;
    }
    std::vector<NetId> out;
    if (*a <= *b)
      for (std::size_t k = *a; k <= *b; ++k)
        out.push_back(sig.bits[k]);
    else
      for (std::size_t k = *a + 1; k-- > *b;)
        out.push_back(sig.bits[k]);
    return out;
  }

  void elaborate_module(const ModuleDecl &m, const std::string &prefix,
                        Scope scope) {
    if (std::find(stack_.begin(), stack_.end(), m.name) != stack_.end()) {
      error(m.span, "recursive instantiation of module '" + m.name + "'");
      return;
    }
    stack_.push_back(m.name);

    // Internal wires.
    for (const auto &d : m.decls) {
      if (d.kind != DeclKind::Wire || scope.count(d.name))
        continue;
      Signal sig{d.range, {}};
      for (int i : declared_bits(d.range))
        sig.bits.push_back(new_net(prefix + bit_name(d.name, d.range, i)));
      scope.emplace(d.name, std::move(sig));
    }

    for (const auto &inst : m.instances) {
      const std::string path = prefix + inst.name;
      if (const ModuleDecl *sub = parsed_.find(inst.type)) {
        instantiate_module(inst, *sub, path, scope, m.name);
      } else if (const CellSpec *cell = lib_->find(inst.type)) {
        instantiate_cell(inst, *cell, path, scope, m.name);
      } else {
        error(inst.span, "unknown cell type '" + inst.type + "' for instance '" +
                             path + "'");
      }
    }
    stack_.pop_back();
  }

  void instantiate_module(const InstanceDecl &inst, const ModuleDecl &sub,
                          const std::string &path, const Scope &scope,
                          const std::string &parent) {
    Scope child;
    for (const auto &pc : inst.connections)
      if (!sub.find_decl(pc.port) ||
          std::find(sub.port_order.begin(), sub.port_order.end(), pc.port) ==
              sub.port_order.end())
        error(pc.span, "module '" + sub.name + "' has no port '" + pc.port + "'");

    for (const auto &pname : sub.port_order) {
      const NetDecl *d = sub.find_decl(pname);
      auto it = std::find_if(inst.connections.begin(), inst.connections.end(),
                             [&](const PortConnection &c) { return c.port == pname; });
      const std::size_t width = d->range ? d->range->width() : 1;
      Signal sig{d->range, {}};
      if (it == inst.connections.end() || !it->net) {
        if (d->kind == DeclKind::Input) {
          error(inst.span, "unconnected input port '" + pname + "' on instance '" +
                               path + "'");
          continue;
        }
        for (int i : declared_bits(d->range))
          sig.bits.push_back(new_net(path + "." + bit_name(pname, d->range, i)));
      } else {
        auto bits = lookup(scope, *it->net, parent);
        if (!bits)
          continue;
        if (bits->size() != width) {
          error(it->span, "width mismatch on port '" + pname + "' of '" + path +
                              "': port is " + std::to_string(width) +
                              " bit(s), connection is " +
                              std::to_string(bits->size()));
          continue;
        }
        sig.bits = std::move(*bits);
      }
      child.emplace(pname, std::move(sig));
    }
    elaborate_module(sub, path + ".", std::move(child));
  }

  void instantiate_cell(const InstanceDecl &inst, const CellSpec &cell,
                        const std::string &path, const Scope &scope,
                        const std::string &parent) {
    Instance out{path, &cell, std::vector<std::optional<NetId>>(cell.ports().size()),
                 inst.span};
    const auto id = static_cast<InstanceId>(instances_.size());

    for (const auto &pc : inst.connections) {
      auto pidx = cell.port_index(pc.port);
      if (!pidx) {
        error(pc.span, "cell '" + cell.name() + "' has no port '" + pc.port + "'");
        continue;
      }
      if (!pc.net)
        continue;
      auto bits = lookup(scope, *pc.net, parent);
      if (!bits)
        continue;
      if (bits->size() != 1) {
        error(pc.span, "width mismatch on port '" + pc.port + "' of '" + path +
                           "': cell ports are 1 bit, connection is " +
                           std::to_string(bits->size()));
        continue;
      }
      out.port_nets[*pidx] = bits->front();
    }

    for (std::size_t p = 0; p < cell.ports().size(); ++p) {
      const PortInfo &info = cell.port(p);
      const auto &net = out.port_nets[p];
      if (!net) {
        if (info.role == PortRole::Data || info.role == PortRole::Clock)
          error(inst.span, "unconnected required port '" + info.name +
                               "' on instance '" + path + "'");
        continue;
      }
      PortRef ref{id, static_cast<std::uint32_t>(p)};
      if (info.is_input())
        nets_[*net].sinks.push_back(ref);
      else
        drivers_[*net].push_back(ref);
    }
    instances_.push_back(std::move(out));
  }

  void finish(const SourceSpan &top_span) {
    for (NetId id = 0; id < nets_.size(); ++id) {
      Net &n = nets_[id];
      auto &drv = drivers_[id];
      std::size_t count = drv.size() + (n.primary_input ? 1 : 0);
      if (count > 1) {
        std::string who;
        if (n.primary_input)
          who = "primary input";
        for (const auto &r : drv)
          who += (who.empty() ? "" : ", ") + instances_[r.instance].path + "." +
                 instances_[r.instance].cell->port(r.port).name;
        error(top_span, "net '" + n.name + "' has multiple drivers (" + who + ")");
        continue;
      }
      if (count == 0) {
        if (!n.sinks.empty() || n.primary_output)
          error(top_span, "net '" + n.name + "' has no driver");
        else
          warn(top_span, "net '" + n.name + "' is unused");
        continue;
      }
      if (n.primary_input && n.sinks.empty() && !n.primary_output)
        warn(top_span, "primary input '" + n.name + "' is unused");
      if (!drv.empty())
        n.driver = drv.front();

      if (n.sinks.size() > 1) {
        bool from_splitter =
            n.driver && instances_[n.driver->instance].cell->as<Splitter>();
        if (!from_splitter) {
          std::string msg = "net '" + n.name + "' fans out to " +
                            std::to_string(n.sinks.size()) +
                            " sinks without a splitter";
          if (opts_.strict_fanout)
            error(top_span, msg);
          else
            warn(top_span, msg + "; using implicit zero-delay fanout");
        }
      }
    }
  }

  std::vector<Diagnostic> errors_;
  std::vector<Diagnostic> warnings_;

private:
  const ParsedNetlist &parsed_;
  std::shared_ptr<const CellLibrary> lib_;
  const ElaborateOptions &opts_;
  Netlist &out_;
  std::vector<Net> &nets_;
  std::vector<Instance> &instances_;
  std::vector<std::vector<PortRef>> drivers_;
  std::vector<std::string> stack_;
};

} // namespace

Netlist elaborate(const ParsedNetlist &parsed,
                  std::shared_ptr<const CellLibrary> library,
                  std::string_view top, const ElaborateOptions &options) {
  if (!library)
    throw Error("elaborate: no cell library");
  const ModuleDecl *top_mod = parsed.find(top);
  if (!top_mod)
    throw Error("top module '" + std::string(top) + "' not found");

  Netlist out;
  out.top_ = std::string(top);
  out.library_ = library;

  Elaborator elab(parsed, library, options, out, out.nets_, out.instances_);
  auto scope = elab.top_scope(*top_mod, out.inputs_, out.outputs_);
  for (const auto &[name, sig] : scope) {
    std::vector<std::string> names;
    for (NetId id : sig.bits)
      names.push_back(out.nets_[id].name);
    out.top_buses_.emplace(name, std::move(names));
  }
  elab.elaborate_module(*top_mod, "", std::move(scope));
  elab.finish(top_mod->span);

  if (!elab.errors_.empty())
    throw DiagnosticError("elaboration of '" + std::string(top) + "' failed",
                          std::move(elab.errors_));

  for (NetId id = 0; id < out.nets_.size(); ++id)
    out.net_index_.emplace(out.nets_[id].name, id);
  for (InstanceId id = 0; id < out.instances_.size(); ++id)
    out.instance_index_.emplace(out.instances_[id].path, id);
  out.warnings_ = std::move(elab.warnings_);
  return out;
}

} // namespace sfqsim
