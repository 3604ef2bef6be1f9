#include "sfqsim/sdf.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace sfqsim {

std::optional<DelayCorner> parse_corner(std::string_view text) {
  if (text == "min")
    return DelayCorner::Min;
  if (text == "typ")
    return DelayCorner::Typ;
  if (text == "max")
    return DelayCorner::Max;
  return std::nullopt;
}

std::string_view corner_name(DelayCorner corner) {
  switch (corner) {
  case DelayCorner::Min:
    return "min";
  case DelayCorner::Typ:
    return "typ";
  case DelayCorner::Max:
    return "max";
  }
  return "typ";
}

SimTime DelayTriple::select(DelayCorner corner) const {
  const std::optional<SimTime> *want = corner == DelayCorner::Min   ? &min
                                       : corner == DelayCorner::Max ? &max
                                                                    : &typ;
  for (const auto *member : {want, &typ, &min, &max})
    if (*member)
      return **member;
  throw Error("empty delay triple");
}

namespace {

// ---------------------------------------------------------------------------
// S-expression reader
// ---------------------------------------------------------------------------

struct Node {
  bool is_list = false;
  bool quoted = false;
  std::string atom;
  std::vector<Node> items;
  SourceSpan span;
};

class Reader {
public:
  Reader(std::string_view text, std::string_view file) : text_(text), file_(file) {}

  Node read_document() {
    skip();
    if (pos_ >= text_.size())
      throw ParseError(here(), "empty SDF file");
    if (text_[pos_] != '(')
      throw ParseError(here(), "expected '(' at start of SDF file");
    Node root = read();
    skip();
    if (pos_ < text_.size())
      throw ParseError(here(), "unexpected text after DELAYFILE");
    return root;
  }

private:
  SourceSpan here() const { return {std::string(file_), line_, col_}; }

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

  void skip() {
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

  Node read() {
    skip();
    Node n;
    n.span = here();
    if (pos_ >= text_.size())
      throw ParseError(n.span, "unexpected end of file (unbalanced parentheses)");
    char c = text_[pos_];
    if (c == '(') {
      advance();
      n.is_list = true;
      for (;;) {
        skip();
        if (pos_ >= text_.size())
          throw ParseError(n.span, "unbalanced '('");
        if (text_[pos_] == ')') {
          advance();
          return n;
        }
        n.items.push_back(read());
      }
    }
    if (c == ')')
      throw ParseError(n.span, "unexpected ')'");
    if (c == '"') {
      advance();
      n.quoted = true;
      for (;;) {
        if (pos_ >= text_.size())
          throw ParseError(n.span, "unterminated string");
        char d = advance();
        if (d == '"')
          break;
        if (d == '\\' && pos_ < text_.size())
          d = advance();
        n.atom.push_back(d);
      }
      return n;
    }
    while (pos_ < text_.size()) {
      char d = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' ||
          d == '"')
        break;
      advance();
      if (d == '\\') {
        if (pos_ >= text_.size())
          throw ParseError(here(), "dangling escape");
        d = advance();
      }
      n.atom.push_back(d);
    }
    return n;
  }

  std::string_view text_;
  std::string_view file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto &c : out)
    c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

// ---------------------------------------------------------------------------
// Interpreter
// ---------------------------------------------------------------------------

class Interpreter {
public:
  explicit Interpreter(AnnotationDb &db) : db_(db) {}

  void document(const Node &root) {
    if (head(root) != "DELAYFILE")
      fail(root, "expected DELAYFILE");
    // Header entries must precede the first CELL so the timescale is known.
    bool seen_cell = false;
    std::set<std::string> seen_header;
    for (std::size_t i = 1; i < root.items.size(); ++i) {
      const Node &n = root.items[i];
      const std::string h = head(n);
      if (h == "CELL") {
        seen_cell = true;
        cell(n);
        continue;
      }
      if (seen_cell)
        fail(n, "header entry " + h + " after CELL");
      if (!seen_header.insert(h).second)
        fail(n, "duplicate " + h);
      if (h == "SDFVERSION")
        db_.header.sdf_version = string_arg(n);
      else if (h == "DESIGN")
        db_.header.design = string_arg(n);
      else if (h == "DATE")
        db_.header.date = string_arg(n);
      else if (h == "VENDOR")
        db_.header.vendor = string_arg(n);
      else if (h == "PROGRAM")
        db_.header.program = string_arg(n);
      else if (h == "VERSION")
        db_.header.version = string_arg(n);
      else if (h == "DIVIDER")
        divider(n);
      else if (h == "TIMESCALE")
        timescale(n);
      else
        fail(n, "unsupported SDF construct '" + h + "'");
    }
  }

private:
  [[noreturn]] static void fail(const Node &n, const std::string &msg) {
    throw ParseError(n.span, msg);
  }

  static std::string head(const Node &n) {
    if (!n.is_list)
      fail(n, "expected '(' but found '" + n.atom + "'");
    if (n.items.empty() || n.items[0].is_list || n.items[0].quoted)
      fail(n, "expected a keyword after '('");
    return upper(n.items[0].atom);
  }

  static std::string string_arg(const Node &n) {
    if (n.items.size() != 2 || n.items[1].is_list)
      fail(n, head(n) + " takes exactly one value");
    return n.items[1].atom;
  }

  void divider(const Node &n) {
    std::string d = string_arg(n);
    if (d != "." && d != "/")
      fail(n, "DIVIDER must be '.' or '/'");
    divider_ = d[0];
  }

  void timescale(const Node &n) {
    std::string text;
    for (std::size_t i = 1; i < n.items.size(); ++i) {
      if (n.items[i].is_list)
        fail(n, "malformed TIMESCALE");
      text += n.items[i].atom;
    }
    std::size_t split = 0;
    while (split < text.size() &&
           (std::isdigit(static_cast<unsigned char>(text[split])) || text[split] == '.'))
      ++split;
    const std::string number = text.substr(0, split);
    const std::string unit = text.substr(split);
    if (number != "1" && number != "10" && number != "100" && number != "1.0" &&
        number != "10.0" && number != "100.0")
      fail(n, "bad TIMESCALE multiplier '" + number + "' (expected 1, 10 or 100)");
    auto scale = unit_scale_fs(unit);
    if (!scale || unit == "us")
      fail(n, "bad TIMESCALE unit '" + unit + "' (expected fs, ps or ns)");
    db_.header.timescale_fs = *decimal_to_fs(number, *scale);
  }

  std::string path(const std::string &raw) const {
    std::string out = raw;
    if (divider_ != '.')
      std::replace(out.begin(), out.end(), divider_, '.');
    return out;
  }

  void cell(const Node &n) {
    std::optional<std::string> celltype;
    std::optional<std::string> instance;
    CellAnnotation ann;
    bool has_entries = false;
    std::vector<std::pair<std::pair<std::string, std::string>, DelayTriple>> nets;

    for (std::size_t i = 1; i < n.items.size(); ++i) {
      const Node &c = n.items[i];
      const std::string h = head(c);
      if (h == "CELLTYPE") {
        if (celltype)
          fail(c, "duplicate CELLTYPE");
        celltype = string_arg(c);
      } else if (h == "INSTANCE") {
        if (instance)
          fail(c, "duplicate INSTANCE");
        if (!celltype)
          fail(c, "INSTANCE before CELLTYPE");
        if (c.items.size() > 2 || (c.items.size() == 2 && c.items[1].is_list))
          fail(c, "malformed INSTANCE");
        instance = c.items.size() == 2 ? path(c.items[1].atom) : std::string();
        if (*instance == "*")
          fail(c, "wildcard INSTANCE is not supported");
      } else if (h == "DELAY") {
        if (!instance)
          fail(c, "DELAY before INSTANCE");
        for (std::size_t k = 1; k < c.items.size(); ++k) {
          const Node &d = c.items[k];
          if (head(d) != "ABSOLUTE")
            fail(d, "unsupported delay type '" + head(d) + "' (only ABSOLUTE)");
          for (std::size_t m = 1; m < d.items.size(); ++m) {
            const Node &e = d.items[m];
            const std::string eh = head(e);
            if (eh == "IOPATH") {
              iopath(e, ann);
              has_entries = true;
            } else if (eh == "INTERCONNECT") {
              nets.push_back(interconnect(e, *instance));
            } else {
              fail(e, "unsupported SDF construct '" + eh + "'");
            }
          }
        }
      } else if (h == "TIMINGCHECK") {
        if (!instance)
          fail(c, "TIMINGCHECK before INSTANCE");
        for (std::size_t k = 1; k < c.items.size(); ++k) {
          const Node &e = c.items[k];
          const std::string eh = head(e);
          if (eh == "SETUP")
            check(e, ann.setups, "SETUP");
          else if (eh == "HOLD")
            check(e, ann.holds, "HOLD");
          else
            fail(e, "unsupported timing check '" + eh + "'");
          has_entries = true;
        }
      } else {
        fail(c, "unsupported SDF construct '" + h + "'");
      }
    }
    if (!celltype)
      fail(n, "CELL without CELLTYPE");
    if (!instance)
      fail(n, "CELL without INSTANCE");

    for (auto &[key, triple] : nets)
      if (!db_.interconnects.emplace(key, triple).second)
        fail(n, "duplicate INTERCONNECT " + key.first + " -> " + key.second);

    if (instance->empty() && !has_entries)
      return;
    ann.celltype = *celltype;
    auto [it, fresh] = db_.cells.emplace(*instance, CellAnnotation{});
    CellAnnotation &dst = it->second;
    if (fresh) {
      dst.celltype = ann.celltype;
    } else if (dst.celltype != ann.celltype) {
      fail(n, "instance '" + *instance + "' listed with CELLTYPE '" + dst.celltype +
                  "' and '" + ann.celltype + "'");
    }
    merge(n, dst.iopaths, ann.iopaths, "IOPATH");
    merge(n, dst.setups, ann.setups, "SETUP");
    merge(n, dst.holds, ann.holds, "HOLD");
  }

  template <typename K>
  static void merge(const Node &n, std::map<K, DelayTriple> &dst,
                    const std::map<K, DelayTriple> &src, const char *what) {
    for (const auto &[k, v] : src)
      if (!dst.emplace(k, v).second)
        fail(n, std::string("duplicate ") + what + " for the same instance");
  }

  static std::pair<EdgeSpec, std::string> port_spec(const Node &n) {
    if (!n.is_list) {
      if (n.quoted)
        fail(n, "port names are not quoted");
      return {EdgeSpec::Any, n.atom};
    }
    const std::string h = head(n);
    if (n.items.size() != 2 || n.items[1].is_list)
      fail(n, "malformed edge specifier");
    if (h == "POSEDGE")
      return {EdgeSpec::Posedge, n.items[1].atom};
    if (h == "NEGEDGE")
      return {EdgeSpec::Negedge, n.items[1].atom};
    fail(n, "unsupported port specifier '" + h + "'");
  }

  std::optional<SimTime> member(const Node &n, std::string_view text) const {
    if (text.empty())
      return std::nullopt;
    if (text[0] == '-')
      fail(n, "negative delay '" + std::string(text) + "'");
    auto fs = decimal_to_fs(text, db_.header.timescale_fs);
    if (!fs)
      fail(n, "bad delay value '" + std::string(text) +
                  "' (not a number, or not a whole number of femtoseconds)");
    return SimTime::fs(*fs);
  }

  DelayTriple rvalue(const Node &n) const {
    if (!n.is_list)
      fail(n, "expected a parenthesized delay value");
    if (n.items.size() != 1 || n.items[0].is_list || n.items[0].quoted)
      fail(n, "expected one value or a min:typ:max triple");
    const std::string &text = n.items[0].atom;
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
      auto colon = text.find(':', start);
      parts.push_back(text.substr(start, colon - start));
      if (colon == std::string::npos)
        break;
      start = colon + 1;
    }
    DelayTriple t;
    if (parts.size() == 1) {
      t.typ = member(n, parts[0]);
    } else if (parts.size() == 3) {
      t.min = member(n, parts[0]);
      t.typ = member(n, parts[1]);
      t.max = member(n, parts[2]);
    } else {
      fail(n, "expected one value or a min:typ:max triple");
    }
    if (t.empty())
      fail(n, "empty delay value");
    return t;
  }

  DelayTriple delay_list(const Node &n, std::size_t first) {
    const std::size_t count = n.items.size() - first;
    if (count == 0)
      fail(n, "missing delay value");
    if (count > 2)
      fail(n, "more than two delay values (only rise and fall are accepted)");
    DelayTriple rise = rvalue(n.items[first]);
    if (count == 2) {
      DelayTriple fall = rvalue(n.items[first + 1]);
      if (fall != rise)
        db_.warnings.push_back({Diagnostic::Severity::Warning, n.span,
                                "distinct rise/fall delays; using the rise value"});
    }
    return rise;
  }

  void iopath(const Node &n, CellAnnotation &ann) {
    if (n.items.size() < 4)
      fail(n, "IOPATH needs an input, an output and a delay");
    auto [edge, in] = port_spec(n.items[1]);
    if (n.items[2].is_list)
      fail(n.items[2], "IOPATH output must be a port name");
    IopathKey key{in, edge, n.items[2].atom};
    DelayTriple v = delay_list(n, 3);
    if (!ann.iopaths.emplace(key, v).second)
      fail(n, "duplicate IOPATH " + in + " -> " + key.output);
  }

  std::pair<std::pair<std::string, std::string>, DelayTriple>
  interconnect(const Node &n, const std::string &instance) {
    if (n.items.size() < 4 || n.items[1].is_list || n.items[2].is_list)
      fail(n, "INTERCONNECT needs a source port, a sink port and a delay");
    auto absolute = [&](const std::string &p) {
      std::string q = path(p);
      return instance.empty() ? q : instance + "." + q;
    };
    return {{absolute(n.items[1].atom), absolute(n.items[2].atom)}, delay_list(n, 3)};
  }

  void check(const Node &n, std::map<CheckKey, DelayTriple> &dst, const char *what) {
    if (n.items.size() != 4)
      fail(n, std::string(what) + " needs a data port, a clock port and one value");
    auto [dedge, data] = port_spec(n.items[1]);
    auto [cedge, clock] = port_spec(n.items[2]);
    CheckKey key{data, dedge, clock, cedge};
    if (!dst.emplace(key, rvalue(n.items[3])).second)
      fail(n, std::string("duplicate ") + what + " " + data + " / " + clock);
  }

  AnnotationDb &db_;
  char divider_ = '.';
};

// ---------------------------------------------------------------------------
// Writer helpers
// ---------------------------------------------------------------------------

std::string escape_atom(const std::string &s) {
  std::string out;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' ||
        c == '"' || c == '\\' || c == ':')
      out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string quote(const std::string &s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\')
      out.push_back('\\');
    out.push_back(c);
  }
  return out + "\"";
}

std::string timescale_text(std::int64_t fs) {
  for (const char *unit : {"ns", "ps", "fs"}) {
    const std::int64_t scale = *unit_scale_fs(unit);
    for (std::int64_t mult : {1, 10, 100})
      if (mult * scale == fs)
        return std::to_string(mult) + unit;
  }
  throw Error("timescale of " + std::to_string(fs) +
              "fs cannot be written as 1, 10 or 100 fs/ps/ns");
}

std::string triple_text(const DelayTriple &t, std::int64_t scale) {
  auto one = [&](const std::optional<SimTime> &v) {
    return v ? format_decimal(v->count(), scale) : std::string();
  };
  if (!t.min && !t.max && t.typ)
    return "(" + one(t.typ) + ")";
  return "(" + one(t.min) + ":" + one(t.typ) + ":" + one(t.max) + ")";
}

std::string port_text(EdgeSpec edge, const std::string &port) {
  switch (edge) {
  case EdgeSpec::Posedge:
    return "(posedge " + escape_atom(port) + ")";
  case EdgeSpec::Negedge:
    return "(negedge " + escape_atom(port) + ")";
  case EdgeSpec::Any:
    break;
  }
  return escape_atom(port);
}

} // namespace

AnnotationDb parse_sdf(std::string_view text, std::string_view file) {
  Reader reader(text, file);
  Node root = reader.read_document();
  AnnotationDb db;
  Interpreter interp(db);
  interp.document(root);
  return db;
}

AnnotationDb load_sdf(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot open SDF file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_sdf(ss.str(), path);
}

std::string write_sdf(const AnnotationDb &db) {
  const std::int64_t ts = db.header.timescale_fs;
  std::ostringstream os;
  os << "(DELAYFILE\n";
  auto header = [&](const char *kw, const std::optional<std::string> &v) {
    if (v)
      os << "  (" << kw << " " << quote(*v) << ")\n";
  };
  header("SDFVERSION", db.header.sdf_version);
  header("DESIGN", db.header.design);
  header("DATE", db.header.date);
  header("VENDOR", db.header.vendor);
  header("PROGRAM", db.header.program);
  header("VERSION", db.header.version);
  os << "  (DIVIDER .)\n";
  os << "  (TIMESCALE " << timescale_text(ts) << ")\n";

  auto write_cell = [&](const std::string &inst, const CellAnnotation &ann,
                        bool with_nets) {
    os << "  (CELL\n";
    os << "    (CELLTYPE " << quote(ann.celltype) << ")\n";
    if (inst.empty())
      os << "    (INSTANCE)\n";
    else
      os << "    (INSTANCE " << escape_atom(inst) << ")\n";
    const bool nets = with_nets && !db.interconnects.empty();
    if (!ann.iopaths.empty() || nets) {
      os << "    (DELAY\n      (ABSOLUTE\n";
      for (const auto &[k, v] : ann.iopaths)
        os << "        (IOPATH " << port_text(k.edge, k.input) << " "
           << escape_atom(k.output) << " " << triple_text(v, ts) << ")\n";
      if (nets)
        for (const auto &[k, v] : db.interconnects)
          os << "        (INTERCONNECT " << escape_atom(k.first) << " "
             << escape_atom(k.second) << " " << triple_text(v, ts) << ")\n";
      os << "      )\n    )\n";
    }
    if (!ann.setups.empty() || !ann.holds.empty()) {
      os << "    (TIMINGCHECK\n";
      for (const auto &[k, v] : ann.setups)
        os << "      (SETUP " << port_text(k.data_edge, k.data) << " "
           << port_text(k.clock_edge, k.clock) << " " << triple_text(v, ts) << ")\n";
      for (const auto &[k, v] : ann.holds)
        os << "      (HOLD " << port_text(k.data_edge, k.data) << " "
           << port_text(k.clock_edge, k.clock) << " " << triple_text(v, ts) << ")\n";
      os << "    )\n";
    }
    os << "  )\n";
  };

  auto top = db.cells.find("");
  if (top != db.cells.end()) {
    write_cell("", top->second, true);
  } else if (!db.interconnects.empty()) {
    CellAnnotation holder;
    holder.celltype = db.header.design.value_or("");
    write_cell("", holder, true);
  }
  for (const auto &[inst, ann] : db.cells)
    if (!inst.empty())
      write_cell(inst, ann, false);
  os << ")\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Resolution
// ---------------------------------------------------------------------------

ResolvedTiming ResolvedTiming::library_defaults(const Netlist &netlist) {
  ResolvedTiming r;
  r.instances.reserve(netlist.instances().size());
  for (const auto &inst : netlist.instances()) {
    InstanceTiming it;
    const CellSpec &cell = *inst.cell;
    for (const auto &arc : cell.arcs())
      it.iopath.emplace(arc, TimingValue{DelayTriple::uniform(cell.default_delay(arc)),
                                         TimingOrigin::Library});
    if (cell.has_timing_checks()) {
      for (std::size_t p : cell.data_inputs()) {
        const std::string &name = cell.port(p).name;
        it.setup.emplace(name, TimingValue{DelayTriple::uniform(cell.default_setup(name)),
                                           TimingOrigin::Library});
        it.hold.emplace(name, TimingValue{DelayTriple::uniform(cell.default_hold(name)),
                                          TimingOrigin::Library});
      }
    }
    r.instances.push_back(std::move(it));
  }
  return r;
}

SimTime ResolvedTiming::delay(InstanceId inst, const TimingArc &arc,
                              DelayCorner corner) const {
  const auto &paths = instances.at(inst).iopath;
  auto it = paths.find(arc);
  if (it == paths.end())
    throw Error("no timing arc " + arc.from + " -> " + arc.to);
  return it->second.at(corner);
}

SimTime ResolvedTiming::interconnect_delay(PortRef sink, DelayCorner corner) const {
  auto it = interconnect.find(sink);
  return it == interconnect.end() ? SimTime{} : it->second.at(corner);
}

namespace {

std::string edge_prefix(EdgeSpec e) {
  return e == EdgeSpec::Posedge ? "posedge " : e == EdgeSpec::Negedge ? "negedge " : "";
}

} // namespace

ResolveReport resolve_report(const AnnotationDb &db, const Netlist &netlist) {
  ResolveReport report;
  report.timing = ResolvedTiming::library_defaults(netlist);
  auto unresolved = [&](std::string msg) {
    report.unresolved.push_back({Diagnostic::Severity::Error, SourceSpan{}, std::move(msg)});
  };

  for (const auto &[path, ann] : db.cells) {
    const std::string where = path.empty() ? std::string("top-level cell")
                                            : "instance '" + path + "'";
    std::string problem;
    std::optional<InstanceId> id = netlist.find_instance(path);
    if (!id)
      problem = "unknown " + where;
    else if (netlist.instance(*id).cell->name() != ann.celltype)
      problem = where + " is a " + netlist.instance(*id).cell->name() +
                ", not a " + ann.celltype;
    if (!problem.empty()) {
      for (const auto &[k, v] : ann.iopaths)
        unresolved(problem + ": IOPATH " + edge_prefix(k.edge) + k.input + " " + k.output);
      for (const auto &[k, v] : ann.setups)
        unresolved(problem + ": SETUP " + k.data + " " + k.clock);
      for (const auto &[k, v] : ann.holds)
        unresolved(problem + ": HOLD " + k.data + " " + k.clock);
      continue;
    }

    const CellSpec &cell = *netlist.instance(*id).cell;
    InstanceTiming &timing = report.timing.instances[*id];

    std::set<TimingArc> applied_arcs;
    for (const auto &[k, v] : ann.iopaths) {
      const std::string label = where + ": IOPATH " + edge_prefix(k.edge) + k.input +
                                " " + k.output;
      TimingArc arc{k.input, k.output};
      if (k.edge == EdgeSpec::Negedge)
        unresolved(label + ": negedge arcs are not modeled (pulses trigger on the rising edge)");
      else if (!cell.has_arc(arc))
        unresolved(label + ": cell " + cell.name() + " has no such arc");
      else if (!applied_arcs.insert(arc).second)
        unresolved(label + ": duplicate annotation for the same arc");
      else
        timing.iopath[arc] = TimingValue{v, TimingOrigin::Sdf};
    }

    auto apply_checks = [&](const std::map<CheckKey, DelayTriple> &checks,
                            std::map<std::string, TimingValue, std::less<>> &dst,
                            const char *what) {
      std::set<std::string> applied;
      for (const auto &[k, v] : checks) {
        const std::string label = where + ": " + what + " " + edge_prefix(k.data_edge) +
                                  k.data + " " + edge_prefix(k.clock_edge) + k.clock;
        auto clk = cell.clock_port();
        if (!cell.has_timing_checks())
          unresolved(label + ": cell " + cell.name() + " has no timing checks");
        else if (!dst.count(k.data))
          unresolved(label + ": '" + k.data + "' is not a data input of " + cell.name());
        else if (!clk || cell.port(*clk).name != k.clock)
          unresolved(label + ": '" + k.clock + "' is not the clock of " + cell.name());
        else if (k.data_edge == EdgeSpec::Negedge || k.clock_edge == EdgeSpec::Negedge)
          unresolved(label + ": negedge checks are not modeled");
        else if (!applied.insert(k.data).second)
          unresolved(label + ": duplicate annotation for the same check");
        else
          dst[k.data] = TimingValue{v, TimingOrigin::Sdf};
      }
    };
    apply_checks(ann.setups, timing.setup, "SETUP");
    apply_checks(ann.holds, timing.hold, "HOLD");
  }

  for (const auto &[key, v] : db.interconnects) {
    const auto &[src, dst] = key;
    const std::string label = "INTERCONNECT " + src + " " + dst;
    auto dot = dst.rfind('.');
    if (dot == std::string::npos) {
      unresolved(label + ": sink '" + dst + "' is not a cell input");
      continue;
    }
    auto id = netlist.find_instance(dst.substr(0, dot));
    if (!id) {
      unresolved(label + ": unknown instance '" + dst.substr(0, dot) + "'");
      continue;
    }
    const Instance &inst = netlist.instance(*id);
    auto port = inst.cell->port_index(dst.substr(dot + 1));
    if (!port || !inst.cell->port(*port).is_input()) {
      unresolved(label + ": '" + dst + "' is not a cell input");
      continue;
    }
    const auto &net = inst.port_nets[*port];
    if (!net) {
      unresolved(label + ": '" + dst + "' is unconnected");
      continue;
    }
    const std::string driver = netlist.driver_name(*net);
    if (driver != src) {
      unresolved(label + ": '" + dst + "' is driven by '" + driver + "'");
      continue;
    }
    PortRef sink{*id, static_cast<std::uint32_t>(*port)};
    report.timing.interconnect[sink] = TimingValue{v, TimingOrigin::Sdf};
  }
  return report;
}

ResolvedTiming resolve(const AnnotationDb &db, const Netlist &netlist) {
  ResolveReport report = resolve_report(db, netlist);
  if (!report.unresolved.empty())
    throw ResolutionError(std::to_string(report.unresolved.size()) +
                              " SDF annotation(s) could not be applied",
                          std::move(report.unresolved));
  return std::move(report.timing);
}

AnnotationDb to_annotation_db(const Netlist &netlist, const ResolvedTiming &timing) {
  AnnotationDb db;
  db.header.sdf_version = "3.0";
  db.header.design = netlist.top();
  db.header.program = "sfqsim";
  db.header.timescale_fs = 1000;

  for (InstanceId id = 0; id < netlist.instances().size(); ++id) {
    const Instance &inst = netlist.instance(id);
    const CellSpec &cell = *inst.cell;
    const InstanceTiming &t = timing.instances.at(id);
    CellAnnotation ann;
    ann.celltype = cell.name();
    const auto clk = cell.clock_port();
    const std::string clk_name = clk ? cell.port(*clk).name : std::string();
    for (const auto &[arc, v] : t.iopath)
      ann.iopaths.emplace(IopathKey{arc.from, EdgeSpec::Any, arc.to}, v.value);
    for (const auto &[data, v] : t.setup)
      ann.setups.emplace(CheckKey{data, EdgeSpec::Any, clk_name, EdgeSpec::Posedge}, v.value);
    for (const auto &[data, v] : t.hold)
      ann.holds.emplace(CheckKey{data, EdgeSpec::Any, clk_name, EdgeSpec::Posedge}, v.value);
    db.cells.emplace(inst.path, std::move(ann));
  }
  for (const auto &[sink, v] : timing.interconnect) {
    const NetId net = *netlist.instance(sink.instance).port_nets[sink.port];
    db.interconnects.emplace(std::make_pair(netlist.driver_name(net),
                                            netlist.endpoint_name(sink)),
                             v.value);
  }
  return db;
}

} // namespace sfqsim
