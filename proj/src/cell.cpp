#include "sfqsim/cell.hpp"

#include "sfqsim/diagnostics.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <fstream>
#include <set>
#include <sstream>

namespace sfqsim {

// ---------------------------------------------------------------------------
// LogicFn
// ---------------------------------------------------------------------------

LogicFn LogicFn::named(std::string_view name, std::size_t arity) {
  if (arity == 0 || arity > kMaxArity)
    throw Error("logic function arity must be 1.." +
                std::to_string(kMaxArity));

  LogicFn fn;
  fn.arity_ = arity;
  fn.name_ = std::string(name);
  const std::uint32_t rows = 1u << arity;
  const std::uint32_t all = rows - 1;

  for (std::uint32_t idx = 0; idx < rows; ++idx) {
    int ones = std::popcount(idx);
    bool v;
    if (name == "and")
      v = idx == all;
    else if (name == "or")
      v = idx != 0;
    else if (name == "xor")
      v = ones % 2 == 1;
    else if (name == "nand")
      v = idx != all;
    else if (name == "nor")
      v = idx == 0;
    else if (name == "xnor")
      v = ones % 2 == 0;
    else if ((name == "not" || name == "inv") && arity == 1)
      v = idx == 0;
    else if ((name == "buf" || name == "dff" || name == "identity") && arity == 1)
      v = idx == 1;
    else
      throw Error("unknown logic function '" + std::string(name) +
                  "' for arity " + std::to_string(arity));
    if (v)
      fn.truth_ |= std::uint64_t{1} << idx;
  }
  return fn;
}

LogicFn LogicFn::from_truth(std::string_view bits, std::size_t arity) {
  if (arity == 0 || arity > kMaxArity)
    throw Error("logic function arity must be 1.." +
                std::to_string(kMaxArity));
  if (bits.size() != (std::size_t{1} << arity))
    throw Error("truth table needs " + std::to_string(1u << arity) +
                " entries, got " + std::to_string(bits.size()));
  LogicFn fn;
  fn.arity_ = arity;
  fn.name_ = "truth:" + std::string(bits);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1')
      fn.truth_ |= std::uint64_t{1} << i;
    else if (bits[i] != '0')
      throw Error("truth table entries must be '0' or '1'");
  }
  return fn;
}

bool LogicFn::eval(std::span<const std::uint8_t> states) const {
  std::uint32_t idx = 0;
  for (std::size_t i = 0; i < arity_ && i < states.size(); ++i)
    if (states[i])
      idx |= 1u << i;
  return eval_index(idx);
}

bool LogicFn::is_any_input_sufficient() const {
  for (std::size_t i = 0; i < arity_; ++i)
    if (!eval_index(1u << i))
      return false;
  return !eval_index(0);
}

std::string LogicFn::verilog_expr(std::span<const std::string> ops) const {
  auto join = [&](const char *op) {
    std::string out;
    for (std::size_t i = 0; i < ops.size(); ++i) {
      if (i)
        out += std::string(" ") + op + " ";
      out += ops[i];
    }
    return out;
  };
  if (name_ == "and")
    return join("&");
  if (name_ == "or")
    return join("|");
  if (name_ == "xor")
    return join("^");
  if (name_ == "nand")
    return "~(" + join("&") + ")";
  if (name_ == "nor")
    return "~(" + join("|") + ")";
  if (name_ == "xnor")
    return "~(" + join("^") + ")";
  if (name_ == "not" || name_ == "inv")
    return "~" + ops[0];
  if (name_ == "buf" || name_ == "dff" || name_ == "identity")
    return ops[0];

  // Sum of products for explicit truth tables.
  std::vector<std::string> terms;
  for (std::uint32_t idx = 0; idx < (1u << arity_); ++idx) {
    if (!eval_index(idx))
      continue;
    std::string term;
    for (std::size_t i = 0; i < arity_; ++i) {
      if (i)
        term += " & ";
      term += (idx >> i & 1u) ? ops[i] : "~" + ops[i];
    }
    terms.push_back("(" + term + ")");
  }
  if (terms.empty())
    return "1'b0";
  std::string out;
  for (std::size_t i = 0; i < terms.size(); ++i)
    out += (i ? " | " : "") + terms[i];
  return out;
}

// ---------------------------------------------------------------------------
// CellSpec
// ---------------------------------------------------------------------------

std::string_view kind_name(const CellKind &kind) {
  struct Visitor {
    std::string_view operator()(const SyncGate &) const { return "sync"; }
    std::string_view operator()(const AsyncGate &) const { return "async"; }
    std::string_view operator()(const T1Cell &) const { return "t1"; }
    std::string_view operator()(const Merger &) const { return "merger"; }
    std::string_view operator()(const Splitter &) const { return "splitter"; }
    std::string_view operator()(const Buffer &) const { return "buffer"; }
  };
  return std::visit(Visitor{}, kind);
}

CellSpec CellSpec::make(std::string name, CellKind kind,
                        std::vector<std::string> inputs,
                        std::optional<std::string> clock,
                        std::optional<std::string> reset,
                        std::vector<std::string> outputs, Defaults defaults,
                        std::optional<std::int64_t> jj_count) {
  const std::string cell_name = name;
  auto fail = [&](const std::string &msg) -> void {
    throw Error("cell '" + cell_name + "': " + msg);
  };

  const bool clocked = std::holds_alternative<SyncGate>(kind) ||
                       std::holds_alternative<T1Cell>(kind);
  if (clocked && !clock)
    fail("clocked cell requires a clock port");
  if (!clocked && clock)
    fail("only synchronous and T1 cells take a clock port");
  if (reset) {
    auto *sync = std::get_if<SyncGate>(&kind);
    if (!sync || sync->readout != Readout::Ndro)
      fail("a reset port is only meaningful on NDRO synchronous cells");
  }

  if (auto *s = std::get_if<SyncGate>(&kind)) {
    if (s->logic.arity() != inputs.size())
      fail("logic arity does not match input count");
    if (outputs.size() != 1)
      fail("synchronous gates have exactly one output");
  } else if (auto *a = std::get_if<AsyncGate>(&kind)) {
    if (a->logic.arity() != inputs.size())
      fail("logic arity does not match input count");
    if (outputs.size() != 1)
      fail("asynchronous gates have exactly one output");
    if (a->mode == AsyncMode::Blocking && !a->logic.is_any_input_sufficient())
      fail("blocking mode requires a logic function asserted by any single "
           "input (e.g. or)");
  } else if (std::holds_alternative<T1Cell>(kind)) {
    if (inputs.size() != 1 || outputs.size() != 2)
      fail("T1 cells have one data input and outputs (sum, carry)");
  } else if (std::holds_alternative<Merger>(kind)) {
    if (inputs.size() < 2 || outputs.size() != 1)
      fail("mergers have at least two inputs and one output");
  } else if (auto *sp = std::get_if<Splitter>(&kind)) {
    if (inputs.size() != 1)
      fail("splitters have exactly one input");
    if (outputs.size() < 2)
      fail("splitter fanout must be at least 2");
    sp->fanout = outputs.size();
  } else if (std::holds_alternative<Buffer>(kind)) {
    if (inputs.size() != 1 || outputs.size() != 1)
      fail("buffers have one input and one output");
  }

  CellSpec spec;
  spec.name_ = std::move(name);
  spec.kind_ = std::move(kind);
  spec.jj_count_ = jj_count;

  std::set<std::string> seen;
  auto add_port = [&](const std::string &pname, PortRole role) {
    if (pname.empty())
      fail("empty port name");
    if (!seen.insert(pname).second)
      fail("duplicate port '" + pname + "'");
    spec.ports_.push_back(PortInfo{pname, role});
    return spec.ports_.size() - 1;
  };
  for (auto &in : inputs)
    spec.data_.push_back(add_port(in, PortRole::Data));
  if (clock)
    spec.clock_ = add_port(*clock, PortRole::Clock);
  if (reset)
    spec.reset_ = add_port(*reset, PortRole::Reset);
  for (auto &out : outputs)
    spec.outputs_.push_back(add_port(out, PortRole::Output));
  for (auto &in : inputs)
    if (seen.count(decay_port(in)))
      fail("port name '" + decay_port(in) + "' collides with a retention pseudo-port");

  // Arcs.
  const auto &P = spec.ports_;
  std::visit(
      [&](const auto &k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, SyncGate>) {
          spec.arcs_.push_back({P[*spec.clock_].name, P[spec.outputs_[0]].name});
        } else if constexpr (std::is_same_v<K, AsyncGate>) {
          for (auto i : spec.data_) {
            spec.arcs_.push_back({P[i].name, P[spec.outputs_[0]].name});
            spec.arcs_.push_back({P[i].name, decay_port(P[i].name)});
          }
        } else if constexpr (std::is_same_v<K, T1Cell>) {
          spec.arcs_.push_back({P[*spec.clock_].name, P[spec.outputs_[0]].name});
          spec.arcs_.push_back({P[spec.data_[0]].name, P[spec.outputs_[1]].name});
        } else if constexpr (std::is_same_v<K, Merger>) {
          for (auto i : spec.data_)
            spec.arcs_.push_back({P[i].name, P[spec.outputs_[0]].name});
        } else {
          for (auto o : spec.outputs_)
            spec.arcs_.push_back({P[spec.data_[0]].name, P[o].name});
        }
      },
      spec.kind_);

  for (const auto &[arc, delay] : defaults.iopath) {
    if (!spec.has_arc(arc))
      fail("default delay given for unknown arc " + arc.from + "->" + arc.to);
    if (delay < SimTime{})
      fail("negative default delay on " + arc.from + "->" + arc.to);
  }
  std::vector<std::string> missing;
  for (const auto &arc : spec.arcs_)
    if (!defaults.iopath.count(arc))
      missing.push_back(arc.from + "->" + arc.to);
  if (!missing.empty()) {
    std::string list;
    for (auto &m : missing)
      list += (list.empty() ? "" : ", ") + m;
    fail("missing default delay for arc(s): " + list);
  }

  auto check_limits = [&](const std::map<std::string, SimTime> &m,
                          const char *what) {
    for (const auto &[port, v] : m) {
      auto idx = spec.port_index(port);
      if (!idx || spec.ports_[*idx].role != PortRole::Data)
        fail(std::string(what) + " limit on non-data port '" + port + "'");
      if (!spec.has_timing_checks())
        fail(std::string(what) + " limits apply only to clocked cells");
      if (v < SimTime{})
        fail(std::string("negative ") + what + " limit");
    }
  };
  check_limits(defaults.setup, "setup");
  check_limits(defaults.hold, "hold");
  if (defaults.pulse_width && *defaults.pulse_width <= SimTime{})
    fail("pulse width must be positive");

  spec.defaults_ = std::move(defaults);
  return spec;
}

std::optional<std::size_t> CellSpec::port_index(std::string_view name) const {
  for (std::size_t i = 0; i < ports_.size(); ++i)
    if (ports_[i].name == name)
      return i;
  return std::nullopt;
}

bool CellSpec::has_arc(const TimingArc &arc) const {
  return std::find(arcs_.begin(), arcs_.end(), arc) != arcs_.end();
}

bool CellSpec::has_timing_checks() const {
  return std::holds_alternative<SyncGate>(kind_) ||
         std::holds_alternative<T1Cell>(kind_);
}

SimTime CellSpec::default_delay(const TimingArc &arc) const {
  auto it = defaults_.iopath.find(arc);
  if (it == defaults_.iopath.end())
    throw Error("cell '" + name_ + "' has no arc " + arc.from + "->" + arc.to);
  return it->second;
}

SimTime CellSpec::default_setup(std::string_view data_port) const {
  auto it = defaults_.setup.find(std::string(data_port));
  return it == defaults_.setup.end() ? SimTime{} : it->second;
}

SimTime CellSpec::default_hold(std::string_view data_port) const {
  auto it = defaults_.hold.find(std::string(data_port));
  return it == defaults_.hold.end() ? SimTime{} : it->second;
}

// ---------------------------------------------------------------------------
// CellLibrary
// ---------------------------------------------------------------------------

void CellLibrary::add(CellSpec spec) {
  if (index_.count(spec.name()))
    throw Error("duplicate cell '" + spec.name() + "' in library");
  index_.emplace(spec.name(), cells_.size());
  cells_.push_back(std::move(spec));
}

const CellSpec *CellLibrary::find(std::string_view name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &cells_[it->second];
}

namespace {

using nlohmann::json;

SourceSpan span_at_offset(std::string_view text, std::string_view file,
                          std::size_t offset) {
  SourceSpan span{std::string(file), 1, 1};
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++span.line;
      span.column = 1;
    } else {
      ++span.column;
    }
  }
  return span;
}

SimTime json_time(const json &v, const std::string &ctx) {
  if (v.is_number_integer())
    return SimTime::fs(v.get<std::int64_t>());
  if (v.is_string())
    return parse_time(v.get<std::string>(), "fs");
  throw Error(ctx + ": expected a time string such as \"5ps\"");
}

std::vector<std::string> json_names(const json &obj, const char *key,
                                    std::vector<std::string> fallback) {
  if (!obj.contains(key))
    return fallback;
  const auto &v = obj.at(key);
  if (v.is_string())
    return {v.get<std::string>()};
  return v.get<std::vector<std::string>>();
}

CellSpec cell_from_json(const json &c, std::size_t index) {
  const std::string ctx = "cells[" + std::to_string(index) + "]";
  if (!c.is_object())
    throw Error(ctx + ": expected an object");
  static const std::set<std::string> kKnown = {
      "name",  "kind",   "logic",   "truth",     "readout",     "mode",
      "inputs", "clock", "reset",   "outputs",   "fanout",      "delays",
      "retention", "setup", "hold", "pulse_width", "jj_count", "description"};
  for (auto it = c.begin(); it != c.end(); ++it)
    if (!kKnown.count(it.key()))
      throw Error(ctx + ": unknown field '" + it.key() + "'");

  if (!c.contains("name") || !c.contains("kind"))
    throw Error(ctx + ": 'name' and 'kind' are required");
  std::string name = c.at("name").get<std::string>();
  std::string kind_str = c.at("kind").get<std::string>();
  const std::string cctx = ctx + " (" + name + ")";

  auto logic_for = [&](std::size_t arity) {
    if (c.contains("truth"))
      return LogicFn::from_truth(c.at("truth").get<std::string>(), arity);
    if (!c.contains("logic"))
      throw Error(cctx + ": 'logic' or 'truth' is required");
    return LogicFn::named(c.at("logic").get<std::string>(), arity);
  };

  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::optional<std::string> clock;
  std::optional<std::string> reset;
  CellKind kind;

  if (kind_str == "sync") {
    inputs = json_names(c, "inputs", {});
    if (inputs.empty())
      throw Error(cctx + ": synchronous cells need 'inputs'");
    outputs = json_names(c, "outputs", {"q"});
    clock = c.value("clock", std::string("clk"));
    std::string readout = c.value("readout", std::string("dro"));
    if (readout != "dro" && readout != "ndro")
      throw Error(cctx + ": readout must be 'dro' or 'ndro'");
    kind = SyncGate{logic_for(inputs.size()),
                    readout == "dro" ? Readout::Dro : Readout::Ndro};
    if (c.contains("reset"))
      reset = c.at("reset").get<std::string>();
  } else if (kind_str == "async") {
    inputs = json_names(c, "inputs", {});
    if (inputs.empty())
      throw Error(cctx + ": asynchronous cells need 'inputs'");
    outputs = json_names(c, "outputs", {"q"});
    LogicFn logic = logic_for(inputs.size());
    AsyncMode mode = logic.is_any_input_sufficient() && inputs.size() > 1
                         ? AsyncMode::Blocking
                         : AsyncMode::Coincidence;
    if (c.contains("mode")) {
      std::string m = c.at("mode").get<std::string>();
      if (m == "coincidence")
        mode = AsyncMode::Coincidence;
      else if (m == "blocking")
        mode = AsyncMode::Blocking;
      else
        throw Error(cctx + ": mode must be 'coincidence' or 'blocking'");
    }
    kind = AsyncGate{mode, logic};
  } else if (kind_str == "t1") {
    inputs = json_names(c, "inputs", {"a"});
    outputs = json_names(c, "outputs", {"sum", "carry"});
    clock = c.value("clock", std::string("clk"));
    kind = T1Cell{};
  } else if (kind_str == "merger") {
    inputs = json_names(c, "inputs", {"a", "b"});
    outputs = json_names(c, "outputs", {"q"});
    kind = Merger{};
  } else if (kind_str == "splitter") {
    inputs = json_names(c, "inputs", {"a"});
    std::size_t fanout = c.value("fanout", std::size_t{2});
    std::vector<std::string> def;
    for (std::size_t i = 0; i < fanout; ++i)
      def.push_back("q" + std::to_string(i));
    outputs = json_names(c, "outputs", def);
    if (c.contains("fanout") && outputs.size() != fanout)
      throw Error(cctx + ": fanout does not match the number of outputs");
    kind = Splitter{outputs.size()};
  } else if (kind_str == "buffer") {
    inputs = json_names(c, "inputs", {"a"});
    outputs = json_names(c, "outputs", {"q"});
    kind = Buffer{};
  } else {
    throw Error(cctx + ": unknown kind '" + kind_str + "'");
  }

  CellSpec::Defaults d;
  if (c.contains("delays")) {
    for (auto it = c.at("delays").begin(); it != c.at("delays").end(); ++it) {
      const std::string &key = it.key();
      auto arrow = key.find("->");
      if (arrow == std::string::npos)
        throw Error(cctx + ": delay key '" + key + "' must look like 'from->to'");
      TimingArc arc{key.substr(0, arrow), key.substr(arrow + 2)};
      d.iopath[arc] = json_time(it.value(), cctx + " delay " + key);
    }
  }
  if (c.contains("retention")) {
    for (auto it = c.at("retention").begin(); it != c.at("retention").end(); ++it) {
      TimingArc arc{it.key(), CellSpec::decay_port(it.key())};
      if (d.iopath.count(arc))
        throw Error(cctx + ": retention for '" + it.key() + "' given twice");
      d.iopath[arc] = json_time(it.value(), cctx + " retention " + it.key());
    }
  }
  if (c.contains("setup"))
    for (auto it = c.at("setup").begin(); it != c.at("setup").end(); ++it)
      d.setup[it.key()] = json_time(it.value(), cctx + " setup");
  if (c.contains("hold"))
    for (auto it = c.at("hold").begin(); it != c.at("hold").end(); ++it)
      d.hold[it.key()] = json_time(it.value(), cctx + " hold");
  if (c.contains("pulse_width"))
    d.pulse_width = json_time(c.at("pulse_width"), cctx + " pulse_width");

  std::optional<std::int64_t> jj;
  if (c.contains("jj_count"))
    jj = c.at("jj_count").get<std::int64_t>();

  return CellSpec::make(std::move(name), std::move(kind), std::move(inputs),
                        std::move(clock), std::move(reset), std::move(outputs),
                        std::move(d), jj);
}

} // namespace

CellLibrary parse_library(std::string_view text, std::string_view file) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error &e) {
    std::size_t off = e.byte > 0 ? e.byte - 1 : 0;
    throw ParseError(span_at_offset(text, file, off),
                     std::string("malformed library JSON: ") + e.what());
  }

  SourceSpan span{std::string(file), 0, 0};
  if (!doc.is_object() || !doc.contains("cells") || !doc.at("cells").is_array())
    throw ParseError(span, "library must be an object with a 'cells' array");

  CellLibrary lib;
  const auto &cells = doc.at("cells");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    try {
      lib.add(cell_from_json(cells[i], i));
    } catch (const json::exception &e) {
      throw ParseError(span, "cells[" + std::to_string(i) + "]: " + e.what());
    } catch (const Error &e) {
      throw ParseError(span, e.what());
    }
  }
  return lib;
}

CellLibrary load_library(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot open library '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_library(ss.str(), path);
}

} // namespace sfqsim
