#include "sfqsim/hdl_emit.hpp"

#include <algorithm>
#include <regex>
#include <set>
#include <sstream>

namespace sfqsim {

namespace {

const std::set<std::string, std::less<>> kVerilogKeywords = {
    "always", "and",    "assign",   "begin",   "buf",     "case",    "default",
    "else",   "end",    "endcase",  "endmodule", "endspecify", "for", "if",
    "initial", "inout", "input",    "integer", "module",  "nand",    "negedge",
    "nor",    "not",    "or",       "output",  "posedge", "reg",     "specify",
    "specparam", "wire", "xnor",    "xor"};

void check_identifier(const std::string &name, const std::string &what) {
  static const std::regex ident("[A-Za-z_][A-Za-z0-9_$]*");
  if (!std::regex_match(name, ident) || kVerilogKeywords.count(name))
    throw Error(what + " '" + name + "' is not a valid Verilog identifier");
}

class Writer {
public:
  Writer(const CellSpec &spec, const EmitOptions &opts, std::string template_kind,
         std::string summary)
      : spec_(spec), opts_(opts), module_(opts.module_prefix + spec.name()) {
    check_identifier(module_, "module name");
    for (const auto &p : spec.ports())
      check_identifier(p.name, "port name");
    unit_fs_ = 1000;
    if (!opts.timescale.empty()) {
      const std::string unit = opts.timescale.substr(0, opts.timescale.find('/'));
      unit_fs_ = parse_time(unit).count();
      if (unit_fs_ <= 0)
        throw Error("bad timescale '" + opts.timescale + "'");
    }
    os_ << "// " << spec.name() << ": " << summary << "\n";
    os_ << "// template: " << template_kind << "\n";
    os_ << "// Simulate with transport path and interconnect delays (for example\n"
        << "// +transport_path_delays +transport_int_delays); inertial delays drop\n"
        << "// pulses narrower than the path delay.\n";
    if (!opts.timescale.empty())
      os_ << "`timescale " << opts.timescale << "\n";
  }

  std::ostringstream &out() { return os_; }
  const std::string &module() const { return module_; }

  std::string name(std::size_t port) const { return spec_.port(port).name; }

  std::vector<std::string> names(const std::vector<std::size_t> &ports) const {
    std::vector<std::string> out;
    for (auto p : ports)
      out.push_back(name(p));
    return out;
  }

  static std::string join(const std::vector<std::string> &v, const char *sep = ", ") {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i)
      out += (i ? sep : "") + v[i];
    return out;
  }

  std::string value(SimTime t) const {
    if (!opts_.library_delays)
      return "0";
    return format_decimal(t.count(), unit_fs_);
  }

  std::string delay(const std::string &from, const std::string &to) const {
    return value(spec_.default_delay(TimingArc{from, to}));
  }

  void header(const std::vector<std::string> &extra_outputs = {}) {
    std::vector<std::string> ports;
    for (const auto &p : spec_.ports())
      ports.push_back(p.name);
    for (const auto &e : extra_outputs)
      ports.push_back(e);
    os_ << "module " << module_ << " (" << join(ports) << ");\n";
    std::vector<std::string> ins, outs;
    for (const auto &p : spec_.ports())
      (p.is_input() ? ins : outs).push_back(p.name);
    os_ << "  input " << join(ins) << ";\n";
    os_ << "  output " << join(outs) << ";\n";
    if (!extra_outputs.empty())
      os_ << "  output " << join(extra_outputs) << "; // retention pseudo-outputs\n";
  }

  void specify(const std::vector<std::pair<std::string, std::string>> &paths,
               bool checks) {
    if (!opts_.include_specify)
      return;
    os_ << "\n  specify\n";
    for (const auto &[from, to] : paths)
      os_ << "    specparam t_" << from << "_" << to << " = " << delay(from, to) << ";\n";
    if (checks)
      for (std::size_t p : spec_.data_inputs()) {
        os_ << "    specparam tsetup_" << name(p) << " = "
            << value(spec_.default_setup(name(p))) << ";\n";
        os_ << "    specparam thold_" << name(p) << " = "
            << value(spec_.default_hold(name(p))) << ";\n";
      }
    for (const auto &[from, to] : paths)
      os_ << "    (" << from << " => " << to << ") = t_" << from << "_" << to << ";\n";
    if (checks) {
      const std::string clk = name(*spec_.clock_port());
      for (std::size_t p : spec_.data_inputs()) {
        os_ << "    $setup(" << name(p) << ", posedge " << clk << ", tsetup_" << name(p)
            << ");\n";
        os_ << "    $hold(posedge " << clk << ", " << name(p) << ", thold_" << name(p)
            << ");\n";
      }
    }
    os_ << "  endspecify\n";
  }

  std::string finish() {
    os_ << "endmodule\n";
    return os_.str();
  }

private:
  const CellSpec &spec_;
  const EmitOptions &opts_;
  std::string module_;
  std::int64_t unit_fs_ = 1000;
  std::ostringstream os_;
};

std::string logic_summary(const LogicFn &fn) {
  return fn.name().empty() ? std::string("truth-table logic") : fn.name() + " logic";
}

} // namespace

std::string emit_sync_module(const CellSpec &spec, const EmitOptions &opts) {
  const auto *g = spec.as<SyncGate>();
  if (!g)
    throw Error("cell '" + spec.name() + "' is not a synchronous gate");
  const Readout readout = opts.readout.value_or(g->readout);
  const bool dro = readout == Readout::Dro;
  const auto reset = spec.reset_port();
  const std::string kind = dro ? "sync-dro" : reset ? "sync-ndro-reset" : "sync-ndro";

  Writer w(spec, opts, kind,
           "clocked " + logic_summary(g->logic) + ", " +
               (dro ? "destructive" : "nondestructive") + " read-out");
  auto &os = w.out();
  const auto ins = w.names(spec.data_inputs());
  const std::string clk = w.name(*spec.clock_port());
  const std::string q = w.name(spec.outputs()[0]);
  w.header();

  os << "\n  // (1) input capture\n";
  for (const auto &in : ins)
    os << "  reg " << in << "_state = 1'b0;\n";
  os << "  reg " << q << "_val = 1'b0;\n";
  for (const auto &in : ins)
    os << "  always @(posedge " << in << ") " << in << "_state <= 1'b1;\n";
  if (!dro && reset) {
    os << "  always @(posedge " << w.name(*reset) << ") begin\n";
    for (const auto &in : ins)
      os << "    " << in << "_state <= 1'b0;\n";
    os << "  end\n";
  }

  std::vector<std::string> states;
  for (const auto &in : ins)
    states.push_back(in + "_state");
  os << "\n  // (2) clock-triggered logic\n";
  os << "  always @(posedge " << clk << ") begin\n";
  os << "    " << q << "_val <= " << g->logic.verilog_expr(states) << ";\n";
  if (dro)
    for (const auto &s : states)
      os << "    " << s << " <= 1'b0;\n";
  os << "  end\n";

  os << "\n  // (3) output pulse generation\n";
  os << "  always @(negedge " << clk << ") " << q << "_val <= 1'b0;\n";
  os << "  assign " << q << " = " << q << "_val;\n";

  if (opts.include_specify)
    os << "\n  // (4) timing\n";
  w.specify({{clk, q}}, true);
  return w.finish();
}

std::string emit_async_module(const CellSpec &spec, const EmitOptions &opts) {
  const auto *g = spec.as<AsyncGate>();
  if (!g)
    throw Error("cell '" + spec.name() + "' is not an asynchronous gate");
  const bool coincidence = g->mode == AsyncMode::Coincidence;
  const std::string kind = coincidence ? "async-coincidence" : "async-blocking";

  Writer w(spec, opts, kind,
           "retention-window " + logic_summary(g->logic) + ", " +
               (coincidence ? "coincidence" : "pulse-blocking") + " mode");
  auto &os = w.out();
  const auto ins = w.names(spec.data_inputs());
  const std::string q = w.name(spec.outputs()[0]);
  std::vector<std::string> decays, states;
  for (const auto &in : ins) {
    decays.push_back(CellSpec::decay_port(in));
    states.push_back(in + "_state");
  }
  w.header(decays);

  os << "\n  // (1) input capture\n";
  for (const auto &in : ins) {
    os << "  reg " << in << "_state = 1'b0;\n";
    os << "  reg " << in << "_pulse_decay_state = 1'b0;\n";
    os << "  reg " << in << "_pulse_decay_val = 1'b0;\n";
    os << "  integer " << in << "_decay_outbound = 0;\n";
  }
  os << "  reg " << q << "_val = 1'b0;\n";
  os << "  integer last_pulse = 0;\n";
  os << "  integer inciting_pulse = -1;\n";
  std::string window;
  for (std::size_t i = 0; i < states.size(); ++i)
    window += (i ? " | " : "") + states[i];
  for (std::size_t i = 0; i < ins.size(); ++i) {
    os << "  always @(posedge " << ins[i] << ") begin\n";
    if (!coincidence) {
      os << "    // pulses inside an open window are absorbed\n";
      os << "    if (!(" << window << ")) begin\n";
      os << "      " << ins[i] << "_state <= 1'b1;\n";
      os << "      " << ins[i] << "_pulse_decay_state <= 1'b1;\n";
      os << "      " << ins[i] << "_decay_outbound = " << ins[i] << "_decay_outbound + 1;\n";
      os << "      last_pulse = " << i << ";\n";
      os << "    end\n";
    } else {
      os << "    " << ins[i] << "_state <= 1'b1;\n";
      os << "    " << ins[i] << "_pulse_decay_state <= 1'b1;\n";
      os << "    " << ins[i] << "_decay_outbound = " << ins[i] << "_decay_outbound + 1;\n";
      os << "    last_pulse = " << i << ";\n";
    }
    os << "  end\n";
  }

  os << "\n  // (2) pulse retention: the decay signal crosses an annotatable arc\n";
  for (std::size_t i = 0; i < ins.size(); ++i) {
    const std::string &in = ins[i];
    os << "  always @(negedge " << in << ") " << in << "_pulse_decay_state <= 1'b0;\n";
    os << "  always @(" << in << "_pulse_decay_state) " << in << "_pulse_decay_val = "
       << in << "_pulse_decay_state;\n";
    os << "  assign " << decays[i] << " = " << in << "_pulse_decay_val;\n";
    os << "  always @(posedge " << decays[i] << ") begin\n";
    os << "    if (" << in << "_decay_outbound > 0) begin\n";
    os << "      " << in << "_decay_outbound = " << in << "_decay_outbound - 1;\n";
    os << "      if (" << in << "_decay_outbound == 0) " << in << "_state <= 1'b0;\n";
    os << "    end\n";
    os << "  end\n";
  }

  os << "\n  // (3) input-triggered logic\n";
  os << "  wire " << q << "_logic;\n";
  os << "  assign " << q << "_logic = " << g->logic.verilog_expr(states) << ";\n";
  os << "  always @(posedge " << q << "_logic) begin\n";
  os << "    inciting_pulse = last_pulse;\n";
  os << "    " << q << "_val <= 1'b1;\n";
  if (coincidence)
    for (const auto &s : states)
      os << "    " << s << " <= 1'b0;\n";
  os << "  end\n";

  os << "\n  // (4) output pulse generation: width follows the inciting pulse\n";
  for (std::size_t i = 0; i < ins.size(); ++i)
    os << "  always @(negedge " << ins[i] << ") if (inciting_pulse == " << i << ") "
       << q << "_val <= 1'b0;\n";
  os << "  assign " << q << " = " << q << "_val;\n";

  if (opts.include_specify)
    os << "\n  // (5) timing\n";
  std::vector<std::pair<std::string, std::string>> paths;
  for (const auto &in : ins)
    paths.push_back({in, q});
  for (std::size_t i = 0; i < ins.size(); ++i)
    paths.push_back({ins[i], decays[i]});
  w.specify(paths, false);
  return w.finish();
}

std::string emit_t1_module(const CellSpec &spec, const EmitOptions &opts) {
  if (!spec.as<T1Cell>())
    throw Error("cell '" + spec.name() + "' is not a T1 cell");
  Writer w(spec, opts, "t1", "toggle cell with clocked sum and input-triggered carry");
  auto &os = w.out();
  const std::string a = w.name(spec.data_inputs()[0]);
  const std::string clk = w.name(*spec.clock_port());
  const std::string sum = w.name(spec.outputs()[0]);
  const std::string carry = w.name(spec.outputs()[1]);
  w.header();

  os << "\n  // (1) input capture: each pulse toggles the stored flux\n";
  os << "  reg " << a << "_state = 1'b0;\n";
  os << "  reg " << sum << "_val = 1'b0;\n";
  os << "  reg " << carry << "_val = 1'b0;\n";
  os << "  always @(posedge " << a << ") begin\n";
  os << "    if (" << a << "_state) " << carry << "_val <= 1'b1;\n";
  os << "    " << a << "_state <= ~" << a << "_state;\n";
  os << "  end\n";

  os << "\n  // (2) clock-triggered sum\n";
  os << "  always @(posedge " << clk << ") begin\n";
  os << "    " << sum << "_val <= " << a << "_state;\n";
  os << "    " << a << "_state <= 1'b0;\n";
  os << "  end\n";

  os << "\n  // (3) output pulse generation\n";
  os << "  always @(negedge " << clk << ") " << sum << "_val <= 1'b0;\n";
  os << "  always @(negedge " << a << ") " << carry << "_val <= 1'b0;\n";
  os << "  assign " << sum << " = " << sum << "_val;\n";
  os << "  assign " << carry << " = " << carry << "_val;\n";

  if (opts.include_specify)
    os << "\n  // (4) timing\n";
  w.specify({{clk, sum}, {a, carry}}, true);
  return w.finish();
}

namespace {

std::string emit_merger(const CellSpec &spec, const EmitOptions &opts) {
  Writer w(spec, opts, "merger", "pulse merger");
  auto &os = w.out();
  const auto ins = w.names(spec.data_inputs());
  const std::string q = w.name(spec.outputs()[0]);
  w.header();
  os << "\n  // (1) pulse forwarding\n";
  os << "  reg " << q << "_val = 1'b0;\n";
  for (const auto &in : ins) {
    os << "  always @(posedge " << in << ") " << q << "_val <= 1'b1;\n";
    os << "  always @(negedge " << in << ") " << q << "_val <= 1'b0;\n";
  }
  os << "  assign " << q << " = " << q << "_val;\n";
  if (opts.include_specify)
    os << "\n  // (2) timing\n";
  std::vector<std::pair<std::string, std::string>> paths;
  for (const auto &in : ins)
    paths.push_back({in, q});
  w.specify(paths, false);
  return w.finish();
}

std::string emit_fanout(const CellSpec &spec, const EmitOptions &opts, const char *kind,
                        const char *summary) {
  Writer w(spec, opts, kind, summary);
  auto &os = w.out();
  const std::string a = w.name(spec.data_inputs()[0]);
  w.header();
  os << "\n  // (1) pulse forwarding\n";
  std::vector<std::pair<std::string, std::string>> paths;
  for (std::size_t o : spec.outputs()) {
    os << "  assign " << w.name(o) << " = " << a << ";\n";
    paths.push_back({a, w.name(o)});
  }
  if (opts.include_specify)
    os << "\n  // (2) timing\n";
  w.specify(paths, false);
  return w.finish();
}

} // namespace

std::string emit_module(const CellSpec &spec, const EmitOptions &opts) {
  if (spec.as<SyncGate>())
    return emit_sync_module(spec, opts);
  if (spec.as<AsyncGate>())
    return emit_async_module(spec, opts);
  if (spec.as<T1Cell>())
    return emit_t1_module(spec, opts);
  if (spec.as<Merger>())
    return emit_merger(spec, opts);
  if (spec.as<Splitter>())
    return emit_fanout(spec, opts, "splitter", "pulse splitter");
  return emit_fanout(spec, opts, "buffer", "pulse buffer");
}

std::string emit_sdf_skeleton(const Netlist &netlist, const ResolvedTiming &timing) {
  return write_sdf(to_annotation_db(netlist, timing));
}

// ---------------------------------------------------------------------------
// Structural scan
// ---------------------------------------------------------------------------

ModuleStructure check_module_structure(std::string_view verilog) {
  ModuleStructure s;
  const std::string text(verilog);

  std::smatch m;
  if (std::regex_search(text, m, std::regex(R"(\bmodule\s+([A-Za-z_][\w$]*))")))
    s.module = m[1];
  else
    s.problems.push_back("no module declaration");
  if (std::regex_search(text, m, std::regex(R"(//\s*template:\s*([\w-]+))")))
    s.template_kind = m[1];
  else
    s.problems.push_back("no template marker");

  std::vector<std::string> regs;
  const std::regex reg_decl(R"((?:^|\n)\s*reg\s+(?:\[[^\]]*\]\s*)?([A-Za-z_]\w*))");
  for (auto it = std::sregex_iterator(text.begin(), text.end(), reg_decl);
       it != std::sregex_iterator(); ++it)
    regs.push_back((*it)[1]);

  auto count = [&](const std::string &pattern) {
    const std::regex re(pattern);
    return static_cast<int>(std::distance(
        std::sregex_iterator(text.begin(), text.end(), re), std::sregex_iterator()));
  };

  const std::string &kind = s.template_kind;
  for (const auto &r : regs) {
    if (r.size() < 6 || r.compare(r.size() - 6, 6, "_state") != 0)
      continue;
    const int captures = count("\\b" + r + "\\s*<=\\s*(1'b1|~" + r + ")\\s*;");
    const int resets = count("\\b" + r + "\\s*<=\\s*1'b0\\s*;");
    s.captures[r] = captures;
    s.resets[r] = resets;
    if (captures != 1)
      s.problems.push_back(r + ": " + std::to_string(captures) +
                           " capture sites (expected 1)");
    int expected = -1;
    const bool decay = r.find("_pulse_decay_state") != std::string::npos;
    if (decay)
      expected = 1;
    else if (kind == "sync-dro" || kind == "sync-ndro-reset" || kind == "t1" ||
             kind == "async-blocking")
      expected = 1;
    else if (kind == "sync-ndro")
      expected = 0;
    else if (kind == "async-coincidence")
      expected = 2;
    if (expected < 0)
      s.problems.push_back(r + ": unexpected state register in a " + kind + " template");
    else if (resets != expected)
      s.problems.push_back(r + ": " + std::to_string(resets) + " reset sites (expected " +
                           std::to_string(expected) + ")");
  }

  const std::regex out_decl(R"((?:^|\n)\s*output\s+([^;]*);)");
  for (auto it = std::sregex_iterator(text.begin(), text.end(), out_decl);
       it != std::sregex_iterator(); ++it) {
    std::string list = (*it)[1];
    std::replace(list.begin(), list.end(), ',', ' ');
    std::istringstream is(list);
    std::string port;
    while (is >> port) {
      const int n = count("\\bassign\\s+" + port + "\\s*=");
      s.output_assigns[port] = n;
      if (n != 1)
        s.problems.push_back("output " + port + ": " + std::to_string(n) +
                             " continuous assignments (expected 1)");
    }
  }
  if (s.output_assigns.empty())
    s.problems.push_back("no output ports");

  int last = 0;
  const std::regex block(R"(//\s*\((\d+)\))");
  for (auto it = std::sregex_iterator(text.begin(), text.end(), block);
       it != std::sregex_iterator(); ++it) {
    const int n = std::stoi((*it)[1]);
    if (n != last + 1)
      s.problems.push_back("block (" + std::to_string(n) + ") out of order");
    last = n;
  }
  return s;
}

} // namespace sfqsim
