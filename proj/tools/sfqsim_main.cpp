// sfqsim command-line driver. Exit status: 0 clean, 1 violations, 2 input error.

#include "sfqsim/cell.hpp"
#include "sfqsim/hdl_emit.hpp"
#include "sfqsim/netlist.hpp"
#include "sfqsim/sdf.hpp"
#include "sfqsim/simulator.hpp"
#include "sfqsim/wave.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

using namespace sfqsim;

namespace {

constexpr int kClean = 0;
constexpr int kViolations = 1;
constexpr int kInputError = 2;

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error("cannot write '" + path + "'");
  out << text;
}

void print_warnings(const std::vector<Diagnostic> &warnings) {
  for (const auto &w : warnings)
    std::cerr << w.str() << "\n";
}

struct Design {
  std::shared_ptr<const CellLibrary> library;
  ParsedNetlist parsed;
  std::unique_ptr<Netlist> netlist;
};

Design load_design(const std::string &lib_path, const std::string &netlist_path,
                   std::string top, bool strict_fanout) {
  Design d;
  d.library = std::make_shared<const CellLibrary>(load_library(lib_path));
  d.parsed = parse_netlist(read_file(netlist_path), netlist_path);
  if (top.empty())
    top = find_top(d.parsed);
  ElaborateOptions opts;
  opts.strict_fanout = strict_fanout;
  d.netlist = std::make_unique<Netlist>(elaborate(d.parsed, d.library, top, opts));
  return d;
}

struct SimulateArgs {
  std::string netlist, lib, sdf, stim, until, corner = "typ", vcd, report, hold_view,
      hold_out, top;
  bool strict_fanout = false;
  bool vcd_all = false;
};

std::vector<BusGroup> parse_hold_view(const std::string &spec, const Netlist &netlist,
                                      std::string &clock) {
  auto colon = spec.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == spec.size())
    throw Error("--hold-view expects <clock>:<bus,...>");
  clock = spec.substr(0, colon);
  std::vector<BusGroup> groups;
  std::stringstream ss(spec.substr(colon + 1));
  std::string name;
  while (std::getline(ss, name, ',')) {
    if (name.empty())
      continue;
    auto bits = netlist.top_bus_bits(name);
    if (bits.empty())
      throw Error("--hold-view: '" + name + "' is not a top-level net or bus");
    groups.push_back({name, bits});
  }
  if (groups.empty())
    throw Error("--hold-view names no buses");
  return groups;
}

int cmd_simulate(const SimulateArgs &a) {
  Design d = load_design(a.lib, a.netlist, a.top, a.strict_fanout);
  print_warnings(d.netlist->warnings());

  SimConfig config;
  auto corner = parse_corner(a.corner);
  if (!corner)
    throw Error("--corner must be min, typ or max");
  config.corner = *corner;
  config.strict_fanout = a.strict_fanout;
  SimTime stop = SimTime::max();
  if (!a.until.empty())
    stop = parse_time(a.until);
  config.stop_time = stop;

  ResolvedTiming timing = ResolvedTiming::library_defaults(*d.netlist);
  if (!a.sdf.empty()) {
    AnnotationDb db = load_sdf(a.sdf);
    print_warnings(db.warnings);
    timing = resolve(db, *d.netlist);
  }
  Stimulus stimulus = load_stimulus(a.stim);

  std::string clock;
  std::vector<BusGroup> groups;
  if (!a.hold_view.empty())
    groups = parse_hold_view(a.hold_view, *d.netlist, clock);

  Simulator sim(*d.netlist, std::move(timing), config);
  apply_stimulus(sim, stimulus, stop);
  const SimulationTrace &trace = stop == SimTime::max() ? sim.run() : sim.run_until(stop);

  if (!a.vcd.empty()) {
    std::vector<NetId> nets;
    if (a.vcd_all) {
      for (NetId i = 0; i < d.netlist->nets().size(); ++i)
        nets.push_back(i);
    } else {
      nets = d.netlist->primary_inputs();
      nets.insert(nets.end(), d.netlist->primary_outputs().begin(),
                  d.netlist->primary_outputs().end());
    }
    write_file(a.vcd, write_vcd(trace, nets, d.netlist->top()));
  }

  const std::string report = write_violations(trace.violations);
  if (!a.report.empty())
    write_file(a.report, report);
  else
    std::cout << report;

  if (!groups.empty()) {
    const std::string table = format_held_table(sample_and_hold(trace, clock, groups));
    if (!a.hold_out.empty())
      write_file(a.hold_out, table);
    else
      std::cout << table;
  }

  std::cout << "instances=" << d.netlist->instances().size() << " events=" << trace.events
            << " violations=" << trace.violations.size() << "\n";
  return trace.violations.empty() ? kClean : kViolations;
}

struct EmitArgs {
  std::string lib, out = ".", netlist, sdf, top, timescale = "1ps/1fs";
  std::vector<std::string> cells;
  bool all = false;
  bool no_specify = false;
};

int cmd_emit(const EmitArgs &a) {
  CellLibrary lib = load_library(a.lib);
  std::vector<const CellSpec *> chosen;
  if (a.all) {
    for (const auto &c : lib.cells())
      chosen.push_back(&c);
  } else {
    for (const auto &name : a.cells) {
      const CellSpec *c = lib.find(name);
      if (!c)
        throw Error("unknown cell '" + name + "'");
      chosen.push_back(c);
    }
  }
  if (chosen.empty() && a.netlist.empty())
    throw Error("nothing to emit: name cells, pass --all, or give --netlist");

  std::filesystem::create_directories(a.out);
  EmitOptions opts;
  opts.timescale = a.timescale;
  opts.include_specify = !a.no_specify;
  for (const CellSpec *c : chosen) {
    const std::string path = (std::filesystem::path(a.out) / (c->name() + ".v")).string();
    write_file(path, emit_module(*c, opts));
    std::cout << "wrote " << path << "\n";
  }

  if (!a.netlist.empty()) {
    auto shared = std::make_shared<const CellLibrary>(std::move(lib));
    ParsedNetlist parsed = parse_netlist(read_file(a.netlist), a.netlist);
    const std::string top = a.top.empty() ? find_top(parsed) : a.top;
    Netlist netlist = elaborate(parsed, shared, top);
    ResolvedTiming timing = a.sdf.empty() ? ResolvedTiming::library_defaults(netlist)
                                          : resolve(load_sdf(a.sdf), netlist);
    const std::string path = (std::filesystem::path(a.out) / (top + ".sdf")).string();
    write_file(path, emit_sdf_skeleton(netlist, timing));
    std::cout << "wrote " << path << "\n";
  }
  return kClean;
}

struct CheckArgs {
  std::string netlist, lib, sdf, top;
  bool strict_fanout = false;
};

int cmd_check(const CheckArgs &a) {
  Design d = load_design(a.lib, a.netlist, a.top, a.strict_fanout);
  for (const auto &w : d.netlist->warnings())
    std::cout << w.str() << "\n";
  std::size_t unresolved = 0;
  if (!a.sdf.empty()) {
    AnnotationDb db = load_sdf(a.sdf);
    for (const auto &w : db.warnings)
      std::cout << w.str() << "\n";
    ResolveReport report = resolve_report(db, *d.netlist);
    for (const auto &u : report.unresolved)
      std::cout << "unresolved: " << u.message << "\n";
    unresolved = report.unresolved.size();
  }
  std::cout << unresolved << " unresolved\n";

  std::int64_t jj = 0;
  std::size_t missing = 0;
  for (const auto &inst : d.netlist->instances()) {
    if (auto n = inst.cell->jj_count())
      jj += *n;
    else
      ++missing;
  }
  std::cout << "instances=" << d.netlist->instances().size()
            << " nets=" << d.netlist->nets().size() << "\n";
  if (missing == 0)
    std::cout << "jj_total=" << jj << "\n";
  else
    std::cout << "jj_total unavailable (" << missing << " instances without jj_count)\n";
  return unresolved == 0 ? kClean : kInputError;
}

int cmd_print(const std::string &netlist) {
  std::cout << print_netlist(parse_netlist(read_file(netlist), netlist));
  return kClean;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Discrete-event gate-level simulator for SFQ logic"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto *s = app.add_subcommand("simulate", "run a stimulus through a netlist");
  s->add_option("--netlist", sim.netlist, "structural Verilog netlist")->required();
  s->add_option("--lib", sim.lib, "cell library (JSON)")->required();
  s->add_option("--sdf", sim.sdf, "SDF back-annotation");
  s->add_option("--stim", sim.stim, "stimulus file")->required();
  s->add_option("--until", sim.until, "stop time, e.g. 2ns");
  s->add_option("--corner", sim.corner, "delay corner: min, typ or max");
  s->add_flag("--strict-fanout", sim.strict_fanout, "reject fanout without splitters");
  s->add_option("--vcd", sim.vcd, "write a VCD of the top-level ports");
  s->add_flag("--vcd-all", sim.vcd_all, "include every net in the VCD");
  s->add_option("--report", sim.report, "write the violation report here");
  s->add_option("--hold-view", sim.hold_view, "sample-and-hold view <clock>:<bus,...>");
  s->add_option("--hold-out", sim.hold_out, "write the held-value table here");
  s->add_option("--top", sim.top, "top module (default: the uninstantiated one)");

  EmitArgs emit;
  auto *e = app.add_subcommand("emit", "generate Verilog cell models and SDF skeletons");
  e->add_option("--lib", emit.lib, "cell library (JSON)")->required();
  e->add_option("--out", emit.out, "output directory");
  e->add_flag("--all", emit.all, "emit every library cell");
  e->add_option("cells", emit.cells, "cells to emit");
  e->add_option("--netlist", emit.netlist, "also write an SDF skeleton for this netlist");
  e->add_option("--sdf", emit.sdf, "annotations to fold into the skeleton");
  e->add_option("--top", emit.top, "top module");
  e->add_option("--timescale", emit.timescale, "timescale directive");
  e->add_flag("--no-specify", emit.no_specify, "omit specify blocks");

  CheckArgs check;
  auto *c = app.add_subcommand("check", "parse, elaborate and resolve without simulating");
  c->add_option("--netlist", check.netlist, "structural Verilog netlist")->required();
  c->add_option("--lib", check.lib, "cell library (JSON)")->required();
  c->add_option("--sdf", check.sdf, "SDF back-annotation");
  c->add_option("--top", check.top, "top module");
  c->add_flag("--strict-fanout", check.strict_fanout, "reject fanout without splitters");

  std::string print_path;
  auto *p = app.add_subcommand("print", "print a netlist in canonical form");
  p->add_option("netlist", print_path, "structural Verilog netlist")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &err) {
    const int rc = app.exit(err);
    return rc == 0 ? kClean : kInputError;
  }

  try {
    if (*s)
      return cmd_simulate(sim);
    if (*e)
      return cmd_emit(emit);
    if (*c)
      return cmd_check(check);
    return cmd_print(print_path);
  } catch (const DiagnosticError &err) {
    std::cerr << "error: " << err.what() << "\n";
    for (const auto &diag : err.diagnostics())
      std::cerr << "  " << diag.str() << "\n";
  } catch (const ParseError &err) {
    std::cerr << "error: " << err.what() << "\n";
  } catch (const std::exception &err) {
    std::cerr << "error: " << err.what() << "\n";
  }
  return kInputError;
}
