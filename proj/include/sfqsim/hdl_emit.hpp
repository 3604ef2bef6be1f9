#pragma once

#include "sfqsim/cell.hpp"
#include "sfqsim/netlist.hpp"
#include "sfqsim/sdf.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sfqsim {

struct EmitOptions {
  /// Argument of the `timescale directive; empty omits it. Specify-block
  /// values are written in its first unit.
  std::string timescale = "1ps/1fs";
  bool include_specify = true;
  /// Library default delays as specparam values; zero placeholders otherwise.
  bool library_delays = true;
  /// Overrides a synchronous cell's readout mode.
  std::optional<Readout> readout;
  /// Prepended to the module name.
  std::string module_prefix;
};

/// Clocked template: input capture, clock-rise logic with DRO reset,
/// clock-fall clear plus continuous assignment, specify block.
std::string emit_sync_module(const CellSpec &spec, const EmitOptions &opts = {});

/// Retention-window template: capture with outbound decay counters, decay
/// pseudo-outputs, logic wire, inciting-pulse tracking, specify block.
std::string emit_async_module(const CellSpec &spec, const EmitOptions &opts = {});

/// Clocked sum plus input-triggered carry.
std::string emit_t1_module(const CellSpec &spec, const EmitOptions &opts = {});

/// Dispatches on the cell kind; also covers mergers, splitters and buffers.
std::string emit_module(const CellSpec &spec, const EmitOptions &opts = {});

/// Effective timing of a netlist as SDF text.
std::string emit_sdf_skeleton(const Netlist &netlist, const ResolvedTiming &timing);

/// Result of scanning emitted Verilog text.
struct ModuleStructure {
  std::string module;
  std::string template_kind; ///< from the `// template:` header line
  std::map<std::string, int> captures; ///< per `*_state` register
  std::map<std::string, int> resets;
  std::map<std::string, int> output_assigns; ///< per output port
  std::vector<std::string> problems;

  bool ok() const { return problems.empty(); }
};

/// Checks that every `_state` register has exactly one capture site and the
/// number of reset sites its template calls for, that every output port has
/// exactly one continuous assignment, and that numbered blocks appear in
/// order.
ModuleStructure check_module_structure(std::string_view verilog);

} // namespace sfqsim
