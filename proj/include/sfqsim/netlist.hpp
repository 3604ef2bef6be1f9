#pragma once

#include "sfqsim/cell.hpp"
#include "sfqsim/diagnostics.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sfqsim {

// ---------------------------------------------------------------------------
// Parsed (unflattened) structural Verilog.
// ---------------------------------------------------------------------------

struct BitRange {
  int msb = 0;
  int lsb = 0;

  std::size_t width() const {
    return static_cast<std::size_t>(msb >= lsb ? msb - lsb : lsb - msb) + 1;
  }
  bool operator==(const BitRange &) const = default;
};

/// `name`, `name[i]` or `name[msb:lsb]` on the right of a port connection.
struct NetRef {
  std::string name;
  std::optional<BitRange> select;
  bool single_bit = false; ///< true for `name[i]`
  SourceSpan span;
};

struct PortConnection {
  std::string port;
  std::optional<NetRef> net; ///< empty for `.port()`
  SourceSpan span;
};

struct InstanceDecl {
  std::string type;
  std::string name;
  std::vector<PortConnection> connections;
  SourceSpan span;
};

enum class DeclKind { Input, Output, Wire };

struct NetDecl {
  DeclKind kind = DeclKind::Wire;
  std::string name;
  std::optional<BitRange> range;
  SourceSpan span;
};

struct ModuleDecl {
  std::string name;
  std::vector<std::string> port_order;
  std::vector<NetDecl> decls;
  std::vector<InstanceDecl> instances;
  SourceSpan span;

  const NetDecl *find_decl(std::string_view net) const;
};

struct ParsedNetlist {
  std::vector<ModuleDecl> modules;

  const ModuleDecl *find(std::string_view name) const;
};

/// Parses the structural subset: module/endmodule, input/output/wire
/// declarations with optional [msb:lsb] ranges, and instances with named
/// port connections. Behavioral constructs are rejected. Throws ParseError.
ParsedNetlist parse_netlist(std::string_view text,
                            std::string_view file = "<netlist>");

/// Canonical text form; parse(print(x)) yields the same structure.
std::string print_netlist(const ParsedNetlist &netlist);

/// The single module no other module instantiates.
std::string find_top(const ParsedNetlist &netlist);

// ---------------------------------------------------------------------------
// Flattened netlist.
// ---------------------------------------------------------------------------

using NetId = std::uint32_t;
using InstanceId = std::uint32_t;

struct PortRef {
  InstanceId instance = 0;
  std::uint32_t port = 0; ///< index into CellSpec::ports()

  auto operator<=>(const PortRef &) const = default;
};

struct Net {
  std::string name;
  std::optional<PortRef> driver; ///< cell output driving the net
  bool primary_input = false;
  bool primary_output = false;
  std::vector<PortRef> sinks;
};

struct Instance {
  std::string path; ///< hierarchical, `.`-separated, relative to top
  const CellSpec *cell = nullptr;
  std::vector<std::optional<NetId>> port_nets; ///< per CellSpec port
  SourceSpan span;
};

struct ElaborateOptions {
  /// Reject nets with more than one sink unless driven by a splitter.
  bool strict_fanout = false;
};

/// A validated, flattened instance graph. Every net has exactly one driver
/// (a primary input or a cell output) and every required input is connected.
class Netlist {
public:
  const std::string &top() const { return top_; }
  const std::vector<Instance> &instances() const { return instances_; }
  const std::vector<Net> &nets() const { return nets_; }
  const Instance &instance(InstanceId id) const { return instances_.at(id); }
  const Net &net(NetId id) const { return nets_.at(id); }
  const CellLibrary &library() const { return *library_; }
  const std::vector<Diagnostic> &warnings() const { return warnings_; }

  std::optional<NetId> find_net(std::string_view name) const;
  std::optional<InstanceId> find_instance(std::string_view path) const;

  /// Top-level port bits in declaration order (bus bits msb first).
  const std::vector<NetId> &primary_inputs() const { return inputs_; }
  const std::vector<NetId> &primary_outputs() const { return outputs_; }
  /// Bit names of a declared top-level bus (msb first), or {name} for a
  /// scalar. Empty when `name` is not a top-level net.
  std::vector<std::string> top_bus_bits(std::string_view name) const;

  /// "path.port" for a cell port.
  std::string endpoint_name(PortRef ref) const;
  /// "path.port" of the driver, or the net name for primary inputs.
  std::string driver_name(NetId net) const;

private:
  friend Netlist elaborate(const ParsedNetlist &,
                           std::shared_ptr<const CellLibrary>,
                           std::string_view, const ElaborateOptions &);

  std::string top_;
  std::shared_ptr<const CellLibrary> library_;
  std::vector<Instance> instances_;
  std::vector<Net> nets_;
  std::vector<NetId> inputs_;
  std::vector<NetId> outputs_;
  std::map<std::string, std::vector<std::string>, std::less<>> top_buses_;
  std::map<std::string, NetId, std::less<>> net_index_;
  std::map<std::string, InstanceId, std::less<>> instance_index_;
  std::vector<Diagnostic> warnings_;
};

/// Flattens `top`, expanding buses into scalar nets `p[3]`..`p[0]` and
/// joining instance names with `.`. Throws DiagnosticError listing every
/// problem found (unknown cell types, unconnected inputs, width mismatches,
/// multiple drivers, recursion, and fanout violations in strict mode).
Netlist elaborate(const ParsedNetlist &parsed,
                  std::shared_ptr<const CellLibrary> library,
                  std::string_view top, const ElaborateOptions &options = {});

} // namespace sfqsim
