#pragma once

#include "sfqsim/time.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace sfqsim {

/// Boolean function over a cell's input state bits. Bit i of a state index
/// corresponds to input i.
class LogicFn {
public:
  static constexpr std::size_t kMaxArity = 6;

  /// and, or, xor, nand, nor, xnor (arity >= 1); not, buf/dff (arity 1).
  static LogicFn named(std::string_view name, std::size_t arity);
  /// Explicit truth table: character k of `bits` is the output for state
  /// index k, so `bits` has exactly 2^arity characters of '0'/'1'.
  static LogicFn from_truth(std::string_view bits, std::size_t arity);

  std::size_t arity() const { return arity_; }
  const std::string &name() const { return name_; }

  bool eval_index(std::uint32_t index) const { return (truth_ >> index) & 1u; }
  bool eval(std::span<const std::uint8_t> states) const;

  /// True when any single asserted input forces the output high, which is
  /// what a pulse-blocking (OR-style) asynchronous gate requires.
  bool is_any_input_sufficient() const;

  /// Verilog expression over the given operand names.
  std::string verilog_expr(std::span<const std::string> operands) const;

  bool operator==(const LogicFn &) const = default;

private:
  std::size_t arity_ = 0;
  std::uint64_t truth_ = 0;
  std::string name_;
};

enum class Readout { Dro, Ndro };
enum class AsyncMode { Coincidence, Blocking };

struct SyncGate {
  LogicFn logic;
  Readout readout = Readout::Dro;
};
struct AsyncGate {
  AsyncMode mode = AsyncMode::Coincidence;
  LogicFn logic;
};
struct T1Cell {};
struct Merger {};
struct Splitter {
  std::size_t fanout = 2;
};
struct Buffer {};

using CellKind = std::variant<SyncGate, AsyncGate, T1Cell, Merger, Splitter, Buffer>;

std::string_view kind_name(const CellKind &kind);

enum class PortRole { Data, Clock, Reset, Output };

struct PortInfo {
  std::string name;
  PortRole role = PortRole::Data;

  bool is_input() const { return role != PortRole::Output; }
};

/// A pin-to-pin timing arc. `to` may be a retention pseudo-port
/// (`<input>_decay`) on asynchronous gates.
struct TimingArc {
  std::string from;
  std::string to;

  auto operator<=>(const TimingArc &) const = default;
};

/// Behavioral description of one library cell with its default timing.
///
/// Port order is fixed: data inputs, then clock, then reset, then outputs.
/// Construct through `CellSpec::make`, which validates the port set against
/// the kind and requires a default delay for every timing arc.
class CellSpec {
public:
  struct Defaults {
    std::map<TimingArc, SimTime> iopath;
    std::map<std::string, SimTime> setup;
    std::map<std::string, SimTime> hold;
    std::optional<SimTime> pulse_width;
  };

  static CellSpec make(std::string name, CellKind kind,
                       std::vector<std::string> inputs,
                       std::optional<std::string> clock,
                       std::optional<std::string> reset,
                       std::vector<std::string> outputs, Defaults defaults,
                       std::optional<std::int64_t> jj_count = std::nullopt);

  const std::string &name() const { return name_; }
  const CellKind &kind() const { return kind_; }
  const std::vector<PortInfo> &ports() const { return ports_; }
  const PortInfo &port(std::size_t i) const { return ports_.at(i); }
  std::optional<std::size_t> port_index(std::string_view name) const;

  const std::vector<std::size_t> &data_inputs() const { return data_; }
  const std::vector<std::size_t> &outputs() const { return outputs_; }
  std::optional<std::size_t> clock_port() const { return clock_; }
  std::optional<std::size_t> reset_port() const { return reset_; }

  /// Every IOPATH arc the cell accepts, in a stable order.
  const std::vector<TimingArc> &arcs() const { return arcs_; }
  bool has_arc(const TimingArc &arc) const;
  /// True when the cell carries setup/hold checks on its data inputs.
  bool has_timing_checks() const;

  const Defaults &defaults() const { return defaults_; }
  SimTime default_delay(const TimingArc &arc) const;
  SimTime default_setup(std::string_view data_port) const;
  SimTime default_hold(std::string_view data_port) const;
  std::optional<std::int64_t> jj_count() const { return jj_count_; }

  template <typename T> const T *as() const { return std::get_if<T>(&kind_); }

  static std::string decay_port(std::string_view input) {
    return std::string(input) + "_decay";
  }

private:
  std::string name_;
  CellKind kind_;
  std::vector<PortInfo> ports_;
  std::vector<std::size_t> data_;
  std::vector<std::size_t> outputs_;
  std::optional<std::size_t> clock_;
  std::optional<std::size_t> reset_;
  std::vector<TimingArc> arcs_;
  Defaults defaults_;
  std::optional<std::int64_t> jj_count_;
};

class CellLibrary {
public:
  void add(CellSpec spec);
  const CellSpec *find(std::string_view name) const;
  const std::vector<CellSpec> &cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }

private:
  std::vector<CellSpec> cells_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

/// Parses a JSON cell library document. Throws ParseError.
CellLibrary parse_library(std::string_view text,
                          std::string_view file = "<library>");
CellLibrary load_library(const std::string &path);

} // namespace sfqsim
