#pragma once

#include "sfqsim/simulator.hpp"
#include "sfqsim/time.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sfqsim {

// --- stimulus ----------------------------------------------------------------

struct StimulusPulse {
  std::string net;
  SimTime rise;
  std::optional<SimTime> width; ///< default pulse width when absent
  int line = 0;
};

struct StimulusClock {
  std::string net;
  SimTime period;
  SimTime width;
  SimTime start;
  std::optional<std::int64_t> count; ///< unbounded when absent
  int line = 0;
};

struct Stimulus {
  std::vector<StimulusPulse> pulses;
  std::vector<StimulusClock> clocks;

  /// Every pulse with rise <= stop, clocks expanded, sorted by (net, rise).
  /// Throws Error for an unbounded clock when stop is SimTime::max().
  std::vector<StimulusPulse> expand(SimTime stop) const;
};

/// Line format:
///   pulse <net> <time> [width]
///   clock <net> <period> <width> [start] [count]
/// `#` starts a comment. Times take fs/ps/ns suffixes; bare numbers are fs.
/// Pulse times on one net must not decrease. Throws ParseError.
Stimulus parse_stimulus(std::string_view text, std::string_view file = "<stimulus>");
Stimulus load_stimulus(const std::string &path);

/// Injects the expanded stimulus. Throws Error when a pulse is rejected.
void apply_stimulus(Simulator &sim, const Stimulus &stimulus, SimTime stop);

// --- VCD ---------------------------------------------------------------------

/// VCD with `$timescale 1fs`, no date, one `$var wire 1` per selected net in
/// the given order, initial `$dumpvars` of zeros, then the edges.
std::string write_vcd(const SimulationTrace &trace, const std::vector<NetId> &nets,
                      std::string_view scope = "top");

struct VcdSignal {
  std::string name;
  std::vector<NetEdge> edges; ///< value changes after $dumpvars
};

struct VcdData {
  std::int64_t timescale_fs = 1;
  std::vector<VcdSignal> signals;
};

/// Reads the scalar-wire VCD subset written by write_vcd. Throws ParseError.
VcdData read_vcd(std::string_view text);

// --- sample-and-hold view ----------------------------------------------------

struct BusGroup {
  std::string label;
  std::vector<std::string> nets; ///< msb first
};

struct HeldTable {
  std::string clock;
  std::vector<SimTime> cycle_start;
  std::vector<BusGroup> groups;
  /// values[cycle][group]: bit i of the word is nets[size-1-i].
  std::vector<std::vector<std::uint64_t>> values;
};

/// Cycle k spans [rise k, rise k+1) of the clock net; the last cycle ends at
/// trace.end_time. A net holds 1 for a cycle when a pulse rose inside it.
/// Throws Error when the clock has no pulses or a net is unknown.
HeldTable sample_and_hold(const SimulationTrace &trace, std::string_view clock,
                          const std::vector<BusGroup> &groups);

/// One row per cycle: `cycle start_fs label=bits/decimal ...`.
std::string format_held_table(const HeldTable &table);

// --- violations --------------------------------------------------------------

/// Records sorted by (later of the two times, instance), one line each.
std::vector<ViolationRecord> sorted_violations(std::vector<ViolationRecord> records);
std::string write_violations(const std::vector<ViolationRecord> &records);

} // namespace sfqsim
