#pragma once

// Behavioral semantics of the supported SFQ cell kinds.
//
// Every function here is a pure transition over an explicit state value. The
// simulation kernel owns the states, decides when each transition fires and
// turns the returned effects into scheduled edges. Output indices refer to
// positions in CellSpec::outputs().

#include "sfqsim/cell.hpp"
#include "sfqsim/time.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sfqsim {

/// A complete output pulse: rising edge at `rise`, falling edge at
/// `rise + width`.
struct PulseOut {
  std::size_t output = 0;
  SimTime rise;
  SimTime width;

  SimTime end() const { return rise + width; }
  bool operator==(const PulseOut &) const = default;
};

struct OutputInterval {
  SimTime rise;
  SimTime end;
  bool operator==(const OutputInterval &) const = default;
};

/// A pulse that would have overlapped one already launched on the same
/// output. It is merged into the earlier pulse, i.e. dropped.
struct Collision {
  std::size_t input = 0;
  SimTime rise;
  SimTime width;
  OutputInterval existing;

  SimTime overlap() const;
};

/// Remembers pulses launched on a single output that have not finished yet.
/// Touching pulses (one ends exactly where the next starts) do not overlap.
class PulseGuard {
public:
  /// Records [rise, rise + width) and returns nullopt, or returns the
  /// launched interval it would overlap without recording anything.
  /// Intervals that ended at or before `now` are forgotten.
  std::optional<OutputInterval> admit(SimTime rise, SimTime width, SimTime now);

  std::size_t live() const { return live_.size(); }

private:
  std::vector<OutputInterval> live_;
};

// ---------------------------------------------------------------------------
// Synchronous gates: `*_state` capture registers, one `*_val` output register.
// ---------------------------------------------------------------------------

struct SyncGateState {
  std::vector<std::uint8_t> in_state;
  bool out_val = false;

  static SyncGateState initial(std::size_t inputs);
};

/// Rising data edge on input `input`. Capture is idempotent.
void sync_on_input(SyncGateState &state, std::size_t input);

/// Pulse on an NDRO cell's reset port.
void sync_on_reset(SyncGateState &state);

/// Clock rising edge at `t`. Evaluates the logic function into out_val and
/// returns the output rise time when out_val is 1. DRO cells clear every
/// in_state bit; NDRO cells keep them.
std::optional<SimTime> sync_on_clock_rise(SyncGateState &state,
                                          const SyncGate &gate, SimTime t,
                                          SimTime clk_to_q);

/// Clock falling edge at `t`. Clears out_val and returns the output fall
/// time when a pulse was in flight, so the output is exactly as wide as the
/// clock pulse.
std::optional<SimTime> sync_on_clock_fall(SyncGateState &state, SimTime t,
                                          SimTime clk_to_q);

// ---------------------------------------------------------------------------
// Asynchronous gates with retention windows.
//
// Three transitions drive the state:
//   input pulse received  -> in_state = 1, decay_outbound += 1
//   output generated      -> in_state = 0   (coincidence mode, all inputs)
//   decay signal received -> decay_outbound -= 1 (precondition > 0); the
//                            input expires when the counter reaches 0
// ---------------------------------------------------------------------------

struct IncitingPulse {
  std::size_t input = 0;
  SimTime rise;
  SimTime width;
  bool operator==(const IncitingPulse &) const = default;
};

struct AsyncGateState {
  std::vector<std::uint8_t> in_state;
  std::vector<std::uint32_t> decay_outbound;
  std::optional<IncitingPulse> inciting;
  PulseGuard guard;

  static AsyncGateState initial(std::size_t inputs);
  /// A blocking window is open while any input still holds its pulse.
  bool window_active() const;
};

/// Per-input delays, indexed by data input position.
struct AsyncTiming {
  std::span<const SimTime> in_to_out;
  std::span<const SimTime> retention;
};

struct AsyncInputResult {
  /// Pulse arrived during an open blocking window and changed nothing.
  bool absorbed = false;
  /// When the pulse's decay signal reaches the retention pseudo-port.
  std::optional<SimTime> decay_at;
  std::optional<PulseOut> output;
  std::optional<Collision> collision;
};

AsyncInputResult async_on_input(AsyncGateState &state, const AsyncGate &gate,
                                const AsyncTiming &timing, std::size_t input,
                                SimTime t, SimTime width);

/// Launches the output for the recorded inciting pulse at time `t`. The
/// output is as wide as the inciting pulse. Coincidence gates consume every
/// input state; decay counters are left alone.
PulseOut async_emit(AsyncGateState &state, const AsyncGate &gate,
                    const AsyncTiming &timing, SimTime t);

enum class DecayOutcome { Expired, Extended, Underflow };

/// Decay arrival for `input`. Underflow means the counter was already zero;
/// the state is left untouched in that case.
DecayOutcome async_on_decay(AsyncGateState &state, std::size_t input);

// ---------------------------------------------------------------------------
// T1 cell: toggling flux store with asynchronous carry and clocked sum.
// Output 0 is sum, output 1 is carry.
// ---------------------------------------------------------------------------

struct T1State {
  bool flux = false;
  bool sum_val = false;
};

/// Input rising edge: toggles the stored flux. A 1->0 toggle emits carry.
std::optional<PulseOut> t1_on_input(T1State &state, SimTime t, SimTime width,
                                    SimTime in_to_carry);

/// Clock rising edge: sum rise time when flux was stored; flux is cleared.
std::optional<SimTime> t1_on_clock(T1State &state, SimTime t,
                                   SimTime clk_to_sum);

/// Clock falling edge: sum fall time when a sum pulse is in flight.
std::optional<SimTime> t1_on_clock_fall(T1State &state, SimTime t,
                                        SimTime clk_to_sum);

// ---------------------------------------------------------------------------
// Plumbing cells.
// ---------------------------------------------------------------------------

struct MergerState {
  PulseGuard guard;
};

struct MergeResult {
  std::optional<PulseOut> output;
  std::optional<Collision> collision;
};

MergeResult merger_on_input(MergerState &state, std::size_t input, SimTime t,
                            SimTime width, SimTime delay);

std::vector<PulseOut> splitter_on_input(SimTime t, SimTime width,
                                        std::span<const SimTime> branch_delays);

PulseOut buffer_on_input(SimTime t, SimTime width, SimTime delay);

} // namespace sfqsim
