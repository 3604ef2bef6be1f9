#pragma once

#include "sfqsim/cell_models.hpp"
#include "sfqsim/netlist.hpp"
#include "sfqsim/sdf.hpp"
#include "sfqsim/time.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sfqsim {

enum class ViolationKind { Setup, Hold, Collision, DecayUnderflow };

std::string_view violation_kind_name(ViolationKind kind);

/// One timing-check failure or pulse collision.
///
/// SETUP/HOLD: data port and arrival, clock port and rise, measured margin,
/// limit. COLLISION: the input whose pulse was dropped and the dropped
/// pulse's rise, the output port and the rise of the pulse it overlapped,
/// margin = overlap. DECAY_UNDERFLOW: decay arrival with no pending pulse.
struct ViolationRecord {
  ViolationKind kind = ViolationKind::Setup;
  std::string instance;
  std::string data_port;
  SimTime data_time;
  std::string ref_port;
  SimTime ref_time;
  SimTime margin;
  SimTime limit;

  /// `KIND inst port@t port@t margin=<fs> limit=<fs>`, times in fs.
  std::string str() const;
  bool operator==(const ViolationRecord &) const = default;
};

/// SETUP iff 0 <= clk - data < setup. HOLD iff 0 < data - clk < hold; a
/// data pulse coincident with the clock is handled by the setup check only.
std::optional<ViolationRecord> check_setup_hold(std::string_view instance,
                                                std::string_view data_port,
                                                SimTime data_rise,
                                                std::string_view clock_port,
                                                SimTime clk_rise, SimTime setup,
                                                SimTime hold);

struct NetEdge {
  SimTime time;
  bool rising = true;
  bool operator==(const NetEdge &) const = default;
};

struct Pulse {
  SimTime rise;
  SimTime width;
  bool operator==(const Pulse &) const = default;
};

struct SimulationTrace {
  std::vector<std::string> net_names;
  std::vector<std::vector<NetEdge>> edges; ///< per NetId, in dispatch order
  std::vector<ViolationRecord> violations; ///< in detection order
  SimTime end_time;
  std::uint64_t events = 0;

  /// Rising edges paired with the falling edge that follows each one. A
  /// pulse still high at end_time is omitted.
  std::vector<Pulse> pulses(NetId net) const;
  std::vector<Pulse> pulses(std::string_view net) const;

  bool operator==(const SimulationTrace &) const = default;
};

struct SimConfig {
  SimTime default_pulse_width = SimTime::ps(2);
  DelayCorner corner = DelayCorner::Typ;
  bool strict_fanout = false;
  SimTime stop_time = SimTime::max();
};

enum class EventKind : std::uint8_t { Decay = 0, Data = 1, Clock = 2 };

/// Reported to the observer after every cell-port event is handled.
struct DispatchInfo {
  SimTime time;
  EventKind kind = EventKind::Data;
  InstanceId instance = 0;
  std::size_t port = 0; ///< CellSpec port index; the input for decays
  bool rising = true;
};

/// Deterministic discrete-event simulator over a flattened netlist.
///
/// Events are ordered by (time, kind, target, edge, sequence) with decays
/// before data before clocks at equal time, net targets before cell ports,
/// and falling edges before rising ones on the same target.
/// Every delay is a transport delay.
class Simulator {
public:
  using Observer = std::function<void(const DispatchInfo &)>;

  explicit Simulator(Netlist netlist, SimConfig config = {});
  /// Throws ResolutionError when any annotation does not apply.
  Simulator(Netlist netlist, const AnnotationDb &sdf, SimConfig config = {});
  Simulator(Netlist netlist, ResolvedTiming timing, SimConfig config = {});
  ~Simulator();
  Simulator(Simulator &&) noexcept;
  Simulator &operator=(Simulator &&) noexcept;

  /// Drives a primary input with one pulse. Width defaults to
  /// SimConfig::default_pulse_width. Throws Error on an unknown or
  /// non-input net, non-positive width, a rise already simulated, or overlap
  /// with the previous pulse injected on the same net.
  void inject_pulse(NetId net, SimTime rise, std::optional<SimTime> width = std::nullopt);
  void inject_pulse(std::string_view net, SimTime rise,
                    std::optional<SimTime> width = std::nullopt);

  /// Processes every event with time <= min(t, stop_time).
  const SimulationTrace &run_until(SimTime t);
  /// Runs until the queue drains or stop_time is reached.
  const SimulationTrace &run();

  SimTime now() const;
  const SimulationTrace &trace() const;
  const Netlist &netlist() const;
  const ResolvedTiming &timing() const;
  const SimConfig &config() const;

  /// Internal state of an instance, or nullptr for another cell kind.
  const SyncGateState *sync_state(InstanceId id) const;
  const AsyncGateState *async_state(InstanceId id) const;
  const T1State *t1_state(InstanceId id) const;

  void set_observer(Observer observer);

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

} // namespace sfqsim
