#include "sfqsim/simulator.hpp"

#include <algorithm>
#include <queue>
#include <tuple>
#include <variant>

namespace sfqsim {

std::string_view violation_kind_name(ViolationKind kind) {
  switch (kind) {
  case ViolationKind::Setup:
    return "SETUP";
  case ViolationKind::Hold:
    return "HOLD";
  case ViolationKind::Collision:
    return "COLLISION";
  case ViolationKind::DecayUnderflow:
    return "DECAY_UNDERFLOW";
  }
  return "?";
}

std::string ViolationRecord::str() const {
  return std::string(violation_kind_name(kind)) + " " + instance + " " + data_port +
         "@" + std::to_string(data_time.count()) + " " + ref_port + "@" +
         std::to_string(ref_time.count()) + " margin=" + std::to_string(margin.count()) +
         " limit=" + std::to_string(limit.count());
}

std::optional<ViolationRecord> check_setup_hold(std::string_view instance,
                                                std::string_view data_port,
                                                SimTime data_rise,
                                                std::string_view clock_port,
                                                SimTime clk_rise, SimTime setup,
                                                SimTime hold) {
  auto record = [&](ViolationKind kind, SimTime margin, SimTime limit) {
    return ViolationRecord{kind,     std::string(instance), std::string(data_port),
                           data_rise, std::string(clock_port), clk_rise,
                           margin,   limit};
  };
  const SimTime before = clk_rise - data_rise;
  if (before >= SimTime{} && before < setup)
    return record(ViolationKind::Setup, before, setup);
  const SimTime after = data_rise - clk_rise;
  if (after > SimTime{} && after < hold)
    return record(ViolationKind::Hold, after, hold);
  return std::nullopt;
}

std::vector<Pulse> SimulationTrace::pulses(NetId net) const {
  std::vector<Pulse> out;
  std::optional<SimTime> rise;
  for (const auto &e : edges.at(net)) {
    if (e.rising) {
      rise = e.time;
    } else if (rise) {
      out.push_back({*rise, e.time - *rise});
      rise.reset();
    }
  }
  return out;
}

std::vector<Pulse> SimulationTrace::pulses(std::string_view net) const {
  for (std::size_t i = 0; i < net_names.size(); ++i)
    if (net_names[i] == net)
      return pulses(static_cast<NetId>(i));
  throw Error("unknown net '" + std::string(net) + "'");
}

namespace {

struct Event {
  SimTime time;
  EventKind kind;
  bool to_port; // false: net target
  std::uint32_t a;
  std::uint32_t b;
  std::uint64_t seq;
  bool rising;
  SimTime width;

  auto key() const {
    // Falling before rising so touching pulses keep both edges.
    return std::make_tuple(time, static_cast<int>(kind), to_port, a, b, rising, seq);
  }
  bool operator>(const Event &o) const { return key() > o.key(); }
};

using CellState =
    std::variant<std::monostate, SyncGateState, AsyncGateState, T1State, MergerState>;

struct Runtime {
  CellState state;
  /// Sync: {clk->q}. T1: {clk->sum, a->carry}. Async/merger: in->q per data
  /// input. Splitter: a->q per branch. Buffer: {a->q}.
  std::vector<SimTime> delay;
  std::vector<SimTime> retention; ///< async only, per data input
  std::vector<SimTime> setup;     ///< per data input, clocked cells only
  std::vector<SimTime> hold;
  std::vector<std::optional<SimTime>> pending_data;
  std::optional<SimTime> last_clock;
  SimTime clock_width;
  std::vector<PulseGuard> guards; ///< per output, kernel-guarded kinds
  std::vector<int> data_index;    ///< port -> data input position or -1
};

} // namespace

struct Simulator::Impl {
  Netlist netlist;
  ResolvedTiming timing;
  SimConfig config;
  std::vector<Runtime> rt;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue;
  std::uint64_t seq = 0;
  SimTime now;
  bool ran = false;
  SimulationTrace trace;
  std::vector<std::optional<SimTime>> last_injection_end;
  Observer observer;

  Impl(Netlist n, ResolvedTiming t, SimConfig c)
      : netlist(std::move(n)), timing(std::move(t)), config(c) {
    if (config.default_pulse_width <= SimTime{})
      throw Error("default pulse width must be positive");
    if (timing.instances.size() != netlist.instances().size())
      throw Error("timing does not match the netlist");
    if (config.strict_fanout)
      check_fanout();
    trace.net_names.reserve(netlist.nets().size());
    for (const auto &net : netlist.nets())
      trace.net_names.push_back(net.name);
    trace.edges.resize(netlist.nets().size());
    last_injection_end.resize(netlist.nets().size());
    for (InstanceId id = 0; id < netlist.instances().size(); ++id)
      rt.push_back(build_runtime(id));
  }

  void check_fanout() const {
    std::vector<Diagnostic> errs;
    for (const auto &net : netlist.nets()) {
      if (net.sinks.size() <= 1)
        continue;
      if (net.driver && netlist.instance(net.driver->instance).cell->as<Splitter>())
        continue;
      errs.push_back({Diagnostic::Severity::Error, SourceSpan{},
                      "net '" + net.name + "' fans out to " +
                          std::to_string(net.sinks.size()) + " sinks without a splitter"});
    }
    if (!errs.empty())
      throw DiagnosticError("strict fanout check failed", std::move(errs));
  }

  SimTime arc(InstanceId id, const std::string &from, const std::string &to) const {
    return timing.delay(id, TimingArc{from, to}, config.corner);
  }

  Runtime build_runtime(InstanceId id) const {
    const Instance &inst = netlist.instance(id);
    const CellSpec &cell = *inst.cell;
    const auto &P = cell.ports();
    Runtime r;
    r.data_index.assign(P.size(), -1);
    for (std::size_t i = 0; i < cell.data_inputs().size(); ++i)
      r.data_index[cell.data_inputs()[i]] = static_cast<int>(i);
    const std::string q0 = P[cell.outputs()[0]].name;

    if (const auto *g = cell.as<SyncGate>()) {
      r.state = SyncGateState::initial(g->logic.arity());
      r.delay = {arc(id, P[*cell.clock_port()].name, q0)};
    } else if (const auto *g = cell.as<AsyncGate>()) {
      r.state = AsyncGateState::initial(g->logic.arity());
      for (std::size_t p : cell.data_inputs()) {
        r.delay.push_back(arc(id, P[p].name, q0));
        r.retention.push_back(arc(id, P[p].name, CellSpec::decay_port(P[p].name)));
      }
    } else if (cell.as<T1Cell>()) {
      r.state = T1State{};
      r.delay = {arc(id, P[*cell.clock_port()].name, q0),
                 arc(id, P[cell.data_inputs()[0]].name, P[cell.outputs()[1]].name)};
      r.guards.resize(cell.outputs().size());
    } else if (cell.as<Merger>()) {
      r.state = MergerState{};
      for (std::size_t p : cell.data_inputs())
        r.delay.push_back(arc(id, P[p].name, q0));
    } else if (cell.as<Splitter>()) {
      for (std::size_t o : cell.outputs())
        r.delay.push_back(arc(id, P[cell.data_inputs()[0]].name, P[o].name));
      r.guards.resize(cell.outputs().size());
    } else if (cell.as<Buffer>()) {
      r.delay = {arc(id, P[cell.data_inputs()[0]].name, q0)};
      r.guards.resize(1);
    }

    if (cell.has_timing_checks()) {
      const InstanceTiming &t = timing.instances[id];
      for (std::size_t p : cell.data_inputs()) {
        r.setup.push_back(t.setup.find(P[p].name)->second.at(config.corner));
        r.hold.push_back(t.hold.find(P[p].name)->second.at(config.corner));
      }
      r.pending_data.resize(cell.data_inputs().size());
    }
    return r;
  }

  void push(SimTime time, EventKind kind, bool to_port, std::uint32_t a, std::uint32_t b,
            bool rising, SimTime width) {
    queue.push(Event{time, kind, to_port, a, b, seq++, rising, width});
  }

  void schedule_net_edge(NetId net, SimTime time, bool rising, SimTime width) {
    push(time, EventKind::Data, false, net, 0, rising, width);
  }

  void violation(ViolationRecord rec) { trace.violations.push_back(std::move(rec)); }

  const std::string &port_name(InstanceId id, std::size_t port) const {
    return netlist.instance(id).cell->port(port).name;
  }

  std::optional<NetId> output_net(InstanceId id, std::size_t output) const {
    const Instance &inst = netlist.instance(id);
    return inst.port_nets[inst.cell->outputs()[output]];
  }

  void emit(InstanceId id, const PulseOut &out) {
    if (auto net = output_net(id, out.output)) {
      schedule_net_edge(*net, out.rise, true, out.width);
      schedule_net_edge(*net, out.end(), false, SimTime{});
    }
  }

  void collision(InstanceId id, const Collision &c) {
    const CellSpec &cell = *netlist.instance(id).cell;
    // Async/merger collisions name the data input; kernel-guarded kinds
    // have a single input.
    const std::size_t in_port = cell.data_inputs().at(
        std::min(c.input, cell.data_inputs().size() - 1));
    violation({ViolationKind::Collision, netlist.instance(id).path,
               cell.port(in_port).name, c.rise, "", c.existing.rise, c.overlap(),
               SimTime{}});
  }

  void emit_guarded(InstanceId id, Runtime &r, const PulseOut &out, std::size_t input,
                    SimTime now_t) {
    if (auto hit = r.guards[out.output].admit(out.rise, out.width, now_t)) {
      Collision c{input, out.rise, out.width, *hit};
      collision(id, c);
      trace.violations.back().ref_port =
          port_name(id, netlist.instance(id).cell->outputs()[out.output]);
      return;
    }
    emit(id, out);
  }

  void dispatch_net(const Event &ev) {
    const Net &net = netlist.net(ev.a);
    trace.edges[ev.a].push_back({ev.time, ev.rising});
    for (const PortRef &sink : net.sinks) {
      const PortRole role = netlist.instance(sink.instance).cell->port(sink.port).role;
      if (!ev.rising && role != PortRole::Clock)
        continue;
      const EventKind kind = role == PortRole::Clock ? EventKind::Clock : EventKind::Data;
      push(ev.time + timing.interconnect_delay(sink, config.corner), kind, true,
           sink.instance, sink.port, ev.rising, ev.width);
    }
  }

  void clocked_data(InstanceId id, Runtime &r, std::size_t idx, SimTime t) {
    const CellSpec &cell = *netlist.instance(id).cell;
    if (r.last_clock && t > *r.last_clock) {
      if (auto v = check_setup_hold(netlist.instance(id).path,
                                    cell.port(cell.data_inputs()[idx]).name, t,
                                    cell.port(*cell.clock_port()).name, *r.last_clock,
                                    SimTime{}, r.hold[idx]))
        violation(std::move(*v));
    }
    r.pending_data[idx] = t;
  }

  void clocked_clock(InstanceId id, Runtime &r, SimTime t, SimTime width) {
    const CellSpec &cell = *netlist.instance(id).cell;
    for (std::size_t i = 0; i < r.pending_data.size(); ++i) {
      if (!r.pending_data[i])
        continue;
      if (auto v = check_setup_hold(netlist.instance(id).path,
                                    cell.port(cell.data_inputs()[i]).name,
                                    *r.pending_data[i],
                                    cell.port(*cell.clock_port()).name, t, r.setup[i],
                                    SimTime{}))
        violation(std::move(*v));
      r.pending_data[i].reset();
    }
    r.last_clock = t;
    r.clock_width = width;
  }

  void dispatch_port(const Event &ev) {
    const InstanceId id = ev.a;
    const std::size_t port = ev.b;
    Runtime &r = rt[id];
    const CellSpec &cell = *netlist.instance(id).cell;
    const CellKind &kind = cell.kind();
    const PortRole role = cell.port(port).role;
    const SimTime t = ev.time;

    if (ev.kind == EventKind::Decay) {
      auto &st = std::get<AsyncGateState>(r.state);
      const std::size_t idx = static_cast<std::size_t>(r.data_index[port]);
      if (async_on_decay(st, idx) == DecayOutcome::Underflow)
        violation({ViolationKind::DecayUnderflow, netlist.instance(id).path,
                   cell.port(port).name, t, CellSpec::decay_port(cell.port(port).name),
                   t, SimTime{}, SimTime{}});
      return;
    }

    if (const auto *g = std::get_if<SyncGate>(&kind)) {
      auto &st = std::get<SyncGateState>(r.state);
      if (role == PortRole::Data) {
        const auto idx = static_cast<std::size_t>(r.data_index[port]);
        clocked_data(id, r, idx, t);
        sync_on_input(st, idx);
      } else if (role == PortRole::Reset) {
        sync_on_reset(st);
      } else if (role == PortRole::Clock && ev.rising) {
        clocked_clock(id, r, t, ev.width);
        if (auto rise = sync_on_clock_rise(st, *g, t, r.delay[0]))
          if (auto net = output_net(id, 0))
            schedule_net_edge(*net, *rise, true, r.clock_width);
      } else if (role == PortRole::Clock) {
        if (auto fall = sync_on_clock_fall(st, t, r.delay[0]))
          if (auto net = output_net(id, 0))
            schedule_net_edge(*net, *fall, false, SimTime{});
      }
    } else if (const auto *g = std::get_if<AsyncGate>(&kind)) {
      auto &st = std::get<AsyncGateState>(r.state);
      const auto idx = static_cast<std::size_t>(r.data_index[port]);
      AsyncTiming at{r.delay, r.retention};
      AsyncInputResult res = async_on_input(st, *g, at, idx, t, ev.width);
      if (res.decay_at)
        push(*res.decay_at, EventKind::Decay, true, id, static_cast<std::uint32_t>(port),
             true, SimTime{});
      if (res.output)
        emit(id, *res.output);
      if (res.collision) {
        collision(id, *res.collision);
        trace.violations.back().ref_port = port_name(id, cell.outputs()[0]);
      }
    } else if (std::holds_alternative<T1Cell>(kind)) {
      auto &st = std::get<T1State>(r.state);
      if (role == PortRole::Data) {
        clocked_data(id, r, 0, t);
        if (auto carry = t1_on_input(st, t, ev.width, r.delay[1]))
          emit_guarded(id, r, *carry, 0, t);
      } else if (ev.rising) {
        clocked_clock(id, r, t, ev.width);
        if (auto rise = t1_on_clock(st, t, r.delay[0]))
          if (auto net = output_net(id, 0))
            schedule_net_edge(*net, *rise, true, r.clock_width);
      } else {
        if (auto fall = t1_on_clock_fall(st, t, r.delay[0]))
          if (auto net = output_net(id, 0))
            schedule_net_edge(*net, *fall, false, SimTime{});
      }
    } else if (std::holds_alternative<Merger>(kind)) {
      auto &st = std::get<MergerState>(r.state);
      const auto idx = static_cast<std::size_t>(r.data_index[port]);
      MergeResult res = merger_on_input(st, idx, t, ev.width, r.delay[idx]);
      if (res.output)
        emit(id, *res.output);
      if (res.collision) {
        collision(id, *res.collision);
        trace.violations.back().ref_port = port_name(id, cell.outputs()[0]);
      }
    } else if (std::holds_alternative<Splitter>(kind)) {
      for (const PulseOut &out : splitter_on_input(t, ev.width, r.delay))
        emit_guarded(id, r, out, 0, t);
    } else if (std::holds_alternative<Buffer>(kind)) {
      emit_guarded(id, r, buffer_on_input(t, ev.width, r.delay[0]), 0, t);
    }
  }

  void step(SimTime limit) {
    while (!queue.empty() && queue.top().time <= limit) {
      Event ev = queue.top();
      queue.pop();
      ++trace.events;
      now = ev.time;
      if (!ev.to_port) {
        dispatch_net(ev);
        continue;
      }
      dispatch_port(ev);
      if (observer)
        observer(DispatchInfo{ev.time, ev.kind, ev.a, ev.b, ev.rising});
    }
  }
};

Simulator::Simulator(Netlist netlist, SimConfig config)
    : Simulator(netlist, ResolvedTiming::library_defaults(netlist), config) {}

Simulator::Simulator(Netlist netlist, const AnnotationDb &sdf, SimConfig config)
    : Simulator(netlist, resolve(sdf, netlist), config) {}

Simulator::Simulator(Netlist netlist, ResolvedTiming timing, SimConfig config)
    : impl_(std::make_unique<Impl>(std::move(netlist), std::move(timing), config)) {}

Simulator::~Simulator() = default;
Simulator::Simulator(Simulator &&) noexcept = default;
Simulator &Simulator::operator=(Simulator &&) noexcept = default;

void Simulator::inject_pulse(NetId net, SimTime rise, std::optional<SimTime> width) {
  Impl &s = *impl_;
  if (net >= s.netlist.nets().size())
    throw Error("unknown net id " + std::to_string(net));
  const Net &n = s.netlist.net(net);
  if (!n.primary_input)
    throw Error("net '" + n.name + "' is not a primary input");
  const SimTime w = width.value_or(s.config.default_pulse_width);
  if (w <= SimTime{})
    throw Error("pulse width on '" + n.name + "' must be positive");
  if (rise < SimTime{} || rise < s.now || (s.ran && rise == s.now))
    throw Error("pulse on '" + n.name + "' at " + std::to_string(rise.count()) +
                "fs is not after the current time " + std::to_string(s.now.count()) + "fs");
  auto &last = s.last_injection_end[net];
  if (last && rise < *last)
    throw Error("pulse on '" + n.name + "' at " + std::to_string(rise.count()) +
                "fs overlaps the previous pulse ending at " +
                std::to_string(last->count()) + "fs");
  last = rise + w;
  s.schedule_net_edge(net, rise, true, w);
  s.schedule_net_edge(net, rise + w, false, SimTime{});
}

void Simulator::inject_pulse(std::string_view net, SimTime rise,
                             std::optional<SimTime> width) {
  auto id = impl_->netlist.find_net(net);
  if (!id)
    throw Error("unknown net '" + std::string(net) + "'");
  inject_pulse(*id, rise, width);
}

const SimulationTrace &Simulator::run_until(SimTime t) {
  Impl &s = *impl_;
  const SimTime limit = std::min(t, s.config.stop_time);
  if (limit < s.now)
    throw Error("run_until: " + std::to_string(t.count()) + "fs is before the current time");
  s.step(limit);
  s.now = std::max(s.now, limit);
  s.ran = true;
  s.trace.end_time = s.now;
  return s.trace;
}

const SimulationTrace &Simulator::run() {
  Impl &s = *impl_;
  s.step(s.config.stop_time);
  if (s.config.stop_time != SimTime::max())
    s.now = std::max(s.now, s.config.stop_time);
  s.ran = true;
  s.trace.end_time = s.now;
  return s.trace;
}

SimTime Simulator::now() const { return impl_->now; }
const SimulationTrace &Simulator::trace() const { return impl_->trace; }
const Netlist &Simulator::netlist() const { return impl_->netlist; }
const ResolvedTiming &Simulator::timing() const { return impl_->timing; }
const SimConfig &Simulator::config() const { return impl_->config; }

const SyncGateState *Simulator::sync_state(InstanceId id) const {
  return std::get_if<SyncGateState>(&impl_->rt.at(id).state);
}
const AsyncGateState *Simulator::async_state(InstanceId id) const {
  return std::get_if<AsyncGateState>(&impl_->rt.at(id).state);
}
const T1State *Simulator::t1_state(InstanceId id) const {
  return std::get_if<T1State>(&impl_->rt.at(id).state);
}

void Simulator::set_observer(Observer observer) { impl_->observer = std::move(observer); }

} // namespace sfqsim
