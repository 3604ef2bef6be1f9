#include "sfqsim/cell_models.hpp"

#include <algorithm>

namespace sfqsim {

SimTime Collision::overlap() const {
  SimTime lo = std::max(rise, existing.rise);
  SimTime hi = std::min(rise + width, existing.end);
  return hi - lo;
}

std::optional<OutputInterval> PulseGuard::admit(SimTime rise, SimTime width,
                                                SimTime now) {
  std::erase_if(live_, [&](const OutputInterval &iv) { return iv.end <= now; });
  const SimTime end = rise + width;
  for (const auto &iv : live_)
    if (rise < iv.end && iv.rise < end)
      return iv;
  live_.push_back({rise, end});
  return std::nullopt;
}

// --- synchronous -----------------------------------------------------------

SyncGateState SyncGateState::initial(std::size_t inputs) {
  SyncGateState s;
  s.in_state.assign(inputs, 0);
  return s;
}

void sync_on_input(SyncGateState &state, std::size_t input) {
  state.in_state.at(input) = 1;
}

void sync_on_reset(SyncGateState &state) {
  std::fill(state.in_state.begin(), state.in_state.end(), 0);
}

std::optional<SimTime> sync_on_clock_rise(SyncGateState &state,
                                          const SyncGate &gate, SimTime t,
                                          SimTime clk_to_q) {
  state.out_val = gate.logic.eval(state.in_state);
  if (gate.readout == Readout::Dro)
    std::fill(state.in_state.begin(), state.in_state.end(), 0);
  if (!state.out_val)
    return std::nullopt;
  return t + clk_to_q;
}

std::optional<SimTime> sync_on_clock_fall(SyncGateState &state, SimTime t,
                                          SimTime clk_to_q) {
  if (!state.out_val)
    return std::nullopt;
  state.out_val = false;
  return t + clk_to_q;
}

// --- asynchronous ----------------------------------------------------------

AsyncGateState AsyncGateState::initial(std::size_t inputs) {
  AsyncGateState s;
  s.in_state.assign(inputs, 0);
  s.decay_outbound.assign(inputs, 0);
  return s;
}

bool AsyncGateState::window_active() const {
  return std::any_of(in_state.begin(), in_state.end(),
                     [](std::uint8_t v) { return v != 0; });
}

AsyncInputResult async_on_input(AsyncGateState &state, const AsyncGate &gate,
                                const AsyncTiming &timing, std::size_t input,
                                SimTime t, SimTime width) {
  AsyncInputResult result;

  if (gate.mode == AsyncMode::Blocking && state.window_active()) {
    result.absorbed = true;
    return result;
  }

  state.in_state.at(input) = 1;
  state.decay_outbound.at(input) += 1;
  result.decay_at = t + timing.retention[input];

  if (!gate.logic.eval(state.in_state))
    return result;

  state.inciting = IncitingPulse{input, t, width};
  PulseOut out = async_emit(state, gate, timing, t);
  if (auto hit = state.guard.admit(out.rise, out.width, t))
    result.collision = Collision{input, out.rise, out.width, *hit};
  else
    result.output = out;
  return result;
}

PulseOut async_emit(AsyncGateState &state, const AsyncGate &gate,
                    const AsyncTiming &timing, SimTime t) {
  const IncitingPulse &inc = state.inciting.value();
  PulseOut out{0, t + timing.in_to_out[inc.input], inc.width};
  if (gate.mode == AsyncMode::Coincidence)
    std::fill(state.in_state.begin(), state.in_state.end(), 0);
  return out;
}

DecayOutcome async_on_decay(AsyncGateState &state, std::size_t input) {
  auto &count = state.decay_outbound.at(input);
  if (count == 0)
    return DecayOutcome::Underflow;
  if (--count > 0)
    return DecayOutcome::Extended;
  state.in_state.at(input) = 0;
  return DecayOutcome::Expired;
}

// --- T1 --------------------------------------------------------------------

std::optional<PulseOut> t1_on_input(T1State &state, SimTime t, SimTime width,
                                    SimTime in_to_carry) {
  const bool was_set = state.flux;
  state.flux = !state.flux;
  if (!was_set)
    return std::nullopt;
  return PulseOut{1, t + in_to_carry, width};
}

std::optional<SimTime> t1_on_clock(T1State &state, SimTime t,
                                   SimTime clk_to_sum) {
  state.sum_val = state.flux;
  state.flux = false;
  if (!state.sum_val)
    return std::nullopt;
  return t + clk_to_sum;
}

std::optional<SimTime> t1_on_clock_fall(T1State &state, SimTime t,
                                        SimTime clk_to_sum) {
  if (!state.sum_val)
    return std::nullopt;
  state.sum_val = false;
  return t + clk_to_sum;
}

// --- plumbing --------------------------------------------------------------

MergeResult merger_on_input(MergerState &state, std::size_t input, SimTime t,
                            SimTime width, SimTime delay) {
  MergeResult result;
  PulseOut out{0, t + delay, width};
  if (auto hit = state.guard.admit(out.rise, out.width, t))
    result.collision = Collision{input, out.rise, out.width, *hit};
  else
    result.output = out;
  return result;
}

std::vector<PulseOut> splitter_on_input(SimTime t, SimTime width,
                                        std::span<const SimTime> branch_delays) {
  std::vector<PulseOut> outs;
  outs.reserve(branch_delays.size());
  for (std::size_t i = 0; i < branch_delays.size(); ++i)
    outs.push_back({i, t + branch_delays[i], width});
  return outs;
}

PulseOut buffer_on_input(SimTime t, SimTime width, SimTime delay) {
  return {0, t + delay, width};
}

} // namespace sfqsim
