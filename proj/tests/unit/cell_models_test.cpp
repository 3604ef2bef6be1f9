#include "support.hpp"

#include "sfqsim/cell_models.hpp"

#include <gtest/gtest.h>

using namespace sfqsim;
using namespace sfqsim::test;

TEST(PulseGuard, TouchingPulsesDoNotOverlap) {
  PulseGuard g;
  EXPECT_FALSE(g.admit(ps(10), ps(2), ps(0)).has_value());
  EXPECT_FALSE(g.admit(ps(12), ps(2), ps(0)).has_value());
  auto hit = g.admit(ps(13), ps(2), ps(0));
  ASSERT_TRUE(hit.has_value());
  EXPECT_EQ(hit->rise, ps(12));
  EXPECT_EQ(g.live(), 2u);
}

TEST(PulseGuard, ForgetsFinishedPulses) {
  PulseGuard g;
  g.admit(ps(10), ps(2), ps(0));
  g.admit(ps(20), ps(2), ps(15));
  EXPECT_EQ(g.live(), 1u);
}

TEST(Collision, OverlapIsIntersectionLength) {
  Collision c{0, ps(11), ps(2), {ps(10), ps(12)}};
  EXPECT_EQ(c.overlap(), ps(1));
}

TEST(SyncModel, DroEvaluatesAndClears) {
  SyncGate gate{LogicFn::named("and", 2), Readout::Dro};
  auto st = SyncGateState::initial(2);
  sync_on_input(st, 0);
  EXPECT_FALSE(sync_on_clock_rise(st, gate, ps(10), ps(5)).has_value());
  EXPECT_EQ(st.in_state, (std::vector<std::uint8_t>{0, 0}));
  sync_on_input(st, 0);
  sync_on_input(st, 1);
  sync_on_input(st, 1);
  EXPECT_EQ(sync_on_clock_rise(st, gate, ps(20), ps(5)), ps(25));
  EXPECT_EQ(sync_on_clock_fall(st, ps(22), ps(5)), ps(27));
  EXPECT_FALSE(sync_on_clock_fall(st, ps(32), ps(5)).has_value());
}

TEST(SyncModel, NdroPersistsUntilReset) {
  SyncGate gate{LogicFn::named("buf", 1), Readout::Ndro};
  auto st = SyncGateState::initial(1);
  sync_on_input(st, 0);
  EXPECT_TRUE(sync_on_clock_rise(st, gate, ps(10), ps(5)).has_value());
  EXPECT_TRUE(sync_on_clock_rise(st, gate, ps(20), ps(5)).has_value());
  sync_on_reset(st);
  EXPECT_FALSE(sync_on_clock_rise(st, gate, ps(30), ps(5)).has_value());
}

TEST(SyncModel, InverterFiresWithoutInput) {
  SyncGate gate{LogicFn::named("not", 1), Readout::Dro};
  auto st = SyncGateState::initial(1);
  EXPECT_TRUE(sync_on_clock_rise(st, gate, ps(10), ps(6)).has_value());
  sync_on_input(st, 0);
  EXPECT_FALSE(sync_on_clock_rise(st, gate, ps(20), ps(6)).has_value());
}

namespace {

struct AsyncFixture {
  std::vector<SimTime> delay{ps(4), ps(4)};
  std::vector<SimTime> retention{ps(20), ps(20)};
  AsyncTiming timing() const { return {delay, retention}; }
};

} // namespace

TEST(AsyncModel, CoincidenceFiresOnSecondInputAndConsumesState) {
  AsyncFixture f;
  AsyncGate gate{AsyncMode::Coincidence, LogicFn::named("and", 2)};
  auto st = AsyncGateState::initial(2);
  auto r1 = async_on_input(st, gate, f.timing(), 0, ps(10), ps(2));
  EXPECT_FALSE(r1.output.has_value());
  EXPECT_EQ(r1.decay_at, ps(30));
  auto r2 = async_on_input(st, gate, f.timing(), 1, ps(15), ps(3));
  ASSERT_TRUE(r2.output.has_value());
  EXPECT_EQ(r2.output->rise, ps(19));
  EXPECT_EQ(r2.output->width, ps(3)); // width of the inciting pulse
  EXPECT_EQ(st.in_state, (std::vector<std::uint8_t>{0, 0}));
  EXPECT_EQ(st.decay_outbound, (std::vector<std::uint32_t>{1, 1}));
  EXPECT_EQ(st.inciting, (IncitingPulse{1, ps(15), ps(3)}));
}

TEST(AsyncModel, DecayCountingExtendsWindow) {
  AsyncFixture f;
  AsyncGate gate{AsyncMode::Coincidence, LogicFn::named("and", 2)};
  auto st = AsyncGateState::initial(2);
  async_on_input(st, gate, f.timing(), 0, ps(0), ps(2));
  async_on_input(st, gate, f.timing(), 0, ps(10), ps(2));
  EXPECT_EQ(st.decay_outbound[0], 2u);
  EXPECT_EQ(async_on_decay(st, 0), DecayOutcome::Extended);
  EXPECT_EQ(st.in_state[0], 1);
  EXPECT_EQ(async_on_decay(st, 0), DecayOutcome::Expired);
  EXPECT_EQ(st.in_state[0], 0);
  EXPECT_EQ(async_on_decay(st, 0), DecayOutcome::Underflow);
  EXPECT_EQ(st.decay_outbound[0], 0u);
}

TEST(AsyncModel, BlockingAbsorbsInsideWindow) {
  AsyncFixture f;
  AsyncGate gate{AsyncMode::Blocking, LogicFn::named("or", 2)};
  auto st = AsyncGateState::initial(2);
  auto r1 = async_on_input(st, gate, f.timing(), 0, ps(0), ps(2));
  ASSERT_TRUE(r1.output.has_value());
  EXPECT_TRUE(st.window_active());
  auto r2 = async_on_input(st, gate, f.timing(), 1, ps(5), ps(2));
  EXPECT_TRUE(r2.absorbed);
  EXPECT_FALSE(r2.output.has_value());
  EXPECT_FALSE(r2.decay_at.has_value());
  EXPECT_EQ(st.decay_outbound[1], 0u);
  EXPECT_EQ(async_on_decay(st, 0), DecayOutcome::Expired);
  EXPECT_FALSE(st.window_active());
  EXPECT_TRUE(async_on_input(st, gate, f.timing(), 1, ps(21), ps(2)).output.has_value());
}

TEST(AsyncModel, OverlappingOutputIsACollision) {
  AsyncFixture f;
  AsyncGate gate{AsyncMode::Coincidence, LogicFn::named("and", 2)};
  auto st = AsyncGateState::initial(2);
  async_on_input(st, gate, f.timing(), 0, ps(0), ps(5));
  ASSERT_TRUE(async_on_input(st, gate, f.timing(), 1, ps(1), ps(5)).output);
  async_on_input(st, gate, f.timing(), 0, ps(2), ps(5));
  auto r = async_on_input(st, gate, f.timing(), 1, ps(3), ps(5));
  ASSERT_TRUE(r.collision.has_value());
  EXPECT_EQ(r.collision->overlap(), ps(3));
  EXPECT_FALSE(r.output.has_value());
}

TEST(T1Model, CarryOnSecondPulseSumOnClock) {
  T1State st;
  EXPECT_FALSE(t1_on_input(st, ps(10), ps(2), ps(4)).has_value());
  auto carry = t1_on_input(st, ps(14), ps(2), ps(4));
  ASSERT_TRUE(carry.has_value());
  EXPECT_EQ(carry->output, 1u);
  EXPECT_EQ(carry->rise, ps(18));
  EXPECT_FALSE(t1_on_clock(st, ps(40), ps(5)).has_value());
  t1_on_input(st, ps(50), ps(2), ps(4));
  EXPECT_EQ(t1_on_clock(st, ps(80), ps(5)), ps(85));
  EXPECT_FALSE(st.flux);
  EXPECT_EQ(t1_on_clock_fall(st, ps(82), ps(5)), ps(87));
}

TEST(PlumbingModels, MergerSplitterBuffer) {
  MergerState m;
  EXPECT_TRUE(merger_on_input(m, 0, ps(0), ps(2), ps(4)).output.has_value());
  auto clash = merger_on_input(m, 1, ps(1), ps(2), ps(4));
  EXPECT_TRUE(clash.collision.has_value());
  EXPECT_EQ(clash.collision->input, 1u);

  std::vector<SimTime> delays{ps(2), ps(3)};
  auto outs = splitter_on_input(ps(10), ps(2), delays);
  ASSERT_EQ(outs.size(), 2u);
  EXPECT_EQ(outs[1].rise, ps(13));
  EXPECT_EQ(outs[1].output, 1u);
  EXPECT_EQ(buffer_on_input(ps(1), fs(1), ps(100)), (PulseOut{0, fs(101000), fs(1)}));
}
