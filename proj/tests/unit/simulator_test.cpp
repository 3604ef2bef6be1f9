#include "support.hpp"

#include <gtest/gtest.h>

using namespace sfqsim;
using namespace sfqsim::test;

namespace {

Simulator make(std::string_view verilog, SimConfig cfg = {}) {
  return Simulator(build(verilog), cfg);
}

constexpr std::string_view kDff = R"(
module top(d, clk, q); input d, clk; output q;
  DFF u (.d(d), .clk(clk), .q(q));
endmodule)";

constexpr std::string_view kAand = R"(
module top(a, b, q); input a, b; output q;
  AAND2 g (.a(a), .b(b), .q(q));
endmodule)";

constexpr std::string_view kAor = R"(
module top(a, b, q); input a, b; output q;
  AOR2 g (.a(a), .b(b), .q(q));
endmodule)";

} // namespace

TEST(SetupHoldCheck, Boundaries) {
  auto chk = [](std::int64_t data, std::int64_t clk) {
    return check_setup_hold("u", "d", fs(data), "clk", fs(clk), fs(3000), fs(2000));
  };
  EXPECT_FALSE(chk(7000, 10000).has_value()); // exactly setup before
  auto s = chk(7001, 10000);
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(s->kind, ViolationKind::Setup);
  EXPECT_EQ(s->margin, fs(2999));
  EXPECT_EQ(s->limit, fs(3000));
  auto z = chk(10000, 10000); // coincident: setup side
  ASSERT_TRUE(z.has_value());
  EXPECT_EQ(z->kind, ViolationKind::Setup);
  EXPECT_EQ(z->margin, fs(0));
  auto h = chk(11999, 10000);
  ASSERT_TRUE(h.has_value());
  EXPECT_EQ(h->kind, ViolationKind::Hold);
  EXPECT_EQ(h->margin, fs(1999));
  EXPECT_FALSE(chk(12000, 10000).has_value());
}

TEST(ViolationRecord, TextForm) {
  ViolationRecord r{ViolationKind::Hold, "u", "d", fs(11), "clk", fs(10), fs(1), fs(2)};
  EXPECT_EQ(r.str(), "HOLD u d@11 clk@10 margin=1 limit=2");
}

TEST(Simulator, SyncOutputFollowsClock) {
  Simulator sim = make(kDff);
  sim.inject_pulse("d", ps(10));
  sim.inject_pulse("clk", ps(20), ps(3));
  sim.inject_pulse("clk", ps(50), ps(3));
  const auto &tr = sim.run();
  auto q = tr.pulses("q");
  ASSERT_EQ(q.size(), 1u);
  EXPECT_EQ(q[0], (Pulse{ps(25), ps(3)}));
  EXPECT_TRUE(tr.violations.empty());
}

TEST(Simulator, InverterAndNdro) {
  Simulator inv = make(R"(
module top(a, clk, q); input a, clk; output q; NOT n (.a(a), .clk(clk), .q(q)); endmodule)");
  inv.inject_pulse("a", ps(5));
  inv.inject_pulse("clk", ps(20));
  inv.inject_pulse("clk", ps(40));
  auto q = inv.run().pulses("q");
  ASSERT_EQ(q.size(), 1u);
  EXPECT_EQ(q[0].rise, ps(46));

  Simulator nd = make(R"(
module top(s, r, clk, q); input s, r, clk; output q;
  NDRO n (.set(s), .rst(r), .clk(clk), .q(q));
endmodule)");
  nd.inject_pulse("s", ps(5));
  for (int k = 1; k <= 4; ++k)
    nd.inject_pulse("clk", ps(20 * k));
  nd.inject_pulse("r", ps(50));
  auto nq = nd.run().pulses("q");
  ASSERT_EQ(nq.size(), 2u);
  EXPECT_EQ(nq[1].rise, ps(47));
}

TEST(Simulator, SetupAndHoldViolationsAreReported) {
  Simulator sim = make(kDff);
  sim.inject_pulse("clk", ps(10));
  sim.inject_pulse("d", ps(11));  // 1ps after the clock: hold
  sim.inject_pulse("d", ps(29));  // 1ps before the clock: setup
  sim.inject_pulse("clk", ps(30));
  const auto &tr = sim.run();
  ASSERT_EQ(tr.violations.size(), 2u);
  EXPECT_EQ(tr.violations[0].str(), "HOLD u d@11000 clk@10000 margin=1000 limit=2000");
  EXPECT_EQ(tr.violations[1].str(), "SETUP u d@29000 clk@30000 margin=1000 limit=3000");
}

TEST(Simulator, DecayBeforeDataAtEqualTime) {
  // b arrives exactly when a's retention window closes.
  Simulator sim = make(kAand);
  sim.inject_pulse("a", ps(0));
  sim.inject_pulse("b", ps(20));
  EXPECT_TRUE(sim.run().pulses("q").empty());

  Simulator just = make(kAand);
  just.inject_pulse("a", ps(0));
  just.inject_pulse("b", fs(19999), ps(3));
  auto q = just.run().pulses("q");
  ASSERT_EQ(q.size(), 1u);
  EXPECT_EQ(q[0], (Pulse{fs(23999), ps(3)}));
}

TEST(Simulator, WindowExtensionKeepsStateUntilLastDecay) {
  Simulator sim = make(kAand);
  sim.inject_pulse("a", ps(0));
  sim.inject_pulse("a", ps(15));
  sim.run_until(ps(25));
  const InstanceId g = *sim.netlist().find_instance("g");
  EXPECT_EQ(sim.async_state(g)->in_state[0], 1);
  EXPECT_EQ(sim.async_state(g)->decay_outbound[0], 1u);
  sim.run_until(ps(35));
  EXPECT_EQ(sim.async_state(g)->in_state[0], 0);
  EXPECT_EQ(sim.async_state(g)->decay_outbound[0], 0u);
}

TEST(Simulator, BlockingGateEmitsOncePerWindow) {
  Simulator sim = make(kAor);
  sim.inject_pulse("a", ps(0));
  sim.inject_pulse("b", ps(5));
  sim.inject_pulse("a", ps(10));
  sim.inject_pulse("b", ps(20)); // window of the first pulse closed at 20
  auto q = sim.run().pulses("q");
  ASSERT_EQ(q.size(), 2u);
  EXPECT_EQ(q[0].rise, ps(4));
  EXPECT_EQ(q[1].rise, ps(24));
}

TEST(Simulator, MergerCollisionIsRecorded) {
  Simulator sim = make(R"(
module top(a, b, q); input a, b; output q; MERGE2 m (.a(a), .b(b), .q(q)); endmodule)");
  sim.inject_pulse("a", ps(8));  // out [12, 14)
  sim.inject_pulse("b", ps(1));  // out [13, 15)
  const auto &tr = sim.run();
  ASSERT_EQ(tr.pulses("q").size(), 1u);
  ASSERT_EQ(tr.violations.size(), 1u);
  EXPECT_EQ(tr.violations[0].str(), "COLLISION m a@12000 q@13000 margin=1000 limit=0");
}

TEST(Simulator, T1AdderBehaviour) {
  Simulator sim = make(R"(
module top(a, clk, s, c); input a, clk; output s, c;
  T1 t (.a(a), .clk(clk), .sum(s), .carry(c));
endmodule)");
  sim.inject_pulse("a", ps(0));
  sim.inject_pulse("a", ps(5));
  sim.inject_pulse("a", ps(10));
  sim.inject_pulse("clk", ps(30), ps(4));
  const auto &tr = sim.run();
  auto c = tr.pulses("c");
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0], (Pulse{ps(9), ps(2)}));
  auto s = tr.pulses("s");
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0], (Pulse{ps(35), ps(4)}));
}

TEST(Simulator, SplitterAndInterconnectDelays) {
  Netlist n = build(R"(
module top(a, p, q); input a; output p, q;
  wire x;
  SPLIT2 s (.a(a), .q0(x), .q1(q));
  BUF b (.a(x), .q(p));
endmodule)");
  AnnotationDb db = parse_sdf(R"((DELAYFILE (TIMESCALE 1fs)
    (CELL (CELLTYPE "top") (INSTANCE) (DELAY (ABSOLUTE (INTERCONNECT s.q0 b.a (7)))))))");
  Simulator sim(n, db);
  sim.inject_pulse("a", ps(1), fs(10));
  const auto &tr = sim.run();
  EXPECT_EQ(tr.pulses("q")[0], (Pulse{ps(3), fs(10)}));
  EXPECT_EQ(tr.pulses("p")[0], (Pulse{fs(6007), fs(10)}));
}

TEST(Simulator, InjectionRules) {
  Simulator sim = make(kDff);
  EXPECT_THROW(sim.inject_pulse("q", ps(1)), Error);
  EXPECT_THROW(sim.inject_pulse("zz", ps(1)), Error);
  EXPECT_THROW(sim.inject_pulse("d", ps(1), fs(0)), Error);
  EXPECT_THROW(sim.inject_pulse("d", ps(-1)), Error);
  sim.inject_pulse("d", ps(10), ps(2));
  EXPECT_THROW(sim.inject_pulse("d", ps(11)), Error);
  sim.inject_pulse("d", ps(12));
  sim.run_until(ps(20));
  EXPECT_THROW(sim.inject_pulse("d", ps(20)), Error);
  EXPECT_THROW(sim.inject_pulse("d", ps(19)), Error);
  EXPECT_NO_THROW(sim.inject_pulse("d", ps(21)));
  EXPECT_THROW(sim.run_until(ps(10)), Error);
}

TEST(Simulator, RunUntilIsIncrementalAndDeterministic) {
  auto scenario = [](bool stepped) {
    Simulator sim = make(kAand);
    for (int k = 0; k < 20; ++k) {
      sim.inject_pulse("a", ps(7 * k));
      sim.inject_pulse("b", ps(11 * k + 3));
    }
    if (stepped)
      for (int t = 0; t <= 300; t += 13)
        sim.run_until(ps(t));
    return sim.run();
  };
  const SimulationTrace whole = scenario(false);
  const SimulationTrace stepped = scenario(true);
  EXPECT_EQ(whole.edges, stepped.edges);
  EXPECT_EQ(whole.violations, stepped.violations);
  EXPECT_EQ(whole.events, stepped.events);
  EXPECT_GT(whole.pulses("q").size(), 0u);
}

TEST(Simulator, StopTimeTruncates) {
  SimConfig cfg;
  cfg.stop_time = ps(15);
  Simulator sim = make(kDff, cfg);
  sim.inject_pulse("d", ps(1));
  sim.inject_pulse("clk", ps(10));
  const auto &tr = sim.run();
  EXPECT_EQ(tr.end_time, ps(15));
  EXPECT_EQ(tr.edges[*sim.netlist().find_net("q")].size(), 1u); // rose, not fallen
  EXPECT_TRUE(tr.pulses("q").empty());
}

TEST(Simulator, ObserverSeesPortAndDecayEvents) {
  Simulator sim = make(kAand);
  std::vector<DispatchInfo> seen;
  sim.set_observer([&](const DispatchInfo &d) { seen.push_back(d); });
  sim.inject_pulse("a", ps(0));
  sim.run();
  ASSERT_EQ(seen.size(), 2u);
  EXPECT_EQ(seen[0].kind, EventKind::Data);
  EXPECT_EQ(seen[1].kind, EventKind::Decay);
  EXPECT_EQ(seen[1].time, ps(20));
}

TEST(Simulator, StrictFanoutAndCorners) {
  constexpr std::string_view v = R"(
module top(a, q, r); input a; output q, r;
  BUF b1 (.a(a), .q(q));
  BUF b2 (.a(a), .q(r));
endmodule)";
  SimConfig strict;
  strict.strict_fanout = true;
  EXPECT_THROW(make(v, strict), DiagnosticError);

  Netlist n = build(kDff);
  AnnotationDb db = parse_sdf(R"((DELAYFILE (TIMESCALE 1ps)
    (CELL (CELLTYPE "DFF") (INSTANCE u) (DELAY (ABSOLUTE (IOPATH clk q (4:5:6)))))))");
  for (auto [corner, expect] : {std::pair{DelayCorner::Min, 14}, std::pair{DelayCorner::Typ, 15},
                                std::pair{DelayCorner::Max, 16}}) {
    SimConfig cfg;
    cfg.corner = corner;
    Simulator sim(n, db, cfg);
    sim.inject_pulse("d", ps(1));
    sim.inject_pulse("clk", ps(10));
    EXPECT_EQ(sim.run().pulses("q").at(0).rise, ps(expect));
  }
}

TEST(Simulator, UnresolvedSdfIsRejected) {
  Netlist n = build(kDff);
  AnnotationDb db = parse_sdf(R"((DELAYFILE (TIMESCALE 1ps)
    (CELL (CELLTYPE "DFF") (INSTANCE nope) (DELAY (ABSOLUTE (IOPATH clk q (4)))))))");
  EXPECT_THROW(Simulator(n, db), ResolutionError);
}

TEST(Simulator, TouchingPulsesScheduledOutOfOrder) {
  // b (12ps) is scheduled first and lands at 14ps, exactly where the later
  // a pulse (4ps) falls.
  Simulator sim(build(R"(
module top(a, b, q); input a, b; output q;
  MERGE2 m (.a(a), .b(b), .q(q));
endmodule)"));
  sim.inject_pulse("b", ps(2), ps(2));
  sim.inject_pulse("a", ps(8), ps(2));
  const auto &tr = sim.run();
  EXPECT_EQ(tr.pulses("q"), (std::vector<Pulse>{{ps(12), ps(2)}, {ps(14), ps(2)}}));
  EXPECT_TRUE(tr.violations.empty());
}
