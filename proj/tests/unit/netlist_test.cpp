#include "support.hpp"

#include <gtest/gtest.h>

using namespace sfqsim;
using namespace sfqsim::test;

namespace {

constexpr std::string_view kHier = R"(
// two-level design with a bus
module stage(x, clk, y);
  input x, clk;
  output y;
  DFF r (.d(x), .clk(clk), .q(y));
endmodule

module top(
  input [1:0] din,
  input clk,
  output [1:0] dout
);
  wire c0, c1;
  SPLIT2 sc (.a(clk), .q0(c0), .q1(c1));
  stage s0 (.x(din[0]), .clk(c0), .y(dout[0]));
  stage s1 (.x(din[1]), .clk(c1), .y(dout[1]));
endmodule
)";

std::string diagnostics_of(std::string_view verilog, ElaborateOptions opts = {}) {
  try {
    build(verilog, library(), opts);
  } catch (const DiagnosticError &e) {
    std::string all;
    for (const auto &d : e.diagnostics())
      all += d.message + "\n";
    return all;
  }
  return "";
}

} // namespace

TEST(NetlistParse, ModulesPortsAndInstances) {
  ParsedNetlist p = parse_netlist(kHier);
  ASSERT_EQ(p.modules.size(), 2u);
  const ModuleDecl *top = p.find("top");
  ASSERT_NE(top, nullptr);
  EXPECT_EQ(top->port_order, (std::vector<std::string>{"din", "clk", "dout"}));
  const NetDecl *din = top->find_decl("din");
  ASSERT_NE(din, nullptr);
  EXPECT_EQ(din->kind, DeclKind::Input);
  EXPECT_EQ(din->range, (BitRange{1, 0}));
  ASSERT_EQ(top->instances.size(), 3u);
  EXPECT_EQ(top->instances[1].type, "stage");
  EXPECT_TRUE(top->instances[1].connections[0].net->single_bit);
  EXPECT_EQ(find_top(p), "top");
}

TEST(NetlistParse, PrintRoundTrips) {
  ParsedNetlist p = parse_netlist(kHier);
  const std::string once = print_netlist(p);
  const std::string twice = print_netlist(parse_netlist(once));
  EXPECT_EQ(once, twice);
}

TEST(NetlistParse, EscapedIdentifiersAndComments) {
  auto p = parse_netlist(R"(/* block
  comment */ module \weird.name (a, q); input a; output q;
  BUF \b$1 (.a(a), .q(q)); // trailing
endmodule)");
  EXPECT_EQ(p.modules[0].name, "weird.name");
  EXPECT_EQ(p.modules[0].instances[0].name, "b$1");
}

TEST(NetlistParse, RejectsBehavioralAndUnsupportedSyntax) {
  EXPECT_THROW(parse_netlist("module m(a); input a; assign a = 1; endmodule"), ParseError);
  EXPECT_THROW(parse_netlist("module m(a); input a; always @(a) begin end endmodule"),
               ParseError);
  EXPECT_THROW(parse_netlist("module m(a); input a; BUF #(1) b (.a(a)); endmodule"),
               ParseError);
  EXPECT_THROW(parse_netlist("`timescale 1ps/1fs\nmodule m(); endmodule"), ParseError);
  EXPECT_THROW(parse_netlist("module m(a, q); input a; output q; BUF b (a, q); endmodule"),
               ParseError);
  EXPECT_THROW(parse_netlist("module m(a); input a; BUF b (.a(1'b0)); endmodule"),
               ParseError);
  EXPECT_THROW(parse_netlist("module m(a); input a;"), ParseError);
  EXPECT_THROW(parse_netlist("module m(a); endmodule"), ParseError);
  EXPECT_THROW(parse_netlist("module m(); endmodule module m(); endmodule"), ParseError);
  EXPECT_THROW(parse_netlist("module m(a); input a; BUF b (.a(a)); BUF b (.a(a)); endmodule"),
               ParseError);
  EXPECT_THROW(parse_netlist("module m(a); input a; BUF b (.a(a), .a(a)); endmodule"),
               ParseError);
}

TEST(NetlistParse, ErrorCarriesLocation) {
  try {
    parse_netlist("module m(a);\n  input a;\n  assign a = 1;\nendmodule", "x.v");
    FAIL();
  } catch (const ParseError &e) {
    EXPECT_EQ(e.span().file, "x.v");
    EXPECT_EQ(e.span().line, 3);
    EXPECT_EQ(e.span().column, 12); // the '='
  }
}

TEST(NetlistParse, TopSelection) {
  EXPECT_THROW(find_top(parse_netlist("module a(); endmodule module b(); endmodule")), Error);
  EXPECT_THROW(find_top(parse_netlist(
                   "module a(); b x (); endmodule module b(); a y (); endmodule")),
               Error);
}

TEST(Elaborate, FlattensHierarchyAndBuses) {
  Netlist n = build(kHier);
  EXPECT_EQ(n.top(), "top");
  ASSERT_EQ(n.instances().size(), 3u);
  EXPECT_TRUE(n.find_instance("s0.r").has_value());
  EXPECT_TRUE(n.find_instance("s1.r").has_value());
  EXPECT_EQ(n.top_bus_bits("din"), (std::vector<std::string>{"din[1]", "din[0]"}));
  EXPECT_EQ(n.top_bus_bits("clk"), (std::vector<std::string>{"clk"}));
  EXPECT_TRUE(n.top_bus_bits("nope").empty());
  ASSERT_EQ(n.primary_inputs().size(), 3u);
  EXPECT_EQ(n.net(n.primary_inputs()[0]).name, "din[1]");
  ASSERT_EQ(n.primary_outputs().size(), 2u);

  const NetId d0 = *n.find_net("dout[0]");
  ASSERT_TRUE(n.net(d0).driver.has_value());
  EXPECT_EQ(n.driver_name(d0), "s0.r.q");
  EXPECT_EQ(n.driver_name(*n.find_net("din[0]")), "din[0]");
  const NetId c0 = *n.find_net("c0");
  ASSERT_EQ(n.net(c0).sinks.size(), 1u);
  EXPECT_EQ(n.endpoint_name(n.net(c0).sinks[0]), "s0.r.clk");
  EXPECT_TRUE(n.warnings().empty());
}

TEST(Elaborate, PartSelectsConnectBits) {
  Netlist n = build(R"(
module sub(v, q); input [1:0] v; output [1:0] q;
  BUF b0 (.a(v[0]), .q(q[0]));
  BUF b1 (.a(v[1]), .q(q[1]));
endmodule
module top(x, y); input [3:0] x; output [1:0] y;
  sub s (.v(x[2:1]), .q(y));
endmodule)");
  const auto &inst = n.instance(*n.find_instance("s.b0"));
  EXPECT_EQ(n.net(*inst.port_nets[0]).name, "x[1]");
  EXPECT_EQ(n.warnings().size(), 2u); // x[3] and x[0] unused
}

TEST(Elaborate, SubmoduleOutputsMayBeLeftOpen) {
  Netlist n = build(R"(
module sub(a, q, r); input a; output q, r;
  SPLIT2 s (.a(a), .q0(q), .q1(r));
endmodule
module top(a, q); input a; output q;
  sub u (.a(a), .q(q), .r());
endmodule)");
  EXPECT_TRUE(n.find_net("u.r").has_value());
}

TEST(Elaborate, CollectsEveryError) {
  const std::string diags = diagnostics_of(R"(
module top(a, clk, q); input a, clk; output q;
  wire w;
  NOPE x (.a(a));
  DFF r1 (.d(a), .q(q));
  DFF r2 (.d(a), .clk(clk), .q(q));
  BUF b (.a(w), .z(q));
endmodule)");
  EXPECT_NE(diags.find("unknown cell type 'NOPE'"), std::string::npos) << diags;
  EXPECT_NE(diags.find("unconnected required port 'clk'"), std::string::npos) << diags;
  EXPECT_NE(diags.find("has no port 'z'"), std::string::npos) << diags;
  EXPECT_NE(diags.find("multiple drivers"), std::string::npos) << diags;
  EXPECT_NE(diags.find("net 'w' has no driver"), std::string::npos) << diags;
}

TEST(Elaborate, WidthMismatchAndUndeclaredNets) {
  std::string d = diagnostics_of(R"(
module sub(v, q); input [1:0] v; output q; BUF b (.a(v[0]), .q(q)); endmodule
module top(x, q); input [2:0] x; output q; sub s (.v(x), .q(q)); endmodule)");
  EXPECT_NE(d.find("width mismatch"), std::string::npos) << d;
  d = diagnostics_of("module top(a, q); input a; output q; BUF b (.a(zz), .q(q)); endmodule");
  EXPECT_NE(d.find("undeclared net 'zz'"), std::string::npos) << d;
  d = diagnostics_of("module top(a, q); input a; output q; BUF b (.a(a[3]), .q(q)); endmodule");
  EXPECT_NE(d.find("bit-select on scalar"), std::string::npos) << d;
}

TEST(Elaborate, RecursionIsAnError) {
  auto parsed = parse_netlist(R"(
module top(a); input a; loop l (.a(a)); endmodule
module loop(a); input a; loop l (.a(a)); endmodule)");
  EXPECT_THROW(elaborate(parsed, library(), "top"), DiagnosticError);
}

TEST(Elaborate, FanoutWarnsOrFailsInStrictMode) {
  constexpr std::string_view v = R"(
module top(a, q, r); input a; output q, r;
  BUF b1 (.a(a), .q(q));
  BUF b2 (.a(a), .q(r));
endmodule)";
  Netlist n = build(v);
  ASSERT_EQ(n.warnings().size(), 1u);
  EXPECT_NE(n.warnings()[0].message.find("without a splitter"), std::string::npos);
  ElaborateOptions strict;
  strict.strict_fanout = true;
  EXPECT_THROW(build(v, library(), strict), DiagnosticError);
}

TEST(Elaborate, UnknownTopAndMissingLibrary) {
  auto parsed = parse_netlist(kHier);
  EXPECT_THROW(elaborate(parsed, library(), "nope"), Error);
  EXPECT_THROW(elaborate(parsed, nullptr, "top"), Error);
}

TEST(Elaborate, ExampleCircuitsElaborate) {
  auto lib = std::make_shared<const CellLibrary>(load_library(circuit("library.json")));
  for (const char *path : {"full_adder/full_adder.v", "async_gates/async_gates.v",
                           "multiplier4/multiplier4.v"}) {
    ParsedNetlist p = parse_netlist(slurp(circuit(path)), path);
    ElaborateOptions strict;
    strict.strict_fanout = true;
    Netlist n = elaborate(p, lib, find_top(p), strict);
    EXPECT_GT(n.instances().size(), 0u) << path;
    EXPECT_TRUE(n.warnings().empty()) << path;
  }
}
