#include "support.hpp"

#include <gtest/gtest.h>

using namespace sfqsim;
using namespace sfqsim::test;

namespace {

CellLibrary one(const std::string &cell) {
  return parse_library(R"({"cells": [)" + cell + "]}");
}

} // namespace

TEST(LogicFn, NamedFunctions) {
  auto and3 = LogicFn::named("and", 3);
  EXPECT_TRUE(and3.eval_index(7));
  EXPECT_FALSE(and3.eval_index(3));
  auto x = LogicFn::named("xor", 2);
  EXPECT_FALSE(x.eval_index(0));
  EXPECT_TRUE(x.eval_index(1));
  EXPECT_TRUE(x.eval_index(2));
  EXPECT_FALSE(x.eval_index(3));
  auto n = LogicFn::named("not", 1);
  EXPECT_TRUE(n.eval_index(0));
  EXPECT_FALSE(n.eval_index(1));
  EXPECT_THROW(LogicFn::named("not", 2), Error);
  EXPECT_THROW(LogicFn::named("mux", 2), Error);
  EXPECT_THROW(LogicFn::named("and", 0), Error);
  EXPECT_THROW(LogicFn::named("and", LogicFn::kMaxArity + 1), Error);
}

TEST(LogicFn, TruthTableBitOrder) {
  // Character k is state index k, input i is bit i: "0100" is a & ~b.
  auto f = LogicFn::from_truth("0100", 2);
  const std::uint8_t a_only[] = {1, 0};
  const std::uint8_t b_only[] = {0, 1};
  EXPECT_TRUE(f.eval(a_only));
  EXPECT_FALSE(f.eval(b_only));
  EXPECT_THROW(LogicFn::from_truth("001", 2), Error);
  EXPECT_THROW(LogicFn::from_truth("00x1", 2), Error);
}

TEST(LogicFn, AnyInputSufficient) {
  EXPECT_TRUE(LogicFn::named("or", 3).is_any_input_sufficient());
  EXPECT_TRUE(LogicFn::from_truth("0111", 2).is_any_input_sufficient());
  EXPECT_FALSE(LogicFn::named("and", 2).is_any_input_sufficient());
  EXPECT_FALSE(LogicFn::named("nor", 2).is_any_input_sufficient());
}

TEST(LogicFn, VerilogExpressions) {
  std::vector<std::string> ops = {"a_state", "b_state"};
  EXPECT_EQ(LogicFn::named("and", 2).verilog_expr(ops), "a_state & b_state");
  EXPECT_EQ(LogicFn::named("nor", 2).verilog_expr(ops), "~(a_state | b_state)");
  EXPECT_EQ(LogicFn::from_truth("0100", 2).verilog_expr(ops), "(a_state & ~b_state)");
  EXPECT_EQ(LogicFn::from_truth("0000", 2).verilog_expr(ops), "1'b0");
}

TEST(CellLibrary, ParsesEveryKind) {
  auto lib = library();
  ASSERT_EQ(lib->size(), 10u);
  const CellSpec *and2 = lib->find("AND2");
  ASSERT_NE(and2, nullptr);
  EXPECT_NE(and2->as<SyncGate>(), nullptr);
  EXPECT_EQ(and2->ports().size(), 4u);
  EXPECT_EQ(and2->port(*and2->clock_port()).name, "clk");
  EXPECT_EQ(and2->default_delay({"clk", "q"}), ps(5));
  EXPECT_EQ(and2->default_setup("a"), ps(3));
  EXPECT_EQ(and2->default_hold("b"), ps(2));
  EXPECT_EQ(and2->jj_count(), 11);
  EXPECT_TRUE(and2->has_timing_checks());

  const CellSpec *t1 = lib->find("T1");
  ASSERT_NE(t1, nullptr);
  EXPECT_EQ(t1->port(t1->outputs()[0]).name, "sum");
  EXPECT_EQ(t1->port(t1->outputs()[1]).name, "carry");
  EXPECT_TRUE(t1->has_arc({"a", "carry"}));
  EXPECT_TRUE(t1->has_arc({"clk", "sum"}));

  const CellSpec *aand = lib->find("AAND2");
  ASSERT_NE(aand, nullptr);
  EXPECT_EQ(aand->as<AsyncGate>()->mode, AsyncMode::Coincidence);
  EXPECT_EQ(aand->default_delay({"a", "a_decay"}), ps(20));
  EXPECT_FALSE(aand->has_timing_checks());
  EXPECT_EQ(lib->find("AOR2")->as<AsyncGate>()->mode, AsyncMode::Blocking);

  const CellSpec *ndro = lib->find("NDRO");
  ASSERT_TRUE(ndro->reset_port().has_value());
  EXPECT_EQ(ndro->as<SyncGate>()->readout, Readout::Ndro);
  EXPECT_EQ(lib->find("SPLIT2")->as<Splitter>()->fanout, 2u);
  EXPECT_EQ(lib->find("NOT")->jj_count(), std::nullopt);
  EXPECT_EQ(lib->find("NOPE"), nullptr);
}

TEST(CellLibrary, PortOrderIsDataClockResetOutputs) {
  auto lib = library();
  const CellSpec *ndro = lib->find("NDRO");
  std::vector<std::string> names;
  for (const auto &p : ndro->ports())
    names.push_back(p.name);
  EXPECT_EQ(names, (std::vector<std::string>{"set", "clk", "rst", "q"}));
  EXPECT_EQ(ndro->port(2).role, PortRole::Reset);
}

TEST(CellLibrary, AsyncModeDefaultsFromLogic) {
  auto lib = one(R"({"name": "O", "kind": "async", "logic": "or", "inputs": ["a", "b"],
      "delays": {"a->q": 1, "b->q": 1}, "retention": {"a": 5, "b": 5}})");
  EXPECT_EQ(lib.find("O")->as<AsyncGate>()->mode, AsyncMode::Blocking);
  auto lib2 = one(R"({"name": "A", "kind": "async", "logic": "and", "inputs": ["a", "b"],
      "delays": {"a->q": 1, "b->q": 1}, "retention": {"a": 5, "b": 5}})");
  EXPECT_EQ(lib2.find("A")->as<AsyncGate>()->mode, AsyncMode::Coincidence);
}

TEST(CellLibrary, RejectsMalformedCells) {
  // Missing default delay for an arc.
  EXPECT_THROW(one(R"({"name": "D", "kind": "sync", "logic": "dff", "inputs": "d"})"),
               ParseError);
  // Unknown field.
  EXPECT_THROW(one(R"({"name": "B", "kind": "buffer", "delays": {"a->q": 1}, "colour": 1})"),
               ParseError);
  // Delay on an arc the cell does not have.
  EXPECT_THROW(one(R"({"name": "B", "kind": "buffer", "delays": {"a->q": 1, "a->z": 1}})"),
               ParseError);
  // Negative delay.
  EXPECT_THROW(one(R"({"name": "B", "kind": "buffer", "delays": {"a->q": "-1ps"}})"),
               ParseError);
  // Blocking mode needs an any-input-sufficient function.
  EXPECT_THROW(one(R"({"name": "A", "kind": "async", "logic": "and", "mode": "blocking",
      "inputs": ["a", "b"], "delays": {"a->q": 1, "b->q": 1},
      "retention": {"a": 5, "b": 5}})"),
               ParseError);
  // Setup limits only apply to clocked cells.
  EXPECT_THROW(one(R"({"name": "B", "kind": "buffer", "delays": {"a->q": 1},
      "setup": {"a": 1}})"),
               ParseError);
  // Arity mismatch.
  EXPECT_THROW(one(R"({"name": "X", "kind": "sync", "truth": "01", "inputs": ["a", "b"],
      "delays": {"clk->q": 1}})"),
               ParseError);
  // Port colliding with a retention pseudo-port.
  EXPECT_THROW(one(R"({"name": "A", "kind": "async", "logic": "or",
      "inputs": ["a"], "outputs": ["a_decay"], "delays": {"a->a_decay": 1},
      "retention": {"a": 5}})"),
               ParseError);
  // Inexact time.
  EXPECT_THROW(one(R"({"name": "B", "kind": "buffer", "delays": {"a->q": "0.0001ps"}})"),
               ParseError);
}

TEST(CellLibrary, RejectsMalformedDocuments) {
  EXPECT_THROW(parse_library("{"), ParseError);
  EXPECT_THROW(parse_library("[]"), ParseError);
  EXPECT_THROW(parse_library(R"({"cells": [{"name": "B", "kind": "wire"}]})"), ParseError);
  EXPECT_THROW(parse_library(R"({"cells": [
      {"name": "B", "kind": "buffer", "delays": {"a->q": 1}},
      {"name": "B", "kind": "buffer", "delays": {"a->q": 1}}]})"),
               Error);
}

TEST(CellLibrary, MalformedJsonReportsLocation) {
  try {
    parse_library("{\n  \"cells\": [\n    oops\n  ]\n}", "lib.json");
    FAIL() << "expected ParseError";
  } catch (const ParseError &e) {
    EXPECT_EQ(e.span().file, "lib.json");
    EXPECT_EQ(e.span().line, 3);
  }
}

TEST(CellLibrary, ExampleLibraryLoads) {
  CellLibrary lib = load_library(circuit("library.json"));
  EXPECT_GE(lib.size(), 12u);
  for (const auto &c : lib.cells())
    EXPECT_TRUE(c.jj_count().has_value()) << c.name();
}
