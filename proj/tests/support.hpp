#pragma once

#include "sfqsim/cell.hpp"
#include "sfqsim/netlist.hpp"
#include "sfqsim/sdf.hpp"
#include "sfqsim/simulator.hpp"

#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>

namespace sfqsim::test {

using namespace std::string_literals;

inline SimTime ps(std::int64_t v) { return SimTime::ps(v); }
inline SimTime fs(std::int64_t v) { return SimTime::fs(v); }

inline std::string slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Cells used across the tests; timing mirrors circuits/library.json.
inline constexpr std::string_view kLibrary = R"({"cells": [
  {"name": "DFF", "kind": "sync", "logic": "dff", "inputs": ["d"],
   "delays": {"clk->q": "5ps"}, "setup": {"d": "3ps"}, "hold": {"d": "2ps"},
   "jj_count": 6},
  {"name": "AND2", "kind": "sync", "logic": "and", "inputs": ["a", "b"],
   "delays": {"clk->q": "5ps"}, "setup": {"a": "3ps", "b": "3ps"},
   "hold": {"a": "2ps", "b": "2ps"}, "jj_count": 11},
  {"name": "NOT", "kind": "sync", "logic": "not", "inputs": ["a"],
   "delays": {"clk->q": "6ps"}},
  {"name": "NDRO", "kind": "sync", "logic": "buf", "readout": "ndro",
   "inputs": ["set"], "reset": "rst", "delays": {"clk->q": "7ps"}},
  {"name": "AAND2", "kind": "async", "logic": "and", "mode": "coincidence",
   "inputs": ["a", "b"], "delays": {"a->q": "4ps", "b->q": "4ps"},
   "retention": {"a": "20ps", "b": "20ps"}, "jj_count": 8},
  {"name": "AOR2", "kind": "async", "logic": "or", "mode": "blocking",
   "inputs": ["a", "b"], "delays": {"a->q": "4ps", "b->q": "4ps"},
   "retention": {"a": "20ps", "b": "20ps"}},
  {"name": "T1", "kind": "t1", "delays": {"clk->sum": "5ps", "a->carry": "4ps"},
   "setup": {"a": "3ps"}, "hold": {"a": "2ps"}, "jj_count": 10},
  {"name": "MERGE2", "kind": "merger", "delays": {"a->q": "4ps", "b->q": "12ps"},
   "jj_count": 7},
  {"name": "SPLIT2", "kind": "splitter", "delays": {"a->q0": "2ps", "a->q1": "2ps"},
   "jj_count": 3},
  {"name": "BUF", "kind": "buffer", "delays": {"a->q": "3ps"}, "jj_count": 2}
]})";

inline std::shared_ptr<const CellLibrary> library(std::string_view json = kLibrary) {
  return std::make_shared<const CellLibrary>(parse_library(json));
}

inline Netlist build(std::string_view verilog,
                     std::shared_ptr<const CellLibrary> lib = library(),
                     ElaborateOptions opts = {}) {
  ParsedNetlist parsed = parse_netlist(verilog);
  return elaborate(parsed, std::move(lib), find_top(parsed), opts);
}

inline std::string circuit(const std::string &relative) {
  return std::string(SFQSIM_CIRCUITS_DIR) + "/" + relative;
}

} // namespace sfqsim::test
