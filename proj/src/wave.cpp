#include "sfqsim/wave.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace sfqsim {

namespace {

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream is{std::string(line)};
  std::string w;
  while (is >> w)
    out.push_back(w);
  return out;
}

} // namespace

// --- stimulus ----------------------------------------------------------------

Stimulus parse_stimulus(std::string_view text, std::string_view file) {
  Stimulus st;
  std::map<std::string, SimTime> last_time;
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    auto words = split_ws(line);
    if (words.empty())
      continue;
    const SourceSpan span{std::string(file), lineno, 1};
    auto time = [&](const std::string &w, const char *what) {
      try {
        return parse_time(w);
      } catch (const Error &e) {
        throw ParseError(span, std::string("bad ") + what + ": " + e.what());
      }
    };
    auto positive = [&](SimTime v, const char *what) {
      if (v <= SimTime{})
        throw ParseError(span, std::string(what) + " must be positive");
      return v;
    };
    const std::string &op = words[0];
    if (op == "pulse") {
      if (words.size() < 3 || words.size() > 4)
        throw ParseError(span, "usage: pulse <net> <time> [width]");
      StimulusPulse p{words[1], time(words[2], "time"), std::nullopt, lineno};
      if (p.rise < SimTime{})
        throw ParseError(span, "pulse time must not be negative");
      if (words.size() == 4)
        p.width = positive(time(words[3], "width"), "pulse width");
      auto [it, fresh] = last_time.emplace(p.net, p.rise);
      if (!fresh) {
        if (p.rise < it->second)
          throw ParseError(span, "pulse times on '" + p.net + "' go backwards");
        it->second = p.rise;
      }
      st.pulses.push_back(std::move(p));
    } else if (op == "clock") {
      if (words.size() < 4 || words.size() > 6)
        throw ParseError(span, "usage: clock <net> <period> <width> [start] [count]");
      StimulusClock c{words[1], positive(time(words[2], "period"), "clock period"),
                      positive(time(words[3], "width"), "clock width"), SimTime{},
                      std::nullopt, lineno};
      if (c.width >= c.period)
        throw ParseError(span, "clock width must be shorter than the period");
      if (words.size() >= 5) {
        c.start = time(words[4], "start");
        if (c.start < SimTime{})
          throw ParseError(span, "clock start must not be negative");
      }
      if (words.size() == 6) {
        std::size_t used = 0;
        long long n = -1;
        try {
          n = std::stoll(words[5], &used);
        } catch (const std::exception &) {
        }
        if (used != words[5].size() || n <= 0)
          throw ParseError(span, "clock count must be a positive integer");
        c.count = n;
      }
      st.clocks.push_back(std::move(c));
    } else {
      throw ParseError(span, "unknown stimulus directive '" + op + "'");
    }
  }
  return st;
}

Stimulus load_stimulus(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot open stimulus file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_stimulus(ss.str(), path);
}

std::vector<StimulusPulse> Stimulus::expand(SimTime stop) const {
  std::vector<StimulusPulse> out;
  for (const auto &p : pulses)
    if (p.rise <= stop)
      out.push_back(p);
  for (const auto &c : clocks) {
    if (!c.count && stop == SimTime::max())
      throw Error("clock '" + c.net + "' has no count; a stop time is required");
    for (std::int64_t k = 0; !c.count || k < *c.count; ++k) {
      SimTime rise = c.start + c.period * k;
      if (rise > stop)
        break;
      out.push_back({c.net, rise, c.width, c.line});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const auto &a, const auto &b) {
    return std::tie(a.net, a.rise) < std::tie(b.net, b.rise);
  });
  return out;
}

void apply_stimulus(Simulator &sim, const Stimulus &stimulus, SimTime stop) {
  for (const auto &p : stimulus.expand(stop)) {
    try {
      sim.inject_pulse(p.net, p.rise, p.width);
    } catch (const Error &e) {
      throw Error("stimulus line " + std::to_string(p.line) + ": " + e.what());
    }
  }
}

// --- VCD ---------------------------------------------------------------------

namespace {

std::string vcd_id(std::size_t index) {
  std::string id;
  do {
    id.push_back(static_cast<char>('!' + index % 94));
    index /= 94;
  } while (index > 0);
  return id;
}

} // namespace

std::string write_vcd(const SimulationTrace &trace, const std::vector<NetId> &nets,
                      std::string_view scope) {
  std::ostringstream os;
  os << "$version sfqsim $end\n";
  os << "$timescale 1fs $end\n";
  os << "$scope module " << scope << " $end\n";
  for (std::size_t i = 0; i < nets.size(); ++i)
    os << "$var wire 1 " << vcd_id(i) << " " << trace.net_names.at(nets[i]) << " $end\n";
  os << "$upscope $end\n";
  os << "$enddefinitions $end\n";
  if (nets.empty())
    return os.str();

  os << "#0\n$dumpvars\n";
  for (std::size_t i = 0; i < nets.size(); ++i)
    os << "0" << vcd_id(i) << "\n";
  os << "$end\n";

  // Merge per-net edge lists by time; ties keep net order, then edge order.
  struct Change {
    SimTime time;
    std::size_t sig;
    std::size_t ord;
    bool rising;
  };
  std::vector<Change> changes;
  for (std::size_t i = 0; i < nets.size(); ++i) {
    const auto &edges = trace.edges.at(nets[i]);
    for (std::size_t k = 0; k < edges.size(); ++k)
      changes.push_back({edges[k].time, i, k, edges[k].rising});
  }
  std::sort(changes.begin(), changes.end(), [](const Change &a, const Change &b) {
    return std::tie(a.time, a.sig, a.ord) < std::tie(b.time, b.sig, b.ord);
  });
  std::optional<SimTime> current;
  for (const auto &c : changes) {
    if (!current || *current != c.time) {
      if (c.time != SimTime{} || current)
        os << "#" << c.time.count() << "\n";
      current = c.time;
    }
    os << (c.rising ? '1' : '0') << vcd_id(c.sig) << "\n";
  }
  return os.str();
}

VcdData read_vcd(std::string_view text) {
  VcdData data;
  std::map<std::string, std::size_t> ids;
  std::istringstream is{std::string(text)};
  std::string w;
  SimTime now;
  bool in_defs = true;
  bool in_dumpvars = false;
  int line_guess = 0;
  auto fail = [&](const std::string &msg) {
    throw ParseError(SourceSpan{"<vcd>", line_guess, 0}, msg);
  };
  auto skip_to_end = [&] {
    std::string t;
    while (is >> t)
      if (t == "$end")
        return;
    fail("missing $end");
  };
  while (is >> w) {
    ++line_guess;
    if (in_defs) {
      if (w == "$timescale") {
        std::string spec, t;
        while (is >> t && t != "$end")
          spec += t;
        std::size_t split = 0;
        while (split < spec.size() && std::isdigit(static_cast<unsigned char>(spec[split])))
          ++split;
        auto scale = unit_scale_fs(spec.substr(split));
        if (split == 0 || !scale)
          fail("bad $timescale '" + spec + "'");
        data.timescale_fs = std::stoll(spec.substr(0, split)) * *scale;
      } else if (w == "$var") {
        std::string type, width, id, name, t;
        is >> type >> width >> id >> name;
        if (width != "1")
          fail("only 1-bit variables are supported");
        while (is >> t && t != "$end")
          name += t;
        ids[id] = data.signals.size();
        data.signals.push_back({name, {}});
      } else if (w == "$enddefinitions") {
        skip_to_end();
        in_defs = false;
      } else if (!w.empty() && w[0] == '$') {
        skip_to_end();
      } else {
        fail("unexpected '" + w + "' in VCD header");
      }
      continue;
    }
    if (w == "$dumpvars") {
      in_dumpvars = true;
      continue;
    }
    if (w == "$end") {
      in_dumpvars = false;
      continue;
    }
    if (w == "$comment" || w == "$dumpall" || w == "$dumpon" || w == "$dumpoff") {
      if (w == "$comment")
        skip_to_end();
      continue;
    }
    if (w[0] == '#') {
      std::size_t used = 0;
      long long t = std::stoll(w.substr(1), &used);
      if (used + 1 != w.size())
        fail("bad timestamp '" + w + "'");
      SimTime next = SimTime::fs(t * data.timescale_fs);
      if (next < now)
        fail("timestamps go backwards at '" + w + "'");
      now = next;
      continue;
    }
    const char v = w[0];
    if (v != '0' && v != '1' && v != 'x' && v != 'z' && v != 'X' && v != 'Z')
      fail("unsupported value change '" + w + "'");
    auto it = ids.find(w.substr(1));
    if (it == ids.end())
      fail("unknown identifier in '" + w + "'");
    if (in_dumpvars)
      continue;
    if (v == '0' || v == '1')
      data.signals[it->second].edges.push_back({now, v == '1'});
  }
  return data;
}

// --- sample-and-hold ---------------------------------------------------------

HeldTable sample_and_hold(const SimulationTrace &trace, std::string_view clock,
                          const std::vector<BusGroup> &groups) {
  auto net_id = [&](std::string_view name) {
    for (std::size_t i = 0; i < trace.net_names.size(); ++i)
      if (trace.net_names[i] == name)
        return i;
    throw Error("unknown net '" + std::string(name) + "' in held view");
  };
  HeldTable table;
  table.clock = std::string(clock);
  table.groups = groups;
  for (const auto &e : trace.edges.at(net_id(clock)))
    if (e.rising)
      table.cycle_start.push_back(e.time);
  if (table.cycle_start.empty())
    throw Error("clock '" + std::string(clock) + "' has no pulses");

  const std::size_t cycles = table.cycle_start.size();
  table.values.assign(cycles, std::vector<std::uint64_t>(groups.size(), 0));
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto &nets = groups[g].nets;
    if (nets.empty() || nets.size() > 64)
      throw Error("bus group '" + groups[g].label + "' must have 1 to 64 nets");
    for (std::size_t b = 0; b < nets.size(); ++b) {
      const std::uint64_t bit = std::uint64_t{1} << (nets.size() - 1 - b);
      for (const auto &e : trace.edges.at(net_id(nets[b]))) {
        if (!e.rising || e.time < table.cycle_start.front())
          continue;
        auto it = std::upper_bound(table.cycle_start.begin(), table.cycle_start.end(), e.time);
        const auto k = static_cast<std::size_t>(it - table.cycle_start.begin()) - 1;
        table.values[k][g] |= bit;
      }
    }
  }
  return table;
}

std::string format_held_table(const HeldTable &table) {
  std::ostringstream os;
  os << "# cycle start_fs";
  for (const auto &g : table.groups)
    os << " " << g.label;
  os << "\n";
  for (std::size_t k = 0; k < table.cycle_start.size(); ++k) {
    os << k << " " << table.cycle_start[k].count();
    for (std::size_t g = 0; g < table.groups.size(); ++g) {
      const std::size_t width = table.groups[g].nets.size();
      const std::uint64_t v = table.values[k][g];
      std::string bits;
      for (std::size_t b = width; b-- > 0;)
        bits.push_back(((v >> b) & 1u) ? '1' : '0');
      os << " " << table.groups[g].label << "=" << bits << "/" << v;
    }
    os << "\n";
  }
  return os.str();
}

// --- violations --------------------------------------------------------------

std::vector<ViolationRecord> sorted_violations(std::vector<ViolationRecord> records) {
  std::stable_sort(records.begin(), records.end(),
                   [](const ViolationRecord &a, const ViolationRecord &b) {
                     const SimTime ta = std::max(a.data_time, a.ref_time);
                     const SimTime tb = std::max(b.data_time, b.ref_time);
                     return std::tie(ta, a.instance) < std::tie(tb, b.instance);
                   });
  return records;
}

std::string write_violations(const std::vector<ViolationRecord> &records) {
  std::string out;
  for (const auto &r : sorted_violations(records))
    out += r.str() + "\n";
  return out;
}

} // namespace sfqsim
