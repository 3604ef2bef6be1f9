#!/usr/bin/env python3
"""Generates the pipelined 4-bit multiplier under circuits/multiplier4.

Partial products come from clocked AND2 cells. Columns are then reduced one
clock stage at a time with T1 full adders (two mergers and a T1) and half
adders (one merger and a T1); carries are retimed through DFFs and single
bits pass through DFFs, so every product bit leaves the last stage on the
same clock. The clock reaches every clocked cell through a balanced SPLIT2
tree.
"""

import argparse
import math
import re
import pathlib

WIDTH = 4
PERIOD_PS = 60
INPUT_OFFSET_PS = 20
CLOCK_WIDTH_PS = 2


class Builder:
    def __init__(self):
        self.wires = []
        self.lines = []
        self.clock_sinks = []
        self.counter = 0

    def wire(self, stem):
        self.counter += 1
        name = f"{stem}_{self.counter}"
        self.wires.append(name)
        return name

    def inst(self, cell, name, conns):
        body = ", ".join(f".{p}({n})" for p, n in conns)
        self.lines.append(f"  {cell} {name} ({body});")

    def clock(self):
        w = self.wire("ck")
        self.clock_sinks.append(w)
        return w


def split_tree(b, root, leaves, stem):
    """Balanced SPLIT2 tree from `root` onto the nets in `leaves`."""
    depth = max(1, math.ceil(math.log2(len(leaves))))
    slots = list(leaves) + [None] * ((1 << depth) - len(leaves))

    def build(src, lo, hi, level):
        if hi - lo == 1:
            return
        mid = (lo + hi) // 2
        outs = []
        for half in ((lo, mid), (mid, hi)):
            used = [s for s in slots[half[0]:half[1]] if s is not None]
            if not used:
                outs.append(None)
            elif half[1] - half[0] == 1:
                outs.append(slots[half[0]])
            else:
                outs.append(b.wire(stem))
        b.counter += 1
        conns = [("a", src)]
        conns += [(f"q{i}", o if o else "") for i, o in enumerate(outs)]
        b.lines.append(
            f"  SPLIT2 {stem}_s{b.counter} ("
            + ", ".join(f".{p}({n})" for p, n in conns)
            + ");"
        )
        for half, o in zip(((lo, mid), (mid, hi)), outs):
            if o is not None and half[1] - half[0] > 1:
                build(o, half[0], half[1], level + 1)

    build(root, 0, len(slots), 0)
    return depth


def generate():
    b = Builder()
    # Partial products.
    a_taps = {i: [] for i in range(WIDTH)}
    b_taps = {j: [] for j in range(WIDTH)}
    cols = {w: [] for w in range(2 * WIDTH)}
    for i in range(WIDTH):
        for j in range(WIDTH):
            x = b.wire(f"a{i}t")
            y = b.wire(f"b{j}t")
            a_taps[i].append(x)
            b_taps[j].append(y)
            q = b.wire(f"pp{i}{j}")
            b.inst("AND2", f"and_{i}_{j}", [("a", x), ("b", y), ("clk", b.clock()), ("q", q)])
            cols[i + j].append(q)

    stages = 0
    while any(len(v) > 1 for v in cols.values()):
        stages += 1
        nxt = {w: [] for w in range(2 * WIDTH)}
        for w in range(2 * WIDTH):
            bits = list(cols[w])
            k = 0
            while len(bits) >= 3:
                x, y, c = bits.pop(0), bits.pop(0), bits.pop(0)
                s, co = b.wire("s"), b.wire("c")
                b.inst("fa", f"fa_{stages}_{w}_{k}",
                       [("x", x), ("y", y), ("cin", c), ("clk_s", b.clock()),
                        ("clk_c", b.clock()), ("s", s), ("co", co)])
                nxt[w].append(s)
                if w + 1 < 2 * WIDTH:
                    nxt[w + 1].append(co)
                k += 1
            if len(bits) == 2:
                x, y = bits
                s, co = b.wire("s"), b.wire("c")
                b.inst("ha", f"ha_{stages}_{w}",
                       [("x", x), ("y", y), ("clk_s", b.clock()),
                        ("clk_c", b.clock()), ("s", s), ("co", co)])
                nxt[w].append(s)
                if w + 1 < 2 * WIDTH:
                    nxt[w + 1].append(co)
            elif len(bits) == 1:
                q = b.wire("r")
                b.inst("DFF", f"dff_{stages}_{w}", [("d", bits[0]), ("clk", b.clock()), ("q", q)])
                nxt[w].append(q)
        cols = nxt

    for w in range(2 * WIDTH):
        if len(cols[w]) != 1:
            raise SystemExit(f"column {w} ended with {len(cols[w])} bits")
        b.inst("BUF", f"out_{w}", [("a", cols[w][0]), ("q", f"p[{w}]")])

    for i in range(WIDTH):
        split_tree(b, f"a[{i}]", a_taps[i], f"sa{i}")
        split_tree(b, f"b[{i}]", b_taps[i], f"sb{i}")
    clock_depth = split_tree(b, "clk", b.clock_sinks, "sclk")

    out = []
    out.append("// 4-bit pipelined multiplier: clocked AND partial products,")
    out.append("// T1 full/half adder reduction, one clock stage per level.")
    out.append(f"// latency {stages + 1} cycles, clock tree depth {clock_depth}")
    out.append("")
    out.append("module fa(x, y, cin, clk_s, clk_c, s, co);")
    out.append("  input x, y, cin, clk_s, clk_c;")
    out.append("  output s, co;")
    out.append("  wire m1, m2, carry;")
    out.append("  MERGE2 m_xc (.a(x), .b(cin), .q(m1));")
    out.append("  MERGE2 m_y (.a(m1), .b(y), .q(m2));")
    out.append("  T1 t (.a(m2), .clk(clk_s), .sum(s), .carry(carry));")
    out.append("  DFF rc (.d(carry), .clk(clk_c), .q(co));")
    out.append("endmodule")
    out.append("")
    out.append("module ha(x, y, clk_s, clk_c, s, co);")
    out.append("  input x, y, clk_s, clk_c;")
    out.append("  output s, co;")
    out.append("  wire m, carry;")
    out.append("  MERGE2 m_xy (.a(x), .b(y), .q(m));")
    out.append("  T1 t (.a(m), .clk(clk_s), .sum(s), .carry(carry));")
    out.append("  DFF rc (.d(carry), .clk(clk_c), .q(co));")
    out.append("endmodule")
    out.append("")
    out.append("module mult4(a, b, clk, p);")
    out.append(f"  input [{WIDTH - 1}:0] a;")
    out.append(f"  input [{WIDTH - 1}:0] b;")
    out.append("  input clk;")
    out.append(f"  output [{2 * WIDTH - 1}:0] p;")
    for i in range(0, len(b.wires), 8):
        out.append("  wire " + ", ".join(b.wires[i:i + 8]) + ";")
    out.extend(b.lines)
    out.append("endmodule")
    return "\n".join(out) + "\n", stages + 1


def stimulus(latency):
    cycles = (1 << WIDTH) ** 2
    lines = [
        "# every (a, b) pair, one per clock cycle; a bit is a pulse",
        f"clock clk {PERIOD_PS}ps {CLOCK_WIDTH_PS}ps 0ps {cycles + latency + 2}",
    ]
    for n in range(cycles):
        a, bv = n >> WIDTH, n & ((1 << WIDTH) - 1)
        t = INPUT_OFFSET_PS + n * PERIOD_PS
        for i in range(WIDTH):
            if a >> i & 1:
                lines.append(f"pulse a[{i}] {t}ps")
            if bv >> i & 1:
                lines.append(f"pulse b[{i}] {t}ps")
    return "\n".join(lines) + "\n"


def expected_table(latency):
    """Held-value rows for p, from the integer product of each pair."""
    cycles = (1 << WIDTH) ** 2
    total = cycles + latency + 2
    rows = ["# cycle start_fs p"]
    for k in range(total):
        n = k - latency
        value = 0
        if 0 <= n < cycles:
            value = (n >> WIDTH) * (n & ((1 << WIDTH) - 1))
        bits = format(value, f"0{2 * WIDTH}b")
        rows.append(f"{k} {k * PERIOD_PS * 1000} p={bits}/{value}")
    return "\n".join(rows) + "\n"


def sdf(netlist):
    """Post-layout style annotation that keeps every stage's timing balanced."""
    netlist = netlist[netlist.index("module mult4"):]
    cells = []
    for inst in re.findall(r"^  AND2 (\S+) ", netlist, re.M):
        cells.append(("AND2", inst, "(IOPATH clk q (5.5:6:6.5))"))
    for inst in re.findall(r"^  fa (\S+) ", netlist, re.M):
        cells.append(("MERGE2", inst + ".m_xc", "(IOPATH a q (4.5))"))
        cells.append(("T1", inst + ".t", "(IOPATH clk sum (6))"))
    for inst in re.findall(r"^  DFF (\S+) ", netlist, re.M):
        cells.append(("DFF", inst, "(IOPATH clk q (6))"))
    for inst in re.findall(r"^  ha (\S+) ", netlist, re.M):
        cells.append(("T1", inst + ".t", "(IOPATH clk sum (6))"))
        cells.append(("DFF", inst + ".rc", "(IOPATH clk q (6))"))
    for inst in re.findall(r"^  fa (\S+) ", netlist, re.M):
        cells.append(("DFF", inst + ".rc", "(IOPATH clk q (6))"))
    out = [
        "(DELAYFILE",
        '  (SDFVERSION "3.0")',
        '  (DESIGN "mult4")',
        "  (DIVIDER .)",
        "  (TIMESCALE 1ps)",
        "  (CELL (CELLTYPE \"mult4\") (INSTANCE)",
        "    (DELAY (ABSOLUTE",
    ]
    # Input-tree leaves feeding the AND array each get 1ps of wire.
    for m in re.finditer(r"^  SPLIT2 (s[ab]\d_s\d+) \(.a\([^)]*\), \.q0\(([^)]*)\), \.q1\(([^)]*)\)\);",
                         netlist, re.M):
        name, q0, q1 = m.groups()
        for port, net in (("q0", q0), ("q1", q1)):
            sink = re.search(r"^  AND2 (\S+) \(.*\b\w+\(" + re.escape(net) + r"\)(?:,|\))",
                             netlist, re.M) if net else None
            if sink:
                pin = re.search(r"\.(\w+)\(" + re.escape(net) + r"\)", sink.group(0)).group(1)
                out.append(f"      (INTERCONNECT {name}.{port} {sink.group(1)}.{pin} (1))")
    out.append("    ))")
    out.append("  )")
    for celltype, inst, body in cells:
        out.append(f'  (CELL (CELLTYPE "{celltype}") (INSTANCE {inst})')
        out.append(f"    (DELAY (ABSOLUTE {body}))")
        out.append("  )")
    out.append(")")
    return "\n".join(out) + "\n"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parents[1]
                                         / "circuits" / "multiplier4"))
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    netlist, latency = generate()
    (out / "multiplier4.v").write_text(netlist)
    (out / "multiplier4.sdf").write_text(sdf(netlist))
    (out / "multiplier4.stim").write_text(stimulus(latency))
    (out / "expected_hold.txt").write_text(expected_table(latency))
    print(f"latency={latency}")


if __name__ == "__main__":
    main()
