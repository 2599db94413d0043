#!/usr/bin/env python3
"""Writes the small combinational benchmark circuits as ASCII AIGER files.

Run from any directory; files land next to this script.  The output is
deterministic, so regenerating leaves the checked-in files unchanged.
"""

from __future__ import annotations

import argparse
from pathlib import Path


class Aig:
    def __init__(self, num_inputs: int) -> None:
        self.num_inputs = num_inputs
        self.ands: list[tuple[int, int, int]] = []
        self.outputs: list[int] = []

    def input(self, i: int) -> int:
        return 2 * (i + 1)

    def and_(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if a == 1:
            return b
        if b == 1:
            return a
        lhs = 2 * (self.num_inputs + len(self.ands) + 1)
        self.ands.append((lhs, max(a, b), min(a, b)))
        return lhs

    def or_(self, a: int, b: int) -> int:
        return self.and_(a ^ 1, b ^ 1) ^ 1

    def xor(self, a: int, b: int) -> int:
        return self.or_(self.and_(a, b ^ 1), self.and_(a ^ 1, b))

    def mux(self, s: int, t: int, e: int) -> int:
        return self.or_(self.and_(s, t), self.and_(s ^ 1, e))

    def maj(self, a: int, b: int, c: int) -> int:
        return self.or_(self.and_(a, b), self.and_(c, self.or_(a, b)))

    def text(self) -> str:
        m = self.num_inputs + len(self.ands)
        lines = [f"aag {m} {self.num_inputs} 0 {len(self.outputs)} {len(self.ands)}"]
        lines += [str(self.input(i)) for i in range(self.num_inputs)]
        lines += [str(o) for o in self.outputs]
        lines += [f"{l} {a} {b}" for l, a, b in self.ands]
        return "\n".join(lines) + "\n"


def adder(n: int) -> Aig:
    g = Aig(2 * n + 1)
    a = [g.input(i) for i in range(n)]
    b = [g.input(n + i) for i in range(n)]
    c = g.input(2 * n)
    for i in range(n):
        g.outputs.append(g.xor(g.xor(a[i], b[i]), c))
        c = g.maj(a[i], b[i], c)
    g.outputs.append(c)
    return g


def multiplier(n: int) -> Aig:
    g = Aig(2 * n)
    a = [g.input(i) for i in range(n)]
    b = [g.input(n + i) for i in range(n)]
    acc = [0] * (2 * n)
    for j in range(n):
        carry = 0
        for i in range(n):
            p = g.and_(a[i], b[j])
            s = g.xor(g.xor(acc[i + j], p), carry)
            carry = g.maj(acc[i + j], p, carry)
            acc[i + j] = s
        acc[j + n] = carry
    g.outputs = acc
    return g


def comparator(n: int) -> Aig:
    """a < b, a == b"""
    g = Aig(2 * n)
    lt, eq = 0, 1
    for i in range(n):
        a, b = g.input(i), g.input(n + i)
        bit_lt = g.and_(a ^ 1, b)
        bit_eq = g.xor(a, b) ^ 1
        lt = g.or_(bit_lt, g.and_(bit_eq, lt))
        eq = g.and_(eq, bit_eq)
    g.outputs = [lt, eq]
    return g


def parity(n: int) -> Aig:
    g = Aig(n)
    level = [g.input(i) for i in range(n)]
    while len(level) > 1:
        nxt = [g.xor(level[i], level[i + 1]) for i in range(0, len(level) - 1, 2)]
        if len(level) % 2:
            nxt.append(level[-1])
        level = nxt
    g.outputs = level
    return g


def priority(n: int) -> Aig:
    """index of the lowest set request bit, plus a valid flag"""
    g = Aig(n)
    width = max(1, (n - 1).bit_length())
    outs = [0] * width
    none_below = 1
    for i in range(n):
        grant = g.and_(g.input(i), none_below)
        for k in range(width):
            if (i >> k) & 1:
                outs[k] = g.or_(outs[k], grant)
        none_below = g.and_(none_below, g.input(i) ^ 1)
    g.outputs = outs + [none_below ^ 1]
    return g


def mux_tree(sel: int) -> Aig:
    data = 1 << sel
    g = Aig(data + sel)
    level = [g.input(i) for i in range(data)]
    for s in range(sel):
        sig = g.input(data + s)
        level = [g.mux(sig, level[i + 1], level[i]) for i in range(0, len(level), 2)]
    g.outputs = level
    return g


def decoder(n: int) -> Aig:
    g = Aig(n)
    for v in range(1 << n):
        term = 1
        for i in range(n):
            term = g.and_(term, g.input(i) ^ (0 if (v >> i) & 1 else 1))
        g.outputs.append(term)
    return g


def popcount(n: int) -> Aig:
    g = Aig(n)
    bits = [[g.input(i) for i in range(n)]]
    width = n.bit_length()
    outs = []
    for w in range(width):
        col = bits[w] if w < len(bits) else []
        while len(bits) <= w + 1:
            bits.append([])
        while len(col) > 2:
            a, b, c = col.pop(), col.pop(), col.pop()
            col.insert(0, g.xor(g.xor(a, b), c))
            bits[w + 1].append(g.maj(a, b, c))
        if len(col) == 2:
            a, b = col
            col = [g.xor(a, b)]
            bits[w + 1].append(g.and_(a, b))
        outs.append(col[0] if col else 0)
    g.outputs = outs
    return g


CIRCUITS = {
    "adder4": lambda: adder(4),
    "adder6": lambda: adder(6),
    "mult3": lambda: multiplier(3),
    "mult4": lambda: multiplier(4),
    "cmp6": lambda: comparator(6),
    "parity12": lambda: parity(12),
    "priority8": lambda: priority(8),
    "mux8": lambda: mux_tree(3),
    "dec4": lambda: decoder(4),
    "popcount9": lambda: popcount(9),
}


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path(__file__).resolve().parent)
    args = parser.parse_args()
    for name, build in CIRCUITS.items():
        (args.out / f"{name}.aag").write_text(build().text())


if __name__ == "__main__":
    main()
