"""Bit-level conventions shared by every module.

A length-n coordinate string (x_1, ..., x_n) is packed into an int with
coordinate x_i in bit i-1 (LSB holds x_1).  Rendered strings always put
x_1 leftmost, so "10100" parses to 0b00101 = 5.
"""
from __future__ import annotations


def bits_to_string(bits: int, n: int) -> str:
    return "".join("1" if (bits >> i) & 1 else "0" for i in range(n))


def string_to_bits(s: str) -> int:
    out = 0
    for i, ch in enumerate(s):
        if ch == "1":
            out |= 1 << i
        elif ch != "0":
            raise ValueError(f"not a bitstring: {s!r}")
    return out


def popcount(x: int) -> int:
    return x.bit_count()
