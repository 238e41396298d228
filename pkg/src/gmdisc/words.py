"""Freely reduced words over a two letter alphabet.

Lower case letters are generators and the upper case letter is the inverse,
so ``"aB"`` means a * b^-1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from gmdisc.moebius import MoebiusElement, compose, inverse


def _inv_letter(ch: str) -> str:
    return ch.swapcase()


def reduce_word(s: str) -> str:
    out: list[str] = []
    for ch in s:
        if out and out[-1] == _inv_letter(ch):
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


@dataclass(frozen=True)
class Word:
    letters: str = ""

    def __post_init__(self):
        object.__setattr__(self, "letters", reduce_word(self.letters))

    def __str__(self) -> str:
        return self.letters or "1"

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word("".join(_inv_letter(ch) for ch in reversed(self.letters)))

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inverse() ** (-n)
        return Word(self.letters * n)

    def substitute(self, mapping: Mapping[str, "Word"]) -> "Word":
        """Replace each generator letter by a word (inverses follow)."""
        parts = []
        for ch in self.letters:
            if ch.islower():
                parts.append(mapping[ch].letters)
            else:
                parts.append(mapping[ch.lower()].inverse().letters)
        return Word("".join(parts))

    def evaluate(self, gens: Mapping[str, MoebiusElement]) -> MoebiusElement:
        m = MoebiusElement.identity()
        inv = {k: inverse(v) for k, v in gens.items()}
        for ch in self.letters:
            g = gens[ch] if ch.islower() else inv[ch.lower()]
            m = compose(m, g)
        return m

    def exact_length(self, gens: Mapping[str, MoebiusElement], tol: float = 0.0) -> float | None:
        """Translation length from exact rational arithmetic on the generator entries.

        None unless |trace| exceeds 2 + tol.  Long products of large matrices
        lose many digits in floating point; this does not.
        """
        tr, det = _integer_trace_det(self.letters, gens)
        if det <= 0:
            raise ValueError("generators must have positive determinant")
        disc = tr * tr - 4 * det
        if disc <= 0:
            return None
        t = math.sqrt(float(Fraction(tr * tr, det)))
        # t - 2 = (t^2 - 4) / (t + 2), with t^2 - 4 formed exactly
        excess = float(Fraction(disc, det)) / (t + 2.0)
        if excess <= tol:
            return None
        return 4.0 * math.asinh(math.sqrt(excess / 4.0))

    def is_cyclically_reduced(self) -> bool:
        s = self.letters
        return len(s) < 2 or s[0] != _inv_letter(s[-1])


def _integer_matrix(x: MoebiusElement) -> tuple[int, int, int, int]:
    # floats are dyadic, so one power of two clears every denominator
    ratios = [v.as_integer_ratio() for v in (x.a, x.b, x.c, x.d)]
    den = max(d for _, d in ratios)
    return tuple(n * (den // d) for n, d in ratios)


def _integer_trace_det(letters: str, gens: Mapping[str, MoebiusElement]) -> tuple[int, int]:
    """Trace and determinant of a positive multiple of the word's matrix.

    |trace| / sqrt(det) does not see the multiple, so integer matrices and
    adjugates in place of inverses are enough.
    """
    mats = {}
    for k, x in gens.items():
        a, b, c, d = _integer_matrix(x)
        mats[k] = (a, b, c, d)
        mats[k.upper()] = (d, -b, -c, a)
    a, b, c, d = 1, 0, 0, 1
    for ch in letters:
        e, f, g, h = mats[ch]
        a, b, c, d = a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h
    return a + d, a * d - b * c


def gen(ch: str) -> Word:
    return Word(ch)
