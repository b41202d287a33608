"""Exact rationals, realizations and prefix/suffix sums.

Every quantity is a :class:`fractions.Fraction`; nothing here ever rounds.
Job indices are 1-based throughout, so ``r[1]`` is the largest job.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import groupby
from math import lcm
from typing import Iterable, NamedTuple, Sequence, Union

from .errors import (
    BadParameters,
    InvalidRealization,
    NegativeSize,
    ParameterOutOfRange,
    SortOrderViolation,
)

Rational = Fraction
RationalLike = Union[int, str, Fraction]

ZERO = Fraction(0)


def to_rational(value: RationalLike) -> Fraction:
    """Convert an int, a Fraction or a ``"num/den"`` string to a Fraction.

    Floats are refused: a binary float rarely denotes the rational a user
    meant, and silently accepting one would break exactness.
    """
    if isinstance(value, bool):
        raise InvalidRealization(f"not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            if "/" in text:
                num, den = text.split("/")
                return Fraction(int(num), int(den))
            return Fraction(int(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidRealization(f"not a rational: {value!r}") from exc
    raise InvalidRealization(f"not a rational: {value!r}")


def format_rational(x: Fraction) -> str:
    """Render as ``"num/den"`` in lowest terms, or ``"num"`` for integers."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def decimal_string(x: Fraction, digits: int = 6) -> str:
    """Decimal rendering truncated (not rounded) to ``digits`` places."""
    x = Fraction(x)
    sign = "-" if x < 0 else ""
    scaled = abs(x) * 10 ** digits
    q = scaled.numerator // scaled.denominator
    whole, frac = divmod(q, 10 ** digits)
    if digits == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{digits}d}"


@dataclass(frozen=True)
class Realization:
    """A nonincreasing sequence of nonnegative job sizes.

    Construct through :func:`validate_realization`; the constructor itself
    does not check anything. Indices past ``n`` behave as zero-size jobs.
    """

    sizes: tuple[Fraction, ...]

    @property
    def n(self) -> int:
        return len(self.sizes)

    @property
    def total(self) -> Fraction:
        return sum(self.sizes, ZERO)

    def __len__(self) -> int:
        return len(self.sizes)

    def __iter__(self):
        return iter(self.sizes)

    def __getitem__(self, j: int) -> Fraction:
        """Size of job ``j`` (1-based); zero beyond the end."""
        if j < 1:
            raise IndexError("job indices start at 1")
        if j > len(self.sizes):
            return ZERO
        return self.sizes[j - 1]

    def scaled(self, c: RationalLike) -> "Realization":
        c = to_rational(c)
        if c <= 0:
            raise BadParameters("scale factor must be positive")
        return Realization(tuple(c * p for p in self.sizes))

    def padded(self, zeros: int) -> "Realization":
        return Realization(self.sizes + (ZERO,) * zeros)

    def common_denominator(self) -> int:
        return lcm(1, *(p.denominator for p in self.sizes))

    def to_integers(self) -> tuple[list[int], int]:
        """Return ``(ints, d)`` with ``sizes[j] == ints[j] / d`` exactly."""
        d = self.common_denominator()
        return [(p * d).numerator for p in self.sizes], d

    def __str__(self) -> str:
        return "<" + ",".join(format_rational(p) for p in self.sizes) + ">"


@dataclass(frozen=True)
class RunLengthRealization:
    """Realization stored as ``(count, size)`` blocks of equal jobs."""

    blocks: tuple[tuple[int, Fraction], ...]

    def __post_init__(self):
        previous = None
        for count, size in self.blocks:
            if not isinstance(count, int) or count < 1:
                raise BadParameters(f"block count must be a positive integer, got {count!r}")
            if size < 0:
                raise BadParameters("block sizes must be nonnegative")
            if previous is not None and size >= previous:
                raise BadParameters("block sizes must be strictly decreasing")
            previous = size

    @classmethod
    def from_realization(cls, r: Realization) -> "RunLengthRealization":
        return cls(tuple((len(list(group)), size) for size, group in groupby(r.sizes)))

    @property
    def n(self) -> int:
        return sum(c for c, _ in self.blocks)

    @property
    def total(self) -> Fraction:
        return sum((c * s for c, s in self.blocks), ZERO)

    def expand(self) -> Realization:
        return Realization(tuple(s for c, s in self.blocks for _ in range(c)))


class PartialSums(NamedTuple):
    P: tuple[Fraction, ...]  # P[0..n]
    Q: tuple[Fraction, ...]  # Q[0] is Q_1, ..., Q[n-1] is Q_n

    @property
    def total(self) -> Fraction:
        return self.P[-1]

    def prefix(self, j: int) -> Fraction:
        """``P_j``; saturates at the total for ``j > n``."""
        if j < 0:
            raise IndexError(j)
        return self.P[min(j, len(self.P) - 1)]

    def suffix(self, j: int) -> Fraction:
        """``Q_j``; zero for ``j > n``."""
        if j < 1:
            raise IndexError(j)
        return self.Q[j - 1] if j <= len(self.Q) else ZERO


def validate_realization(sizes: Iterable[RationalLike]) -> Realization:
    values = tuple(to_rational(s) for s in sizes)
    for j, p in enumerate(values, start=1):
        if p < 0:
            raise NegativeSize(j)
    for j in range(1, len(values)):
        if values[j - 1] < values[j]:
            raise SortOrderViolation(j)
    return Realization(values)


def realization(*sizes: RationalLike) -> Realization:
    """Shorthand: ``realization(4, 1, 1, 1, 1)``."""
    return validate_realization(sizes)


def partial_sums(r: Realization) -> PartialSums:
    P = [ZERO]
    for p in r.sizes:
        P.append(P[-1] + p)
    Q = []
    acc = ZERO
    for p in reversed(r.sizes):
        acc += p
        Q.append(acc)
    Q.reverse()
    return PartialSums(tuple(P), tuple(Q))


class SuffixBound(NamedTuple):
    actual: Fraction
    bound: Fraction
    holds: bool


def progression_suffix_bound(r: Realization, alpha: int, beta: int, gamma: int) -> SuffixBound:
    """Compare the jobs ``alpha*k + beta`` (``k >= gamma``) to their averaging bound.

    The bound is ``(W - P_{alpha*(gamma-1)+beta}) / alpha``; for any sorted
    realization the actual total never exceeds it.
    """
    if alpha < 1 or gamma < 1 or not 0 <= beta < alpha:
        raise ParameterOutOfRange(
            f"need alpha >= 1, 0 <= beta < alpha, gamma >= 1; got {alpha}, {beta}, {gamma}")
    start = alpha * gamma + beta
    actual = sum((r[j] for j in range(start, r.n + 1, alpha)), ZERO)
    sums = partial_sums(r)
    bound = (sums.total - sums.prefix(alpha * (gamma - 1) + beta)) / alpha
    return SuffixBound(actual, bound, actual <= bound)


# JSON file formats

def realization_to_json(r: Realization) -> dict:
    return {"sizes": [format_rational(p) for p in r.sizes]}


def realization_from_json(obj) -> Realization:
    if isinstance(obj, dict) and "blocks" in obj:
        return run_length_from_json(obj).expand()
    if not isinstance(obj, dict) or not isinstance(obj.get("sizes"), list):
        raise InvalidRealization('expected an object with a "sizes" list')
    return validate_realization(obj["sizes"])


def run_length_to_json(r: RunLengthRealization) -> dict:
    return {"blocks": [{"count": c, "size": format_rational(s)} for c, s in r.blocks]}


def run_length_from_json(obj) -> RunLengthRealization:
    try:
        blocks = tuple((int(b["count"]), to_rational(b["size"])) for b in obj["blocks"])
    except (KeyError, TypeError) as exc:
        raise InvalidRealization('expected {"blocks": [{"count": c, "size": s}, ...]}') from exc
    try:
        return RunLengthRealization(blocks)
    except BadParameters as exc:
        raise InvalidRealization(str(exc)) from exc


def load_realization(path: str) -> Realization:
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidRealization(f"{path}: not valid JSON ({exc.msg})") from exc
    return realization_from_json(obj)


def sizes_of(r: Realization | Sequence[RationalLike]) -> Realization:
    """Accept either a Realization or a plain sequence of sizes."""
    if isinstance(r, Realization):
        return r
    return validate_realization(r)
