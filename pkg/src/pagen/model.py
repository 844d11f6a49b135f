"""Polynomial-model instances and the attachment constants they induce.

A model is a weight table over monomial keys ``(k, l)``: ``k`` slots pairs
copy both ends of a uniformly chosen edge, ``l - 2k`` slots take the target
end of a uniformly chosen edge, and the remaining ``m - l`` slots are uniform
over all vertices including the newcomer.
"""
from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, TextIO

import numpy as np

from .errors import TableError

NORMALIZATION_TOL = 1e-12
NOT_POWER_LAW = "not power-law (A=0)"


@dataclass(frozen=True)
class WeightTable:
    """Mixture weights ``alpha[k, l]`` for a fixed out-degree ``m``.

    Zero-weight entries are kept (so that expansions round-trip) but never
    sampled: :attr:`support` and :attr:`cumulative` only cover positive weights.
    """

    m: int
    entries: tuple[tuple[int, int, float], ...]
    support: tuple[tuple[int, int], ...] = field(init=False, repr=False, compare=False)
    cumulative: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        entries = tuple((int(k), int(l), float(w)) for k, l, w in self.entries)
        object.__setattr__(self, "entries", entries)
        positive = [(k, l, w) for k, l, w in entries if w > 0]
        object.__setattr__(self, "support", tuple((k, l) for k, l, _ in positive))
        cum = np.cumsum([w for _, _, w in positive]) if positive else np.zeros(0)
        object.__setattr__(self, "cumulative", np.ascontiguousarray(cum, dtype=np.float64))

    @classmethod
    def from_mapping(cls, m: int, weights: dict) -> "WeightTable":
        return validate_table(cls(m, tuple((k, l, w) for (k, l), w in weights.items())))

    def as_dict(self) -> dict[tuple[int, int], float]:
        return {(k, l): w for k, l, w in self.entries}

    def kernel_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(k, l, cumulative)`` arrays over the positive-weight support."""
        ks = np.array([k for k, _ in self.support], dtype=np.int64)
        ls = np.array([l for _, l in self.support], dtype=np.int64)
        return ks, ls, self.cumulative

    def describe(self) -> list[dict]:
        return [{"k": k, "l": l, "weight": w} for k, l, w in self.entries]


def validate_table(t: WeightTable) -> WeightTable:
    """Return ``t`` if it is a valid table, else raise :class:`TableError`.

    Weights within the normalization tolerance of 1 are rescaled to sum to 1
    exactly (text round trips lose the last bits).
    """
    m = t.m
    if not isinstance(m, int) or m < 1:
        raise TableError(f"m must be a positive integer, got {m!r}")
    if not t.entries:
        raise TableError("weight table is empty")
    seen = set()
    total = 0.0
    for k, l, w in t.entries:
        if (k, l) in seen:
            raise TableError(f"duplicate key (k={k}, l={l})")
        seen.add((k, l))
        if not 0 <= k <= m // 2:
            raise TableError(f"k={k} outside 0..floor(m/2)={m // 2}")
        if not 2 * k <= l <= m:
            raise TableError(f"l={l} outside 2k..m = {2 * k}..{m}")
        if not (w >= 0 and math.isfinite(w)):
            raise TableError(f"weight for (k={k}, l={l}) must be a finite non-negative number, got {w}")
        total += w
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise TableError(f"weights sum to {total!r}, expected 1")
    if total != 1.0:
        t = WeightTable(m, tuple((k, l, w / total) for k, l, w in t.entries))
    return t


@dataclass(frozen=True)
class ThreeParamSpec:
    """Product-form model over ``p = m/2`` independent slot pairs.

    Each pair is, independently, doubly target-end preferential (``alpha``),
    both ends of a uniform edge (``beta``), or doubly uniform (``delta``).
    """

    m: int
    alpha: float
    beta: float
    delta: float | None = None

    def __post_init__(self):
        if self.delta is None:
            object.__setattr__(self, "delta", 1.0 - self.alpha - self.beta)
        if self.m < 2 or self.m % 2:
            raise TableError(f"the three-parameter model needs an even m >= 2, got {self.m}")
        for name in ("alpha", "beta", "delta"):
            v = getattr(self, name)
            if v < -NORMALIZATION_TOL:
                raise TableError(f"{name} must be non-negative, got {v}")
        if abs(self.alpha + self.beta + self.delta - 1.0) > NORMALIZATION_TOL:
            raise TableError("alpha + beta + delta must equal 1")
        if self.delta < 0:
            object.__setattr__(self, "delta", 0.0)


def three_param_to_table(spec: ThreeParamSpec) -> WeightTable:
    """Expand the product of ``p`` pair factors into monomial weights.

    With ``a`` alpha-pairs and ``b`` beta-pairs the key is ``(k, l) = (b, 2(a+b))``
    and the weight is the multinomial ``p!/(a! b! c!) alpha^a beta^b delta^c``.
    """
    p = spec.m // 2
    entries = []
    for a in range(p + 1):
        for b in range(p + 1 - a):
            c = p - a - b
            coef = math.factorial(p) // (math.factorial(a) * math.factorial(b) * math.factorial(c))
            w = coef * spec.alpha**a * spec.beta**b * spec.delta**c
            entries.append((b, 2 * (a + b), w))
    return validate_table(WeightTable(spec.m, tuple(entries)))


class Preset(str, enum.Enum):
    LCD_APPROX = "lcd-approx"
    UNIFORM = "uniform"


def preset(name: str | Preset, m: int) -> WeightTable:
    """Built-in tables.

    ``lcd-approx`` expands ``prod_y (d_in + m) / (2mn)``: every slot is
    independently a target end or uniform with probability 1/2, giving
    ``alpha[0, l] = C(m, l) / 2^m`` and ``A = 1/2, B = 0``.
    """
    if m < 1:
        raise TableError(f"m must be >= 1, got {m}")
    try:
        name = Preset(name)
    except ValueError:
        raise TableError(f"unknown preset {name!r}; choose from {[p.value for p in Preset]}") from None
    if name is Preset.UNIFORM:
        return WeightTable(m, ((0, 0, 1.0),))
    return validate_table(WeightTable(m, tuple((0, l, math.comb(m, l) / 2**m) for l in range(m + 1))))


class Regime(str, enum.Enum):
    SUBCRITICAL = "subcritical"
    CRITICAL = "critical"
    SUPERCRITICAL = "supercritical"


def regime_of(A: float, tol: float = 1e-12) -> Regime:
    if abs(2 * A - 1) <= tol:
        return Regime.CRITICAL
    return Regime.SUBCRITICAL if 2 * A < 1 else Regime.SUPERCRITICAL


def p2_base_coefficient(m: int, A: float, B: float) -> float:
    """``2m(A+B) + m(m-1)/2``: expected growth of the path-of-length-two count per step."""
    return 2 * m * (A + B) + m * (m - 1) / 2


@dataclass(frozen=True)
class ModelConstants:
    m: int
    A: float
    B: float
    D: float
    gamma: float | None
    regime: Regime
    clustering_limit: float | None
    p2_coefficient: float | None

    @property
    def gamma_label(self) -> float | str:
        return NOT_POWER_LAW if self.gamma is None else self.gamma

    def as_json(self) -> dict:
        return {
            "m": self.m,
            "A": self.A,
            "B": self.B,
            "D": self.D,
            "gamma": self.gamma_label,
            "regime": self.regime.value,
            "clusteringLimit": self.clustering_limit,
            "p2Coefficient": self.p2_coefficient,
        }


def model_constants(t: WeightTable) -> ModelConstants:
    """Attachment slope ``A``, offset ``B = m - 2mA``, triangle rate ``D`` and derived values.

    ``p2_coefficient`` multiplies ``n`` (subcritical) or ``n ln n`` (critical);
    it is None in the supercritical regime where only the growth class is known.
    """
    m = t.m
    A = sum(w * (l - k) for k, l, w in t.entries) / m
    D = sum(w * k for k, _, w in t.entries)
    B = m - 2 * m * A
    regime = regime_of(A)
    gamma = 1 + 1 / A if A > 0 else None
    base = p2_base_coefficient(m, A, B)
    if regime is Regime.SUBCRITICAL:
        p2c = base / (1 - 2 * A)
        limit = 3 * (1 - 2 * A) * D / base
    elif regime is Regime.CRITICAL:
        p2c, limit = base, None
    else:
        p2c, limit = None, None
    return ModelConstants(m, A, B, D, gamma, regime, limit, p2c)


def buckley_osthus_constants(m: int, beta: float) -> tuple[float, float]:
    """``(A, B)`` of the Buckley-Osthus process with initial attractiveness ``beta``."""
    return 1 / (2 + beta), m * beta / (2 + beta)


# -- CSV weight tables ----------------------------------------------------------------


def read_table_csv(source: TextIO, m: int) -> WeightTable:
    """Parse a ``k,l,weight`` CSV (header required)."""
    reader = csv.DictReader(line for line in source if not line.startswith("#"))
    if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != ["k", "l", "weight"]:
        raise TableError("weight table CSV must have header 'k,l,weight'")
    entries = []
    for row in reader:
        try:
            entries.append((int(row["k"]), int(row["l"]), float(row["weight"])))
        except (TypeError, ValueError) as exc:
            raise TableError(f"bad weight-table row {row}: {exc}") from None
    return validate_table(WeightTable(m, tuple(entries)))


def write_table_csv(t: WeightTable, sink: TextIO) -> None:
    sink.write("k,l,weight\n")
    for k, l, w in t.entries:
        sink.write(f"{k},{l},{w!r}\n")


def table_from_rows(m: int, rows: Iterable[tuple[int, int, float]]) -> WeightTable:
    return validate_table(WeightTable(m, tuple(rows)))


def table_csv_string(t: WeightTable) -> str:
    buf = io.StringIO()
    write_table_csv(t, buf)
    return buf.getvalue()
