"""Exact DoF polytopes of the 2x2 MIMO network with general message sets.

The outer region is described by nine inequalities with 0/1 coefficients
whose right-hand sides are integers built from the antenna counts.  The
achievable region is described through eight auxiliary stream counts
(zero-forced and aligned dimensions); :func:`eq_witness` produces the greedy
assignment for those and :func:`eq_contains` checks the resulting
decodability budgets.  Everything here is exact rational arithmetic.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field, fields
from fractions import Fraction
from typing import Iterable, Mapping

from .model import (
    MESSAGE_ORDER,
    AntennaConfig,
    DofTuple,
    MessageIndex,
    format_fraction,
    parse_fraction,
)
from .polytope import enumerate_vertices_01, rank_exact

__all__ = [
    "ALL_MESSAGES",
    "LinearInequality",
    "DofPolytope",
    "Vertex",
    "AuxAllocation",
    "EqualityReport",
    "DimensionError",
    "general_inequalities",
    "build_general_region",
    "contains",
    "violated",
    "enumerate_vertices",
    "max_weighted_sum",
    "max_along",
    "vertex_denominator_stats",
    "irredundant",
    "same_region",
    "eq_witness",
    "eq_violations",
    "eq_contains",
    "eq_contains_search",
    "regions_equal",
]

W = MessageIndex
ALL_MESSAGES: frozenset[MessageIndex] = frozenset(MessageIndex)


class DimensionError(ValueError):
    """A tuple or weight vector uses messages outside the polytope."""


def _pos(x):
    return x if x > 0 else 0


@dataclass(frozen=True)
class LinearInequality:
    """``sum(d[m] for m in coeffs) <= rhs`` with unit coefficients."""

    coeffs: frozenset[MessageIndex]
    rhs: int
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "coeffs", frozenset(self.coeffs))
        if not self.coeffs:
            raise ValueError("an inequality needs at least one coefficient")
        if self.rhs < 0:
            raise ValueError("right-hand side must be nonnegative")

    def coeff(self, m: MessageIndex) -> int:
        return 1 if m in self.coeffs else 0

    def lhs(self, d: DofTuple) -> Fraction:
        return sum((d[m] for m in self.coeffs), Fraction(0))

    def holds(self, d: DofTuple) -> bool:
        return self.lhs(d) <= self.rhs

    def restricted(self, messages: Iterable[MessageIndex]) -> "LinearInequality | None":
        keep = self.coeffs & frozenset(messages)
        return LinearInequality(keep, self.rhs, self.label) if keep else None

    def dominates(self, other: "LinearInequality") -> bool:
        # d >= 0, so a longer sum with a smaller bound implies the shorter one
        return self.coeffs >= other.coeffs and self.rhs <= other.rhs

    def __str__(self) -> str:
        lhs = " + ".join(m.label for m in MESSAGE_ORDER if m in self.coeffs)
        return f"{lhs} <= {self.rhs}"


def general_inequalities(cfg: AntennaConfig) -> list[LinearInequality]:
    """The nine outer-bound inequalities over all nine messages."""
    M1, M2, N1, N2 = cfg.as_tuple()
    multicast = {W.W1, W.W2, W.W0}
    rx1 = multicast | {W.W01, W.W11, W.W12}
    rx2 = multicast | {W.W02, W.W21, W.W22}
    return [
        LinearInequality(rx1 | {W.W21}, max(M1, N1), "rx1-tx1"),
        LinearInequality(rx1 | {W.W22}, max(M2, N1), "rx1-tx2"),
        LinearInequality(rx2 | {W.W11}, max(M1, N2), "rx2-tx1"),
        LinearInequality(rx2 | {W.W12}, max(M2, N2), "rx2-tx2"),
        LinearInequality(rx1, N1, "mac-rx1"),
        LinearInequality(rx2, N2, "mac-rx2"),
        LinearInequality({W.W1, W.W11, W.W21}, M1, "bc-tx1"),
        LinearInequality({W.W2, W.W12, W.W22}, M2, "bc-tx2"),
        LinearInequality(ALL_MESSAGES, min(M1 + M2, N1 + N2), "coop"),
    ]


@dataclass(frozen=True)
class DofPolytope:
    """``{d >= 0 on messages, d = 0 elsewhere : every inequality holds}``."""

    inequalities: tuple[LinearInequality, ...]
    messages: frozenset[MessageIndex]
    cfg: AntennaConfig | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "inequalities", tuple(self.inequalities))
        object.__setattr__(self, "messages", frozenset(self.messages))
        for ineq in self.inequalities:
            if not ineq.coeffs <= self.messages:
                raise DimensionError(f"{ineq} uses messages outside the active set")
        covered = frozenset().union(*(i.coeffs for i in self.inequalities))
        if covered != self.messages:
            missing = ", ".join(m.label for m in self.active if m not in covered)
            raise ValueError(f"unbounded polytope: no inequality bounds {missing}")

    @property
    def active(self) -> tuple[MessageIndex, ...]:
        return tuple(m for m in MESSAGE_ORDER if m in self.messages)

    @property
    def dim(self) -> int:
        return len(self.messages)

    def rows(self) -> list[tuple[int, ...]]:
        return [tuple(i.coeff(m) for m in self.active) for i in self.inequalities]

    def __len__(self) -> int:
        return len(self.inequalities)

    def __str__(self) -> str:
        return "\n".join(f"[{i.label}] {i}" for i in self.inequalities)


def _prune_dominated(ineqs: list[LinearInequality]) -> list[LinearInequality]:
    kept = []
    for i, a in enumerate(ineqs):
        dominated = False
        for j, b in enumerate(ineqs):
            if i == j or not b.dominates(a):
                continue
            # identical rows: keep the earliest one only
            if a.dominates(b) and j > i:
                continue
            dominated = True
            break
        if not dominated:
            kept.append(a)
    return kept


def build_general_region(cfg: AntennaConfig,
                         msgs: Iterable["MessageIndex | str"] = ALL_MESSAGES,
                         *, prune: bool = True) -> DofPolytope:
    """Outer-bound region restricted to the message set ``msgs``.

    Variables outside ``msgs`` are fixed to zero.  With ``prune`` (the
    default) an inequality is dropped when another one has a superset of its
    coefficients and a bound no larger; full redundancy removal is
    :func:`irredundant`.
    """
    msgs = frozenset(MessageIndex.parse(m) for m in msgs)
    if not msgs:
        raise ValueError("message set must be nonempty")
    ineqs = [r for r in (i.restricted(msgs) for i in general_inequalities(cfg)) if r]
    if prune:
        ineqs = _prune_dominated(ineqs)
    return DofPolytope(tuple(ineqs), msgs, cfg)


def _check_dims(poly: DofPolytope, d: DofTuple) -> None:
    extra = d.support - poly.messages
    if extra:
        names = ", ".join(m.label for m in MESSAGE_ORDER if m in extra)
        raise DimensionError(f"tuple has nonzero entries outside the message set: {names}")


def violated(poly: DofPolytope, d: DofTuple) -> list[LinearInequality]:
    _check_dims(poly, d)
    return [i for i in poly.inequalities if not i.holds(d)]


def contains(poly: DofPolytope, d: DofTuple) -> bool:
    """Exact membership test."""
    return not violated(poly, d)


@dataclass(frozen=True)
class Vertex:
    point: DofTuple
    active_facets: tuple[int, ...]
    zero_messages: tuple[MessageIndex, ...] = ()

    @property
    def denominator(self) -> int:
        return self.point.denominator

    def coords(self, poly: DofPolytope) -> tuple[Fraction, ...]:
        return self.point.restricted(poly.messages)

    def certificate_rank(self, poly: DofPolytope) -> int:
        """Rank of tight facet rows plus tight nonnegativity rows."""
        rows = [poly.rows()[i] for i in self.active_facets]
        rows += [tuple(1 if m is z else 0 for m in poly.active) for z in self.zero_messages]
        return rank_exact(rows)


@functools.lru_cache(maxsize=4096)
def _vertices_cached(poly: DofPolytope) -> tuple[Vertex, ...]:
    active = poly.active
    points = enumerate_vertices_01(poly.rows(), [i.rhs for i in poly.inequalities])
    out = []
    for coords in points:
        d = DofTuple.from_values(active, coords)
        tight = tuple(k for k, i in enumerate(poly.inequalities) if i.lhs(d) == i.rhs)
        zeros = tuple(m for m, v in zip(active, coords) if v == 0)
        out.append(Vertex(d, tight, zeros))
    return tuple(out)


def enumerate_vertices(poly: DofPolytope) -> list[Vertex]:
    """Every vertex of ``poly``, deduplicated, in lexicographic order."""
    return list(_vertices_cached(poly))


def _weights(poly: DofPolytope, w) -> dict[MessageIndex, Fraction]:
    if w is None or w == 1:
        return {m: Fraction(1) for m in poly.active}
    weights = {MessageIndex.parse(k): parse_fraction(v) for k, v in dict(w).items()}
    for m, v in weights.items():
        if v < 0:
            raise ValueError(f"weight for {m.label} is negative")
        if v != 0 and m not in poly.messages:
            raise DimensionError(f"weight on {m.label}, which is not in the message set")
    return weights


def max_weighted_sum(poly: DofPolytope, w: Mapping | None = None) -> tuple[Fraction, Vertex]:
    """Maximum of ``<w, d>`` over the polytope and a vertex attaining it.

    ``w`` defaults to all-ones (sum DoF).  Among maximizing vertices the
    lexicographically smallest point is returned.
    """
    weights = _weights(poly, w)
    best_val, best = None, None
    for v in enumerate_vertices(poly):
        val = sum((c * v.point[m] for m, c in weights.items()), Fraction(0))
        if best_val is None or val > best_val:
            best_val, best = val, v
    return best_val, best


def max_along(poly: DofPolytope, d: DofTuple, m: "MessageIndex | str") -> Fraction | None:
    """Largest value of coordinate ``m`` with the other entries of ``d`` fixed.

    Returns ``None`` when no value of ``m`` makes the tuple feasible.
    """
    m = MessageIndex.parse(m)
    if m not in poly.messages:
        raise DimensionError(f"{m.label} is not in the message set")
    base = d.with_value(m, 0)
    if not contains(poly, base):
        return None
    return min(i.rhs - i.lhs(base) for i in poly.inequalities if m in i.coeffs)


def vertex_denominator_stats(poly: DofPolytope) -> tuple[int, list[Vertex]]:
    verts = enumerate_vertices(poly)
    frac = [v for v in verts if v.denominator > 1]
    return max((v.denominator for v in verts), default=1), frac


def _bounded(ineqs, messages) -> bool:
    return frozenset().union(*(i.coeffs for i in ineqs)) == messages if ineqs else not messages


def irredundant(poly: DofPolytope) -> DofPolytope:
    """Drop every inequality implied by the remaining ones."""
    ineqs = list(poly.inequalities)
    k = 0
    while k < len(ineqs):
        rest = ineqs[:k] + ineqs[k + 1:]
        cand = ineqs[k]
        if rest and _bounded(rest, poly.messages):
            reduced = DofPolytope(tuple(rest), poly.messages, poly.cfg)
            top = max(cand.lhs(v.point) for v in enumerate_vertices(reduced))
            if top <= cand.rhs:
                ineqs = rest
                continue
        k += 1
    return DofPolytope(tuple(ineqs), poly.messages, poly.cfg)


def same_region(p: DofPolytope, q: DofPolytope) -> bool:
    """Set equality of two bounded polytopes via their vertex sets."""
    if p.messages != q.messages:
        return False
    return {v.point for v in enumerate_vertices(p)} == {v.point for v in enumerate_vertices(q)}


# ---------------------------------------------------------------------------
# Achievable region described through auxiliary stream counts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AuxAllocation:
    """Zero-forced and aligned stream counts.

    ``Zrt`` counts streams of ``W_rt`` zero-forced at the other receiver;
    ``Z0r`` counts streams of ``W_0r`` zero-forced at the other receiver.
    ``A1`` is the number of ``(W21, W22)`` stream pairs aligned at R1 and
    ``A2`` the number of ``(W11, W12)`` pairs aligned at R2.
    """

    Z11: Fraction
    Z12: Fraction
    Z21: Fraction
    Z22: Fraction
    A1: Fraction
    A2: Fraction
    Z01: Fraction
    Z02: Fraction

    def as_dict(self) -> dict[str, Fraction]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def __str__(self) -> str:
        return ", ".join(f"{k}={format_fraction(v)}" for k, v in self.as_dict().items())


def _receiver_budget(cfg: AntennaConfig, d: DofTuple, rx: int):
    """Greedy zero-forcing/alignment counts for interference arriving at ``rx``.

    The interfering messages are those wanted at the other receiver.
    """
    other = 3 - rx
    M1, M2 = cfg.M1, cfg.M2
    N = cfg.N(rx)
    da = d[f"{other}1"]
    db = d[f"{other}2"]
    za = min(da, _pos(M1 - N))
    zb = min(db, _pos(M2 - N))
    a = min(da - za, db - zb, _pos(M1 + M2 - N - za - zb))
    z0 = min(d[f"0{other}"], _pos(M1 + M2 - N - za - zb - a))
    return za, zb, a, z0


def eq_witness(cfg: AntennaConfig, d: DofTuple) -> AuxAllocation:
    """Constructive auxiliary assignment: zero-force first, then align."""
    z21, z22, a1, z02 = _receiver_budget(cfg, d, 1)
    z11, z12, a2, z01 = _receiver_budget(cfg, d, 2)
    f = Fraction
    return AuxAllocation(f(z11), f(z12), f(z21), f(z22), f(a1), f(a2), f(z01), f(z02))


def _aux_checks(cfg: AntennaConfig, d: DofTuple, x: AuxAllocation):
    M1, M2, N1, N2 = cfg.as_tuple()
    total = d.total
    yield "rx1 dimension", total - x.Z21 - x.Z22 - x.A1 - x.Z02 <= N1
    yield "rx2 dimension", total - x.Z11 - x.Z12 - x.A2 - x.Z01 <= N2
    yield "tx1 streams", d["1"] + d["11"] + d["21"] <= M1
    yield "tx2 streams", d["2"] + d["12"] + d["22"] <= M2
    yield "joint streams", total <= min(M1 + M2, N1 + N2)
    yield "nullspace rx1", x.Z21 + x.Z22 + x.A1 + x.Z02 <= _pos(M1 + M2 - N1)
    yield "zf d21 at rx1", x.Z21 <= _pos(M1 - N1)
    yield "zf d22 at rx1", x.Z22 <= _pos(M2 - N1)
    yield "split d21", x.Z21 + x.A1 <= d["21"]
    yield "split d22", x.Z22 + x.A1 <= d["22"]
    yield "split d02", x.Z02 <= d["02"]
    yield "nullspace rx2", x.Z11 + x.Z12 + x.A2 + x.Z01 <= _pos(M1 + M2 - N2)
    yield "zf d11 at rx2", x.Z11 <= _pos(M1 - N2)
    yield "zf d12 at rx2", x.Z12 <= _pos(M2 - N2)
    yield "split d11", x.Z11 + x.A2 <= d["11"]
    yield "split d12", x.Z12 + x.A2 <= d["12"]
    yield "split d01", x.Z01 <= d["01"]


EQ_DECODING = ("rx1 dimension", "rx2 dimension", "tx1 streams", "tx2 streams", "joint streams")


def eq_violations(cfg: AntennaConfig, d: DofTuple,
                  aux: AuxAllocation | None = None) -> list[str]:
    """Names of the achievable-region constraints that fail for ``(d, aux)``."""
    aux = eq_witness(cfg, d) if aux is None else aux
    return [name for name, ok in _aux_checks(cfg, d, aux) if not ok]


def eq_contains(cfg: AntennaConfig, d: DofTuple) -> bool:
    """Membership in the achievable region via the greedy witness."""
    return not eq_violations(cfg, d)


def _max_aux_sum(cfg: AntennaConfig, d: DofTuple, rx: int) -> Fraction:
    # Variables (Za, Zb, A, Z0) for the interference arriving at rx.
    other = 3 - rx
    M1, M2 = cfg.M1, cfg.M2
    N = cfg.N(rx)
    bounds = [_pos(M1 + M2 - N), _pos(M1 - N), _pos(M2 - N),
              d[f"{other}1"], d[f"{other}2"], d[f"0{other}"]]
    rows = [(1, 1, 1, 1), (1, 0, 0, 0), (0, 1, 0, 0), (1, 0, 1, 0), (0, 1, 1, 0), (0, 0, 0, 1)]
    scale = math.lcm(*(Fraction(b).denominator for b in bounds))
    pts = enumerate_vertices_01(rows, [int(b * scale) for b in bounds])
    return max(sum(p) for p in pts) / scale


def eq_contains_search(cfg: AntennaConfig, d: DofTuple) -> bool:
    """Slow exact membership oracle that searches over all auxiliary values.

    The two receivers' auxiliary variables are decoupled, so the region
    test reduces to maximizing each receiver's zero-forced plus aligned
    count over its own small polytope, whose vertices are enumerated.
    """
    M1, M2, N1, N2 = cfg.as_tuple()
    total = d.total
    if d["1"] + d["11"] + d["21"] > M1 or d["2"] + d["12"] + d["22"] > M2:
        return False
    if total > min(M1 + M2, N1 + N2):
        return False
    return (total - _max_aux_sum(cfg, d, 1) <= N1
            and total - _max_aux_sum(cfg, d, 2) <= N2)


@dataclass
class EqualityReport:
    cfg: AntennaConfig
    messages: frozenset[MessageIndex]
    vertices_checked: int = 0
    points_checked: int = 0
    discrepancies: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.discrepancies


def regions_equal(cfg: AntennaConfig,
                  msgs: Iterable["MessageIndex | str"] = ALL_MESSAGES,
                  *, search: bool = False) -> EqualityReport:
    """Compare the outer region with the achievable region on ``msgs``.

    Every vertex must be achievable, and every vertex pushed by 1/2 along
    each active axis must be rejected by both descriptions or by neither.
    With ``search`` the slow oracle is run alongside the greedy witness.
    """
    poly = build_general_region(cfg, msgs)
    report = EqualityReport(cfg, poly.messages)
    half = Fraction(1, 2)

    def check(point: DofTuple, expect: bool | None):
        in_d = contains(poly, point)
        in_eq = eq_contains(cfg, point)
        report.points_checked += 1
        if expect is not None and in_d != expect:
            report.discrepancies.append(f"{point}: outer={in_d}, expected {expect}")
        if in_d != in_eq:
            report.discrepancies.append(f"{point}: outer={in_d}, achievable={in_eq}")
        if search and eq_contains_search(cfg, point) != in_eq:
            report.discrepancies.append(f"{point}: witness and search disagree")

    for v in enumerate_vertices(poly):
        report.vertices_checked += 1
        check(v.point, True)
        for m in poly.active:
            check(v.point.with_value(m, v.point[m] + half), None)
    return report
