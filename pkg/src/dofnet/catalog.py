"""Named message sets, their published regions and closed-form oracles."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable

from .model import AntennaConfig, DofTuple, MessageIndex, format_fraction
from .region import (
    ALL_MESSAGES,
    DofPolytope,
    LinearInequality,
    build_general_region,
    contains,
    enumerate_vertices,
    max_weighted_sum,
    vertex_denominator_stats,
)

__all__ = [
    "CatalogName",
    "preset_message_set",
    "specialize_named",
    "published_region",
    "closed_form_sumdof_x",
    "closed_form_sumdof_cogx",
    "acs_condition",
    "acs_corner_x",
    "acs_corner_cogx",
    "ConsistencyReport",
    "check_catalog_consistency",
]

W = MessageIndex


class CatalogName(str, Enum):
    X = "X"
    THREE_MESSAGE_X = "three-message-X"
    COGNITIVE_X = "cognitive-X"
    IC = "IC"
    IC_CM = "IC-CM"
    COGNITIVE_IC = "cognitive-IC"
    GENERALIZED_COGNITIVE_IC = "generalized-cognitive-IC"
    BC_PCR = "BC-PCR"
    FULL = "full"

    @classmethod
    def parse(cls, text: "str | CatalogName") -> "CatalogName":
        if isinstance(text, CatalogName):
            return text
        for name in cls:
            if name.value.lower() == str(text).strip().lower():
                return name
        raise ValueError(f"unknown channel name {text!r}; "
                         f"choose from {', '.join(n.value for n in cls)}")


_PRESETS = {
    CatalogName.X: {W.W11, W.W12, W.W21, W.W22},
    CatalogName.THREE_MESSAGE_X: {W.W11, W.W12, W.W21},
    CatalogName.COGNITIVE_X: {W.W01, W.W21, W.W12, W.W22},
    CatalogName.IC: {W.W11, W.W22},
    CatalogName.IC_CM: {W.W11, W.W22, W.W0},
    CatalogName.COGNITIVE_IC: {W.W01, W.W22},
    CatalogName.GENERALIZED_COGNITIVE_IC: {W.W21, W.W22, W.W01},
    CatalogName.BC_PCR: {W.W11, W.W21, W.W01},
    CatalogName.FULL: set(ALL_MESSAGES),
}


def preset_message_set(name: "CatalogName | str") -> frozenset[MessageIndex]:
    return frozenset(_PRESETS[CatalogName.parse(name)])


def specialize_named(cfg: AntennaConfig, name: "CatalogName | str") -> DofPolytope:
    return build_general_region(cfg, preset_message_set(name))


def _ineq(members: Iterable[MessageIndex], rhs: int, label: str) -> LinearInequality:
    return LinearInequality(frozenset(members), rhs, label)


def published_region(cfg: AntennaConfig, name: "CatalogName | str") -> DofPolytope | None:
    """The region exactly as displayed for the named setting, unpruned.

    These are written out independently of the nine-message bound so that
    specializing the general region can be cross-checked against them.
    ``full`` returns ``None`` (it is the general region itself).
    """
    name = CatalogName.parse(name)
    M1, M2, N1, N2 = cfg.as_tuple()
    if name is CatalogName.X:
        rows = [
            _ineq({W.W11, W.W12, W.W21}, max(M1, N1), "rx1-tx1"),
            _ineq({W.W11, W.W12, W.W22}, max(M2, N1), "rx1-tx2"),
            _ineq({W.W21, W.W22, W.W11}, max(M1, N2), "rx2-tx1"),
            _ineq({W.W21, W.W22, W.W12}, max(M2, N2), "rx2-tx2"),
            _ineq({W.W11, W.W12}, N1, "mac-rx1"),
            _ineq({W.W21, W.W22}, N2, "mac-rx2"),
            _ineq({W.W11, W.W21}, M1, "bc-tx1"),
            _ineq({W.W12, W.W22}, M2, "bc-tx2"),
        ]
    elif name is CatalogName.THREE_MESSAGE_X:
        rows = [
            _ineq({W.W11, W.W12, W.W21}, max(M1, N1), "rx1-tx1"),
            _ineq({W.W11, W.W12}, N1, "mac-rx1"),
            _ineq({W.W21, W.W11}, M1, "bc-tx1"),
            _ineq({W.W21, W.W12}, max(M2, N2), "rx2-tx2"),
            _ineq({W.W21}, N2, "mac-rx2"),
            _ineq({W.W12}, M2, "bc-tx2"),
        ]
    elif name is CatalogName.COGNITIVE_X:
        rows = [
            _ineq({W.W01, W.W12, W.W21}, max(M1, N1), "rx1-tx1"),
            _ineq({W.W01, W.W12, W.W22}, max(M2, N1), "rx1-tx2"),
            _ineq({W.W21, W.W22, W.W12}, max(M2, N2), "rx2-tx2"),
            _ineq({W.W01, W.W12}, N1, "mac-rx1"),
            _ineq({W.W21, W.W22}, N2, "mac-rx2"),
            _ineq({W.W21}, M1, "bc-tx1"),
            _ineq({W.W12, W.W22}, M2, "bc-tx2"),
            _ineq({W.W01, W.W21, W.W12, W.W22}, M1 + M2, "coop"),
        ]
    elif name is CatalogName.IC:
        rows = [
            _ineq({W.W11}, min(M1, N1), "single-1"),
            _ineq({W.W22}, min(M2, N2), "single-2"),
            _ineq({W.W11, W.W22}, min(max(M2, N1), max(M1, N2)), "sum"),
        ]
    elif name is CatalogName.IC_CM:
        rows = [
            _ineq({W.W11}, M1, "bc-tx1"),
            _ineq({W.W22}, M2, "bc-tx2"),
            _ineq({W.W0, W.W11}, N1, "mac-rx1"),
            _ineq({W.W0, W.W22}, N2, "mac-rx2"),
            _ineq({W.W0, W.W11, W.W22}, min(M1 + M2, max(M2, N1), max(M1, N2)), "sum"),
        ]
    elif name is CatalogName.COGNITIVE_IC:
        rows = [
            _ineq({W.W01}, N1, "mac-rx1"),
            _ineq({W.W22}, min(M2, N2), "single-2"),
            _ineq({W.W01, W.W22}, min(M1 + M2, max(M2, N1)), "sum"),
        ]
    elif name is CatalogName.GENERALIZED_COGNITIVE_IC:
        rows = [
            _ineq({W.W01}, N1, "mac-rx1"),
            _ineq({W.W21}, M1, "bc-tx1"),
            _ineq({W.W22}, M2, "bc-tx2"),
            _ineq({W.W21, W.W22}, N2, "mac-rx2"),
            _ineq({W.W01, W.W21}, max(M1, N1), "rx1-tx1"),
            _ineq({W.W01, W.W22}, max(M2, N1), "rx1-tx2"),
            _ineq({W.W01, W.W21, W.W22}, M1 + M2, "coop"),
        ]
    elif name is CatalogName.BC_PCR:
        rows = [
            _ineq({W.W21}, N2, "mac-rx2"),
            _ineq({W.W01, W.W11}, N1, "mac-rx1"),
            _ineq({W.W11, W.W21}, M1, "bc-tx1"),
            _ineq({W.W01, W.W11, W.W21}, min(M1 + M2, max(M1, N1)), "sum"),
        ]
    else:
        return None
    return DofPolytope(tuple(rows), preset_message_set(name), cfg)


# ---------------------------------------------------------------------------
# Closed forms for symmetric (M, M, N, N) settings
# ---------------------------------------------------------------------------

def _check_mn(M: int, N: int) -> None:
    if M < 1 or N < 1:
        raise ValueError("antenna counts must be >= 1")


def closed_form_sumdof_x(M: int, N: int) -> Fraction:
    """Maximum sum DoF of the X channel with ``(M, M, N, N)`` antennas."""
    _check_mn(M, N)
    r = Fraction(M, N)
    if r <= Fraction(2, 3):
        return Fraction(2 * M)
    if r <= 1:
        return Fraction(4 * N, 3)
    if r <= Fraction(3, 2):
        return Fraction(4 * M, 3)
    return Fraction(2 * N)


def closed_form_sumdof_cogx(M: int, N: int) -> Fraction:
    """Maximum sum DoF of the cognitive X channel with ``(M, M, N, N)``."""
    _check_mn(M, N)
    r = Fraction(M, N)
    if r <= Fraction(3, 4):
        return Fraction(2 * M)
    if r <= 1:
        return Fraction(3 * N, 2)
    if r <= Fraction(3, 2):
        return M + Fraction(N, 2)
    return Fraction(2 * N)


def acs_condition(cfg: AntennaConfig) -> bool:
    """Equal total antennas on both sides and a single-antenna node."""
    return cfg.M1 + cfg.M2 == cfg.N1 + cfg.N2 and min(cfg.as_tuple()) == 1


def _require_acs(cfg: AntennaConfig) -> None:
    if not acs_condition(cfg):
        raise ValueError(
            f"corner formula needs M1+M2 == N1+N2 and a single-antenna node; got {cfg}")


def acs_corner_x(cfg: AntennaConfig) -> DofTuple:
    """Max-sum corner ``d_rt = min(M_t, N_r) - 2/3`` of the X channel."""
    _require_acs(cfg)
    third = Fraction(2, 3)
    return DofTuple.from_mapping({
        f"{r}{t}": min(cfg.M(t), cfg.N(r)) - third
        for r in (1, 2) for t in (1, 2)
    })


def acs_corner_cogx(cfg: AntennaConfig) -> tuple[DofTuple, DofTuple]:
    """The two max-sum corners of the cognitive X channel (``W01`` shared)."""
    _require_acs(cfg)
    M1, M2, N1, N2 = cfg.as_tuple()
    h = Fraction(1, 2)
    first = DofTuple.from_mapping({
        "01": min(M1, N1) - h,
        "21": min(M1, N2) - h,
        "12": min(M1 + M2, N1) - min(M1, N1),
        "22": min(M2, N2) - h,
    })
    second = DofTuple.from_mapping({
        "01": min(M1 + M2, N1) - h,
        "21": min(M1, N2) - h,
        "12": 0,
        "22": min(M2, N2) - h,
    })
    return first, second


@dataclass
class ConsistencyReport:
    rows: list[dict] = field(default_factory=list)
    discrepancies: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.discrepancies


def check_catalog_consistency(symmetric_max: int = 6, sweep_max: int = 4) -> ConsistencyReport:
    """Compare region computations with every closed form in the catalog.

    Symmetric settings ``(M, M, N, N)`` with ``M, N <= symmetric_max`` are
    checked against both sum-DoF formulas; all configurations with entries
    up to ``sweep_max`` are checked for integral three-message corners and
    for agreement with the published regions.
    """
    report = ConsistencyReport()
    for M, N in itertools.product(range(1, symmetric_max + 1), repeat=2):
        cfg = AntennaConfig(M, M, N, N)
        for name, oracle in ((CatalogName.X, closed_form_sumdof_x),
                             (CatalogName.COGNITIVE_X, closed_form_sumdof_cogx)):
            got, _ = max_weighted_sum(specialize_named(cfg, name))
            want = oracle(M, N)
            ok = got == want
            report.rows.append({"check": f"sumdof {name.value}", "cfg": str(cfg),
                                "region": format_fraction(got),
                                "closed_form": format_fraction(want), "ok": ok})
            if not ok:
                report.discrepancies.append(
                    f"{name.value} {cfg}: region {got} vs closed form {want}")

    for vals in itertools.product(range(1, sweep_max + 1), repeat=4):
        cfg = AntennaConfig(*vals)
        max_den, frac = vertex_denominator_stats(
            specialize_named(cfg, CatalogName.THREE_MESSAGE_X))
        if frac:
            report.discrepancies.append(
                f"three-message-X {cfg}: fractional corner {frac[0].point}")
        for name in CatalogName:
            pub = published_region(cfg, name)
            if pub is None:
                continue
            mine = {v.point for v in enumerate_vertices(specialize_named(cfg, name))}
            theirs = {v.point for v in enumerate_vertices(pub)}
            if mine != theirs:
                report.discrepancies.append(f"{name.value} {cfg}: region mismatch")
        if acs_condition(cfg):
            corner = acs_corner_x(cfg)
            if not contains(specialize_named(cfg, CatalogName.X), corner):
                report.discrepancies.append(f"X {cfg}: corner {corner} outside region")
    report.rows.append({"check": "three-message-X integral / published regions",
                        "cfg": f"1..{sweep_max}", "region": "", "closed_form": "",
                        "ok": report.ok})
    return report
