"""Versioned JSON documents for regions, tuples, reports and channel data.

Rationals are written as ``"p/q"`` strings (``"p"`` for integers), complex
numbers as ``[re, im]`` pairs and matrices row-major.  :func:`decode`
inverts :func:`encode` exactly.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from fractions import Fraction
from typing import Any

import numpy as np

from .catalog import ConsistencyReport
from .model import AntennaConfig, DofTuple, MessageIndex, format_fraction, parse_fraction
from .precoder import (
    Beamformers,
    ChannelSet,
    CollapseReport,
    RankReport,
    SchemePlan,
    StreamAllocation,
    TrialSummary,
)
from .region import AuxAllocation, DofPolytope, EqualityReport, LinearInequality, Vertex

__all__ = ["SCHEMA_VERSION", "encode", "decode", "dumps", "loads"]

SCHEMA_VERSION = 1


def _frac(x) -> str:
    return format_fraction(Fraction(x))


def _msgs(ms) -> list[str]:
    ms = set(ms)
    return [m.label for m in MessageIndex if m in ms]


def _msg_set(labels) -> frozenset:
    return frozenset(MessageIndex.parse(x) for x in labels)


def _cfg(cfg: AntennaConfig | None):
    return None if cfg is None else list(cfg.as_tuple())


def _uncfg(v):
    return None if v is None else AntennaConfig(*v)


def _matrix(a: np.ndarray) -> dict:
    a = np.asarray(a)
    if np.iscomplexobj(a):
        data = [[[float(z.real), float(z.imag)] for z in row] for row in a]
    else:
        data = [[float(x) for x in row] for row in a]
    return {"shape": list(a.shape), "complex": bool(np.iscomplexobj(a)), "data": data}


def _unmatrix(doc: dict) -> np.ndarray:
    shape = tuple(doc["shape"])
    if doc["complex"]:
        flat = [complex(re, im) for row in doc["data"] for re, im in row]
        return np.array(flat, dtype=complex).reshape(shape)
    return np.array([x for row in doc["data"] for x in row], dtype=float).reshape(shape)


def _float(x: float):
    return None if math.isinf(x) else x


def _unfloat(x):
    return math.inf if x is None else x


def _by_label(d: dict) -> dict:
    return {m.label: v for m, v in d.items()}


def _from_label(d: dict, conv=int) -> dict:
    return {MessageIndex.parse(k): conv(v) for k, v in d.items()}


# ---------------------------------------------------------------------------

def _enc_ineq(i: LinearInequality) -> dict:
    return {"label": i.label, "coeffs": {m: 1 for m in _msgs(i.coeffs)}, "rhs": _frac(i.rhs)}


def _dec_ineq(doc: dict) -> LinearInequality:
    coeffs = [k for k, v in doc["coeffs"].items() if int(v) == 1]
    rhs = parse_fraction(doc["rhs"])
    if rhs.denominator != 1:
        raise ValueError(f"inequality rhs must be an integer, got {doc['rhs']}")
    return LinearInequality(_msg_set(coeffs), int(rhs), doc.get("label", ""))


def _enc_tuple(d: DofTuple) -> dict:
    return {m.label: _frac(v) for m, v in d.items()}


def _dec_tuple(doc: dict) -> DofTuple:
    return DofTuple.from_mapping(doc)


def _enc_alloc(a: StreamAllocation) -> dict:
    return {"antennas": _cfg(a.cfg), "Z": _by_label(a.Z), "A": _by_label(a.A), "R": _by_label(a.R)}


def _dec_alloc(doc: dict) -> StreamAllocation:
    return StreamAllocation(_uncfg(doc["antennas"]), _from_label(doc["Z"]),
                            _from_label(doc["A"]), _from_label(doc["R"]))


def _enc_rank(r: RankReport) -> dict:
    return {"measured": r.measured, "target": r.target, "margins": r.margins}


def _dec_rank(doc: dict) -> RankReport:
    return RankReport(dict(doc["measured"]), dict(doc["target"]), dict(doc["margins"]))


_ENCODERS = {
    LinearInequality: ("inequality", _enc_ineq),
    DofTuple: ("dof_tuple", lambda d: {"values": _enc_tuple(d)}),
    AntennaConfig: ("antennas", lambda c: {"values": _cfg(c)}),
    DofPolytope: ("polytope", lambda p: {
        "antennas": _cfg(p.cfg), "messages": _msgs(p.messages),
        "inequalities": [_enc_ineq(i) for i in p.inequalities]}),
    Vertex: ("vertex", lambda v: {
        "point": _enc_tuple(v.point), "active_facets": list(v.active_facets),
        "zero_messages": [m.label for m in v.zero_messages]}),
    AuxAllocation: ("aux_allocation", lambda a: {k: _frac(v) for k, v in a.as_dict().items()}),
    EqualityReport: ("equality_report", lambda r: {
        "antennas": _cfg(r.cfg), "messages": _msgs(r.messages),
        "vertices_checked": r.vertices_checked, "points_checked": r.points_checked,
        "discrepancies": list(r.discrepancies)}),
    ConsistencyReport: ("consistency_report", lambda r: {
        "rows": r.rows, "discrepancies": list(r.discrepancies)}),
    StreamAllocation: ("stream_allocation", _enc_alloc),
    RankReport: ("rank_report", _enc_rank),
    SchemePlan: ("scheme_plan", lambda p: {
        "antennas": _cfg(p.cfg), "target": _enc_tuple(p.target), "T": p.T, "acs": p.acs,
        "stream_multiplier": p.stream_multiplier, "effective_alloc": _enc_alloc(p.effective_alloc)}),
    TrialSummary: ("trial_summary", lambda s: {
        "trials": s.trials, "passes": s.passes, "invalid": s.invalid,
        "failures": dict(sorted(s.failures.items())), "min_margin": _float(s.min_margin),
        "errors": list(s.errors)}),
    ChannelSet: ("channel_set", lambda c: {
        "antennas": _cfg(c.cfg), "form": c.form, "T": c.T,
        **{k: _matrix(getattr(c, k)) for k in ("H11", "H12", "H21", "H22")}}),
    Beamformers: ("beamformers", lambda b: {
        m.label: {kind: _matrix(v) for kind, v in parts.items()}
        for m, parts in b.blocks.items()}),
    CollapseReport: ("collapse_report", lambda r: {
        "antennas": _cfg(r.cfg), "T": r.T, "corner": _enc_tuple(r.corner), "side": r.side,
        "residuals": list(r.residuals),
        "extension": [_enc_rank(x) for x in r.extension],
        "acs": [_enc_rank(x) for x in r.acs]}),
}

_DECODERS = {
    "inequality": _dec_ineq,
    "dof_tuple": lambda d: _dec_tuple(d["values"]),
    "antennas": lambda d: AntennaConfig(*d["values"]),
    "polytope": lambda d: DofPolytope(tuple(_dec_ineq(i) for i in d["inequalities"]),
                                      _msg_set(d["messages"]), _uncfg(d["antennas"])),
    "vertex": lambda d: Vertex(_dec_tuple(d["point"]), tuple(d["active_facets"]),
                               tuple(MessageIndex.parse(m) for m in d["zero_messages"])),
    "aux_allocation": lambda d: AuxAllocation(**{k: parse_fraction(v) for k, v in d.items()}),
    "equality_report": lambda d: EqualityReport(
        _uncfg(d["antennas"]), _msg_set(d["messages"]), d["vertices_checked"],
        d["points_checked"], list(d["discrepancies"])),
    "consistency_report": lambda d: ConsistencyReport(list(d["rows"]), list(d["discrepancies"])),
    "stream_allocation": _dec_alloc,
    "rank_report": _dec_rank,
    "scheme_plan": lambda d: SchemePlan(_uncfg(d["antennas"]), _dec_tuple(d["target"]), d["T"],
                                        d["acs"], _dec_alloc(d["effective_alloc"])),
    "trial_summary": lambda d: TrialSummary(d["trials"], d["passes"], d["invalid"],
                                            Counter(d["failures"]), _unfloat(d["min_margin"]),
                                            list(d["errors"])),
    "channel_set": lambda d: ChannelSet(
        **{k: _unmatrix(d[k]) for k in ("H11", "H12", "H21", "H22")},
        cfg=_uncfg(d["antennas"]), form=d["form"], T=d["T"]),
    "beamformers": lambda d: Beamformers({
        MessageIndex.parse(m): {kind: _unmatrix(v) for kind, v in parts.items()}
        for m, parts in d.items()}),
    "collapse_report": lambda d: CollapseReport(
        _uncfg(d["antennas"]), d["T"], _dec_tuple(d["corner"]), d["side"], list(d["residuals"]),
        [_dec_rank(x) for x in d["extension"]], [_dec_rank(x) for x in d["acs"]]),
}


def encode(obj: Any) -> dict:
    """Wrap ``obj`` in a versioned document; lists encode element-wise."""
    if isinstance(obj, (list, tuple)):
        return {"type": "list", "version": SCHEMA_VERSION, "items": [encode(x) for x in obj]}
    try:
        kind, enc = _ENCODERS[type(obj)]
    except KeyError:
        raise TypeError(f"cannot serialize {type(obj).__name__}") from None
    return {"type": kind, "version": SCHEMA_VERSION, **enc(obj)}


def decode(doc: dict) -> Any:
    version = doc.get("version")
    if version != SCHEMA_VERSION:
        raise ValueError(f"unsupported document version {version!r}")
    kind = doc.get("type")
    if kind == "list":
        return [decode(x) for x in doc["items"]]
    if kind not in _DECODERS:
        raise ValueError(f"unknown document type {kind!r}")
    body = {k: v for k, v in doc.items() if k not in ("type", "version")}
    return _DECODERS[kind](body)


def dumps(obj: Any, **kw) -> str:
    kw.setdefault("indent", 2)
    return json.dumps(encode(obj), **kw)


def loads(text: str) -> Any:
    return decode(json.loads(text))
