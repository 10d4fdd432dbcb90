"""Linear precoding on sampled generic channels and numerical rank checks.

Streams of each message are split into zero-forced (Z), aligned (A) and
randomly beamformed (R) parts.  Zero-forcing uses the null space of the
unintended receiver's channel; aligned pairs share a direction in the null
space of the concatenated channel at the unintended receiver.  Fractional
tuples are handled by symbol extension (block-diagonal ``I_T (x) H``) and,
where needed, by asymmetric complex signaling, i.e. working on the real
representation of the extended channel.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .catalog import acs_condition, acs_corner_x
from .model import AntennaConfig, DofTuple, MessageIndex
from .region import (
    EQ_DECODING,
    AuxAllocation,
    build_general_region,
    eq_violations,
    eq_witness,
    violated,
)

__all__ = [
    "ChannelSet",
    "StreamAllocation",
    "Beamformers",
    "RankReport",
    "SchemePlan",
    "TrialSummary",
    "CollapseReport",
    "BudgetError",
    "RegionError",
    "RTOL",
    "trial_seeds",
    "sample_channels",
    "null_space_basis",
    "numerical_rank",
    "allocate_streams",
    "build_beamformers",
    "extend_channels",
    "realify_matrix",
    "realify_vector",
    "acs_transform",
    "assemble_received",
    "verify_ranks",
    "detect_acs_required",
    "plan_scheme",
    "run_trial",
    "monte_carlo_verify",
    "demonstrate_alignment_collapse",
]

W = MessageIndex
RTOL = 1e-8
PRIVATE = (W.W11, W.W21, W.W12, W.W22)
COGNITIVE = (W.W01, W.W02)
MULTICAST = (W.W1, W.W2, W.W0)
CHANNEL_KEYS = ("H11", "H12", "H21", "H22")


class BudgetError(ValueError):
    """A stream allocation asks for more null-space dimensions than exist."""

    def __init__(self, constraint: str, detail: str = ""):
        self.constraint = constraint
        super().__init__(f"allocation violates '{constraint}'" + (f": {detail}" if detail else ""))


class RegionError(ValueError):
    """A DoF tuple lies outside the outer region."""

    def __init__(self, labels: list[str], d: DofTuple):
        self.labels = labels
        super().__init__(f"{d} is outside the DoF region; violated: {', '.join(labels)}")


def trial_seeds(master_seed: int, k: int, n: int = 2) -> list[int]:
    """Independent 64-bit seeds for trial ``k`` of a run."""
    state = np.random.SeedSequence([int(master_seed) % 2**64, int(k)]).generate_state(n, np.uint64)
    return [int(s) for s in state]


# ---------------------------------------------------------------------------
# Channels
# ---------------------------------------------------------------------------

@dataclass
class ChannelSet:
    """The four channel matrices ``H_rt`` (``N_r x M_t``) of one realization.

    ``form`` is ``"base"``, ``"extended"`` or ``"acs_extended"``; ``T`` is the
    extension length (1 for base).  ``cfg`` is always the physical antenna
    configuration; :attr:`eff_cfg` gives the matrix dimensions.
    """

    H11: np.ndarray
    H12: np.ndarray
    H21: np.ndarray
    H22: np.ndarray
    cfg: AntennaConfig
    form: str = "base"
    T: int = 1

    def __post_init__(self):
        if self.form not in ("base", "extended", "acs_extended"):
            raise ValueError(f"unknown channel form {self.form!r}")
        eff = self.eff_cfg
        for r in (1, 2):
            for t in (1, 2):
                shape = self.H(r, t).shape
                if shape != (eff.N(r), eff.M(t)):
                    raise ValueError(f"H{r}{t} has shape {shape}, expected {(eff.N(r), eff.M(t))}")

    def H(self, r: int, t: int) -> np.ndarray:
        return getattr(self, f"H{r}{t}")

    def concat(self, r: int) -> np.ndarray:
        """``[H_r1 H_r2]``, the channel from both transmitters to receiver r."""
        return np.hstack([self.H(r, 1), self.H(r, 2)])

    @property
    def multiplier(self) -> int:
        return self.T * (2 if self.form == "acs_extended" else 1)

    @property
    def eff_cfg(self) -> AntennaConfig:
        return self.cfg.scaled(self.multiplier)

    @property
    def is_real(self) -> bool:
        return self.form == "acs_extended"


def sample_channels(cfg: AntennaConfig, seed: int) -> ChannelSet:
    """i.i.d. unit-variance circularly-symmetric complex Gaussian channels."""
    rng = np.random.default_rng(seed)
    mats = {}
    for key in CHANNEL_KEYS:
        r, t = int(key[1]), int(key[2])
        shape = (cfg.N(r), cfg.M(t))
        mats[key] = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)
    return ChannelSet(**mats, cfg=cfg)


def numerical_rank(A: np.ndarray, rtol: float = RTOL, scale: float = 0.0) -> int:
    """Count singular values above ``rtol * max(sigma_max, scale)``.

    ``scale`` lets a matrix that is zero up to round-off (e.g. a perfectly
    zero-forced interference block) come out as rank 0.
    """
    if A.size == 0:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    ref = max(s[0], scale)
    if ref == 0:
        return 0
    return int(np.sum(s > rtol * ref))


def null_space_basis(H: np.ndarray, rtol: float = RTOL) -> np.ndarray:
    """Orthonormal basis of the right null space from the trailing right-singular vectors.

    Returns an ``m x 0`` matrix when ``H`` has full column rank.
    """
    n, m = H.shape
    if m == 0:
        return np.zeros((0, 0), dtype=H.dtype)
    if n == 0:
        return np.eye(m, dtype=H.dtype)
    _, s, vh = np.linalg.svd(H)
    rank = int(np.sum(s > rtol * s[0])) if s.size and s[0] > 0 else 0
    return vh[rank:].conj().T


def extend_channels(ch: ChannelSet, T: int) -> ChannelSet:
    """Replace every ``H`` with ``I_T (x) H``."""
    if T < 1:
        raise ValueError("extension length must be >= 1")
    if ch.form != "base":
        raise ValueError(f"can only extend base channels, got {ch.form}")
    eye = np.eye(T)
    mats = {k: np.kron(eye, getattr(ch, k)) for k in CHANNEL_KEYS}
    return ChannelSet(**mats, cfg=ch.cfg, form="extended", T=T)


def realify_matrix(H: np.ndarray) -> np.ndarray:
    """``[[Re H, -Im H], [Im H, Re H]]``."""
    re, im = np.real(H), np.imag(H)
    return np.block([[re, -im], [im, re]])


def realify_vector(x: np.ndarray) -> np.ndarray:
    """Stack real over imaginary parts, matching :func:`realify_matrix`."""
    return np.concatenate([np.real(x), np.imag(x)], axis=0)


def acs_transform(ch: ChannelSet) -> ChannelSet:
    """Real representation of the channels, applied per extension block."""
    if ch.form == "acs_extended":
        raise ValueError("channels are already in real (ACS) form")
    eye = np.eye(ch.T)
    mats = {}
    for key in CHANNEL_KEYS:
        r, t = int(key[1]), int(key[2])
        base = ch.H(r, t)[: ch.cfg.N(r), : ch.cfg.M(t)]
        mats[key] = np.kron(eye, realify_matrix(base))
    return ChannelSet(**mats, cfg=ch.cfg, form="acs_extended", T=ch.T)


# ---------------------------------------------------------------------------
# Stream allocation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StreamAllocation:
    """Integer Z/A/R stream counts on a (possibly extended) system.

    ``Z`` has entries for the private and cognitive messages, ``A`` only for
    private ones (cognitive messages are never aligned), ``R`` for all nine.
    ``cfg`` holds the antenna counts of the system the counts refer to.
    """

    cfg: AntennaConfig
    Z: dict
    A: dict
    R: dict

    def __post_init__(self):
        z = {m: int(self.Z.get(m, 0)) for m in PRIVATE + COGNITIVE}
        a = {m: int(self.A.get(m, 0)) for m in PRIVATE}
        r = {m: int(self.R.get(m, 0)) for m in MessageIndex}
        if set(self.A) - set(PRIVATE):
            raise ValueError("only private messages can have an alignment block")
        if set(self.Z) - set(PRIVATE + COGNITIVE):
            raise ValueError("multicast messages have no zero-forcing block")
        if any(v < 0 for part in (z, a, r) for v in part.values()):
            raise ValueError("stream counts must be nonnegative")
        for i in (1, 2):
            if a[W(f"{i}1")] != a[W(f"{i}2")]:
                raise ValueError(f"aligned counts of W{i}1 and W{i}2 must match")
        object.__setattr__(self, "Z", z)
        object.__setattr__(self, "A", a)
        object.__setattr__(self, "R", r)

    def count(self, m: MessageIndex) -> int:
        return self.Z.get(m, 0) + self.A.get(m, 0) + self.R[m]

    def dof(self) -> DofTuple:
        return DofTuple.from_mapping({m: self.count(m) for m in MessageIndex})

    def aux(self) -> AuxAllocation:
        f = Fraction
        return AuxAllocation(
            f(self.Z[W.W11]), f(self.Z[W.W12]), f(self.Z[W.W21]), f(self.Z[W.W22]),
            f(self.A[W.W21]), f(self.A[W.W11]), f(self.Z[W.W01]), f(self.Z[W.W02]))

    def budget_violations(self) -> list[str]:
        """Null-space budget constraints that this allocation breaks."""
        return [v for v in eq_violations(self.cfg, self.dof(), self.aux())
                if v not in EQ_DECODING]

    def decoding_violations(self) -> list[str]:
        return [v for v in eq_violations(self.cfg, self.dof(), self.aux())
                if v in EQ_DECODING]


def allocate_streams(cfg: AntennaConfig, d: DofTuple) -> StreamAllocation:
    """Zero-force first, then align, then beamform the rest randomly.

    Parameters
    ----------
    cfg : AntennaConfig
        Antenna counts of the system the streams are sent over.
    d : DofTuple
        Integer stream counts per message.
    """
    if not d.is_integer:
        raise ValueError(f"stream counts must be integers, got {d}")
    x = eq_witness(cfg, d)
    Z = {W.W11: x.Z11, W.W12: x.Z12, W.W21: x.Z21, W.W22: x.Z22, W.W01: x.Z01, W.W02: x.Z02}
    A = {W.W11: x.A2, W.W12: x.A2, W.W21: x.A1, W.W22: x.A1}
    R = {m: d[m] - Z.get(m, 0) - A.get(m, 0) for m in MessageIndex}
    return StreamAllocation(cfg, {k: int(v) for k, v in Z.items()},
                            {k: int(v) for k, v in A.items()}, {k: int(v) for k, v in R.items()})


# ---------------------------------------------------------------------------
# Beamformers and received signal spaces
# ---------------------------------------------------------------------------

@dataclass
class Beamformers:
    """Per-message beamforming matrices split into Z/A/R column blocks.

    Private and multicast beamformers have ``M_t`` rows, cognitive and common
    ones ``M1 + M2`` rows (stacked over both transmitters).
    """

    blocks: dict  # MessageIndex -> {"Z": ndarray, "A": ndarray, "R": ndarray}

    def V(self, m: MessageIndex) -> np.ndarray:
        b = self.blocks[m]
        return np.hstack([b["Z"], b["A"], b["R"]])

    def part(self, m: MessageIndex, kind: str) -> np.ndarray:
        return self.blocks[m][kind]


def _unit_columns(rng: np.random.Generator, n: int, k: int, real: bool) -> np.ndarray:
    x = rng.standard_normal((n, k))
    if not real:
        x = x + 1j * rng.standard_normal((n, k))
    norms = np.linalg.norm(x, axis=0)
    return x / np.where(norms > 0, norms, 1.0)


def _tx_rows(m: MessageIndex, cfg: AntennaConfig) -> int:
    tx = m.tx_set
    return cfg.M1 + cfg.M2 if len(tx) == 2 else cfg.M(next(iter(tx)))


def build_beamformers(ch: ChannelSet, alloc: StreamAllocation, seed: int,
                      rtol: float = RTOL) -> Beamformers:
    """Beamformers for every message from null spaces and random mixing.

    Raises
    ------
    BudgetError
        If the allocation does not fit ``ch`` or needs more null-space
        dimensions than are available.
    """
    eff = ch.eff_cfg
    if alloc.cfg != eff:
        raise BudgetError("antenna dimensions", f"allocation is for {alloc.cfg}, channels are {eff}")
    bad = alloc.budget_violations()
    if bad:
        raise BudgetError(bad[0])
    rng = np.random.default_rng(seed)
    real = ch.is_real
    dtype = float if real else complex
    blocks = {}

    def empty(rows):
        return np.zeros((rows, 0), dtype=dtype)

    def from_space(basis, k, name):
        if basis.shape[1] < k:
            raise BudgetError(name, f"needs {k} null-space dimensions, found {basis.shape[1]}")
        if k == 0:
            return empty(basis.shape[0])
        return basis @ _unit_columns(rng, basis.shape[1], k, real)

    for i in (1, 2):
        other = 3 - i
        joint = null_space_basis(ch.concat(other), rtol)
        pair = from_space(joint, alloc.A[W(f"{i}1")], f"alignment at rx{other}")
        for t in (1, 2):
            m = W(f"{i}{t}")
            rows = eff.M(t)
            zf = from_space(null_space_basis(ch.H(other, t), rtol), alloc.Z[m],
                            f"zf d{i}{t} at rx{other}")
            al = pair[:eff.M1] if t == 1 else pair[eff.M1:]
            blocks[m] = {"Z": zf, "A": al, "R": _unit_columns(rng, rows, alloc.R[m], real)}
        m0 = W(f"0{i}")
        blocks[m0] = {"Z": from_space(joint, alloc.Z[m0], f"zf d0{i} at rx{other}"),
                      "A": empty(eff.M1 + eff.M2),
                      "R": _unit_columns(rng, eff.M1 + eff.M2, alloc.R[m0], real)}
    for m in MULTICAST:
        rows = _tx_rows(m, eff)
        blocks[m] = {"Z": empty(rows), "A": empty(rows),
                     "R": _unit_columns(rng, rows, alloc.R[m], real)}
    return Beamformers(blocks)


def _at(ch: ChannelSet, r: int, m: MessageIndex, V: np.ndarray) -> np.ndarray:
    """Signal of message ``m`` sent along ``V`` as seen at receiver r."""
    tx = m.tx_set
    H = ch.concat(r) if len(tx) == 2 else ch.H(r, next(iter(tx)))
    return H @ V


def assemble_received(ch: ChannelSet, bf: Beamformers):
    """Desired (D) and interfering (U) signal matrices at both receivers.

    Returns
    -------
    D1, D2, U1, U2 : ndarray
    """
    for m, b in bf.blocks.items():
        rows = _tx_rows(m, ch.eff_cfg)
        for kind, V in b.items():
            if V.shape[0] != rows:
                raise ValueError(f"beamformer {m.label}/{kind} has {V.shape[0]} rows, expected {rows}")
    order = {1: (W.W11, W.W12, W.W01), 2: (W.W21, W.W22, W.W02)}
    out = {}
    for r in (1, 2):
        other = 3 - r
        own = [_at(ch, r, m, bf.V(m)) for m in order[r] + MULTICAST]
        cross = [_at(ch, r, m, bf.V(m)) for m in order[other]]
        out[f"D{r}"] = np.hstack(own)
        out[f"U{r}"] = np.hstack(cross)
    return out["D1"], out["D2"], out["U1"], out["U2"]


# ---------------------------------------------------------------------------
# Rank verification
# ---------------------------------------------------------------------------

RANK_CONDITIONS = ("U1", "U2", "D1", "D2", "D1U1", "D2U2")


@dataclass
class RankReport:
    measured: dict
    target: dict
    margins: dict  # sigma_target / sigma_max; 1.0 for empty targets

    @property
    def passed(self) -> dict:
        return {k: self.measured[k] == self.target[k] for k in RANK_CONDITIONS}

    @property
    def ok(self) -> bool:
        return all(self.passed.values())

    @property
    def failures(self) -> list[str]:
        return [k for k, v in self.passed.items() if not v]

    @property
    def min_margin(self) -> float:
        return min(self.margins.values())


def rank_targets(alloc: StreamAllocation) -> dict:
    c = alloc.count
    tgt = {}
    for r in (1, 2):
        o = 3 - r
        own = c(W(f"{r}1")) + c(W(f"{r}2")) + c(W(f"0{r}")) + sum(c(m) for m in MULTICAST)
        cross = ((c(W(f"{o}1")) - alloc.Z[W(f"{o}1")]) + (c(W(f"{o}2")) - alloc.Z[W(f"{o}2")])
                 - alloc.A[W(f"{o}1")] + (c(W(f"0{o}")) - alloc.Z[W(f"0{o}")]))
        tgt[f"D{r}"] = own
        tgt[f"U{r}"] = cross
        tgt[f"D{r}U{r}"] = own + cross
    return tgt


def _rank_and_margin(A: np.ndarray, target: int, rtol: float, scale: float):
    if A.size == 0:
        return 0, 1.0
    s = np.linalg.svd(A, compute_uv=False)
    ref = max(s[0], scale)
    if ref == 0:
        return 0, 0.0 if target else 1.0
    rank = int(np.sum(s > rtol * ref))
    margin = 1.0 if target == 0 else (float(s[target - 1] / ref) if target <= s.size else 0.0)
    return rank, margin


def verify_ranks(ch: ChannelSet, bf: Beamformers, alloc: StreamAllocation,
                 rtol: float = RTOL) -> RankReport:
    """Measure the six ranks against the targets implied by ``alloc``."""
    D1, D2, U1, U2 = assemble_received(ch, bf)
    mats = {"U1": U1, "U2": U2, "D1": D1, "D2": D2,
            "D1U1": np.hstack([D1, U1]), "D2U2": np.hstack([D2, U2])}
    target = rank_targets(alloc)
    # beamformer columns have unit norm, so the channel norms set the scale
    scale = max(np.linalg.norm(ch.H(r, t), 2) for r in (1, 2) for t in (1, 2))
    measured, margins = {}, {}
    for k in RANK_CONDITIONS:
        measured[k], margins[k] = _rank_and_margin(mats[k], target[k], rtol, scale)
    return RankReport(measured, target, margins)


# ---------------------------------------------------------------------------
# Planning and Monte Carlo
# ---------------------------------------------------------------------------

def detect_acs_required(cfg: AntennaConfig) -> bool:
    return acs_condition(cfg)


@dataclass
class SchemePlan:
    cfg: AntennaConfig
    target: DofTuple
    T: int
    acs: bool
    effective_alloc: StreamAllocation

    @property
    def stream_multiplier(self) -> int:
        return self.T * (2 if self.acs else 1)


def plan_scheme(cfg: AntennaConfig, d: DofTuple, acs: bool | None = None) -> SchemePlan:
    """Extension length, ACS flag and effective allocation for ``d``.

    ``acs`` overrides the automatic choice when given.

    Raises
    ------
    RegionError
        If ``d`` violates an outer-bound inequality.
    """
    bad = violated(build_general_region(cfg, prune=False), d)
    if bad:
        raise RegionError([i.label for i in bad], d)
    T = d.denominator
    ext = allocate_streams(cfg.scaled(T), d.scaled(T))
    if acs is None:
        aligned = any(ext.A.values())
        acs = detect_acs_required(cfg) and (T > 1 or aligned)
    k = T * (2 if acs else 1)
    alloc = ext if not acs else allocate_streams(cfg.scaled(k), d.scaled(k))
    return SchemePlan(cfg, d, T, bool(acs), alloc)


def run_trial(plan: SchemePlan, master_seed: int, k: int, rtol: float = RTOL):
    """One pipeline run; returns ``(channels, beamformers, report)``."""
    ch_seed, bf_seed = trial_seeds(master_seed, k)
    ch = extend_channels(sample_channels(plan.cfg, ch_seed), plan.T)
    if plan.acs:
        ch = acs_transform(ch)
    bf = build_beamformers(ch, plan.effective_alloc, bf_seed, rtol)
    return ch, bf, verify_ranks(ch, bf, plan.effective_alloc, rtol)


@dataclass
class TrialSummary:
    trials: int
    passes: int = 0
    invalid: int = 0
    failures: Counter = field(default_factory=Counter)
    min_margin: float = math.inf
    errors: list = field(default_factory=list)

    @property
    def failed(self) -> int:
        return self.trials - self.passes - self.invalid

    @property
    def ok(self) -> bool:
        return self.passes == self.trials


def monte_carlo_verify(plan: SchemePlan, trials: int = 100, master_seed: int = 0,
                       rtol: float = RTOL) -> TrialSummary:
    """Run ``trials`` independent channel draws through the whole scheme."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    summary = TrialSummary(trials)
    for k in range(trials):
        try:
            _, _, rep = run_trial(plan, master_seed, k, rtol)
        except BudgetError as exc:
            summary.invalid += 1
            summary.errors.append(str(exc))
            continue
        summary.min_margin = min(summary.min_margin, rep.min_margin)
        if rep.ok:
            summary.passes += 1
        else:
            summary.failures.update(rep.failures)
    return summary


# ---------------------------------------------------------------------------
# Extension-only collapse at the ACS corner
# ---------------------------------------------------------------------------

@dataclass
class CollapseReport:
    cfg: AntennaConfig
    T: int
    corner: DofTuple
    side: str              # receiver whose desired streams collapse
    residuals: list        # containment residual per trial
    extension: list        # RankReport per trial, extension only
    acs: list              # RankReport per trial, extension + ACS

    def deficits(self, reports) -> list[int]:
        key = f"D{self.side}U{self.side}"
        return [r.target[key] - r.measured[key] for r in reports]

    @property
    def max_residual(self) -> float:
        return max(self.residuals)


def _containment_residual(A: np.ndarray, B: np.ndarray, rtol: float) -> float:
    if A.size == 0:
        return 0.0
    if B.size == 0:
        return 1.0
    u, s, _ = np.linalg.svd(B, full_matrices=False)
    basis = u[:, : int(np.sum(s > rtol * s[0]))]
    resid = A - basis @ (basis.conj().T @ A)
    return float(np.linalg.norm(resid) / np.linalg.norm(A))


def demonstrate_alignment_collapse(cfg: AntennaConfig, T: int = 3, seed: int = 0,
                                   trials: int = 1, rtol: float = RTOL) -> CollapseReport:
    """Run the X-channel ACS corner with and without ACS.

    With extension only, the aligned streams of one message become trapped
    in the span of the other message's streams at their own receiver.  The
    containment residual and the rank deficit are measured per trial.
    """
    if not detect_acs_required(cfg):
        raise ValueError(f"ACS is not required for {cfg}")
    corner = acs_corner_x(cfg)
    if T % corner.denominator:
        raise ValueError(f"T must be a multiple of {corner.denominator}")
    if cfg.M1 == 1 or cfg.N2 == 1:
        side, a_msg, b_msg, rx = "2", W.W21, W.W22, 2
    else:
        side, a_msg, b_msg, rx = "1", W.W12, W.W11, 1
    ext_plan = SchemePlan(cfg, corner, T, False, allocate_streams(cfg.scaled(T), corner.scaled(T)))
    acs_plan = SchemePlan(cfg, corner, T, True,
                          allocate_streams(cfg.scaled(2 * T), corner.scaled(2 * T)))
    residuals, ext_reports, acs_reports = [], [], []
    for k in range(trials):
        ch, bf, rep = run_trial(ext_plan, seed, k, rtol)
        A = ch.H(rx, int(a_msg.tag[1])) @ bf.part(a_msg, "A")
        Hb = ch.H(rx, int(b_msg.tag[1]))
        B = Hb @ np.hstack([bf.part(b_msg, "Z"), bf.part(b_msg, "A")])
        residuals.append(_containment_residual(A, B, rtol))
        ext_reports.append(rep)
        acs_reports.append(run_trial(acs_plan, seed, k, rtol)[2])
    return CollapseReport(cfg, T, corner, side, residuals, ext_reports, acs_reports)
