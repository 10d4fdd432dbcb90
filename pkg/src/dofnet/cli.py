"""Command-line front end.

Exit status is 0 on success, 1 on a usage or input error and 2 when a
verification fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
from contextlib import contextmanager
from dataclasses import dataclass

from . import serialize
from .catalog import (
    CatalogName,
    check_catalog_consistency,
    closed_form_sumdof_cogx,
    closed_form_sumdof_x,
    preset_message_set,
    published_region,
)
from .model import MESSAGE_ORDER, AntennaConfig, DofTuple, MessageIndex, format_fraction
from .precoder import (
    RegionError,
    demonstrate_alignment_collapse,
    detect_acs_required,
    monte_carlo_verify,
    plan_scheme,
    run_trial,
)
from .region import (
    build_general_region,
    enumerate_vertices,
    eq_contains,
    eq_witness,
    irredundant,
    max_weighted_sum,
    vertex_denominator_stats,
    violated,
)

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    antennas: AntennaConfig | None
    messages: tuple            # active messages in input order
    name: CatalogName | None
    seed: int = 0
    trials: int = 100
    rtol: float = 1e-8
    output: str | None = None
    fmt: str = "table"


def _parse_messages(text: str):
    try:
        name = CatalogName.parse(text)
    except ValueError:
        name = None
    if name is not None:
        ms = preset_message_set(name)
        return tuple(m for m in MESSAGE_ORDER if m in ms), name
    items = [x for x in text.split(",") if x.strip()]
    if not items:
        raise UsageError("empty message list")
    try:
        ms = tuple(dict.fromkeys(MessageIndex.parse(x) for x in items))
    except ValueError as exc:
        raise UsageError(f"{exc}; use a channel name ({', '.join(n.value for n in CatalogName)}) "
                         "or a comma list such as 11,22,0") from None
    return ms, None


def _parse_dof(text: str, messages) -> DofTuple:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    try:
        if parts and all("=" in p for p in parts):
            mapping = dict(p.split("=", 1) for p in parts)
            d = DofTuple.from_mapping(mapping)
        else:
            d = DofTuple.from_values(messages, parts)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"bad --dof value {text!r}: {exc}") from None
    extra = d.support - set(messages)
    if extra:
        raise UsageError("--dof has entries outside the message set: "
                         + ", ".join(m.label for m in MESSAGE_ORDER if m in extra))
    return d


def _run_config(args) -> RunConfig:
    cfg = None
    if getattr(args, "antennas", None):
        try:
            cfg = AntennaConfig.parse(args.antennas)
        except (ValueError, TypeError) as exc:
            raise UsageError(str(exc)) from None
    messages, name = _parse_messages(args.messages)
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    if not 0 < args.rtol < 1e-2:
        raise UsageError("--rtol must lie in (0, 1e-2)")
    return RunConfig(cfg, messages, name, args.seed, args.trials, args.rtol, args.output, args.format)


def _need_cfg(rc: RunConfig) -> AntennaConfig:
    if rc.antennas is None:
        raise UsageError("--antennas M1,M2,N1,N2 is required")
    return rc.antennas


@contextmanager
def _sink(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w") as fh:
            yield fh


def _emit(rc: RunConfig, doc, table: str, rows: list[list] | None = None):
    with _sink(rc.output) as out:
        if rc.fmt == "json":
            out.write(json.dumps(doc, indent=2) + "\n")
        elif rc.fmt == "csv":
            buf = io.StringIO()
            csv.writer(buf, lineterminator="\n").writerows(rows or [])
            out.write(buf.getvalue())
        else:
            out.write(table.rstrip("\n") + "\n")


def _fmt_point(d: DofTuple, messages) -> str:
    return ",".join(format_fraction(d[m]) for m in messages)


def _labels(messages) -> list[str]:
    return [m.label for m in messages]


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_region(rc: RunConfig, form: str = "pruned") -> int:
    cfg = _need_cfg(rc)
    if form == "published":
        if rc.name is None or published_region(cfg, rc.name) is None:
            raise UsageError("--form published needs a channel name with a displayed region")
        poly = published_region(cfg, rc.name)
    else:
        poly = build_general_region(cfg, rc.messages, prune=(form != "raw"))
        if form == "irredundant":
            poly = irredundant(poly)
    lines = [f"region for antennas {cfg}, messages {' '.join(_labels(poly.active))} ({form})"]
    lines += [f"  [{i.label}] {i}" for i in poly.inequalities]
    lines.append(f"inequalities: {len(poly)}")
    lines.append("rhs " + ",".join(str(i.rhs) for i in poly.inequalities))
    rows = [["label", *_labels(poly.active), "rhs"]]
    rows += [[i.label, *(i.coeff(m) for m in poly.active), i.rhs] for i in poly.inequalities]
    _emit(rc, serialize.encode(poly), "\n".join(lines), rows)
    return EXIT_OK


def cmd_vertices(rc: RunConfig, sweep: int | None = None) -> int:
    if sweep is not None:
        worst, where = 1, None
        for vals in itertools.product(range(1, sweep + 1), repeat=4):
            cfg = AntennaConfig(*vals)
            den, _ = vertex_denominator_stats(build_general_region(cfg, rc.messages))
            if den > worst:
                worst, where = den, cfg
        text = f"sweep 1..{sweep}, messages {' '.join(_labels(rc.messages))}\nmax denominator: {worst}"
        if where is not None:
            text += f" (first at {where})"
        doc = {"type": "denominator_sweep", "version": serialize.SCHEMA_VERSION,
               "messages": _labels(rc.messages), "max": sweep, "max_denominator": worst}
        _emit(rc, doc, text, [["sweep", "max_denominator"], [sweep, worst]])
        return EXIT_OK
    cfg = _need_cfg(rc)
    poly = build_general_region(cfg, rc.messages)
    verts = enumerate_vertices(poly)
    den, frac = vertex_denominator_stats(poly)
    order = poly.active
    lines = [f"vertices for antennas {cfg}, messages {' '.join(_labels(order))}",
             f"  {','.join(_labels(order))}  denominator  tight"]
    for v in verts:
        tight = " ".join(poly.inequalities[k].label for k in v.active_facets)
        lines.append(f"  {_fmt_point(v.point, order)}  {v.denominator}  {tight}")
    lines.append(f"vertices: {len(verts)} (fractional: {len(frac)})")
    lines.append(f"max denominator: {den}")
    rows = [[*_labels(order), "denominator"]]
    rows += [[*(format_fraction(v.point[m]) for m in order), v.denominator] for v in verts]
    _emit(rc, serialize.encode(verts), "\n".join(lines), rows)
    return EXIT_OK


def cmd_check(rc: RunConfig, d: DofTuple) -> int:
    cfg = _need_cfg(rc)
    poly = build_general_region(cfg, rc.messages, prune=False)
    bad = violated(poly, d)
    in_d, in_eq = not bad, eq_contains(cfg, d)
    wit = eq_witness(cfg, d)
    lines = [f"tuple {d.format(rc.messages)} on antennas {cfg}",
             f"outer region: {'in' if in_d else 'out'}"]
    if bad:
        lines.append("violated: " + "; ".join(f"[{i.label}] {i}" for i in bad))
    lines.append(f"achievable region: {'in' if in_eq else 'out'}")
    lines.append(f"witness: {wit}")
    if in_d != in_eq:
        lines.append("MISMATCH between the two descriptions")
    doc = {"type": "membership", "version": serialize.SCHEMA_VERSION,
           "tuple": serialize.encode(d), "outer": in_d, "achievable": in_eq,
           "violated": [i.label for i in bad], "witness": serialize.encode(wit)}
    rows = [["outer", "achievable", "violated"],
            [in_d, in_eq, " ".join(i.label for i in bad)]]
    _emit(rc, doc, "\n".join(lines), rows)
    return EXIT_OK if in_d == in_eq else EXIT_FAIL


def cmd_plan_verify(rc: RunConfig, d: DofTuple, no_acs: bool = False,
                    dump: str | None = None) -> int:
    cfg = _need_cfg(rc)
    try:
        plan = plan_scheme(cfg, d, acs=False if no_acs else None)
    except RegionError as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return EXIT_USAGE
    summary = monte_carlo_verify(plan, rc.trials, rc.seed, rc.rtol)
    a = plan.effective_alloc
    lines = [f"tuple {d.format(rc.messages)} on antennas {cfg}",
             f"T={plan.T} ACS={'yes' if plan.acs else 'no'} multiplier={plan.stream_multiplier}",
             f"effective antennas {a.cfg}"]
    for m in MESSAGE_ORDER:
        if a.count(m):
            lines.append(f"  {m.label}: Z={a.Z.get(m, 0)} A={a.A.get(m, 0)} R={a.R[m]}")
    lines.append(f"{summary.passes}/{summary.trials} pass"
                 + (f", {summary.invalid} invalid" if summary.invalid else ""))
    if summary.failures:
        lines.append("failures: " + ", ".join(f"{k}={v}" for k, v in sorted(summary.failures.items())))
    lines.append(f"min singular-value margin: {summary.min_margin:.3e}")
    if dump:
        _dump_trial(plan, rc, dump)
    doc = {"type": "plan_verify", "version": serialize.SCHEMA_VERSION,
           "plan": serialize.encode(plan), "summary": serialize.encode(summary)}
    rows = [["T", "acs", "trials", "passes", "invalid"],
            [plan.T, plan.acs, summary.trials, summary.passes, summary.invalid]]
    _emit(rc, doc, "\n".join(lines), rows)
    return EXIT_OK if summary.ok else EXIT_FAIL


def _dump_trial(plan, rc: RunConfig, path: str) -> None:
    try:
        objs = list(run_trial(plan, rc.seed, 0, rc.rtol))
    except ValueError as exc:
        objs = []
        print(f"dump skipped: {exc}", file=sys.stderr)
    with open(path, "w") as fh:
        fh.write(serialize.dumps(objs) + "\n")


def cmd_demo_acs(rc: RunConfig, T: int = 3, dump: str | None = None) -> int:
    cfg = _need_cfg(rc)
    if not detect_acs_required(cfg):
        with _sink(rc.output) as out:
            out.write(f"ACS not required for this configuration ({cfg})\n")
        return EXIT_USAGE
    try:
        rep = demonstrate_alignment_collapse(cfg, T, rc.seed, rc.trials, rc.rtol)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    key = f"D{rep.side}U{rep.side}"
    ext_def, acs_def = rep.deficits(rep.extension), rep.deficits(rep.acs)
    lines = [f"ACS corner {rep.corner} on antennas {cfg}, T={T}, checking [{key[:2]} {key[2:]}]",
             f"  {'trial':>5}  {'residual':>10}  {'ext rank':>9}  {'acs rank':>9}"]
    rep_len = len(rep.residuals)
    for k in range(rep_len):
        e, a = rep.extension[k], rep.acs[k]
        lines.append(f"  {k:>5}  {rep.residuals[k]:>10.2e}  "
                     f"{e.measured[key]:>4}/{e.target[key]:<4}  {a.measured[key]:>4}/{a.target[key]:<4}")
    collapsed = sum(1 for x, r in zip(ext_def, rep.residuals) if x >= 1 and r <= 1e-8)
    clean = sum(1 for r in rep.acs if r.ok)
    lines.append(f"extension only: containment and deficit >= 1 in {collapsed}/{rep_len} trials")
    lines.append(f"with ACS: all ranks full in {clean}/{rep_len} trials")
    if dump:
        with open(dump, "w") as fh:
            fh.write(serialize.dumps(rep) + "\n")
    rows = [["trial", "residual", "extension_deficit", "acs_deficit"]]
    rows += [[k, rep.residuals[k], ext_def[k], acs_def[k]] for k in range(rep_len)]
    _emit(rc, serialize.encode(rep), "\n".join(lines), rows)
    return EXIT_OK if collapsed == rep_len and clean == rep_len else EXIT_FAIL


def cmd_catalog_check(rc: RunConfig, symmetric_max: int = 6, sweep_max: int = 4) -> int:
    rep = check_catalog_consistency(symmetric_max, sweep_max)
    lines = [f"  {'check':<45} {'cfg':<9} {'region':>7} {'closed':>7}  ok"]
    for r in rep.rows:
        lines.append(f"  {r['check']:<45} {r['cfg']:<9} {r['region']:>7} {r['closed_form']:>7}  "
                     f"{'yes' if r['ok'] else 'NO'}")
    lines += [f"discrepancy: {x}" for x in rep.discrepancies]
    lines.append(f"discrepancies: {len(rep.discrepancies)}")
    rows = [["check", "cfg", "region", "closed_form", "ok"]]
    rows += [[r["check"], r["cfg"], r["region"], r["closed_form"], r["ok"]] for r in rep.rows]
    _emit(rc, serialize.encode(rep), "\n".join(lines), rows)
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_sumdof(rc: RunConfig) -> int:
    cfg = _need_cfg(rc)
    poly = build_general_region(cfg, rc.messages)
    value, vert = max_weighted_sum(poly)
    lines = [f"max sum DoF on antennas {cfg}, messages {' '.join(_labels(poly.active))}: "
             f"{format_fraction(value)}",
             f"attained at {vert.point.format(poly.active)}"]
    closed = None
    if cfg.M1 == cfg.M2 and cfg.N1 == cfg.N2:
        if rc.name is CatalogName.X:
            closed = closed_form_sumdof_x(cfg.M1, cfg.N1)
        elif rc.name is CatalogName.COGNITIVE_X:
            closed = closed_form_sumdof_cogx(cfg.M1, cfg.N1)
    if closed is not None:
        lines.append(f"closed form: {format_fraction(closed)} "
                     f"({'agrees' if closed == value else 'DISAGREES'})")
    doc = {"type": "sumdof", "version": serialize.SCHEMA_VERSION,
           "value": format_fraction(value), "argmax": serialize.encode(vert),
           "closed_form": None if closed is None else format_fraction(closed)}
    rows = [["value", "closed_form"],
            [format_fraction(value), "" if closed is None else format_fraction(closed)]]
    _emit(rc, doc, "\n".join(lines), rows)
    return EXIT_FAIL if closed is not None and closed != value else EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--antennas", help="M1,M2,N1,N2")
    common.add_argument("--messages", default="full",
                        help="channel name or comma list of message indices (default: full)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=100)
    common.add_argument("--rtol", type=float, default=1e-8)
    common.add_argument("--format", choices=("table", "json", "csv"), default="table")
    common.add_argument("--output", help="write to this file instead of stdout")

    dof_help = ("p/q values in message order (canonical order for channel names, "
                "listed order for explicit lists), or keyed as d11=1/3,d22=1")
    parser = _Parser(prog="dofnet", description="DoF regions and precoding checks "
                                                "for 2x2 MIMO networks with general message sets")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("region", parents=[common], help="print the region's inequalities")
    p.add_argument("--form", choices=("pruned", "raw", "published", "irredundant"), default="pruned",
                   help="pruned: dominance pruning; raw: no pruning; published: displayed "
                        "closed form of a named channel; irredundant: all redundancy removed")
    p = sub.add_parser("vertices", parents=[common], help="enumerate vertices")
    p.add_argument("--sweep", type=int, help="report the max denominator over all antennas 1..SWEEP")
    p = sub.add_parser("check", parents=[common], help="membership in both region descriptions")
    p.add_argument("--dof", required=True, help=dof_help)
    p = sub.add_parser("plan-verify", parents=[common], help="plan the scheme and verify ranks")
    p.add_argument("--dof", required=True, help=dof_help)
    p.add_argument("--no-acs", action="store_true", help="never use asymmetric complex signaling")
    p.add_argument("--dump", help="write the first trial's channels, beamformers and ranks as JSON")
    p = sub.add_parser("demo-acs", parents=[common], help="extension-only collapse vs ACS")
    p.add_argument("--T", type=int, default=3, dest="T", help="extension length (default 3)")
    p.add_argument("--dump", help="write the collapse report as JSON")
    p = sub.add_parser("catalog-check", parents=[common], help="compare with closed forms")
    p.add_argument("--symmetric-max", type=int, default=6)
    p.add_argument("--sweep-max", type=int, default=4)
    sub.add_parser("sumdof", parents=[common], help="maximum sum DoF")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rc = _run_config(args)
        if args.command == "region":
            return cmd_region(rc, args.form)
        if args.command == "vertices":
            if args.sweep is not None and args.sweep < 1:
                raise UsageError("--sweep must be >= 1")
            return cmd_vertices(rc, args.sweep)
        if args.command == "check":
            return cmd_check(rc, _parse_dof(args.dof, rc.messages))
        if args.command == "plan-verify":
            return cmd_plan_verify(rc, _parse_dof(args.dof, rc.messages), args.no_acs, args.dump)
        if args.command == "demo-acs":
            if args.T < 1:
                raise UsageError("--T must be >= 1")
            return cmd_demo_acs(rc, args.T, args.dump)
        if args.command == "catalog-check":
            return cmd_catalog_check(rc, args.symmetric_max, args.sweep_max)
        if args.command == "sumdof":
            return cmd_sumdof(rc)
    except UsageError as exc:
        print(f"dofnet: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"dofnet: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE
