"""Command-line front end: declarative spec files in, deterministic JSON out.

A spec file has three sections::

    [group]
    family = fg_abelian          # fg_abelian | vab_extension | finite | lamplighter_z2
    free_rank = 1
    torsion = 4                  # space-separated cyclic orders

    [generators]
    elements = (1,0) (-1,0) (1,1) (-1,3) (1,3) (-1,1)
    labels = a a^-1 b b^-1 c c^-1   # optional
    witnesses = ({1};0) ({-1};0)    # optional, generation certificates

    [run]
    command = boundary           # default parameters, flags override
    r = 10
    m = 3

For vab_extension the quotient is ``quotient = cyclic:<n>`` or an explicit
table ``quotient = 0 1; 1 0`` (rows ';'-separated); matrices go in
``action.<q>`` keys (rows ';'-separated, identity when omitted) and cocycle
vectors in ``cocycle.<q>.<p>`` keys (zero when omitted). For ``finite`` the
multiplication table goes in ``table``. Elements are written in canonical
form, e.g. ``(3,-1)``, ``(2,0;1)``, ``({0,2};-1)``.

The generator list must be symmetric exactly as written; a missing inverse is
a ValidationError, not something to silently repair.

Exit codes: 0 success, 2 a diagnostic finding (truncation artifacts such as a
violated finite-scale bound), 1 hard errors. Reports are emitted on stdout
with sorted keys; reruns with equal configuration are byte-identical. With
``--out DIR`` the report plus command-specific CSV/DOT side files are also
written under DIR.
"""

from __future__ import annotations

import argparse
import configparser
import io
import json
import os
import sys
from dataclasses import dataclass, replace
from typing import Callable

from .annihilator import annihilator_candidates
from .boundary import boundary_approx, slow_geodesic
from .cayley import DEFAULT_BUDGET, geodesic_prefixes, grow_ball
from .errors import (
    Diagnostic,
    HoroboundError,
    SchemaError,
    ValidationError,
)
from .examples import lamp_chain
from .groups import (
    Element,
    FgAbelianSpec,
    FiniteGroupSpec,
    GeneratingSet,
    Group,
    GroupSpec,
    LamplighterGroup,
    LamplighterZ2Spec,
    VAbExtensionSpec,
    build_group,
    cyclic_table,
    symmetric_generating_set,
)
from .linalg import identity_matrix
from .metrics import (
    DEFAULT_SET_BUDGET,
    bs_annihilator_check,
    build_ball_system,
    metric_axiom_check,
)
from .vabelian import (
    cloud_hull,
    conjugate_cloud,
    infinite_boundary_witness,
    lipschitz_hom,
    quotient_graph,
    select_extreme,
    simple_cycle_labels,
    step1_membership,
)

__all__ = ["RunConfig", "parse_spec", "run_command", "emit_report", "main"]

COMMANDS = (
    "ball",
    "boundary",
    "annihilator",
    "polytope",
    "witness",
    "ballsystem",
    "bend",
)


@dataclass(frozen=True)
class RunConfig:
    """Everything a run depends on; equal configs give identical bytes."""

    command: str | None
    group_spec: GroupSpec
    generators: tuple[str, ...]
    labels: tuple[str, ...] | None
    witnesses: tuple[str, ...]
    params: tuple[tuple[str, str], ...]
    out: str | None = None
    seed: int | None = None

    def param(self, key: str) -> str | None:
        for k, v in self.params:
            if k == key:
                return v
        return None

    def int_param(self, key: str, default: int | None = None) -> int | None:
        raw = self.param(key)
        if raw is None:
            return default
        try:
            return int(raw)
        except ValueError:
            raise SchemaError(f"parameter {key!r} must be an integer, got {raw!r}") from None

    def require_int(self, key: str) -> int:
        v = self.int_param(key)
        if v is None:
            raise SchemaError(
                f"command {self.command!r} needs parameter {key!r}"
                f" (--{key.replace('_', '-')} or a [run] entry)"
            )
        return v

    def require_str(self, key: str) -> str:
        raw = self.param(key)
        if raw is None:
            raise SchemaError(
                f"command {self.command!r} needs parameter {key!r} (a [run] entry)"
            )
        return raw

    def with_params(self, **updates: object) -> "RunConfig":
        merged = dict(self.params)
        for k, v in updates.items():
            if v is not None:
                merged[k] = str(v)
        return replace(self, params=tuple(sorted(merged.items())))

    def describe(self) -> dict:
        return {
            "command": self.command,
            "generators": list(self.generators),
            "labels": list(self.labels) if self.labels else None,
            "params": dict(self.params),
            "seed": self.seed,
        }


# ---------------------------------------------------------------------------
# spec files


def _parse_int(section: str, key: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise SchemaError(f"[{section}] {key}: expected an integer, got {raw!r}") from None


def _parse_int_row(section: str, key: str, raw: str) -> tuple[int, ...]:
    return tuple(_parse_int(section, key, tok) for tok in raw.split())

def _parse_rows(section: str, key: str, raw: str) -> tuple[tuple[int, ...], ...]:
    rows = [row.strip() for row in raw.split(";")]
    return tuple(_parse_int_row(section, key, row) for row in rows if row)


def _parse_group_section(sec: configparser.SectionProxy) -> GroupSpec:
    family = sec.get("family")
    if family is None:
        raise SchemaError("[group] is missing the 'family' key")

    if family == "fg_abelian":
        _reject_unknown(sec, {"family", "free_rank", "torsion"})
        if "free_rank" not in sec:
            raise SchemaError("[group] fg_abelian needs 'free_rank'")
        free_rank = _parse_int("group", "free_rank", sec["free_rank"])
        torsion = _parse_int_row("group", "torsion", sec.get("torsion", ""))
        return FgAbelianSpec(free_rank=free_rank, torsion=torsion)

    if family == "vab_extension":
        known = {"family", "rank", "quotient"}
        for key in sec:
            if key in known or key.startswith("action.") or key.startswith("cocycle."):
                continue
            raise SchemaError(f"[group] unknown key {key!r} for family vab_extension")
        if "rank" not in sec or "quotient" not in sec:
            raise SchemaError("[group] vab_extension needs 'rank' and 'quotient'")
        rank = _parse_int("group", "rank", sec["rank"])
        quo = sec["quotient"].strip()
        if quo.startswith("cyclic:"):
            table = cyclic_table(_parse_int("group", "quotient", quo[len("cyclic:"):]))
        else:
            table = _parse_rows("group", "quotient", quo)
        nq = len(table)
        action = []
        for q in range(nq):
            key = f"action.{q}"
            if key in sec:
                action.append(_parse_rows("group", key, sec[key]))
            else:
                action.append(identity_matrix(rank))
        zero = (0,) * rank
        cocycle = [[zero] * nq for _ in range(nq)]
        for key in sec:
            if not key.startswith("cocycle."):
                continue
            parts = key.split(".")
            if len(parts) != 3:
                raise SchemaError(f"[group] cocycle keys look like cocycle.<q>.<p>, got {key!r}")
            q = _parse_int("group", key, parts[1])
            p = _parse_int("group", key, parts[2])
            if not (0 <= q < nq and 0 <= p < nq):
                raise SchemaError(f"[group] {key}: indices outside the quotient 0..{nq - 1}")
            cocycle[q][p] = _parse_int_row("group", key, sec[key])
        return VAbExtensionSpec(
            rank=rank,
            quotient_table=table,
            action=tuple(action),
            cocycle=tuple(tuple(row) for row in cocycle),
        )

    if family == "finite":
        _reject_unknown(sec, {"family", "table"})
        if "table" not in sec:
            raise SchemaError("[group] finite needs 'table'")
        return FiniteGroupSpec(table=_parse_rows("group", "table", sec["table"]))

    if family == "lamplighter_z2":
        _reject_unknown(sec, {"family"})
        return LamplighterZ2Spec()

    raise SchemaError(f"[group] unknown family {family!r}")


def _reject_unknown(sec: configparser.SectionProxy, known: set[str]) -> None:
    for key in sec:
        if key not in known:
            raise SchemaError(f"[{sec.name}] unknown key {key!r}")


def _parse_elements(group: Group, section: str, key: str, raw: str) -> list[Element]:
    out = []
    for tok in raw.split():
        try:
            out.append(group.parse(tok))
        except ValueError as exc:
            raise SchemaError(f"[{section}] {key}: {exc}") from None
    return out


def parse_spec(path: str) -> tuple[Group, GeneratingSet, RunConfig]:
    """Read and validate a spec file.

    Structural problems (missing sections/keys, unparsable values) raise
    SchemaError; well-formed but invalid content (a bad group table, a
    non-symmetric generator list) raises ValidationError.
    """
    # ';' separates matrix rows and appears inside element literals, so only
    # '#' marks inline comments
    cp = configparser.ConfigParser(
        interpolation=None,
        delimiters=("=",),
        inline_comment_prefixes=("#",),
    )
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh, source=path)
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from None
    except configparser.Error as exc:
        raise SchemaError(f"{path}: {exc}") from None

    for required in ("group", "generators"):
        if required not in cp:
            raise SchemaError(f"{path}: missing [{required}] section")

    spec = _parse_group_section(cp["group"])
    try:
        group = build_group(spec)
    except HoroboundError as exc:
        raise ValidationError(f"{path} [group]: {exc}") from None
    except ValueError as exc:
        raise ValidationError(f"{path} [group]: {exc}") from None

    gsec = cp["generators"]
    _reject_unknown(gsec, {"elements", "labels", "witnesses"})
    if "elements" not in gsec:
        raise SchemaError(f"{path}: [generators] needs 'elements'")
    elements = _parse_elements(group, "generators", "elements", gsec["elements"])
    if not elements:
        raise ValidationError(f"{path}: [generators] elements is empty")
    for x in elements:
        if x.is_identity():
            raise ValidationError(f"{path}: the identity is not a generator")
    have = {x.data for x in elements}
    for x in elements:
        if x.inverse().data not in have:
            raise ValidationError(
                f"{path}: generator list is not symmetric, {x}^-1 = {x.inverse()} is missing"
            )

    labels: tuple[str, ...] | None = None
    if "labels" in gsec:
        labels = tuple(gsec["labels"].split())
        if len(labels) != len(elements):
            raise SchemaError(
                f"{path}: {len(labels)} labels for {len(elements)} generators"
            )
    witnesses = _parse_elements(
        group, "generators", "witnesses", gsec.get("witnesses", "")
    )
    try:
        gens = symmetric_generating_set(
            group, elements, labels, witnesses=witnesses or None
        )
    except HoroboundError as exc:
        raise ValidationError(f"{path} [generators]: {exc}") from None

    params: dict[str, str] = {}
    command = None
    seed = None
    if "run" in cp:
        for key, value in cp["run"].items():
            if key == "command":
                command = value.strip()
                if command not in COMMANDS:
                    raise SchemaError(f"{path}: [run] unknown command {command!r}")
            elif key == "seed":
                seed = _parse_int("run", "seed", value)
            else:
                params[key] = value.strip()

    config = RunConfig(
        command=command,
        group_spec=spec,
        generators=tuple(str(x) for x in elements),
        labels=labels,
        witnesses=tuple(str(w) for w in witnesses),
        params=tuple(sorted(params.items())),
        seed=seed,
    )
    return group, gens, config


# ---------------------------------------------------------------------------
# commands


def _text_file(write) -> bytes:
    buf = io.StringIO()
    write(buf)
    return buf.getvalue().encode("utf-8")


def _cmd_ball(group: Group, gens: GeneratingSet, cfg: RunConfig):
    r = cfg.require_int("r")
    budget = cfg.int_param("budget", DEFAULT_BUDGET)
    ball = grow_ball(group, gens, r, budget=budget)
    body = {
        "radius": r,
        "size": len(ball.data_up_to(r)),
        "layer_sizes": [len(ball.layer_data(k)) for k in range(r + 1)],
    }
    sides = {"ball.csv": _text_file(ball.to_csv)}
    n = cfg.int_param("n")
    if n is not None:
        tree = geodesic_prefixes(ball, n, r)
        body["prefix_tree"] = {
            "depth": tree.depth,
            "min_horizon": tree.min_horizon,
            "count": len(tree.prefixes()),
        }
        sides["prefixes.dot"] = _text_file(tree.to_dot)
    return body, sides


def _cmd_boundary(group: Group, gens: GeneratingSet, cfg: RunConfig):
    r = cfg.require_int("r")
    m = cfg.require_int("m")
    window = cfg.int_param("window", 3)
    budget = cfg.int_param("budget", DEFAULT_BUDGET)
    ball = grow_ball(group, gens, r + m, budget=budget)
    approx = boundary_approx(ball, r, m, window=window)
    return approx.to_json_dict(), {}


def _cmd_annihilator(group: Group, gens: GeneratingSet, cfg: RunConfig):
    r = cfg.require_int("r")
    m = cfg.require_int("m")
    gap = cfg.int_param("gap", 2)
    budget = cfg.int_param("budget", DEFAULT_BUDGET)
    ball = grow_ball(group, gens, r + m, budget=budget)
    report = annihilator_candidates(ball, m, gap=gap)
    return report.to_json_dict(), {"candidates.csv": _text_file(report.to_csv)}


def _cmd_polytope(group: Group, gens: GeneratingSet, cfg: RunConfig):
    r = cfg.require_int("r")
    budget = cfg.int_param("budget", DEFAULT_BUDGET)
    selector = cfg.param("extreme") or "lex"
    qg = quotient_graph(group, gens)
    cycles = simple_cycle_labels(qg)
    cloud = conjugate_cloud(cycles, group)
    poly = cloud_hull(cloud)
    ball = grow_ball(group, gens, r, budget=budget)
    body = {
        "quotient_graph": qg.to_json_dict(),
        "cycles": cycles.to_json_dict(),
        "cloud": cloud.to_json_dict(),
        "hull": poly.to_json_dict(),
        "membership": step1_membership(poly, ball, r).to_json_dict(),
        "functional": lipschitz_hom(
            poly, select_extreme(poly, selector), cloud, ball
        ).to_json_dict(),
    }
    return body, {}


def _cmd_witness(group: Group, gens: GeneratingSet, cfg: RunConfig):
    r = cfg.require_int("r")
    m = cfg.require_int("m")
    k = cfg.int_param("k", 5)
    budget = cfg.int_param("budget", DEFAULT_BUDGET)
    selector = cfg.param("extreme") or "lex"
    report = infinite_boundary_witness(
        group, gens, r, m, k=k, selector=selector, budget=budget
    )
    return report.to_json_dict(), {}


def _cmd_ballsystem(group: Group, gens: GeneratingSet, cfg: RunConfig):
    n_max = cfg.int_param("n_max", 4)
    budget = cfg.int_param("budget", DEFAULT_SET_BUDGET)
    if isinstance(group, LamplighterGroup):
        chain = lamp_chain(group, n_max)
    else:
        # degenerate chain: the ball system collapses to the word metric
        chain = [[group.identity()] for _ in range(n_max)]
    bs = build_ball_system(group, gens, chain, n_max, budget=budget)
    checks = [
        bs_annihilator_check(bs, Element(group, data), 1).to_json_dict()
        for data in sorted(bs.chain[0])
    ]
    body = {
        "levels": bs.to_json_dict(),
        "axioms": metric_axiom_check(bs).to_json_dict(),
        "annihilator_checks": checks,
    }
    return body, {}


def _cmd_bend(group: Group, gens: GeneratingSet, cfg: RunConfig):
    r = cfg.require_int("r")
    m = cfg.require_int("m")
    scan_m = cfg.require_int("scan_m")
    ell = cfg.require_int("ell")
    budget = cfg.int_param("budget", DEFAULT_BUDGET)
    try:
        x = group.parse(cfg.require_str("x"))
    except ValueError as exc:
        raise SchemaError(f"[run] x: {exc}") from None
    ball = grow_ball(group, gens, r + m, budget=budget)
    approx = boundary_approx(ball, r, m)
    sg = slow_geodesic(x, scan_m, ell, ball, approx)
    body = {
        "x": str(x),
        "level": {"r": r, "m": m},
        "scan_m": scan_m,
        "ell": ell,
        "t": sg.t,
        "epsilon": sg.epsilon,
        "kernel_index": sg.kernel_index,
        "kernel_index_exact": sg.kernel_index_exact,
        "bound": sg.bound,
        "class_values": list(sg.class_values),
        "beta": [str(v) for v in sg.prefix.vertices],
        "phi": list(sg.scan.phi),
        "signs": list(sg.scan.signs),
        "two_lipschitz": sg.scan.is_two_lipschitz(),
    }
    return body, {}


_HANDLERS: dict[str, Callable] = {
    "ball": _cmd_ball,
    "boundary": _cmd_boundary,
    "annihilator": _cmd_annihilator,
    "polytope": _cmd_polytope,
    "witness": _cmd_witness,
    "ballsystem": _cmd_ballsystem,
    "bend": _cmd_bend,
}


def run_command(config: RunConfig) -> tuple[dict, dict[str, bytes]]:
    """Rebuild the group from the config and dispatch; pure in the config."""
    if config.command not in _HANDLERS:
        raise SchemaError(f"unknown command {config.command!r}")
    group = build_group(config.group_spec)
    elements = [group.parse(t) for t in config.generators]
    witnesses = [group.parse(t) for t in config.witnesses]
    gens = symmetric_generating_set(
        group, elements, config.labels, witnesses=witnesses or None
    )
    body, sides = _HANDLERS[config.command](group, gens, config)
    report = {
        "command": config.command,
        "group": group.describe(),
        "config": config.describe(),
    }
    report.update(body)
    return report, sides


def emit_report(report: dict, format: str = "json") -> bytes:
    """Deterministic bytes: sorted keys, two-space indent, trailing newline."""
    if format != "json":
        raise ValueError(f"unknown report format {format!r}")
    return (json.dumps(report, sort_keys=True, indent=2, default=str) + "\n").encode(
        "utf-8"
    )


# ---------------------------------------------------------------------------
# entry point


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="horobound",
        description="Boundary, annihilator and metric experiments on finitely generated groups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, help=f"run the {name} pipeline")
        p.add_argument("spec", help="path to a group spec file")
        p.add_argument("--r", type=int, default=None)
        p.add_argument("--m", type=int, default=None)
        p.add_argument("--n-max", type=int, default=None, dest="n_max")
        p.add_argument("--k", type=int, default=None)
        p.add_argument("--budget", type=int, default=None)
        p.add_argument("--gap", type=int, default=None)
        p.add_argument("--extreme", type=str, default=None, metavar="lex|index:<i>")
        p.add_argument("--out", type=str, default=None, metavar="DIR")
        p.add_argument("--seed", type=int, default=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        _, _, config = parse_spec(args.spec)
        config = replace(
            config,
            command=args.command,
            out=args.out,
            seed=args.seed if args.seed is not None else config.seed,
        ).with_params(
            r=args.r,
            m=args.m,
            n_max=args.n_max,
            k=args.k,
            budget=args.budget,
            gap=args.gap,
            extreme=args.extreme,
        )
        report, sides = run_command(config)
    except Diagnostic as exc:
        payload = {
            "diagnostic": type(exc).__name__,
            "message": str(exc),
            "detail": exc.payload,
        }
        sys.stdout.buffer.write(emit_report(payload))
        return 2
    except HoroboundError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    out = emit_report(report)
    if config.out:
        os.makedirs(config.out, exist_ok=True)
        with open(os.path.join(config.out, "report.json"), "wb") as fh:
            fh.write(out)
        for name, blob in sides.items():
            with open(os.path.join(config.out, name), "wb") as fh:
                fh.write(blob)
    sys.stdout.buffer.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
