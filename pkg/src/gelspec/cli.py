"""Command-line driver.

    gelspec spectrum build --input contexts.json
    gelspec sections ks --input contexts.json --format text

Exit status: 0 on success, 2 on validation errors, 3 when a size cap is hit.
Errors are printed as ``{"error": {"code": ..., "message": ...}}``.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import config
from .contexts import ContextPoset, poset_from_json
from .errors import ContextMissing, GelspecError, ParseError, SchemaError
from .linalg import matrix_from_json
from .sections import MAX_SECTIONS, find_sections, ks_certify
from .spectrum import (
    MAX_OPENS,
    build_sigma,
    check_sober,
    enumerate_frame,
    frame_size_estimate,
    heyting_implies,
    heyting_not,
    nonboolean_witness,
    sigma_hausdorffify,
    sigma_space,
)
from .topology import FiniteSpace, frame_points, hausdorffify, soberify
from .transform import gelfand

COMMANDS = {
    "spectrum": ("build", "opens"),
    "frame": ("heyting", "points", "sober"),
    "sections": ("find", "ks"),
    "transform": ("eval",),
    "space": ("soberify", "hausdorffify"),
}


@dataclass(frozen=True)
class RunConfig:
    input: str
    command: str
    tolerance: float | None = None
    max_sections: int = MAX_SECTIONS
    max_opens: int = MAX_OPENS
    output: str | None = None
    meet_close: bool | None = None
    format: str = "json"
    context: str | None = None
    observable: str | None = None

    def validate(self) -> None:
        if self.max_sections <= 0 or self.max_opens <= 0:
            raise SchemaError("caps must be positive")
        if self.tolerance is not None and not 0 < self.tolerance < 1e-3:
            raise SchemaError("tolerance must lie in (0, 1e-3)")
        group, _, action = self.command.partition(" ")
        if action not in COMMANDS.get(group, ()):
            raise SchemaError(f"unknown command {self.command!r}")


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def _load_poset(cfg: RunConfig, raw) -> ContextPoset:
    return poset_from_json(raw, meet_close=cfg.meet_close)


def _space_from_json(raw) -> FiniteSpace:
    if not isinstance(raw.get("points"), list) or not isinstance(raw.get("opens"), list):
        raise SchemaError("space file needs 'points' and 'opens' lists")
    try:
        return FiniteSpace.build([str(p) for p in raw["points"]], [frozenset(u) for u in raw["opens"]])
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"invalid space: {exc}") from None


def _spectrum_build(cfg, raw):
    poset = _load_poset(cfg, raw)
    sigma = build_sigma(poset)
    contexts = [
        {"label": label, "characters": c.size, "rank": poset.ranks[i], "above": sorted(poset.labels[j] for j in poset.upset(i))}
        for i, (label, c) in enumerate(zip(poset.labels, poset.contexts))
    ]
    return {"points": len(sigma), "contexts": contexts, "pi": sigma.pi_table()}


def _spectrum_opens(cfg, raw):
    poset = _load_poset(cfg, raw)
    frame = enumerate_frame(poset, cfg.max_opens)
    return {"points": len(build_sigma(poset)), "opens": len(frame), "estimate": frame_size_estimate(poset)}


def _frame_heyting(cfg, raw):
    poset = _load_poset(cfg, raw)
    frame = enumerate_frame(poset, cfg.max_opens)
    n = len(frame)
    implies = [[frame.index_of(heyting_implies(frame, u, v)) for v in frame.opens] for u in frame.opens]
    negation = [frame.index_of(heyting_not(frame, u)) for u in frame.opens]
    witness = nonboolean_witness(frame)
    return {
        "opens": n,
        "open_sets": [o.to_json() for o in frame.opens],
        "implies": implies,
        "negation": negation,
        "boolean": witness is None,
        "nonboolean_witness": None if witness is None else witness.to_json(),
    }


def _frame_points(cfg, raw):
    poset = _load_poset(cfg, raw)
    frame = enumerate_frame(poset, cfg.max_opens)
    pts = frame_points(frame.lattice)
    return {"points": len(build_sigma(poset)), "opens": len(frame), "frame_points": len(pts)}


def _frame_sober(cfg, raw):
    poset = _load_poset(cfg, raw)
    method = "frame" if frame_size_estimate(poset) <= cfg.max_opens else "principal"
    rep = check_sober(poset, cfg.max_opens, method)
    return {
        "method": method,
        "points": rep.points,
        "frame_points": rep.frame_points,
        "sober": rep.sober,
        "injective": rep.injective,
        "surjective": rep.surjective,
    }


def _sections_find(cfg, raw):
    poset = _load_poset(cfg, raw)
    secs = find_sections(poset, cfg.max_sections)
    return {"section_count": len(secs), "capped": len(secs) >= cfg.max_sections, "sections": [s.to_json() for s in secs]}


def _sections_ks(cfg, raw):
    poset = _load_poset(cfg, raw)
    rep = ks_certify(poset, max_sections=min(cfg.max_sections, 16))
    return rep.to_json()


def _transform_eval(cfg, raw):
    poset = _load_poset(cfg, raw)
    if cfg.context is None or cfg.observable is None:
        raise SchemaError("transform eval needs --context and --observable")
    try:
        idx = poset.index_by_label(cfg.context)
    except KeyError:
        raise ContextMissing(f"no context labelled {cfg.context!r}") from None
    text = cfg.observable
    obj = json.loads(text) if text.lstrip().startswith("{") else _read_json(text)
    a = matrix_from_json(obj)
    f = gelfand(poset.contexts[idx], a)
    return {"context": cfg.context, "characters": poset.contexts[idx].size, "values": f.to_json()}


def _input_space(cfg, raw) -> FiniteSpace:
    if "contexts" in raw:
        return sigma_space(enumerate_frame(_load_poset(cfg, raw), cfg.max_opens))
    return _space_from_json(raw)


def _space_soberify(cfg, raw):
    space = _input_space(cfg, raw)
    out = soberify(space)
    return {"input_points": len(space), "points": len(out), "space": out.to_json()}


def _space_hausdorffify(cfg, raw):
    if "contexts" in raw:
        # Σ's quotient only needs the specialization order, not the frame
        out, quotient = sigma_hausdorffify(_load_poset(cfg, raw))
    else:
        out, quotient = hausdorffify(_space_from_json(raw))
    return {"input_points": len(quotient), "points": len(out), "classes": list(out.labels), "quotient": quotient}


HANDLERS = {
    "spectrum build": _spectrum_build,
    "spectrum opens": _spectrum_opens,
    "frame heyting": _frame_heyting,
    "frame points": _frame_points,
    "frame sober": _frame_sober,
    "sections find": _sections_find,
    "sections ks": _sections_ks,
    "transform eval": _transform_eval,
    "space soberify": _space_soberify,
    "space hausdorffify": _space_hausdorffify,
}


def run(cfg: RunConfig) -> tuple[int, dict]:
    """Execute one command; returns ``(exit_status, report)``."""
    try:
        cfg.validate()
        raw = _read_json(cfg.input)
        if not isinstance(raw, dict):
            raise SchemaError("input must be a JSON object")
        if cfg.tolerance is not None:
            t = cfg.tolerance
            with config.override(sa=t, proj=t, spec=10 * t, cluster=10 * t):
                body = HANDLERS[cfg.command](cfg, raw)
        else:
            body = HANDLERS[cfg.command](cfg, raw)
    except GelspecError as exc:
        return exc.exit_status, exc.to_json()
    return 0, {"command": cfg.command, **body}


def _text(report: dict) -> str:
    if "error" in report:
        return f"error [{report['error']['code']}]: {report['error']['message']}\n"
    lines = [f"command: {report['command']}"]
    for key, value in report.items():
        if key == "command":
            continue
        if isinstance(value, (list, dict)):
            value = f"<{len(value)} entries>"
        lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


def render(report: dict, fmt: str) -> str:
    if fmt == "text":
        return _text(report)
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gelspec", description=__doc__.splitlines()[0])
    groups = parser.add_subparsers(dest="group", required=True)
    for group, actions in COMMANDS.items():
        gp = groups.add_parser(group)
        sub = gp.add_subparsers(dest="action", required=True)
        for action in actions:
            p = sub.add_parser(action)
            p.add_argument("--input", required=True, help="context file (or space file for 'space')")
            p.add_argument("--output", help="write the report here instead of stdout")
            p.add_argument("--tolerance", type=float, help="projection/self-adjointness tolerance")
            p.add_argument("--max-opens", type=int, default=MAX_OPENS)
            p.add_argument("--max-sections", type=int, default=MAX_SECTIONS)
            p.add_argument("--meet-close", action="store_true", default=None, help="close the poset under meets")
            p.add_argument("--format", choices=("json", "text"), default="json")
            if group == "transform":
                p.add_argument("--context", required=True, help="context label")
                p.add_argument("--observable", required=True, help="matrix JSON file or inline JSON object")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        input=args.input,
        command=f"{args.group} {args.action}",
        tolerance=args.tolerance,
        max_sections=args.max_sections,
        max_opens=args.max_opens,
        output=args.output,
        meet_close=args.meet_close,
        format=args.format,
        context=getattr(args, "context", None),
        observable=getattr(args, "observable", None),
    )
    status, report = run(cfg)
    text = render(report, cfg.format)
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
