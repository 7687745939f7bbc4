"""Problem files: a sectioned ``key = value`` text format, or the same layout as JSON.

Example::

    [source]
    vars = x, y
    weights = 4, 1

    [target]
    vars = X, Y, Z
    weights = 4, 5, 6

    [map]
    X = x
    Y = y5-xy
    Z = y6+xy2

    [unfolding]            # optional
    source_vars = a, b
    source_weights = 2, 3
    target_vars = A, B
    target_weights = 2, 3
    Y = y5-xy+ay3+by2      # overrides; unlisted components are copied from [map]

    [tasks]
    run = image, fitting1, tower

    [options]
    budget = 10000000
    format = text
"""

from __future__ import annotations

import configparser
import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ParseError
from .germ import MapGerm
from .polyring import PolyRing

TASKS = ("image", "fitting1", "tower", "presentation", "double-points", "consistency")
FORMATS = ("text", "structured")


@dataclass
class ProblemSpec:
    source_vars: list[str]
    source_weights: list[int]
    target_vars: list[str]
    target_weights: list[int]
    components: list[str]
    tasks: list[str]
    unfolding: dict | None = None
    budget: int | None = None
    format: str = "text"
    name: str = ""
    lines: dict = field(default_factory=dict, repr=False)

    def germ(self) -> MapGerm:
        return _build_germ(self.source_vars, self.source_weights, self.target_vars,
                           self.target_weights, self.components, (), self._where("map"),
                           [self._where(f"map.{v}") for v in self.target_vars])

    def unfolded_germ(self) -> MapGerm | None:
        u = self.unfolding
        if not u:
            return None
        svars = self.source_vars + u["source_vars"]
        sw = self.source_weights + u["source_weights"] if self.source_weights else []
        tvars = self.target_vars + u["target_vars"]
        tw = self.target_weights + u["target_weights"] if self.target_weights else []
        if len(u["source_vars"]) != len(u["target_vars"]):
            raise ParseError("unfolding needs as many source as target parameters",
                             line=self._where("unfolding"))
        comps = [u["components"].get(v, c) for v, c in zip(self.target_vars, self.components)]
        comps += list(u["source_vars"])
        lines = [self._where(f"unfolding.{v}") or self._where(f"map.{v}") for v in self.target_vars]
        return _build_germ(svars, sw, tvars, tw, comps, tuple(u["target_vars"]),
                           self._where("unfolding"), lines)

    def _where(self, key: str) -> int | None:
        return self.lines.get(key)


def _build_germ(svars, sw, tvars, tw, comps, params, line, comp_lines=()) -> MapGerm:
    if len(tvars) != len(svars) + 1:
        raise ParseError(
            f"{len(svars)} source variables need {len(svars) + 1} target variables, got {len(tvars)}",
            line=line)
    if len(comps) != len(tvars):
        raise ParseError(f"expected {len(tvars)} components, got {len(comps)}", line=line)
    comp_lines = list(comp_lines) + [line] * (len(comps) - len(comp_lines))
    try:
        ring = PolyRing(tuple(svars), tuple(sw))
    except ValueError as exc:
        raise ParseError(str(exc), line=line) from None
    for c, ln in zip(comps, comp_lines):
        try:
            p = ring.parse(c)
        except ParseError as exc:
            raise ParseError(exc.message, exc.text, exc.position, line=ln or line) from None
        if p.constant_term():
            raise ParseError(f"component {c!r} has a nonzero constant term; germs map 0 to 0",
                             line=ln or line)
    try:
        return MapGerm.from_strings(svars, tvars, comps, sw, tw, params)
    except ParseError as exc:
        raise ParseError(exc.message, exc.text, exc.position, line=line) from None
    except ValueError as exc:
        raise ParseError(str(exc), line=line) from None


def _split(value: str) -> list[str]:
    return [v.strip() for v in re.split(r"[,\s]+", value.strip()) if v.strip()]


def _ints(value, line) -> list[int]:
    items = value if isinstance(value, list) else _split(str(value))
    try:
        return [int(v) for v in items]
    except ValueError:
        raise ParseError(f"expected integers, got {value!r}", line=line) from None


def _line_numbers(text: str) -> dict:
    """First line of each section and ``section.key`` (1-based)."""
    out: dict = {}
    section = None
    for no, raw in enumerate(text.splitlines(), 1):
        s = raw.strip()
        m = re.match(r"\[(\w[\w-]*)\]", s)
        if m:
            section = m.group(1)
            out.setdefault(section, no)
            continue
        m = re.match(r"([^=:#;\s]+)\s*[=:]", s)
        if m and section:
            out.setdefault(f"{section}.{m.group(1)}", no)
    return out


def parse_problem_text(text: str, *, name: str = "") -> ProblemSpec:
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, line=exc.lineno) from None
        return problem_from_dict(data, name=name)
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), interpolation=None)
    cp.optionxform = str  # variable names are case-sensitive
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ParseError(str(exc).splitlines()[0], line=getattr(exc, "lineno", None)) from None
    lines = _line_numbers(text)
    data: dict = {}
    for sec in cp.sections():
        data[sec] = dict(cp[sec])
    return problem_from_dict(data, name=name, lines=lines)


def problem_from_dict(data: dict, *, name: str = "", lines: dict | None = None) -> ProblemSpec:
    lines = lines or {}

    def need(sec: str) -> dict:
        if sec not in data:
            raise ParseError(f"missing [{sec}] section")
        return data[sec]

    def names(value, line) -> list[str]:
        items = value if isinstance(value, list) else _split(str(value))
        for v in items:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", v):
                raise ParseError(f"bad variable name {v!r}", line=line)
        return items

    src, tgt, mp = need("source"), need("target"), need("map")
    svars = names(src.get("vars", ""), lines.get("source.vars"))
    tvars = names(tgt.get("vars", ""), lines.get("target.vars"))
    sw = _ints(src["weights"], lines.get("source.weights")) if "weights" in src else []
    tw = _ints(tgt["weights"], lines.get("target.weights")) if "weights" in tgt else []
    if not svars or not tvars:
        raise ParseError("source and target need at least one variable")
    if isinstance(mp, list):
        comps = [str(c) for c in mp]
    else:
        missing = [v for v in tvars if v not in mp]
        if missing:
            raise ParseError(f"[map] lacks components for {', '.join(missing)}",
                             line=lines.get("map"))
        extra = [k for k in mp if k not in tvars]
        if extra:
            raise ParseError(f"[map] names unknown target variables {', '.join(extra)}",
                             line=lines.get(f"map.{extra[0]}"))
        comps = [str(mp[v]) for v in tvars]

    unfolding = None
    if "unfolding" in data:
        u = data["unfolding"]
        ln = lines.get("unfolding")
        unfolding = {
            "source_vars": names(u.get("source_vars", ""), ln),
            "target_vars": names(u.get("target_vars", ""), ln),
            "source_weights": _ints(u["source_weights"], ln) if "source_weights" in u else [],
            "target_weights": _ints(u["target_weights"], ln) if "target_weights" in u else [],
            "components": {k: str(v) for k, v in u.items()
                           if k not in ("source_vars", "target_vars", "source_weights",
                                        "target_weights")},
        }
        if bool(unfolding["source_weights"]) != bool(sw) or bool(unfolding["target_weights"]) != bool(tw):
            raise ParseError("give unfolding weights exactly when the base weights are given",
                             line=ln)

    tasks_sec = data.get("tasks", {})
    raw = tasks_sec.get("run", "") if isinstance(tasks_sec, dict) else tasks_sec
    tasks = raw if isinstance(raw, list) else _split(str(raw))
    if not tasks:
        raise ParseError("task list is empty", line=lines.get("tasks"))
    for t in tasks:
        if t not in TASKS:
            raise ParseError(f"unknown task {t!r} (choose from {', '.join(TASKS)})",
                             line=lines.get("tasks.run"))

    opts = data.get("options", {})
    budget = int(opts["budget"]) if "budget" in opts else None
    fmt = str(opts.get("format", "text"))
    if fmt not in FORMATS:
        raise ParseError(f"unknown format {fmt!r}", line=lines.get("options.format"))

    spec = ProblemSpec(svars, sw, tvars, tw, comps, list(tasks), unfolding, budget, fmt, name,
                       lines)
    # surface polynomial and dimension errors at parse time
    spec.germ()
    spec.unfolded_germ()
    return spec


def load_problem(path: str | Path) -> ProblemSpec:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return parse_problem_text(text, name=path.stem)


__all__ = ["ProblemSpec", "TASKS", "load_problem", "parse_problem_text", "problem_from_dict"]
