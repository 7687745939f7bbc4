"""Cross-check scripts for external computer algebra systems.

The scripts reproduce the pipeline so results can be verified independently;
nothing here runs an external program.
"""

from __future__ import annotations

from .errors import FitcalcError
from .germ import MapGerm
from .problem import ProblemSpec

DIALECTS = ("singular", "singular-preimage", "macaulay2")


class UnsupportedDialect(FitcalcError, ValueError):
    pass


def _style(*rings) -> str:
    single = all(len(v) == 1 for r in rings for v in r.vars)
    return "compact" if single else "caret"


def _sing_ring(name: str, ring) -> str:
    return f"ring {name}=0,({','.join(ring.vars)}),(wp({','.join(map(str, ring.weights))}));"


def _singular_elimination(f: MapGerm, tasks) -> str:
    st = _style(f.source, f.target)
    graph = ",".join(f"{v}-({c.to_str(st)})" if len(c) > 1 else f"{v}-{c.to_str(st)}"
                     for v, c in zip(f.target.vars, f.components))
    kill = "".join(f.source.vars) if st == "compact" else "*".join(f.source.vars)
    lines = [
        _sing_ring("t", f.target),
        _sing_ring("s", f.source),
        "def st=s+t;",
        "setring st;",
        f"ideal I1={graph};",
        f"ideal h=eliminate(I1,{kill});",
        "h;",
    ]
    if set(tasks) - {"image"}:
        lines += ["setring t;", "ideal h=imap(st,h);"]
        lines += _singular_fitting(f, tasks)
    return "\n".join(lines) + "\n"


def _singular_fitting(f: MapGerm, tasks) -> list[str]:
    out = [
        "ideal jh=jacob(h);",
        "ideal a=jh[1];",
        "qring q=std(h);",
        "ideal jh=imap(t,jh);",
        "ideal a=imap(t,a);",
        "ideal fit1q=quotient(a,quotient(a*jh,jh));",
        "setring t;",
        "ideal fit1=std(imap(q,fit1q)+h);",
        "fit1;",
    ]
    if {"tower", "consistency"} & set(tasks):
        out.append("ideal fit0=std(h);")
        prev, cur = "fit0", "fit1"
        for k in range(2, _tower_length(f) + 1):
            out.append(f"ideal fit{k}=std(quotient({cur}*{cur},{prev}));")
            out.append(f"fit{k};")
            prev, cur = cur, f"fit{k}"
    return out


def _tower_length(f: MapGerm) -> int:
    from .presentation import qalgebra_basis

    try:
        return qalgebra_basis(f).multiplicity
    except FitcalcError:
        return 2


def _singular_preimage(f: MapGerm, tasks) -> str:
    st = _style(f.source, f.target)
    comps = ",".join(c.to_str(st) for c in f.components)
    lines = [
        _sing_ring("t", f.target),
        _sing_ring("s", f.source),
        "ideal p=0;",
        f"map f=t,{comps};",
        "setring t;",
        "ideal h=preimage(s,f,p);",
        "h;",
    ]
    if set(tasks) - {"image"}:
        lines += _singular_fitting(f, tasks)
    return "\n".join(lines) + "\n"


def _m2_ring(ring) -> str:
    return f"QQ[{','.join(ring.vars)},Degrees=>{{{','.join(map(str, ring.weights))}}}]"


def _macaulay2(f: MapGerm, tasks) -> str:
    comps = ",".join(c.to_str("caret") for c in f.components)
    lines = [
        f"S={_m2_ring(f.source)}",
        f"T={_m2_ring(f.target)}",
        f"f=map(S,T,{{{comps}}})",
        "h=ker f",
    ]
    if set(tasks) - {"image"}:
        lines += [
            "pr=relations trim pushForward(f,S^1)",
            "fitt=apply(numgens target pr + 1, k->trim fittingIdeal(k, coker pr))",
        ]
    return "\n".join(lines) + "\n"


def emit_crosscheck(spec: ProblemSpec, dialect: str) -> str:
    if dialect not in DIALECTS:
        raise UnsupportedDialect(f"unsupported dialect {dialect!r} (choose from {', '.join(DIALECTS)})")
    f = spec.germ()
    if dialect == "singular":
        return _singular_elimination(f, spec.tasks)
    if dialect == "singular-preimage":
        return _singular_preimage(f, spec.tasks)
    return _macaulay2(f, spec.tasks)
