"""Command-line front end: ``blobkit <command> [options]``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import jsonschema

from . import __version__
from .errors import BlobkitError

SPEC_SCHEMA = {
    "type": "object",
    "required": ["d", "lambda"],
    "properties": {
        "d": {"type": "integer", "minimum": 1},
        "l": {"type": "integer", "minimum": 0},
        "lambda": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["scalar", "qexp"],
                "properties": {
                    "scalar": {"type": "string", "pattern": r"^-?\d+(/\d+)?$"},
                    "qexp": {"type": "integer"},
                },
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}

_POS = {"type": "integer", "minimum": 1}
_NAT = {"type": "integer", "minimum": 0}

CONFIG_SCHEMA = {
    "type": "object",
    "required": ["command", "params"],
    "properties": {
        "command": {"enum": ["soergel", "decomp", "pascal", "idempotent", "walks", "orbits", "linkage",
                             "repcheck", "basiscount", "centercheck", "crossvalidate"]},
        "spec_path": {"type": ["string", "null"]},
        "output": {"type": ["string", "null"]},
        "params": {
            "type": "object",
            "properties": {
                "n": _NAT, "nmax": _NAT, "d": _POS, "rows": _POS, "radius": _POS,
                "l": {"type": "integer", "minimum": 0},
                "m": {"type": "integer"},
                "sign": {"enum": [1, -1]},
                "format": {"enum": ["ascii", "csv", "json"]},
            },
        },
    },
}


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    spec_path: str | None = None
    output: str | None = None

    def validate(self):
        jsonschema.validate(asdict(self), CONFIG_SCHEMA)


class UsageError(Exception):
    pass


def threads() -> int:
    raw = os.environ.get("BLOBKIT_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"BLOBKIT_THREADS must be an integer, got {raw!r}") from None


def load_spec(path: str):
    from .ring import Specialization

    with open(path) as fh:
        data = json.load(fh)
    jsonschema.validate(data, SPEC_SCHEMA)
    return Specialization.from_json(data)


# ---------------------------------------------------------------------------
# emitters


def _table_ascii(header, rows) -> str:
    cells = [list(map(str, header))] + [list(map(str, r)) for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _table_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def emit_table(header, rows, fmt: str, title: str = "") -> str:
    if fmt == "json":
        return json.dumps([dict(zip(map(str, header), r)) for r in rows], indent=2, sort_keys=True) + "\n"
    head = f"# blobkit {__version__}" + (f" {title}" if title else "") + "\n"
    body = _table_csv(header, rows) if fmt == "csv" else _table_ascii(header, rows)
    return head + body


def emit_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=str) + "\n"


# ---------------------------------------------------------------------------
# commands


def cmd_soergel(cfg: RunConfig) -> tuple[str, int]:
    from .alcove import build_rank1, soergel_n, vpoly_str

    p = cfg.params
    rows = p["rows"]
    lo = -((rows - 1) // 2)
    keys = list(range(lo, lo + rows))
    radius = max(abs(k) for k in keys) + 2
    cx = build_rank1(p["l"], p["m"], radius)
    orient = p.get("orientation", "graded")
    ns = {k: soergel_n(cx, cx.get(k), orient) for k in keys}
    cols = sorted({b.key for n in ns.values() for b in n.values} | set(keys))
    header = ["A\\B"] + cols
    body = []
    for k in keys:
        n = ns[k]
        body.append([k] + [vpoly_str(n[cx.get(c)]) if cx.get(c) in n.values else "." for c in cols])
    return emit_table(header, body, p.get("format", "ascii"), f"soergel l={p['l']} m={p['m']}"), 0


def cmd_decomp(cfg: RunConfig) -> tuple[str, int]:
    from .blob import decomposition_oracle

    p = cfg.params
    res = decomposition_oracle(p["n"], p.get("l"), p.get("m"), workers=threads())
    fmt = p.get("format", "ascii")
    if fmt == "json":
        return emit_json({
            "n": res.n, "l": res.l, "m": res.m, "weights": res.weights,
            "matrix": [[res.matrix[mu].get(lam, 0) for lam in res.weights] for mu in res.weights],
            "simple_dims": [res.simple_dims[w] for w in res.weights], "certified": res.certified,
        }), 0
    header = ["mu\\lam"] + res.weights
    body = [[mu] + row for mu, row in zip(res.weights, res.square())]
    body.append(["dim L"] + [res.simple_dims[w] for w in res.weights])
    return emit_table(header, body, fmt, f"decomp n={res.n} l={res.l} m={res.m}"), 0


def cmd_pascal(cfg: RunConfig) -> tuple[str, int]:
    from .blob import pascal_report

    p = cfg.params
    rep = pascal_report(p["nmax"], p["m"])
    fmt = p.get("format", "ascii")
    if fmt == "json":
        return emit_json(rep), 0
    header = ["n", "weight", "dim", "head", "factors"]
    body = [[r["n"], r["weight"], r["dim"], r["head"],
             " ".join(f"{f['weight']}:{f['dim']}" for f in r["factors"])] for r in rep]
    return emit_table(header, body, fmt, f"pascal m={p['m']}"), 0


def cmd_idempotent(cfg: RunConfig) -> tuple[str, int]:
    from .hecke import IdempotentSpec, build_idempotent, verify_idempotent

    p = cfg.params
    spec = IdempotentSpec(p.get("sign", 1), p["l"], p["n"], p["d"])
    at = load_spec(cfg.spec_path) if cfg.spec_path else None
    e = build_idempotent(spec)
    if at is not None:
        terms = {str(w): str(c) for w, c in build_idempotent(spec, at).items()}
    else:
        terms = e.to_dict()
    out = {"label": spec.label, "terms": terms}
    if p.get("verify"):
        rep = verify_idempotent(e, spec)
        out["verify"] = rep.to_dict()
        if not rep.passed:
            return emit_json(out), 1
    fmt = p.get("format", "json")
    if fmt == "json":
        return emit_json(out), 0
    return emit_table(["word", "coefficient"], sorted(terms.items()), fmt, spec.label), 0


def cmd_walks(cfg: RunConfig) -> tuple[str, int]:
    from .walks import Multipartition, lambda_of_walk, standard_walks

    p = cfg.params
    mu = Multipartition.parse(p["mu"], p.get("d"))
    ws = standard_walks(mu, one_row=mu.is_one_row)
    eig = {str(w): [str(x) for x in lambda_of_walk(w).as_laurent(mu.d)] for w in ws}
    fmt = p.get("format", "json")
    if fmt == "json":
        return emit_json({"mu": str(mu), "walks": list(eig), "eigenvalues": eig}), 0
    return emit_table(["walk", "eigenvalues"], [[w, "; ".join(v)] for w, v in eig.items()], fmt, str(mu)), 0


_HYP = re.compile(r"\((\d+),(\d+);(-?\d+)\)")


def parse_hyperplanes(text: str):
    from .walks import Hyperplane

    s = text.replace(" ", "")
    found = _HYP.findall(s)
    if not found or _HYP.sub("", s).strip(","):
        raise UsageError(f"cannot parse hyperplanes {text!r}; use (i,j;x),(i,j;x)")
    return [Hyperplane(int(i), int(j), int(x)) for i, j, x in found]


def cmd_orbits(cfg: RunConfig) -> tuple[str, int]:
    from .linkage import induced_group
    from .walks import Walk, walk_orbit

    p = cfg.params
    w = Walk(p["walk"])
    if cfg.spec_path:
        gens = induced_group(load_spec(cfg.spec_path), bound=max(len(w), 1) + 1).generators
    elif p.get("gens"):
        gens = parse_hyperplanes(p["gens"])
    else:
        raise UsageError("orbits needs --gens or --spec")
    orbit = sorted(str(v) for v in walk_orbit(w, gens))
    return emit_json({"walk": str(w), "generators": [str(h) for h in gens], "orbit": orbit}), 0


def cmd_linkage(cfg: RunConfig) -> tuple[str, int]:
    from .linkage import induced_group, linkage_classes, predicted_homs

    p = cfg.params
    if not cfg.spec_path:
        raise UsageError("linkage needs --spec")
    k = load_spec(cfg.spec_path)
    d, n = p["d"], p["n"]
    G = induced_group(k, d, bound=n + 1)
    classes = linkage_classes(n, d, k, p.get("weights", "onerow"))
    homs = predicted_homs(n, d, k)
    out = {
        "generators": [str(h) for h in G.generators],
        "classes": [[str(mu) for mu in c] for c in classes],
        "homs": [h.to_dict() for h in homs],
    }
    fmt = p.get("format", "json")
    if fmt == "json":
        return emit_json(out), 0
    rows = [[i, " ".join(c)] for i, c in enumerate(out["classes"])]
    return emit_table(["class", "weights"], rows, fmt, "generators " + " ".join(out["generators"])), 0


def _fmt_residual(v):
    if isinstance(v, (int, float)):
        return v
    return str(v)


def cmd_repcheck(cfg: RunConfig) -> tuple[str, int]:
    from . import tensor

    p = cfg.params
    which = p["which"]
    n = p.get("n", 3)
    out: dict = {"which": which, "n": n}
    if which in ("rho0", "rhos"):
        muq = p.get("muq")
        if muq is None:
            raise UsageError("rho checks need --muq")
        muq = Fraction(muq) if "." not in muq else float(muq)
        params = tensor.RhoParams(muq, p["m"])
        rep = tensor.rho_rep(params, n, which)
        q = params.values()[0]
        res = tensor.rho_relations(rep, n, q, p["m"])
        out["angles"] = {"muq": str(params.muq), "mur": str(params.mur),
                         "mus": str(params.mus), "mut": str(params.mut)}
        if which == "rhos":
            r = tensor._solve_rhos_r(params)
            out["r"] = [r.real, r.imag]
        out["relations"] = {k: _fmt_residual(v) for k, v in res.items()}
        tol = p.get("tol", 1e-10)
        ok = all((abs(v) < tol) if isinstance(v, float) else v == 0 for v in res.values())
    elif which == "fmb":
        b = p.get("b", "identity")
        word = () if b in ("identity", "", None) else tuple(int(x) for x in b.split(","))
        rep = tensor.fmb_blob_parameter(p["m"], word, n)
        out.update(rep.to_dict())
        ok = all(v == 0 for v in rep.relations.values()) and rep.m_blob is not None
    elif which in ("cabling", "C", "S"):
        variant = p.get("variant", "C" if which == "cabling" else which)
        q = Fraction(p.get("q", "3/2"))
        _, res = tensor.cabling_maps(variant, n, q, check=False)
        out["variant"] = variant
        out["relations"] = {k: str(v) for k, v in res.items()}
        ok = all(v == 0 for v in res.values())
    elif which == "deformed":
        q, r, s = (Fraction(p.get(k, "3/2")) for k in ("q", "r", "s"))
        res = tensor.deformed_n3_residual(q, r, s, n)
        out.update({"q": str(q), "r": str(r), "s": str(s), "residual_zero": res.is_zero()})
        ok = True
    else:
        raise UsageError(f"unknown representation {which!r}")
    out["passed"] = ok
    return emit_json(out), 0 if ok else 1


def cmd_basiscount(cfg: RunConfig) -> tuple[str, int]:
    from .hecke import conjectured_basis_count

    p = cfg.params
    c = conjectured_basis_count(p["n"], p["d"])
    if p.get("format", "ascii") == "json":
        return emit_json({"n": p["n"], "d": p["d"], "count": c}), 0
    return f"{c}\n", 0


def cmd_centercheck(cfg: RunConfig) -> tuple[str, int]:
    from .hecke import center_checks

    rep = center_checks(cfg.params["n"], cfg.params["d"])
    return emit_json(rep), 0 if rep["passed"] else 1


def cmd_crossvalidate(cfg: RunConfig) -> tuple[str, int]:
    from .alcove import decomposition_prediction
    from .blob import decomposition_oracle

    p = cfg.params
    cases = [(p["l"], p["m"])] if "l" in p else [(3, 1), (4, 1), (5, 2)]
    report = []
    ok = True
    for l, m in cases:
        for n in range(p.get("nmax", 8) + 1):
            regular, mat, _ = decomposition_prediction(n, l, m)
            res = decomposition_oracle(n, l, m, workers=threads())
            pred = [[mat[mu][lam] for lam in regular] for mu in regular]
            got = res.restrict(regular).square()
            agree = pred == got and res.certified
            ok &= agree
            entry = {"l": l, "m": m, "n": n, "agree": agree}
            if not agree:
                entry.update({"weights": regular, "prediction": pred, "oracle": got})
            report.append(entry)
    return emit_json({"passed": ok, "cases": report}), 0 if ok else 1


COMMANDS = {
    "soergel": cmd_soergel,
    "decomp": cmd_decomp,
    "pascal": cmd_pascal,
    "idempotent": cmd_idempotent,
    "walks": cmd_walks,
    "orbits": cmd_orbits,
    "linkage": cmd_linkage,
    "repcheck": cmd_repcheck,
    "basiscount": cmd_basiscount,
    "centercheck": cmd_centercheck,
    "crossvalidate": cmd_crossvalidate,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="blobkit", description=__doc__)
    ap.add_argument("--version", action="version", version=f"blobkit {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_, **kw):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--output", "-o", help="write to this file instead of stdout")
        fmts = kw.pop("formats", ("ascii", "csv", "json"))
        sp.add_argument("--format", choices=fmts, default=kw.pop("default_format", fmts[0]))
        return sp

    sp = add("soergel", "n_A(B) table for the rank-one alcove geometry")
    sp.add_argument("--l", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--rows", type=int, default=5)
    sp.add_argument("--orientation", choices=("graded", "ungraded"), default="graded")

    sp = add("decomp", "blob decomposition matrix from the Gram/Jucys-Murphy oracle")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--l", type=int)
    sp.add_argument("--m", type=int)

    sp = add("pascal", "composition factors at generic q")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--nmax", type=int, default=6)

    sp = add("idempotent", "normal form of E(sign, l, n)", default_format="json")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--l", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--sign", type=int, choices=(1, -1), default=1)
    sp.add_argument("--spec", dest="spec_path")
    sp.add_argument("--verify", action="store_true")

    sp = add("walks", "standard walks of a multipartition", default_format="json")
    sp.add_argument("--mu", required=True)
    sp.add_argument("--d", type=int)

    sp = add("orbits", "orbit of a walk under reflections", formats=("json",))
    sp.add_argument("--walk", required=True)
    sp.add_argument("--gens")
    sp.add_argument("--spec", dest="spec_path")

    sp = add("linkage", "linkage classes and predicted homomorphisms", default_format="json")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--spec", dest="spec_path", required=True)
    sp.add_argument("--weights", choices=("onerow", "all"), default="onerow")

    sp = add("repcheck", "relation check for a tensor-space representation", formats=("json",))
    sp.add_argument("--which", required=True, choices=("rho0", "rhos", "fmb", "cabling", "C", "S", "deformed"))
    sp.add_argument("--n", type=int, default=3)
    sp.add_argument("--m", type=int, default=2)
    sp.add_argument("--muq")
    sp.add_argument("--b", default="identity")
    sp.add_argument("--q")
    sp.add_argument("--r")
    sp.add_argument("--s")
    sp.add_argument("--variant", choices=("C", "S"))
    sp.add_argument("--tol", type=float, default=1e-10)

    sp = add("basiscount", "size of the conjectured basis", formats=("ascii", "json"))
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)

    sp = add("centercheck", "centre checks for small Hecke algebras", formats=("json",))
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)

    sp = add("crossvalidate", "alcove prediction against the blob oracle", formats=("json",))
    sp.add_argument("--l", type=int)
    sp.add_argument("--m", type=int)
    sp.add_argument("--nmax", type=int, default=8)
    return ap


def parse_config(argv) -> RunConfig:
    ns = vars(build_parser().parse_args(argv))
    command = ns.pop("command")
    output = ns.pop("output", None)
    spec_path = ns.pop("spec_path", None)
    params = {k: v for k, v in ns.items() if v is not None}
    if command == "crossvalidate" and ("l" in params) != ("m" in params):
        raise UsageError("crossvalidate takes --l and --m together")
    cfg = RunConfig(command, params, spec_path, output)
    try:
        cfg.validate()
    except jsonschema.ValidationError as exc:
        raise UsageError(f"invalid parameters: {exc.message}") from None
    return cfg


def run(argv=None, stdout=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
        text, code = COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"blobkit: usage error: {exc}", file=sys.stderr)
        return 2
    except (BlobkitError, ArithmeticError, ValueError, jsonschema.ValidationError, OSError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}, sort_keys=True), file=sys.stderr)
        return 1
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
