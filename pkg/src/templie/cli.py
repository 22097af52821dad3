"""Command-line interface: ``templie basis|matrix|verify|spectrum|decompose``.

Exit codes: 0 pass, 1 verification failure, 2 usage error, 3 size cap.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from fractions import Fraction

from . import __version__
from .diagrams import SizeError
from .gmaps import compare_definitions, special_link_formulas_check, verify_gp_identity, verify_sufficient_conditions
from .intertwiner import f_matrix, verify_injectivity, verify_intertwining, verify_pseudo_hermitian
from .links import check_nd, enumerate_links, gram_matrix, hamiltonian_matrix, verify_gram_adjoint
from .poly import PolyMatrix, ScalarPoly, q_from_beta
from .spectral import (BETA_GRID, DEFAULT_TOL, FAIL, INCONCLUSIVE, PASS, check_positive_definite,
                       gram_positivity_scan, jordan_detect, loop_reality, spectral_inclusion,
                       xxz_reality)
from .spins import enumerate_sector, h_spin_matrix, h_spin_sector, h_xxz_matrix, h_xxz_sector, state_to_string
from .structure import GENERIC, dimension_audit, sector_decomposition

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3
EXACT_CAP = 12
SWEEP_CAP = 10


class CapError(Exception):
    pass


class UsageError(Exception):
    pass


def caps() -> tuple[int, int]:
    env = os.environ.get("TEMPLIE_MAX_N")
    if env:
        return int(env), int(env)
    return EXACT_CAP, SWEEP_CAP


def enforce(n: int, sweep: bool = False) -> None:
    exact, full = caps()
    limit = full if sweep else exact
    if n > limit:
        raise CapError(f"n={n} exceeds the {'sweep' if sweep else 'exact'} cap {limit} "
                       "(set TEMPLIE_MAX_N to override)")


# serialisation ------------------------------------------------------------------------


def poly_json(p: ScalarPoly) -> list[str]:
    return [str(c) for c in p.coeffs]


def plain(x):
    """Recursively convert residual records to JSON-ready values."""
    if isinstance(x, ScalarPoly):
        return poly_json(x)
    if isinstance(x, (list, tuple)):
        return [plain(y) for y in x]
    if isinstance(x, Fraction):
        return str(x)
    return x


def matrix_json(m: PolyMatrix) -> list[list[list[str]]]:
    return [[poly_json(x) for x in row] for row in m.data]


def num(x: float, digits: int = 15) -> str:
    return f"{x:.{digits}g}"


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a number: {text}") from exc


def parse_betas(text: str | None, default=BETA_GRID) -> list[float]:
    """'a:b:step' ranges (inclusive) or comma lists."""
    if text is None:
        return list(default)
    out: list[float] = []
    for chunk in text.split(","):
        if ":" in chunk:
            parts = chunk.split(":")
            if len(parts) != 3:
                raise UsageError(f"bad range {chunk}")
            a, b, st = (float(x) for x in parts)
            if st <= 0:
                raise UsageError("range step must be positive")
            k = 0
            while a + k * st <= b + 1e-12:
                out.append(round(a + k * st, 12))
                k += 1
        else:
            out.append(float(chunk))
    return out


def parse_window(text: str) -> tuple[float, float]:
    parts = text.replace(",", ":").split(":")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except (IndexError, ValueError) as exc:
        raise UsageError(f"bad window {text}; expected lo:hi") from exc
    if lo >= hi:
        raise UsageError("window must have lo < hi")
    return lo, hi


def parse_q(text: str) -> complex:
    try:
        return complex(text.replace("i", "j"))
    except ValueError as exc:
        raise UsageError(f"bad q value {text}") from exc


def envelope(command: str, params: dict, status: str, result, timestamp: bool) -> dict:
    out = {"command": command, "version": __version__, "params": params,
           "status": status, "result": result}
    if timestamp:
        out["timestamp"] = datetime.now(timezone.utc).isoformat()
    return out


def _csv_rows(result) -> tuple[list[str], list[list]]:
    if isinstance(result, dict) and "rows" in result and "header" in result:
        return result["header"], result["rows"]
    if isinstance(result, list) and result and isinstance(result[0], dict):
        header = sorted({k for r in result for k in r})
        return header, [[json.dumps(r.get(k)) if isinstance(r.get(k), (list, dict)) else r.get(k)
                         for k in header] for r in result]
    if isinstance(result, dict):
        return ["key", "value"], [[k, json.dumps(v)] for k, v in result.items()]
    return ["value"], [[json.dumps(result)]]


def render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        header, rows = _csv_rows(doc["result"])
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue()
    return doc.get("pretty") or pretty(doc)


def pretty(doc: dict) -> str:
    lines = [f"{doc['command']}: {doc['status']}"]
    res = doc["result"]
    if isinstance(res, list):
        for r in res:
            lines.append("  " + (json.dumps(r, sort_keys=True) if not isinstance(r, str) else r))
    elif isinstance(res, dict):
        for k, v in res.items():
            lines.append(f"  {k}: {json.dumps(v) if not isinstance(v, str) else v}")
    else:
        lines.append(f"  {res}")
    return "\n".join(lines) + "\n"


# commands -------------------------------------------------------------------------------


def cmd_basis(args) -> tuple[dict, int]:
    if args.links:
        n, d = int(args.links[0]), int(args.links[1])
        try:
            check_nd(n, d)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        enforce(n)
        rows = [[k, str(w), json.dumps(w.label()), str(w.dyadic())]
                for k, w in enumerate(enumerate_links(n, d))]
        res = {"header": ["index", "link", "arcs", "dyadic"], "rows": rows}
        pretty_txt = "\n".join(f"{r[0]:>3}  {r[1]}  {r[2]}  {r[3]}" for r in rows)
        return {"params": {"links": [n, d]}, "result": res, "pretty": pretty_txt + "\n"}, EXIT_OK
    L, s = int(args.spins[0]), parse_fraction(args.spins[1])
    try:
        sec = enumerate_sector(L, s)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    enforce(L + 1)
    rows = [[k, state_to_string(x, L), str(Fraction(x, 2 ** L))] for k, x in enumerate(sec.basis)]
    res = {"header": ["index", "state", "dyadic"], "rows": rows}
    pretty_txt = "\n".join(f"{r[0]:>3}  |{r[1]}>  {r[2]}" for r in rows)
    return {"params": {"spins": [L, str(s)]}, "result": res, "pretty": pretty_txt + "\n"}, EXIT_OK


def _labels_links(n, d):
    return [json.dumps(w.label()) for w in enumerate_links(n, d)]


def _labels_states(L, s):
    return enumerate_sector(L, s).labels()


def cmd_matrix(args) -> tuple[dict, int]:
    kind = args.kind
    n = args.n
    enforce(n if kind != "spin" else n + 1)
    second = args.second
    beta = parse_fraction(args.beta) if args.beta is not None else None
    params: dict = {"kind": kind, "n": n, "second": second}
    if kind in ("loop", "f", "S", "gram"):
        if second is None:
            raise UsageError(f"matrix {kind} needs n and d")
        d = int(second)
        try:
            check_nd(n, d)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        if kind == "loop":
            m, rows, cols = hamiltonian_matrix(n, d), _labels_links(n, d), _labels_links(n, d)
        elif kind == "gram":
            m, rows, cols = gram_matrix(n, d), _labels_links(n, d), _labels_links(n, d)
        elif kind == "f":
            m = f_matrix(n, d).f
            rows, cols = _labels_states(n - 1, Fraction(d - 1, 2)), _labels_links(n, d)
        else:
            m, rows, cols = f_matrix(n, d).S, _labels_links(n, d), _labels_links(n, d)
    elif kind == "spin":
        L = n
        if second is None:
            m = h_spin_matrix(L)
            rows = cols = [state_to_string(x, L) for x in range(2 ** L)]
        else:
            s = parse_fraction(second)
            try:
                m = h_spin_sector(L, s)
            except ValueError as exc:
                raise UsageError(str(exc)) from exc
            rows = cols = _labels_states(L, s)
    else:  # xxz, numeric only
        if args.q is not None:
            q = parse_q(args.q)
        elif beta is not None:
            q = q_from_beta(float(beta)).q
        else:
            raise UsageError("matrix xxz needs --q or --beta")
        if second is None:
            arr = h_xxz_matrix(n, q)
            rows = cols = [state_to_string(x, n) for x in range(2 ** n)]
        else:
            s = parse_fraction(second)
            arr = h_xxz_sector(n, q, s)
            rows = cols = _labels_states(n, s)
        params["q"] = [q.real, q.imag]
        entries = [[[num(z.real), num(z.imag)] for z in row] for row in arr]
        res = {"rows": rows, "cols": cols, "entries": entries, "exact": False}
        txt = "\n".join("[ " + "  ".join(f"{z.real:+.6f}{z.imag:+.6f}j" for z in row) + " ]" for row in arr)
        return _matrix_doc(params, res, txt, rows, cols, arr=arr), EXIT_OK
    if beta is not None:
        params["beta"] = str(beta)
        vals = m.evaluate(beta)
        entries = [[str(x) for x in row] for row in vals]
        res = {"rows": rows, "cols": cols, "entries": entries, "exact": False}
        txt = "\n".join("[ " + "  ".join(str(x) for x in row) + " ]" for row in vals)
    else:
        res = {"rows": rows, "cols": cols, "entries": matrix_json(m), "exact": True}
        txt = m.pretty()
    return _matrix_doc(params, res, txt + "\n", rows, cols, poly=m if beta is None else None), EXIT_OK


def _matrix_doc(params, res, txt, rows, cols, poly=None, arr=None) -> dict:
    header = ["row"] + list(cols)
    csv_rows = []
    for i, r in enumerate(rows):
        vals = res["entries"][i]
        csv_rows.append([r] + [json.dumps(v) if isinstance(v, list) else v for v in vals])
    res = dict(res)
    res_csv = {"header": header, "rows": csv_rows}
    return {"params": params, "result": res, "csv": res_csv, "pretty": txt}


# verification sweeps -------------------------------------------------------------------


def _nd_pairs(n_lo: int, n_hi: int):
    for n in range(n_lo, n_hi + 1):
        for d in range(n % 2, n + 1, 2):
            yield n, d


def _instances(suite: str, args) -> list[tuple]:
    if suite in ("intertwine", "pseudo", "inject", "gram-adjoint"):
        if args.n is not None:
            ds = [args.d] if args.d is not None else list(range(args.n % 2, args.n + 1, 2))
            return [(suite, args.n, d) for d in ds]
        default = {"intertwine": 9, "pseudo": 9, "inject": 10, "gram-adjoint": 8}[suite]
        top = args.n_max if args.n_max is not None else default
        return [(suite, n, d) for n, d in _nd_pairs(1, top)]
    if suite == "gp":
        top = args.n_max if args.n_max is not None else 8
        ns = [args.n] if args.n is not None else list(range(2, top + 1, 2))
        return [(suite, n, p) for n in ns for p in range(n // 2)] + [("gp-defs", n, 0) for n in ns]
    if suite == "suf":
        return [(suite, args.p_max, args.a_max, args.b_max)]
    if suite == "special":
        # the three-block forms need at least 10 nodes
        top = max(args.n_max if args.n_max is not None else 10, 10)
        return [(suite, top, args.p_max)]
    raise UsageError(f"unknown suite {suite}")


def _max_n(inst: tuple) -> int:
    if inst[0] in ("suf",):
        return 0
    return inst[1]


def run_instance(inst: tuple) -> dict:
    suite = inst[0]
    if suite == "intertwine":
        r = verify_intertwining(inst[1], inst[2])
        return {"suite": suite, "n": inst[1], "d": inst[2], "ok": r.ok,
                "residual": plain(r.residual)}
    if suite == "pseudo":
        r = verify_pseudo_hermitian(inst[1], inst[2])
        return {"suite": suite, "n": inst[1], "d": inst[2], "ok": r.ok,
                "residual": plain(r.residual)}
    if suite == "inject":
        r = verify_injectivity(inst[1], inst[2])
        return {"suite": suite, "n": inst[1], "d": inst[2], "ok": r.ok, "pivots": r.pivot_states,
                "dim_gap": r.dim_gap, "problems": r.problems}
    if suite == "gram-adjoint":
        bad = verify_gram_adjoint(inst[1], inst[2])
        return {"suite": suite, "n": inst[1], "d": inst[2], "ok": not bad, "failing_generators": bad}
    if suite == "gp":
        r = verify_gp_identity(inst[1], inst[2])
        return {"suite": suite, "n": inst[1], "p": inst[2], "ok": r.ok,
                "residual": plain(r.residual)}
    if suite == "gp-defs":
        r = compare_definitions(inst[1])
        return {"suite": suite, "n": inst[1], "ok": r.ok, "residual": plain(r.residual)}
    if suite == "suf":
        rep = verify_sufficient_conditions(inst[1], inst[2], inst[3])
        return {"suite": suite, "p_max": inst[1], "a_max": inst[2], "b_max": inst[3], "ok": rep.ok,
                "suf1": plain(rep.suf1.residual),
                "suf2": plain(rep.suf2.residual),
                "suf3": plain(rep.suf3.residual)}
    if suite == "special":
        rep = special_link_formulas_check(inst[1], inst[2])
        return {"suite": suite, "n_max": inst[1], "p_max": inst[2],
                "ok": all(c.ok for c in rep.values()),
                "formulas": {k: {"ok": c.ok, "residual": plain(c.residual)}
                             for k, c in rep.items()}}
    raise UsageError(f"unknown suite {suite}")


def cmd_verify(args) -> tuple[dict, int]:
    suites = ["intertwine", "inject", "pseudo", "gp", "suf", "special", "gram-adjoint"] \
        if args.suite == "all" else [args.suite]
    instances = [inst for s in suites for inst in _instances(s, args)]
    for inst in instances:
        enforce(_max_n(inst), sweep=True)
    if args.jobs > 1 and len(instances) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(run_instance, instances))
    else:
        results = [run_instance(i) for i in instances]
    ok = all(r["ok"] for r in results)
    params = {"suite": args.suite, "n": args.n, "d": args.d, "n_max": args.n_max,
              "p_max": args.p_max, "a_max": args.a_max, "b_max": args.b_max}
    txt = "\n".join(f"{'PASS' if r['ok'] else 'FAIL'}  " +
                    " ".join(f"{k}={r[k]}" for k in r if k in ("suite", "n", "d", "p", "n_max", "p_max",
                                                               "a_max", "b_max"))
                    for r in results)
    return {"params": params, "result": results, "pretty": txt + "\n",
            "status": PASS if ok else FAIL}, EXIT_OK if ok else EXIT_FAIL


# spectra -----------------------------------------------------------------------------------


def _snap(x: float, tol: float) -> str:
    return num(0.0 if abs(x) < tol else x, 12)


def _jordan_json(entries, tol: float) -> list[dict]:
    return [{"eigenvalue": [_snap(e.eigenvalue.real, tol), _snap(e.eigenvalue.imag, tol)],
             "algebraic": e.algebraic, "geometric": e.geometric,
             "block_sizes": e.block_sizes, "borderline": e.borderline} for e in entries]


def cmd_spectrum(args) -> tuple[list[dict], int]:
    mode = args.mode
    tol = args.tol
    betas = parse_betas(args.beta)
    reports: list[dict] = []
    worst = PASS

    def note(status):
        nonlocal worst
        if status == FAIL:
            worst = FAIL
        elif status == INCONCLUSIVE and worst == PASS:
            worst = INCONCLUSIVE

    if mode == "reality":
        if args.loop:
            n, d = args.loop
            check_nd(n, d)
            enforce(n)
            for b in betas:
                r = loop_reality(n, d, b, tol=tol if tol else 1e-8)
                note(r.status)
                reports.append({"params": {"loop": [n, d], "beta": b}, "status": r.status,
                                "result": {"max_imag": r.max_imag, "diagonalisable": r.diagonalisable,
                                           "eigenvalues": [num(z.real) for z in r.eigenvalues]}})
        elif args.xxz:
            n = args.xxz
            enforce(n)
            for b in betas:
                r = xxz_reality(n, b, tol=tol if tol else DEFAULT_TOL)
                note(r.status)
                reports.append({"params": {"xxz": n, "beta": b}, "status": r.status,
                                "result": {"max_imag": r.max_imag,
                                           "eigenvalues": [[num(z.real), num(z.imag)]
                                                           for z in r.eigenvalues]}})
        else:
            raise UsageError("spectrum reality needs --loop N D or --xxz N")
    elif mode == "positivity":
        if not args.loop:
            raise UsageError("spectrum positivity needs --loop N D")
        n, d = args.loop
        check_nd(n, d)
        enforce(n)
        rep = check_positive_definite(f_matrix(n, d).S, betas, n=n, d=d)
        st = PASS if rep.ok else FAIL
        note(st)
        reports.append({"params": {"loop": [n, d], "betas": betas}, "status": st,
                        "result": {"min_pivots": rep.min_pivots, "failures": rep.failures}})
    elif mode == "inclusion":
        if args.n is None:
            raise UsageError("spectrum inclusion needs --n")
        enforce(args.n)
        for b in betas:
            r = spectral_inclusion(args.n, b, tol if tol else DEFAULT_TOL)
            note(r.status)
            reports.append({"params": {"n": args.n, "beta": b}, "status": r.status,
                            "result": {"equal": r.equal, "included": r.included, "strict": r.strict,
                                       "xxz": [num(x) for x in r.xxz],
                                       "hspin_only": [num(x) for x in r.extra_hspin]}})
    elif mode == "jordan":
        tol_j = tol if tol else DEFAULT_TOL
        if args.xxz:
            enforce(args.xxz)
            if args.q is not None:
                qs = [parse_q(args.q)]
            else:
                qs = [q_from_beta(b).q for b in betas]
            for q in qs:
                entries, st = jordan_detect(h_xxz_matrix(args.xxz, q), tol_j)
                note(st)
                reports.append({"params": {"xxz": args.xxz, "q": [q.real, q.imag]}, "status": st,
                                "result": {"blocks": _jordan_json(entries, tol_j),
                                           "nontrivial": sum(1 for e in entries
                                                             for k in e.block_sizes if k > 1)}})
        elif args.loop:
            n, d = args.loop
            check_nd(n, d)
            enforce(n)
            for b in betas:
                entries, st = jordan_detect(hamiltonian_matrix(n, d).evaluate(b), tol_j)
                note(st)
                reports.append({"params": {"loop": [n, d], "beta": b}, "status": st,
                                "result": {"blocks": _jordan_json(entries, tol_j)}})
        else:
            raise UsageError("spectrum jordan needs --xxz N or --loop N D")
    elif mode == "gram-scan":
        if not args.loop:
            raise UsageError("spectrum gram-scan needs --loop N D")
        n, d = args.loop
        check_nd(n, d)
        enforce(n)
        lo, hi = parse_window(args.window) if args.window else (-3.0, 3.0)
        g = gram_positivity_scan(n, d, (lo, hi), args.step)
        reports.append({"params": {"loop": [n, d], "window": [lo, hi], "step": args.step},
                        "status": PASS,
                        "result": {"det": poly_json(g.det), "positive_from": g.positive_from,
                                   "det_sign_changes": g.det_sign_changes,
                                   "det_real_roots": g.det_real_roots,
                                   "largest_root": g.beta_c_estimate}})
    return reports, {PASS: EXIT_OK, FAIL: EXIT_FAIL, INCONCLUSIVE: EXIT_FAIL}[worst]


def cmd_decompose(args) -> tuple[dict, int]:
    n = args.n
    s = parse_fraction(args.s)
    ell = GENERIC if args.ell == GENERIC else int(args.ell)
    try:
        dec = sector_decomposition(n, s, ell)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    audit = dimension_audit(n, s, ell)
    entries = [{"kind": e.kind, "d": e.d, "multiplicity": e.multiplicity, "d_minus": e.d_minus}
               for e in dec.entries]
    res = {"decomposition": " + ".join(f"{e.kind}_{{{n},{e.d}}}" for e in dec.entries),
           "entries": entries, "audit": {"total": audit.total, "expected": audit.expected, "ok": audit.ok},
           "notes": dec.notes}
    txt = res["decomposition"] + f"\naudit: {audit.total} == {audit.expected}: {'pass' if audit.ok else 'FAIL'}\n"
    txt += "".join(f"note: {x}\n" for x in dec.notes)
    return {"params": {"n": n, "s": str(s), "ell": str(ell)}, "result": res, "pretty": txt,
            "status": PASS if audit.ok else FAIL}, EXIT_OK if audit.ok else EXIT_FAIL


# argument parsing ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    """Treats '-1/2' and '-2.5:3:0.5' as values rather than option flags."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._negative_number_matcher = re.compile(r"^-[\d.][\d./:,eE+-]*$")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "pretty"), default="pretty")
    common.add_argument("--output", "-o", help="write to this file instead of stdout")
    common.add_argument("--no-timestamp", action="store_true", help="omit the timestamp field")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")

    p = _Parser(prog="templie", description="Temperley-Lieb standard modules, "
                                "spin-chain intertwiners and spectral checks.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("basis", parents=[common], help="ordered link or spin bases")
    g = b.add_mutually_exclusive_group(required=True)
    g.add_argument("--links", nargs=2, metavar=("N", "D"))
    g.add_argument("--spins", nargs=2, metavar=("L", "S"))

    m = sub.add_parser("matrix", parents=[common], help="dump a matrix")
    m.add_argument("kind", choices=("loop", "spin", "xxz", "f", "S", "gram"))
    m.add_argument("n", type=int)
    m.add_argument("second", nargs="?", help="d for loop/f/S/gram, magnetisation s for spin/xxz")
    m.add_argument("--beta", help="evaluate at this rational beta")
    m.add_argument("--q", help="complex q for xxz (e.g. 1j, 0.5+0.8j)")

    v = sub.add_parser("verify", parents=[common], help="exact verification suites")
    v.add_argument("suite", choices=("intertwine", "inject", "pseudo", "gp", "suf", "special",
                                     "gram-adjoint", "all"))
    v.add_argument("--n", type=int)
    v.add_argument("--d", type=int)
    v.add_argument("--n-max", type=int)
    v.add_argument("--p-max", type=int, default=2)
    v.add_argument("--a-max", type=int, default=6)
    v.add_argument("--b-max", type=int, default=6)

    s = sub.add_parser("spectrum", parents=[common], help="numerical spectral certification")
    s.add_argument("mode", choices=("reality", "positivity", "inclusion", "jordan", "gram-scan"))
    s.add_argument("--loop", nargs=2, type=int, metavar=("N", "D"))
    s.add_argument("--xxz", type=int, metavar="N")
    s.add_argument("--n", type=int)
    s.add_argument("--beta", help="comma list and/or a:b:step ranges")
    s.add_argument("--q")
    s.add_argument("--tol", type=float)
    s.add_argument("--window", help="lo:hi window for gram-scan")
    s.add_argument("--step", type=float, default=0.01)

    dcp = sub.add_parser("decompose", parents=[common], help="sector decomposition with audit")
    dcp.add_argument("n", type=int)
    dcp.add_argument("s")
    dcp.add_argument("ell", help="integer ell or 'generic'")
    return p


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    stamp = not args.no_timestamp
    try:
        if args.command == "spectrum":
            reports, code = cmd_spectrum(args)
            if args.format == "json":
                text = "".join(json.dumps(envelope("spectrum " + args.mode, r["params"], r["status"],
                                                   r["result"], stamp), sort_keys=True) + "\n"
                               for r in reports)
            elif args.format == "csv":
                buf = io.StringIO()
                w = csv.writer(buf, lineterminator="\n")
                w.writerow(["params", "status", "result"])
                for r in reports:
                    w.writerow([json.dumps(r["params"], sort_keys=True), r["status"],
                                json.dumps(r["result"], sort_keys=True)])
                text = buf.getvalue()
            else:
                text = "".join(f"{r['status'].upper():13} {json.dumps(r['params'])}\n" for r in reports)
            _emit(text, args.output)
            return code
        handler = {"basis": cmd_basis, "matrix": cmd_matrix, "verify": cmd_verify,
                   "decompose": cmd_decompose}[args.command]
        doc, code = handler(args)
    except UsageError as exc:
        print(f"templie: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"templie: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CapError, SizeError) as exc:
        print(f"templie: {exc}", file=sys.stderr)
        return EXIT_CAP
    status = doc.get("status", PASS)
    env = envelope(args.command, doc["params"], status, doc["result"], stamp)
    if args.format == "csv" and "csv" in doc:
        env = dict(env, result=doc["csv"])
    env["pretty"] = doc.get("pretty")
    text = render(env, args.format) if args.format != "json" else \
        json.dumps({k: v for k, v in env.items() if k != "pretty"}, sort_keys=True, indent=2) + "\n"
    _emit(text, args.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
