"""Command-line front end.

Exit codes: 0 when the property is certified, 2 when it is refuted with a
witness, 1 on input or usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import blowup, fan, normal_forms, torus
from .exact import same_lattice

EXIT_OK, EXIT_ERROR, EXIT_REFUTED = 0, 1, 2


@dataclass
class RunReport:
    command: str
    inputs: dict
    verdict: str = "pass"  # pass / fail / error
    payload: dict = field(default_factory=dict)
    lines: list = field(default_factory=list)
    timing: float = 0.0

    def to_json(self) -> dict:
        return {"command": self.command, "inputs": self.inputs, "verdict": self.verdict,
                "payload": self.payload, "timing_s": round(self.timing, 4)}

    @property
    def exit_code(self) -> int:
        return {"pass": EXIT_OK, "fail": EXIT_REFUTED}.get(self.verdict, EXIT_ERROR)


# ---------------------------------------------------------------------------
# builtin inputs, serialized to the same JSON schemas accepted from files


def _example30_json(t: int) -> dict:
    A, orbits = torus.example30(t)
    return {"action": A.to_json(), "orbits": [O.to_json(A) for O in orbits]}


def _example31_orbits_json() -> dict:
    P = fan.example31()
    A = P.action()
    orbits = [torus.OrbitClass(frozenset(set(range(P.num_vars)) - set(c)))
              for c in fan.maximal_cones_of(P)]
    return {"action": A.to_json(), "orbits": [O.to_json(A) for O in orbits]}


FAN_BUILTINS = {
    "P1": lambda: fan.projective_space(1).to_json(),
    "P2": lambda: fan.projective_space(2).to_json(),
    "P3": lambda: fan.projective_space(3).to_json(),
    "P1xP1": lambda: fan.product_of_lines().to_json(),
    "F1": lambda: fan.hirzebruch(1).to_json(),
}
COX_BUILTINS = {"example31": fan.example31_json}


def _nf_example30_json() -> dict:
    c = torus.cyclic_exponents(3)
    return {**normal_forms.monomial_form(c, 4).to_json(), "c": c}


def _generators_example_json() -> dict:
    # 2 y1 + 2 x1 + 2 y1 x1 over (y1, x1, x2), modulo degree 3
    gen = [{"monomial exponents": [1, 0, 0], "coeff": "2"},
           {"monomial exponents": [0, 1, 0], "coeff": "2"},
           {"monomial exponents": [1, 1, 0], "coeff": "2"}]
    return {"s": 1, "t": 2, "d": 3, "generators": [gen]}


def _load(args, builtins: dict) -> tuple[dict, str]:
    if args.input and args.builtin:
        raise ValueError("give either --input or --builtin, not both")
    if args.input:
        with open(args.input) as fh:
            return json.load(fh), args.input
    if args.builtin:
        if args.builtin not in builtins:
            raise ValueError(f"unknown builtin {args.builtin!r}; choose from {sorted(builtins)}")
        # round-trip through text so builtins exercise the file parser
        return json.loads(json.dumps(builtins[args.builtin]())), f"builtin:{args.builtin}"
    raise ValueError("an input is required (--input FILE or --builtin NAME)")


def _fmt(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (list, tuple)):
        return [_fmt(v) for v in x]
    return x


# ---------------------------------------------------------------------------
# commands


def cmd_certify_nonqp(args) -> RunReport:
    builtins = {"example30": lambda: _example30_json(args.t), "example31": _example31_orbits_json}
    data, source = _load(args, builtins)
    A = torus.TorusAction.from_json(data["action"])
    orbits = [torus.OrbitClass.from_json(o, A) for o in data["orbits"]]
    rep = RunReport("certify-nonqp", {"source": source, "mode": args.mode})
    try:
        cert = torus.nonqp_certificate(A, orbits, mode=args.mode)
    except torus.CertificateFails as exc:
        check = torus.orbit_stable if args.mode == "stable" else torus.orbit_semistable
        if not all(check(A, O, exc.chi) for O in orbits):
            raise AssertionError("refutation witness failed re-verification")
        rep.verdict = "fail"
        rep.payload = {"common_character": list(exc.chi)}
        rep.lines.append(f"refuted: every orbit is {args.mode} for chi = {exc.chi}")
        return rep
    cert_json = cert.to_json(A)
    if not torus.verify_certificate(A, torus.NonQPCertificate.from_json(cert_json, A)):
        raise AssertionError("certificate failed re-verification")
    sep = torus.separated_pairs(A, orbits)
    rep.payload = {"action": A.to_json(), "certificate": cert_json, "separation": sep.to_json()}
    rep.lines.append(f"certified: no common {args.mode} polarization for {len(orbits)} orbits")
    for subset, chi in cert.subset_witnesses:
        if len(subset) == 2:
            rep.lines.append(f"  orbits {list(subset)} share chi = {list(chi)}")
    if sep.separated:
        rep.lines.append("separation: every pair is simultaneously stable")
    else:
        rep.lines.append(f"separation: pairs without a common stable character {sep.failures}")
    return rep


def _fan_from_data(data) -> fan.Fan:
    if "degrees" in data:
        return fan.fan_of_cox(fan.CoxPresentation.from_json(data))
    F = fan.Fan.from_json(data)
    diag = fan.validate_fan(F)
    if not diag.ok:
        raise fan.InvalidFanError(diag)
    return F


def cmd_fan(args) -> RunReport:
    data, source = _load(args, {**FAN_BUILTINS, **COX_BUILTINS})
    rep = RunReport(f"fan {args.action}", {"source": source})
    if args.action == "from-cox":
        F = fan.fan_of_cox(fan.CoxPresentation.from_json(data))
        rep.payload = {"fan": F.to_json()}
        rep.lines.append(f"fan with {F.num_rays} rays and {len(F.max_cones)} maximal cones")
        rep.lines.extend(f"  ray {i}: {list(r)}" for i, r in enumerate(F.rays))
        return rep
    if args.action == "to-cox":
        P = fan.cox_of_fan(_fan_from_data(data))
        rep.payload = {"presentation": P.to_json()}
        rep.lines.append(f"class group rank {P.class_rank}")
        rep.lines.extend(f"  deg {P.coords[j]} = {list(P.degree(j))}" for j in range(P.num_vars))
        rep.lines.append(f"  primitive collections {[list(p) for p in P.primitive_collections]}")
        return rep
    F = _fan_from_data(data)
    smooth, complete = fan.is_smooth(F), fan.is_complete(F)
    psi = None
    proj = None
    if complete and all(len(c) == F.rank for c in F.max_cones):
        psi = fan.projective_support_function(F)
        proj = psi is not None
    result = {"smooth": smooth, "complete": complete, "projective": proj}
    if psi is not None:
        result["support_function"] = psi.to_json()
    if complete and smooth:
        P = fan.cox_of_fan(F)
        chi = fan.git_ample_character(P)
        result["ample_character"] = None if chi is None else list(chi)
        if (chi is None) != (psi is None):
            raise AssertionError("support function and GIT routes disagree on projectivity")
        nef = fan.git_nef_character(P)
        result["nef_character"] = None if nef is None else list(nef)
    rep.payload = result
    mark = {True: "yes", False: "no", None: "n/a"}
    rep.lines += [f"smooth: {mark[smooth]}", f"complete: {mark[complete]}",
                  f"projective: {mark[proj]}"]
    if result.get("ample_character"):
        rep.lines.append(f"  ample character {result['ample_character']}")
    elif proj is False:
        rep.lines.append(f"  no strictly convex support function; nef class {result.get('nef_character')}")
    rep.verdict = "pass" if smooth and complete and proj else "fail"
    return rep


def cmd_blowup(args) -> RunReport:
    rep = RunReport(f"blowup {args.action}", {k: v for k, v in vars(args).items()
                                              if k in ("a", "s", "t", "d", "bound") and v is not None})
    if args.action == "charts":
        if not args.a:
            raise ValueError("charts needs --a")
        a = blowup.WeightVector.parse(args.a)
        rows = []
        for ch, kind in zip(blowup.charts(a), blowup.classify_singularities(a)):
            rows.append({"chart": ch.index + 1, "quotient": str(ch.quotient),
                         "type": str(kind), "singular": kind.singular})
            rep.lines.append(f"chart {ch.index + 1}: {ch.quotient} -> {kind}")
        disc = blowup.blowup_discrepancy(a)
        rep.payload = {"weights": list(a), "charts": rows, "discrepancy": str(disc.discrepancy)}
        rep.lines.append(f"discrepancy of E: {disc.discrepancy}")
        return rep
    _require(args, "t", "d")
    if args.action == "resolve":
        tower = blowup.resolution_tower(args.d, args.t)
        rep.payload = tower.to_json()
        rep.lines.append(f"resolving {tower.base}")
        for st in tower.steps:
            rep.lines.append(
                f"  E{st.level}: P{st.divisor}  a(E{st.level}, X{st.level - 1}) = {st.step_discrepancy}"
                f"  a(E{st.level}, X0) = {st.cumulative_discrepancy}  residual {st.residual}"
                + (" smooth" if st.residual.is_smooth() else ""))
        rep.verdict = "pass" if tower.steps[-1].residual.is_smooth() else "fail"
        return rep
    if args.action == "scan":
        bound = Fraction(args.bound) if args.bound else 2 + Fraction(args.t - 1, args.d)
        scan = blowup.minimal_discrepancy_scan(args.d, args.t, bound)
        expected = Fraction(args.t - 1, args.d)
        rep.payload = {"minimum": str(scan.minimum), "argmin": _fmt(list(scan.argmin)),
                       "unique": scan.unique, "candidates": scan.candidates, "bound": str(bound)}
        rep.lines.append(f"minimal discrepancy {scan.minimum} at {_fmt(list(scan.argmin))}"
                         f" ({'unique' if scan.unique else 'not unique'}, {scan.candidates} candidates)")
        rep.verdict = "pass" if scan.unique and scan.minimum == expected else "fail"
        return rep
    _require(args, "s")
    ok = blowup.verify_Ic_claim(args.s, args.t, args.d)
    rep.payload = {"holds": ok}
    rep.lines.append(f"I_c = (u_1..u_{args.s}) + m_x^c for c <= {args.d}: {'yes' if ok else 'no'}")
    rep.verdict = "pass" if ok else "fail"
    return rep


def _require(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise ValueError("missing " + ", ".join(f"--{n}" for n in missing))


def cmd_curve_instability(args) -> RunReport:
    pairs = torus.find_unstable_smoothable(args.dmax)
    rows = []
    for d, m in pairs:
        w = torus.plane_curve_min_weight(d, m)
        if w <= 0:
            raise AssertionError(f"pair {(d, m)} is not destabilized")
        rows.append({"d": d, "m": m, "min_weight": w})
    rep = RunReport("curve-instability", {"dmax": args.dmax}, payload={"pairs": rows})
    if not rows:
        rep.lines.append(f"no pairs with d <= {args.dmax}")
    rep.lines.extend(f"d={r['d']} m={r['m']} min weight {r['min_weight']}" for r in rows)
    return rep


def cmd_normal_form(args) -> RunReport:
    builtins = {"example30": _nf_example30_json, "linear-example": _generators_example_json}
    data, source = _load(args, builtins)
    rep = RunReport(f"normal-form {args.action}", {"source": source})
    if args.action == "normalize":
        s, t, d = int(data["s"]), int(data["t"]), int(data["d"])
        gens = [normal_forms.TruncPoly.from_json(g, s + t, d) for g in data["generators"]]
        nf = normal_forms.normalize(gens, s)
        rep.payload = {"normal_form": nf.to_json()}
        for i, p in enumerate(nf.h):
            rep.lines.append(f"h_{i + 1} = {p!r}")
        return rep
    nf = normal_forms.NormalForm.from_json(data)
    basis = normal_forms.stabilizer(nf)
    rep.payload = {"basis": basis, "rank": len(basis), "full": len(basis) == nf.s + nf.t}
    rep.lines.append(f"stabilizer rank {len(basis)} in Z^{nf.s + nf.t}")
    rep.lines.extend(f"  {row}" for row in basis)
    if "c" in data:
        c = data["c"]
        w0 = normal_forms.in_W0(nf, c)
        match = w0 and same_lattice(basis, normal_forms.torus_lattice(c))
        rep.payload.update({"in_W0": w0, "equals_T(c)": bool(match)})
        rep.lines.append(f"in W0: {w0}; equals the lattice of T(c): {bool(match)}")
        rep.verdict = "pass" if match else "fail"
    return rep


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="JSON input file")
    common.add_argument("--builtin", help="name of a built-in dataset")
    common.add_argument("--json", action="store_true", help="print the machine-readable report")
    common.add_argument("--out", help="also write the JSON report to this file")

    parser = argparse.ArgumentParser(prog="toricgit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("certify-nonqp", parents=[common],
                       help="certify that orbits admit no common polarization")
    p.add_argument("--t", type=int, default=3, help="rank for the example30 builtin")
    p.add_argument("--mode", choices=["semistable", "stable"], default="semistable")
    p.set_defaults(func=cmd_certify_nonqp)

    p = sub.add_parser("fan", parents=[common], help="fan checks and Cox conversions")
    p.add_argument("action", choices=["check", "to-cox", "from-cox"])
    p.set_defaults(func=cmd_fan)

    p = sub.add_parser("blowup", parents=[common], help="weighted blow ups and resolutions")
    p.add_argument("action", choices=["charts", "resolve", "scan", "ic-verify"])
    p.add_argument("--a", help="weights, e.g. 2,1,1 or 3^2,1^3")
    p.add_argument("--s", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--bound", help="scan bound on the coordinate sum (default 2 + (t-1)/d)")
    p.set_defaults(func=cmd_blowup)

    p = sub.add_parser("curve-instability", parents=[common],
                       help="plane curve degrees with an unstable smoothable member")
    p.add_argument("--dmax", type=int, required=True)
    p.set_defaults(func=cmd_curve_instability)

    p = sub.add_parser("normal-form", parents=[common], help="normal forms and stabilizers")
    p.add_argument("action", choices=["normalize", "stabilizer"])
    p.set_defaults(func=cmd_normal_form)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        rep = args.func(args)
    except (ValueError, KeyError, TypeError, OSError, json.JSONDecodeError) as exc:
        rep = RunReport(args.command, {}, verdict="error", payload={"error": str(exc)},
                        lines=[f"error: {exc}"])
    rep.timing = time.perf_counter() - start
    report = rep.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(report, fh, indent=2)
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        stream = sys.stderr if rep.verdict == "error" else sys.stdout
        for line in rep.lines:
            print(line, file=stream)
        print(f"verdict: {rep.verdict} ({rep.timing:.2f}s)", file=stream)
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
