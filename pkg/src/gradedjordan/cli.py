"""Command-line front end: build systems, run checks, write JSON reports.

Exit codes: 0 all assertions pass, 1 a property verified false (the report
carries a witness), 2 usage or input error, 3 "unknown" outcomes with
--strict.
"""

import argparse
import json
import random
import sys
from fractions import Fraction

from . import coordinatize as co
from . import jordan, lie, models
from .exactlin import Fp, GradedSubspace, key_order
from .grading import SupportSet, is_pointed_reflection_subspace, support_relations_check

COMMANDS = ["build", "verify-jordan", "peirce", "triangle-check", "battery", "simple-check", "radical",
            "coordinatize", "classify", "tkk", "lie-verify", "torus-check", "supports"]


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# JSON rendering

def jsonify(x):
    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, Fp):
        return str(x.v)
    if isinstance(x, float):
        return x
    if isinstance(x, SupportSet):
        if x.subgroup is None:
            return {"kind": "finite", "degrees": jsonify(sorted(x.degrees, key=key_order))}
        return {"kind": "cosets", "subgroup": jsonify(x.subgroup.basis()),
                "index": x.subgroup.index, "reps": jsonify(sorted(x.reps, key=key_order))}
    if isinstance(x, GradedSubspace):
        return {"dim": x.dim, "basis": jsonify(x.basis())}
    if isinstance(x, dict):
        if all(isinstance(k, str) for k in x):
            return {k: jsonify(v) for k, v in x.items()}
        return [[jsonify(k), jsonify(v)] for k, v in sorted(x.items(), key=lambda t: key_order(t[0]))]
    if isinstance(x, (list, tuple)):
        return [jsonify(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return [jsonify(v) for v in sorted(x, key=key_order)]
    if hasattr(x, "to_json"):
        return x.to_json()
    return type(x).__name__


def dumps(report):
    return json.dumps(jsonify(report), sort_keys=True, separators=(",", ":")) + "\n"


# ---------------------------------------------------------------------------
# inputs

def load(args):
    if args.registry and args.input:
        raise UsageError("give either --registry or --in, not both")
    if args.registry:
        if args.registry not in models.REGISTRY:
            raise UsageError("unknown registry model %r (known: %s)"
                             % (args.registry, ", ".join(sorted(models.REGISTRY))))
        return models.registry(args.registry, args.window)
    if args.input:
        try:
            with open(args.input) as fh:
                obj = json.load(fh)
        except (OSError, ValueError) as e:
            raise UsageError("cannot read %s: %s" % (args.input, e))
        return from_json(obj, args.window)
    raise UsageError("an input is required: --registry NAME or --in FILE")


def from_json(obj, window=None):
    if not isinstance(obj, dict):
        raise UsageError("system specification must be a JSON object")
    if obj.get("command") == "build" and isinstance(obj.get("structure_triple"), dict):
        obj = obj["structure_triple"]
    try:
        if obj.get("kind") == "structure_triple":
            J = jordan.triple_from_json(obj)
            T = None
            tri = obj.get("triangle")
            if tri:
                el = lambda v: {J.keys[int(i)]: J.field(c) for i, c in v if J.field(c)}
                T = jordan.TriangulatedSystem(J, el(tri["u"]), el(tri["e1"]), el(tri["e2"]))
            return {"name": obj.get("name", "structure_triple"), "family": "structure", "triple": J,
                    "triangulated": T, "algebra": None, "window": None, "coords": None, "notes": ""}
        return models.system_from_json(obj, window or 1)
    except (KeyError, TypeError, ValueError) as e:
        raise UsageError("invalid system specification: %s" % (e,))


def need_T(model):
    T = model["triangulated"]
    if T is None:
        raise UsageError("this command needs a triangulated system (add a \"triangle\" to the input)")
    return T


def radius_of(model, args):
    if args.window is not None:
        return args.window
    return model["window"] or 1


# ---------------------------------------------------------------------------
# commands

def status_of(*flags):
    if any(f is False for f in flags):
        return "fail"
    if any(f == "unknown" for f in flags):
        return "unknown"
    return "pass"


def cmd_build(model, args):
    J, T = model["triple"], model["triangulated"]
    r = radius_of(model, args)
    degs = J.degrees(None if J.finite else r)
    out = {"name": model["name"], "family": model["family"], "window": model["window"],
           "finite": J.finite}
    if T is not None:
        out["peirce_dims"] = [[list(d), [len(T.basis_of(p, d)) for p in (1, "m", 2)]] for d in degs]
    else:
        out["dims"] = [[list(d), len(J.basis_of_degree(d))] for d in degs]
    if J.finite:
        if isinstance(J, jordan.StructureTriple):
            S, to_s = J, (lambda v: v)
        else:
            snap = jordan.snapshot(J)
            S, to_s = snap.triple, snap.to_snapshot
        st = S.to_json()
        if T is not None:
            idx = {k: i for i, k in enumerate(S.keys)}
            st["triangle"] = {name: [[idx[k], S.field.format(c)] for k, c in sorted(to_s(v).items(), key=lambda t: idx[t[0]])]
                              for name, v in (("u", T.u), ("e1", T.e1), ("e2", T.e2))}
        out["structure_triple"] = st
        out["dim"] = J.dim()
    out["status"] = "pass"
    return out


def cmd_verify_jordan(model, args):
    J = model["triple"]
    res = jordan.axiom_check(J, trials=args.trials or 200, seed=args.seed, radius=radius_of(model, args))
    res["status"] = status_of(res["passed"])
    return res


def _tripotent(model, which):
    T = need_T(model)
    table = {"e1": T.e1, "e2": T.e2, "e": T.e, "u": T.u}
    if which not in table:
        raise UsageError("unknown tripotent %r" % which)
    return table[which]


def cmd_peirce(model, args):
    J = model["triple"]
    e = _tripotent(model, args.tripotent)
    r = radius_of(model, args)
    P = jordan.Peirce(J, e)
    dims = P.dims(None if J.finite else r)
    rules = jordan.peirce_rules_check(J, e, random.Random(args.seed), samples=args.trials or 20, radius=r)
    proj = P.check_projectors(J.basis(None if J.finite else r))
    return {"tripotent": args.tripotent, "dims": {"J2": dims[0], "J1": dims[1], "J0": dims[2]},
            "window": None if J.finite else r, "rule_failures": rules, "projector_failures": proj,
            "status": status_of(not rules, not proj)}


def cmd_triangle(model, args):
    T = need_T(model)
    res = jordan.triangle_check(T.J, T.u, T.e1, T.e2)
    res["status"] = status_of(res["passed"])
    return res


def cmd_battery(model, args):
    T = need_T(model)
    res = jordan.identity_battery(T, trials=args.trials or 100, seed=args.seed)
    res["status"] = status_of(res["passed"])
    return res


def cmd_simple(model, args):
    J = model["triple"]
    if not J.finite:
        return {"graded_simple": "unknown", "reason": "infinite-dimensional system", "status": "unknown"}
    try:
        verdict, witness, method = jordan.is_graded_simple(J, seed=args.seed)
    except jordan.NotCandidate as e:
        return {"graded_simple": False, "reason": str(e), "status": "fail"}
    return {"graded_simple": verdict, "method": method, "witness_ideal": witness,
            "status": status_of(verdict)}


def cmd_radical(model, args):
    J = model["triple"]
    if not J.finite:
        return {"nondegenerate": "unknown", "reason": "infinite-dimensional system", "status": "unknown"}
    res = jordan.degeneracy(J, T=model["triangulated"])
    Q = res["quotient"]
    # the iteration stops at a quotient without trivial elements
    qnd = True if res["exact"] else "unknown"
    nondeg = res["trivial_witness"] is None
    if nondeg and not res["exact"]:
        nondeg = "unknown"
    return {"nondegenerate": nondeg, "trivial_witness": res["trivial_witness"],
            "radical_dim": res["radical"].dim, "radical": res["radical"], "quotient_dim": Q.dim(),
            "quotient_nondegenerate": qnd, "exact": res["exact"], "status": status_of(nondeg)}


def _coord_input(model):
    T = need_T(model)
    if not T.J.finite:
        raise co.CoordinatizationRefused("coordinatization needs a finite-dimensional system; the windowed "
                                         "snapshot of this instance overflows")
    return T


def cmd_coordinatize(model, args):
    mode = getattr(args, "mode", None) or "classify"
    try:
        T = _coord_input(model)
        if mode == "classify":
            res = co.classify(T, seed=args.seed)
            return {"case": res["case"], "subcase": res["subcase"], "certificate": res["certificate"],
                    "status": "pass"}
        if mode == "hermitian":
            res = co.hermitian_coordinatize(T)
            out = {"report": res.report, "envelope": res.envelope.report(),
                   "homomorphism": res.homomorphism}
            ok = [res.homomorphism["passed"], res.bijective, res.triangle_preserved]
            if model["family"] == "hermitian" and model["coords"] is not None and model["coords"].A.finite:
                rt = co.hermitian_round_trip(model["coords"], model["triple"], res)
                out["round_trip"] = {k: v for k, v in rt.items() if k != "psi"}
                ok.append(rt["passed"])
            out["status"] = status_of(*ok)
            return out
        if mode == "clifford":
            res = co.clifford_coordinatize(T)
            out = {"report": res.report, "envelope": res.envelope.report(),
                   "homomorphism": res.homomorphism}
            ok = [res.homomorphism["passed"], res.bijective, res.triangle_preserved]
            if model["family"] == "clifford" and res.is_all:
                rt = co.clifford_round_trip(model["triple"], res)
                out["round_trip"] = rt
                ok.append(rt["passed"])
            out["status"] = status_of(*ok)
            return out
    except co.CoordinatizationRefused as e:
        return {"refused": str(e), "witness": e.witness, "status": "fail"}
    raise UsageError("unknown mode %r" % mode)


def cmd_classify(model, args):
    args.mode = "classify"
    return cmd_coordinatize(model, args)


def _lie_for(model, args, kind=None):
    kind = kind or args.lie
    r = radius_of(model, args)
    fam = model["family"]
    if kind == "auto":
        if model["triple"].finite and model["triangulated"] is not None:
            kind = "tkk"
        elif fam == "hermitian":
            kind = "su2"
        elif fam == "clifford":
            kind = "eso"
        else:
            raise UsageError("no Lie model for this input")
    if kind == "tkk":
        return lie.tkk(model["triple"], model["triangulated"])
    if kind == "su2":
        cs = model["coords"]
        if fam != "hermitian" or cs is None:
            raise UsageError("su2 needs a hermitian coordinate system")
        return lie.SU2(cs.A, cs.pi, None if cs.A.finite else r)
    if kind == "eso":
        if fam != "clifford":
            raise UsageError("eso needs a Clifford system")
        qf = model["triple"].qf
        return lie.build_eso_qinf(qf, None if qf.D.finite else r)
    raise UsageError("unknown Lie model %r" % kind)


def _slot_table(L):
    return [[list(a), list(l), n] for (a, l), n in sorted(L.slot_dims().items(), key=lambda t: key_order(t[0]))]


def cmd_tkk(model, args):
    J = model["triple"]
    if not J.finite:
        raise UsageError("tkk is built for finite-dimensional systems")
    K = lie.tkk(J, model["triangulated"])
    jac = lie.jacobi_check(K, seed=args.seed)
    dic = K.dictionary_check()
    Z = lie.centre(K)
    closure = K.closure_failures()
    root_dims = sorted(([list(a), n] for a, n in K.root_dims().items()), key=key_order)
    return {"dim": K.dim(), "root_dims": root_dims, "slots": _slot_table(K), "jacobi": jac,
            "dictionary": dic, "centre_zero": not any(Z.values()), "closure_failures": closure,
            "outside_R": K.outside_R,
            "status": status_of(jac["passed"], dic["passed"], not closure, not K.outside_R)}


def _cert_summary(certs):
    out = []
    for (a, l), v in sorted(certs.items(), key=lambda t: key_order(t[0])):
        cs = v["certificates"]
        out.append({"alpha": list(a), "lambda": list(l), "dim": v["dim"],
                    "solved": all(c is not None for c in cs),
                    "sl2": all(c is not None and c["sl2"] for c in cs),
                    "certificates": [None if c is None else {"f": c["f"], "h": c["h"]} for c in cs]})
    return out


def cmd_lie_verify(model, args):
    L = _lie_for(model, args)
    jac = lie.jacobi_check(L, budget=args.trials or 20000, seed=args.seed)
    rg = lie.root_grading_check(L, seed=args.seed)
    inv = {}
    for a, v in rg["invertibles"].items():
        inv[",".join(map(str, a))] = v if v == "failure" else {"e": v["e"], "f": v["f"], "h": v["h"], "sl2": v["sl2"]}
    out = {"lie": L.name, "window": L.radius, "dim": L.dim(), "slots": _slot_table(L), "jacobi": jac,
           "RG1": rg["RG1"], "RG2": {"passed": rg["RG2"]["passed"],
                                     "slots": [[list(l), v] for l, v in sorted(rg["RG2"]["slots"].items())]},
           "support_in_R": rg["support_in_R"], "invertibles": inv}
    rg2 = rg["RG2"]["passed"]
    if not rg2 and not any(v == "fail" for v in rg["RG2"]["slots"].values()):
        rg2 = "unknown"
    out["status"] = status_of(jac["passed"], rg["RG1"]["passed"], rg2, rg["support_in_R"]["passed"],
                              all(v != "failure" and v["sl2"] for v in rg["invertibles"].values()))
    return out


def cmd_torus(model, args):
    L = _lie_for(model, args)
    p = lie.lie_predicates(L)
    certs = lie.sl2_certificates(L, seed=args.seed)
    sup = lie.lie_supports(L) if all(r in L.roots for r in ((2, 0), (1, 1))) else None
    out = {"lie": L.name, "window": L.radius, "centre_zero": p["centre_zero"],
           "is_division_graded": p["is_division_graded"], "is_lie_torus": p["is_lie_torus"],
           "spans_lambda": p["spans_lambda"], "support": p["support"],
           "slots": _cert_summary(certs)}
    flags = [p["is_lie_torus"]]
    if sup is not None:
        out["supports"] = {"L": sup["L"], "S": sup["S"], "relations": sup["relations"],
                           "S_pointed_reflection": sup["S_pointed_reflection"]}
        flags += [sup["relations"], sup["S_pointed_reflection"]]
    out["status"] = status_of(*flags)
    return out


def cmd_supports(model, args):
    T = need_T(model)
    r = radius_of(model, args)
    p = jordan.triple_predicates(T, radius=None if T.J.finite else r)
    Ls, Ss = p["supports"]["L"], p["supports"]["S"]
    out = {"faithful": p["faithful"], "division_triangulated": p["division_triangulated"],
           "torus": p["torus"], "window": p["window"], "L": Ls, "S": Ss,
           "L_list": p["support_lists"]["L"], "S_list": p["support_lists"]["S"]}
    if Ls is None or Ss is None:
        out["status"] = "unknown"
        return out
    out["S_pointed_reflection"] = is_pointed_reflection_subspace(Ss)
    out["relations"] = support_relations_check(Ls, Ss)
    flags = [out["relations"]]
    if p["division_triangulated"] is True:
        flags.append(out["S_pointed_reflection"])
    out["status"] = status_of(*flags)
    return out


HANDLERS = {"build": cmd_build, "verify-jordan": cmd_verify_jordan, "peirce": cmd_peirce,
            "triangle-check": cmd_triangle, "battery": cmd_battery, "simple-check": cmd_simple,
            "radical": cmd_radical, "coordinatize": cmd_coordinatize, "classify": cmd_classify,
            "tkk": cmd_tkk, "lie-verify": cmd_lie_verify, "torus-check": cmd_torus, "supports": cmd_supports}


# ---------------------------------------------------------------------------
# driver

def parser():
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_argument_group("input")
    src.add_argument("--registry", metavar="NAME")
    src.add_argument("--in", dest="input", metavar="FILE")
    common.add_argument("--window", type=int, default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=None)
    common.add_argument("--strict", action="store_true")
    common.add_argument("--out", metavar="FILE")
    common.add_argument("--pretty", action="store_true")
    p = argparse.ArgumentParser(prog="gradedjordan", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name, parents=[common])
        if name == "peirce":
            s.add_argument("--tripotent", default="e1", choices=["e1", "e2", "e", "u"])
        if name == "coordinatize":
            s.add_argument("--mode", default="classify", choices=["hermitian", "clifford", "classify"])
        if name in ("lie-verify", "torus-check"):
            s.add_argument("--lie", default="auto", choices=["auto", "tkk", "su2", "eso"])
    return p


def run(argv):
    """Returns (report, exit code, parsed args)."""
    args = parser().parse_args(argv)
    try:
        model = load(args)
        report = HANDLERS[args.command](model, args)
    except UsageError as e:
        return {"error": str(e)}, 2, args
    report = dict(report)
    report["command"] = args.command
    report["input"] = args.registry or args.input
    report["seed"] = args.seed
    status = report.get("status", "pass")
    code = {"pass": 0, "fail": 1, "unknown": 3 if args.strict else 0}[status]
    return report, code, args


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        report, code, args = run(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    if code == 2:
        sys.stderr.write("gradedjordan: %s\n" % report["error"])
        return code
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(dumps(report))
    if args.pretty:
        sys.stdout.write(json.dumps(jsonify(report), sort_keys=True, indent=2) + "\n")
    elif not args.out:
        sys.stdout.write(dumps(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
