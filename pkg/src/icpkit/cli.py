"""``icpkit decompose|check|enumerate <instance.json>``.

Output is JSON with sorted keys; rationals print as ``"p/q"`` strings so the
same input always produces the same bytes.  Exit codes:

====  ==========================================================
0     success / property holds
1     malformed input (file, JSON, schema, target vector)
2     target not in ``kP``
3     not box-integral, or (vertex lists) no independent decomposition
4     internal affine-dependence failure
5     checked property is false (witness in the report)
6     certificate checks failed
7     resource cap exceeded
====  ==========================================================
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .caps import cap
from .core import Decomposition, validate
from .errors import AffineDependence, InvalidInstance, NotBoxIntegral, NotMember, ResourceCapExceeded
from .instances import Instance, NoIndependentDecomposition, load
from .oracle import caratheodory_rank_search, check_icp, check_idp
from .polyhedron import check_box_integral
from .polymatroid import _members, submodularity_violation
from .tu import check_tu

EXIT_OK, EXIT_MALFORMED, EXIT_NOT_MEMBER, EXIT_NOT_BOX_INTEGRAL, EXIT_DEPENDENT = 0, 1, 2, 3, 4
EXIT_FALSE, EXIT_CHECKS_FAILED, EXIT_CAP = 5, 6, 7

PROPERTIES = ("tu", "submodular", "box-integral", "idp", "icp", "rank", "certificate")


def rat(v):
    """Canonical JSON form of an exact number: ints stay ints, other rationals become ``"p/q"``."""
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return int(v)


def rat_vec(vs) -> list:
    return [rat(v) for v in vs]


def dumps(doc, pretty: bool = False) -> str:
    if not pretty:
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))
    return "\n".join(_pretty_lines(doc, 0))


def _pretty_lines(doc, indent: int):
    pad = "  " * indent
    if isinstance(doc, dict):
        width = max((len(k) for k in doc), default=0)
        for key in sorted(doc):
            val = doc[key]
            if isinstance(val, (dict, list)) and val and any(isinstance(x, (dict, list)) for x in _items(val)):
                yield f"{pad}{key}:"
                yield from _pretty_lines(val, indent + 1)
            else:
                yield f"{pad}{key.ljust(width)} : {json.dumps(val, sort_keys=True)}"
    elif isinstance(doc, list):
        for item in doc:
            if isinstance(item, dict):
                yield f"{pad}-"
                yield from _pretty_lines(item, indent + 1)
            else:
                yield f"{pad}- {json.dumps(item, sort_keys=True)}"
    else:
        yield f"{pad}{json.dumps(doc)}"


def _items(val):
    return val.values() if isinstance(val, dict) else val


def parse_vector(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError:
        raise InvalidInstance(f"cannot parse integer vector {text!r}") from None


def parse_box(text: str | None):
    if text is None:
        return None
    lo, sep, hi = text.partition(":")
    if not sep:
        raise InvalidInstance("--box expects LO:HI, e.g. 0,0:2,2")
    lo, hi = parse_vector(lo), parse_vector(hi)
    if len(lo) != len(hi):
        raise InvalidInstance("box corners differ in dimension")
    return lo, hi


def _box_for(inst: Instance, text: str | None):
    box = parse_box(text)
    if box is not None and len(box[0]) != inst.n:
        raise InvalidInstance(f"box has dimension {len(box[0])}, instance has {inst.n}")
    return box


def _instance_header(inst: Instance) -> dict:
    out = {"id": inst.id, "type": inst.kind, "sha256": inst.digest}
    if not inst.tu_verified:
        out["tu_unverified"] = True
    return out


# --------------------------------------------------------------------------
#  decompose
# --------------------------------------------------------------------------


def certify(inst: Instance, w: Sequence[int], k: int, *, timing: bool = False) -> tuple[dict, int]:
    """Decompose and build the certificate; returns ``(document, exit code)``."""
    t0 = time.perf_counter()
    dec = inst.decompose(w, k).sorted()
    elapsed = time.perf_counter() - t0
    checks = validate(dec, w, k, inst.member_point, dim=inst.dim())
    ok = all(checks[key] for key in ("sum_ok", "count_ok", "membership_ok", "affine_independent", "dim_bound"))
    doc = {
        "command": "decompose",
        "instance": _instance_header(inst),
        "k": k,
        "w": list(w),
        "status": "ok" if ok else "checks_failed",
        "decomposition": {"points": [list(p) for p in dec.points], "multiplicities": list(dec.multiplicities)},
        "checks": checks,
    }
    if timing:
        doc["timing"] = {"decompose_seconds": round(elapsed, 6)}
    return doc, EXIT_OK if ok else EXIT_CHECKS_FAILED


def verify_certificate(inst: Instance, cert: dict) -> dict:
    """Re-run every certificate check against ``inst`` from the certificate's data alone."""
    try:
        k = int(cert["k"])
        w = [int(v) for v in cert["w"]]
        dec = Decomposition(
            tuple(tuple(int(v) for v in p) for p in cert["decomposition"]["points"]),
            tuple(int(m) for m in cert["decomposition"]["multiplicities"]),
            k,
        )
    except (KeyError, TypeError, ValueError) as e:
        return {"holds": False, "reason": f"malformed certificate: {e}"}
    checks = validate(dec, w, k, inst.member_point, dim=inst.dim())
    same = cert.get("instance", {}).get("sha256") == inst.digest
    holds = same and all(checks[key] for key in ("sum_ok", "count_ok", "membership_ok", "affine_independent", "dim_bound"))
    return {"holds": holds, "checks": checks, "instance_matches": same}


# --------------------------------------------------------------------------
#  check
# --------------------------------------------------------------------------


def _tu_matrix(inst: Instance):
    if inst.kind == "tu":
        return inst.inst.A
    if inst.kind == "ntu":
        return inst.inst.A_hat
    if inst.kind == "gammoid_intersection":
        return inst.net.incidence_matrix()
    raise InvalidInstance(f"no constraint matrix to test for {inst.kind} instances")


def run_check(path: str, prop: str, args) -> tuple[dict, int]:
    report: dict = {"command": "check", "property": prop}
    if prop == "submodular":
        return _check_submodular(path, report)
    inst = load(path)
    report["instance"] = _instance_header(inst)
    kmax = args.kmax if args.kmax is not None else cap("k_max")
    box = _box_for(inst, args.box)
    if prop == "tu":
        rep = check_tu(_tu_matrix(inst), sample=args.sample)
        report["holds"] = rep.is_tu
        report["exhaustive"] = rep.exhaustive
        report["reason"] = rep.reason
        if not rep.is_tu:
            report["witness"] = {"rows": list(rep.rows), "cols": list(rep.cols), "determinant": rep.determinant}
    elif prop == "box-integral":
        P = inst.polyhedron()
        rep = check_box_integral(P, box, cap=cap("box_count"))
        report["holds"] = rep.box_integral
        report["boxes_checked"] = rep.boxes_checked
        if not rep.box_integral:
            report["witness"] = {
                "box_lower": rat_vec(rep.witness_lower),
                "box_upper": rat_vec(rep.witness_upper),
                "vertex": rat_vec(rep.witness_vertex),
            }
    elif prop in ("idp", "icp"):
        points = inst.integer_points()
        rep = (check_idp if prop == "idp" else check_icp)(points, kmax, box)
        report.update({"holds": rep.holds, "k_max": kmax, "lattice_points_checked": rep.checked})
        if rep.counterexample:
            report["witness"] = rep.counterexample
    elif prop == "rank":
        points = inst.integer_points()
        rep = caratheodory_rank_search(points, kmax, budget_seconds=args.budget, stop_at=args.stop_at)
        report.update(rep.to_dict())
        report["dim"] = inst.dim()
        report["holds"] = rep.caratheodory_rank_lower_bound <= inst.dim() + 1
        report["statement"] = "lower bound <= dim + 1"
    elif prop == "certificate":
        if not args.cert:
            raise InvalidInstance("check certificate needs --cert FILE")
        try:
            cert = json.loads(Path(args.cert).read_text())
        except json.JSONDecodeError as e:
            raise InvalidInstance(f"{args.cert}:{e.lineno}:{e.colno}: {e.msg}") from None
        report.update(verify_certificate(inst, cert))
    return report, EXIT_OK if report["holds"] else EXIT_FALSE


def _check_submodular(path: str, report: dict) -> tuple[dict, int]:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise InvalidInstance(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from None
    if doc.get("type") == "polymatroid":
        n, values = int(doc["n"]), [int(v) for v in doc["values"]]
        if len(values) != 1 << n:
            raise InvalidInstance(f"expected {1 << n} values")
        bad = submodularity_violation(values, n)
        report["instance"] = {"id": doc.get("id", "polymatroid"), "type": "polymatroid"}
        report["holds"] = bad is None
        if bad is not None:
            A, B = bad
            report["witness"] = {
                "A": _members(A),
                "B": _members(B),
                "f(A)+f(B)": values[A] + values[B],
                "f(A|B)+f(A&B)": values[A | B] + values[A & B],
            }
        return report, EXIT_OK if bad is None else EXIT_FALSE
    inst = load(path)
    if inst.kind != "matroid":
        raise InvalidInstance("submodularity applies to polymatroid and matroid instances")
    # loading already validated the rank table as a matroid rank function
    report["instance"] = _instance_header(inst)
    report["holds"] = True
    return report, EXIT_OK


# --------------------------------------------------------------------------
#  entry point
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="icpkit", description="Integer Carathéodory decompositions with exact certificates.")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decompose", help="decompose w in kP into affinely independent integer points")
    d.add_argument("instance")
    d.add_argument("--w", required=True, help="comma-separated integer vector")
    d.add_argument("--k", required=True, type=int)
    d.add_argument("--pretty", action="store_true", help="aligned text instead of JSON")
    d.add_argument("--timing", action="store_true", help="include wall-clock timing (breaks byte-determinism)")

    c = sub.add_parser("check", help="test a property of an instance")
    c.add_argument("instance")
    c.add_argument("property", choices=PROPERTIES)
    c.add_argument("--kmax", type=int, default=None)
    c.add_argument("--box", default=None, help="LO:HI, e.g. 0,0:2,2")
    c.add_argument("--budget", type=float, default=None, help="seconds for the rank search")
    c.add_argument("--stop-at", type=int, default=None, help="stop the rank search once this bound is reached")
    c.add_argument("--sample", action="store_true", help="allow sampled TU checks above the exhaustive cap")
    c.add_argument("--cert", default=None, help="certificate file for 'check certificate'")
    c.add_argument("--pretty", action="store_true")

    e = sub.add_parser("enumerate", help="list the integer points of an instance")
    e.add_argument("instance")
    e.add_argument("--box", default=None, help="LO:HI, e.g. 0,0:2,2")
    e.add_argument("--pretty", action="store_true")
    return p


def _error(kind: str, exc: Exception, code: int, pretty: bool) -> int:
    doc = {"error": kind, "message": str(exc)}
    if isinstance(exc, NotBoxIntegral):
        doc["coordinate"] = exc.coordinate
        doc["value"] = rat(exc.value)
    print(dumps(doc, pretty))
    return code


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    pretty = getattr(args, "pretty", False)
    try:
        if args.command == "decompose":
            inst = load(args.instance)
            doc, code = certify(inst, parse_vector(args.w), args.k, timing=args.timing)
        elif args.command == "check":
            doc, code = run_check(args.instance, args.property, args)
        else:
            inst = load(args.instance)
            box = _box_for(inst, args.box)
            pts = inst.integer_points(box)
            doc, code = [list(p) for p in pts], EXIT_OK
    except (InvalidInstance, FileNotFoundError, IsADirectoryError) as exc:
        return _error("malformed", exc, EXIT_MALFORMED, pretty)
    except NotMember as exc:
        return _error("not_member", exc, EXIT_NOT_MEMBER, pretty)
    except (NotBoxIntegral, NoIndependentDecomposition) as exc:
        return _error("not_box_integral" if isinstance(exc, NotBoxIntegral) else "no_independent_decomposition", exc, EXIT_NOT_BOX_INTEGRAL, pretty)
    except AffineDependence as exc:
        return _error("affine_dependence", exc, EXIT_DEPENDENT, pretty)
    except ResourceCapExceeded as exc:
        return _error("resource_cap", exc, EXIT_CAP, pretty)
    print(dumps(doc, pretty))
    return code


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
