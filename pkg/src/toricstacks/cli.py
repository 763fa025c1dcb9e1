"""Command-line front end.

Reads fan JSON ({"rank": n, "rays": [[..]], "max_cones": [[indices]]}),
dispatches to the compute modules, and prints either a text report or the
JSON shape published in schemas.py.  Exit codes: 0 for a successful
computation (for the verify-* verbs: a true conclusion), 1 for a false or
inconclusive verification, 2 for input or usage errors.  Output is
deterministic: identical inputs produce identical bytes.
"""

from __future__ import annotations

import argparse
import json
import sys
from math import lcm

from .chow import chow_groups, chow_ring_stack, verify_vanishing
from .cox import TorusFactorError, chow_ideals, cox, strong_divisor_check
from .fan import Fan, GeometryError, star_subdivision, star_vector, \
    validate_fan
from .graded import graded_piece
from .ktheory import k_ring_stack, verify_k_vanishing


class InputError(ValueError):
    """Unusable input: missing file, malformed JSON, bad option value."""


def _load_payload(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except OSError as exc:
        raise InputError("cannot read %s: %s" % (path, exc.strerror or exc))
    except json.JSONDecodeError as exc:
        raise InputError("malformed JSON in %s: %s" % (path, exc))
    if not isinstance(payload, dict):
        raise InputError("%s: expected a JSON object" % path)
    return payload


def _load_fan(payload: dict, path: str) -> Fan:
    for key in ("rank", "rays", "max_cones"):
        if key not in payload:
            raise InputError("%s: fan JSON needs rank, rays and max_cones"
                             % path)
    return Fan.from_data(payload["rank"], payload["rays"],
                         payload["max_cones"])


def _pick_cone(f: Fan, index: int):
    cones = f.maximal_cones
    if not 0 <= index < len(cones):
        raise InputError("cone index %d out of range; the fan has %d "
                         "maximal cones" % (index, len(cones)))
    return f.cone(cones[index])


def _vec(v) -> str:
    return "(" + ", ".join(str(x) for x in v) + ")"


def _form(row, letter: str = "s") -> str:
    """Linear form over indexed variables, e.g. (-2,-2,0) -> '-2s1 - 2s2'."""
    parts = []
    for i, c in enumerate(row):
        if not c:
            continue
        mag = abs(c)
        body = "%s%d" % (letter, i + 1) if mag == 1 \
            else "%d%s%d" % (mag, letter, i + 1)
        parts.append(("-" if c < 0 else "+", body))
    if not parts:
        return "0"
    sign, body = parts[0]
    text = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        text += " %s %s" % (sign, body)
    return text


def _monomial(indices, letter: str = "s") -> str:
    return "*".join("%s%d" % (letter, i + 1) for i in sorted(indices))


def _laurent(coords) -> str:
    parts = []
    for i, c in enumerate(coords):
        if not c:
            continue
        parts.append("e%d" % (i + 1) + ("" if c == 1 else "^%d" % c))
    return "*".join(parts) if parts else "1"


def _gen_text(gen) -> str:
    # constant term first, then the monomial terms
    terms = sorted(gen, key=lambda t: (any(t[0]), t[0]))
    text = ""
    for coords, coeff in terms:
        mono = _laurent(coords)
        mag = abs(coeff)
        body = mono if mag == 1 else "%d*%s" % (mag, mono)
        if not text:
            text = ("-" if coeff < 0 else "") + body
        else:
            text += " %s %s" % ("-" if coeff < 0 else "+", body)
    return text or "0"


def _group_json(g) -> dict:
    return {"free_rank": g.free_rank, "torsion": list(g.torsion),
            "text": g.describe()}


def _torsion_text(torsion) -> str:
    return ", ".join("Z/%d" % d for d in torsion) if torsion else "none"


def _cmd_validate(ns):
    f = _load_fan(_load_payload(ns.input), ns.input)
    report = validate_fan(f)
    payload = {"ok": report.ok,
               "violations": [{"first": list(v.first),
                               "second": list(v.second),
                               "reason": v.reason}
                              for v in report.violations]}
    if report.ok:
        lines = ["fan is valid: %d rays, %d maximal cones"
                 % (len(f.rays), len(f.maximal_cones))]
        return payload, lines, 0
    lines = ["fan axioms violated:"]
    for v in report.violations:
        lines.append("  cones %s and %s: %s"
                     % (_vec(v.first), _vec(v.second), v.reason))
    return payload, lines, 2


def _cmd_subdivide(ns):
    f = _load_fan(_load_payload(ns.input), ns.input)
    sigma = _pick_cone(f, ns.cone)
    if sigma.is_zero:
        raise InputError("cannot subdivide the zero cone")
    out = star_subdivision(f, sigma)
    ray = star_vector(sigma)
    data = out.to_data()
    payload = {"fan": data, "star_ray": list(ray)}
    lines = ["star ray: %s" % _vec(ray), "rays:"]
    lines += ["  %s" % _vec(r) for r in data["rays"]]
    lines.append("maximal cones: "
                 + ", ".join(_vec(c) for c in data["max_cones"]))
    return payload, lines, 0


def _cmd_cox(ns):
    f = _load_fan(_load_payload(ns.input), ns.input)
    cd = cox(f)
    payload = {"group": _group_json(cd.char_group),
               "weights": [list(w) for w in cd.weights],
               "kernel": [list(r) for r in cd.kernel],
               "primitive_collections": [sorted(c)
                                         for c in cd.primitive_collections]}
    lines = ["character group: %s" % cd.char_group.describe(), "weights:"]
    lines += ["  x%d -> %s" % (i + 1, _vec(w))
              for i, w in enumerate(cd.weights)]
    lines.append("kernel lattice:")
    lines += ["  %s" % _vec(r) for r in cd.kernel] or ["  (empty)"]
    coll = ", ".join(_monomial(c, "x") for c in cd.primitive_collections)
    lines.append("primitive collections: %s" % (coll or "none"))
    return payload, lines, 0


def _piece_json(p, max_deg):
    out = []
    for k in range(max_deg + 1):
        g = graded_piece(p, k).group
        out.append({"degree": k, "free_rank": g.free_rank,
                    "torsion": list(g.torsion), "text": g.describe()})
    return out


def _cmd_chow_stack(ns):
    if ns.max_deg < 0:
        raise InputError("--max-deg must be nonnegative")
    f = _load_fan(_load_payload(ns.input), ns.input)
    ideal = chow_ideals(cox(f))
    p = chow_ring_stack(f)
    pieces = _piece_json(p, ns.max_deg)
    payload = {"variables": ideal.variables,
               "linear_relations": [list(r) for r in ideal.linear_gens],
               "monomial_relations": [sorted(c)
                                      for c in ideal.monomial_gens],
               "pieces": pieces}
    lines = ["variables: %s"
             % ", ".join("s%d" % (i + 1) for i in range(ideal.variables)),
             "linear relations:"]
    lines += ["  %s" % _form(r) for r in ideal.linear_gens] or ["  none"]
    mono = ", ".join(_monomial(c) for c in ideal.monomial_gens)
    lines.append("monomial relations: %s" % (mono or "none"))
    lines.append("graded pieces:")
    lines += ["  A^%d = %s" % (pc["degree"], pc["text"]) for pc in pieces]
    return payload, lines, 0


def _cmd_chow_groups(ns):
    f = _load_fan(_load_payload(ns.input), ns.input)
    ks = [ns.k] if ns.k is not None else list(range(f.ambient_rank + 1))
    groups = []
    for k in ks:
        g = chow_groups(f, k)
        groups.append({"k": k, "free_rank": g.free_rank,
                       "torsion": list(g.torsion), "text": g.describe()})
    payload = {"groups": groups}
    if ns.k is not None:
        lines = [groups[0]["text"]]
    else:
        lines = ["A_%d = %s" % (g["k"], g["text"]) for g in groups]
    return payload, lines, 0


def _cmd_ktheory_stack(ns):
    f = _load_fan(_load_payload(ns.input), ns.input)
    p = k_ring_stack(f)
    gens_json = [[{"exponent": list(coords), "coeff": coeff}
                  for coords, coeff in gen] for gen in p.ideal_gens]
    gens_text = [_gen_text(gen) for gen in p.ideal_gens]
    payload = {"group": _group_json(p.group),
               "generator_images": [list(w) for w in p.generator_images],
               "ideal_gens": gens_json,
               "ideal_gens_text": gens_text}
    lines = ["group algebra of: %s" % p.group.describe(),
             "generator images:"]
    lines += ["  x%d -> %s" % (i + 1, _laurent(w))
              for i, w in enumerate(p.generator_images)]
    lines.append("ideal generators: %s" % (", ".join(gens_text) or "none"))
    return payload, lines, 0


def _cmd_verify_vanishing(ns):
    if ns.max_deg < 1:
        raise InputError("--max-deg must be at least 1")
    f = _load_fan(_load_payload(ns.input), ns.input)
    sigma = _pick_cone(f, ns.cone)
    report = verify_vanishing(sigma, ns.max_deg)
    payload = {
        "cone_rays": [list(r) for r in report.cone_rays],
        "star_ray": list(report.star_ray),
        "max_deg": report.max_deg,
        "identified": report.identified,
        "failure": report.failure,
        "extra_row": list(report.extra_row)
        if report.extra_row is not None else None,
        "verdicts": [{"degree": k, "iso": ok} for k, ok in report.verdicts],
        "pieces": [{"degree": d, "free_rank": r, "torsion": list(t),
                    "text": ""} for d, r, t in report.pieces],
        "point_class": report.point_class,
        "conclusion": report.conclusion,
    }
    for pc in payload["pieces"]:
        parts = ["Z/%d" % d for d in pc["torsion"]] + ["Z"] * pc["free_rank"]
        pc["text"] = " + ".join(parts) if parts else "0"
    lines = ["cone rays: " + ", ".join(_vec(r) for r in report.cone_rays),
             "subdivision ray: %s" % _vec(report.star_ray)]
    if report.identified:
        lines.append("identification: t_v -> %s (modulo the kernel lattice)"
                     % _form(report.extra_row))
    else:
        lines.append("identification failed: %s" % report.failure)
    for k, ok in report.verdicts:
        lines.append("degree %d comparison: %s" % (k, "iso" if ok else
                                                   "NOT iso"))
    lines.append("graded pieces of the subdivided stack:")
    lines += ["  A^%d = %s" % (pc["degree"], pc["text"])
              for pc in payload["pieces"]]
    lines.append("A^0 of the point stratum: %s (recorded assumption)"
                 % report.point_class)
    if report.conclusion:
        lines.append("A^k_op vanishes for k=1..%d (checked)" % report.max_deg)
        return payload, lines, 0
    lines.append("vanishing NOT verified for this cone")
    return payload, lines, 1


def _cmd_verify_k_vanishing(ns):
    if ns.box < 1:
        raise InputError("--box must be at least 1")
    f = _load_fan(_load_payload(ns.input), ns.input)
    sigma = _pick_cone(f, ns.cone)
    report = verify_k_vanishing(sigma, ns.box)
    payload = {
        "cone_rays": [list(r) for r in report.cone_rays],
        "star_ray": list(report.star_ray),
        "box": report.box_radius,
        "window_rank": report.window_rank,
        "torsion": list(report.torsion)
        if report.torsion is not None else None,
        "stabilized": report.stabilized,
        "matched": report.matched,
        "identified": report.identified,
        "failure": report.failure,
        "conclusion": report.conclusion,
    }
    lines = ["cone rays: " + ", ".join(_vec(r) for r in report.cone_rays),
             "subdivision ray: %s" % _vec(report.star_ray),
             "box radius: %d" % report.box_radius]
    if not report.identified:
        lines.append("identification failed: %s" % report.failure)
    else:
        lines.append("window rank: %d" % report.window_rank)
        lines.append("window torsion: %s" % _torsion_text(report.torsion))
        lines.append("stabilized: %s" % ("yes" if report.stabilized
                                         else "no"))
        matched = {True: "yes", False: "no", None: "undetermined"}
        lines.append("matched: %s" % matched[report.matched])
    if report.conclusion:
        lines.append("op K^0 vanishing verified on the stabilized window "
                     "(checked at box radius %d)" % report.box_radius)
        return payload, lines, 0
    if report.identified and not report.stabilized:
        lines.append("inconclusive: the window did not stabilize at this "
                     "box radius")
    else:
        lines.append("vanishing NOT verified for this cone")
    return payload, lines, 1


def _cmd_strongness(ns):
    if ns.bound < 1:
        raise InputError("--bound must be at least 1")
    payload_in = _load_payload(ns.input)
    f = _load_fan(payload_in, ns.input)
    if ns.ray is not None:
        divisor_ray = ns.ray
    elif "divisor_ray" in payload_in:
        divisor_ray = int(payload_in["divisor_ray"])
    else:
        raise InputError("no divisor ray: pass --ray or put a divisor_ray "
                         "key in the input")
    if not 0 <= divisor_ray < len(f.rays):
        raise InputError("divisor ray %d out of range; the fan has %d rays"
                         % (divisor_ray, len(f.rays)))
    if "weights" in payload_in:
        weights = payload_in["weights"]
        if any(len(row) != len(f.rays) for row in weights):
            raise InputError("weights rows must have one entry per ray")
    else:
        cd = cox(f)
        if cd.char_group.torsion:
            raise InputError("the character group has torsion; pass an "
                             "explicit free weight matrix in the input")
        weights = [list(row) for row in zip(*cd.weights)] \
            if cd.weights else []
    reports = strong_divisor_check(weights, f, divisor_ray, bound=ns.bound)
    charts = [{"max_cone": list(r.max_cone),
               "invertible": list(r.invertible),
               "in_span": r.in_span,
               "min_power": r.min_power} for r in reports]
    strong = all(c["in_span"] for c in charts)
    minima = [c["min_power"] for c in charts]
    power = lcm(*minima) if minima and None not in minima else None
    payload = {"divisor_ray": divisor_ray, "bound": ns.bound,
               "charts": charts, "strong": strong, "power_lcm": power}
    lines = ["divisor: x%d" % (divisor_ray + 1)]
    for c in charts:
        mp = "unknown (bound %d exhausted)" % ns.bound \
            if c["min_power"] is None else str(c["min_power"])
        lines.append("chart D(%s): in span: %s; minimal power: %s"
                     % (_monomial(c["invertible"], "x"),
                        "yes" if c["in_span"] else "no", mp))
    if strong:
        lines.append("divisor x%d is strong on every chart"
                     % (divisor_ray + 1))
    else:
        bad = next(c for c in charts if not c["in_span"])
        lines.append("divisor x%d is NOT strong (fails on chart D(%s))"
                     % (divisor_ray + 1, _monomial(bad["invertible"], "x")))
    if power is not None:
        lines.append("x%d^%d is locally generated on every chart (lcm of "
                     "chart minima)" % (divisor_ray + 1, power))
    else:
        lines.append("no common power found within bound %d" % ns.bound)
    return payload, lines, 0


_HANDLERS = {
    "validate": _cmd_validate,
    "subdivide": _cmd_subdivide,
    "cox": _cmd_cox,
    "chow-stack": _cmd_chow_stack,
    "chow-groups": _cmd_chow_groups,
    "ktheory-stack": _cmd_ktheory_stack,
    "verify-vanishing": _cmd_verify_vanishing,
    "verify-k-vanishing": _cmd_verify_k_vanishing,
    "strongness": _cmd_strongness,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toricstacks",
        description="Exact toric intersection theory on fan JSON files.")
    sub = parser.add_subparsers(dest="verb", required=True)

    def add(verb, help_text):
        p = sub.add_parser(verb, help=help_text)
        p.add_argument("input", help="fan JSON file")
        p.add_argument("--json", action="store_true",
                       help="emit the JSON report instead of text")
        return p

    add("validate", "check the fan axioms")
    p = add("subdivide", "star subdivision of one maximal cone")
    p.add_argument("--cone", type=int, default=0,
                   help="0-based index into max_cones (default 0)")
    add("cox", "character group, weights, kernel and collections")
    p = add("chow-stack", "graded ring presentation and piece structures")
    p.add_argument("--max-deg", type=int, default=4)
    p = add("chow-groups", "Chow groups of the toric variety")
    p.add_argument("--k", type=int, default=None,
                   help="single degree; omit for all")
    add("ktheory-stack", "group algebra presentation")
    p = add("verify-vanishing", "exceptional comparison for one cone")
    p.add_argument("--cone", type=int, default=0)
    p.add_argument("--max-deg", type=int, default=4)
    p = add("verify-k-vanishing", "boxed K comparison for one cone")
    p.add_argument("--cone", type=int, default=0)
    p.add_argument("--box", type=int, default=3)
    p = add("strongness", "per-chart divisor strongness check")
    p.add_argument("--ray", type=int, default=None,
                   help="0-based divisor ray (default: divisor_ray key)")
    p.add_argument("--bound", type=int, default=20)
    return parser


def run(argv) -> int:
    parser = _build_parser()
    try:
        ns = parser.parse_args(list(argv))
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        payload, lines, code = _HANDLERS[ns.verb](ns)
    except (InputError, GeometryError, TorusFactorError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    if ns.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print("\n".join(lines))
    return code


def main() -> None:
    sys.exit(run(sys.argv[1:]))
