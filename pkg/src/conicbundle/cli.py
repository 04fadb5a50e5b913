"""Command-line front end: JSON in, verdict JSON out.

Exit codes: 0 = yes/success, 1 = no, 2 = usage or data error.  Output is
canonical (sorted keys, fixed indentation), so identical input bytes produce
identical output bytes.  Every yes-verdict carries a witness and every
no-verdict a machine-readable reason code.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from . import conic_model as cm
from . import delpezzo as dp
from . import lattice as lat
from . import planner as pl
from . import projline as pj
from . import twist as tw
from .errors import ConicBundleError, SchemaError

SUBCOMMANDS = (
    "decide-birational", "decide-iso", "decide-verytransitive",
    "realizable-perms", "stabilizer", "twist", "verify-twist",
    "geiser", "biconic-image", "lattice", "region-path", "selftest",
)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _need(payload: dict, field: str, kind=None):
    if not isinstance(payload, dict) or field not in payload:
        raise SchemaError(field, "missing required field")
    value = payload[field]
    if kind is not None and not isinstance(value, kind):
        raise SchemaError(field, f"expected {kind.__name__}")
    return value


def _parse_config(obj) -> pj.IntervalConfig:
    if not isinstance(obj, list):
        raise SchemaError("config", "expected a list of [start, end] pairs")
    try:
        return pj.IntervalConfig.from_json(obj)
    except (ValueError, IndexError, TypeError) as exc:
        raise SchemaError("config", str(exc))


def _parse_marked(obj, field: str) -> cm.MarkedModel:
    try:
        return cm.MarkedModel.from_json(_need(obj, field, dict))
    except (KeyError, TypeError) as exc:
        raise SchemaError(field, f"bad marked model: {exc}")


def _cmd_decide_birational(payload: dict):
    m1 = cm.ConicModel.from_json(_need(payload, "model1", dict))
    m2 = cm.ConicModel.from_json(_need(payload, "model2", dict))
    witness = cm.decide_birational(m1, m2)
    if witness is None:
        return 1, {"answer": False, "rule": cm.RULE_BIRATIONAL,
                   "reason": "no-interval-equivalence"}
    return 0, {"answer": True, "rule": cm.RULE_BIRATIONAL,
               "witness": witness.as_json()}


def _cmd_decide_iso(payload: dict):
    m1 = _parse_marked(payload, "model1")
    m2 = _parse_marked(payload, "model2")
    result = cm.decide_marked_iso(m1, m2)
    if result is None:
        return 1, {"answer": False, "rule": cm.RULE_MARKED_ISO,
                   "reason": "no-count-compatible-equivalence"}
    nu, witness = result
    return 0, {"answer": True, "rule": cm.RULE_MARKED_ISO,
               "witness": {"perm": [i + 1 for i in nu], "moebius": witness.as_json()}}


def _cmd_decide_verytransitive(payload: dict):
    marked = _parse_marked(payload, "model")
    verdict = cm.decide_very_transitive(marked)
    obj = verdict.as_json()
    obj["answer"] = verdict.very_transitive
    return (0 if verdict.very_transitive else 1), obj


def _cmd_realizable_perms(payload: dict):
    config = _parse_config(_need(payload, "config", list))
    if config.r < 1:
        raise SchemaError("config", "need at least one interval")
    perms = pj.realizable_permutations(config)
    entries = [{"perm": [i + 1 for i in nu], "witness": m.as_json()}
               for nu, m in sorted(perms.items())]
    return 0, {"count": len(entries), "permutations": entries}


def _cmd_stabilizer(payload: dict):
    tokens = _need(payload, "points", list)
    points = [pj.ProjPoint.from_token(t) for t in tokens]
    if len(set(points)) < 3:
        raise SchemaError("points", "need at least three distinct points")
    maps = pj.stabilizer(points)
    return 0, {"order": len(maps), "stabilizer": [m.as_json() for m in maps]}


def _parse_pairs(payload: dict):
    pairs = []
    for entry in payload.get("pairs", []):
        if not isinstance(entry, list) or len(entry) != 2:
            raise SchemaError("pairs", "each entry must be a [source, target] pair")
        pairs.append((cm.SurfPoint.from_json(entry[0]), cm.SurfPoint.from_json(entry[1])))
    return pairs


def _cmd_twist(payload: dict):
    model = cm.ConicModel.from_json(_need(payload, "model", dict))
    pairs = _parse_pairs(payload)
    pins = [pj.parse_rat(t) for t in payload.get("pins", [])]
    jets = [(pj.parse_rat(x), pj.parse_rat(mu)) for x, mu in payload.get("jets", [])]
    twist = tw.synthesize_twist(model, pairs, pins=pins, jets=jets)
    report = tw.verify_twist(model, twist)
    return 0, {"twist": twist.as_json(),
               "report": {"passed": report.passed,
                          "failures": list(report.failures),
                          "points_checked": report.points_checked}}


def _cmd_verify_twist(payload: dict):
    model = cm.ConicModel.from_json(_need(payload, "model", dict))
    twist = tw.TwistMap.from_json(_need(payload, "twist", dict))
    report = tw.verify_twist(model, twist)
    obj = {"passed": report.passed, "failures": list(report.failures),
           "points_checked": report.points_checked}
    if not report.passed:
        obj["reason"] = "verification-failed"
    return (0 if report.passed else 1), obj


def _cmd_geiser(payload: dict):
    model = dp.BiconicModel.from_json(_need(payload, "model", dict))
    point = dp.BiPoint.from_json(_need(payload, "point", dict))
    image = dp.geiser(model, point)
    return 0, {"image": image.as_json(),
               "second_fibration": [str(image.t.u0), str(image.t.u1)]}


def _cmd_biconic_image(payload: dict):
    model = dp.BiconicModel.from_json(_need(payload, "model", dict))
    config = dp.biconic_interval_image(model)
    return 0, {"config": config.as_json(), "r": config.r}


def _cmd_lattice(payload: dict):
    m = _need(payload, "m", int)
    classes = lat.exceptional_classes(m)
    obj = {"m": m, "count": len(classes),
           "classes": [c.as_json() for c in classes],
           "singular_fibres": lat.singular_fibre_count(m)._asdict()}
    if m == 5:
        sigma, alpha = lat.deg4_sigma(), lat.deg4_alpha()
        obj["checks"] = {
            "sigma_involution": sigma.is_involution,
            "alpha_involution": alpha.is_involution,
            "sigma_fixed_free": not sigma.fixed_indices(),
            "alpha_fixed_free": not alpha.fixed_indices(),
            "form_preserved": lat.perm_preserves_form(sigma) and lat.perm_preserves_form(alpha),
            "commute": lat.perms_commute(sigma, alpha),
        }
        obj["sigma"] = list(sigma.mapping)
        obj["alpha"] = list(alpha.mapping)
    if m == 7:
        k = lat.canonical_class(7)
        reflected = [lat.geiser_reflection(c) for c in classes]
        obj["checks"] = {
            "reflection_fixes_k": lat.geiser_reflection(k) == k,
            "reflection_involution": all(
                lat.geiser_reflection(r) == c for c, r in zip(classes, reflected)),
            "reflection_permutes_classes": all(r in classes for r in reflected),
        }
    return 0, obj


def _cmd_region_path(payload: dict):
    region = pl.Region.from_json(_need(payload, "rects", list))
    start = tuple(pj.parse_rat(t) for t in _need(payload, "start", list))
    end = tuple(pj.parse_rat(t) for t in _need(payload, "end", list))
    fx = [pj.parse_rat(t) for t in payload.get("forbidden_x", [])]
    fy = [pj.parse_rat(t) for t in payload.get("forbidden_y", [])]
    path = pl.find_rect_path(region, start, end, fx, fy)
    if path is None:
        return 1, {"answer": False, "reason": "disconnected"}
    return 0, {"answer": True, "path": path.as_json(), "segments": len(path)}


def _selftest_configs(rng: random.Random, count: int, r: int):
    configs = []
    while len(configs) < count:
        values = rng.sample(range(-40, 41), 2 * r)
        dens = [rng.choice((1, 1, 2, 3)) for _ in values]
        points = sorted(Fraction(v, d) for v, d in zip(values, dens))
        if len(set(points)) < 2 * r:
            continue
        pairs = [(points[2 * i], points[2 * i + 1]) for i in range(r)]
        configs.append(pj.IntervalConfig.from_rat_pairs(pairs))
    return configs


def _selftest(seed: int) -> dict:
    rng = random.Random(seed)
    suites = []

    failures = []
    cases = 0
    for r in (1, 2, 3):
        for config in _selftest_configs(rng, 6, r):
            cases += 1
            if pj.IntervalConfig.from_json(config.as_json()) != config:
                failures.append(f"roundtrip broke for {config}")
            got = pj.config_equiv(config, config, tuple(range(r)))
            if got is None or got[0] != pj.Moebius.identity():
                failures.append(f"self-equivalence missed the identity on {config}")
    suites.append({"name": "interval-configs", "cases": cases, "failures": failures})

    failures = []
    cases = 0
    spins = [tw.Rotation.identity(), tw.Rotation(Fraction(0), Fraction(1)),
             tw.Rotation(Fraction(3, 5), Fraction(4, 5)),
             tw.Rotation(Fraction(-3, 5), Fraction(4, 5)),
             tw.Rotation(Fraction(5, 13), Fraction(12, 13))]
    for roots in ((0, 1), (0, 1, 2, 3), (-2, -1, 1, 2), (0, 1, 4, 5, 8, 9)):
        model = cm.ConicModel(tuple(Fraction(a) for a in roots))
        fibers = [p for p in tw.sample_surface_points(model, per_interval=1)
                  if model.q_at(p.x) > 0]
        unique = []
        for p in fibers:
            if all(p.x != q.x for q in unique):
                unique.append(p)
        for _ in range(2):
            cases += 1
            chosen = unique[:rng.randint(1, len(unique))]
            pairs = []
            for p in chosen:
                y, z = rng.choice(spins).apply(p.y, p.z)
                pairs.append((p, cm.SurfPoint(p.x, y, z)))
            pin = next((a for a in model.roots if all(a != p.x for p, _ in pairs)), None)
            pins = [pin] if pin is not None else []
            twist = tw.synthesize_twist(model, pairs, pins=pins)
            for p, q in pairs:
                if tw.apply_twist(model, twist, p) != q:
                    failures.append(f"transport missed on roots {roots}")
            if not tw.verify_twist(model, twist).passed:
                failures.append(f"verification failed on roots {roots}")
    suites.append({"name": "twist-transport", "cases": cases, "failures": failures})

    failures = []
    cases = 0
    models = [
        dp.biconic_from_config(pj.IntervalConfig.from_rat_pairs([(0, 1)])),
        dp.biconic_from_config(pj.IntervalConfig.from_rat_pairs([(-2, 2)])),
        dp.biconic_from_config(pj.IntervalConfig.from_rat_pairs([(0, 1), (2, 3)])),
    ]
    for model in models:
        image = dp.biconic_interval_image(model)
        for arc in image.intervals:
            t = arc.interior_point()
            for p in dp.fiber_points(model, t, want=4):
                cases += 1
                q = dp.geiser(model, p)
                if dp.geiser(model, q) != p:
                    failures.append(f"involution broke at {p}")
                if q.xyz != p.xyz:
                    failures.append(f"plane coordinate moved at {p}")
    suites.append({"name": "geiser-involution", "cases": cases, "failures": failures})

    failures = []
    counts = {5: 16, 6: 27, 7: 56}
    for m, expected in counts.items():
        if len(lat.exceptional_classes(m)) != expected:
            failures.append(f"class count for m={m}")
    sigma, alpha = lat.deg4_sigma(), lat.deg4_alpha()
    if not (sigma.is_involution and alpha.is_involution
            and lat.perms_commute(sigma, alpha)
            and lat.perm_preserves_form(sigma) and lat.perm_preserves_form(alpha)):
        failures.append("degree-4 permutation checks")
    suites.append({"name": "lattice", "cases": len(counts) + 1, "failures": failures})

    failures = []
    cases = 0
    for _ in range(10):
        cases += 1
        rects = []
        for _ in range(rng.randint(2, 4)):
            x0, y0 = rng.randint(0, 6), rng.randint(0, 6)
            rects.append(pl.Rect(x0, x0 + rng.randint(1, 3), y0, y0 + rng.randint(1, 3)))
        region = pl.Region(tuple(rects))
        a = rects[0]
        b = rects[-1]
        start = ((a.x0 + a.x1) / 2, (a.y0 + a.y1) / 2)
        end = ((b.x0 + b.x1) / 2, (b.y0 + b.y1) / 2)
        path = pl.find_rect_path(region, start, end)
        if path is not None and not pl.validate_path(region, path, start, end):
            failures.append(f"invalid path in {region}")
    suites.append({"name": "planner", "cases": cases, "failures": failures})

    passed = all(not s["failures"] for s in suites)
    return {"seed": seed, "passed": passed, "suites": suites}


def _cmd_selftest(payload: dict, seed: int):
    report = _selftest(seed)
    return (0 if report["passed"] else 1), report


_HANDLERS = {
    "decide-birational": _cmd_decide_birational,
    "decide-iso": _cmd_decide_iso,
    "decide-verytransitive": _cmd_decide_verytransitive,
    "realizable-perms": _cmd_realizable_perms,
    "stabilizer": _cmd_stabilizer,
    "twist": _cmd_twist,
    "verify-twist": _cmd_verify_twist,
    "geiser": _cmd_geiser,
    "biconic-image": _cmd_biconic_image,
    "lattice": _cmd_lattice,
    "region-path": _cmd_region_path,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conicbundle",
        description="Exact decision procedures for real conic-bundle models.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--input", default=None, help="JSON request file (default: stdin)")
        p.add_argument("--output", default=None, help="output file (default: stdout)")
        if name == "selftest":
            p.add_argument("--seed", type=int, default=0)
    return parser


def run(argv) -> int:
    """Dispatch a parsed command line; returns the process exit code."""
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0

    def emit(text: str):
        if args.output:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)

    if args.command == "selftest":
        code, obj = _cmd_selftest({}, args.seed)
        emit(_dump(obj))
        return code

    try:
        if args.input:
            with open(args.input, "r", encoding="utf-8") as fh:
                raw = fh.read()
        else:
            raw = sys.stdin.read()
    except OSError as exc:
        sys.stderr.write(f"cannot read input: {exc}\n")
        return 2

    try:
        payload = json.loads(raw)
    except json.JSONDecodeError as exc:
        sys.stderr.write(_dump({"error": "malformed-json", "line": exc.lineno,
                                "column": exc.colno, "message": exc.msg}))
        return 2

    try:
        code, obj = _HANDLERS[args.command](payload)
    except SchemaError as exc:
        sys.stderr.write(_dump({"error": "schema", "field": exc.field,
                                "message": str(exc)}))
        return 2
    except ConicBundleError as exc:
        sys.stderr.write(_dump({"error": type(exc).__name__, "message": str(exc)}))
        return 2
    except (KeyError, TypeError, ValueError) as exc:
        sys.stderr.write(_dump({"error": type(exc).__name__, "message": str(exc)}))
        return 2
    emit(_dump(obj))
    return code


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
