"""Command-line surface.

Every subcommand builds a JSON-native payload, optionally caches it, and
renders it through a pure formatting function, so cache hits and cold runs
print byte-identical output.  Exit codes: 0 success, 1 domain error,
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .arith import DomainError, primes_up_to
from .congruence import cross_bound, check_congruence, weight_compatible, scan_congruences
from .dims import dim_cusp_forms, dim_new
from .eigensystems import decompose, operator_primes, sturm_bound
from .graph import CongruenceGraph, mazur_report
from .images import ImageClass, classify_image, is_adequate
from .lifting import integral_classes, reduce_class_mod
from .mlt import EdgeContext, all_verdicts, best_verdict, find_good_dihedral
from .modsym import symbol_space
from .planner import connect as planner_connect
from .planner import plan_to_safe_form
from .store import (
    Store,
    checksum_of,
    descriptor_from_dict,
    descriptor_to_dict,
    plan_to_dict,
    resolve_cache_dir,
    verdict_to_dict,
)


def _label_str(label) -> str:
    return f"{label[0]}.{label[1]}.{label[2]}"


def _parse_label(text: str) -> tuple[int, int, int]:
    parts = text.split(".")
    if len(parts) != 3:
        raise DomainError(f"class label {text!r} must look like N.k.index")
    try:
        return int(parts[0]), int(parts[1]), int(parts[2])
    except ValueError as exc:
        raise DomainError(f"class label {text!r} must look like N.k.index") from exc


# -- space --------------------------------------------------------------------


def _payload_space(N: int, k: int, ell: int) -> dict:
    sp = symbol_space(N, k, ell)
    return {
        "N": N,
        "k": k,
        "ell": ell,
        "ambient": sp.dim,
        "cuspidal": sp.cuspidal_dim,
        "cusp_forms": dim_cusp_forms(N, k),
        "new": dim_new(N, k),
        "cusps": len(sp.cusp_classes),
        "sturm": sturm_bound(N, k),
    }


def _render_space(p: dict) -> str:
    return "\n".join(
        [
            f"space N={p['N']} k={p['k']} ell={p['ell']}",
            f"ambient dimension {p['ambient']}",
            f"cuspidal dimension {p['cuspidal']}",
            f"cusp forms dimension {p['cusp_forms']}",
            f"new subspace dimension {p['new']}",
            f"cusp count {p['cusps']}",
            f"sturm bound {p['sturm']}",
        ]
    )


# -- orbits -------------------------------------------------------------------


def _payload_orbits(N: int, k: int, ell: int) -> dict:
    systems = decompose(N, k, ell)
    qs = operator_primes(N, k, ell)
    orbits = []
    for s in systems:
        F = s.field
        orbits.append(
            {
                "label": s.label,
                "degree": s.degree,
                "multiplicity": s.multiplicity,
                "semisimple": s.semisimple,
                "old": s.is_old,
                "eigen": {str(q): [int(c) for c in F.decode(s.a(q))] for q in qs},
            }
        )
    return {"N": N, "k": k, "ell": ell, "sturm": sturm_bound(N, k), "orbits": orbits}


def _render_orbits(p: dict) -> str:
    lines = [
        f"orbits N={p['N']} k={p['k']} ell={p['ell']}",
        f"sturm bound {p['sturm']}",
    ]
    for o in p["orbits"]:
        kind = "old" if o["old"] else "new"
        semi = "yes" if o["semisimple"] else "no"
        lines.append(
            f"orbit {o['label']} degree={o['degree']} "
            f"multiplicity={o['multiplicity']} semisimple={semi} {kind}"
        )
        for q in sorted(o["eigen"], key=int):
            lines.append(f"  a[{q}]={json.dumps(o['eigen'][q])}")
    return "\n".join(lines)


# -- congruences --------------------------------------------------------------


def _reduced_scan(N1, k1, N2, k2, ell):
    """Certified congruences between the rational integral orbit classes of
    two spaces, reduced at one characteristic. Serves characteristics where
    a direct decomposition is out of domain, such as ell dividing a level."""
    ca = integral_classes(N1, k1)
    cb = integral_classes(N2, k2)
    bound = cross_bound(N1, k1, N2, k2)

    def reductions(container):
        out = []
        for cls in container.classes:
            try:
                out.append(reduce_class_mod(cls, ell, bound))
            except DomainError:
                continue
        return out

    left = reductions(ca)
    right = reductions(cb)
    same = (N1, k1) == (N2, k2)
    edges = []
    for i, ra in enumerate(left):
        for j, rb in enumerate(right):
            if same and j <= i:
                continue
            edge = check_congruence(ra, rb)
            if edge.certified:
                edges.append(edge)
    return edges


def _payload_congruences(N1, k1, N2, k2, lmax) -> dict:
    checked = []
    skipped = []
    edges = []
    for ell in primes_up_to(lmax):
        if not weight_compatible(k1, k2, ell):
            skipped.append([ell, f"weights {k1} and {k2} are incompatible at {ell}"])
            continue
        try:
            found = scan_congruences(
                decompose(N1, k1, ell), decompose(N2, k2, ell), ell
            )
            route = "direct"
        except DomainError as exc:
            if ell in (2, 3):
                skipped.append([ell, str(exc)])
                continue
            try:
                found = _reduced_scan(N1, k1, N2, k2, ell)
                route = "reduced"
            except DomainError as exc2:
                skipped.append([ell, str(exc2)])
                continue
        checked.append([ell, route])
        seen = set()
        for e in found:
            key = frozenset((e.left, e.right))
            if key in seen:
                continue
            seen.add(key)
            edges.append(
                {
                    "left": e.left,
                    "right": e.right,
                    "ell": e.ell,
                    "bound": e.bound,
                    "witnesses": list(e.witnesses),
                    "route": route,
                }
            )
    return {
        "N1": N1,
        "k1": k1,
        "N2": N2,
        "k2": k2,
        "lmax": lmax,
        "checked": checked,
        "skipped": skipped,
        "edges": edges,
    }


def _render_congruences(p: dict) -> str:
    lines = [
        f"congruences N1={p['N1']} k1={p['k1']} N2={p['N2']} k2={p['k2']} "
        f"lmax={p['lmax']}"
    ]
    by_ell: dict[int, list] = {ell: [] for ell, _ in p["checked"]}
    for e in p["edges"]:
        by_ell[e["ell"]].append(e)
    for ell, route in p["checked"]:
        if not by_ell[ell]:
            lines.append(f"ell {ell}: none")
        for e in by_ell[ell]:
            ws = ",".join(str(w) for w in e["witnesses"])
            tag = " (integral reduction)" if e["route"] == "reduced" else ""
            lines.append(
                f"ell {ell}: certified {e['left']} ~ {e['right']} "
                f"witnesses {ws} bound {e['bound']}{tag}"
            )
    for ell, reason in p["skipped"]:
        lines.append(f"skipped ell {ell}: {reason}")
    lines.append(f"total certified {len(p['edges'])}")
    return "\n".join(lines)


# -- classify -----------------------------------------------------------------


def _payload_classify(N, k, ell, index) -> dict:
    systems = decompose(N, k, ell)
    if index < 0 or index >= len(systems):
        raise DomainError(f"orbit index {index} out of range (have {len(systems)})")
    s = systems[index]
    img = classify_image(s)
    return {
        "N": N,
        "k": k,
        "ell": ell,
        "index": index,
        "label": s.label,
        "kind": img.kind,
        "parameter": img.parameter,
        "adequate": is_adequate(img, ell),
    }


def _render_classify(p: dict) -> str:
    param = "-" if p["parameter"] is None else str(p["parameter"])
    return "\n".join(
        [
            f"classify N={p['N']} k={p['k']} ell={p['ell']} index={p['index']}",
            f"orbit {p['label']} image {p['kind']} parameter {param}",
            f"adequate {'yes' if p['adequate'] else 'no'}",
        ]
    )


# -- mlt-edge -----------------------------------------------------------------


def _payload_mlt_edge(args) -> dict:
    parameter = args.parameter
    image = ImageClass(args.image, parameter)
    ordinary = None
    if args.ordinary is not None:
        ordinary = tuple(v == "true" for v in args.ordinary)
    fl = None if args.fontaine_laffaille is None else args.fontaine_laffaille == "true"
    ctx = EdgeContext(
        ell=args.ell,
        image=image,
        weights=(args.k1, args.k2),
        residually_modular=not args.not_residually_modular,
        ordinary=ordinary,
        good_dihedral=args.good_dihedral,
        fontaine_laffaille=fl,
    )
    verdicts = [verdict_to_dict(v) for v in all_verdicts(ctx)]
    best = best_verdict(ctx)
    return {
        "ell": args.ell,
        "image": args.image,
        "parameter": parameter,
        "weights": [args.k1, args.k2],
        "verdicts": verdicts,
        "best": None if best is None else best.theorem,
    }


def _render_mlt_edge(p: dict) -> str:
    param = "" if p["parameter"] is None else f" parameter {p['parameter']}"
    lines = [
        f"mlt-edge ell={p['ell']} image={p['image']}{param} "
        f"weights=({p['weights'][0]},{p['weights'][1]})"
    ]
    for n, v in enumerate(p["verdicts"], start=1):
        if v is None:
            lines.append(f"MLT{n} not stated for this image")
            continue
        app = "yes" if v["applicable"] else "no"
        assume = "yes" if v["assumption_used"] else "no"
        lines.append(f"MLT{n} applicable={app} assumptions={assume}")
        for name, status in v["conditions"]:
            lines.append(f"  {name}: {status}")
    lines.append("best none" if p["best"] is None else f"best MLT{p['best']}")
    return "\n".join(lines)


# -- graph --------------------------------------------------------------------


def _payload_graph(N: int, k: int, lmax: int) -> dict:
    report = mazur_report(N, k, primes_up_to(lmax))
    return {
        "N": N,
        "k": k,
        "lmax": lmax,
        "nodes": [_label_str(u) for u in report.nodes],
        "used": list(report.characteristics_used),
        "dropped": [[ell, reason] for ell, reason in report.characteristics_dropped],
        "witnesses": [[ell, list(qs)] for ell, qs in report.witnesses],
        "edges": [[_label_str(u), _label_str(v), ell] for u, v, ell in report.edges],
        "components": [
            [_label_str(u) for u in comp] for comp in report.components
        ],
        "connected": report.connected,
    }


def _render_graph(p: dict) -> str:
    lines = [f"graph N={p['N']} k={p['k']} lmax={p['lmax']}"]
    lines.append("nodes " + (" ".join(p["nodes"]) if p["nodes"] else "none"))
    lines.append("used " + (" ".join(str(e) for e in p["used"]) if p["used"] else "none"))
    for ell, reason in p["dropped"]:
        lines.append(f"dropped {ell}: {reason}")
    if p["edges"]:
        for u, v, ell in p["edges"]:
            lines.append(f"edge {u} ~ {v} ell={ell}")
    else:
        lines.append("edges none")
    for n, comp in enumerate(p["components"], start=1):
        lines.append(f"component {n}: " + " ".join(comp))
    lines.append(f"connected {'yes' if p['connected'] else 'no'}")
    return "\n".join(lines)


# -- chain --------------------------------------------------------------------


def _chain_graph(a, b, lmax: int) -> CongruenceGraph:
    sides = [(a[0], a[1])]
    if (b[0], b[1]) not in sides:
        sides.append((b[0], b[1]))
    entries = []
    for N, k in sides:
        container = integral_classes(N, k)
        for cls in container.classes:
            entries.append((_label_str(cls.label), cls, N, k))
    g = CongruenceGraph()
    for label, _, _, _ in entries:
        g.add_node(label)
    for ell in primes_up_to(lmax):
        for i in range(len(entries)):
            for j in range(i + 1, len(entries)):
                la, ca, Na, ka = entries[i]
                lb, cb, Nb, kb = entries[j]
                if not weight_compatible(ka, kb, ell):
                    continue
                bound = cross_bound(Na, ka, Nb, kb)
                try:
                    ra = reduce_class_mod(
                        ca, ell, max(bound, 50, 2 * sturm_bound(Na, ka))
                    )
                    rb = reduce_class_mod(cb, ell, bound)
                    edge = check_congruence(ra, rb)
                except DomainError:
                    continue
                if not edge.certified:
                    continue
                verdict = best_verdict(
                    EdgeContext(ell=ell, image=classify_image(ra), weights=(ka, kb))
                )
                g.add_edge(la, lb, ell, label=f"{la}~{lb}", verdict=verdict)
    return g


def _payload_chain(args) -> dict:
    src = _parse_label(args.src)
    dst = _parse_label(args.dst)
    g = _chain_graph(src, dst, args.lmax)
    src_l, dst_l = _label_str(src), _label_str(dst)
    path = g.chain_search(src_l, dst_l, mlt_only=args.mlt_only)
    steps = None
    if path is not None:
        steps = [
            {
                "u": e.u,
                "v": e.v,
                "ell": e.ell,
                "theorem": None if e.verdict is None else e.verdict.theorem,
            }
            for e in path
        ]
    return {
        "src": src_l,
        "dst": dst_l,
        "lmax": args.lmax,
        "mlt_only": args.mlt_only,
        "path": steps,
    }


def _render_chain(p: dict) -> str:
    lines = [
        f"chain from={p['src']} to={p['dst']} lmax={p['lmax']} "
        f"mlt-only={'yes' if p['mlt_only'] else 'no'}"
    ]
    if p["path"] is None:
        lines.append("no chain found")
    else:
        for e in p["path"]:
            mlt = "-" if e["theorem"] is None else f"MLT{e['theorem']}"
            lines.append(f"edge {e['u']} ~ {e['v']} ell={e['ell']} mlt={mlt}")
        lines.append(f"length {len(p['path'])}")
    return "\n".join(lines)


# -- plan / connect -----------------------------------------------------------


def _load_descriptor(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise DomainError(f"cannot read descriptor file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DomainError(f"descriptor file {path} is not valid JSON: {exc}") from exc
    return descriptor_from_dict(doc)


def _fmt_conductor(conductor: dict) -> str:
    if not conductor:
        return "unramified"
    parts = []
    for q in sorted(conductor, key=int):
        t = conductor[q]
        kind = t["kind"]
        if kind in ("principal-series", "supercuspidal"):
            wild = ",wild" if t["wild"] else ""
            parts.append(f"{q}={kind}(order={t['char_order']}{wild})")
        elif kind == "good-dihedral":
            parts.append(f"{q}=good-dihedral(p={t['p']},bound={t['bound']})")
        else:
            parts.append(f"{q}={kind}")
    return " ".join(parts)


def _fmt_descriptor(d: dict) -> str:
    tags = []
    if d["dihedral"]:
        tags.append(" dihedral")
    if d["twist_conductor"]:
        tags.append(" twists=" + ",".join(str(t) for t in d["twist_conductor"]))
    return f"weight={d['weight']} conductor {_fmt_conductor(d['conductor'])}" + "".join(tags)


def _render_plan_steps(plan: dict, lines: list[str], prefix: str = "") -> None:
    lines.append(f"{prefix}start {_fmt_descriptor(plan['start'])}")
    assumed = 0
    for n, s in enumerate(plan["steps"], start=1):
        v = s["verdict"]
        if v is None:
            tag = "verdict=none"
        else:
            tag = f"verdict=MLT{v['theorem']} assumptions=" + (
                "yes" if v["assumption_used"] else "no"
            )
            assumed += 1 if v["assumption_used"] else 0
        lines.append(f"{prefix}step {n} {s['name']} ell={s['ell']} {tag} | {s['audit']}")
    lines.append(f"{prefix}final {_fmt_descriptor(plan['final'])}")
    lines.append(
        f"{prefix}pair p={plan['pair']['p']} q={plan['pair']['q']} aux {plan['aux']} "
        f"steps {len(plan['steps'])} assumed {assumed}"
    )


def _render_plan(p: dict) -> str:
    lines = [f"plan bound={p['bound']}"]
    _render_plan_steps(p, lines)
    return "\n".join(lines)


def _payload_connect(d1, d2, bound: int) -> dict:
    result = planner_connect(d1, d2, bound)
    return {
        "bound": bound,
        "pair": {"p": result.pair.p, "q": result.pair.q},
        "aux": result.aux,
        "left": plan_to_dict(result.left),
        "right": plan_to_dict(result.right),
        "final": descriptor_to_dict(result.final),
    }


def _render_connect(p: dict) -> str:
    lines = [f"connect bound={p['bound']}"]
    lines.append("left:")
    _render_plan_steps(p["left"], lines, prefix="  ")
    lines.append("right:")
    _render_plan_steps(p["right"], lines, prefix="  ")
    lines.append(f"shared pair p={p['pair']['p']} q={p['pair']['q']} aux {p['aux']}")
    lines.append(f"final {_fmt_descriptor(p['final'])}")
    return "\n".join(lines)


# -- dispatch -----------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heckechain",
        description="congruence chains between eigensystems at desk scale",
    )
    parser.add_argument(
        "--cache-dir",
        default=None,
        help="cache directory (overrides HECKECHAIN_CACHE_DIR)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("space", help="modular symbol space dimensions")
    p.add_argument("N", type=int)
    p.add_argument("k", type=int)
    p.add_argument("ell", type=int)

    p = sub.add_parser("orbits", help="eigensystem orbits with eigenvalue tables")
    p.add_argument("N", type=int)
    p.add_argument("k", type=int)
    p.add_argument("ell", type=int)

    p = sub.add_parser("congruences", help="certified congruences between two spaces")
    p.add_argument("N1", type=int)
    p.add_argument("k1", type=int)
    p.add_argument("N2", type=int)
    p.add_argument("k2", type=int)
    p.add_argument("--lmax", type=int, required=True)

    p = sub.add_parser("classify", help="residual image classification of one orbit")
    p.add_argument("N", type=int)
    p.add_argument("k", type=int)
    p.add_argument("ell", type=int)
    p.add_argument("index", type=int)

    p = sub.add_parser("mlt-edge", help="lifting-theorem verdicts for an edge context")
    p.add_argument("ell", type=int)
    p.add_argument("image", choices=["Reducible", "Dihedral", "Exceptional", "Large"])
    p.add_argument("k1", type=int)
    p.add_argument("k2", type=int)
    p.add_argument("--parameter", type=int, default=None)
    p.add_argument("--good-dihedral", action="store_true")
    p.add_argument("--ordinary", nargs=2, choices=["true", "false"], default=None)
    p.add_argument("--not-residually-modular", action="store_true")
    p.add_argument("--fontaine-laffaille", choices=["true", "false"], default=None)

    p = sub.add_parser("graph", help="connectedness report at one level")
    p.add_argument("N", type=int)
    p.add_argument("k", type=int)
    p.add_argument("--lmax", type=int, required=True)

    p = sub.add_parser("chain", help="shortest congruence chain between two classes")
    p.add_argument("src")
    p.add_argument("dst")
    p.add_argument("--lmax", type=int, required=True)
    p.add_argument("--mlt-only", action="store_true")

    p = sub.add_parser("plan", help="rewrite a descriptor to the safe form")
    p.add_argument("descriptor")
    p.add_argument("--bound", type=int, required=True)

    p = sub.add_parser("connect", help="plan two descriptors to one safe form")
    p.add_argument("descriptor1")
    p.add_argument("descriptor2")
    p.add_argument("--bound", type=int, required=True)

    p = sub.add_parser("good-dihedral", help="smallest protecting prime pair")
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--forbidden", default="", help="comma-separated primes to avoid")

    return parser


def _cached(store: Store, kind: str, params, compute):
    payload = store.get(kind, *params)
    if payload is None:
        payload = compute()
        store.put(kind, payload, *params)
    return payload


def _dispatch(args, store: Store) -> str:
    if args.command == "space":
        payload = _cached(
            store,
            "space",
            (args.N, args.k, args.ell),
            lambda: _payload_space(args.N, args.k, args.ell),
        )
        return _render_space(payload)
    if args.command == "orbits":
        payload = _cached(
            store,
            "orbits",
            (args.N, args.k, args.ell),
            lambda: _payload_orbits(args.N, args.k, args.ell),
        )
        return _render_orbits(payload)
    if args.command == "congruences":
        payload = _cached(
            store,
            "edges",
            (args.N1, args.k1, args.N2, args.k2, args.lmax),
            lambda: _payload_congruences(args.N1, args.k1, args.N2, args.k2, args.lmax),
        )
        return _render_congruences(payload)
    if args.command == "classify":
        return _render_classify(_payload_classify(args.N, args.k, args.ell, args.index))
    if args.command == "mlt-edge":
        return _render_mlt_edge(_payload_mlt_edge(args))
    if args.command == "graph":
        payload = _cached(
            store,
            "report",
            (args.N, args.k, args.lmax),
            lambda: _payload_graph(args.N, args.k, args.lmax),
        )
        return _render_graph(payload)
    if args.command == "chain":
        return _render_chain(_payload_chain(args))
    if args.command == "plan":
        desc = _load_descriptor(args.descriptor)
        key = checksum_of(descriptor_to_dict(desc))
        payload = _cached(
            store,
            "plan",
            (key, args.bound),
            lambda: plan_to_dict(plan_to_safe_form(desc, args.bound)),
        )
        return _render_plan(payload)
    if args.command == "connect":
        d1 = _load_descriptor(args.descriptor1)
        d2 = _load_descriptor(args.descriptor2)
        return _render_connect(_payload_connect(d1, d2, args.bound))
    if args.command == "good-dihedral":
        forbidden = tuple(
            int(x) for x in args.forbidden.split(",") if x.strip()
        )
        pair = find_good_dihedral(args.bound, forbidden=forbidden)
        return f"pair p={pair.p} q={pair.q}"
    raise DomainError(f"unknown command {args.command!r}")


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    store = Store(resolve_cache_dir(args.cache_dir))
    try:
        output = _dispatch(args, store)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
