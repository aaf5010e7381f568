"""Command-line interface.

Commands: info, verify, local, curve, signal, search-measurement.
Exit codes: 0 success/PASS, 1 verification failure, 2 usage or config error.
Tolerance can be overridden with --eps or the NWE_EPS environment variable
(the flag wins).  Output is deterministic: fixed tie-breaking and floats
formatted to 10 significant digits.
"""

from __future__ import annotations

import argparse
import itertools
import os
import sys

import numpy as np

from . import catalog, discrimination, quantum, signaling
from .composition import check_complete
from .systems import DEFAULT_EPS, make_polygon, zero_one_profile

LEADER_NAMES = {"alice": 0, "bob": 1, "charlie": 2, "0": 0, "1": 1, "2": 2}

# Finite default measurement set for the three-qubit ensemble: the
# computation and conjugate Bloch-circle bases per party.
_Q3_MEASUREMENT_ANGLES = ((0.0, np.pi), (0.5 * np.pi, 1.5 * np.pi))


class UsageError(Exception):
    pass


def _fmt(x) -> str:
    return format(float(x), ".10g")


def _resolve_eps(args) -> float:
    if getattr(args, "eps", None) is not None:
        return args.eps
    env = os.environ.get("NWE_EPS")
    if env:
        try:
            return float(env)
        except ValueError:
            raise UsageError(f"NWE_EPS={env!r} is not a number")
    return DEFAULT_EPS


def _parse_priors(args) -> catalog.PriorFamily:
    if getattr(args, "bias", None) is None:
        return catalog.uniform()
    try:
        return catalog.biased(args.bias)
    except ValueError as exc:
        raise UsageError(str(exc))


def _parse_leader(args):
    name = getattr(args, "leader", None)
    if name is None:
        return None
    key = name.lower()
    if key not in LEADER_NAMES:
        raise UsageError(f"unknown leader {name!r}; use alice, bob, or charlie")
    return LEADER_NAMES[key]


def _search_config(ens, eps: float, indices=None) -> discrimination.SearchConfig:
    if ens.id == "q3":
        circ = ens.composite.parts[0]
        angle_pairs = _Q3_MEASUREMENT_ANGLES
        if indices is not None:
            angle_pairs = tuple(angle_pairs[i] for i in indices)
        per_party = tuple(
            tuple(np.stack([circ.effect_at(a), circ.effect_at(b)]) for a, b in angle_pairs)
            for _ in range(ens.arity)
        )
        return discrimination.SearchConfig(per_party)
    return discrimination.SearchConfig.for_ensemble(ens, indices=indices)


def _parse_measurement_indices(args):
    text = getattr(args, "measurements", None)
    if text is None:
        return None
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise UsageError(f"--measurements wants comma-separated indices, got {text!r}")


def cmd_info(args) -> int:
    eps = _resolve_eps(args)
    if args.polygon is not None:
        sysn = make_polygon(args.polygon, eps)
        print(f"polygon n={sysn.n}")
        print("pure states:")
        for i, w in enumerate(sysn.pure_states):
            print(f"  w{i} = ({_fmt(w[0])}, {_fmt(w[1])}, {_fmt(w[2])})")
        print("ray-extremal effects and zero/one profiles:")
        for i in range(sysn.n):
            e = sysn.effect(i)
            pr = zero_one_profile(sysn, i)
            ones = ",".join(str(j) for j in sorted(pr.ones))
            zeros = ",".join(str(j) for j in sorted(pr.zeros))
            print(
                f"  e{i} = ({_fmt(e[0])}, {_fmt(e[1])}, {_fmt(e[2])})"
                f"  ones={{{ones}}} zeros={{{zeros}}}"
            )
        pairs = " ".join(
            f"{{{sysn.effect_label(i)},{sysn.effect_label(j)}}}"
            for i, j in sysn.extremal_measurements
        )
        print(f"extremal measurements: {pairs}")
        return 0
    if args.id is None:
        print("cataloged ensembles:")
        for cid in catalog.CATALOG_IDS:
            ens = catalog.load(cid, eps=eps)
            kind = ens.composite.parts[0].kind
            print(f"  {cid}: {ens.size} states, {ens.arity} parties ({kind})")
        return 0
    try:
        ens = catalog.load(args.id, _parse_priors(args), eps=eps)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"ensemble {ens.id}: {ens.size} states, {ens.arity} parties")
    for j, (st, w) in enumerate(zip(ens.states, ens.priors)):
        if ens.id == "q3":
            desc = " x ".join(f"a={_fmt(a)}" for a in catalog.Q3_ANGLES[j])
        else:
            part = ens.composite.parts[0]
            idx = [int(np.argmin(np.abs(part.pure_states - f).sum(axis=1))) for f in st.factors]
            desc = " x ".join(f"w{i}" for i in idx)
        print(f"  state {j}: {desc}   prior {_fmt(w)}")
    return 0


def cmd_verify(args) -> int:
    eps = _resolve_eps(args)
    try:
        measurement = catalog.load_measurement(args.id, eps)
        ens = catalog.load(args.id, eps=eps)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    conf = discrimination.confusion_matrix(measurement, ens)
    complete = check_complete(ens.composite, measurement)
    deviation = float(np.max(np.abs(conf - np.eye(ens.size))))
    print(f"ensemble {args.id}: {ens.size} states, {ens.arity} parties")
    print("confusion matrix (rows = effects, cols = states):")
    for row in conf:
        print("  " + " ".join(_fmt(v) for v in row))
    print(f"max |confusion - identity| = {_fmt(deviation)} (tol {_fmt(eps)})")
    print(f"completeness within 1e-12: {'ok' if complete else 'FAILED'}")
    ok = complete and deviation <= eps
    print(f"verify {args.id}: {'PASS' if ok else 'FAIL'}")
    return 0 if ok else 1


def cmd_local(args) -> int:
    eps = _resolve_eps(args)
    try:
        priors = _parse_priors(args)
        leader = _parse_leader(args)
        indices = _parse_measurement_indices(args)
        ens = catalog.load(args.id, priors, eps=eps)
        cfg = _search_config(ens, eps, indices)
        if args.fixed_order:
            cfg = discrimination.SearchConfig(cfg.measurements, adaptive=False)
        report = discrimination.optimal_local(ens, cfg, leader)
    except (ValueError, KeyError, IndexError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    leader_text = "free" if leader is None else str(leader)
    print(f"ensemble {ens.id} ({ens.size} states, {ens.arity} parties), priors {priors.describe()}")
    print(f"leader: {leader_text}")
    print(f"success = {_fmt(report.success)}")
    print(f"delta = {_fmt(report.delta)}")
    print(f"tree: {discrimination.tree_to_text(report.tree)}")
    return 0


def cmd_curve(args) -> int:
    try:
        points = quantum.curve(args.pmin, args.pmax, args.steps)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        quantum.write_curve_csv(points, args.out)
    except OSError as exc:
        print(f"error: cannot write {args.out!r}: {exc}", file=sys.stderr)
        return 2
    gaps = [pt.delta_poly - pt.delta_qt for pt in points]
    print(f"wrote {len(points)} rows to {args.out}")
    print(f"gap delta_poly - delta_qt: min {_fmt(min(gaps))}, max {_fmt(max(gaps))}")
    return 0


def _signal_polygon(args, eps: float) -> int:
    if args.n != 2:
        print("error: only binary extremal decodings are supported (use --n 2)", file=sys.stderr)
        return 2
    sysn = make_polygon(args.polygon, eps)
    try:
        vertices = signaling.classical_vertices(args.m, args.n, args.d)
    except signaling.VertexBoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    channels = []
    seen = set()
    for encoding in itertools.product(range(sysn.n), repeat=args.m):
        states = [sysn.pure_state(i) for i in encoding]
        for mi in range(len(sysn.extremal_measurements)):
            ch = signaling.gpt_channel(sysn, states, sysn.measurement(mi), eps)
            key = np.round(ch.rows, 12).tobytes()
            if key not in seen:
                seen.add(key)
                channels.append(ch)
    print(
        f"polygon n={args.polygon}: m={args.m} encodings, binary extremal decodings, d={args.d}"
    )
    print(f"distinct channels: {len(channels)} (of {sysn.n ** args.m * len(sysn.extremal_measurements)} generated)")
    outside = []
    for ch in channels:
        try:
            result = signaling.in_classical_polytope(ch, args.d, vertices)
        except signaling.InconclusiveMembership as exc:
            print(f"INCONCLUSIVE: {exc}")
            return 1
        if not result.inside:
            outside.append((ch, result))
    if not outside:
        print("ALL-IN")
        return 0
    ch, result = outside[0]
    print(f"NOT-IN: {len(outside)} channel(s) outside, first witness margin {_fmt(result.margin)}")
    _print_witness(ch, result, args.csv)
    return 1


def _print_witness(ch, result, as_csv: bool) -> None:
    h, c = result.witness
    if as_csv:
        print("witness_h," + ",".join(_fmt(v) for v in h.ravel()))
        print(f"witness_c,{_fmt(c)}")
    else:
        print(f"witness c = {_fmt(c)}")
        for row in h:
            print("  h: " + " ".join(_fmt(v) for v in row))


def _signal_identity(args, eps: float) -> int:
    k = args.identity
    ch = signaling.Channel(np.eye(k))
    try:
        result = signaling.in_classical_polytope(ch, args.d)
    except signaling.VertexBoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except signaling.InconclusiveMembership as exc:
        print(f"INCONCLUSIVE: {exc}")
        return 1
    print(f"identity channel {k}x{k}, d={args.d}")
    if result.inside:
        print("IN")
        if args.csv:
            print("weights," + ",".join(_fmt(w) for w in result.weights))
        return 0
    print(f"NOT-IN margin {_fmt(result.margin)}")
    _print_witness(ch, result, args.csv)
    return 1


def cmd_signal(args) -> int:
    eps = _resolve_eps(args)
    if (args.polygon is None) == (args.identity is None):
        print("error: give exactly one of --polygon or --identity", file=sys.stderr)
        return 2
    if args.polygon is not None:
        if args.m is None:
            print("error: --polygon needs --m", file=sys.stderr)
            return 2
        return _signal_polygon(args, eps)
    return _signal_identity(args, eps)


def cmd_search(args) -> int:
    eps = _resolve_eps(args)
    try:
        ens = catalog.load(args.id, eps=eps)
        found = catalog.search_perfect_separable(ens, node_budget=args.budget, eps=eps)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except catalog.SearchSpaceTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if found is None:
        print(f"no perfect separable measurement over extremal factors for {args.id}")
        return 1
    print(f"found separable measurement with identity confusion for {args.id} ({len(found)} effects):")
    for i, effect in enumerate(found):
        print(f"  E{i} = {effect.label()}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nwe",
        description="Polygon-model ensembles, local discrimination optima, and classical-polytope checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_eps(p):
        p.add_argument("--eps", type=float, default=None, help="tolerance override (or NWE_EPS)")

    p = sub.add_parser("info", help="describe cataloged ensembles or a polygon system")
    p.add_argument("id", nargs="?", default=None, choices=(None, *catalog.CATALOG_IDS))
    p.add_argument("--polygon", type=int, default=None, metavar="N")
    p.add_argument("--bias", type=float, default=None, metavar="P")
    add_eps(p)
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("verify", help="check a cataloged measurement discriminates its ensemble")
    p.add_argument("id")
    add_eps(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("local", help="optimal adaptive local discrimination")
    p.add_argument("id")
    p.add_argument("--bias", type=float, default=None, metavar="P", help="biased priors (default uniform)")
    p.add_argument("--leader", default=None, help="force the first party: alice, bob, or charlie")
    p.add_argument("--fixed-order", action="store_true", help="parties measure in index order")
    p.add_argument(
        "--measurements",
        default=None,
        metavar="I,J,...",
        help="restrict every party to these measurement indices (e.g. 0,1)",
    )
    add_eps(p)
    p.set_defaults(func=cmd_local)

    p = sub.add_parser("curve", help="pentagon-vs-quantum delta curve over a bias grid (CSV)")
    p.add_argument("pmin", type=float)
    p.add_argument("pmax", type=float)
    p.add_argument("steps", type=int)
    p.add_argument("out")
    add_eps(p)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("signal", help="classical d-symbol polytope certification")
    p.add_argument("--polygon", type=int, default=None, metavar="N")
    p.add_argument("--m", type=int, default=None, help="number of encoding inputs")
    p.add_argument("--n", type=int, default=2, help="number of outputs (binary decodings)")
    p.add_argument("--identity", type=int, default=None, metavar="K", help="check the KxK identity channel")
    p.add_argument("--d", type=int, required=True, help="classical alphabet size")
    p.add_argument("--csv", action="store_true", help="print certificates as CSV rows")
    add_eps(p)
    p.set_defaults(func=cmd_signal)

    p = sub.add_parser("search-measurement", help="brute-force a perfect separable measurement")
    p.add_argument("id")
    p.add_argument("--budget", type=int, default=1_000_000, help="search node budget")
    add_eps(p)
    p.set_defaults(func=cmd_search)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
