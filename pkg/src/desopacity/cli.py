"""Command-line interface.

Verification commands print `OPAQUE` or `NOT_OPAQUE` on the first line and
exit with 0 (opaque), 1 (not opaque), or 2 (usage or input error).
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
import time
from pathlib import Path

from .automata import Des, observer
from .desfile import DesFormatError, parse_des, serialize_des
from .dot import des_to_dot, observer_to_dot
from .oracle import (
    GeneratorParams,
    OracleBounds,
    strong_violation_search,
    weak_violation_search,
)
from .strong import normalize, reduce_to_weak, strong_to_weak, verify_strong
from .weak import INFINITE, verify_weak


class CliError(Exception):
    pass


def _parse_k(text: str):
    if text == "inf":
        return INFINITE
    try:
        k = int(text)
    except ValueError:
        raise CliError(f"invalid k: {text!r} (expected a nonnegative integer or 'inf')")
    if k < 0:
        raise CliError("k must be nonnegative")
    return k


def _load(path: str) -> Des:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}")
    try:
        return parse_des(text)
    except DesFormatError as exc:
        raise CliError(f"{path}: {exc}")


def _fill_nonsecret(des: Des) -> Des:
    """Strong-mode commands treat an absent nonsecret set as the complement."""
    if des.nonsecret:
        return des
    complement = frozenset(range(des.state_count)) - des.secret
    return dataclasses.replace(des, nonsecret=complement)


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc}")


def _emit_verdict(verdict, des_for_names, args, out) -> int:
    print("OPAQUE" if verdict.opaque else "NOT_OPAQUE", file=out)
    if args.witness and verdict.witness is not None:
        w = verdict.witness
        print(f"mu={''.join(w.mu)}", file=out)
        print(f"secret={des_for_names.state_name(w.secret_state)}", file=out)
        print(f"nu={''.join(w.nu)}", file=out)
    if args.stats:
        s = verdict.stats
        print(f"observer_states={s.observer_states}", file=out)
        print(f"h_states={s.h_states}", file=out)
        print(f"product_states_explored={s.product_states_explored}", file=out)
        print(f"bfs_depth={s.bfs_depth_reached}", file=out)
    return 0 if verdict.opaque else 1


def _cmd_verify_weak(args, out) -> int:
    des = _load(args.input)
    try:
        verdict = verify_weak(des, _parse_k(args.k))
    except ValueError as exc:
        raise CliError(str(exc))
    if args.dot:
        directory = Path(args.dot)
        try:
            directory.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise CliError(f"cannot create {args.dot}: {exc}")
        _write(str(directory / "des.dot"), des_to_dot(des))
        _write(str(directory / "observer.dot"), observer_to_dot(observer(des), des))
    return _emit_verdict(verdict, des, args, out)


def _cmd_verify_strong(args, out) -> int:
    des = _fill_nonsecret(_load(args.input))
    try:
        _norm, reduction = reduce_to_weak(des)
        verdict = verify_weak(reduction.des_prime, _parse_k(args.k))
    except ValueError as exc:
        raise CliError(str(exc))
    return _emit_verdict(verdict, reduction.des_prime, args, out)


def _cmd_normalize(args, out) -> int:
    des = _fill_nonsecret(_load(args.input))
    try:
        result = normalize(des)
    except ValueError as exc:
        raise CliError(str(exc))
    _write(args.output, serialize_des(result.des_n))
    return 0


def _cmd_transform(args, out) -> int:
    des = _fill_nonsecret(_load(args.input))
    try:
        result = strong_to_weak(des)
    except ValueError as exc:
        raise CliError(str(exc))
    _write(args.output, serialize_des(result.des_prime))
    return 0


def _cmd_observer(args, out) -> int:
    des = _load(args.input)
    _write(args.dot, observer_to_dot(observer(des), des))
    return 0


def _cmd_oracle(args, out) -> int:
    des = _load(args.input)
    k = _parse_k(args.k)
    bounds = OracleBounds(args.mu_max, args.nu_max)
    try:
        if args.kind == "weak":
            found = weak_violation_search(des, k, bounds)
            if found is None:
                print("OPAQUE", file=out)
                return 0
            mu, x, nu = found
            print("NOT_OPAQUE", file=out)
            print(f"mu={''.join(mu)}", file=out)
            print(f"secret={des.state_name(x)}", file=out)
            print(f"nu={''.join(nu)}", file=out)
            return 1
        des = _fill_nonsecret(des)
        s = strong_violation_search(des, k, bounds)
        if s is None:
            print("OPAQUE", file=out)
            return 0
        print("NOT_OPAQUE", file=out)
        print(f"s={''.join(s)}", file=out)
        return 1
    except ValueError as exc:
        raise CliError(str(exc))


def _cmd_random(args, out) -> int:
    from .oracle import random_des

    params = GeneratorParams(
        state_count=args.states,
        observable_event_count=args.obs_events,
        unobservable_event_count=args.unobs_events,
        transition_density=args.density,
        secret_fraction=args.secret_frac,
        deterministic=args.deterministic,
        rng_seed=args.seed,
    )
    try:
        des = random_des(params)
    except ValueError as exc:
        raise CliError(str(exc))
    _write(args.output, serialize_des(des))
    return 0


def _cmd_bench(args, out) -> int:
    des = _load(args.input)
    try:
        ks = [_parse_k(part) for part in args.k_list.split(",") if part]
    except CliError:
        raise
    if not ks:
        raise CliError("--k-list must name at least one k")
    for k in ks:
        best = None
        explored = None
        for _ in range(args.repeat):
            start = time.perf_counter()
            verdict = verify_weak(des, k)
            elapsed = time.perf_counter() - start
            if best is None or elapsed < best:
                best = elapsed
            explored = verdict.stats.product_states_explored
        label = "inf" if k is INFINITE else str(k)
        print(f"k={label} time={best:.6f}s product_states_explored={explored}", file=out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="desopacity", description="Opacity verification for discrete-event systems.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_verify(name, func, with_dot):
        p = sub.add_parser(name)
        p.add_argument("--input", required=True)
        p.add_argument("--k", required=True, help="nonnegative integer or 'inf'")
        p.add_argument("--witness", action="store_true")
        p.add_argument("--stats", action="store_true")
        if with_dot:
            p.add_argument("--dot", help="directory for DOT exports")
        p.set_defaults(func=func)

    add_verify("verify-weak", _cmd_verify_weak, with_dot=True)
    add_verify("verify-strong", _cmd_verify_strong, with_dot=False)

    p = sub.add_parser("normalize")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(func=_cmd_normalize)

    p = sub.add_parser("transform")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(func=_cmd_transform)

    p = sub.add_parser("observer")
    p.add_argument("--input", required=True)
    p.add_argument("--dot", required=True)
    p.set_defaults(func=_cmd_observer)

    p = sub.add_parser("oracle")
    p.add_argument("kind", choices=["weak", "strong"])
    p.add_argument("--input", required=True)
    p.add_argument("--k", required=True)
    p.add_argument("--mu-max", type=int, required=True)
    p.add_argument("--nu-max", type=int, required=True)
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("random")
    p.add_argument("--states", type=int, required=True)
    p.add_argument("--obs-events", type=int, required=True)
    p.add_argument("--unobs-events", type=int, required=True)
    p.add_argument("--density", type=float, required=True)
    p.add_argument("--secret-frac", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--deterministic", action="store_true")
    p.set_defaults(func=_cmd_random)

    p = sub.add_parser("bench")
    p.add_argument("--input", required=True)
    p.add_argument("--k-list", required=True, help="comma-separated ks, e.g. 1,1000,inf")
    p.add_argument("--repeat", type=int, default=1)
    p.set_defaults(func=_cmd_bench)

    return parser


def run(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args, out)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
