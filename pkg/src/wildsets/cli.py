"""Command-line surface for the package.

One process, one command.  Symbol and rank queries print their value;
`construct` emits a certificate (optionally to a file), `verify` and
`wild` re-check one, and `selftest` runs the embedded invariant checks.
Exit codes tell the four outcomes apart: 0 success, 2 unusable input,
3 a mathematical refusal (the requested object provably does not
exist or a certificate fails its checks), 4 a search budget ran out.

Places and elements are written as polynomials in t (reduced mod p),
`inf` for the infinite place, and `(base; kind; branch)` for places of
an elliptic model.  Lists are comma separated; commas inside
parentheses do not split.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from typing import List, NamedTuple, Optional, Sequence

from .base_algebra import GF, poly_parse
from .constructions import (
    construct_general,
    construct_rank0,
    construct_rank1,
)
from .elliptic_curve import EllipticModel
from .equivalence_core import (
    certificate_from_json,
    certificate_to_json,
    check_necessary_condition,
    verify_small_equivalence,
)
from .errors import HypothesisError, SearchExhausted, VerificationError
from .local_symbols import (
    LocalMap,
    PI,
    U,
    U_PI,
    hilbert_symbol,
    reciprocity_product,
)
from .projective_line import ProjectiveLine
from .square_class_spaces import (
    check_lin_dep_lemma,
    check_pic_rank_formula,
    delta_space,
    g_rank,
    sing_space,
    smile,
)

__all__ = ["SessionConfig", "run", "main"]

MAX_FIELD_SIZE = 1024
DEGREE_CAP_VAR = "WILDSETS_DEGREE_CAP"


class SessionConfig(NamedTuple):
    """Validated per-invocation settings shared by the subcommands."""

    q: int
    curve: Optional[str]
    degree_cap: int
    seed: int
    fmt: str


def _session(args) -> SessionConfig:
    q = args.q
    if q is None:
        raise ValueError("--q is required for this command")
    if q % 2 == 0 or q > MAX_FIELD_SIZE:
        raise ValueError(
            "the field size must be an odd prime power up to %d, got %d"
            % (MAX_FIELD_SIZE, q))
    GF(q)  # validates that q is a prime power
    if args.degree_cap < 1:
        raise ValueError("the degree cap must be positive")
    return SessionConfig(q, args.curve, args.degree_cap, args.seed,
                         args.format)


def _model(config: SessionConfig):
    field = GF(config.q)
    if config.curve is None:
        return ProjectiveLine(field)
    return EllipticModel(field, poly_parse(config.curve, field))


def _split_list(text: str) -> List[str]:
    """Split on commas at parenthesis depth zero."""
    parts, cur, depth = [], [], 0
    for ch in text:
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def _places(model, text: str) -> List:
    return [model.parse_place(s) for s in _split_list(text)]


def _emit(fmt: str, payload: dict, lines: Sequence[str]) -> None:
    if fmt == "json":
        print(json.dumps(payload, indent=2))
    else:
        for line in lines:
            print(line)


# -- subcommands

def _cmd_hilbert(args) -> int:
    config = _session(args)
    model = _model(config)
    place = model.parse_place(args.place)
    value = hilbert_symbol(model.parse(args.a), model.parse(args.b), place)
    _emit(config.fmt, {"symbol": value}, ["%+d" % value])
    return 0


def _cmd_reciprocity(args) -> int:
    config = _session(args)
    model = _model(config)
    value = reciprocity_product(model.parse(args.a), model.parse(args.b))
    _emit(config.fmt, {"product": value}, ["%+d" % value])
    return 0


def _cmd_ranks(args) -> int:
    config = _session(args)
    model = _model(config)
    S = _places(model, args.places)
    ranks = {
        "sing": sing_space(model, S).rank,
        "delta": delta_space(model, S).rank,
        "g": g_rank(model, S).rank,
        "pic_y": 1 + model.pic_zero_two_rank() - g_rank(model, S).rank,
    }
    _emit(config.fmt, ranks, [
        "rk Sing %d" % ranks["sing"],
        "rk Delta %d" % ranks["delta"],
        "rk G %d" % ranks["g"],
        "rk PicY %d" % ranks["pic_y"],
    ])
    return 0


def _cmd_smile(args) -> int:
    config = _session(args)
    model = _model(config)
    S = _places(model, args.places)
    if len(S) != 2:
        raise ValueError("smile expects exactly two places, got %d" % len(S))
    value = smile(model, S[0], S[1])
    _emit(config.fmt, {"smile": value}, ["yes" if value else "no"])
    return 0


def _cmd_construct(args) -> int:
    config = _session(args)
    model = _model(config)
    S = _places(model, args.places)
    if args.rank == "0":
        cert = construct_rank0(model, S, config.degree_cap)
    elif args.rank == "1":
        cert = construct_rank1(model, S, config.degree_cap)
    else:
        if not args.aux:
            raise ValueError(
                "--rank general needs the 2-divisible points in --aux")
        cert = construct_general(model, S, _places(model, args.aux),
                                 config.degree_cap)
    blob = certificate_to_json(cert)
    if args.out:
        with open(args.out, "w") as handle:
            handle.write(blob + "\n")
    report = {
        "wild_set": sorted(str(P) for P in cert.wild_set),
        "places": len(cert.equivalence.places),
        "out": args.out,
    }
    lines = ["wild set: {%s}" % ", ".join(report["wild_set"]),
             "certificate places: %d" % report["places"]]
    if args.out:
        lines.append("written to %s" % args.out)
    elif config.fmt == "text":
        lines.append(blob)
    if config.fmt == "json" and not args.out:
        print(blob)
    else:
        _emit(config.fmt, report, lines)
    return 0


def _load_certificate(path: str):
    with open(path) as handle:
        return certificate_from_json(handle.read())


def _cmd_verify(args) -> int:
    cert = _load_certificate(args.cert)
    report = verify_small_equivalence(cert.equivalence)
    payload = {
        "passes": report["passes"],
        "checks": {k: v for k, v in sorted(report.items())
                   if isinstance(v, bool) and k != "passes"},
        "wild_set": sorted(str(P) for P in cert.wild_set),
        "necessary_condition": check_necessary_condition(
            cert.equivalence.model, cert.wild_set),
    }
    lines = ["%s: %s" % (k, "pass" if v else "FAIL")
             for k, v in payload["checks"].items()]
    lines.append("wild set: {%s}" % ", ".join(payload["wild_set"]))
    lines.append("verdict: %s" % ("pass" if report["passes"] else "FAIL"))
    _emit(args.format, payload, lines)
    return 0 if report["passes"] else 3


def _cmd_wild(args) -> int:
    cert = _load_certificate(args.cert)
    wild = sorted(str(P) for P in cert.wild_set)
    _emit(args.format, {"wild_set": wild}, wild or ["(empty)"])
    return 0


# -- the embedded selftest battery

def _random_function(model, rng: random.Random):
    field = model.field
    def poly():
        while True:
            coeffs = [rng.randrange(field.q) for _ in range(4)]
            if any(coeffs):
                return coeffs
    num, den = poly(), poly()
    text = "(%s) / (%s)" % (_poly_text(num), _poly_text(den))
    return model.parse(text)


def _poly_text(coeffs) -> str:
    terms = []
    for i, c in enumerate(coeffs):
        if c:
            terms.append("%d t^%d" % (c, i))
    return " + ".join(terms)


def _selftest(config: SessionConfig) -> List[str]:
    failures = []

    def check(label, fn):
        try:
            fn()
        except Exception as exc:  # the battery reports, never crashes
            failures.append("%s: %s" % (label, exc))

    def local_map_laws():
        twist = LocalMap.tame_twist()
        assert not twist.is_wild
        assert twist.compose(twist).is_identity
        for iu in (U, PI, U_PI):
            for ip in (U, PI, U_PI):
                if iu == ip:
                    continue
                lm = LocalMap(iu, ip)
                assert lm.is_wild == (iu != U)
                assert twist.compose(lm).is_wild == lm.is_wild
    check("local map laws", local_map_laws)

    def reciprocity_battery():
        rng = random.Random(config.seed)
        for q in (3, 5):
            model = ProjectiveLine(GF(q))
            for _ in range(60):
                a = _random_function(model, rng)
                b = _random_function(model, rng)
                assert reciprocity_product(a, b) == 1
        curve = EllipticModel(GF(5), poly_parse("t^3 + 4t", GF(5)))
        for _ in range(20):
            a = _random_function(curve, rng)
            b = _random_function(curve, rng) * curve.parse("y")
            assert reciprocity_product(a, b) == 1
    check("reciprocity", reciprocity_battery)

    def rank_identities():
        model = ProjectiveLine(GF(5))
        pool = (model.places_of_degree(1) +
                model.places_of_degree(2)[:3])
        sets = [[P] for P in pool]
        sets += [[P, Q] for i, P in enumerate(pool) for Q in pool[i + 1:]]
        for S in sets:
            check_pic_rank_formula(model, S)
            check_lin_dep_lemma(model, S)
            assert sing_space(model, S).rank - delta_space(model, S).rank \
                == len(S)
    check("rank identities", rank_identities)

    def construction_round_trip():
        model = ProjectiveLine(GF(5))
        S = [model.parse_place("t^2 + 2")]
        cert = construct_rank0(model, S, 6)
        blob = certificate_to_json(cert)
        again = certificate_from_json(blob)
        assert certificate_to_json(again) == blob
        pair = construct_rank1(
            model, [model.parse_place("t"), model.parse_place("t - 1")], 6)
        assert len(pair.wild_set) == 2
    check("construction round trip", construction_round_trip)

    return failures


def _cmd_selftest(args) -> int:
    if args.q is None:
        args.q = 5
    config = _session(args)
    failures = _selftest(config)
    payload = {"failures": failures, "passes": not failures}
    if failures:
        _emit(config.fmt, payload, ["FAIL %s" % f for f in failures])
        return 1
    _emit(config.fmt, payload, ["selftest: all checks passed"])
    return 0


# -- argument plumbing

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wildsets",
        description="wild sets of self-equivalences of F_q(t) and "
                    "odd elliptic extensions")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_field=True):
        p.add_argument("--format", choices=("text", "json"), default="text")
        if with_field:
            p.add_argument("--q", type=int, default=None,
                           help="size of the constant field")
            p.add_argument("--curve", default=None,
                           help="cubic f(t) for the model y^2 = f(t); "
                                "omit for the projective line")
            p.add_argument("--degree-cap", type=int,
                           default=int(os.environ.get(DEGREE_CAP_VAR, "6")),
                           help="search budget for auxiliary places "
                                "(env %s)" % DEGREE_CAP_VAR)
            p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("hilbert", help="one local Hilbert symbol")
    common(p)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--place", required=True)
    p.set_defaults(fn=_cmd_hilbert)

    p = sub.add_parser("reciprocity", help="product of all local symbols")
    common(p)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.set_defaults(fn=_cmd_reciprocity)

    p = sub.add_parser("ranks", help="ranks of Sing, Delta, G and Pic Y")
    common(p)
    p.add_argument("--places", required=True)
    p.set_defaults(fn=_cmd_ranks)

    p = sub.add_parser("smile", help="the pairing condition for two points")
    common(p)
    p.add_argument("--places", required=True,
                   help="exactly two places, comma separated")
    p.set_defaults(fn=_cmd_smile)

    p = sub.add_parser("construct", help="build a wild-set certificate")
    common(p)
    p.add_argument("--rank", choices=("0", "1", "general"), required=True)
    p.add_argument("--places", required=True,
                   help="the requested wild points (rank general: the "
                        "independent ones)")
    p.add_argument("--aux", default=None,
                   help="rank general only: the 2-divisible points")
    p.add_argument("--out", default=None, help="file for the certificate")
    p.set_defaults(fn=_cmd_construct)

    p = sub.add_parser("verify", help="re-check a certificate file")
    common(p, with_field=False)
    p.add_argument("--cert", required=True)
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("wild", help="recomputed wild set of a certificate")
    common(p, with_field=False)
    p.add_argument("--cert", required=True)
    p.set_defaults(fn=_cmd_wild)

    p = sub.add_parser("selftest", help="run the embedded invariant checks")
    common(p)
    p.set_defaults(fn=_cmd_selftest)

    return parser


def run(argv=None) -> int:
    """Parse argv, dispatch, and map errors to documented exit codes."""
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (HypothesisError, VerificationError) as exc:
        print("refused: %s" % exc, file=sys.stderr)
        return 3
    except SearchExhausted as exc:
        print("search exhausted: %s" % exc, file=sys.stderr)
        return 4
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
