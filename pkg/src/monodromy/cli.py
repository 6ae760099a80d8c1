"""Command-line driver: analyze / matrices / verify / scan.

Reports are machine-readable (JSON canonical, TSV for triage) and
deterministic: the same config and seed produce byte-identical output.
Timing fields are zeroed unless --timings is passed, since wall-clock noise
would break that invariant.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
import traceback
from dataclasses import dataclass

from . import arith, gassner, groupengine, unitary
from .arith import Case, FieldTooLargeError
from .braid import BraidWord

CHECK_ORDER = (
    "splitting",
    "relations",
    "form",
    "irreducibility",
    "prop21",
    "extension",
    "image",
)

DEFAULT_ORDER_CAP = 10**12
DEFAULT_ELEMENT_CAP = 2 * 10**7


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class VerificationConfig:
    p: int
    l: int
    kvec: tuple[int, ...]
    checks: tuple[str, ...]
    seed: int = 0
    order_cap: int = DEFAULT_ORDER_CAP
    element_cap: int = DEFAULT_ELEMENT_CAP
    out: str | None = None
    fmt: str = "json"
    timings: bool = False

    def validate(self) -> None:
        if not arith._is_odd_prime(self.p) or not arith._is_odd_prime(self.l):
            raise ConfigError("p and l must be odd primes")
        if self.p == self.l:
            raise ConfigError("p and l must be distinct")
        if len(self.kvec) < 2:
            raise ConfigError("kvec needs at least two entries")
        for k in self.kvec:
            if not 1 <= k <= self.l - 1:
                raise ConfigError(f"kvec entries must lie in 1..{self.l - 1}")
        for c in self.checks:
            if c not in CHECK_ORDER:
                raise ConfigError(f"unknown check {c!r}")
        if self.fmt not in ("json", "tsv"):
            raise ConfigError("format must be json or tsv")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must fit in 64 bits")


def _parse_kvec(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.replace(" ", "").split(",") if t)
    except ValueError as exc:
        raise ConfigError(f"bad kvec {text!r}") from exc


def read_config_file(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value")
            key, _, value = line.partition("=")
            out[key.strip()] = value.strip()
    return out


# -- report records ---------------------------------------------------------


def _record(
    name: str,
    parameters: dict,
    expected,
    provenance: str,
    computed,
    match: bool,
    runtime_ms: int,
    findings: list[str],
) -> dict:
    return {
        "name": name,
        "parameters": parameters,
        "expected": {"value": expected, "provenance": provenance},
        "computed": computed,
        "match": bool(match),
        "runtime_ms": runtime_ms,
        "findings": list(findings),
    }


def _repro(cfg: VerificationConfig, check: str) -> str:
    kstr = ",".join(str(k) for k in cfg.kvec)
    return (
        f"reproduce: monodromy verify -p {cfg.p} -l {cfg.l} -k {kstr}"
        f" --checks {check} --seed {cfg.seed}"
    )


# -- individual checks ------------------------------------------------------


def _check_splitting(cfg: VerificationConfig, params: dict) -> tuple:
    sd = arith.splitting_data(cfg.p, cfg.l)
    degs = arith.cyclotomic_factor_degrees(cfg.p, cfg.l)
    oracle = Case.UNITARY if degs[0] % 2 == 0 else Case.SPLIT
    findings = []
    if sd.paper_case is not sd.case:
        findings.append(
            f"parity-phrase case {sd.paper_case.value} differs from working"
            f" case {sd.case.value}"
        )
    computed = sd.to_dict()
    return (
        oracle.value,
        "cyclotomic factorization oracle (independent of ord computation)",
        computed,
        sd.case is oracle and all(d == sd.f for d in degs),
        findings,
    )


def _check_relations(cfg: VerificationConfig, params: dict) -> tuple:
    import random as _random

    rng = _random.Random(cfg.seed)
    ctx = gassner.context(cfg.p, cfg.l, cfg.kvec)
    n = ctx.n
    strands = n + 1
    trials, ok = 0, 0
    for _ in range(20):
        if n >= 2:
            i = rng.randrange(n - 1)
            a = BraidWord.parse(strands, f"{i} {i + 1} {i}")
            b = BraidWord.parse(strands, f"{i + 1} {i} {i + 1}")
            trials += 1
            if gassner.evaluate_word(a, ctx) == gassner.evaluate_word(b, ctx):
                ok += 1
        if n >= 3:
            i = rng.randrange(n)
            choices = [j for j in range(n) if abs(j - i) >= 2]
            if choices:
                j = rng.choice(choices)
                a = BraidWord.parse(strands, f"{i} {j}")
                b = BraidWord.parse(strands, f"{j} {i}")
                trials += 1
                if gassner.evaluate_word(a, ctx) == gassner.evaluate_word(
                    b, ctx
                ):
                    ok += 1
        i = rng.randrange(n)
        trials += 1
        if gassner.generator_square(i, ctx).comps == gassner.square_formula_matrix(
            i, ctx
        ):
            ok += 1
    return (
        trials,
        "braid relations and the displayed square formula",
        ok,
        ok == trials,
        [],
    )


def _check_form(cfg: VerificationConfig, params: dict) -> tuple:
    ctx = gassner.context(cfg.p, cfg.l, cfg.kvec)
    form = gassner.invariant_form(ctx)
    want_degenerate = sum(cfg.kvec) % cfg.l == 0
    findings = []
    ok = form.degenerate == want_degenerate
    if want_degenerate:
        ok = ok and form.rank == ctx.n - 1 and len(form.kernel) == 1
        if ok:
            closed = gassner.kernel_closed_form(ctx)
            if not gassner.proportional(ctx.algebra, form.kernel[0], closed):
                ok = False
                findings.append("kernel line differs from closed form")
    expected = {
        "degenerate": want_degenerate,
        "kernel_dim": 1 if want_degenerate else 0,
    }
    computed = {
        "degenerate": form.degenerate,
        "rank": form.rank,
        "kernel_dim": len(form.kernel),
    }
    return (
        expected,
        "degeneracy criterion sum(k) = 0 mod l; kernel closed form",
        computed,
        ok,
        findings,
    )


def _check_irreducibility(cfg: VerificationConfig, params: dict) -> tuple:
    ctx = gassner.context(cfg.p, cfg.l, cfg.kvec)
    form = gassner.invariant_form(ctx)
    alg = ctx.algebra
    if form.degenerate:
        dims = gassner.spin_span(ctx, form.kernel[0])
        expected = tuple([1] * alg.ncomp)
        prov = "the radical is an invariant line (spin closes immediately)"
    else:
        e0 = tuple(
            alg.one if i == 0 else alg.zero for i in range(ctx.n)
        )
        dims = gassner.spin_span(ctx, e0)
        expected = tuple([ctx.n] * alg.ncomp)
        prov = "irreducibility: any nonzero vector spins to the full space"
    return (list(expected), prov, list(dims), dims == expected, [])


def _check_prop21(cfg: VerificationConfig, params: dict) -> tuple:
    ctx = gassner.context(cfg.p, cfg.l, cfg.kvec)
    if sum(cfg.kvec) % cfg.l != 0:
        return (
            None,
            "commutator statement needs a degenerate form",
            None,
            True,
            ["skipped: nondegenerate form"],
        )
    try:
        rep = gassner.prop21_commutator(ctx)
    except RuntimeError as exc:
        return (
            {"nontrivial_transvection": True, "direction_spans_kernel": True},
            "commutator of a generator square with the squared half twist",
            {"error": str(exc)},
            False,
            [],
        )
    alg = ctx.algebra
    computed = {
        "nontrivial_transvection": rep.transvection is not None,
        "direction_spans_kernel": rep.direction_spans_kernel,
        "xi_eps2": alg.elem_to_digits(rep.xi_eps2),
        "xi_quoted_formula": alg.elem_to_digits(rep.xi_formula),
        "xi_matches": rep.xi_matches,
        "shifted_matches": rep.shifted_matches,
    }
    ok = rep.transvection is not None and rep.direction_spans_kernel
    return (
        {"nontrivial_transvection": True, "direction_spans_kernel": True},
        "commutator of a generator square with the squared half twist",
        computed,
        ok,
        list(rep.findings),
    )


def _check_extension(cfg: VerificationConfig, params: dict) -> tuple:
    alg = arith.build_algebra(cfg.p, cfg.l)
    if alg.kind is not Case.UNITARY:
        return (
            None,
            "extension identities live in the unitary case",
            None,
            True,
            ["skipped: split case"],
        )
    m = max(3, len(cfg.kvec) - 1)
    rep = unitary.verify_extension_identities(alg, m, 200, seed=cfg.seed)
    computed = {
        "trials": rep.trials,
        "commutator_identity_holds": rep.commutator_identity_holds,
        "commutator_entry_always_imaginary": rep.commutator_entry_always_imaginary,
        "inverse_display_matches": rep.inverse_display_matches,
        "inverse_display_matches_normalized": rep.inverse_display_matches_normalized,
    }
    ok = (
        rep.commutator_identity_holds == rep.trials
        and rep.commutator_entry_always_imaginary
    )
    return (
        {"commutator_identity_holds": rep.trials,
         "commutator_entry_always_imaginary": True},
        "commutator and imaginary-entry identities for extension matrices",
        computed,
        ok,
        list(rep.findings),
    )


def _check_image(cfg: VerificationConfig, params: dict) -> tuple:
    sd = arith.splitting_data(cfg.p, cfg.l)
    if sum(cfg.kvec) % cfg.l == 0:
        return (
            None,
            "no classical image is predicted for a degenerate form",
            None,
            True,
            ["skipped: degenerate form"],
        )
    exp = unitary.expected_image(sd, cfg.kvec)
    if exp.order > cfg.order_cap:
        return (
            exp.to_dict(),
            "classical group order formula times l",
            None,
            True,
            ["skipped: overflow (expected order above --order-cap)"],
        )
    ctx = gassner.context(cfg.p, cfg.l, cfg.kvec)
    form = gassner.invariant_form(ctx)
    grp = groupengine.image_group(ctx, form)
    chain = groupengine.StabilizerChain(grp, seed=cfg.seed)
    computed = {"order": str(chain.order), "chain": chain.summary()}
    return (
        exp.to_dict(),
        "classical group order formula times l",
        computed,
        chain.order == exp.order,
        [],
    )


_CHECKS = {
    "splitting": _check_splitting,
    "relations": _check_relations,
    "form": _check_form,
    "irreducibility": _check_irreducibility,
    "prop21": _check_prop21,
    "extension": _check_extension,
    "image": _check_image,
}


def run_verification(cfg: VerificationConfig) -> list[dict]:
    """Execute the requested checks in dependency order."""
    cfg.validate()
    params = {
        "p": cfg.p,
        "l": cfg.l,
        "kvec": list(cfg.kvec),
        "seed": cfg.seed,
    }
    records = []
    for name in CHECK_ORDER:
        if name not in cfg.checks:
            continue
        t0 = time.monotonic()
        try:
            expected, prov, computed, match, findings = _CHECKS[name](
                cfg, params
            )
        except (FieldTooLargeError, groupengine.EngineCapacityError,
                MemoryError) as exc:
            records.append(
                _record(name, params, None, "not computed", None, True, 0,
                        [f"skipped: overflow ({exc})"])
            )
            continue
        ms = int((time.monotonic() - t0) * 1000) if cfg.timings else 0
        if not match:
            findings = list(findings) + [_repro(cfg, name)]
        records.append(
            _record(name, params, expected, prov, computed, match, ms,
                    findings)
        )
    return records


# -- serialization ----------------------------------------------------------


def render_json(records: list[dict]) -> str:
    return json.dumps(records, indent=2, sort_keys=True) + "\n"


def _flat(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, (dict, list)):
        return json.dumps(value, sort_keys=True, separators=(",", ":"))
    return str(value)


def render_tsv(records: list[dict]) -> str:
    cols = (
        "name", "parameters", "expected", "computed", "match", "runtime_ms",
        "findings",
    )
    lines = ["\t".join(cols)]
    for rec in records:
        lines.append("\t".join(_flat(rec[c]) for c in cols))
    return "\n".join(lines) + "\n"


def write_report(records: list[dict], cfg: VerificationConfig) -> None:
    text = render_json(records) if cfg.fmt == "json" else render_tsv(records)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- commands ---------------------------------------------------------------


def cmd_analyze(args) -> int:
    sd = arith.splitting_data(args.p, args.l)
    alg = arith.build_algebra(args.p, args.l)
    print(f"p = {sd.p}, l = {sd.l}")
    print(f"f = ord(p mod l) = {sd.f}")
    print(f"case = {sd.case.value} (parity-phrase reading: {sd.paper_case.value})")
    print(f"q = {sd.q}")
    if alg.ncomp == 1:
        print(f"algebra = F_{sd.q ** 2} with x -> x^{sd.q}")
        print(f"modulus = {list(alg.field.modulus)} (little-endian)")
    else:
        print(f"algebra = F_{sd.q} + F_{sd.q} with the swap involution")
        print(f"modulus = {list(alg.field.modulus)} (little-endian)")
    zeta = alg.elem_to_digits(alg.zeta)
    print(f"zeta (order {args.l}) = {zeta}")
    return 0


def _fmt_elem(alg, x) -> str:
    return "(" + ", ".join(str(list(d)) for d in alg.elem_to_digits(x)) + ")"


def cmd_matrices(args) -> int:
    kvec = _parse_kvec(args.k)
    cfg = VerificationConfig(args.p, args.l, kvec, ())
    cfg.validate()
    ctx = gassner.context(args.p, args.l, kvec)
    alg = ctx.algebra
    print(f"n = {ctx.n} (strands = {ctx.n + 1})")
    print("colors:")
    for i, t in enumerate(ctx.colors):
        print(f"  t_{i} = zeta^{kvec[i]} = {_fmt_elem(alg, t)}")
    for i in range(ctx.n):
        sq = gassner.generator_square(i, ctx)
        print(f"sigma_{i}^2:")
        for r in range(ctx.n):
            row = [
                _fmt_elem(alg, gassner.amat_entry(sq.comps, r, c))
                for c in range(ctx.n)
            ]
            print("  [" + "  ".join(row) + "]")
    return 0


def _config_from_args(args) -> VerificationConfig:
    base: dict[str, str] = {}
    if getattr(args, "config", None):
        base = read_config_file(args.config)

    def pick(flag, key, conv, default):
        if flag is not None:
            return flag
        if key in base:
            return conv(base[key])
        return default

    p = pick(args.p, "p", int, None)
    l = pick(args.l, "l", int, None)
    kraw = pick(args.k, "k", str, None)
    if p is None or l is None or kraw is None:
        raise ConfigError("p, l and k are required (flags or config file)")
    checks_raw = pick(args.checks, "checks", str, "")
    checks = tuple(c for c in checks_raw.replace(" ", "").split(",") if c)
    return VerificationConfig(
        p=p,
        l=l,
        kvec=_parse_kvec(kraw) if isinstance(kraw, str) else kraw,
        checks=checks,
        seed=pick(args.seed, "seed", int, 0),
        order_cap=pick(args.order_cap, "order_cap", int, DEFAULT_ORDER_CAP),
        element_cap=pick(
            args.element_cap, "element_cap", int, DEFAULT_ELEMENT_CAP
        ),
        out=pick(args.out, "out", str, None),
        fmt=pick(args.format, "format", str, "json"),
        timings=bool(args.timings or base.get("timings") == "true"),
    )


def cmd_verify(args) -> int:
    cfg = _config_from_args(args)
    records = run_verification(cfg)
    write_report(records, cfg)
    return 0 if all(r["match"] for r in records) else 1


def _odd_primes_below(bound: int) -> list[int]:
    return [m for m in range(3, bound) if arith._is_odd_prime(m)]


def cmd_scan(args) -> int:
    cheap = ("splitting", "relations", "form")
    records = []
    any_mismatch = False
    for p in _odd_primes_below(args.p_max):
        for l in _odd_primes_below(args.l_max):
            if p == l:
                continue
            for n in range(2, args.n_max + 1):
                kvec = tuple([1] * (n + 1))
                cfg = VerificationConfig(
                    p, l, kvec, cheap + ("image",), seed=args.seed,
                    order_cap=args.order_cap, fmt=args.format,
                )
                try:
                    recs = run_verification(cfg)
                except Exception as exc:  # per-case isolation
                    recs = [
                        _record(
                            "scan-case", {"p": p, "l": l, "kvec": list(kvec)},
                            None, "not computed", None, False, 0,
                            [f"error: {exc!r}", _repro(cfg, "form")],
                        )
                    ]
                any_mismatch = any_mismatch or not all(
                    r["match"] for r in recs
                )
                if args.format == "tsv":
                    text = render_tsv(recs)
                    sys.stdout.write(
                        text if not records else
                        text.split("\n", 1)[1]
                    )
                    sys.stdout.flush()
                records.extend(recs)
    if args.format == "json":
        sys.stdout.write(render_json(records))
    return 1 if any_mismatch else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="monodromy",
        description="Specialized reduced Gassner representations over finite"
        " involutive algebras: analysis and image verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="splitting and algebra data for (p, l)")
    pa.add_argument("-p", type=int, required=True)
    pa.add_argument("-l", type=int, required=True)
    pa.set_defaults(func=cmd_analyze)

    pm = sub.add_parser("matrices", help="print specialized generator matrices")
    pm.add_argument("-p", type=int, required=True)
    pm.add_argument("-l", type=int, required=True)
    pm.add_argument("-k", type=str, required=True,
                    help="comma-separated color exponents")
    pm.set_defaults(func=cmd_matrices)

    pv = sub.add_parser("verify", help="run verification checks")
    pv.add_argument("-p", type=int)
    pv.add_argument("-l", type=int)
    pv.add_argument("-k", type=str)
    pv.add_argument("--checks", type=str,
                    help="comma-separated subset of " + ",".join(CHECK_ORDER))
    pv.add_argument("--seed", type=int)
    pv.add_argument("--order-cap", type=int, dest="order_cap")
    pv.add_argument("--element-cap", type=int, dest="element_cap")
    pv.add_argument("--out", type=str)
    pv.add_argument("--format", type=str, choices=("json", "tsv"))
    pv.add_argument("--config", type=str, help="key=value config file")
    pv.add_argument("--timings", action="store_true",
                    help="record wall-clock times (breaks byte-identical"
                    " reports)")
    pv.set_defaults(func=cmd_verify)

    ps = sub.add_parser("scan", help="sweep a parameter grid")
    ps.add_argument("--p-max", type=int, default=20, dest="p_max")
    ps.add_argument("--l-max", type=int, default=20, dest="l_max")
    ps.add_argument("--n-max", type=int, default=4, dest="n_max")
    ps.add_argument("--order-cap", type=int, default=10**7, dest="order_cap")
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--format", type=str, default="tsv",
                    choices=("json", "tsv"))
    ps.set_defaults(func=cmd_scan)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        return 0
    except Exception as exc:
        print(f"operational error: {exc!r}", file=sys.stderr)
        traceback.print_exc()
        return 2


if __name__ == "__main__":
    sys.exit(main())
