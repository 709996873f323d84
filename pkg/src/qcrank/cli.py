"""Command-line entry point: ``qcrank <subcommand> [flags]``.

Exit status is 0 on success, 1 when a mathematical check fails and 2 on
usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from qcrank import crank_gf, modular_cert, partitions
from qcrank.cyclotomic import rational_str
from qcrank.qseries import ZZ, EtaQuotientSpec, QSeries, eta_product

FORMATS = ("human", "json", "tsv")


class UsageError(Exception):
    pass


def _int_list(flag: str):
    def parse(text: str) -> list[int]:
        try:
            return [int(x) for x in text.split(",") if x.strip()]
        except ValueError:
            raise argparse.ArgumentTypeError(f"{flag} expects comma-separated integers, got {text!r}") from None

    return parse


def _positive(flag: str):
    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{flag} expects an integer, got {text!r}") from None
        if value < 1:
            raise argparse.ArgumentTypeError(f"{flag} must be positive, got {value}")
        return value

    return parse


def _non_negative(flag: str):
    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{flag} expects an integer, got {text!r}") from None
        if value < 0:
            raise argparse.ArgumentTypeError(f"{flag} must be non-negative, got {value}")
        return value

    return parse


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcrank", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, default_format: str = "human") -> None:
        p.add_argument("--format", choices=FORMATS, default=default_format)
        p.add_argument("--out", help="write output to this file instead of stdout")

    p = sub.add_parser("verify", help="verify the crank product for one or all t")
    p.add_argument("--t", type=int, choices=sorted(crank_gf.SPECS))
    p.add_argument("--nmax", type=_non_negative("--nmax"), default=crank_gf.DEFAULT_DIRECT_BOUND)
    p.add_argument("--jobs", type=_positive("--jobs"), default=1)
    common(p)

    p = sub.add_parser("certify", help="run the certificate for one tuple")
    for flag in ("--alpha", "--M", "--N"):
        p.add_argument(flag, type=_positive(flag), required=True)
    p.add_argument("--r", type=_int_list("--r"), required=True)
    p.add_argument("--beta", type=_non_negative("--beta"), required=True)
    p.add_argument("--a", type=_int_list("--a"), required=True)
    common(p)

    p = sub.add_parser("orbit", help="orbit of beta under the square classes mod 24 alpha")
    p.add_argument("--alpha", type=_positive("--alpha"), required=True)
    p.add_argument("--M", type=_positive("--M"), required=True)
    p.add_argument("--N", type=_positive("--N"), default=1)
    p.add_argument("--r", type=_int_list("--r"), required=True)
    p.add_argument("--beta", type=_non_negative("--beta"), required=True)
    common(p)

    p = sub.add_parser("cusps", help="double-coset representatives for Gamma_0(N)")
    p.add_argument("--N", type=_positive("--N"), required=True)
    common(p)

    p = sub.add_parser("reduce", help="reduction of C_t modulo Phi_3")
    p.add_argument("--t", type=int, choices=sorted(crank_gf.SPECS), required=True)
    p.add_argument("--precision", type=_positive("--precision"), default=crank_gf.REDUCTION_PRECISION)
    common(p)

    p = sub.add_parser("oracle", help="brute-force tables: t-core counts with --t, else the crank table")
    p.add_argument("--t", type=int)
    p.add_argument("--nmax", type=_non_negative("--nmax"), default=20)
    common(p, "tsv")

    p = sub.add_parser("scan", help="residues where t-core counts vanish modulo --modulus")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--modulus", type=int, default=3)
    p.add_argument("--alpha", type=_positive("--alpha"), required=True)
    p.add_argument("--nmax", type=_non_negative("--nmax"), default=50)
    common(p)

    p = sub.add_parser(
        "dump",
        help="coefficients of C_t (--t), an eta-quotient (--M/--r) or the crank product mod Phi_modulus",
    )
    p.add_argument("--t", type=int, choices=sorted(crank_gf.SPECS))
    p.add_argument("--M", type=_positive("--M"))
    p.add_argument("--r", type=_int_list("--r"))
    p.add_argument("--modulus", type=int, default=5)
    p.add_argument("--precision", type=_positive("--precision"), default=50)
    common(p, "tsv")
    return parser


def _tuple(args) -> modular_cert.RaduTuple:
    try:
        spec = EtaQuotientSpec.from_vector(args.M, args.r)
    except ValueError as exc:
        raise UsageError(f"--r: {exc}") from None
    if not 0 <= args.beta < args.alpha:
        raise UsageError(f"--beta: {args.beta} is not a residue mod --alpha {args.alpha}")
    return modular_cert.RaduTuple(args.alpha, args.M, args.N, spec, args.beta)


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _series_tsv(f: QSeries) -> str:
    return "".join(f"{n}\t{f[n]}\n" for n in range(f.precision))


def cmd_verify(args) -> tuple[int, str]:
    ts = [args.t] if args.t else None
    reports = crank_gf.verify_all(ts, args.nmax, args.jobs)
    ok = all(r.theorem_match for r in reports)
    for r in reports:
        if not r.theorem_match:
            print(f"qcrank verify: t={r.t} classification {sorted(r.explained)} != {sorted(r.theorem_betas)}", file=sys.stderr)
    if args.format == "json":
        payload = [r.to_json() for r in reports]
        text = _dump_json(payload[0] if args.t else payload)
    else:
        lines = []
        for r in reports:
            lines.append(
                f"t={r.t}: explained={sorted(r.explained)} theorem={sorted(r.theorem_betas)} "
                f"certified={sorted(r.certified)} unexplained_vanishing={sorted(r.unexplained_vanishing)} "
                f"match={r.theorem_match}"
            )
            for c in r.certificates:
                lines.append(f"  beta={c.tuple.beta} orbit={c.orbit} floor(nu)={c.nu_floor} {c.verdict}")
        text = "\n".join(lines) + "\n"
    return (0 if ok else 1), text


def cmd_certify(args) -> tuple[int, str]:
    tup = _tuple(args)
    try:
        a = EtaQuotientSpec.from_vector(args.N, args.a)
    except ValueError as exc:
        raise UsageError(f"--a: {exc}") from None
    cert = modular_cert.certify(tup, a)
    if not cert.proven:
        print(f"qcrank certify: {cert.verdict}", file=sys.stderr)
    if args.format == "json":
        text = _dump_json(cert.to_json())
    else:
        text = (
            f"orbit={cert.orbit} kappa={cert.kappa} pi={cert.pi} nu={rational_str(cert.nu)} "
            f"floor(nu)={cert.nu_floor}\n"
            + "".join(
                f"  rep {g.as_list()}: p_lower={rational_str(lo)} p_star={rational_str(st)}\n"
                for g, (lo, st) in zip(cert.reps, cert.p_values)
            )
            + f"verdict: {cert.verdict}\n"
        )
    return (0 if cert.proven else 1), text


def cmd_orbit(args) -> tuple[int, str]:
    orb = sorted(modular_cert.orbit(_tuple(args)))
    if args.format == "json":
        return 0, _dump_json({"orbit": [str(b) for b in orb]})
    if args.format == "tsv":
        return 0, "".join(f"{b}\n" for b in orb)
    return 0, f"P({args.beta}) = {{{', '.join(map(str, orb))}}}\n"


def cmd_cusps(args) -> tuple[int, str]:
    N = args.N
    reps = modular_cert.coset_reps(N)
    info = {
        "N": str(N),
        "index": str(modular_cert.index_gamma0(N)),
        "cusp_count": str(modular_cert.count_cusps(N)),
        "wang": modular_cert.wang_applies(N),
        "reps": [[str(x) for x in g.as_list()] for g in reps],
    }
    if args.format == "json":
        return 0, _dump_json(info)
    if args.format == "tsv":
        return 0, "".join("\t".join(map(str, g.as_list())) + "\n" for g in reps)
    lines = [f"[SL2(Z) : Gamma_0({N})] = {info['index']}, {info['cusp_count']} cusps"]
    lines += [f"  {g.a}/{g.c}: {g.as_list()}" for g in reps]
    return 0, "\n".join(lines) + "\n"


def cmd_reduce(args) -> tuple[int, str]:
    try:
        res = crank_gf.reduce_mod_phi3(args.t, args.precision)
    except crank_gf.ReductionError as exc:
        return 1, f"reduction failed: {exc}\n"
    payload = {
        "t": str(res.t),
        "M": str(res.spec.M),
        "r": [str(x) for x in res.spec.vector()],
        "j": str(res.j),
        "verified_to": str(res.verified_to),
    }
    if args.format == "json":
        return 0, _dump_json(payload)
    return 0, f"C_{res.t} = eta{res.spec.vector()} * (1-q^{3 * res.t}n)^{res.j} mod Phi_3 (checked to q^{res.verified_to})\n"


def cmd_oracle(args) -> tuple[int, str]:
    try:
        if args.t is not None:
            if args.t < 2:
                raise UsageError("--t: must be at least 2")
            rows = [(n, partitions.count_t_core(n, args.t)) for n in range(args.nmax + 1)]
            if args.format == "json":
                return 0, _dump_json([{"n": str(n), "count": str(c)} for n, c in rows])
            return 0, "".join(f"{n}\t{c}\n" for n, c in rows)
        table = partitions.crank_table(args.nmax)
    except partitions.OracleLimitError as exc:
        raise UsageError(f"--nmax: {exc}") from None
    items = sorted(table.counts.items(), key=lambda kv: (kv[0][1], kv[0][0]))
    if args.format == "json":
        return 0, _dump_json([{"m": str(m), "n": str(n), "count": str(c)} for (m, n), c in items])
    return 0, "".join(f"{m}\t{n}\t{c}\n" for (m, n), c in items)


def cmd_scan(args) -> tuple[int, str]:
    if args.modulus < 2:
        raise UsageError("--modulus: must be at least 2")
    if args.t < 2:
        raise UsageError("--t: must be at least 2")
    res = crank_gf.scan(args.t, args.modulus, args.alpha, args.nmax)
    if args.format == "json":
        return 0, _dump_json({
            "t": str(res.t),
            "modulus": str(res.modulus),
            "alpha": str(res.alpha),
            "n_max": str(res.n_max),
            "residues": [str(b) for b in res.residues],
        })
    if args.format == "tsv":
        return 0, "".join(f"{b}\n" for b in res.residues)
    return 0, f"t={res.t} mod {res.modulus}, alpha={res.alpha}, n<={res.n_max}: {list(res.residues)}\n"


def cmd_dump(args) -> tuple[int, str]:
    if args.t is not None:
        f = crank_gf.build_Ct(args.t, args.precision)
    elif args.M is not None or args.r is not None:
        if args.M is None or args.r is None:
            raise UsageError("--M and --r must be given together")
        try:
            spec = EtaQuotientSpec.from_vector(args.M, args.r)
        except ValueError as exc:
            raise UsageError(f"--r: {exc}") from None
        f = eta_product(spec, args.precision)
    else:
        try:
            f = crank_gf.build_crank_gf(args.modulus, args.precision)
        except ValueError as exc:
            raise UsageError(f"--modulus: {exc}") from None
    if args.format == "json":
        return 0, _dump_json({"ring": repr(f.ring), "coefficients": f.to_json()})
    if args.format == "human" and f.ring == ZZ:
        return 0, " ".join(str(c) for c in f.coefficients()) + "\n"
    return 0, _series_tsv(f)


COMMANDS = {
    "verify": cmd_verify,
    "certify": cmd_certify,
    "orbit": cmd_orbit,
    "cusps": cmd_cusps,
    "reduce": cmd_reduce,
    "oracle": cmd_oracle,
    "scan": cmd_scan,
    "dump": cmd_dump,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        code, text = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"qcrank {args.command}: error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
