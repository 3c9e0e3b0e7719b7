"""Command-line front end: certify, eval, gram, witness, crosscheck.

Spec files are JSON with fields "space", "support", "scheme", "truncation"
and "seed"; support terms serialize as {"type": "prog", "base": a, "step": n}
or {"type": "one", "value": v}, paired under "k"/"l" on product spaces.
Reports are JSON with stable key order; timestamps are emitted unless
--no-timestamp is given, so identical inputs yield byte-identical reports
under that flag.

Exit codes: 0 SPD, 1 NotSPD, 2 SufficientOnly or Inconclusive, 64 spec-file
or usage error, 70 numerical failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

import numpy as np

from . import certify as cert_mod
from . import gram as gram_mod
from .certify import (
    Certificate,
    GammaFailure,
    ParityDeficit,
    QuadrantDeficit,
    Verdict,
)
from .errors import NotApplicableError, NumericalError, SamplingError, SpecFileError
from .geometry import sample_config
from .kernels import (
    CoefficientScheme,
    KernelSpec,
    SpaceDescriptor,
    eval_kernel,
)
from .supportsets import ProgressionWitness, SupportSet1D, SupportSet2D, Term1D

__all__ = ["main", "load_spec_file", "parse_spec_dict", "spec_file_to_dict", "SpecFile"]

EXIT_SPD = 0
EXIT_NOT_SPD = 1
EXIT_PARTIAL = 2
EXIT_SPEC_ERROR = 64
EXIT_NUMERICAL = 70


@dataclass(frozen=True)
class SpecFile:
    spec: KernelSpec
    seed: int


def _term_from_dict(data, where: str) -> Term1D:
    if not isinstance(data, dict) or "type" not in data:
        raise SpecFileError(where, "term must be an object with a 'type' field")
    kind = data["type"]
    if kind == "one":
        if set(data) != {"type", "value"}:
            raise SpecFileError(where, "singleton terms take exactly {'type', 'value'}")
        value = data["value"]
        if not isinstance(value, int) or value < 0:
            raise SpecFileError(f"{where}.value", "must be an integer >= 0")
        return Term1D(value, 0)
    if kind == "prog":
        if set(data) != {"type", "base", "step"}:
            raise SpecFileError(where, "progression terms take exactly {'type', 'base', 'step'}")
        base, step = data["base"], data["step"]
        if not isinstance(base, int) or base < 0:
            raise SpecFileError(f"{where}.base", "must be an integer >= 0")
        if not isinstance(step, int) or step < 1:
            raise SpecFileError(f"{where}.step", "must be an integer >= 1")
        return Term1D(base, step)
    raise SpecFileError(f"{where}.type", f"unknown term type {kind!r}")


def _term_to_dict(term: Term1D) -> dict:
    if term.is_progression:
        return {"type": "prog", "base": term.base, "step": term.step}
    return {"type": "one", "value": term.base}


def _space_from_dict(data) -> SpaceDescriptor:
    if not isinstance(data, dict) or "kind" not in data:
        raise SpecFileError("space", "must be an object with a 'kind' field")
    kind = data["kind"]
    try:
        if kind == "circle":
            return SpaceDescriptor("circle")
        if kind in ("sphere", "circle_sphere"):
            return SpaceDescriptor(kind, m=data.get("m"))
        if kind == "circle_tph":
            return SpaceDescriptor(kind, family=data.get("family"), d=data.get("d"))
    except ValueError as exc:
        raise SpecFileError("space", str(exc)) from exc
    raise SpecFileError("space.kind", f"unknown space kind {kind!r}")


def _space_to_dict(space: SpaceDescriptor) -> dict:
    out = {"kind": space.kind}
    if space.m is not None:
        out["m"] = space.m
    if space.family is not None:
        out["family"] = space.family
        out["d"] = space.d
    return out


def _support_from_list(data, product: bool):
    if not isinstance(data, list):
        raise SpecFileError("support", "must be a list of terms")
    if product:
        pairs = []
        for i, entry in enumerate(data):
            if not isinstance(entry, dict) or set(entry) != {"k", "l"}:
                raise SpecFileError(f"support[{i}]", "product terms take exactly {'k', 'l'}")
            pairs.append(
                (_term_from_dict(entry["k"], f"support[{i}].k"),
                 _term_from_dict(entry["l"], f"support[{i}].l"))
            )
        return SupportSet2D(tuple(pairs))
    return SupportSet1D(tuple(_term_from_dict(e, f"support[{i}]") for i, e in enumerate(data)))


def _support_to_list(support) -> list:
    if isinstance(support, SupportSet2D):
        return [{"k": _term_to_dict(kt), "l": _term_to_dict(lt)} for kt, lt in support.terms]
    return [_term_to_dict(t) for t in support.terms]


def _scheme_from_dict(data) -> CoefficientScheme:
    if not isinstance(data, dict) or "kind" not in data:
        raise SpecFileError("scheme", "must be an object with a 'kind' field")
    kind = data["kind"]
    try:
        if kind == "constant":
            return CoefficientScheme("constant", scale=float(data.get("scale", 1.0)))
        if kind == "geometric":
            return CoefficientScheme(
                "geometric",
                scale=float(data.get("scale", 1.0)),
                r_k=float(data.get("r_k", 0.9)),
                r_l=float(data.get("r_l", 0.9)),
            )
    except (TypeError, ValueError) as exc:
        raise SpecFileError("scheme", str(exc)) from exc
    raise SpecFileError("scheme.kind", f"unknown scheme kind {kind!r}")


def _scheme_to_dict(scheme: CoefficientScheme) -> dict:
    if scheme.kind == "constant":
        return {"kind": "constant", "scale": scheme.scale}
    return {"kind": "geometric", "scale": scheme.scale, "r_k": scheme.r_k, "r_l": scheme.r_l}


def parse_spec_dict(data: dict) -> SpecFile:
    if not isinstance(data, dict):
        raise SpecFileError("$", "spec file must hold a JSON object")
    unknown = set(data) - {"space", "support", "scheme", "truncation", "seed"}
    if unknown:
        raise SpecFileError("$", f"unknown fields {sorted(unknown)}")
    for required in ("space", "support"):
        if required not in data:
            raise SpecFileError(required, "field is required")
    space = _space_from_dict(data["space"])
    support = _support_from_list(data["support"], space.is_product)
    scheme = (
        _scheme_from_dict(data["scheme"]) if "scheme" in data else CoefficientScheme(
            "geometric", scale=1.0, r_k=0.9, r_l=0.9
        )
    )
    trunc = data.get("truncation", {"kmax": 60, "lmax": 60})
    if not isinstance(trunc, dict) or set(trunc) - {"kmax", "lmax"}:
        raise SpecFileError("truncation", "takes {'kmax', 'lmax'}")
    kmax, lmax = trunc.get("kmax", 60), trunc.get("lmax", 60)
    if not isinstance(kmax, int) or not isinstance(lmax, int) or kmax < 0 or lmax < 0:
        raise SpecFileError("truncation", "bounds must be integers >= 0")
    seed = data.get("seed", 0)
    if not isinstance(seed, int):
        raise SpecFileError("seed", "must be an integer")
    try:
        spec = KernelSpec(space, support, scheme, (kmax, lmax))
    except ValueError as exc:
        raise SpecFileError("$", str(exc)) from exc
    return SpecFile(spec, seed)


def spec_file_to_dict(sf: SpecFile) -> dict:
    return {
        "space": _space_to_dict(sf.spec.space),
        "support": _support_to_list(sf.spec.support),
        "scheme": _scheme_to_dict(sf.spec.scheme),
        "truncation": {"kmax": sf.spec.kmax, "lmax": sf.spec.lmax},
        "seed": sf.seed,
    }


def load_spec_file(path: str) -> SpecFile:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SpecFileError(path, f"cannot read spec file: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecFileError(path, f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return parse_spec_dict(data)


def parse_space_flag(text: str) -> SpaceDescriptor:
    """Compact space override: circle | sphere:M | circle_sphere:M |
    circle_tph:FAMILY:D."""
    parts = text.split(":")
    kind = parts[0]
    try:
        if kind == "circle" and len(parts) == 1:
            return SpaceDescriptor("circle")
        if kind in ("sphere", "circle_sphere") and len(parts) == 2:
            return SpaceDescriptor(kind, m=int(parts[1]))
        if kind == "circle_tph" and len(parts) == 3:
            return SpaceDescriptor(kind, family=parts[1], d=int(parts[2]))
    except ValueError as exc:
        raise SpecFileError("--space", str(exc)) from exc
    raise SpecFileError(
        "--space",
        f"cannot parse {text!r}; use circle, sphere:M, circle_sphere:M or circle_tph:FAMILY:D",
    )


def _apply_space_override(sf: SpecFile, flag: Optional[str]) -> SpecFile:
    if flag is None:
        return sf
    space = parse_space_flag(flag)
    if space.is_product != sf.spec.space.is_product:
        raise SpecFileError("--space", "override must keep the support's term shape")
    try:
        spec = dataclasses.replace(sf.spec, space=space)
    except ValueError as exc:
        raise SpecFileError("--space", str(exc)) from exc
    return SpecFile(spec, sf.seed)


def _witness_to_dict(w: ProgressionWitness) -> dict:
    return {"type": "progression", "modulus": w.modulus, "residue": w.residue}


def _counterexample_to_dict(ce) -> Optional[dict]:
    if ce is None:
        return None
    if isinstance(ce, ProgressionWitness):
        return _witness_to_dict(ce)
    if isinstance(ce, ParityDeficit):
        return {"type": "parity-deficit", "parity": ce.parity}
    if isinstance(ce, QuadrantDeficit):
        return {
            "type": "quadrant-deficit",
            "k_parity": ce.k_parity,
            "l_parity": ce.l_parity,
            "axis": ce.axis,
        }
    if isinstance(ce, GammaFailure):
        return {
            "type": "gamma-failure",
            "gamma": ce.gamma,
            "parity": ce.parity,
            "empty": ce.empty,
            "witness": _witness_to_dict(ce.witness) if ce.witness else None,
        }
    raise TypeError(f"unknown counterexample type {type(ce)!r}")


def _certificate_to_dict(cert: Certificate) -> dict:
    return {
        "verdict": cert.verdict.value,
        "method": cert.method,
        "trace": [dataclasses.asdict(t) for t in cert.trace],
        "counterexample": _counterexample_to_dict(cert.counterexample),
    }


def _point_to_jsonable(p):
    from .geometry import CirclePoint, SpherePoint

    if isinstance(p, CirclePoint):
        return {"theta": p.theta}
    if isinstance(p, SpherePoint):
        return {"coords": list(p.coords)}
    return {"circle": {"theta": p[0].theta}, "sphere": {"coords": list(p[1].coords)}}


def _witness_report_to_dict(w: gram_mod.WitnessReport) -> dict:
    return {
        "kind": w.kind,
        "points": [_point_to_jsonable(p) for p in w.points],
        "coefficients": list(w.coefficients),
        "residual": w.residual,
        "scale": w.scale,
    }


def _describe_counterexample(ce) -> str:
    if isinstance(ce, ProgressionWitness):
        return f"missed residue class {ce.residue} mod {ce.modulus}"
    if isinstance(ce, ParityDeficit):
        return f"only finitely many {ce.parity} degrees"
    if isinstance(ce, QuadrantDeficit):
        return f"quadrant ({ce.k_parity} k, {ce.l_parity} l) has a bounded {ce.axis}-projection"
    if isinstance(ce, GammaFailure):
        if ce.empty:
            return f"gamma={ce.gamma} {ce.parity}-set empty"
        w = ce.witness
        return f"gamma={ce.gamma} {ce.parity}-set misses class {w.residue} mod {w.modulus}"
    return ""


def _emit(report: dict, args) -> None:
    if not getattr(args, "no_timestamp", False):
        report["timestamp"] = datetime.now(timezone.utc).isoformat()
    if getattr(args, "json", None):
        Path(args.json).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")


def _verdict_exit(verdict: Verdict) -> int:
    if verdict is Verdict.SPD:
        return EXIT_SPD
    if verdict is Verdict.NOT_SPD:
        return EXIT_NOT_SPD
    return EXIT_PARTIAL


def _load(args) -> SpecFile:
    return _apply_space_override(load_spec_file(args.specfile), args.space)


def _run_certifier(sf: SpecFile, args) -> Certificate:
    spec = sf.spec
    method = getattr(args, "method", "auto")
    gamma_max = getattr(args, "gamma_max", None)
    if method in ("sufficient-circle-outer", "sufficient-sphere-outer"):
        if spec.space.kind != "circle_sphere":
            raise SpecFileError("space", "the sufficient test needs a circle_sphere space")
        axis = "circle-outer" if method.endswith("circle-outer") else "sphere-outer"
        return cert_mod.sufficient_product(spec.support, spec.space.m, axis)
    kind = spec.space.kind
    if kind == "circle":
        return cert_mod.certify_circle(spec.support)
    if kind == "sphere":
        return cert_mod.certify_sphere(spec.support, spec.space.m)
    if kind == "circle_sphere":
        return cert_mod.certify_circle_sphere(spec.support, spec.space.m, gamma_max)
    return cert_mod.certify_circle_tph(spec.support, spec.space, gamma_max)


def _cmd_certify(args) -> int:
    sf = _load(args)
    cert = _run_certifier(sf, args)
    report = {
        "space": _space_to_dict(sf.spec.space),
        "support": _support_to_list(sf.spec.support),
        **_certificate_to_dict(cert),
    }
    _emit(report, args)
    desc = _describe_counterexample(cert.counterexample)
    line = f"{cert.verdict.value} ({cert.method})"
    if desc:
        line += f": {desc}"
    print(line)
    return _verdict_exit(cert.verdict)


def _cmd_eval(args) -> int:
    sf = _load(args)
    value = eval_kernel(sf.spec, args.t, args.s)
    report = {"value": value, "t": args.t, "s": args.s}
    _emit(report, args)
    print(value)
    return EXIT_SPD


def _sample_points(spec: KernelSpec, n: int, seed: int):
    kind = spec.space.kind
    if kind == "circle_tph":
        raise SpecFileError("space", "no geometric point model for circle_tph; gram unavailable")
    m = spec.space.m if spec.space.m is not None else 2
    xs, zs = sample_config(m, n, n, seed)
    if kind == "circle":
        return xs
    if kind == "sphere":
        return zs
    return list(zip(xs, zs))


def _cmd_gram(args) -> int:
    sf = _load(args)
    spec = sf.spec
    if args.trunc is not None:
        spec = dataclasses.replace(spec, truncation=args.trunc)
    seed = args.seed if args.seed is not None else sf.seed
    points = _sample_points(spec, args.points, seed)
    a = gram_mod.gram_matrix(spec, points)
    ok, lam_min = gram_mod.check_pd(a, args.tol)
    report = {
        "points": args.points,
        "seed": seed,
        "tol": args.tol,
        "positive_definite": ok,
        "lambda_min": lam_min,
    }
    _emit(report, args)
    if args.csv:
        lines = ["n,lambda_min"]
        for n in range(2, args.points + 1):
            _, lam = gram_mod.check_pd(a[:n, :n], args.tol)
            lines.append(f"{n},{lam!r}")
        Path(args.csv).write_text("\n".join(lines) + "\n")
    print(f"lambda_min = {lam_min:.6e} ({'PD' if ok else 'not PD'} at tol {args.tol})")
    return EXIT_SPD if ok else EXIT_NOT_SPD


def _cmd_witness(args) -> int:
    sf = _load(args)
    spec = sf.spec
    cert = _run_certifier(sf, args)
    report = {
        "space": _space_to_dict(spec.space),
        **_certificate_to_dict(cert),
        "witness": None,
    }
    if cert.verdict is Verdict.NOT_SPD:
        seed = args.seed if args.seed is not None else sf.seed
        wr = None
        kind = spec.space.kind
        if kind == "circle" and isinstance(cert.counterexample, ProgressionWitness):
            wr = gram_mod.witness_progression_circle(spec, cert.counterexample)
        elif kind == "sphere":
            wr = gram_mod.witness_parity_sphere(spec)
        elif kind == "circle_sphere":
            wr = gram_mod.witness_product(spec, cert, seed=seed)
        if wr is not None:
            report["witness"] = _witness_report_to_dict(wr)
            print(f"witness kind={wr.kind} residual={wr.residual:.3e} scale={wr.scale:.3e}")
        else:
            print("no witness generator applies to this space")
    else:
        print(f"{cert.verdict.value}: no degeneracy witness to build")
    _emit(report, args)
    return _verdict_exit(cert.verdict)


def _cmd_crosscheck(args) -> int:
    sf = _load(args)
    spec = sf.spec
    if spec.space.kind != "circle_sphere":
        raise SpecFileError("space", "crosscheck needs a circle_sphere space")
    gamma_max = getattr(args, "gamma_max", None)
    first = cert_mod.certify_circle_sphere(spec.support, spec.space.m, gamma_max)
    second = cert_mod.certify_circle_sphere_gamma_loop(spec.support, spec.space.m, gamma_max)
    sufficient = {
        axis: cert_mod.sufficient_product(spec.support, spec.space.m, axis)
        for axis in ("circle-outer", "sphere-outer")
    }
    report = {
        "space": _space_to_dict(spec.space),
        "tail_sets": _certificate_to_dict(first),
        "gamma_loop": _certificate_to_dict(second),
        "sufficient": {k: _certificate_to_dict(v) for k, v in sufficient.items()},
    }
    coherent = first.verdict == second.verdict
    for cert in sufficient.values():
        if cert.verdict is Verdict.SUFFICIENT_ONLY and first.verdict is not Verdict.SPD:
            coherent = False
    report["coherent"] = coherent
    _emit(report, args)
    print(
        f"tail-sets={first.verdict.value} gamma-loop={second.verdict.value} "
        f"circle-outer={sufficient['circle-outer'].verdict.value} "
        f"sphere-outer={sufficient['sphere-outer'].verdict.value}"
    )
    if not coherent:
        print("certifier implementations disagree", file=sys.stderr)
        return EXIT_NUMERICAL
    return _verdict_exit(first.verdict)


def _parse_trunc(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("truncation must look like K,L")
    try:
        kmax, lmax = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise argparse.ArgumentTypeError("truncation bounds must be integers") from exc
    if kmax < 0 or lmax < 0:
        raise argparse.ArgumentTypeError("truncation bounds must be >= 0")
    return kmax, lmax


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spdkernels",
        description="certify strict positive definiteness of isotropic kernel supports",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("specfile", help="path to a JSON kernel spec")
        p.add_argument("--json", metavar="PATH", help="write a JSON report here")
        p.add_argument("--no-timestamp", action="store_true", help="omit the report timestamp")
        p.add_argument("--seed", type=int, default=None, help="override the spec file seed")
        p.add_argument(
            "--space",
            default=None,
            metavar="KIND[:ARGS]",
            help="override the spec file space, e.g. sphere:3 or circle_tph:cayley:16",
        )

    p_cert = sub.add_parser("certify", help="run the certifier matching the space kind")
    common(p_cert)
    p_cert.add_argument("--gamma-max", type=int, default=None, help="raise the tail-cutoff bound")
    p_cert.add_argument(
        "--method",
        choices=["auto", "sufficient-circle-outer", "sufficient-sphere-outer"],
        default="auto",
        help="certifier selection; the sufficient tests may return partial verdicts",
    )

    p_eval = sub.add_parser("eval", help="evaluate the truncated kernel at (t, s)")
    common(p_eval)
    p_eval.add_argument("--t", type=float, required=True)
    p_eval.add_argument("--s", type=float, default=None)

    p_gram = sub.add_parser("gram", help="assemble a Gram matrix at sampled points and test it")
    common(p_gram)
    p_gram.add_argument("--points", type=int, default=20, help="number of sampled points")
    p_gram.add_argument("--trunc", type=_parse_trunc, default=None, metavar="K,L")
    p_gram.add_argument("--tol", type=float, default=1e-10)
    p_gram.add_argument("--csv", metavar="PATH", help="write (n, lambda_min) rows here")

    p_wit = sub.add_parser("witness", help="build a degeneracy witness for a refuted support")
    common(p_wit)
    p_wit.add_argument("--gamma-max", type=int, default=None)

    p_cross = sub.add_parser("crosscheck", help="run both product certifiers and the sufficient tests")
    common(p_cross)
    p_cross.add_argument("--gamma-max", type=int, default=None)

    return parser


_COMMANDS = {
    "certify": _cmd_certify,
    "eval": _cmd_eval,
    "gram": _cmd_gram,
    "witness": _cmd_witness,
    "crosscheck": _cmd_crosscheck,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except SpecFileError as exc:
        print(f"spec error: {exc}", file=sys.stderr)
        return EXIT_SPEC_ERROR
    except (NotApplicableError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPEC_ERROR
    except (NumericalError, SamplingError, np.linalg.LinAlgError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
