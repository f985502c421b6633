"""Command-line front door.

Subcommands: analyze, spectrum, construct, multishift, unions, blocks,
factorize, orbit, polydisc.  All randomness is seeded (flag --seed, env var
CYCLICA_SEED takes precedence); reports are deterministic JSON with the
configuration echoed.  Exit codes: 0 success, 1 when --strict is set and the
verdict is non-cyclic, 2 on input errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .coefspace import cyclicity_single, decompose
from .constructions import (
    CrcPointSet,
    CrtSequenceSpec,
    DivisorClosedSet,
    crc_sequence,
    crt_sequence_residue,
    crt_sequence_value,
    factorial_residue,
    factorial_sequence,
)
from .core import Tolerances, VectorSeries
from .io import InputError, dump_report, load_series, series_to_dict, write_csv
from .multishift import af_membership, sstarN_cyclicity
from .polydisc import check_c1_c2, polydisc_cyclicity
from .spectrum import (
    IntegerSpectrum,
    difference_multiplicity,
    lacunarity_ratio,
    residues_hit,
    spectrum_admits_SstarN,
)
from .verdicts import NON_CYCLIC, NOT_CYCLIC

NONCYCLIC_STATUSES = {NON_CYCLIC, NOT_CYCLIC, "No-witness"}


@dataclass(frozen=True)
class RunConfig:
    tolerances: Tolerances
    seed: int
    horizon: int
    strict: bool = False

    def __post_init__(self):
        if self.horizon < 8:
            raise InputError("horizon must be at least 8")

    def echo(self):
        t = self.tolerances
        return {
            "version": __version__,
            "seed": self.seed,
            "horizon": self.horizon,
            "strict": self.strict,
            "tolerances": {
                "tol_rank": t.tol_rank,
                "tol_orth": t.tol_orth,
                "tol_unitary": t.tol_unitary,
                "tol_residual": t.tol_residual,
            },
        }


def _config(args) -> RunConfig:
    seed = args.seed
    env = os.environ.get("CYCLICA_SEED")
    if env is not None:
        try:
            seed = int(env)
        except ValueError:
            raise InputError(f"CYCLICA_SEED must be an integer, got {env!r}")
    try:
        tol = Tolerances(
            tol_rank=args.tol_rank, tol_orth=args.tol_orth,
            tol_unitary=args.tol_unitary, tol_residual=args.tol_residual,
        )
    except ValueError as exc:
        raise InputError(str(exc))
    return RunConfig(tol, seed, args.horizon, getattr(args, "strict", False))


def _load_spectrum(path) -> IntegerSpectrum:
    import json

    try:
        with open(path) as fh:
            data = json.load(fh)
    except FileNotFoundError as exc:
        raise InputError(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if "terms" in data:  # a series file: use its exponents
        series, _ = load_series(path)
        if isinstance(series, VectorSeries):
            return IntegerSpectrum.explicit([int(e) for e in series.exponents])
        raise InputError("polydisc series have no 1-D spectrum; pass a spectrum file")
    kind = data.get("kind")
    try:
        if kind == "explicit":
            return IntegerSpectrum.explicit(data["values"])
        if kind == "geometric":
            return IntegerSpectrum.geometric(data["base"])
        if kind == "factorial_plus_k":
            return IntegerSpectrum.factorial_plus_k()
        if kind == "crt":
            return IntegerSpectrum.crt(
                CrtSequenceSpec(DivisorClosedSet(data["generators"]))
            )
    except (KeyError, ValueError, TypeError) as exc:
        raise InputError(f"bad spectrum file: {exc}") from exc
    raise InputError(f"unknown spectrum kind {kind!r}")


def _emit(report, args, config):
    report = {"config": config.echo(), **report}
    text = dump_report(report, getattr(args, "report", None))
    print(text)


def _verdict_exit(verdict, config) -> int:
    if config.strict and verdict.status in NONCYCLIC_STATUSES:
        return 1
    return 0


# -- subcommand handlers ----------------------------------------------------

def _cmd_analyze(args, config):
    series, model = load_series(args.input)
    if not isinstance(series, VectorSeries):
        raise InputError("analyze expects a disc series; use the polydisc subcommand")
    tol = config.tolerances
    if model is not None:
        rep = decompose(series, model, tol)
        out = {
            "verdict": rep.verdict.to_dict(),
            "mode": rep.mode,
            "x_star_basis": rep.x_star.basis.T,
            "n_of_f": rep.n_of_f,
            "deg_p_exponent": rep.deg_p_exponent,
            "deg_p_index": rep.deg_p_index,
            "p_terms": series_to_dict(rep.p)["terms"],
        }
        verdict = rep.verdict
    else:
        verdict = cyclicity_single(series, tol)
        out = {"verdict": verdict.to_dict(), "mode": verdict.mode,
               "at_horizon": True}
    _emit(out, args, config)
    return _verdict_exit(verdict, config)


def _cmd_spectrum(args, config):
    s = _load_spectrum(args.input)
    out = {"kind": s.kind}
    K = config.horizon
    if args.lacunarity:
        out["lacunarity_ratio"] = lacunarity_ratio(s, K)
    if args.diff_mult:
        out["difference_multiplicity"] = difference_multiplicity(s, K)
    if args.residues is not None:
        N = args.residues
        out["residues_hit"] = sorted(residues_hit(s, N, 1, K))
        out["admits_SstarN"] = spectrum_admits_SstarN(s, N, K).to_dict()
    _emit(out, args, config)
    return 0


def _cmd_construct(args, config):
    K = args.count
    rows = []
    if args.generator == "factorial":
        for k in range(1, K + 1):
            if args.mod is not None:
                rows.append((k, factorial_residue(k, args.mod)))
            else:
                try:
                    rows.append((k, factorial_sequence(k)))
                except OverflowError as exc:
                    raise InputError(str(exc))
        header = ("index", "residue" if args.mod is not None else "value")
    elif args.generator == "crt":
        if not args.set:
            raise InputError("construct crt requires --set")
        try:
            gens = [int(x) for x in args.set.split(",")]
        except ValueError:
            raise InputError(f"--set must be comma-separated integers, got {args.set!r}")
        spec = CrtSequenceSpec(DivisorClosedSet(gens))
        for k in range(1, K + 1):
            if args.mod is not None:
                rows.append((k, crt_sequence_residue(spec, k, args.mod)))
            else:
                rows.append((k, crt_sequence_value(spec, k)))
        header = ("index", "residue" if args.mod is not None else "value")
    else:  # crc
        if args.dim is None:
            raise InputError("construct crc requires --dim")
        points = CrcPointSet(list(np.eye(args.dim)))
        header = ("index",) + tuple(f"coeff_{j}" for j in range(args.dim))
        for k in range(1, K + 1):
            a = crc_sequence(points, k)
            rows.append((k,) + tuple(
                f"{c.real:.17g}{c.imag:+.17g}j" for c in a
            ))
    if args.out:
        write_csv(args.out, header, rows)
    else:
        print(",".join(header))
        for row in rows:
            print(",".join(str(v) for v in row))
    return 0


def _cmd_multishift(args, config):
    tol = config.tolerances
    if args.af:
        s = _load_spectrum(args.input)
        members = sorted(af_membership(s, args.nmax, config.horizon))
        _emit({"af_membership": members, "nmax": args.nmax}, args, config)
        return 0
    if args.power is None:
        raise InputError("multishift requires --power N or --af")
    series, model = load_series(args.input)
    verdict = sstarN_cyclicity(series, args.power, tol, model=model,
                               horizon=config.horizon)
    _emit({"power": args.power, "verdict": verdict.to_dict()}, args, config)
    return _verdict_exit(verdict, config)


def _cmd_unions(args, config):
    from .unions import construct_prescribed_spectra

    tol = config.tolerances
    if args.action == "construct":
        spectra = [_load_spectrum(p) for p in args.spectra.split(",")]
        stacked, comps, verdict = construct_prescribed_spectra(
            spectra, seed=config.seed, horizon=min(config.horizon, 16), tol=tol
        )
        out = {
            "verdict": verdict.to_dict(),
            "stacked": series_to_dict(stacked),
            "components": [series_to_dict(c) for c in comps],
        }
        _emit(out, args, config)
        return _verdict_exit(verdict, config)
    # check: a stacked family series with a tail model
    series, model = load_series(args.input)
    verdict = cyclicity_single(series, tol, model=model)
    _emit({"verdict": verdict.to_dict()}, args, config)
    return _verdict_exit(verdict, config)


def _cmd_blocks(args, config):
    import json

    from .blocks import BlockSeries, PolyDirectionModel, blocks_cyclicity

    try:
        with open(args.input) as fh:
            data = json.load(fh)
        bs = BlockSeries(
            data["dim"], data["block_degree"],
            [(b["n"], np.array([[complex(re, im) for re, im in row]
                                for row in b["poly"]]))
             for b in data["blocks"]],
        )
        with open(args.model) as fh:
            mdata = json.load(fh)
        model = PolyDirectionModel(
            [np.array([[complex(re, im) for re, im in row] for row in p])
             for p in mdata["recurrent_polys"]],
            mdata.get("transient_indices", ()),
        )
    except FileNotFoundError as exc:
        raise InputError(str(exc)) from exc
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise InputError(f"bad blocks input: {exc}") from exc
    verdict = blocks_cyclicity(bs, model, config.tolerances, seed=config.seed)
    _emit({"verdict": verdict.to_dict()}, args, config)
    return _verdict_exit(verdict, config)


def _cmd_factorize(args, config):
    from .modelspace import (
        DegenerateInputError,
        NotCyclicGeneratorError,
        factorize_Ep,
        verify_potapov,
    )

    series, _ = load_series(args.poly)
    if not isinstance(series, VectorSeries):
        raise InputError("factorize expects a disc polynomial")
    tol = config.tolerances
    try:
        pp = factorize_Ep(series, tol)
    except (DegenerateInputError, NotCyclicGeneratorError) as exc:
        raise InputError(str(exc)) from exc
    report = verify_potapov(pp, seed=config.seed, tol=tol, generator=series)
    out = {
        "dim": pp.dim,
        "factors": [x for x in pp.factors],
        "theta_coeffs": pp.assembled.coeffs,
        "verification": report,
    }
    if args.out:
        dump_report(out, args.out)
    _emit({"n_factors": pp.n_factors, "verification": report}, args, config)
    return 0


def _cmd_orbit(args, config):
    from .orbit import orbit_project

    f, _ = load_series(args.input)
    g, _ = load_series(args.target)
    if not isinstance(f, VectorSeries) or not isinstance(g, VectorSeries):
        raise InputError("orbit expects disc series; see the polydisc subcommand")
    rep = orbit_project(f, g, args.max_shift, config.tolerances)
    if args.csv:
        rows = [
            (int(n), float(rep.residuals[n]), float(rep.gram_condition))
            for n in range(args.max_shift + 1)
        ]
        write_csv(args.csv, ("budget", "residual", "gram_condition"), rows)
    _emit({
        "residual_final": rep.residual_final,
        "target_norm": rep.target_norm,
        "gram_condition": rep.gram_condition,
        "truncation_degree": rep.truncation_degree,
    }, args, config)
    return 0


def _cmd_polydisc(args, config):
    from .polydisc import PolySeries

    series, model = load_series(args.input)
    if not isinstance(series, PolySeries):
        raise InputError("polydisc expects a series with kind 'polydisc'")
    out = {}
    if args.check_c1c2:
        c1, c2, note = check_c1_c2(series, config.horizon)
        out["c1_multiplicity"] = c1
        out["c2_verdict"] = c2.to_dict()
        out["c1_certificate"] = note
    verdict = None
    if args.analyze:
        verdict = polydisc_cyclicity(series, config.tolerances, model,
                                     config.horizon)
        out["verdict"] = verdict.to_dict()
    _emit(out, args, config)
    return _verdict_exit(verdict, config) if verdict is not None else 0


# -- parser -----------------------------------------------------------------

def _build_parser():
    p = argparse.ArgumentParser(
        prog="cyclica",
        description="Decide and certify backward-shift cyclicity of lacunary series.",
    )
    p.add_argument("--version", action="version", version=f"cyclica {__version__}")

    def common(sp, strict=True):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--horizon", type=int, default=64)
        sp.add_argument("--tol-rank", type=float, default=1e-9)
        sp.add_argument("--tol-orth", type=float, default=1e-10)
        sp.add_argument("--tol-unitary", type=float, default=1e-8)
        sp.add_argument("--tol-residual", type=float, default=1e-6)
        sp.add_argument("--report", default=None, help="write the JSON report here")
        if strict:
            sp.add_argument("--strict", action="store_true",
                            help="exit 1 on a non-cyclic verdict")

    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("analyze", help="tail-span cyclicity analysis")
    sp.add_argument("--input", required=True)
    common(sp)
    sp.set_defaults(func=_cmd_analyze)

    sp = sub.add_parser("spectrum", help="exponent sequence diagnostics")
    sp.add_argument("--input", required=True)
    sp.add_argument("--lacunarity", action="store_true")
    sp.add_argument("--diff-mult", action="store_true")
    sp.add_argument("--residues", type=int, default=None, metavar="N")
    common(sp, strict=False)
    sp.set_defaults(func=_cmd_spectrum)

    sp = sub.add_parser("construct", help="sequence generators")
    sp.add_argument("generator", choices=("factorial", "crt", "crc"))
    sp.add_argument("--count", type=int, required=True)
    sp.add_argument("--mod", type=int, default=None)
    sp.add_argument("--set", default=None, help="comma-separated generators for crt")
    sp.add_argument("--dim", type=int, default=None, help="dimension for crc")
    sp.add_argument("--out", default=None, help="CSV output path")
    common(sp, strict=False)
    sp.set_defaults(func=_cmd_construct)

    sp = sub.add_parser("multishift", help="N-th power shift cyclicity")
    sp.add_argument("--input", required=True)
    sp.add_argument("--power", type=int, default=None, metavar="N")
    sp.add_argument("--af", action="store_true",
                    help="report the set of certified powers")
    sp.add_argument("--nmax", type=int, default=12)
    common(sp)
    sp.set_defaults(func=_cmd_multishift)

    sp = sub.add_parser("unions", help="shifted-spectrum families")
    sp.add_argument("action", choices=("construct", "check"))
    sp.add_argument("--spectra", default=None,
                    help="comma-separated spectrum files (construct)")
    sp.add_argument("--input", default=None, help="family file (check)")
    common(sp)
    sp.set_defaults(func=_cmd_unions)

    sp = sub.add_parser("blocks", help="bounded-block cyclicity")
    sp.add_argument("--input", required=True)
    sp.add_argument("--model", required=True)
    common(sp)
    sp.set_defaults(func=_cmd_blocks)

    sp = sub.add_parser("factorize", help="model-space factorization")
    sp.add_argument("--poly", required=True)
    sp.add_argument("--out", default=None, help="write factors + matrix here")
    common(sp, strict=False)
    sp.set_defaults(func=_cmd_factorize)

    sp = sub.add_parser("orbit", help="orbit least-squares residual curves")
    sp.add_argument("--input", required=True)
    sp.add_argument("--target", required=True)
    sp.add_argument("--max-shift", type=int, default=256)
    sp.add_argument("--csv", default=None)
    common(sp, strict=False)
    sp.set_defaults(func=_cmd_orbit)

    sp = sub.add_parser("polydisc", help="polydisc series analysis")
    sp.add_argument("--input", required=True)
    sp.add_argument("--check-c1c2", action="store_true")
    sp.add_argument("--analyze", action="store_true")
    common(sp)
    sp.set_defaults(func=_cmd_polydisc)

    return p


def dispatch(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config(args)
        return args.func(args, config)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
