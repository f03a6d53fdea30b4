"""Command-line front end: analyze, two-qubit, swap-demo.

Machine-readable JSON goes to stdout, a short human summary to stderr.
Exit codes: 0 consistent, 3 inconsistent, 1 input error, 2 numerical failure.
Reports are byte-identical across runs for identical inputs, seeds, and flag
order.  Setting RDL_TOL_OVERRIDE replaces every tolerance with its value.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from pathlib import Path

import numpy as np

from .config import DEFAULT_TOL, ToleranceConfig
from .consistency import check_hull_consistency, check_subspace_consistency
from .errors import (
    DimensionError,
    EmptyFamilyError,
    HermiticityError,
    IncompleteDomainError,
    NotAStateError,
    NotInSpanError,
    RdlError,
    SamplingExhaustedError,
    SingularSystemError,
    UnitarityError,
)
from .families import (
    StateFamily,
    constrained_two_qubit_family,
    extract_two_qubit_params,
    sample_two_qubit_params,
)
from .maps import build_assignment, build_dynamical_map, decompose_signed_kraus, verdicts
from .operators import frozen
from .serialize import (
    SCHEMA_ID,
    consistency_report_to_json,
    coefficients_to_json,
    dumps_report,
    family_from_json,
    kraus_to_json,
    matrix_from_json,
    matrix_to_json,
    subspace_to_json,
    superoperator_to_json,
    verdicts_to_json,
)
from .subspace import build_subspace
from .two_qubit import (
    LinearityCoefficients,
    ModelParams,
    analytic_bloch_step,
    linearity_residuals,
    model_unitary,
    pauli_eigenstates,
    solve_linearity_coefficients,
    swap_experiment,
    swap_unitary,
)

_DEFAULT_OMEGA_E = frozen(np.eye(2, dtype=complex) / 2)


class _CliInputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _CliInputError(message)


def _build_parser() -> _Parser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-rank", type=float, default=None, help="rank / membership cutoff")
    common.add_argument(
        "--tol-consistency", type=float, default=None, help="marginal-equality violation threshold"
    )
    common.add_argument("--out", default=None, metavar="FILE", help="also write the report here")
    common.add_argument("--seed", type=int, default=None, help="seed for every sampling path")
    common.add_argument("--hull", action="store_true", help="add the sampled hull check")
    common.add_argument("--trials", type=int, default=100, help="hull sampling trials")

    parser = _Parser(
        prog="rdl",
        description="Decide whether the reduced dynamics of a state family is linear "
        "and build the induced dynamical map.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    pa = sub.add_parser("analyze", parents=[common], help="full pipeline on a family file")
    pa.add_argument("--family", required=True, metavar="FILE", help="state family JSON")
    pa.add_argument("--unitary", metavar="FILE", help="propagator as a complex-matrix JSON")
    pa.add_argument("--model", choices=["two-qubit", "swap"], help="built-in propagator")
    pa.add_argument("--omega", type=float, help="coupling strength for --model two-qubit")
    pa.add_argument("--t", type=float, help="evolution time for --model two-qubit")
    pa.add_argument("--dump-subspace", action="store_true", help="embed the subspace bases")

    pt = sub.add_parser("two-qubit", parents=[common], help="constrained-family case study")
    pt.add_argument("--omega", type=float, default=1.0)
    pt.add_argument("--t", type=float, default=1.0)
    pt.add_argument("--a11", type=float, default=0.0)
    pt.add_argument("--a21", type=float, default=0.0)
    pt.add_argument("--b11", default="0,0,0", metavar="X,Y,Z")
    pt.add_argument("--b21", default="0,0,0", metavar="X,Y,Z")
    pt.add_argument("--samples", type=int, default=12, help="number of coefficient draws")
    pt.add_argument("--scale", type=float, default=0.35, help="coefficient sampling half-width")
    pt.add_argument("--members", default=None, metavar="FILE", help="use this family instead of sampling")

    ps = sub.add_parser("swap-demo", parents=[common], help="product family under the swap propagator")
    ps.add_argument("--states", default=None, metavar="FILE", help="JSON list of system states")
    ps.add_argument("--omega-e", dest="omega_e", default=None, metavar="FILE", help="environment state JSON")
    return parser


def _tolerances(args) -> ToleranceConfig:
    tols = DEFAULT_TOL
    if args.tol_rank is not None:
        tols = dataclasses.replace(tols, rank=args.tol_rank)
    if args.tol_consistency is not None:
        tols = dataclasses.replace(tols, consistency=args.tol_consistency)
    override = os.environ.get("RDL_TOL_OVERRIDE")
    if override is not None:
        try:
            value = float(override)
        except ValueError:
            raise _CliInputError(f"RDL_TOL_OVERRIDE must be a number, got {override!r}") from None
        tols = tols.override_all(value)
    return tols


def _load_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise _CliInputError(f"cannot read {path}: {err}") from None
    return json.loads(text)


def _parse_triple(text: str, flag: str) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != 3:
        raise _CliInputError(f"{flag} needs three comma-separated numbers, got {text!r}")
    try:
        return np.array([float(p) for p in parts])
    except ValueError:
        raise _CliInputError(f"{flag} needs numeric entries, got {text!r}") from None


def _resolve_unitary(args, family: StateFamily):
    sources = [s for s in (args.unitary, args.model) if s is not None]
    if len(sources) != 1:
        raise _CliInputError("exactly one propagator source is required: --unitary FILE or --model")
    if args.unitary is not None:
        u = matrix_from_json(_load_json(args.unitary), what="propagator")
        return u, {"kind": "file"}
    if args.model == "two-qubit":
        if args.omega is None or args.t is None:
            raise _CliInputError("--model two-qubit requires --omega and --t")
        if (family.dims.d_s, family.dims.d_e) != (2, 2):
            raise _CliInputError("--model two-qubit needs a 2x2 system-environment family")
        u = model_unitary(ModelParams(omega=args.omega, t=args.t))
        return u, {"kind": "two-qubit", "omega": args.omega, "t": args.t}
    if family.dims.d_s != family.dims.d_e:
        raise _CliInputError(
            f"--model swap needs equal dimensions, family has d_s={family.dims.d_s}, d_e={family.dims.d_e}"
        )
    return swap_unitary(family.dims.d_s), {"kind": "swap"}


def _run_pipeline(family: StateFamily, u: np.ndarray, args, tols: ToleranceConfig):
    sub = build_subspace(family, tols.rank)
    rep = check_subspace_consistency(sub, u, tols.consistency, tols)
    hull = None
    if args.hull:
        if args.seed is None:
            raise _CliInputError("--hull samples states and therefore requires --seed")
        hull = check_hull_consistency(
            family, u, args.seed, tols.consistency, args.trials, tols.rank, tols
        )
    superop = build_dynamical_map(build_assignment(sub), u, consistency=rep, tols=tols)
    kraus = decompose_signed_kraus(superop, tols.herm)
    v = verdicts(superop, tols.psd)
    return sub, rep, hull, superop, kraus, v


def _base_report(command, family, sub, rep, hull, superop, kraus, v, tols, rejected=None, dump=False):
    consistent = bool(rep.consistent and (hull is None or hull.consistent))
    return {
        "schema": SCHEMA_ID,
        "command": command,
        "dims": {"d_s": family.dims.d_s, "d_e": family.dims.d_e},
        "family": {"label": family.label, "members": len(family), "rejected": rejected},
        "subspace": {
            "span_dim": sub.span_dim,
            "reduced_dim": sub.reduced_dim,
            "kernel_dim": sub.kernel_dim,
            "detail": subspace_to_json(sub) if dump else None,
        },
        "consistency": consistency_report_to_json(rep),
        "hull_consistency": None if hull is None else consistency_report_to_json(hull),
        "consistent": consistent,
        "map": superoperator_to_json(superop),
        "kraus": kraus_to_json(kraus),
        "verdicts": verdicts_to_json(v),
        "tolerances": {"rank": tols.rank, "consistency": tols.consistency},
    }


def _cmd_analyze(args):
    tols = _tolerances(args)
    family = family_from_json(_load_json(args.family), tols)
    u, source = _resolve_unitary(args, family)
    sub, rep, hull, superop, kraus, v = _run_pipeline(family, u, args, tols)
    report = _base_report(
        "analyze", family, sub, rep, hull, superop, kraus, v, tols, dump=args.dump_subspace
    )
    report["unitary_source"] = source
    return report, (0 if report["consistent"] else 3)


def _independent_records(records, tol_rank: float):
    """First four records whose augmented vectors (1, alpha) are independent."""
    chosen = []
    rows = []
    for rec in records:
        row = np.concatenate(([1.0], np.asarray(rec[0], dtype=float)))
        candidate = np.vstack(rows + [row]) if rows else row[None, :]
        if np.linalg.svd(candidate, compute_uv=False)[-1] > tol_rank:
            chosen.append(rec)
            rows.append(row)
        if len(chosen) == 4:
            return chosen
    return None


def _cmd_two_qubit(args):
    tols = _tolerances(args)
    model = ModelParams(omega=args.omega, t=args.t)
    u = model_unitary(model)
    planted = None
    rejected_count = None
    if args.members is not None:
        family = family_from_json(_load_json(args.members), tols)
        if (family.dims.d_s, family.dims.d_e) != (2, 2):
            raise _CliInputError("--members must hold a 2x2 system-environment family")
    else:
        if args.seed is None:
            raise _CliInputError("sampling members requires --seed")
        if args.samples < 1:
            raise _CliInputError(f"--samples must be at least 1, got {args.samples}")
        b11 = _parse_triple(args.b11, "--b11")
        b21 = _parse_triple(args.b21, "--b21")
        rng = np.random.default_rng(args.seed)
        draws = [sample_two_qubit_params(rng, args.scale) for _ in range(args.samples)]
        family, rejected = constrained_two_qubit_family(
            args.a11, args.a21, b11, b21, draws, tols
        )
        rejected_count = len(rejected)
        planted = LinearityCoefficients(a11=args.a11, b11=b11, a21=args.a21, b21=b21)

    member_params = [extract_two_qubit_params(m, tols) for m in family.members]
    records = [(p.alpha, p.gamma[0, 0], p.gamma[1, 0]) for p in member_params]
    chosen = _independent_records(records, tols.rank)
    if chosen is None:
        raise _CliInputError(
            "fewer than 4 members with independent Bloch vectors; cannot fit the affine law"
        )
    coeffs = solve_linearity_coefficients(chosen)
    residuals = linearity_residuals(family, coeffs)

    sub, rep, hull, superop, kraus, v = _run_pipeline(family, u, args, tols)
    report = _base_report(
        "two-qubit", family, sub, rep, hull, superop, kraus, v, tols, rejected=rejected_count
    )
    report["model"] = {"omega": model.omega, "t": model.t}
    report["coefficients_planted"] = None if planted is None else coefficients_to_json(planted)
    report["coefficients_solved"] = coefficients_to_json(coeffs)
    report["residuals"] = [[float(r[0]), float(r[1])] for r in residuals]
    report["bloch_table"] = [
        {
            "alpha": [float(x) for x in p.alpha],
            "gamma11": float(p.gamma[0, 0]),
            "gamma21": float(p.gamma[1, 0]),
            "alpha_out": [
                float(x)
                for x in analytic_bloch_step(p.alpha, p.gamma[0, 0], p.gamma[1, 0], model.angle)
            ],
        }
        for p in member_params
    ]
    return report, (0 if report["consistent"] else 3)


def _cmd_swap_demo(args):
    tols = _tolerances(args)
    if args.states is not None:
        obj = _load_json(args.states)
        if not isinstance(obj, list) or not obj:
            raise _CliInputError("--states must hold a non-empty JSON list of matrices")
        states = [matrix_from_json(m, what=f"system state {i}") for i, m in enumerate(obj)]
    else:
        states = list(pauli_eigenstates())
    omega_e = (
        matrix_from_json(_load_json(args.omega_e), what="environment state")
        if args.omega_e is not None
        else np.array(_DEFAULT_OMEGA_E)
    )
    exp = swap_experiment(states, omega_e, tols, tols.consistency)
    family_size = len(states)
    hull = None
    if args.hull:
        if args.seed is None:
            raise _CliInputError("--hull samples states and therefore requires --seed")
        from .families import product_family

        fam = product_family(states, omega_e, tol=tols)
        u = swap_unitary(fam.dims.d_s)
        hull = check_hull_consistency(
            fam, u, args.seed, tols.consistency, args.trials, tols.rank, tols
        )
    sub = exp.subspace
    report = {
        "schema": SCHEMA_ID,
        "command": "swap-demo",
        "dims": {"d_s": sub.dims.d_s, "d_e": sub.dims.d_e},
        "family": {"label": "product family under swap", "members": family_size, "rejected": None},
        "subspace": {
            "span_dim": sub.span_dim,
            "reduced_dim": sub.reduced_dim,
            "kernel_dim": sub.kernel_dim,
            "detail": None,
        },
        "consistency": consistency_report_to_json(exp.consistency),
        "hull_consistency": None if hull is None else consistency_report_to_json(hull),
        "consistent": bool(
            exp.consistency.consistent and (hull is None or hull.consistent)
        ),
        "map": superoperator_to_json(exp.superoperator),
        "kraus": kraus_to_json(exp.kraus),
        "verdicts": verdicts_to_json(exp.map_verdicts),
        "tolerances": {"rank": tols.rank, "consistency": tols.consistency},
        "pairs": [
            {"before": p.before, "after": p.after, "increased": p.increased} for p in exp.pairs
        ],
        "constant_output_deviation": exp.constant_output_deviation,
        "omega_e": matrix_to_json(omega_e),
    }
    return report, (0 if report["consistent"] else 3)


def _summary_lines(report: dict) -> list[str]:
    dims = report["dims"]
    fam = report["family"]
    sub = report["subspace"]
    lines = [
        f"rdl {report['command']}: {fam['members']} members, "
        f"d_s={dims['d_s']}, d_e={dims['d_e']}",
        f"subspace: span {sub['span_dim']}, reduced {sub['reduced_dim']}, "
        f"kernel {sub['kernel_dim']}",
    ]
    for key, name in (("consistency", "consistency"), ("hull_consistency", "hull check")):
        c = report.get(key)
        if c is None:
            continue
        if c["consistent"]:
            word = "consistent"
        elif c["marginal"]:
            word = "inconsistent (marginal)"
        else:
            word = "inconsistent"
        extra = "" if c["pairs_tested"] is None else f", pairs tested {c['pairs_tested']}"
        lines.append(
            f"{name}: {word}, max violation {c['max_violation']:.3e} "
            f"(tolerance {c['tolerance']:.3e}{extra})"
        )
    v = report.get("verdicts")
    if v is not None:
        m = report["map"]
        lines.append(
            f"map: extension={m['extension']}, certified={'yes' if m['consistency_certified'] else 'no'}; "
            f"hermitian={'yes' if v['hermitian_preserving'] else 'no'}, "
            f"trace={'yes' if v['trace_preserving'] else 'no'}, "
            f"completely positive={'yes' if v['completely_positive'] else 'no'}"
        )
    return lines


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _CliInputError as err:
        print(f"input error: {err}", file=sys.stderr)
        return 1
    try:
        if args.command == "analyze":
            report, code = _cmd_analyze(args)
        elif args.command == "two-qubit":
            report, code = _cmd_two_qubit(args)
        else:
            report, code = _cmd_swap_demo(args)
    except _CliInputError as err:
        print(f"input error: {err}", file=sys.stderr)
        return 1
    except json.JSONDecodeError as err:
        print(
            f"input error: malformed JSON at line {err.lineno}, column {err.colno}: {err.msg}",
            file=sys.stderr,
        )
        return 1
    except (SingularSystemError, SamplingExhaustedError, IncompleteDomainError) as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return 2
    except (
        DimensionError,
        UnitarityError,
        HermiticityError,
        NotAStateError,
        EmptyFamilyError,
        NotInSpanError,
        ValueError,
        OSError,
    ) as err:
        print(f"input error: {err}", file=sys.stderr)
        return 1
    except RdlError as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return 2

    text = dumps_report(report)
    sys.stdout.write(text)
    if args.out is not None:
        try:
            Path(args.out).write_text(text)
        except OSError as err:
            print(f"input error: cannot write {args.out}: {err}", file=sys.stderr)
            return 1
    for line in _summary_lines(report):
        print(line, file=sys.stderr)
    print(f"exit status: {0 if code == 0 else code}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
