"""Command-line front end.

Exit codes are shared by every subcommand: 0 computed and passed, 1 computed
and failed (only ``check-ybe`` and ``spectrum`` have a pass/fail verdict),
2 usage or input error.

JSON floats use Python's shortest round-trip repr (at most 17 significant
digits), so output is byte-identical for identical inputs and seeds.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass

from . import __version__
from .bethe import bethe_solve, compare_spectrum
from .config import DEFAULT_TOLERANCES, DimensionError, Tolerances
from .filtration import boundary_scan
from .linalg import load_matrix
from .models import CATALOG, ModelId, UnknownModelError, build_r, spectral_lift
from .transfer import max_transfer_commutator
from .yang_baxter import RMatrixSpec, check_boundary_free, pairwise_generation_rank

log = logging.getLogger("rigidity")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
FILTRATION_U = 0.3
REPORT_SPECTRUM_SECTORS = ((6, 1), (6, 2))


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


@dataclass
class RunConfig:
    command: str
    model: str | None
    n_range: tuple
    max_depth: int
    tolerances: Tolerances
    output_path: str | None
    format: str


def _n_range(text: str) -> tuple:
    lo, sep, hi = text.partition("..")
    try:
        a = int(lo)
        b = int(hi) if sep else a
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}") from None
    if not 2 <= a <= b:
        raise argparse.ArgumentTypeError(f"need 2 <= A <= B, got {text!r}")
    return a, b


def resolve_model(token: str, seed: int | None = None) -> tuple:
    """Return ``(label, RMatrixSpec, ModelId | None)`` for a model token or ``file:PATH``."""
    if token.startswith("file:"):
        path = token[5:]
        try:
            matrix = load_matrix(path)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read R-matrix from {path!r}: {exc}") from None
        d = int(round(matrix.shape[0] ** 0.5))
        if d * d != matrix.shape[0]:
            raise UsageError(f"R-matrix in {path!r} has dim {matrix.shape[0]}, not a square d^2")
        try:
            return token, RMatrixSpec.constant(matrix, d, name=token), None
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if token.strip() == "random_gate" and seed is not None:
        token = f"random_gate:{seed}"
    try:
        model = ModelId.parse(token)
    except ValueError as exc:
        raise UsageError(f"bad model token {token!r}: {exc}") from None
    return str(model), build_r(model), model


def _tolerances(args) -> Tolerances:
    try:
        return Tolerances(
            tol_rank=args.tol_rank, tol_herm=DEFAULT_TOLERANCES.tol_herm,
            tol_ybe=args.tol_ybe, tol_spec=args.tol_spec, tol_comm=args.tol_comm,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _emit(cfg: RunConfig, payload: dict, csv_header=None, csv_rows=None) -> None:
    if cfg.format == "csv":
        text = _csv_text(csv_header, csv_rows)
    else:
        text = json.dumps(payload, indent=2) + "\n"
    if cfg.output_path:
        with open(cfg.output_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- subcommands -------------------------------------------------------------------

def cmd_check_ybe(cfg: RunConfig, args) -> int:
    label, spec, _ = resolve_model(cfg.model, args.seed)
    span = pairwise_generation_rank(spec, args.word_len, cfg.tolerances.tol_rank, u=FILTRATION_U)
    report = check_boundary_free(spec, cfg.tolerances.tol_ybe,
                                 pairwise_generated=True if args.assume_pairwise else None)
    payload = {"model": label, **report.to_dict(),
               "three_body_word_rank": {"max_word_len": args.word_len, "rank": span.rank,
                                        "ambient": span.ambient_dim**2}}
    rows = [[s.u.real if s.u is not None else "", s.u.imag if s.u is not None else "",
             s.v.real if s.v is not None else "", s.v.imag if s.v is not None else "",
             s.defect_fro, s.relative] for s in report.samples]
    _emit(cfg, payload, ["u_re", "u_im", "v_re", "v_im", "defect_fro", "relative_defect"], rows)
    return EXIT_OK if report.passes else EXIT_FAIL


def cmd_filtration(cfg: RunConfig, args) -> int:
    label, spec, _ = resolve_model(cfg.model, args.seed)
    lo, hi = cfg.n_range
    scan = boundary_scan(spec, lo, hi, cfg.max_depth, cfg.tolerances.tol_rank, mode=args.mode, u=FILTRATION_U)
    payload = {"model": label, **scan.to_dict()}
    rows = [[n, rep.mode, ";".join(map(str, rep.dims)),
             "" if rep.termination_depth is None else rep.termination_depth, rep.saturated, rep.ambient_dim]
            for n, rep in zip(scan.n_values, scan.reports)]
    _emit(cfg, payload, ["n", "mode", "dims", "termination_depth", "saturated", "ambient_dim"], rows)
    return EXIT_OK


def _require_xxx(cfg: RunConfig):
    try:
        model = ModelId.parse(cfg.model)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if model.name != "xxx_rational":
        raise UsageError(f"Bethe equations are implemented for the xxx model only, not {cfg.model!r}")


def cmd_spectrum(cfg: RunConfig, args) -> int:
    _require_xxx(cfg)
    try:
        comp = compare_spectrum(args.sites, args.magnons, tol_spec=cfg.tolerances.tol_spec)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rows = [[b, j, comp.bethe[b].energy, comp.ed_eigenvalues[j], delta] for b, j, delta in comp.matches]
    _emit(cfg, comp.to_dict(), ["bethe_index", "ed_index", "bethe_energy", "ed_energy", "delta"], rows)
    return EXIT_OK if comp.passes else EXIT_FAIL


def cmd_bethe(cfg: RunConfig, args) -> int:
    _require_xxx(cfg)
    try:
        result = bethe_solve(args.sites, args.magnons)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rows = [[k, s.energy, s.residual, s.singular, ";".join(f"{z.real!r}{z.imag:+}j" for z in s.roots)]
            for k, s in enumerate(result.solutions)]
    _emit(cfg, result.to_dict(), ["index", "energy", "residual", "singular", "roots"], rows)
    return EXIT_OK


def report_row(token: str, tol: Tolerances, max_depth: int = 12, n_range=(2, 4), seed=None) -> dict:
    label, spec, model = resolve_model(token, seed)
    ybe = check_boundary_free(spec, tol.tol_ybe)
    scan = boundary_scan(spec, n_range[0], n_range[1], max_depth, tol.tol_rank, u=FILTRATION_U)
    lifted = spectral_lift(spec)
    comm = max(max_transfer_commutator(lifted, n) for n in (2, 3))
    spectrum = None
    if model is not None and model.name == "xxx_rational":
        comps = [compare_spectrum(n, m, tol_spec=tol.tol_spec) for n, m in REPORT_SPECTRUM_SECTORS]
        spectrum = {
            "passes": all(c.passes for c in comps),
            "sectors": [{"N": c.n_sites, "M": c.n_magnons, "max_mismatch": c.max_mismatch,
                         "coverage": c.coverage} for c in comps],
        }
    commuting = comm <= tol.tol_comm
    solvable = ybe.passes and commuting and scan.verdict == "constrained"
    return {
        "model": label,
        "ybe": {"passes": ybe.passes, "max_defect": ybe.max_defect},
        "filtration": {"verdict": scan.verdict, "stable_dims": [rep.stable_dim for rep in scan.reports],
                       "n": list(scan.n_values)},
        "transfer": {"commuting": commuting, "max_relative_commutator": comm,
                     "family": "native" if spec.kind == "spectral" else "u*I + R"},
        "spectrum": spectrum,
        "dichotomy": "solvable" if solvable else "obstructed",
    }


def cmd_report(cfg: RunConfig, args) -> int:
    tokens = [t.strip() for t in args.models.split(",") if t.strip()] if args.models is not None else list(CATALOG)
    for t in tokens:
        resolve_model(t, args.seed)  # validate everything before computing anything
    lo, hi = cfg.n_range
    rows = [report_row(t, cfg.tolerances, cfg.max_depth, (lo, hi), args.seed) for t in tokens]
    payload = {"version": __version__, "tolerances": vars(cfg.tolerances), "rows": rows}
    csv_rows = [[r["model"], r["ybe"]["passes"], r["ybe"]["max_defect"], r["filtration"]["verdict"],
                 r["transfer"]["commuting"], r["transfer"]["max_relative_commutator"],
                 "" if r["spectrum"] is None else r["spectrum"]["passes"], r["dichotomy"]] for r in rows]
    _emit(cfg, payload, ["model", "ybe_passes", "max_defect", "filtration", "commuting",
                         "max_relative_commutator", "spectrum_passes", "dichotomy"], csv_rows)
    return EXIT_OK


COMMANDS = {
    "check-ybe": cmd_check_ybe,
    "filtration": cmd_filtration,
    "spectrum": cmd_spectrum,
    "bethe": cmd_bethe,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", dest="out", default=None, help="write output to this file instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, default=None, help="seed for random_gate when the token has none")
    common.add_argument("--max-depth", type=int, default=12)
    common.add_argument("--n", dest="n_range", type=_n_range, default=(2, 4), metavar="A..B")
    common.add_argument("--tol-rank", type=float, default=DEFAULT_TOLERANCES.tol_rank)
    common.add_argument("--tol-ybe", type=float, default=DEFAULT_TOLERANCES.tol_ybe)
    common.add_argument("--tol-spec", type=float, default=DEFAULT_TOLERANCES.tol_spec)
    common.add_argument("--tol-comm", type=float, default=DEFAULT_TOLERANCES.tol_comm)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="rigidity", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check-ybe", parents=[common], help="Yang-Baxter defect of a model")
    p.add_argument("--model", required=True)
    p.add_argument("--word-len", type=int, default=6, help="word length for the R12/R13/R23 span rank")
    p.add_argument("--assume-pairwise", action="store_true",
                   help="assert pairwise generation at depth 2 so a boundary-free verdict is reported")

    p = sub.add_parser("filtration", parents=[common], help="depth filtration across chain sizes")
    p.add_argument("--model", required=True)
    p.add_argument("--mode", choices=("product", "commutator"), default="product")

    for name, text in (("spectrum", "Bethe energies against exact diagonalization"),
                       ("bethe", "solve the XXX Bethe equations")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--model", default="xxx")
        p.add_argument("--sites", type=int, required=True)
        p.add_argument("--magnons", type=int, required=True)

    p = sub.add_parser("report", parents=[common], help="dichotomy table over the model catalog")
    p.add_argument("--models", default=None, help="comma-separated model tokens (default: whole catalog)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    cfg = RunConfig(
        command=args.command,
        model=getattr(args, "model", None),
        n_range=args.n_range,
        max_depth=args.max_depth,
        tolerances=None,
        output_path=args.out,
        format=args.format,
    )
    try:
        cfg.tolerances = _tolerances(args)
        if cfg.max_depth < 1:
            raise UsageError("--max-depth must be >= 1")
        return COMMANDS[args.command](cfg, args)
    except (UsageError, UnknownModelError, DimensionError) as exc:
        print(f"rigidity: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
