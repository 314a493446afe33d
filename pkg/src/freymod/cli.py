"""Command-line front end: freymod <command> [options].

Exit status: 0 success, 2 rejected input, 3 invariant violation, 1 internal error.
Reports are JSON with sorted keys, so identical runs give identical bytes.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Any, Sequence

from .curves import load_curves, sample_curves_path
from .cyclotomic import RingElement, min_poly, real_cyclotomic_field
from .errors import InvariantViolation, RejectedInput
from .frey import (DEFAULT_P_MIN, SCENARIOS, LocalReductionType, SolutionContext, build_frey,
                   classify_local, conductor_shape, disc_val_mod_p, serre_level_set)
from .ideals import PrimeIdeal, factor_prime, find_prime, parse_descriptor, radical_outside, splitting_type
from .padic import eliminate_p_case
from .properties import PROPERTIES, run_properties
from .search import SearchWindow, find_solutions, verify_cyclotomic_identities
from .symplectic import DEFAULT_VERIFIED_BOUND, density_set, eliminate_symplectic

__all__ = ["RunConfiguration", "run", "main", "build_parser"]

COMMANDS = ("factor", "frey", "classify", "conductor", "level", "eliminate",
            "density", "padic", "search", "verify")

EXIT_OK, EXIT_INTERNAL, EXIT_REJECTED, EXIT_INVARIANT = 0, 1, 2, 3


@dataclass
class RunConfiguration:
    command: str
    r: int | None = None
    d: int | None = None
    p: int | None = None
    q: int | None = None
    prime: str | None = None
    a: int | None = None
    b: int | None = None
    height: int | None = None
    curves: str | None = None
    scenario: str | None = None
    case2_variant: str = "lemma"
    n_values: list[int] = dc_field(default_factory=list)
    aux: list[int] = dc_field(default_factory=list)
    p_min: int = DEFAULT_P_MIN
    unsafe: bool = False
    verified_bound: int = DEFAULT_VERIFIED_BOUND
    properties: bool = False
    seed: int = 0
    trials: int = 50
    output: str | None = None
    format: str = "human"

    _REQUIRED = {
        "factor": ("r", "q"),
        "frey": ("r", "a", "b"),
        "classify": ("r", "a", "b"),
        "conductor": ("r", "a", "b"),
        "level": ("r", "d"),
        "eliminate": ("r", "d", "scenario"),
        "density": ("n_values",),
        "padic": ("r", "p"),
        "search": ("r", "d", "p", "height"),
    }

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise RejectedInput(f"unknown command {self.command!r}")
        for name in self._REQUIRED.get(self.command, ()):
            if getattr(self, name) in (None, []):
                raise RejectedInput(f"{self.command} needs --{name.replace('_', '-')}")
        if self.command == "verify" and not self.properties and None in (self.r, self.a, self.b):
            raise RejectedInput("verify needs --r, --a, --b or --properties")
        if self.p_min < DEFAULT_P_MIN and not self.unsafe:
            raise RejectedInput(f"--p-min below {DEFAULT_P_MIN} needs --unsafe")
        if self.format not in ("human", "json"):
            raise RejectedInput("--format must be human or json")

    def context(self, **over) -> SolutionContext:
        kw = dict(r=self.r, d=self.d, p=self.p, a=self.a, b=self.b,
                  p_min=self.p_min, unsafe=self.unsafe)
        kw.update(over)
        return SolutionContext(**kw)

    def settings(self) -> dict[str, Any]:
        keys = ("r", "d", "p", "q", "prime", "a", "b", "height", "scenario", "n_values", "aux",
                "p_min", "unsafe", "verified_bound", "case2_variant", "seed", "trials")
        out = {k: getattr(self, k) for k in keys}
        if self.curves is not None:
            out["curves"] = Path(self.curves).name
        return {k: v for k, v in out.items() if v not in (None, [])}


# -- serialisation helpers -----------------------------------------------------

def _elt(x: RingElement) -> dict:
    return {"coeffs": list(x.coeffs), "text": str(x)}


def _prime(P: PrimeIdeal) -> dict:
    return {"descriptor": P.descriptor, "q": P.q, "e": P.e, "f": P.f, "norm": P.norm}


def _local(t: LocalReductionType) -> dict:
    return {
        "prime": t.P.descriptor,
        "kind": t.kind,
        "conductor_exponent": t.conductor_exponent,
        "min_disc_valuation": t.min_disc_valuation,
        "disc_val_mod_p": t.disc_val_mod_p,
        "model_valuations": None if t.model_valuations is None else
        [None if v == float("inf") else v for v in t.model_valuations],
        "witness": None if t.witness is None else _elt(t.witness),
        "note": t.note,
    }


def _curves(cfg: RunConfiguration):
    path = cfg.curves or sample_curves_path()
    return load_curves(path)


# -- commands ------------------------------------------------------------------

def _factor(cfg):
    K = real_cyclotomic_field(cfg.r)
    primes = factor_prime(cfg.q, K)
    st = splitting_type(cfg.q, K)
    return {
        "r": cfg.r, "q": cfg.q, "min_poly": list(min_poly(cfg.r)),
        "primes": [_prime(P) for P in primes],
        "splitting": {"kind": st.kind, "e": st.e, "f": st.f, "g": st.g_count,
                      "completely_split": st.completely_split},
    }


def _frey(cfg):
    F = build_frey(cfg.context())
    return {"A": _elt(F.A), "B": _elt(F.B), "C": _elt(F.C), "c4": _elt(F.c4), "c6": _elt(F.c6),
            "disc": _elt(F.disc), "a_invariants": [_elt(x) for x in F.a_invariants]}


def _primes_to_classify(cfg, F) -> list[PrimeIdeal]:
    K = F.field
    if cfg.prime:
        return [find_prime(K, *parse_descriptor(cfg.prime))]
    if cfg.q:
        return factor_prime(cfg.q, K)
    out = list(factor_prime(2, K)) + list(factor_prime(cfg.r, K))
    out += [P for P in radical_outside(F.context.s, 2 * cfg.r, K) if P not in out]
    return out


def _classify(cfg):
    F = build_frey(cfg.context())
    rows = []
    for P in _primes_to_classify(cfg, F):
        row = _local(classify_local(F, P))
        if cfg.p is not None and row["kind"] == "multiplicative":
            try:
                row["disc_val_mod_p"] = disc_val_mod_p(F, P)
            except RejectedInput as exc:
                row["disc_val_mod_p_error"] = str(exc)
        rows.append(row)
    return {"local": rows}


def _conductor(cfg):
    shape = conductor_shape(build_frey(cfg.context()))
    return {"two_part": shape.two_part, "r_part": shape.r_part,
            "c_part": [P.descriptor for P in shape.c_part],
            "rad_part": [P.descriptor for P in shape.rad_part],
            "local": [_local(t) for t in shape.local]}


def _level(cfg):
    levels = serre_level_set(cfg.context(), cfg.scenario)
    return {"candidates": [{"two_part": L.two_part, "r_part": L.r_part, "d1_prime": L.d1_prime,
                            "primes": [P.descriptor for P in L.primes]} for L in levels.candidates]}


def _eliminate(cfg):
    rep = eliminate_symplectic(cfg.context(), cfg.scenario, _curves(cfg),
                               case2_variant=cfg.case2_variant, verified_bound=cfg.verified_bound)
    return rep.to_dict()


def _density(cfg):
    return density_set(cfg.n_values, cfg.aux, cfg.verified_bound).to_dict()


def _padic(cfg):
    return eliminate_p_case(cfg.context(p=None), _curves(cfg), cfg.p).to_dict()


def _search(cfg):
    sols = find_solutions(SearchWindow(cfg.r, cfg.d, cfg.p, cfg.height))
    nontrivial = [s for s in sols if s.primitive and not s.trivial]
    return {"solutions": [s.to_dict() for s in sols],
            "nontrivial_primitive": [s.to_dict() for s in nontrivial]}


def _verify(cfg):
    if cfg.properties:
        results = run_properties(cfg.seed, cfg.trials)
        out = {"properties": [r.to_dict() for r in results],
               "all_passed": all(r.passed for r in results)}
        return out
    rep = verify_cyclotomic_identities(cfg.a, cfg.b, cfg.r)
    return dict(rep.to_dict(), all_passed=rep.ok)


_DISPATCH = {
    "factor": _factor, "frey": _frey, "classify": _classify, "conductor": _conductor,
    "level": _level, "eliminate": _eliminate, "density": _density, "padic": _padic,
    "search": _search, "verify": _verify,
}


def run(cfg: RunConfiguration) -> tuple[int, dict]:
    """Dispatch one command; returns (exit status, report)."""
    report: dict[str, Any] = {"command": cfg.command, "config": cfg.settings(),
                              "assumptions": {"p_min": cfg.p_min, "unsafe_p_min": cfg.unsafe}}
    try:
        cfg.validate()
        result = _DISPATCH[cfg.command](cfg)
    except InvariantViolation as exc:
        report.update(status="invariant-violation", error=str(exc))
        return EXIT_INVARIANT, report
    except RejectedInput as exc:
        report.update(status="rejected-input", error=str(exc))
        return EXIT_REJECTED, report
    except Exception as exc:  # noqa: BLE001 - reported as an internal error
        report.update(status="internal-error", error=f"{type(exc).__name__}: {exc}")
        return EXIT_INTERNAL, report
    report["assumptions"].update(result.pop("assumptions", {}))
    if cfg.command in ("eliminate", "padic"):
        report["assumptions"]["case2_variant"] = cfg.case2_variant
    report["status"] = "ok"
    report["result"] = result
    if result.get("all_passed") is False:
        report["status"] = "property-failure" if cfg.properties else "identity-failure"
        return EXIT_INVARIANT, report
    return EXIT_OK, report


# -- argument parsing ----------------------------------------------------------

def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected integers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "json"), default="human")
    common.add_argument("--output", help="write the JSON report here")
    common.add_argument("--p-min", type=int, default=DEFAULT_P_MIN, dest="p_min")
    common.add_argument("--unsafe", action="store_true", help="allow --p-min below the default")
    common.add_argument("--r", type=int)
    common.add_argument("--d", type=int)
    common.add_argument("--p", type=int)
    common.add_argument("--a", type=int)
    common.add_argument("--b", type=int)
    common.add_argument("--verified-bound", type=int, default=DEFAULT_VERIFIED_BOUND,
                        dest="verified_bound")

    parser = argparse.ArgumentParser(prog="freymod", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    sp = sub.add_parser("factor", parents=[common], help="factor a rational prime in K")
    sp.add_argument("--q", type=int)
    sub.add_parser("frey", parents=[common], help="Frey curve constants and invariants")
    sp = sub.add_parser("classify", parents=[common], help="local reduction types")
    sp.add_argument("--q", type=int, help="classify at every prime above q")
    sp.add_argument("--prime", help='a single prime, e.g. "(2, [1, 1, 1])"')
    sub.add_parser("conductor", parents=[common], help="conductor shape of the Frey curve")
    sp = sub.add_parser("level", parents=[common], help="candidate Serre levels")
    sp.add_argument("--scenario", choices=SCENARIOS)
    sp = sub.add_parser("eliminate", parents=[common], help="symplectic elimination report")
    sp.add_argument("--scenario", choices=SCENARIOS)
    sp.add_argument("--curves", help="curve-list JSON (default: shipped r = 5 sample)")
    sp.add_argument("--case2-variant", choices=("lemma", "printed"), default="lemma",
                    dest="case2_variant")
    sp = sub.add_parser("density", parents=[common], help="exponent classes for given n_i")
    sp.add_argument("--n", type=_int_list, dest="n_values", default=[],
                    help='comma-separated negative integers, e.g. "--n=-6,-1"')
    sp.add_argument("--aux", type=_int_list, default=[])
    sp = sub.add_parser("padic", parents=[common], help="p = +-1 (mod r) obstruction")
    sp.add_argument("--curves", help="curve-list JSON (default: shipped r = 5 sample)")
    sp = sub.add_parser("search", parents=[common], help="brute-force solution search")
    sp.add_argument("--height", type=int)
    sp = sub.add_parser("verify", parents=[common], help="cyclotomic identities or property suites")
    sp.add_argument("--properties", action="store_true")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trials", type=int, default=50)
    return parser


def _config(ns: argparse.Namespace) -> RunConfiguration:
    fields = RunConfiguration.__dataclass_fields__
    return RunConfiguration(**{k: v for k, v in vars(ns).items() if k in fields})


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _human(report: dict) -> str:
    lines = [f"{report['command']}: {report['status']}"]
    if "error" in report:
        lines.append(f"error: {report['error']}")
    for key, value in sorted(report.get("result", {}).items()):
        lines.append(f"{key}: {json.dumps(value, sort_keys=True)}")
    lines.append("assumptions: " + json.dumps(report["assumptions"], sort_keys=True))
    return "\n".join(lines) + "\n"


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)  # argparse exits 2 on usage errors
    cfg = _config(ns)
    status, report = run(cfg)
    text = dumps(report)
    if cfg.output:
        Path(cfg.output).write_text(text)
    out = text if cfg.format == "json" else _human(report)
    stream = sys.stdout if status == EXIT_OK else sys.stderr
    stream.write(out)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
