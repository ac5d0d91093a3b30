"""Batch command-line front end.

Reads one JSON problem file, runs one computation and writes one JSON
document (CSV for Weyl scans). Exact values cross the boundary as strings.

Exit codes: 0 success, 2 invalid input, 3 mathematical precondition
failed, 4 numerical non-convergence, 1 anything else.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import acceptance
from .asymptotics import remainder_scan, weyl_estimate
from .combinatorics import INFINITE, counting_function, ehrhart_polynomial, multiplicity
from .errors import InputValidationError, MetaspecError, NumericalError, PreconditionError
from .fock import cross_validate_block
from .io import complex_pair, dumps, format_rational, parse_rational, parse_real
from .rational import RationalFrequencies
from .spectrum import classify, enumerate_point_spectrum, mu_point_spectrum, unit
from .symbols import LieAlgebraElement, from_blocks

SCHEMA_VERSION = "1"
COMMANDS = ("spectrum", "classify", "multiplicity", "count", "ehrhart", "weyl", "verify-block", "mu-spectrum")

# option name -> parser; the canonical form is what to_json writes back
OPTION_TYPES = {
    "cutoff": "rational",
    "hbar": "rational",
    "r": "rational",
    "lambda": "rational",
    "k": "int",
    "k_max": "int",
    "n_max": "int",
    "max_denominator": "int",
    "tol": "float",
    "seed": "int",
    "branch": "branch",
}


def _parse_option(name: str, value):
    kind = OPTION_TYPES.get(name)
    if kind is None:
        raise InputValidationError(f"unknown option {name!r}")
    if kind == "rational":
        return parse_rational(value)
    if kind == "int":
        if isinstance(value, bool):
            raise InputValidationError(f"option {name!r} must be an integer")
        q = parse_rational(value)
        if q.denominator != 1:
            raise InputValidationError(f"option {name!r} must be an integer, got {value!r}")
        return int(q)
    if kind == "float":
        return parse_real(value)
    if value not in ("principal", "other"):
        raise InputValidationError(f"branch must be 'principal' or 'other', got {value!r}")
    return value


def _option_json(name: str, value):
    kind = OPTION_TYPES[name]
    if kind == "rational":
        return format_rational(value)
    return value


def _parse_complex(value) -> complex:
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(parse_real(value[0]), parse_real(value[1]))
    if isinstance(value, str):
        try:
            return complex(value.replace(" ", "").replace("i", "j"))
        except ValueError as exc:
            raise InputValidationError(f"cannot parse complex entry {value!r}") from exc
    return complex(parse_real(value))


def _square(rows, name: str) -> list:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) and len(r) == len(rows) for r in rows):
        raise InputValidationError(f"{name} must be a non-empty square array")
    return rows


@dataclass
class ProblemFile:
    """A versioned problem: exactly one of matrix, frequencies or unitary."""

    kind: str
    element: LieAlgebraElement | None = None
    frequencies: tuple[Fraction, ...] | None = None
    unitary: np.ndarray | None = None
    angles: tuple[Fraction, ...] | None = None
    options: dict = field(default_factory=dict)
    version: str = SCHEMA_VERSION

    @classmethod
    def from_json(cls, obj) -> "ProblemFile":
        if not isinstance(obj, dict):
            raise InputValidationError("problem file must be a JSON object")
        extra = set(obj) - {"version", "problem", "options"}
        if extra:
            raise InputValidationError(f"unknown top-level keys {sorted(extra)}")
        version = obj.get("version")
        if version != SCHEMA_VERSION:
            raise InputValidationError(f"unsupported version {version!r} (expected {SCHEMA_VERSION!r})")
        problem = obj.get("problem")
        if not isinstance(problem, dict) or len(problem) != 1:
            raise InputValidationError("'problem' must hold exactly one of matrix, frequencies, unitary")
        (kind, body), = problem.items()
        options_raw = obj.get("options", {})
        if not isinstance(options_raw, dict):
            raise InputValidationError("'options' must be an object")
        options = {k: _parse_option(k, v) for k, v in options_raw.items()}

        if kind == "matrix":
            if not isinstance(body, dict):
                raise InputValidationError("matrix problem must be an object with B and C")
            _square(body.get("B"), "B")
            _square(body.get("C"), "C")
            return cls("matrix", element=LieAlgebraElement.from_json(body), options=options)
        if kind == "frequencies":
            if not isinstance(body, list) or not body:
                raise InputValidationError("frequencies must be a non-empty list")
            return cls("frequencies", frequencies=tuple(parse_rational(v) for v in body), options=options)
        if kind == "unitary":
            if not isinstance(body, dict) or len(body) != 1:
                raise InputValidationError("unitary problem needs exactly one of 'entries' or 'angles'")
            if "angles" in body:
                pairs = body["angles"]
                if not isinstance(pairs, list) or not pairs:
                    raise InputValidationError("angles must be a non-empty list of [p, q] pairs")
                angles = []
                for pair in pairs:
                    if not isinstance(pair, list) or len(pair) != 2:
                        raise InputValidationError(f"angle {pair!r} must be a [p, q] pair")
                    num, den = parse_rational(pair[0]), parse_rational(pair[1])
                    if num.denominator != 1 or den.denominator != 1 or den <= 0:
                        raise InputValidationError(f"angle {pair!r} must have integer p and positive integer q")
                    angles.append(num / den)
                g = np.diag([unit(a) for a in angles])
                return cls("unitary", unitary=g, angles=tuple(angles), options=options)
            if "entries" in body:
                rows = _square(body["entries"], "entries")
                g = np.array([[_parse_complex(v) for v in row] for row in rows], dtype=complex)
                return cls("unitary", unitary=g, options=options)
            raise InputValidationError("unitary problem needs 'entries' or 'angles'")
        raise InputValidationError(f"unknown problem kind {kind!r}")

    def to_json(self) -> dict:
        if self.kind == "matrix":
            problem = {"matrix": self.element.to_json()}
        elif self.kind == "frequencies":
            problem = {"frequencies": [format_rational(v) for v in self.frequencies]}
        elif self.angles is not None:
            problem = {"unitary": {"angles": [[str(a.numerator), str(a.denominator)] for a in self.angles]}}
        else:
            problem = {"unitary": {"entries": [[complex_pair(z) for z in row] for row in self.unitary]}}
        return {
            "version": self.version,
            "problem": problem,
            "options": {k: _option_json(k, v) for k, v in self.options.items()},
        }

    def dumps(self) -> str:
        return dumps(self.to_json())

    # helpers for commands

    def lie_element(self) -> LieAlgebraElement:
        if self.kind == "matrix":
            return self.element
        if self.kind == "frequencies":
            s = [float(v) for v in self.frequencies]
            d = len(s)
            # A_c = -i diag(-s) = i diag(s)
            return from_blocks(np.zeros((d, d)), np.diag([-v for v in s]))
        raise InputValidationError("this command needs a matrix or frequencies problem")

    def rational_frequencies(self) -> RationalFrequencies:
        if self.kind == "frequencies":
            return RationalFrequencies.from_frequencies(self.frequencies)
        found = classify(
            self.lie_element(),
            max_denominator=self.options.get("max_denominator", 1000),
            tol=self.options.get("tol", 1e-9),
        )
        if found.rational is None:
            from .errors import NotDiscrete

            raise NotDiscrete("frequencies are not commensurable within the reconstruction tolerance")
        return found.rational


def _multiplicity_text(m) -> str:
    return "Infinite" if m == INFINITE else str(int(m))


def _require(options: dict, name: str):
    if name not in options:
        raise InputValidationError(f"command needs option {name!r}")
    return options[name]


def cmd_classify(pf: ProblemFile) -> dict:
    opts = pf.options
    if pf.kind == "frequencies":
        found = classify(list(pf.frequencies))
    else:
        found = classify(pf.lie_element(), max_denominator=opts.get("max_denominator", 1000), tol=opts.get("tol", 1e-9))
    out = {"kind": found.kind, "heuristic": found.heuristic}
    if found.rational is not None:
        out["generator"] = format_rational(found.generator)
        out["x"] = format_rational(found.rational.x)
        out["p"] = list(found.rational.p)
    return out


def cmd_spectrum(pf: ProblemFile) -> dict:
    rf = pf.rational_frequencies()
    cutoff = _require(pf.options, "cutoff")
    result = enumerate_point_spectrum(None, rf, cutoff, pf.options.get("n_max", 50))
    return {
        "kind": "UniformlyDiscrete",
        "generator": format_rational(result.generator),
        "eigenvalues": [{"value": format_rational(v), "multiplicity": _multiplicity_text(m)} for v, m in result.entries],
        "complete": result.complete,
    }


def cmd_multiplicity(pf: ProblemFile) -> dict:
    rf = pf.rational_frequencies()
    lam = _require(pf.options, "lambda")
    m = multiplicity(rf, lam)
    return {"lambda": format_rational(lam), "multiplicity": _multiplicity_text(m), "eigenvalue": bool(m)}


def cmd_count(pf: ProblemFile) -> dict:
    rf = pf.rational_frequencies()
    r = _require(pf.options, "r")
    hbar = pf.options.get("hbar", Fraction(1))
    n = counting_function(rf, r / hbar)
    return {"N": str(n), "r": format_rational(r), "hbar": format_rational(hbar), "E_0": format_rational(rf.ground_shift)}


def cmd_ehrhart(pf: ProblemFile) -> dict:
    rf = pf.rational_frequencies()
    poly = ehrhart_polynomial(rf.p, rf.q_lcm)
    return {
        "p": list(poly.p),
        "q": poly.q,
        "coefficients": [format_rational(c) for c in poly.coefficients],
        "volume": format_rational(poly.volume),
        "facet_lattice_volumes": [format_rational(v) for v in poly.facet_lattice_volumes],
        "facet_euclidean_volumes": list(poly.facet_euclidean_volumes),
        "lattice_half_boundary": format_rational(poly.lattice_half_boundary),
        "euclidean_half_boundary": poly.euclidean_half_boundary,
    }


def cmd_weyl(pf: ProblemFile):
    rf = pf.rational_frequencies()
    hbar = pf.options.get("hbar", Fraction(1))
    if "r" in pf.options:
        est = weyl_estimate(None, rf, hbar, pf.options["r"])
        return {
            "hbar": est.hbar,
            "r": est.r,
            "exact": str(est.exact),
            "leading": est.leading,
            "second_paper": est.second_paper,
            "second_lattice": est.second_lattice,
            "total_paper": est.total_paper,
            "total_lattice": est.total_lattice,
            "remainder_paper": est.remainder_paper,
            "remainder_lattice": est.remainder_lattice,
        }
    return remainder_scan(None, rf, hbar, pf.options.get("k_max", 200)).to_csv()


def cmd_verify_block(pf: ProblemFile) -> dict:
    A = pf.lie_element()
    tol = pf.options.get("tol", 1e-8)
    ks = [pf.options["k"]] if "k" in pf.options else range(pf.options.get("k_max", 4) + 1)
    reports = [cross_validate_block(A, k, tol).to_json() for k in ks]
    return {"reports": reports, "matched": all(r["matched"] for r in reports)}


def cmd_mu_spectrum(pf: ProblemFile) -> dict:
    if pf.kind != "unitary":
        raise InputValidationError("mu-spectrum needs a unitary problem")
    opts = pf.options
    result = mu_point_spectrum(
        pf.unitary,
        angles=pf.angles,
        max_denominator=opts.get("max_denominator", 1000),
        tol=opts.get("tol", 1e-9),
    )
    out = {
        "kind": result.kind,
        "phase_branches": [complex_pair(z) for z in result.phase_branches],
    }
    if result.kind == "FiniteGroup":
        branch = opts.get("branch", "principal")
        turns = result.element_turns(branch)
        out.update(
            q=result.q,
            p=result.p,
            branch=branch,
            phase=format_rational(result.phase_turns + (Fraction(1, 2) if branch == "other" else 0)),
            element_turns=[format_rational(t) for t in turns],
            elements=[complex_pair(unit(t)) for t in turns],
        )
    return out


HANDLERS = {
    "spectrum": cmd_spectrum,
    "classify": cmd_classify,
    "multiplicity": cmd_multiplicity,
    "count": cmd_count,
    "ehrhart": cmd_ehrhart,
    "weyl": cmd_weyl,
    "verify-block": cmd_verify_block,
    "mu-spectrum": cmd_mu_spectrum,
}


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, (InputValidationError, json.JSONDecodeError, UnicodeDecodeError, OSError)):
        return 2
    if isinstance(exc, PreconditionError):
        return 3
    if isinstance(exc, NumericalError):
        return 4
    return 1


def _report_error(exc: BaseException, stream) -> int:
    code = exit_code_for(exc)
    stream.write(dumps({"error": type(exc).__name__, "message": str(exc), "exit_code": code}) + "\n")
    return code


def load_problem(path: str | None) -> ProblemFile:
    if path in (None, "-"):
        text = sys.stdin.read()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return ProblemFile.from_json(json.loads(text))


def _flag_overrides(args) -> dict:
    pairs = {
        "cutoff": args.cutoff,
        "hbar": args.hbar,
        "k_max": args.k_max,
        "max_denominator": args.max_denominator,
        "tol": args.tol,
        "seed": args.seed,
        "branch": args.branch,
        "r": args.r,
        "lambda": args.lam,
        "k": args.k,
        "n_max": args.n_max,
    }
    return {k: _parse_option(k, v) for k, v in pairs.items() if v is not None}


def run(command: str, problem: ProblemFile, output_path: str | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        if command not in HANDLERS:
            raise InputValidationError(f"unknown command {command!r}; choose from {', '.join(COMMANDS)}")
        result = HANDLERS[command](problem)
        text = result if isinstance(result, str) else dumps(result) + "\n"
        if output_path:
            with open(output_path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            stdout.write(text)
        return 0
    except (MetaspecError, OSError, ValueError, ArithmeticError) as exc:
        return _report_error(exc, stderr)


def selftest(filter_: str | None = None, seed: int = 0, stdout=None) -> int:
    stdout = stdout or sys.stdout
    results = acceptance.run(filter_, seed=seed)
    for res in results:
        stdout.write(res.line() + "\n")
    if not results:
        stdout.write("no acceptance checks matched the filter\n")
        return 1
    failed = [r.name for r in results if not r.passed]
    stdout.write(f"{len(results) - len(failed)}/{len(results)} checks passed\n")
    if failed:
        stdout.write("FAILED: " + ", ".join(failed) + "\n")
    return 0 if not failed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="metaspec", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS + ("selftest",))
    parser.add_argument("--input", help="problem file (JSON); '-' or omitted reads stdin")
    parser.add_argument("--output", help="write the result here instead of stdout")
    parser.add_argument("--cutoff")
    parser.add_argument("--hbar")
    parser.add_argument("--k-max", dest="k_max")
    parser.add_argument("--max-denominator", dest="max_denominator")
    parser.add_argument("--tol")
    parser.add_argument("--seed")
    parser.add_argument("--branch", choices=("principal", "other"))
    parser.add_argument("--filter", help="selftest: run only checks whose name or tag contains this")
    parser.add_argument("--r", help="count/weyl: spectral threshold r")
    parser.add_argument("--lambda", dest="lam", help="multiplicity: eigenvalue to test")
    parser.add_argument("--k", help="verify-block: a single Hermite level")
    parser.add_argument("--n-max", dest="n_max", help="spectrum: window for infinite-multiplicity listings")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "selftest":
        try:
            seed = int(args.seed) if args.seed is not None else 0
        except ValueError:
            return _report_error(InputValidationError(f"seed must be an integer, got {args.seed!r}"), sys.stderr)
        return selftest(args.filter, seed=seed)
    try:
        problem = load_problem(args.input)
        problem.options.update(_flag_overrides(args))
    except (MetaspecError, OSError, ValueError) as exc:
        return _report_error(exc, sys.stderr)
    return run(args.command, problem, args.output)


if __name__ == "__main__":
    sys.exit(main())
