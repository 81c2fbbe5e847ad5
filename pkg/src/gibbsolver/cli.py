"""Batch front end: ``gibbsolver run <config.json> [--csv PATH] [--tol X] [--max-period N]``.

A config is a JSON object with the keys ``system``, ``potential``,
``command`` and optionally ``options``::

    {"system":    {"type": "full_shift", "n": 2},
     "potential": {"type": "constant", "c": 1.0},
     "command":   {"type": "kms"}}

Systems: ``full_shift(n)``, ``sft(matrix)``, ``circle(n, m)``.
Potentials: ``constant(c)``, ``letter_weights(weights)``,
``table(depth, values)`` with words written as digit strings (``"01"``) or
comma separated symbols, ``cosine(amplitude)`` on circles only.
Commands: ``check``, ``entropy``, ``pressure(beta)``,
``sweep(beta_from, beta_to, steps)``, ``rpf``, ``measure(depth)``,
``periodic(N)``, ``kms``. ``pressure`` and ``sweep`` report ``P(T, -beta phi)``.

The JSON report goes to stdout. Exit status is 0 on success, 2 when the
verdict is inconclusive and 1 on errors.
"""
from __future__ import annotations

import argparse
import copy
import csv
import hashlib
import json
import logging
import math
import sys as _sys
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import circle, kms, symbolic, transfer
from .errors import ConfigError, GibbsError
from .potential import LocallyConstantPotential, format_word, parse_word

logger = logging.getLogger("gibbsolver")

DEFAULT_OPTIONS = {
    "tol": 1e-10,
    "pressure_tol": 1e-9,
    "eig_tol": 1e-12,
    "max_iter": 100000,
    "max_period": 16,
    "zero_tol": 1e-9,
    "scan_range": [-50.0, 50.0],
    "scan_steps": 201,
    "word_cap": 1000000,
}

_SYSTEM_KEYS = {"full_shift": {"n"}, "sft": {"matrix"}, "circle": {"n", "m"}}
_POTENTIAL_KEYS = {"constant": {"c"}, "letter_weights": {"weights"},
                   "table": {"depth", "values"}, "cosine": {"amplitude"}}
_COMMAND_KEYS = {"check": set(), "entropy": set(), "pressure": {"beta"},
                 "sweep": {"beta_from", "beta_to", "steps"}, "rpf": set(),
                 "measure": {"depth"}, "periodic": {"N"}, "kms": set()}
_CIRCLE_COMMANDS = {"check", "entropy", "pressure", "sweep"}


@dataclass
class JobConfig:
    system: dict
    potential: dict
    command: dict
    options: dict = field(default_factory=lambda: copy.deepcopy(DEFAULT_OPTIONS))

    def to_dict(self) -> dict:
        return {"system": copy.deepcopy(self.system), "potential": copy.deepcopy(self.potential),
                "command": copy.deepcopy(self.command), "options": copy.deepcopy(self.options)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def digest(self) -> str:
        return hashlib.sha256(self.to_json().encode()).hexdigest()

    # -- materialisation --------------------------------------------------

    @property
    def is_circle(self) -> bool:
        return self.system["type"] == "circle"

    def shift_system(self) -> symbolic.ShiftSystem:
        cap = self.options["word_cap"]
        if self.system["type"] == "full_shift":
            return symbolic.full_shift(self.system["n"], cap)
        return symbolic.validate_system(len(self.system["matrix"]), self.system["matrix"], cap)

    def shift_potential(self, sys: symbolic.ShiftSystem) -> LocallyConstantPotential:
        pot = self.potential
        if pot["type"] == "constant":
            return LocallyConstantPotential.constant(sys, pot["c"])
        if pot["type"] == "letter_weights":
            return LocallyConstantPotential.letter_weights(sys, pot["weights"])
        return LocallyConstantPotential(sys, pot["depth"],
                                        {parse_word(w): v for w, v in pot["values"].items()})

    def circle_parts(self) -> tuple[circle.CircleSystem, circle.GridPotential]:
        m = self.system["m"]
        pot = self.potential
        if pot["type"] == "constant":
            grid = circle.GridPotential.constant(pot["c"], m)
        else:
            grid = circle.GridPotential.cosine(pot["amplitude"], m)
        return circle.CircleSystem(self.system["n"]), grid

    def kms_options(self) -> kms.KmsOptions:
        o = self.options
        return kms.KmsOptions(tol=o["tol"], pressure_tol=o["pressure_tol"],
                              scan_range=tuple(o["scan_range"]), scan_steps=o["scan_steps"],
                              max_period=o["max_period"], zero_tol=o["zero_tol"],
                              eig_tol=o["eig_tol"], max_iter=o["max_iter"],
                              word_cap=o["word_cap"])


# -- parsing ---------------------------------------------------------------

def _require_object(value, where: str) -> dict:
    if not isinstance(value, dict):
        raise ConfigError(f"cli: '{where}' must be a JSON object")
    return value


def _check_keys(obj: dict, allowed: set, required: set, where: str) -> None:
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise ConfigError(f"cli: unknown key(s) {unknown} in '{where}'")
    missing = sorted(required - set(obj))
    if missing:
        raise ConfigError(f"cli: missing key(s) {missing} in '{where}'")


def _typed(obj: dict, kinds: dict[str, set], where: str) -> dict:
    obj = _require_object(obj, where)
    kind = obj.get("type")
    if kind not in kinds:
        raise ConfigError(f"cli: '{where}.type' must be one of {sorted(kinds)}, got {kind!r}")
    _check_keys(obj, kinds[kind] | {"type"}, kinds[kind] | {"type"}, where)
    return obj


def _number(x, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
        raise ConfigError(f"cli: '{where}' must be a finite number, got {x!r}")
    return float(x)


def _integer(x, where: str, minimum: int) -> int:
    if isinstance(x, bool) or not isinstance(x, int) or x < minimum:
        raise ConfigError(f"cli: '{where}' must be an integer >= {minimum}, got {x!r}")
    return x


def _parse_options(raw) -> dict:
    opts = copy.deepcopy(DEFAULT_OPTIONS)
    if raw is None:
        return opts
    raw = _require_object(raw, "options")
    _check_keys(raw, set(DEFAULT_OPTIONS), set(), "options")
    for key, val in raw.items():
        if key in ("max_iter", "word_cap", "scan_steps"):
            opts[key] = _integer(val, f"options.{key}", 2 if key == "scan_steps" else 1)
        elif key == "max_period":
            opts[key] = _integer(val, "options.max_period", 1)
        elif key == "scan_range":
            if not isinstance(val, list) or len(val) != 2:
                raise ConfigError("cli: 'options.scan_range' must be a list [lo, hi]")
            lo, hi = (_number(v, "options.scan_range") for v in val)
            if not lo < hi:
                raise ConfigError("cli: 'options.scan_range' needs lo < hi")
            opts[key] = [lo, hi]
        else:
            v = _number(val, f"options.{key}")
            if v <= 0:
                raise ConfigError(f"cli: 'options.{key}' must be positive")
            opts[key] = v
    return opts


def _parse_system(raw) -> dict:
    s = _typed(raw, _SYSTEM_KEYS, "system")
    if s["type"] == "sft":
        mat = s["matrix"]
        if (not isinstance(mat, list) or not mat
                or not all(isinstance(r, list) and len(r) == len(mat) for r in mat)):
            raise ConfigError("cli: 'system.matrix' must be a square list of lists")
        for row in mat:
            for x in row:
                if isinstance(x, bool) or x not in (0, 1):
                    raise ConfigError(f"cli: 'system.matrix' entry {x!r} is not 0 or 1")
        return {"type": "sft", "matrix": [[int(x) for x in row] for row in mat]}
    out = {"type": s["type"], "n": _integer(s["n"], "system.n", 2)}
    if s["type"] == "circle":
        out["m"] = _integer(s["m"], "system.m", 2 * out["n"])
    return out


def _parse_potential(raw, system: dict) -> dict:
    p = _typed(raw, _POTENTIAL_KEYS, "potential")
    kind = p["type"]
    if system["type"] == "circle" and kind not in ("constant", "cosine"):
        raise ConfigError(f"cli: potential '{kind}' is not available on circle systems")
    if system["type"] != "circle" and kind == "cosine":
        raise ConfigError("cli: potential 'cosine' is only available on circle systems")
    if kind == "constant":
        return {"type": kind, "c": _number(p["c"], "potential.c")}
    if kind == "cosine":
        return {"type": kind, "amplitude": _number(p["amplitude"], "potential.amplitude")}
    if kind == "letter_weights":
        w = p["weights"]
        if not isinstance(w, list):
            raise ConfigError("cli: 'potential.weights' must be a list")
        return {"type": kind, "weights": [_number(x, "potential.weights") for x in w]}
    depth = _integer(p["depth"], "potential.depth", 1)
    values = _require_object(p["values"], "potential.values")
    return {"type": kind, "depth": depth,
            "values": {str(w): _number(v, f"potential.values[{w!r}]")
                       for w, v in sorted(values.items())}}


def _parse_command(raw, system: dict) -> dict:
    c = _typed(raw, _COMMAND_KEYS, "command")
    kind = c["type"]
    if system["type"] == "circle" and kind not in _CIRCLE_COMMANDS:
        raise ConfigError(f"cli: command '{kind}' is not available on circle systems")
    if kind == "pressure":
        return {"type": kind, "beta": _number(c["beta"], "command.beta")}
    if kind == "sweep":
        lo = _number(c["beta_from"], "command.beta_from")
        hi = _number(c["beta_to"], "command.beta_to")
        if not lo < hi:
            raise ConfigError("cli: sweep needs beta_from < beta_to")
        return {"type": kind, "beta_from": lo, "beta_to": hi,
                "steps": _integer(c["steps"], "command.steps", 2)}
    if kind == "measure":
        return {"type": kind, "depth": _integer(c["depth"], "command.depth", 1)}
    if kind == "periodic":
        return {"type": kind, "N": _integer(c["N"], "command.N", 1)}
    return {"type": kind}


def config_from_dict(doc: Any) -> JobConfig:
    doc = _require_object(doc, "<root>")
    _check_keys(doc, {"system", "potential", "command", "options"},
                {"system", "potential", "command"}, "<root>")
    system = _parse_system(doc["system"])
    job = JobConfig(system, _parse_potential(doc["potential"], system),
                    _parse_command(doc["command"], system), _parse_options(doc.get("options")))
    # build the objects once so matrix and table errors surface at parse time
    try:
        if job.is_circle:
            job.circle_parts()
        else:
            job.shift_potential(job.shift_system())
    except GibbsError as exc:
        raise ConfigError(f"cli: {exc}") from exc
    return job


def parse_config(text: str) -> JobConfig:
    """Parse and validate a JSON job description, filling in default options."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"cli: malformed JSON: {exc}") from exc
    return config_from_dict(doc)


# -- reports ---------------------------------------------------------------

def _canon(x):
    """Round floats to 15 significant digits so reports are byte-stable."""
    if isinstance(x, float) or isinstance(x, np.floating):
        x = float(x)
        if not math.isfinite(x):
            return None if math.isnan(x) else ("inf" if x > 0 else "-inf")
        return float(f"{x:.15g}")
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, dict):
        return {str(k): _canon(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_canon(v) for v in x]
    return x


def _kms_report_dict(rep: kms.KmsReport) -> dict:
    out = {
        "verdict": rep.verdict.value if rep.verdict else None,
        "status": rep.status.value,
        "sign_class": rep.sign_class.value if rep.sign_class else None,
        "roots": rep.roots,
        "root_brackets": [list(b) for b in rep.root_brackets],
        "bracket_used": list(rep.bracket_used) if rep.bracket_used else None,
        "unique_beta": rep.unique_beta,
        "unique_kms": rep.unique_kms,
        "entropy": rep.entropy,
        "principal_up_to_N": rep.principal_up_to_N,
        "max_period": rep.max_period,
        "violation_count": len(rep.violations),
        "violations": [{"orbit": format_word(o.representative), "period": o.period,
                        "birkhoff_sum": s} for o, s in rep.violations[:100]],
        "bowen": {"delta": rep.bowen[0], "C": rep.bowen[1]} if rep.bowen else None,
        "pressure_curve": [list(p) for p in rep.pressure_curve],
        "warnings": list(rep.warnings),
    }
    if rep.unique_beta:
        out["beta"] = rep.roots[0]
    return out


def _rpf_dict(rpf: transfer.RpfData) -> dict:
    return {"lambda": rpf.lam, "pressure": math.log(rpf.lam),
            "index": [format_word(w) for w in rpf.index],
            "h": rpf.h.tolist(), "nu": rpf.nu.tolist(),
            "right_residual": rpf.right_residual, "left_residual": rpf.left_residual,
            "iterations": rpf.iterations}


def _sweep_betas(cmd: dict) -> np.ndarray:
    return np.linspace(cmd["beta_from"], cmd["beta_to"], cmd["steps"])


def _run_shift(job: JobConfig, cmd: dict, csv_rows: list) -> tuple[dict, bool]:
    sys = job.shift_system()
    kind = cmd["type"]
    if kind == "check":
        return {"n": sys.n, "full_shift": sys.is_full, "irreducible": sys.irreducible,
                "exact": symbolic.is_exact(sys),
                "primitivity_exponent": sys.primitivity_exponent}, False
    if kind == "periodic":
        orbits = symbolic.periodic_orbits(sys, cmd["N"])
        phi = job.shift_potential(sys)
        return {"N": cmd["N"], "count": len(orbits),
                "orbits": [{"orbit": format_word(o.representative), "period": o.period,
                            "birkhoff_sum": phi.birkhoff_sum(o)} for o in orbits]}, False
    phi = job.shift_potential(sys)
    opts = job.options
    if kind == "entropy":
        return {"entropy": symbolic.entropy(sys)}, False
    if kind == "pressure":
        return {"beta": cmd["beta"],
                "pressure": kms.pressure_at(sys, phi, cmd["beta"], opts["eig_tol"])}, False
    if kind == "sweep":
        rows = [(float(b), kms.pressure_at(sys, phi, float(b), opts["eig_tol"]))
                for b in _sweep_betas(cmd)]
        csv_rows.extend(rows)
        return {"sweep": [list(r) for r in rows]}, False
    if kind == "rpf":
        rpf = transfer.rpf_eigendata(transfer.build_transfer_matrix(sys, phi),
                                     opts["eig_tol"], opts["max_iter"])
        return _rpf_dict(rpf), False
    if kind == "measure":
        rpf = transfer.rpf_eigendata(transfer.build_transfer_matrix(sys, phi),
                                     opts["eig_tol"], opts["max_iter"])
        meas = transfer.cylinder_measure(sys, phi, rpf, cmd["depth"])
        return {"depth": meas.depth, "lambda": rpf.lam,
                "masses": {format_word(w): x for w, x in meas.masses.items()}}, False
    rep = kms.classify(sys, phi, job.kms_options())
    return _kms_report_dict(rep), rep.verdict == kms.Verdict.INCONCLUSIVE


def _run_circle(job: JobConfig, cmd: dict, csv_rows: list) -> tuple[dict, bool]:
    csys, grid = job.circle_parts()
    opts = job.options
    kind = cmd["type"]
    if kind == "check":
        return {"n": csys.n, "m": grid.m, "exact": True}, False
    if kind == "entropy":
        P, err = circle.circle_pressure(csys, grid * 0.0, opts["eig_tol"], opts["max_iter"])
        return {"entropy": P, "err_estimate": err}, False
    betas = [cmd["beta"]] if kind == "pressure" else list(_sweep_betas(cmd))
    rows = []
    for b in betas:
        P, err = circle.circle_pressure(csys, grid * -float(b), opts["eig_tol"], opts["max_iter"])
        rows.append((float(b), P, err))
    if kind == "pressure":
        return {"beta": rows[0][0], "pressure": rows[0][1], "err_estimate": rows[0][2]}, False
    csv_rows.extend((b, P) for b, P, _ in rows)
    return {"sweep": [[b, P] for b, P, _ in rows],
            "err_estimates": [e for _, _, e in rows]}, False


def run(job: JobConfig, csv_path: str | None = None) -> tuple[int, dict]:
    """Execute a job; returns ``(exit_code, report)``."""
    report = {"config_hash": job.digest(), "command": job.command["type"],
              "tolerances": {k: job.options[k] for k in
                             ("tol", "pressure_tol", "eig_tol", "zero_tol", "max_period")}}
    csv_rows: list = []
    try:
        runner = _run_circle if job.is_circle else _run_shift
        result, inconclusive = runner(job, job.command, csv_rows)
    except GibbsError as exc:
        report["error"] = str(exc)
        report["error_type"] = type(exc).__name__
        return 1, _canon(report)
    report["result"] = result
    if csv_path is not None and job.command["type"] == "sweep":
        with open(csv_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["beta", "pressure"])
            for b, P in csv_rows:
                writer.writerow([f"{b:.15g}", f"{P:.15g}"])
    return (2 if inconclusive else 0), _canon(report)


def dumps_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="gibbsolver",
                                     description="Transfer-operator pressure and KMS inverse temperatures.")
    sub = parser.add_subparsers(dest="action", required=True)
    p_run = sub.add_parser("run", help="run a JSON job description")
    p_run.add_argument("config", help="path to the JSON config")
    p_run.add_argument("--csv", help="write sweep results as beta,pressure CSV")
    p_run.add_argument("--tol", type=float, help="override the root tolerance on beta")
    p_run.add_argument("--max-period", type=int, help="override the principality period bound")
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING, stream=_sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")

    try:
        with open(args.config, encoding="utf-8") as fh:
            doc = json.load(fh)
        if args.tol is not None or args.max_period is not None:
            doc = _require_object(doc, "<root>")
            opts = dict(_require_object(doc.get("options", {}), "options"))
            if args.tol is not None:
                opts["tol"] = args.tol
            if args.max_period is not None:
                opts["max_period"] = args.max_period
            doc = {**doc, "options": opts}
        job = config_from_dict(doc)
    except (OSError, json.JSONDecodeError, GibbsError) as exc:
        print(f"gibbsolver: {exc}", file=_sys.stderr)
        return 1
    code, report = run(job, args.csv)
    print(dumps_report(report))
    if "error" in report:
        print(f"gibbsolver: {report['error']}", file=_sys.stderr)
    return code


if __name__ == "__main__":
    _sys.exit(main())
