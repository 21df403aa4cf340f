"""Run configuration and the plain-text report format.

A report is a sequence of ``key=value`` lines.  Records are sorted by check
id, values never contain timestamps, and rationals print as ``p/q``, so two
runs with the same configuration produce identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import __version__
from .errors import InvalidParameter

N_MAX = 8
W_MAX = 6
POLE_MAX = 6

STATUSES = ("pass", "fail", "not-stabilized")

# Every check id maps to exactly one statement it verifies.
STATEMENTS: dict[str, str] = {
    "toric.smooth-fan": "smooth fan with rays (i-1, 1)",
    "toric.intersection-form": "exceptional curves form a -2 chain",
    "toric.principal-degree-zero": "principal divisors have degree zero on every curve",
    "toric.bundle-roundtrip": "bundle construction realizes any degree vector",
    "glue.monodromy-uncorrected": "uncorrected loop acts by u -> u w",
    "glue.monodromy-corrected": "corrected loop is the identity",
    "glue.monodromy-matrix": "uncorrected loop has exponent matrix [[1, 1], [0, 1]]",
    "glue.cocycle": "glued transitions satisfy the cocycle condition",
    "glue.toric-charts": "glued cover matches the toric charts",
    "paths.winding-agreement": "crossing count equals angle lift winding",
    "paths.transform-negated-winding": "transform of a path has degrees minus its winding",
    "paths.zero-section": "the straight ray maps to the trivial bundle",
    "paths.section-residency": "section lands on the fiber u v = f(z) / z",
    "paths.section-projection": "section is right inverse to the torus projection",
    "paths.section-isotropy": "section pulls back the symplectic form to zero",
    "fs.count-law": "wrapped thimbles meet in floor((j - i + k(n+1)) / n) + 1 points",
    "fs.count-law-halved": "intersection counts unchanged under halved perturbation",
    "fs.dual-cycles": "dual cycles pair to the identity matrix",
    "fs.products": "triangle counts equal polynomial multiplication",
    "fs.continuation": "wrapping once more multiplies by s = x y",
    "fs.unit": "constant intersection points act as units",
    "fs.associativity": "triangle product is associative",
    "fs.marked-point-law": "marked points inside a triangle equal the jump in ord",
    "fs.min-or-max": "marked point counts follow ord = min of exponents",
    "fs.perturbation-stability": "structure constants unchanged under halved perturbation",
    "wrapped.equivariance": "psi intertwines continuation with the structure map",
    "wrapped.multiplicative": "psi is multiplicative",
    "wrapped.index-bound": "binomial product indices stay within ord(p) + w",
    "wrapped.binomial-identity": "s^l expands in powers of s - 1 with binomial coefficients",
    "wrapped.injective": "psi is injective at each level",
    "wrapped.surjective": "every algebraic element is hit after promotion",
    "wrapped.worked-identity": "psi((xy)_0 + (xy)_1) = s for n = 1",
    "compat.filtered-dims": "localized, algebraic and toric filtered dimensions agree",
}


def fmt(value: Any) -> str:
    """Deterministic single-token rendering of a witness value."""
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, float):
        return f"{value:.3e}"
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(fmt(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ",".join(f"{k}:{fmt(v)}" for k, v in sorted(value.items())) + "}"
    return str(value)


def parse_fraction(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidParameter(f"not an exact rational: {text!r}") from exc
    return value


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    n: int = 1
    w_max: int = 2
    pole_cutoff: int = 2
    box: tuple[int, int, int, int] | None = None
    seed: int = 0
    epsilon: Fraction | None = None
    sign: int = 1
    out: str | None = None
    extra: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        if not 1 <= self.n <= N_MAX:
            raise InvalidParameter(f"--n must be in 1..{N_MAX}")
        if not 0 <= self.w_max <= W_MAX:
            raise InvalidParameter(f"--wmax must be in 0..{W_MAX}")
        if not 0 <= self.pole_cutoff <= POLE_MAX:
            raise InvalidParameter(f"--pole-cutoff must be in 0..{POLE_MAX}")
        if self.sign not in (1, -1):
            raise InvalidParameter("--sign must be +1 or -1")
        if self.epsilon is not None and self.epsilon <= 0:
            raise InvalidParameter("--epsilon must be positive")
        if self.box is not None and (self.box[0] > self.box[1] or self.box[2] > self.box[3]):
            raise InvalidParameter("--box bounds must satisfy lo <= hi")

    def echo(self) -> str:
        parts = [f"subcommand={self.subcommand}", f"n={self.n}", f"wmax={self.w_max}",
                 f"pole-cutoff={self.pole_cutoff}", f"box={fmt(self.box) if self.box else 'auto'}",
                 f"seed={self.seed}", f"epsilon={fmt(self.epsilon) if self.epsilon else 'auto'}",
                 f"sign={self.sign:+d}"]
        parts += [f"{k}={v}" for k, v in self.extra]
        return " ".join(parts)


@dataclass(frozen=True)
class Record:
    check_id: str
    status: str
    witness: dict[str, Any] = field(default_factory=dict)
    scope: str = ""

    def __post_init__(self):
        if self.check_id not in STATEMENTS:
            raise InvalidParameter(f"unknown check id {self.check_id!r}")
        if self.status not in STATUSES:
            raise InvalidParameter(f"unknown status {self.status!r}")

    def line(self) -> str:
        wit = " ".join(f"{k}={fmt(v)}" for k, v in sorted(self.witness.items()))
        head = f"record id={self.check_id}"
        if self.scope:
            head += f" scope={self.scope}"
        return (f"{head} status={self.status} statement={json.dumps(STATEMENTS[self.check_id])}"
                + (f" {wit}" if wit else ""))


def check(check_id: str, ok: bool, scope: str = "", **witness) -> Record:
    return Record(check_id, "pass" if ok else "fail", witness, scope)


@dataclass
class Report:
    config: RunConfig
    records: list[Record] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def add(self, rec: Record) -> None:
        self.records.append(rec)

    def counts(self) -> dict[str, int]:
        return {s: sum(r.status == s for r in self.records) for s in STATUSES}

    @property
    def ok(self) -> bool:
        return all(r.status != "fail" for r in self.records)

    def render(self) -> str:
        lines = [f"anmirror-report version={__version__}", f"config {self.config.echo()}"]
        lines += [f"note {json.dumps(n)}" for n in self.notes]
        for rec in sorted(self.records, key=lambda r: (r.check_id, r.scope)):
            lines.append(rec.line())
        c = self.counts()
        lines.append(f"summary pass={c['pass']} fail={c['fail']} "
                     f"not-stabilized={c['not-stabilized']} result={'pass' if self.ok else 'fail'}")
        return "\n".join(lines) + "\n"
