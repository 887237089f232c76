"""
Verification runner behind the management commands.

A run loads one geometry, builds the cover and both complexes, executes the
suites selected by the mode in a fixed order and writes a JSON report (plus
optional CSV and SVG). Reports carry no timestamps so that identical
configurations produce identical files.
"""

import hashlib
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Literal, Optional, Sequence

import pandas as pd
from django.conf import settings
from django.db import transaction
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator
from sympy import QQ

from apps.cech.complex import VERIFIED, nerve_complex, truncate
from apps.cech.complex import assemble as assemble_cech
from apps.cochain.bounds import bound_constants
from apps.cochain.xi import XiConfig, XiMap, xi_apply
from apps.core.complexes import betti_numbers, total_complex, verify_double_complex
from apps.core.exceptions import DerhamError, ParseError
from apps.core.rationals import format_rational, parse_rational
from apps.forms.polyform import GRADED, UNIFORM
from apps.geometry.cover import CoverArrangement, build_cover, validate_cover_assumptions
from apps.geometry.loader import load_geometry
from apps.geometry.permissibility import validate_permissibility
from apps.geometry.simplices import SimplicialGeometry, euler_characteristic, format_multi_index
from apps.simplicial.complex import assemble as assemble_simplicial

from .render import render_document
from .schema import validate_report

logger = logging.getLogger(__name__)

MODES = ("verify", "betti", "bounds", "render", "all")

PASS = "pass"
FAIL = "fail"
ERROR = "error"

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_LOAD_ERROR = 2

SUITES = {
    "verify": ("geometry", "cover", "axioms", "xi", "truncation", "cancellation"),
    "bounds": ("geometry", "cover", "bounds"),
    "betti": ("geometry", "cover", "betti"),
    "render": ("geometry", "cover"),
    "all": ("geometry", "cover", "axioms", "xi", "truncation", "cancellation", "bounds", "betti"),
}


class RunConfig(BaseModel):
    """Options of one run; missing values fall back to the DERHAM_* settings."""

    model_config = ConfigDict(frozen=True)

    geometry_path: str
    epsilon: str = "1/10"
    degree: int = Field(3, ge=0)
    samples: int = Field(200, ge=0)
    seed: int = 0
    value_range: int = Field(100, ge=1)
    mode: Literal["verify", "betti", "bounds", "render", "all"] = "verify"
    weighted: bool = False
    untruncated: bool = False
    family: Literal["uniform", "graded"] = UNIFORM
    report_path: Optional[str] = None
    csv_path: Optional[str] = None
    svg_path: Optional[str] = None

    @field_validator("epsilon", mode="before")
    @classmethod
    def epsilon_is_positive_rational(cls, value):
        try:
            parsed = parse_rational(value)
        except ParseError as exc:
            raise ValueError(str(exc)) from exc
        if parsed <= 0:
            raise ValueError("epsilon must be positive")
        return format_rational(parsed)

    @property
    def epsilon_value(self):
        return parse_rational(self.epsilon)

    @classmethod
    def from_options(cls, **options) -> "RunConfig":
        """Build from command options, filling gaps from settings."""
        defaults = {
            "epsilon": settings.DERHAM_DEFAULT_EPSILON,
            "degree": settings.DERHAM_DEGREE_CAP,
            "samples": settings.DERHAM_SAMPLE_COUNT,
            "seed": settings.DERHAM_SEED,
            "value_range": settings.DERHAM_SAMPLE_RANGE,
            "family": settings.DERHAM_POLYNOMIAL_FAMILY,
        }
        values = {**defaults, **{k: v for k, v in options.items() if v is not None}}
        try:
            return cls.model_validate(values)
        except ValidationError as exc:
            error = exc.errors()[0]
            where = ".".join(str(part) for part in error["loc"])
            raise ParseError(f"invalid option {where}: {error['msg']}") from exc


@dataclass
class CheckRecord:
    name: str
    bigrade: str = ""
    status: str = PASS
    witness: Optional[str] = None
    values: Dict[str, object] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self) -> Dict[str, object]:
        return {
            "check": self.name,
            "bigrade": self.bigrade,
            "status": self.status,
            "witness": self.witness,
            "values": self.values,
        }


@dataclass
class Report:
    environment: Dict[str, object]
    checks: List[CheckRecord] = field(default_factory=list)
    load_error: bool = False

    @property
    def passed(self) -> bool:
        return not self.load_error and all(check.passed for check in self.checks)

    @property
    def exit_status(self) -> int:
        if self.load_error:
            return EXIT_LOAD_ERROR
        return EXIT_OK if self.passed else EXIT_FAILED

    def add(self, name: str, passed: bool, bigrade: str = "", witness: Optional[str] = None,
            **values) -> CheckRecord:
        record = CheckRecord(name, bigrade, PASS if passed else FAIL, witness, values)
        self.checks.append(record)
        return record

    def error(self, name: str, exc: Exception, bigrade: str = "") -> CheckRecord:
        record = CheckRecord(name, bigrade, ERROR, f"{type(exc).__name__}: {exc}")
        self.checks.append(record)
        return record

    def failed(self) -> List[CheckRecord]:
        return [check for check in self.checks if not check.passed]

    def to_dict(self) -> Dict[str, object]:
        return {
            "environment": self.environment,
            "checks": [check.to_dict() for check in self.checks],
            "passed": self.passed,
            "exit_status": self.exit_status,
        }

    def to_json(self) -> str:
        document = self.to_dict()
        validate_report(document)
        return json.dumps(document, indent=2, sort_keys=True) + "\n"

    def to_frame(self) -> pd.DataFrame:
        rows = [
            {
                "check": check.name,
                "bigrade": check.bigrade,
                "status": check.status,
                "value": _flatten_values(check),
            }
            for check in self.checks
        ]
        return pd.DataFrame(rows, columns=["check", "bigrade", "status", "value"])


def _flatten_values(check: CheckRecord) -> str:
    parts = []
    for key in sorted(check.values):
        value = check.values[key]
        if isinstance(value, list):
            value = "(" + ",".join(value) + ")"
        parts.append(f"{key}={value}")
    if check.witness:
        parts.append(f"witness={check.witness}")
    return ";".join(parts)


def rat(value) -> str:
    return format_rational(value)


def ints(values: Sequence[int]) -> List[str]:
    return [str(int(v)) for v in values]


def unit_vector(size: int, position: int) -> List[object]:
    vector = [QQ(0)] * size
    vector[position] = QQ(1)
    return vector


class VerificationRunner:
    """Runs the suites of one RunConfig and assembles the report."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.geometry: Optional[SimplicialGeometry] = None
        self.arrangement: Optional[CoverArrangement] = None
        self.xi_config: Optional[XiConfig] = None
        self.report = Report(self._environment())
        self.logger = logging.getLogger(f"{__name__}.VerificationRunner")

    def _environment(self) -> Dict[str, object]:
        path = Path(self.cfg.geometry_path)
        try:
            digest = hashlib.sha256(path.read_bytes()).hexdigest()
        except OSError:
            digest = ""
        return {
            "mode": self.cfg.mode,
            "seed": self.cfg.seed,
            "degree": self.cfg.degree,
            "epsilon": rat(self.cfg.epsilon_value),
            "geometry": path.name,
            "geometry_hash": digest,
            "family": self.cfg.family,
            "weighted": self.cfg.weighted,
            "samples": self.cfg.samples,
        }

    def run(self) -> Report:
        self.logger.info("Starting %s run on %s", self.cfg.mode, self.cfg.geometry_path)
        if not self._load():
            return self._finish()
        suites: Dict[str, Callable[[], None]] = {
            "geometry": self.check_geometry,
            "cover": self.check_cover,
            "axioms": self.check_axioms,
            "xi": self.check_xi,
            "truncation": self.check_truncation,
            "cancellation": self.check_cancellation,
            "bounds": self.check_bounds,
            "betti": self.check_betti,
        }
        for suite in SUITES[self.cfg.mode]:
            if suite != "geometry" and self.arrangement is None:
                break
            try:
                suites[suite]()
            except DerhamError as exc:
                self.logger.error("Suite %s aborted: %s", suite, exc)
                self.report.error(f"{suite}.suite", exc)
        if self.cfg.svg_path or self.cfg.mode == "render":
            self.render()
        return self._finish()

    def _load(self) -> bool:
        try:
            text = Path(self.cfg.geometry_path).read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            self.logger.error("Cannot read %s: %s", self.cfg.geometry_path, exc)
            self.report.error("geometry.load", ParseError(f"cannot read {self.cfg.geometry_path}: {exc}"))
            self.report.load_error = True
            return False
        try:
            self.geometry = load_geometry(text)
        except DerhamError as exc:
            self.logger.error("Cannot load %s: %s", self.cfg.geometry_path, exc)
            self.report.error("geometry.load", exc)
            self.report.load_error = True
            return False
        return True

    # -- suites in catalogue order

    def check_geometry(self) -> None:
        permissibility = validate_permissibility(self.geometry)
        first = permissibility.first()
        self.report.add(
            "geometry.permissible",
            permissibility.passed,
            witness=f"{first.rule} at {first.simplex}: {first.detail}" if first else None,
            violations=str(len(permissibility.violations)),
        )
        if not permissibility.passed:
            return
        try:
            self.arrangement = build_cover(self.geometry, self.cfg.epsilon_value)
        except DerhamError as exc:
            self.report.error("cover.build", exc)
            return
        self.xi_config = XiConfig(
            self.geometry, self.arrangement, self.cfg.degree, self.cfg.weighted, self.cfg.family
        )

    def check_cover(self) -> None:
        assumptions = validate_cover_assumptions(self.arrangement)
        details = "; ".join(assumptions.details) or None
        for name, passed in assumptions.checks.items():
            self.report.add(f"cover.{name}", passed, witness=None if passed else details)

    def check_axioms(self) -> None:
        for name, complex_ in (
            ("axioms.simplicial", self.xi_config.simplicial.assembled),
            ("axioms.cech", self.xi_config.cech.assembled),
        ):
            result = verify_double_complex(complex_)
            failure = result.failure
            self.report.add(
                name,
                result.passed,
                bigrade=failure.bigrade.label() if failure else "",
                witness=f"{failure.rule} identity, basis column {failure.witness}" if failure else None,
                dims=ints(complex_.dim(b) for b in complex_.bigrades()),
            )

    def check_xi(self) -> None:
        xi = XiMap(self.xi_config)
        for check in xi.verify_cochain_property().checks:
            self.report.add(
                f"xi.{check.relation}",
                check.passed,
                bigrade=check.target.label(),
                witness=None if check.passed else f"basis column {check.witness} of S^{check.source.label()}",
            )
        for check in xi.check_injectivity().checks:
            self.report.add("xi.injective", check.passed, bigrade=check.bigrade.label())
        for check in xi.check_subcomplex().checks:
            self.report.add(f"xi.{check.relation}", check.passed, bigrade=check.bigrade.label())
        self._check_weak_differentiability()

    def _check_weak_differentiability(self) -> None:
        s = self.xi_config.simplicial
        for b in s.bigrades():
            block = s.basis[b]
            broken = None
            for k in range(len(block)):
                image = xi_apply(s.element(b, unit_vector(len(block), k)), self.xi_config)
                if any(status != VERIFIED for status in image.status.values()):
                    broken = block.labels()[k]
                    break
            self.report.add("xi.weakly_differentiable", broken is None, bigrade=b.label(), witness=broken)

    def check_truncation(self) -> None:
        for check in XiMap(self.xi_config).verify_truncation().checks:
            self.report.add(
                f"truncation.{check.relation}",
                check.passed,
                bigrade=check.bigrade.label(),
                witness=None if check.witness is None else f"basis column {check.witness}",
            )

    def check_cancellation(self) -> None:
        xi = XiMap(self.xi_config)
        s = self.xi_config.simplicial
        for b in s.bigrades():
            block = s.basis[b]
            witness, count = None, 0
            for k in range(len(block)):
                result = xi.verify_weak_derivative_cancellation(
                    s.element(b, unit_vector(len(block), k)), self.cfg.degree
                )
                count += len(result.residuals)
                failure = result.first_failure()
                if failure is not None and witness is None:
                    witness = (
                        f"{block.labels()[k]} across {format_multi_index(failure.lower)}|"
                        f"{format_multi_index(failure.upper)} against {failure.test_form}"
                    )
            self.report.add("cancellation", witness is None, bigrade=b.label(), witness=witness,
                            interface_integrals=str(count))

    def check_bounds(self) -> None:
        estimate = bound_constants(self.xi_config, self.cfg.samples, self.cfg.seed, self.cfg.value_range)
        values = {
            "c1_squared": rat(estimate.c1_squared),
            "c2_squared": rat(estimate.c2_squared),
            "lower": rat(estimate.lower),
            "upper": rat(estimate.upper),
            "samples": str(len(estimate.sample_ratios)),
            "skipped": str(estimate.skipped),
            "violations": str(len(estimate.violations())),
        }
        if estimate.extremes is not None:
            values["min_ratio"], values["max_ratio"] = (rat(v) for v in estimate.extremes)
        violations = estimate.violations()
        self.report.add(
            "bounds.sandwich",
            estimate.passed,
            witness=f"ratio {rat(violations[0])} outside [lower, upper]" if violations else None,
            **values,
        )

    def check_betti(self) -> None:
        n = self.geometry.ambient_dim
        nerve = betti_numbers(total_complex(nerve_complex(self.arrangement)))
        nerve = (nerve + [0] * (n + 1))[: n + 1]
        self.report.add("betti.nerve", True, betti=ints(nerve))

        per_degree: Dict[str, List[str]] = {}
        r = self.cfg.degree
        while True:
            simplicial = betti_numbers(total_complex(assemble_simplicial(self.geometry, r, GRADED)))
            cech = betti_numbers(truncate(assemble_cech(self.arrangement, r, GRADED), n))
            per_degree[f"simplicial_r{r}"] = ints(simplicial)
            per_degree[f"cech_r{r}"] = ints(cech)
            agree = simplicial == cech == nerve
            if agree or r + 1 > settings.DERHAM_MAX_BETTI_DEGREE:
                break
            self.logger.warning("Betti numbers disagree at r=%d, retrying at r=%d", r, r + 1)
            r += 1

        self.report.add("betti.simplicial", True, betti=ints(simplicial), degree=str(r))
        self.report.add("betti.cech", True, betti=ints(cech), degree=str(r))
        if self.cfg.untruncated:
            full = betti_numbers(total_complex(assemble_cech(self.arrangement, r, GRADED)))
            self.report.add("betti.cech_untruncated", True, betti=ints(full), degree=str(r))
        self.report.add(
            "betti.agree",
            agree,
            witness=None if agree else f"simplicial {simplicial}, cech {cech}, nerve {nerve}",
            **per_degree,
        )
        euler = euler_characteristic(self.geometry)
        alternating = sum((-1) ** k * b for k, b in enumerate(simplicial))
        self.report.add(
            "betti.euler",
            euler == alternating,
            witness=None if euler == alternating else f"V-E+F={euler}, alternating sum={alternating}",
            euler=str(euler),
            alternating_sum=str(alternating),
        )

    def render(self) -> None:
        try:
            svg = render_document(self.geometry, self.arrangement)
        except DerhamError as exc:
            self.report.error("render.svg", exc)
            return
        pieces = len(self.arrangement.tilde_cells) if self.arrangement is not None else 0
        self.report.add("render.svg", True, pieces=str(pieces))
        if self.cfg.svg_path:
            Path(self.cfg.svg_path).write_text(svg)

    # -- output

    def _finish(self) -> Report:
        report = self.report
        if self.cfg.report_path:
            Path(self.cfg.report_path).write_text(report.to_json())
        if self.cfg.csv_path:
            report.to_frame().to_csv(self.cfg.csv_path, index=False)
        if settings.DERHAM_PERSIST_RUNS:
            self._persist(report)
        self.logger.info(
            "Finished %s run: %d checks, %d failed, exit %d",
            self.cfg.mode, len(report.checks), len(report.failed()), report.exit_status,
        )
        return report

    def _persist(self, report: Report) -> None:
        from .models import CheckResult, VerificationRun

        with transaction.atomic():
            run = VerificationRun.objects.create(
                mode=self.cfg.mode,
                geometry_name=self.geometry.name if self.geometry else "",
                geometry_hash=report.environment["geometry_hash"],
                epsilon=report.environment["epsilon"],
                degree_cap=self.cfg.degree,
                seed=self.cfg.seed,
                weighted=self.cfg.weighted,
                exit_status=report.exit_status,
                report=report.to_dict(),
            )
            CheckResult.objects.bulk_create([
                CheckResult(
                    run=run,
                    position=position,
                    name=check.name,
                    bigrade=check.bigrade,
                    status=check.status,
                    witness=check.witness or "",
                    values=check.values,
                )
                for position, check in enumerate(report.checks)
            ])


def run(cfg: RunConfig) -> Report:
    return VerificationRunner(cfg).run()


def expected_check_names(mode: str) -> List[str]:
    """Check-name prefixes a run in ``mode`` produces, in catalogue order."""
    if mode not in MODES:
        raise ParseError(f"unknown mode {mode!r}")
    return list(SUITES[mode])
