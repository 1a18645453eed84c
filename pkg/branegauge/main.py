"""
BraneGauge Main Entry Point

Batch front end: load a brane description, run one computation, write a
JSON report (plus a TSV table where the result is tabular).

    python -m branegauge.main <command> [--input FILE] [--output DIR] ...

Exit codes: 0 success, 2 validation failure, 3 malformed input,
64 unknown command or bad flags, 1 any other failure.
"""

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional
import structlog

from .config import JobConfig, get_config
from .core import cech, char_classes, projective, torus, yang_mills
from .core.errors import (
    BraneGaugeError,
    DimensionMismatchError,
    IncompatibleConnectionError,
    InvalidChainMapError,
    InvalidComplexError,
    MetricError,
    NonFlatConnectionError,
    SchemaError,
    ValidationReport,
)
from .core.linalg import Backend, MatrixAlgebra, get_algebra
from .loaders.brane_files import (
    ProjectiveBrane,
    TorusBrane,
    TorusConeBrane,
    dump_matrix,
    load_brane,
)
from .publishers.report_writer import ReportWriter, Table


# Configure structured logging
import logging
import os

log_level = os.getenv("BRANE_GAUGE_LOG_LEVEL", "INFO").upper()
logging.basicConfig(format="%(message)s", stream=sys.stderr, level=getattr(logging, log_level, logging.INFO))

structlog.configure(
    processors=[
        structlog.stdlib.filter_by_level,
        structlog.stdlib.add_logger_name,
        structlog.stdlib.add_log_level,
        structlog.stdlib.PositionalArgumentsFormatter(),
        structlog.processors.TimeStamper(fmt="iso"),
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
        structlog.processors.UnicodeDecoder(),
        structlog.dev.ConsoleRenderer(colors=False),
    ],
    wrapper_class=structlog.stdlib.BoundLogger,
    context_class=dict,
    logger_factory=structlog.stdlib.LoggerFactory(),
    cache_logger_on_first_use=True,
)

logger = structlog.get_logger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INVALID = 2
EXIT_SCHEMA = 3
EXIT_USAGE = 64

# Errors that mean the input describes an invalid brane
INVALID_INPUT_ERRORS = (
    DimensionMismatchError,
    IncompatibleConnectionError,
    InvalidChainMapError,
    InvalidComplexError,
    MetricError,
    NonFlatConnectionError,
)


@dataclass
class Outcome:
    """What a command produced."""
    report: dict
    table: Optional[Table] = None
    status: int = EXIT_OK


def _algebra(job: JobConfig, backend: Optional[str] = None) -> MatrixAlgebra:
    return get_algebra(Backend(backend or job.backend), job.float_tol, job.rank_gap)


def _load(job: JobConfig, backend: Optional[str] = None):
    if not job.input_path:
        raise SchemaError(f"{job.command} needs --input")
    return load_brane(job.input_path, _algebra(job, backend))


def _model(brane) -> str:
    if isinstance(brane, ProjectiveBrane):
        return "projective"
    if isinstance(brane, TorusBrane):
        return "torus"
    return "torus-cone"


def _require_torus(brane) -> TorusBrane:
    if not isinstance(brane, TorusBrane):
        raise SchemaError(f"expected a torus brane, got model {_model(brane)!r}")
    return brane


def _validation_outcome(command: str, model: str, report: ValidationReport) -> Outcome:
    return Outcome(
        {"command": command, "model": model, **report.to_dict()},
        status=EXIT_OK if report.valid else EXIT_INVALID,
    )


def _torus_report(brane: TorusBrane) -> ValidationReport:
    report = brane.complex.validate()
    if not report.valid:
        return report
    report.extend(torus.validate_connection(brane.complex, brane.connection))
    la = brane.complex.algebra
    for i, h in sorted(brane.metrics.items()):
        if not la.is_positive_definite(h):
            report.errors.append(f"metric in degree {i} is not Hermitian positive-definite")
    return report


def _require_valid_torus(job: JobConfig, brane: TorusBrane) -> Optional[Outcome]:
    report = _torus_report(brane)
    if report.valid:
        return None
    return _validation_outcome(job.command, "torus", report)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_validate(job: JobConfig) -> Outcome:
    brane = _load(job)
    if isinstance(brane, ProjectiveBrane):
        report = projective.validate(brane.complex)
    elif isinstance(brane, TorusBrane):
        report = _torus_report(brane)
    else:
        f = brane.map
        report = f.source.validate()
        report.extend(f.target.validate())
        if report.valid:
            report.extend(torus.validate_compatible_map(f))
    return _validation_outcome(job.command, _model(brane), report)


def cmd_gauge_exists(job: JobConfig) -> Outcome:
    if not job.input_path and "k" in job.options:
        bundle = cech.CechLineBundle(int(job.options["k"]))
        return Outcome({"command": job.command, "route": "cech", "k": bundle.k,
                        "exists": cech.connection_exists(bundle)})
    brane = _load(job, Backend.EXACT)
    if isinstance(brane, ProjectiveBrane):
        report = projective.validate(brane.complex)
        if not report.valid:
            return _validation_outcome(job.command, "projective", report)
        decision = projective.gauge_field_exists(brane.complex)
        return Outcome({"command": job.command, "route": "minimization", **decision.to_dict()})
    brane = _require_torus(brane)
    report = brane.complex.validate()
    if not report.valid:
        return _validation_outcome(job.command, "torus", report)
    compatible = torus.validate_connection(brane.complex, brane.connection)
    return Outcome({
        "command": job.command,
        "route": "constant_complex",
        "exists": True,
        "canonical_field": "zero",
        "given_connection_compatible": compatible.valid,
        "errors": compatible.errors,
    })


def cmd_gauge_space(job: JobConfig) -> Outcome:
    brane = _load(job)
    if isinstance(brane, ProjectiveBrane):
        report = projective.validate(brane.complex)
        if not report.valid:
            return _validation_outcome(job.command, "projective", report)
        space = projective.gauge_space(brane.complex)
        return Outcome({"command": job.command, "model": "projective", **space.to_dict()})
    brane = _require_torus(brane)
    report = brane.complex.validate()
    if not report.valid:
        return _validation_outcome(job.command, "torus", report)
    la = brane.complex.algebra
    space = torus.gauge_space_basis(brane.complex, brane.g)
    basis = [
        {str(i): [dump_matrix(la, a) for a in blocks] for i, blocks in sorted(xi.matrices.items())}
        for xi in space.basis
    ]
    return Outcome({
        "command": job.command,
        "model": "torus",
        "g": brane.g,
        "dimension": space.dimension,
        "endomorphisms": space.endomorphisms.result.to_dict(),
        "basis": basis,
    })


def _instance(brane: TorusBrane) -> yang_mills.YMInstance:
    complex_, connection = brane.complex, brane.connection
    if brane.metrics:
        complex_, connection = torus.unitary_frame(
            complex_, connection, brane.metrics
        )
    return yang_mills.canonical_instance(complex_, connection)


def _cluster_table(result: yang_mills.SolveResult, m: int, degrees: list[int]) -> Table:
    header = ["cluster_id"]
    for a in range(m):
        header += [f"re_lambda_{a}", f"im_lambda_{a}"]
    header += ["residual", "hessian_rank", "ym_value"] + [f"flat_{i}" for i in degrees]
    table = Table(header)
    for c in result.clusters:
        row = [c.cluster_id]
        for z in c.point:
            row += [z.real, z.imag]
        row += [c.residual, c.hessian_rank, c.ym_value] + [c.flat.get(i) for i in degrees]
        table.rows.append(row)
    return table


def cmd_ym_solve(job: JobConfig) -> Outcome:
    brane = _require_torus(_load(job))
    invalid = _require_valid_torus(job, brane)
    if invalid:
        return invalid
    instance = _instance(brane)
    polys = yang_mills.assemble(instance)
    mode = str(job.options.get("mode", "total")).replace("-", "_")
    system = yang_mills.stationarity_system(polys, mode)
    result = yang_mills.solve(
        system, job.seeds, job.seed, job.tol,
        nvars=polys.nvars, polys=polys, max_iter=job.max_iter, box=job.box, threads=job.threads,
        cluster_radius=job.cluster_radius,
    )
    count = yang_mills.count_report(result, instance.m)
    degrees = sorted(polys.per_degree)
    return Outcome(
        {
            "command": job.command,
            "mode": mode,
            "m": instance.m,
            "seeds": job.seeds,
            "seed": job.seed,
            "tol": job.tol,
            "polynomial_degrees": {str(i): p.total_degree() for i, p in polys.per_degree.items()},
            "equations": len(system),
            "solve": result.to_dict(),
            "count": count.to_dict(),
        },
        _cluster_table(result, instance.m, degrees),
    )


def _parse_lambda(raw) -> list[complex]:
    if raw is None:
        raise SchemaError("ym-eval needs --lambda")
    try:
        values = json.loads(raw) if isinstance(raw, str) else raw
        return [complex(float(re), float(im)) for re, im in values]
    except (ValueError, TypeError) as e:
        raise SchemaError(f"--lambda must be a JSON list of [re, im] pairs: {e}") from e


def cmd_ym_eval(job: JobConfig) -> Outcome:
    brane = _require_torus(_load(job))
    invalid = _require_valid_torus(job, brane)
    if invalid:
        return invalid
    lam = _parse_lambda(job.options.get("lambda"))
    instance = _instance(brane)
    if len(lam) != instance.m:
        raise SchemaError(f"--lambda has {len(lam)} entries, the gauge space has dimension {instance.m}")
    evaluation = yang_mills.evaluate(instance, lam, tol=job.tol)
    residuals = yang_mills.is_yang_mills_per_degree(instance, lam)
    table = Table(["degree", "value", "flat", "yang_mills_residual"])
    for i in sorted(evaluation.per_degree):
        table.rows.append([i, float(evaluation.per_degree[i]), evaluation.flat[i], residuals[i]])
    return Outcome(
        {
            "command": job.command,
            "m": instance.m,
            **evaluation.to_dict(),
            "yang_mills_residuals": {str(i): r for i, r in residuals.items()},
        },
        table,
    )


def cmd_euler_check(job: JobConfig) -> Outcome:
    brane = _load(job)
    if isinstance(brane, TorusConeBrane):
        f = brane.map
        report = torus.validate_compatible_map(f)
        if not report.valid:
            return _validation_outcome(job.command, "torus-cone", report)
        cone = torus.mapping_cone(f, brane.source_metrics, brane.target_metrics)
        ym_source = float(torus.brane_yang_mills(f.source, f.source_connection, brane.source_metrics))
        ym_target = float(torus.brane_yang_mills(f.target, f.target_connection, brane.target_metrics))
        ym_cone = float(torus.brane_yang_mills(cone.complex, cone.connection, cone.metrics))
        return Outcome({
            "command": job.command,
            "model": "torus-cone",
            "ym_source": ym_source,
            "ym_target": ym_target,
            "ym_cone": ym_cone,
            "residual": abs(ym_target - ym_source - ym_cone),
        })
    brane = _require_torus(brane)
    invalid = _require_valid_torus(job, brane)
    if invalid:
        return invalid
    la = brane.complex.algebra
    check = torus.euler_poincare_check(brane.complex, brane.connection)
    theta = torus.induced_connection(brane.complex, brane.connection)
    norms = torus.cohomology_norms(brane.complex, brane.connection)
    table = Table(["degree", "curvature_norm", "bianchi_residual"])
    for i in sorted(norms):
        table.rows.append([i, norms[i], torus.bianchi_residual(theta[i], la)])
    return Outcome(
        {
            "command": job.command,
            "model": "torus",
            **check.to_dict(),
            "yang_mills": float(torus.alternating_sum(norms)),
            "bianchi": {str(i): torus.bianchi_residual(theta[i], la) for i in sorted(theta)},
        },
        table,
    )


def cmd_cech(job: JobConfig) -> Outcome:
    if "k" not in job.options:
        raise SchemaError("cech needs --k")
    scale = job.options.get("metric_scale", "1")
    bundle = cech.CechLineBundle(int(job.options["k"]), metric_scale=Fraction(str(scale)))
    result = cech.analyze(bundle, job.grid)
    table = Table(["k", "residue", "coboundary", "chern_integral", "connection_exists"])
    table.rows.append([bundle.k, result.zeta.residue, result.decision.is_coboundary,
                       result.quadrature.value, result.connection_exists])
    return Outcome({"command": job.command, "exists": result.connection_exists, **result.to_dict()}, table)


def cmd_chi_check(job: JobConfig) -> Outcome:
    if job.options.get("model") == "projective":
        n, r = int(job.options.get("n", 1)), int(job.options.get("r", 1))
        ring = char_classes.CohRing(char_classes.PROJECTIVE, n)
        prediction = char_classes.predict_chi(ring, r)
        todd, todd_conjugate = char_classes.todd_top(ring)
        return Outcome({
            "command": job.command,
            "model": "projective",
            "prediction": prediction.to_dict(),
            "todd_top": str(todd),
            "todd_conjugate_top": str(todd_conjugate),
            "discrepancy": char_classes.projective_discrepancy(n, r).to_dict(),
        })
    brane = _require_torus(_load(job))
    degrees = brane.complex.degrees
    if len(degrees) != 1:
        report = ValidationReport(errors=[f"chi-check needs a single-term torus brane, got degrees {degrees}"])
        return _validation_outcome(job.command, "torus", report)
    degree = degrees[0]
    r = brane.complex.rank(degree)
    check = char_classes.torus_chi_check(
        brane.g, r, brane.connection.at(degree, brane.complex), brane.complex.algebra
    )
    table = Table(["p", "cohomology_dimension"])
    for p, d in sorted(check.cohomology.items()):
        table.rows.append([p, d])
    return Outcome({"command": job.command, "model": "torus", **check.to_dict()}, table)


COMMANDS: dict[str, Callable[[JobConfig], Outcome]] = {
    "validate": cmd_validate,
    "gauge-exists": cmd_gauge_exists,
    "gauge-space": cmd_gauge_space,
    "ym-solve": cmd_ym_solve,
    "ym-eval": cmd_ym_eval,
    "euler-check": cmd_euler_check,
    "cech": cmd_cech,
    "chi-check": cmd_chi_check,
}


def run(job: JobConfig, writer: Optional[ReportWriter] = None) -> int:
    """
    Run one command and write its report.

    Args:
        job: Validated job settings
        writer: Report destination (derived from ``job.output_dir`` when omitted)

    Returns:
        Process exit status
    """
    handler = COMMANDS.get(job.command)
    if handler is None:
        logger.error("unknown_command", command=job.command, known=sorted(COMMANDS))
        return EXIT_USAGE
    writer = writer or ReportWriter(job.output_dir)
    try:
        outcome = handler(job)
    except SchemaError as e:
        logger.error("schema_error", command=job.command, error=str(e))
        return EXIT_SCHEMA
    except INVALID_INPUT_ERRORS as e:
        logger.error("validation_failed", command=job.command, error=str(e))
        writer.write(job.command, {"command": job.command, "valid": False, "errors": [str(e)]})
        return EXIT_INVALID
    except BraneGaugeError as e:
        logger.exception("command_failed", command=job.command, error=str(e))
        return EXIT_ERROR
    writer.write(job.command, outcome.report, outcome.table)
    logger.info("command_done", command=job.command, status=outcome.status)
    return outcome.status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="branegauge", description="Holomorphic gauge fields on B-branes")
    parser.add_argument("command", help=", ".join(COMMANDS))
    parser.add_argument("--input", dest="input_path")
    parser.add_argument("--output", dest="output_dir")
    parser.add_argument("--tol", type=float)
    parser.add_argument("--seeds", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--grid", type=int)
    parser.add_argument("--backend", choices=[b.value for b in Backend])
    parser.add_argument("--mode", choices=["total", "per-degree"])
    parser.add_argument("--k", type=int)
    parser.add_argument("--metric-scale", dest="metric_scale")
    parser.add_argument("--model", choices=["projective", "torus"])
    parser.add_argument("--n", type=int)
    parser.add_argument("--r", type=int)
    parser.add_argument("--lambda", dest="lambda_")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    """Entry point."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit:
        return EXIT_USAGE
    config = get_config()
    job = JobConfig.from_config(
        args.command,
        config,
        input_path=args.input_path,
        output_dir=args.output_dir,
        tol=args.tol,
        seeds=args.seeds,
        seed=args.seed,
        grid=args.grid,
        backend=args.backend,
        mode=args.mode,
        k=args.k,
        metric_scale=args.metric_scale,
        model=args.model,
        n=args.n,
        r=args.r,
        **{"lambda": args.lambda_},
    )
    errors = config.validate() + job.validate()
    if errors:
        for error in errors:
            logger.error("config_error", message=error)
        return EXIT_USAGE
    try:
        return run(job)
    except KeyboardInterrupt:
        logger.info("branegauge_interrupted")
        return EXIT_ERROR
    except Exception as e:
        logger.exception("branegauge_fatal_error", error=str(e))
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
