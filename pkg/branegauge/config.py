"""
BraneGauge Configuration
Loads settings from environment variables with sensible defaults.
"""

import os
from dataclasses import dataclass, field
from typing import Optional
from dotenv import load_dotenv

from .core.linalg import Backend

# Load .env file if present
load_dotenv()


@dataclass
class SolverConfig:
    """Newton multistart settings."""
    seeds: int
    seed: int
    tol: float
    threads: Optional[int]  # None lets the pool decide
    max_iter: int
    box: float
    cluster_radius: float = 1e-6


@dataclass
class NumericsConfig:
    """Scalar backend and floating rank decisions."""
    backend: str  # "exact" or "float"
    float_tol: float
    rank_gap: float


@dataclass
class QuadratureConfig:
    """Chern form quadrature."""
    grid: int


@dataclass
class Config:
    """Main configuration container."""
    solver: SolverConfig
    numerics: NumericsConfig
    quadrature: QuadratureConfig
    log_level: str = "INFO"

    @classmethod
    def from_env(cls) -> "Config":
        """Load configuration from environment variables."""
        threads = os.getenv("BRANE_GAUGE_THREADS")
        return cls(
            solver=SolverConfig(
                seeds=int(os.getenv("BRANE_GAUGE_SEEDS", "200")),
                seed=int(os.getenv("BRANE_GAUGE_SEED", "42")),
                tol=float(os.getenv("BRANE_GAUGE_TOL", "1e-8")),
                threads=int(threads) if threads else os.cpu_count(),
                max_iter=int(os.getenv("BRANE_GAUGE_MAX_ITER", "100")),
                box=float(os.getenv("BRANE_GAUGE_BOX", "3.0")),
                cluster_radius=float(os.getenv("BRANE_GAUGE_CLUSTER_RADIUS", "1e-6")),
            ),
            numerics=NumericsConfig(
                backend=os.getenv("BRANE_GAUGE_BACKEND", "exact").lower(),
                float_tol=float(os.getenv("BRANE_GAUGE_FLOAT_TOL", "1e-10")),
                rank_gap=float(os.getenv("BRANE_GAUGE_RANK_GAP", "1e6")),
            ),
            quadrature=QuadratureConfig(
                grid=int(os.getenv("BRANE_GAUGE_GRID", "512")),
            ),
            log_level=os.getenv("BRANE_GAUGE_LOG_LEVEL", "INFO"),
        )

    def validate(self) -> list[str]:
        """Validate configuration and return list of errors."""
        errors = []

        if self.solver.tol <= 0:
            errors.append("BRANE_GAUGE_TOL must be positive")

        if self.solver.seeds < 1:
            errors.append("BRANE_GAUGE_SEEDS must be at least 1")

        if self.solver.threads is not None and self.solver.threads < 1:
            errors.append("BRANE_GAUGE_THREADS must be at least 1")

        if self.numerics.backend not in {b.value for b in Backend}:
            errors.append(f"BRANE_GAUGE_BACKEND must be one of exact, float (got {self.numerics.backend!r})")

        if self.quadrature.grid < 2:
            errors.append("BRANE_GAUGE_GRID must be at least 2")

        return errors


@dataclass
class JobConfig:
    """
    Settings for one CLI run: environment defaults overridden by flags.
    """
    command: str
    input_path: Optional[str] = None
    output_dir: Optional[str] = None
    backend: str = "exact"
    seeds: int = 200
    seed: int = 42
    tol: float = 1e-8
    threads: Optional[int] = None
    max_iter: int = 100
    box: float = 3.0
    cluster_radius: float = 1e-6
    float_tol: float = 1e-10
    rank_gap: float = 1e6
    grid: int = 512
    options: dict = field(default_factory=dict)

    @classmethod
    def from_config(cls, command: str, config: Config, **overrides) -> "JobConfig":
        """Start from the environment configuration and apply non-None overrides."""
        job = cls(
            command=command,
            backend=config.numerics.backend,
            seeds=config.solver.seeds,
            seed=config.solver.seed,
            tol=config.solver.tol,
            threads=config.solver.threads,
            max_iter=config.solver.max_iter,
            box=config.solver.box,
            cluster_radius=config.solver.cluster_radius,
            float_tol=config.numerics.float_tol,
            rank_gap=config.numerics.rank_gap,
            grid=config.quadrature.grid,
        )
        for key, value in overrides.items():
            if value is None:
                continue
            if hasattr(job, key) and key != "options":
                setattr(job, key, value)
            else:
                job.options[key] = value
        return job

    def validate(self) -> list[str]:
        errors = []
        if self.tol <= 0:
            errors.append("tol must be positive")
        if self.seeds < 1:
            errors.append("seeds must be at least 1")
        if self.grid < 2:
            errors.append("grid must be at least 2")
        if self.backend not in {b.value for b in Backend}:
            errors.append(f"unknown backend {self.backend!r}")
        return errors


# Global config instance
_config: Optional[Config] = None


def get_config() -> Config:
    """Get the global configuration instance."""
    global _config
    if _config is None:
        _config = Config.from_env()
    return _config


def reset_config() -> None:
    """Drop the cached configuration so the next get_config() rereads the environment."""
    global _config
    _config = None
