"""Benchmark harness: time solve cells over a grid and report c = T*p/n^3.

The grid comes from a JSON config; each cell gets one warm-up plus R timed
repetitions (median reported).  Failed cells are recorded with an error
status and the run continues.
"""

import csv
import json
import statistics
import time
from dataclasses import dataclass, field

from .solve import SolveOptions, run_solver
from .factorization import factorize_hermitian_indefinite, order_by_inertia
from .rotations import Tolerances
from .testmat import EigSpec, generate_test_matrix

CSV_HEADER = ("variant", "strategy", "scalar", "n", "p", "nt_outer",
              "nt_inner", "sweeps", "rotations", "time_s", "c", "status")


@dataclass
class BenchRecord:
    variant: str
    strategy: str
    scalar: str
    n: int
    p: int
    nt_outer: int
    nt_inner: int
    sweeps: int = 0
    rotations: int = 0
    time_s: float = 0.0
    c: float = 0.0
    status: str = "ok"

    def row(self):
        return [self.variant, self.strategy, self.scalar, self.n, self.p,
                self.nt_outer, self.nt_inner, self.sweeps, self.rotations,
                f"{self.time_s:.6g}", f"{self.c:.6g}", self.status]


@dataclass
class BenchGrid:
    sizes: list
    workers: list = field(default_factory=lambda: [1])
    variants: list = field(default_factory=lambda: ["3F"])
    strategies: list = field(default_factory=lambda: ["modulus"])
    inner_nt: list = field(default_factory=lambda: [32])
    nt_outer: int = 64
    reps: int = 3
    seed: int = 0
    complex_scalars: bool = False
    max_sweeps: int = 30

    @classmethod
    def from_json(cls, path):
        with open(path) as fh:
            raw = json.load(fh)
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown grid keys: {sorted(unknown)}")
        if "sizes" not in raw:
            raise ValueError("grid config needs a 'sizes' list")
        return cls(**raw)

    def cells(self):
        for n in self.sizes:
            for p in self.workers:
                for variant in self.variants:
                    for strategy in self.strategies:
                        for nt in self.inner_nt:
                            yield n, p, variant, strategy, nt


def _time_cell(G, J, opts, reps):
    """One warm-up plus ``reps`` timed repetitions; median time."""
    times = []
    info = None
    for k in range(reps + 1):
        t0 = time.perf_counter()
        _, info = run_solver(G.copy(order="F"), J, opts)
        dt = time.perf_counter() - t0
        if k > 0:
            times.append(dt)
    return statistics.median(times), info


def run_bench(grid: BenchGrid, progress=None):
    records = []
    factors = {}
    for n, p, variant, strategy, nt in grid.cells():
        scalar = "complex128" if grid.complex_scalars else "real64"
        rec = BenchRecord(variant=variant, strategy=strategy, scalar=scalar,
                          n=n, p=p, nt_outer=grid.nt_outer, nt_inner=nt)
        try:
            if n not in factors:
                spec = EigSpec(mode="log_uniform", lo=1e-2, hi=1.0,
                               neg_fraction=0.5, seed=grid.seed)
                H = generate_test_matrix(n, spec, grid.complex_scalars)
                factors[n] = order_by_inertia(factorize_hermitian_indefinite(H))
            f = factors[n]
            opts = SolveOptions(
                variant=variant, strategy=strategy, p=p,
                nt_outer=grid.nt_outer, inner_nt=nt,
                tol=Tolerances(max_sweeps=grid.max_sweeps),
            )
            rec.time_s, info = _time_cell(f.G, f.J, opts, grid.reps)
            rec.sweeps = info.sweeps
            rec.rotations = info.rotations
            rec.c = rec.time_s * p / float(n) ** 3
            if not info.converged:
                rec.status = "non-convergence"
        except Exception as exc:  # noqa: BLE001 - cell failure must not stop the grid
            rec.status = f"error: {type(exc).__name__}: {exc}"
        records.append(rec)
        if progress is not None:
            progress(rec)
    return records


def write_csv(path, records):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_HEADER)
        for rec in records:
            w.writerow(rec.row())
