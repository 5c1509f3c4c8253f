"""Benchmark matrix runner, aggregation and performance profiles."""

from __future__ import annotations

import csv
import hashlib
import io
import math
import statistics
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .algorithms import AlgorithmConfig
from .errors import EmptyInput, MissingCell, OrientationError, ParseError
from .exact import StaticGraph
from .io_ingest import (
    EditSequence,
    NormalizationReport,
    gen_powerlaw_graph,
    gen_random_graph,
    normalize,
    static_to_stream,
)

CSV_HEADER = ["algorithm", "instance", "repetition", "seed", "final_delta", "total_time_s", "flips", "n", "m_final"]
PROFILE_HEADER = ["algorithm", "tau", "fraction"]


@dataclass
class Instance:
    """A named, normalized update stream."""

    name: str
    seq: EditSequence
    report: NormalizationReport = field(default_factory=NormalizationReport)

    @classmethod
    def from_sequence(cls, name: str, seq: EditSequence) -> Instance:
        clean, report = normalize(seq)
        return cls(name, clean, report)

    @classmethod
    def from_static(cls, name: str, g: StaticGraph, seed: int) -> Instance:
        return cls.from_sequence(name, static_to_stream(g, seed))


@dataclass
class BenchmarkRecord:
    algorithm: str
    instance: str
    repetition: int
    seed: int
    final_delta: int
    total_time: float
    flips: int
    n: int
    m_final: int
    error: str | None = None

    def row(self) -> list[str]:
        return [
            self.algorithm,
            self.instance,
            str(self.repetition),
            str(self.seed),
            str(self.final_delta),
            repr(self.total_time),
            str(self.flips),
            str(self.n),
            str(self.m_final),
        ]


@dataclass(frozen=True)
class ProfilePoint:
    tau: float
    fraction: float


def derive_seed(base_seed: int, instance: str, repetition: int) -> int:
    """64-bit seed for one repetition, stable across runs and platforms."""
    digest = hashlib.blake2b(f"{base_seed}:{instance}:{repetition}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def run_single(
    config: AlgorithmConfig,
    instance: Instance,
    seed: int = 0,
    *,
    repetition: int = 0,
    check: bool = False,
    trace: list[int] | None = None,
) -> BenchmarkRecord:
    """Replay one instance; only the update loop is timed.

    When ``trace`` is a list, the max out-degree after every update is
    appended to it (this slows the loop and is meant for debugging).
    """
    seq = instance.seq
    alg = config.with_seed(seed).build(seq.n, check=check)
    ops = [(op.is_insert, op.u, op.v) for op in seq.ops]
    insert, delete = alg.insert, alg.delete
    error = None
    t0 = time.perf_counter()
    try:
        if trace is None:
            for is_insert, u, v in ops:
                if is_insert:
                    insert(u, v)
                else:
                    delete(u, v)
        else:
            for is_insert, u, v in ops:
                if is_insert:
                    insert(u, v)
                else:
                    delete(u, v)
                trace.append(alg.current_delta())
    except OrientationError as exc:
        error = f"{type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - t0
    return BenchmarkRecord(
        algorithm=config.label,
        instance=instance.name,
        repetition=repetition,
        seed=seed,
        final_delta=alg.current_delta(),
        total_time=elapsed,
        flips=alg.flips,
        n=seq.n,
        m_final=alg.m,
        error=error,
    )


def _run_cell(args: tuple) -> list[BenchmarkRecord]:
    config, instance, repetitions, base_seed, warmup = args
    if warmup:
        run_single(config, instance, derive_seed(base_seed, instance.name, -1), repetition=-1)
    out = []
    for rep in range(repetitions):
        seed = derive_seed(base_seed, instance.name, rep)
        out.append(run_single(config, instance, seed, repetition=rep))
    return out


def run_matrix(
    configs: Sequence[AlgorithmConfig],
    instances: Sequence[Instance],
    repetitions: int = 10,
    *,
    base_seed: int = 0,
    warmup: bool = True,
    workers: int = 1,
) -> list[BenchmarkRecord]:
    """One record per (config, instance, repetition), sorted on that key.

    Algorithm errors are captured in ``BenchmarkRecord.error`` instead of
    aborting the matrix. ``warmup`` runs one discarded repetition per cell
    first.
    """
    cells = [(c, inst, repetitions, base_seed, warmup) for c in configs for inst in instances]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_cell, cells))
    else:
        chunks = [_run_cell(cell) for cell in cells]
    records = [r for chunk in chunks for r in chunk]
    records.sort(key=lambda r: (r.algorithm, r.instance, r.repetition))
    return records


# ---- aggregation -------------------------------------------------------


def geometric_mean(values: Iterable[float]) -> float:
    values = list(values)
    if not values:
        raise EmptyInput("geometric mean of no values")
    if any(x <= 0 for x in values):
        raise ValueError("geometric mean needs positive values")
    if min(values) == max(values):
        # keeps repeated deterministic results exact (log/exp drifts by an ulp)
        return float(values[0])
    return statistics.geometric_mean(values)


def cell_value(records: Sequence[BenchmarkRecord], metric: str) -> float:
    """Collapse the repetitions of one (algorithm, instance) cell.

    Quality is the geometric mean of the final deltas (0 when the final graph
    is empty); time is the arithmetic mean.
    """
    if metric == "delta":
        deltas = [r.final_delta for r in records]
        return 0.0 if min(deltas) == 0 else geometric_mean(deltas)
    if metric == "time":
        return statistics.fmean(r.total_time for r in records)
    if metric == "flips":
        # +1 smoothing so stream cells with zero flips stay comparable
        return geometric_mean([r.flips + 1 for r in records])
    raise ValueError(f"unknown metric {metric!r}")


def value_table(records: Iterable[BenchmarkRecord], metric: str) -> dict[str, dict[str, float]]:
    cells: dict[tuple[str, str], list[BenchmarkRecord]] = defaultdict(list)
    for r in records:
        if r.error is None:
            cells[r.algorithm, r.instance].append(r)
    table: dict[str, dict[str, float]] = defaultdict(dict)
    for (alg, inst), recs in cells.items():
        table[alg][inst] = cell_value(recs, metric)
    return dict(table)


def performance_profile(table: dict[str, dict[str, float]]) -> dict[str, list[ProfilePoint]]:
    """Performance profile: fraction of instances within ``tau`` times the best.

    ``table[algorithm][instance]`` holds the value (smaller is better). One
    point is emitted at ``tau = 1`` and at every distinct ratio value/best.
    Instances whose best value is zero are skipped.
    """
    if not table:
        return {}
    instances = set().union(*(row.keys() for row in table.values()))
    for alg, row in table.items():
        missing = instances - row.keys()
        if missing:
            raise MissingCell(f"{alg} has no value for {sorted(missing)[0]}")
    best = {i: min(row[i] for row in table.values()) for i in instances}
    usable = sorted(i for i in instances if best[i] > 0)
    total = len(usable)
    out: dict[str, list[ProfilePoint]] = {}
    for alg in sorted(table):
        if not total:
            out[alg] = []
            continue
        ratios = sorted(table[alg][i] / best[i] for i in usable)
        points = []
        taus = sorted({1.0, *ratios})
        j = 0
        for tau in taus:
            while j < total and ratios[j] <= tau:
                j += 1
            points.append(ProfilePoint(tau, j / total))
        out[alg] = points
    return out


def profile_fraction(points: Sequence[ProfilePoint], tau: float) -> float:
    """Evaluate the profile step function at ``tau``."""
    frac = 0.0
    for p in points:
        if p.tau <= tau:
            frac = p.fraction
        else:
            break
    return frac


@dataclass(frozen=True)
class OptimumSummary:
    instances: int
    optimal: int
    ratio_geomean: float

    @property
    def match_rate(self) -> float:
        """Percent of instances solved to optimality."""
        return 100.0 * self.optimal / self.instances if self.instances else 0.0


def compare_to_optimum(
    records: Iterable[BenchmarkRecord], phi: dict[str, int]
) -> dict[str, OptimumSummary]:
    """Per algorithm: how often the final delta equals the optimum, and the
    geometric-mean ratio delta/phi. Instances with phi = 0 are left out."""
    table = value_table(records, "delta")
    out = {}
    for alg, row in sorted(table.items()):
        ratios = []
        optimal = 0
        for inst, value in row.items():
            p = phi.get(inst)
            if not p:
                continue
            ratios.append(value / p)
            # cells are geometric means and each repetition is >= phi
            if math.isclose(value, p):
                optimal += 1
        geo = geometric_mean(ratios) if ratios else float("nan")
        out[alg] = OptimumSummary(len(ratios), optimal, geo)
    return out


# ---- CSV ---------------------------------------------------------------


def records_to_csv(records: Iterable[BenchmarkRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        if r.error is None:
            w.writerow(r.row())
    return buf.getvalue()


def write_records_csv(records: Iterable[BenchmarkRecord], path: str | Path) -> None:
    Path(path).write_text(records_to_csv(records), encoding="utf-8")


def read_records_csv(path: str | Path) -> list[BenchmarkRecord]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != CSV_HEADER:
            raise ParseError(f"unexpected results header: {header}", 1)
        return [
            BenchmarkRecord(
                algorithm=row[0],
                instance=row[1],
                repetition=int(row[2]),
                seed=int(row[3]),
                final_delta=int(row[4]),
                total_time=float(row[5]),
                flips=int(row[6]),
                n=int(row[7]),
                m_final=int(row[8]),
            )
            for row in reader
        ]


def profile_to_csv(profile: dict[str, list[ProfilePoint]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(PROFILE_HEADER)
    for alg in sorted(profile):
        for p in profile[alg]:
            w.writerow([alg, repr(p.tau), repr(p.fraction)])
    return buf.getvalue()


# ---- pinned synthetic suite --------------------------------------------

# (name, generator, params, graph seed, stream seed)
SYNTHETIC_SUITE = [
    ("pa_2000_3_s101", "powerlaw", (2000, 3), 101, 1101),
    ("pa_2000_5_s102", "powerlaw", (2000, 5), 102, 1102),
    ("pa_3000_4_s103", "powerlaw", (3000, 4), 103, 1103),
    ("pa_3000_6_s104", "powerlaw", (3000, 6), 104, 1104),
    ("pa_4000_3_s105", "powerlaw", (4000, 3), 105, 1105),
    ("pa_4000_8_s106", "powerlaw", (4000, 8), 106, 1106),
    ("gnm_2000_8000_s201", "gnm", (2000, 8000), 201, 1201),
    ("gnm_2000_12000_s202", "gnm", (2000, 12000), 202, 1202),
    ("gnm_3000_15000_s203", "gnm", (3000, 15000), 203, 1203),
    ("gnm_3000_9000_s204", "gnm", (3000, 9000), 204, 1204),
    ("gnm_4000_20000_s205", "gnm", (4000, 20000), 205, 1205),
    ("gnm_4000_16000_s206", "gnm", (4000, 16000), 206, 1206),
]


def synthetic_suite(scale: float = 1.0) -> list[Instance]:
    """The twelve pinned synthetic instances (random insertion orders).

    ``scale`` shrinks vertex and edge counts for quick runs.
    """
    out = []
    for name, gen, (a, b), gseed, sseed in SYNTHETIC_SUITE:
        if gen == "powerlaw":
            g = gen_powerlaw_graph(max(b + 1, int(a * scale)), b, gseed)
        else:
            g = gen_random_graph(max(10, int(a * scale)), max(1, int(b * scale)), gseed)
        out.append(Instance.from_static(name, g, sseed))
    return out
