"""End-to-end drivers tying the modules together.

All Monte Carlo work is streamed in contiguous trajectory blocks so that
memory stays bounded and results are bit-identical for any worker count:
each block is a pure function of (seeds, block window), and blocks are
reduced in a fixed order.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import RunConfig
from .errors import ConfigError
from .faker import (PatternSet, PatternSource, generate_classical_patterns,
                    read_patterns, write_patterns)
from .gcp import (GcpDistribution, GcpSpec, bin_patterns, block_bounds,
                  check_exponent_guard, distribution_from_block_sums,
                  fourier_block_sum, partition_modes)
from .network import TransmissionMatrix
from .oracle import exact_gcp, output_covariance
from .sampler import (Representation, click_moments, draw_input_ensemble,
                      propagate)
from .states import GaussianModeMoments, StateKind, derive_moments
from .stats import TestReport, compare_report

MODES = ("simulate", "fake", "compare", "oracle", "permtest")

# single-letter theory labels for the comparison table
_THEORY_LABEL = {StateKind.PURE_SQUEEZED: "I", StateKind.THERMALIZED: "T"}


def _map_blocks(work, bounds, threads: int):
    if threads <= 1:
        return [work(b) for b in bounds]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(work, bounds))


def simulate_distribution(moments: GaussianModeMoments, tm: TransmissionMatrix,
                          spec: GcpSpec, ensembles: int, blocks: int, seed: int,
                          representation: Representation,
                          threads: int = 1) -> GcpDistribution:
    """Streamed equivalent of draw -> propagate -> click_moments -> simulate_gcp.

    Block boundaries depend only on (ensembles, blocks), so output is
    bit-identical for any thread count.
    """
    bounds = block_bounds(ensembles, blocks)

    def work(bound):
        a, b = bound
        ens = draw_input_ensemble(moments, representation, b - a, seed,
                                  first_trajectory=a)
        cm = click_moments(propagate(ens, tm))
        check_exponent_guard(cm.n_prime)
        return fourier_block_sum(1.0 - cm.pi1, cm.pi1, spec)

    sums = _map_blocks(work, bounds, threads)
    return distribution_from_block_sums(spec, sums, [b - a for a, b in bounds])


def fake_pattern_set(moments: GaussianModeMoments, tm: TransmissionMatrix,
                     count: int, ensemble_seed: int, faker_seed: int,
                     block_size: int = 262144, threads: int = 1,
                     metadata: dict | None = None) -> PatternSet:
    """Streamed classical pattern generation: one pattern per trajectory."""
    bounds = [(a, min(a + block_size, count)) for a in range(0, count, block_size)]

    def work(bound):
        a, b = bound
        ens = draw_input_ensemble(moments, Representation.DIAGONAL_P, b - a,
                                  ensemble_seed, first_trajectory=a)
        out = propagate(ens, tm)
        return generate_classical_patterns(out, faker_seed, first_trajectory=a).patterns

    bits = np.vstack(_map_blocks(work, bounds, threads))
    md = {"ensemble_seed": ensemble_seed, "faker_seed": faker_seed}
    if metadata:
        md.update(metadata)
    return PatternSet(mode_count=tm.dim_out, patterns=bits,
                      source=PatternSource.CLASSICAL_FAKE, metadata=md)


@dataclass
class PipelineResult:
    artifacts: list[Path]
    reports: list[TestReport]


def _empirical_patterns(config: RunConfig, tm, moments, threads) -> tuple[PatternSet, str]:
    if config.patterns_file is not None:
        return read_patterns(config.base_dir / config.patterns_file), "E"
    ps = fake_pattern_set(moments, tm, config.fake_patterns,
                          config.seed_ensemble, config.seed_faker,
                          threads=threads)
    return ps, "C"


def run_pipeline(config: RunConfig, mode: str, threads: int = 1,
                 out_dir: Path | None = None) -> PipelineResult:
    """Execute one CLI mode and write its artifacts.

    simulate -> GCP JSON/CSV; fake -> pattern file; compare -> TestReport JSON
    and table on stdout; oracle -> exact GCP JSON/CSV; permtest -> one report
    per random partition plus a Z summary.
    """
    if mode not in MODES:
        raise ConfigError(f"unknown mode {mode!r}; expected one of {MODES}")
    out = Path(out_dir) if out_dir is not None else config.base_dir / config.outputs
    out.mkdir(parents=True, exist_ok=True)
    provenance = {"config_hash": config.config_hash}
    moments = derive_moments(config.state)
    tm = config.transmission()
    artifacts: list[Path] = []
    reports: list[TestReport] = []

    if mode == "simulate":
        dist = simulate_distribution(moments, tm, config.gcp_spec(),
                                     config.ensembles, config.blocks,
                                     config.seed_ensemble,
                                     config.representation, threads)
        j, c = out / "gcp.json", out / "gcp.csv"
        dist.to_json(j, extra=provenance)
        dist.to_csv(c, header_comment=f"config_hash={config.config_hash}")
        artifacts += [j, c]

    elif mode == "fake":
        ps = fake_pattern_set(moments, tm, config.fake_patterns,
                              config.seed_ensemble, config.seed_faker,
                              threads=threads)
        p = out / "patterns.txt"
        write_patterns(p, ps, header=provenance)
        artifacts.append(p)

    elif mode == "compare":
        spec = config.gcp_spec()
        theory = simulate_distribution(moments, tm, spec, config.ensembles,
                                       config.blocks, config.seed_ensemble,
                                       config.representation, threads)
        patterns, label = _empirical_patterns(config, tm, moments, threads)
        empirical = bin_patterns(patterns, spec)
        report = compare_report(empirical, theory,
                                (label, _THEORY_LABEL.get(config.state.kind, "S")))
        p = out / "report.json"
        report.to_json(p, extra=provenance)
        print(report.format_table())
        artifacts.append(p)
        reports.append(report)

    elif mode == "oracle":
        cov = output_covariance(moments, tm)
        dist = exact_gcp(cov, config.gcp_spec())
        j, c = out / "exact_gcp.json", out / "exact_gcp.csv"
        dist.to_json(j, extra=provenance)
        dist.to_csv(c, header_comment=f"config_hash={config.config_hash}")
        artifacts += [j, c]

    elif mode == "permtest":
        n_tests = config.n_permutation_tests
        if n_tests < 1:
            raise ConfigError("n_permutation_tests must be >= 1")
        patterns, label = _empirical_patterns(config, tm, moments, threads)
        theory_label = _THEORY_LABEL.get(config.state.kind, "S")
        seen = set()
        z_values = []
        for i in range(n_tests):
            spec = partition_modes(config.state.modes, config.gcp_dimension,
                                   config.seed_partition + i)
            seen.add(spec.subsets)
            theory = simulate_distribution(moments, tm, spec, config.ensembles,
                                           config.blocks, config.seed_ensemble,
                                           config.representation, threads)
            report = compare_report(bin_patterns(patterns, spec), theory,
                                    (label, theory_label))
            p = out / f"report_{i:03d}.json"
            report.to_json(p, extra={**provenance,
                                     "partition": [list(s) for s in spec.subsets]})
            artifacts.append(p)
            reports.append(report)
            z_values.append(report.z_score)
        summary = out / "permtest_summary.json"
        _write_summary(summary, z_values, len(seen), provenance)
        artifacts.append(summary)
        print(f"permtest: {n_tests} partitions ({len(seen)} distinct), "
              f"Z mean {np.mean(z_values):.3f}, min {min(z_values):.3f}, "
              f"max {max(z_values):.3f}")

    return PipelineResult(artifacts=artifacts, reports=reports)


def _write_summary(path: Path, z_values, distinct: int, provenance: dict) -> None:
    import json
    with open(path, "w") as fh:
        json.dump({**provenance,
                   "n_tests": len(z_values),
                   "distinct_partitions": distinct,
                   "z_values": z_values,
                   "z_mean": float(np.mean(z_values)),
                   "z_std": float(np.std(z_values))}, fh)
