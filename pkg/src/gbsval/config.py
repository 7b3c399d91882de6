"""Run configuration: a small TOML file with fixed key names.

Example:

    ensembles = 1200000
    blocks = 100
    outputs = "out"
    representation = "diagonal_P"
    fake_patterns = 4000000

    [state]
    kind = "thermal"
    r = 1.0
    modes = 20

    [network]
    haar_seed = 42
    t = 0.5

    [gcp]
    d = 1

    [seeds]
    ensemble = 1
    faker = 2
    partition = 3

All seeds are explicit; there is no wall-clock seeding anywhere.
"""

from __future__ import annotations

import hashlib

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .gcp import GcpSpec, partition_modes
from .network import (TransmissionMatrix, generate_haar_unitary, load_matrix,
                      make_transmission)
from .sampler import Representation
from .states import GaussianInputSpec, StateKind


@dataclass(frozen=True)
class RunConfig:
    state: GaussianInputSpec
    haar_seed: int | None
    matrix_file: str | None
    t: float
    gcp_dimension: int
    gcp_subsets: tuple[tuple[int, ...], ...] | None
    gcp_permutation_seed: int | None
    n_permutation_tests: int
    ensembles: int
    blocks: int
    fake_patterns: int
    representation: Representation
    seed_ensemble: int
    seed_faker: int
    seed_partition: int
    outputs: Path
    patterns_file: str | None
    config_hash: str
    base_dir: Path = field(default_factory=Path)

    def transmission(self) -> TransmissionMatrix:
        if self.matrix_file is not None:
            entries = load_matrix(self.base_dir / self.matrix_file)
            base = TransmissionMatrix(entries=entries, check_physical=False)
        else:
            base = generate_haar_unitary(self.state.modes, self.haar_seed)
        return make_transmission(base, self.t)

    def gcp_spec(self) -> GcpSpec:
        modes = self.state.modes
        if self.gcp_subsets is not None:
            return GcpSpec(total_modes=modes, subsets=self.gcp_subsets)
        return partition_modes(modes, self.gcp_dimension, self.gcp_permutation_seed)


def _require(table: dict, key: str, section: str):
    if key not in table:
        raise ConfigError(f"missing key '{key}' in [{section}]")
    return table[key]


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    try:
        doc = tomllib.loads(raw.decode())
    except (UnicodeDecodeError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"{path}: not valid TOML ({exc})") from exc

    state_tbl = doc.get("state", {})
    try:
        kind = StateKind(_require(state_tbl, "kind", "state"))
    except ValueError as exc:
        raise ConfigError(f"unknown state kind: {state_tbl.get('kind')!r}") from exc
    r = state_tbl.get("r", 0.0)
    modes = state_tbl.get("modes")
    if modes is None:
        raise ConfigError("missing key 'modes' in [state]")
    r_vec = np.full(modes, float(r)) if np.isscalar(r) else np.asarray(r, dtype=float)
    try:
        state = GaussianInputSpec(kind=kind, r=r_vec,
                                  epsilon=float(state_tbl.get("epsilon", 0.0)),
                                  modes=int(modes))
    except Exception as exc:
        raise ConfigError(f"invalid [state] section: {exc}") from exc

    net = doc.get("network", {})
    haar_seed = net.get("haar_seed")
    matrix_file = net.get("matrix_file")
    if (haar_seed is None) == (matrix_file is None):
        raise ConfigError("[network] needs exactly one of haar_seed or matrix_file")
    if matrix_file is not None and not (path.parent / matrix_file).exists():
        raise ConfigError(f"matrix file not found: {matrix_file}")

    gcp_tbl = doc.get("gcp", {})
    subsets = gcp_tbl.get("subsets")
    if subsets is not None:
        subsets = tuple(tuple(int(i) for i in s) for s in subsets)

    seeds = doc.get("seeds", {})
    for name in ("ensemble", "faker", "partition"):
        if name not in seeds:
            raise ConfigError(f"missing key '{name}' in [seeds]; all seeds are explicit")

    patterns_file = doc.get("patterns_file")
    if patterns_file is not None and not (path.parent / patterns_file).exists():
        raise ConfigError(f"patterns file not found: {patterns_file}")

    representation = doc.get("representation", "positive_P")
    try:
        representation = Representation(representation)
    except ValueError as exc:
        raise ConfigError(f"unknown representation {representation!r}") from exc

    ensembles = int(doc.get("ensembles", 0))
    if ensembles < 1:
        raise ConfigError("'ensembles' must be a positive integer")

    return RunConfig(
        state=state,
        haar_seed=None if haar_seed is None else int(haar_seed),
        matrix_file=matrix_file,
        t=float(_require(net, "t", "network")),
        gcp_dimension=int(gcp_tbl.get("d", 1)),
        gcp_subsets=subsets,
        gcp_permutation_seed=gcp_tbl.get("permutation_seed"),
        n_permutation_tests=int(gcp_tbl.get("n_permutation_tests", 1)),
        ensembles=ensembles,
        blocks=int(doc.get("blocks", 100)),
        fake_patterns=int(doc.get("fake_patterns", ensembles)),
        representation=representation,
        seed_ensemble=int(seeds["ensemble"]),
        seed_faker=int(seeds["faker"]),
        seed_partition=int(seeds["partition"]),
        outputs=Path(doc.get("outputs", "out")),
        patterns_file=patterns_file,
        config_hash=hashlib.sha256(raw).hexdigest()[:16],
        base_dir=path.parent,
    )
