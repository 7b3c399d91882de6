"""Counter-based random number streams for reproducible parallel Monte Carlo.

All stochastic quantities in the toolkit are drawn from Philox streams keyed
by (seed, chunk index), where a chunk is a fixed group of CHUNK consecutive
trajectories. Because every chunk is always generated in full from its own
key, any partition of trajectories over workers, and any request window
[start, start + count), yields bit-identical values for a given trajectory.
"""

from __future__ import annotations

import numpy as np

# Reproducibility unit: trajectories [c*CHUNK, (c+1)*CHUNK) share Philox key
# (seed, c). Fixed constant; changing it changes every sampled stream.
CHUNK = 4096

# Domain separators so that normal and uniform draws with the same user seed
# never share a Philox key.
_NORMAL_DOMAIN = 0x9E3779B97F4A7C15
_UNIFORM_DOMAIN = 0xD1B54A32D192ED03


def _chunk_generator(seed: int, domain: int, chunk: int) -> np.random.Generator:
    key = np.array([(seed ^ domain) & 0xFFFFFFFFFFFFFFFF, chunk], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _draw(seed: int, domain: int, start: int, count: int, width: int,
          method: str) -> np.ndarray:
    """Rows [start, start+count) of the (trajectory, width) stream."""
    if count < 0 or start < 0 or width < 0:
        raise ValueError("start, count and width must be non-negative")
    out = np.empty((count, width), dtype=np.float64)
    row = 0
    chunk = start // CHUNK
    while row < count:
        lo = chunk * CHUNK
        block = getattr(_chunk_generator(seed, domain, chunk), method)((CHUNK, width))
        a = max(start, lo) - lo
        b = min(start + count, lo + CHUNK) - lo
        out[row:row + (b - a)] = block[a:b]
        row += b - a
        chunk += 1
    return out


def standard_normals(seed: int, start: int, count: int, width: int) -> np.ndarray:
    """(count, width) array of iid standard normals for trajectories start..start+count."""
    return _draw(seed, _NORMAL_DOMAIN, start, count, width, "standard_normal")


def uniforms(seed: int, start: int, count: int, width: int) -> np.ndarray:
    """(count, width) array of iid uniforms on [0, 1)."""
    return _draw(seed, _UNIFORM_DOMAIN, start, count, width, "random")
