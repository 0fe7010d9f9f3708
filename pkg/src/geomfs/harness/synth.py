"""Seeded synthetic binary datasets and random-column augmentation.

Each (class, block) pair owns a template: a nonempty core of always-on
columns plus ``rank`` disjoint column groups. A row switches each group on
or off at random, so without noise the class cloud within the block lies
in an affine space of dimension at most ``rank``. Noise flips individual
bits afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..dataio import DatasetError, FeatureTypeLayout, SparseDataset, from_dense


@dataclass(frozen=True)
class SynthSpec:
    n_classes: int = 2
    block_columns: tuple[int, ...] = (20, 20)
    rows_per_class: int = 20
    #: affine rank target per (class, block); an int applies to all pairs
    rank: int | tuple[tuple[int, ...], ...] = 2
    group_size: int = 2
    core_size: int = 1
    #: bit-flip rate; a tuple gives one rate per block
    noise: float | tuple[float, ...] = 0.0
    #: when true every class reuses class 0's templates
    shared_templates: bool = False
    #: when true a row's group on/off pattern is drawn once and reused in
    #: every block, so blocks are redundant views of one latent row
    shared_latent: bool = False
    seed: int = 0

    @property
    def k(self) -> int:
        return len(self.block_columns)

    def rank_of(self, cls: int, block: int) -> int:
        if isinstance(self.rank, int):
            return self.rank
        return self.rank[cls][block]

    def noise_of(self, block: int) -> float:
        if isinstance(self.noise, (int, float)):
            return float(self.noise)
        return float(self.noise[block])


def class_label(i: int) -> str:
    return f"c{i}"


def block_name(i: int) -> str:
    return f"t{i + 1}"


def layout_for(block_columns: Sequence[int], names: Sequence[str] | None = None) -> FeatureTypeLayout:
    names = names or [block_name(i) for i in range(len(block_columns))]
    blocks, start = [], 0
    for name, width in zip(names, block_columns):
        blocks.append((name, start, start + width))
        start += width
    return FeatureTypeLayout(tuple(blocks))


def _template(rng, width, rank, core_size, group_size):
    cols = rng.permutation(width)
    core = cols[:core_size]
    groups = [cols[core_size + g * group_size: core_size + (g + 1) * group_size] for g in range(rank)]
    return core, groups


def generate_synthetic(spec: SynthSpec) -> SparseDataset:
    if spec.n_classes < 2 or spec.k < 1 or spec.rows_per_class < 1:
        raise DatasetError("need at least 2 classes, 1 block and 1 row per class")
    if not isinstance(spec.noise, (int, float)) and len(spec.noise) != spec.k:
        raise DatasetError("need one noise rate per block")
    if not all(0 <= spec.noise_of(b) < 1 for b in range(spec.k)):
        raise DatasetError("noise must lie in [0, 1)")
    if spec.core_size < 1 or spec.group_size < 1:
        raise DatasetError("core and group sizes must be positive")
    for c in range(spec.n_classes):
        for b, width in enumerate(spec.block_columns):
            r = spec.rank_of(c, b)
            if r < 0 or r > min(spec.rows_per_class - 1, width):
                raise DatasetError(
                    f"rank target {r} for class {c}, block {b} exceeds "
                    f"min(rows - 1, columns) = {min(spec.rows_per_class - 1, width)}"
                )
            if spec.core_size + r * spec.group_size > width:
                raise DatasetError(f"block {b} has {width} columns, too few for rank {r} templates")

    rng = np.random.default_rng(spec.seed)
    layout = layout_for(spec.block_columns)
    templates = {}
    for c in range(spec.n_classes):
        for b, width in enumerate(spec.block_columns):
            if spec.shared_templates and c > 0:
                templates[c, b] = templates[0, b]
            else:
                templates[c, b] = _template(rng, width, spec.rank_of(c, b), spec.core_size, spec.group_size)

    n_rows = spec.n_classes * spec.rows_per_class
    X = np.zeros((n_rows, layout.n_columns))
    labels = []
    for c in range(spec.n_classes):
        for i in range(spec.rows_per_class):
            row = c * spec.rows_per_class + i
            labels.append(class_label(c))
            max_rank = max(spec.rank_of(c, b) for b in range(spec.k))
            latent = rng.random(max_rank) < 0.5
            for b, (_, start, end) in enumerate(layout.blocks):
                core, groups = templates[c, b]
                block = np.zeros(end - start)
                block[core] = 1
                if not spec.shared_latent:
                    latent = rng.random(max_rank) < 0.5
                for on, g in zip(latent, groups):
                    if on:
                        block[g] = 1
                if spec.noise_of(b):
                    flips = rng.random(end - start) < spec.noise_of(b)
                    block[flips] = 1 - block[flips]
                    if not block.any():
                        block[core[0]] = 1
                X[row, start:end] = block
    return from_dense(X, labels, layout)


def augment_random_columns(
    ds: SparseDataset,
    fraction: float = 0.25,
    density: float = 0.5,
    seed: int = 0,
    block: str = "random",
) -> SparseDataset:
    """Append ``round(fraction * n_columns)`` (at least 1) random binary columns as one block."""
    if not 0 < fraction <= 1:
        raise DatasetError("fraction must lie in (0, 1]")
    if not 0 < density < 1:
        raise DatasetError("density must lie in (0, 1)")
    if block in ds.layout.names:
        raise DatasetError(f"layout already has a block named {block!r}")
    n_old = ds.n_columns
    n_new = max(1, round(fraction * n_old))
    rng = np.random.default_rng(seed)
    R = (rng.random((ds.n_rows, n_new)) < density).astype(float)
    for i in np.flatnonzero(~R.any(axis=1)):
        R[i, rng.integers(n_new)] = 1
    rows = tuple(
        {**row, **{n_old + int(j): 1.0 for j in np.flatnonzero(R[i])}}
        for i, row in enumerate(ds.rows)
    )
    layout = FeatureTypeLayout(ds.layout.blocks + ((block, n_old, n_old + n_new),))
    return SparseDataset(rows, ds.row_labels, layout)
