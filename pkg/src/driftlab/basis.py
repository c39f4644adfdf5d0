"""Finite filtered probability spaces with explicit left limits.

A sigma-algebra on a finite outcome set is stored as the partition of its
atoms.  A filtration supplies, for every tick k >= 1, both the left-limit
partition (pre) and the tick partition (at), so the refinement chain is

    initial <= pre(1) <= at(1) <= pre(2) <= at(2) <= ... <= at(K)

where "<=" means "is refined by the right-hand side".  Processes carry
exact rational values; all probabilistic identities downstream are tested
with equality, never with tolerances.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .errors import BadProbability, DimensionMismatch, NotAStoppingTime, RefinementBroken
from .rational import ONE, ZERO, Q, rat


def _as_blocks(blocks: Iterable[Iterable[int]]) -> tuple[frozenset[int], ...]:
    # canonical order: by smallest member
    bs = [frozenset(b) for b in blocks]
    return tuple(sorted(bs, key=min))


@dataclass(frozen=True)
class SampleSpace:
    """Finite outcome set with strictly positive rational probabilities."""

    outcomes: tuple[str, ...]
    prob: tuple[Q, ...]

    def __init__(self, outcomes: Sequence[str], prob: Sequence):
        object.__setattr__(self, "outcomes", tuple(outcomes))
        object.__setattr__(self, "prob", tuple(rat(p) if isinstance(p, (int, str)) else p for p in prob))

    @property
    def n(self) -> int:
        return len(self.outcomes)

    def mass(self, event: Iterable[int]) -> Q:
        return sum((self.prob[i] for i in event), ZERO)


@dataclass(frozen=True)
class Partition:
    """Partition of outcome indices; blocks are the sigma-algebra atoms."""

    blocks: tuple[frozenset[int], ...]

    def __init__(self, blocks: Iterable[Iterable[int]]):
        object.__setattr__(self, "blocks", _as_blocks(blocks))

    @cached_property
    def _index(self) -> dict[int, int]:
        out = {}
        for bi, b in enumerate(self.blocks):
            for i in b:
                out[i] = bi
        return out

    def block_of(self, i: int) -> frozenset[int]:
        return self.blocks[self._index[i]]

    def block_index_of(self, i: int) -> int:
        return self._index[i]

    def covers(self, n: int) -> bool:
        seen = set()
        for b in self.blocks:
            if not b or (b & seen):
                return False
            seen |= b
        return seen == set(range(n))

    def refines(self, coarser: "Partition") -> bool:
        """True when every block here sits inside one block of `coarser`."""
        for b in self.blocks:
            target = coarser._index.get(min(b))
            if target is None or not b <= coarser.blocks[target]:
                return False
        return True

    def meet(self, other: "Partition") -> "Partition":
        """Common refinement (join of the sigma-algebras)."""
        out = []
        for a in self.blocks:
            for b in other.blocks:
                c = a & b
                if c:
                    out.append(c)
        return Partition(out)

    def is_measurable(self, values: Sequence) -> bool:
        return all(len({values[i] for i in b}) == 1 for b in self.blocks)

    def event_measurable(self, event: frozenset[int]) -> bool:
        return all(b <= event or not (b & event) for b in self.blocks)

    def children_of(self, block: frozenset[int]) -> list[frozenset[int]]:
        """Blocks of this partition inside `block`, ordered by smallest member."""
        return [b for b in self.blocks if b <= block]


@dataclass(frozen=True)
class Filtration:
    """Refinement chain with explicit left limits at every tick."""

    initial: Partition
    ticks: tuple[tuple[Partition, Partition], ...]  # (pre, at) per tick, 1-based

    def __init__(self, initial: Partition, ticks: Sequence[tuple[Partition, Partition]]):
        object.__setattr__(self, "initial", initial)
        object.__setattr__(self, "ticks", tuple((p, a) for (p, a) in ticks))

    @property
    def K(self) -> int:
        return len(self.ticks)

    def at(self, k: int) -> Partition:
        return self.initial if k == 0 else self.ticks[k - 1][1]

    def pre(self, k: int) -> Partition:
        # convention: pre(0) := at(0)
        return self.initial if k == 0 else self.ticks[k - 1][0]

    def chain(self) -> list[tuple[str, Partition]]:
        out = [("at(0)", self.initial)]
        for k in range(1, self.K + 1):
            out.append((f"pre({k})", self.pre(k)))
            out.append((f"at({k})", self.at(k)))
        return out


def _as_vector(v) -> tuple[Q, ...]:
    if isinstance(v, tuple):
        return v
    if isinstance(v, (list,)):
        return tuple(v)
    return (v,)


@dataclass(frozen=True)
class Process:
    """Vector-valued path family: values[omega][tick] is a dim-tuple."""

    dim: int
    values: tuple[tuple[tuple[Q, ...], ...], ...]

    def __init__(self, dim: int, values):
        vals = tuple(tuple(_as_vector(x) for x in row) for row in values)
        for row in vals:
            for x in row:
                if len(x) != dim:
                    raise DimensionMismatch(f"expected dim {dim}, got {len(x)}")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def ticks(self) -> int:
        return len(self.values[0]) - 1

    def at(self, i: int, k: int) -> tuple[Q, ...]:
        return self.values[i][k]

    def scalar(self, i: int, k: int) -> Q:
        if self.dim != 1:
            raise DimensionMismatch("scalar access on vector process")
        return self.values[i][k][0]

    def jump(self, i: int, k: int) -> tuple[Q, ...]:
        """Increment at tick k; zero vector at k = 0 by convention."""
        if k == 0:
            return (ZERO,) * self.dim
        prev, cur = self.values[i][k - 1], self.values[i][k]
        return tuple(c - p for c, p in zip(cur, prev))

    def component(self, h: int) -> "Process":
        return Process(1, tuple(tuple((x[h],) for x in row) for row in self.values))

    def components(self) -> list["Process"]:
        return [self.component(h) for h in range(self.dim)]

    def __add__(self, other: "Process") -> "Process":
        if self.dim != other.dim:
            raise DimensionMismatch("process dims differ")
        return Process(self.dim, tuple(
            tuple(tuple(a + b for a, b in zip(x, y)) for x, y in zip(r1, r2))
            for r1, r2 in zip(self.values, other.values)))

    def __sub__(self, other: "Process") -> "Process":
        return self + other.scale(Q(-1))

    def __neg__(self) -> "Process":
        return self.scale(Q(-1))

    def scale(self, q: Q) -> "Process":
        return Process(self.dim, tuple(
            tuple(tuple(q * a for a in x) for x in row) for row in self.values))

    @staticmethod
    def zeros(n: int, ticks: int, dim: int = 1) -> "Process":
        row = tuple(((ZERO,) * dim,) * (ticks + 1))
        return Process(dim, (row,) * n)

    @staticmethod
    def from_scalar_paths(paths: Sequence[Sequence]) -> "Process":
        return Process(1, tuple(tuple((rat(x) if isinstance(x, (int, str)) else x,) for x in row) for row in paths))

    @staticmethod
    def from_jumps(n: int, ticks: int, jumps, start=None, dim: int = 1) -> "Process":
        """Cumulative sums of jumps(i, k) for k = 1..ticks; start defaults to 0."""
        rows = []
        for i in range(n):
            cur = _as_vector(start(i) if callable(start) else ((ZERO,) * dim if start is None else start))
            row = [cur]
            for k in range(1, ticks + 1):
                j = _as_vector(jumps(i, k))
                cur = tuple(c + d for c, d in zip(cur, j))
                row.append(cur)
            rows.append(tuple(row))
        return Process(dim, tuple(rows))

    @staticmethod
    def stack(components: Sequence["Process"]) -> "Process":
        dim = sum(c.dim for c in components)
        n, ticks = components[0].n, components[0].ticks
        rows = []
        for i in range(n):
            row = []
            for k in range(ticks + 1):
                vec: tuple[Q, ...] = ()
                for c in components:
                    vec = vec + c.at(i, k)
                row.append(vec)
            rows.append(tuple(row))
        return Process(dim, tuple(rows))


INF = None  # stopping-time value for "never"


@dataclass(frozen=True)
class StoppingTime:
    """Tick-valued random time; value None means infinity."""

    values: tuple[Optional[int], ...]

    def __init__(self, values: Sequence[Optional[int]]):
        object.__setattr__(self, "values", tuple(values))

    @property
    def n(self) -> int:
        return len(self.values)

    def leq_event(self, k: int) -> frozenset[int]:
        return frozenset(i for i, v in enumerate(self.values) if v is not None and v <= k)

    def geq(self, i: int, k: int) -> bool:
        v = self.values[i]
        return v is None or v >= k

    @staticmethod
    def constant(n: int, k: Optional[int]) -> "StoppingTime":
        return StoppingTime((k,) * n)


@dataclass(frozen=True)
class Diagnostics:
    ok: bool
    errors: tuple[str, ...]


def validate(space: SampleSpace, filt: Filtration) -> Diagnostics:
    """Check every structural invariant; reports the first broken refinement pair."""
    errors: list[str] = []
    if sum(space.prob, ZERO) != ONE:
        errors.append("BAD_PROBABILITY: total mass != 1")
    if any(p <= ZERO for p in space.prob):
        errors.append("BAD_PROBABILITY: nonpositive outcome mass")
    if len(set(space.outcomes)) != space.n:
        errors.append("BAD_PROBABILITY: duplicate outcome labels")
    chain = filt.chain()
    for name, part in chain:
        if not part.covers(space.n):
            errors.append(f"REFINEMENT_BROKEN({name}): not a partition of the outcome set")
    if not errors:
        for (prev_name, prev), (name, part) in zip(chain, chain[1:]):
            if not part.refines(prev):
                errors.append(f"REFINEMENT_BROKEN({name}): does not refine {prev_name}")
                break
    return Diagnostics(ok=not errors, errors=tuple(errors))


def require_valid(space: SampleSpace, filt: Filtration) -> None:
    diag = validate(space, filt)
    if not diag.ok:
        first = diag.errors[0]
        if first.startswith("BAD_PROBABILITY"):
            raise BadProbability(first)
        raise RefinementBroken(first)


def cond_expect(space: SampleSpace, partition: Partition, values: Sequence[Q]) -> tuple[Q, ...]:
    """Conditional expectation as a random variable, constant on each atom."""
    out: list[Q] = [ZERO] * space.n
    for b in partition.blocks:
        mass = space.mass(b)
        avg = sum((space.prob[i] * values[i] for i in b), ZERO) / mass
        for i in b:
            out[i] = avg
    return tuple(out)


def cond_prob(space: SampleSpace, partition: Partition, event: frozenset[int]) -> tuple[Q, ...]:
    ind = [ONE if i in event else ZERO for i in range(space.n)]
    return cond_expect(space, partition, ind)


def is_stopping_time(filt: Filtration, T: StoppingTime) -> bool:
    for k in range(filt.K + 1):
        if not filt.at(k).event_measurable(T.leq_event(k)):
            return False
    return True


def classify_stopping_time(filt: Filtration, T: StoppingTime) -> str:
    """'predictable' when every level set {T = k} is left-limit measurable.

    On a finite tick grid there are no totally inaccessible times, so
    everything else is simply 'accessible'.
    """
    if not is_stopping_time(filt, T):
        raise NotAStoppingTime("level sets not measurable at their tick")
    for k in range(filt.K + 1):
        level = frozenset(i for i, v in enumerate(T.values) if v == k)
        if not filt.pre(k).event_measurable(level):
            return "accessible"
    return "predictable"
