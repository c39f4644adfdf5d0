"""Canonical representation process for martingales on a finite grid.

At every tick each left-limit atom splits into at most d+1 children.  The
driving process W has one component per child slot; its jump at tick k on
an atom is 2^(-k) * (child indicator - conditional child probability),
with child slots ordered by smallest outcome index and missing slots
padded by empty children of probability zero.  Every martingale null at 0
is a stochastic integral against W; coefficients are chosen with minimum
Euclidean norm per (tick, atom).
"""

from __future__ import annotations

from dataclasses import dataclass

from .basis import Filtration, Partition, Process, SampleSpace
from .calculus import is_martingale, stoch_integral
from .errors import DimensionMismatch, NotAMartingale
from .rational import ONE, ZERO, Q


@dataclass(frozen=True)
class RepresentationProcess:
    space: SampleSpace
    filt: Filtration
    width: int  # d + 1, the maximal child count
    children: dict  # (tick, atom) -> tuple of child blocks, padded with empty sets
    probs: dict     # (tick, atom) -> tuple of conditional child probabilities
    W: Process      # the driving process, dim = width

    def atom_key(self, i: int, k: int) -> tuple[int, frozenset[int]]:
        return (k, self.filt.pre(k).block_of(i))

    def child_slot(self, i: int, k: int) -> int:
        """Index of the child of the pre(k)-atom that contains outcome i."""
        kids = self.children[(k, self.filt.pre(k).block_of(i))]
        for h, kid in enumerate(kids):
            if i in kid:
                return h
        raise KeyError(i)


def multiplicity(space: SampleSpace, filt: Filtration) -> int:
    """Maximal number of children of any left-limit atom across all ticks."""
    width = 1
    for k in range(1, filt.K + 1):
        pre, at = filt.pre(k), filt.at(k)
        for b in pre.blocks:
            width = max(width, len(at.children_of(b)))
    return width


def build_representation(space: SampleSpace, filt: Filtration) -> RepresentationProcess:
    width = multiplicity(space, filt)
    children: dict = {}
    probs: dict = {}
    for k in range(1, filt.K + 1):
        pre, at = filt.pre(k), filt.at(k)
        for b in pre.blocks:
            kids = at.children_of(b)  # ordered by smallest member
            kids = kids + [frozenset()] * (width - len(kids))
            mass = space.mass(b)
            p = tuple(space.mass(c) / mass for c in kids)
            children[(k, b)] = tuple(kids)
            probs[(k, b)] = p

    half = Q(1, 2)

    def jumps(i: int, k: int):
        b = filt.pre(k).block_of(i)
        kids, p = children[(k, b)], probs[(k, b)]
        w = half ** k
        return tuple(w * ((ONE if i in kid else ZERO) - ph) for kid, ph in zip(kids, p))

    W = Process.from_jumps(space.n, filt.K, jumps, dim=width)
    return RepresentationProcess(space=space, filt=filt, width=width,
                                 children=children, probs=probs, W=W)


def represent(rep: RepresentationProcess, X: Process) -> Process:
    """Predictable integrand H with (H . W) = X - X_0, minimum norm per atom.

    The coefficient equivalence class at a (tick, atom) is a shift along the
    all-ones direction on the live child slots plus anything on dead slots;
    the norm minimizer centers the jump values and zeroes dead slots.
    """
    space, filt = rep.space, rep.filt
    if X.dim != 1:
        raise DimensionMismatch("representation works componentwise")
    if not is_martingale(space, filt, X):
        raise NotAMartingale()

    coeff: dict = {}
    two = Q(2)
    for k in range(1, filt.K + 1):
        pre = filt.pre(k)
        for b in pre.blocks:
            kids = rep.children[(k, b)]
            live = [h for h, kid in enumerate(kids) if kid]
            xs = {h: X.jump(min(kids[h]), k)[0] for h in live}
            mean = sum((xs[h] for h in live), ZERO) / len(live)
            scale = two ** k
            coeff[(k, b)] = tuple(
                scale * (xs[h] - mean) if h in live else ZERO for h in range(rep.width))

    rows = []
    for i in range(space.n):
        row = [(ZERO,) * rep.width]
        for k in range(1, filt.K + 1):
            row.append(coeff[(k, filt.pre(k).block_of(i))])
        rows.append(tuple(row))
    H = Process(rep.width, tuple(rows))

    rebuilt = stoch_integral(filt, H, rep.W)
    for i in range(space.n):
        for k in range(filt.K + 1):
            if rebuilt.at(i, k)[0] != X.at(i, k)[0] - X.at(i, 0)[0]:
                raise NotAMartingale("reconstruction failed", outcome=i, tick=k)
    return H
