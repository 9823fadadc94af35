#!/usr/bin/env python3
#
# Copyright (c) 2026 The perstd developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-2-Clause
# See LICENSE.md for the full license text.

'''
   Recoverability certificates
   ---------------------------

   Sufficient conditions under which the common tensor and the
   distinct tensors are uniquely determined by the measurements.

   The generic check works from dimensions and ranks alone and holds
   with probability one for factors drawn from a continuous
   distribution.  The deterministic check evaluates Kruskal-rank
   conditions on explicit factors.

   Both need a witness: a dataset η whose tensor is fully unique and,
   for each mode j, a dataset ξ_j whose tensor is mode-j unique with
   P_{ξ_j,j} of full column rank, at least one ξ_j different from η.

   A negative answer means "not guaranteed", never "not unique".
'''

import itertools
from dataclasses import dataclass, field

import numpy as np

from .numerics import kruskal_rank, numeric_rank, pinv, KRUSKAL_MAX_COLUMNS
from .internals.exceptions import PreconditionError

@dataclass(frozen=True)
class Witness():
    ''' η and ξ_1, ξ_2, ξ_3, dataset indices from 0 '''

    eta: int
    xi: tuple

    def __post_init__(self):
        object.__setattr__(self, "xi", tuple(self.xi))
        assert len(self.xi) == 3

    def __str__(self):
        return "η=%d ξ=(%d, %d, %d)" % ((self.eta + 1,) + tuple(x + 1 for x in self.xi))

    @classmethod
    def from_one_based(cls, values):
        ''' From the four numbers η ξ1 ξ2 ξ3 of a configuration file '''
        values = [int(x) - 1 for x in values]
        return cls(values[0], tuple(values[1:]))

    @property
    def datasets(self):
        ''' Every dataset whose CPD is needed '''
        return frozenset((self.eta,) + self.xi)

    def separated_modes(self):
        ''' Modes (0-based) with ξ_j ≠ η '''
        return [j for j, x in enumerate(self.xi) if x != self.eta]

@dataclass(frozen=True)
class ProblemDims():
    '''
    Dimensions and ranks of a personalized coupled decomposition

    m: common dims (M1, M2, M3); n[k]: dataset dims; p_rank[k][j]: rank
    of P_{k,j}; p_full_col[k][j]: P_{k,j} is left invertible; r: common
    rank; l[k]: distinct ranks.
    '''

    m: tuple
    n: tuple
    p_rank: tuple
    p_full_col: tuple
    r: int
    l: tuple

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(self.m))
        for name in ("n", "p_rank", "p_full_col"):
            object.__setattr__(self, name, tuple(tuple(x) for x in getattr(self, name)))
        object.__setattr__(self, "l", tuple(self.l))

    @classmethod
    def generic(cls, m, n, r, l):
        ''' P_{k,j} of generic rank min(N_{k,j}, M_j) '''
        p_rank = [[min(a, b) for a, b in zip(dims, m)] for dims in n]
        p_full = [[rnk == b for rnk, b in zip(ranks, m)] for ranks in p_rank]
        return cls(m, n, p_rank, p_full, r, l)

    @classmethod
    def from_measurements(cls, meas, r, l):
        ''' Ranks measured on explicit P matrices '''
        p_rank = []
        p_full = []
        n = []
        for k in range(len(meas)):
            n.append(meas.dataset_dims(k))
            p_rank.append([meas.rank(k, j) for j in range(3)])
            p_full.append([meas.full_column_rank(k, j) for j in range(3)])
        return cls(meas.common_dims, n, p_rank, p_full, r, l)

    @property
    def count(self):
        ''' K '''
        return len(self.n)

    def litany(self):
        ''' Yield PreconditionError for every inconsistency '''
        if len(self.m) != 3 or min(self.m) < 1:
            yield PreconditionError("Common dims must be three positive integers")
            return
        if self.r < 1:
            yield PreconditionError("Common rank R must be at least 1")
        if not self.n:
            yield PreconditionError("No datasets")
        for name in ("p_rank", "p_full_col", "l"):
            if len(getattr(self, name)) != len(self.n):
                yield PreconditionError("%s has %d entries for %d datasets" % (
                    name, len(getattr(self, name)), len(self.n)
                ))
                return
        for k, dims in enumerate(self.n):
            if len(dims) != 3 or min(dims) < 1:
                yield PreconditionError("Dataset %d dims must be three positive integers" % (k + 1))
                continue
            if self.l[k] < 0:
                yield PreconditionError("Dataset %d has negative distinct rank" % (k + 1))
            for j in range(3):
                top = min(dims[j], self.m[j])
                if not 0 <= self.p_rank[k][j] <= top:
                    yield PreconditionError(
                        "Dataset %d mode %d: rank of P must be in 0…%d" % (k + 1, j + 1, top)
                    )
                if self.p_full_col[k][j] and self.p_rank[k][j] != self.m[j]:
                    yield PreconditionError(
                        "Dataset %d mode %d: full column rank needs rank %d" % (
                            k + 1, j + 1, self.m[j]
                        )
                    )

    def validate(self):
        ''' Raise the first complaint '''
        for i in self.litany():
            raise i

def generic_kruskal_bound(p_rank, r, l):
    ''' Generic Kruskal rank of [P·C_j, D_j]: min(rank(P), R + L) '''
    return min(p_rank, r + l)

def generic_factor_rank(n, m, r, l):
    ''' Generic rank of [P·C_j, D_j] with P left invertible: min(N, min(M, R) + L) '''
    return min(n, min(m, r) + l)

def generically_fully_unique(dims, k):
    ''' Y_k is generically fully unique '''
    width = dims.r + dims.l[k]
    total = sum(generic_kruskal_bound(x, dims.r, dims.l[k]) for x in dims.p_rank[k])
    return total >= 2 * width + 2

def generically_mode_unique(dims, k, j):
    ''' Y_k is generically mode-j unique and P_{k,j} left invertible '''
    if not dims.p_full_col[k][j]:
        return False
    width = dims.r + dims.l[k]
    total = generic_factor_rank(dims.n[k][j], dims.m[j], dims.r, dims.l[k])
    for i in range(3):
        if i != j:
            total += generic_kruskal_bound(dims.p_rank[k][i], dims.r, dims.l[k])
    return total >= 2 * width + 2

def satisfies_alternative(dims, k, j):
    ''' rank + min of the other Kruskal ranks ≥ R + L + 1 (informational) '''
    if not dims.p_full_col[k][j]:
        return False
    width = dims.r + dims.l[k]
    lowest = min(
        generic_kruskal_bound(dims.p_rank[k][i], dims.r, dims.l[k]) for i in range(3) if i != j
    )
    return generic_factor_rank(dims.n[k][j], dims.m[j], dims.r, dims.l[k]) + lowest >= width + 1

@dataclass
class UniquenessReport():
    ''' Outcome of check_generic() '''

    eta_candidates: frozenset
    unimode_candidates: tuple
    xi_differs: bool
    overall: bool
    witness: Witness = None
    alternative_unimode: tuple = ()

    def lines(self):
        ''' Human readable, datasets numbered from 1 '''
        def fmt(ks):
            return "{" + ", ".join("Y%d" % (k + 1) for k in sorted(ks)) + "}"
        yield "Fully unique (η candidates): " + fmt(self.eta_candidates)
        for j, cands in enumerate(self.unimode_candidates):
            yield "Mode-%d unique (ξ_%d candidates): %s" % (j + 1, j + 1, fmt(cands))
        for j, cands in enumerate(self.alternative_unimode):
            yield "Mode-%d alternative condition (informational): %s" % (j + 1, fmt(cands))
        yield "Some ξ_j differs from η: %s" % ("yes" if self.xi_differs else "no")
        if self.witness is not None:
            yield "Witness: " + str(self.witness)
        yield "Recovery guaranteed: %s" % ("yes" if self.overall else "no (not guaranteed)")

def _witness_key(dims, witness):
    used = witness.datasets
    size = sum(sum(dims.n[k]) for k in used)
    return (len(used), -size, (witness.eta,) + witness.xi)

def choose_witness(dims, eta_candidates, unimode_candidates):
    '''
    Pick η, ξ_1..3 with some ξ_j ≠ η

    Fewest distinct datasets first, then the largest total
    dimensions of the tensors to decompose, then the smallest indices.
    '''
    best = None
    for eta in sorted(eta_candidates):
        for xi in itertools.product(*[sorted(x) for x in unimode_candidates]):
            witness = Witness(eta, xi)
            if not witness.separated_modes():
                continue
            if best is None or _witness_key(dims, witness) < _witness_key(dims, best):
                best = witness
    return best

def check_generic(dims):
    ''' Generic recoverability from dimensions and ranks '''
    dims.validate()
    datasets = range(dims.count)
    eta_candidates = frozenset(k for k in datasets if generically_fully_unique(dims, k))
    unimode = tuple(
        frozenset(k for k in datasets if generically_mode_unique(dims, k, j)) for j in range(3)
    )
    alternative = tuple(
        frozenset(k for k in datasets if satisfies_alternative(dims, k, j)) for j in range(3)
    )
    witness = choose_witness(dims, eta_candidates, unimode)
    differs = any(
        xi != eta
        for eta in eta_candidates
        for cands in unimode
        for xi in cands
    )
    overall = bool(eta_candidates) and all(unimode) and witness is not None
    return UniquenessReport(eta_candidates, unimode, differs, overall, witness, alternative)

def witness_litany(dims, witness):
    ''' Complaints if a chosen witness does not meet the generic conditions '''
    for k in (witness.eta,) + witness.xi:
        if not 0 <= k < dims.count:
            yield PreconditionError("Witness names dataset %d of %d" % (k + 1, dims.count))
            return
    if not generically_fully_unique(dims, witness.eta):
        yield PreconditionError("Y%d is not generically fully unique" % (witness.eta + 1))
    for j, k in enumerate(witness.xi):
        if not generically_mode_unique(dims, k, j):
            yield PreconditionError(
                "Y%d is not generically mode-%d unique with left invertible P" % (k + 1, j + 1)
            )
    if not witness.separated_modes():
        yield PreconditionError("Witness needs some ξ_j different from η")

#######################################################################

def stacked_factor(model, meas, k, j):
    ''' [P_{k,j} C_j, D_{k,j}] '''
    parts = [meas.matrix(k, j) @ model.common[j]]
    d = model.distinct[k]
    if d is not None:
        parts.append(d[j])
    return np.hstack(parts)

@dataclass
class DeterministicReport():
    ''' Outcome of check_deterministic() '''

    witness: Witness
    fully_unique: bool
    kruskal_ranks: tuple
    mode_unique: dict = field(default_factory=dict)
    separable: dict = field(default_factory=dict)
    alternative_unimode: dict = field(default_factory=dict)
    overall: bool = False

    def lines(self):
        ''' Human readable, numbering from 1 '''
        yield "Witness: " + str(self.witness)
        yield "Y%d fully unique: %s, Kruskal ranks %s" % (
            self.witness.eta + 1, "pass" if self.fully_unique else "fail", self.kruskal_ranks
        )
        for j in sorted(self.mode_unique):
            yield "Mode-%d unique (Y%d): %s" % (
                j + 1, self.witness.xi[j] + 1, "pass" if self.mode_unique[j] else "fail"
            )
        for j in sorted(self.alternative_unimode):
            yield "Alternative mode-%d condition (informational): %s" % (
                j + 1, "pass" if self.alternative_unimode[j] else "fail"
            )
        for j in sorted(self.separable):
            yield "Mode-%d common columns separable: %s" % (
                j + 1, "pass" if self.separable[j] else "fail"
            )
        yield "Recovery guaranteed: %s" % ("yes" if self.overall else "no (not guaranteed)")

def _check_width(mat):
    if mat.shape[1] > KRUSKAL_MAX_COLUMNS:
        raise PreconditionError(
            "Factor with %d columns exceeds the exhaustive Kruskal rank limit of %d" % (
                mat.shape[1], KRUSKAL_MAX_COLUMNS
            )
        )

def check_deterministic(model, meas, witness):
    ''' Recoverability of explicit factors for the given witness '''
    eta = witness.eta
    for k in witness.datasets:
        for j in range(3):
            _check_width(stacked_factor(model, meas, k, j))

    width = model.rank + model.distinct_ranks[eta]
    kr_eta = tuple(kruskal_rank(stacked_factor(model, meas, eta, j)) for j in range(3))
    fully_unique = sum(kr_eta) >= 2 * width + 2

    mode_unique = {}
    alternative = {}
    for j, xi in enumerate(witness.xi):
        width_xi = model.rank + model.distinct_ranks[xi]
        mats = [stacked_factor(model, meas, xi, i) for i in range(3)]
        others = [kruskal_rank(mats[i]) for i in range(3) if i != j]
        rank_j = numeric_rank(mats[j])
        no_zero = bool(np.all(np.linalg.norm(mats[j], axis=0) > 0))
        left_inv = meas.full_column_rank(xi, j)
        mode_unique[j] = no_zero and left_inv and sum(others) + rank_j >= 2 * width_xi + 2
        alternative[j] = no_zero and left_inv and rank_j + min(others) >= width_xi + 1

    separable = {}
    for j in witness.separated_modes():
        xi = witness.xi[j]
        p_eta = meas.matrix(eta, j)
        parts = [p_eta @ model.common[j]]
        if model.distinct[xi] is not None:
            parts.append(p_eta @ pinv(meas.matrix(xi, j)) @ model.distinct[xi][j])
        if model.distinct[eta] is not None:
            parts.append(model.distinct[eta][j])
        mat = np.hstack(parts)
        _check_width(mat)
        separable[j] = kruskal_rank(mat, limit=2) > 1

    overall = (
        fully_unique and all(mode_unique.values()) and bool(separable) and all(separable.values())
    )
    return DeterministicReport(
        witness, fully_unique, kr_eta, mode_unique, separable, alternative, overall
    )
