"""Plug-in information estimators and the closed forms tied to pair encoding.

Entropy and mutual information use maximum-likelihood (empirical frequency)
estimates over categorical sequences, always skipping positions where any
involved sequence is missing.  The closed forms map ordered-pair correlation,
Gaussian correlation and two-class AUROC onto the mutual information of
pair-encoded variables; for tie-free data they agree with the plug-in
estimates exactly.

A "categorical sequence" is anything with a per-position state: a
KendallSequence, a float array (NaN = missing), an integer or boolean array
(negative = missing), or a sequence of hashables (None/NaN = missing).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import xlogy

from .errors import DomainError
from .transform import KendallSequence, Symbol, _as_ordinal

__all__ = [
    "ContingencyTable",
    "TauValue",
    "AurocResult",
    "entropy",
    "make_joint",
    "mutual_information",
    "conditional_mi",
    "interaction_information",
    "kendall_tau",
    "mi_from_tau",
    "mi_from_rho",
    "auroc",
    "mi_from_auroc",
]


# ---------------------------------------------------------------------------
# categorical normalization
# ---------------------------------------------------------------------------

def _seq_array(seq) -> np.ndarray:
    """Coerce to a 1-D array; Python sequences become object arrays so that
    tuple labels (joint states) survive intact."""
    if isinstance(seq, np.ndarray):
        arr = seq
    else:
        items = list(seq)
        arr = np.empty(len(items), dtype=object)
        arr[:] = items
    if arr.ndim != 1:
        raise DomainError(f"expected a 1-D sequence, got shape {arr.shape}")
    return arr


def _as_codes(seq) -> np.ndarray:
    """Compact integer relabeling of a categorical sequence; -1 is missing."""
    if isinstance(seq, KendallSequence):
        codes = seq.codes.astype(np.int64)
        codes[codes == Symbol.MISSING.value] = -1
        return codes
    arr = _seq_array(seq)
    if arr.dtype.kind == "f":
        out = np.full(arr.size, -1, dtype=np.int64)
        ok = ~np.isnan(arr)
        if ok.any():
            _, out[ok] = np.unique(arr[ok], return_inverse=True)
        return out
    if arr.dtype.kind in "iu":
        out = np.full(arr.size, -1, dtype=np.int64)
        ok = arr >= 0
        if ok.any():
            _, out[ok] = np.unique(arr[ok], return_inverse=True)
        return out
    if arr.dtype.kind == "b":
        return arr.astype(np.int64)
    if arr.dtype.kind in "US":
        _, inv = np.unique(arr, return_inverse=True)
        return inv.astype(np.int64)
    # object path: hashable labels, None/NaN missing
    out = np.full(arr.size, -1, dtype=np.int64)
    labels: dict = {}
    for i, v in enumerate(arr):
        if v is None or (isinstance(v, float) and math.isnan(v)):
            continue
        out[i] = labels.setdefault(v, len(labels))
    return out


def _as_labels(seq) -> list:
    """Original per-position labels with None marking missing entries."""
    if isinstance(seq, KendallSequence):
        return [
            None if c == Symbol.MISSING.value else Symbol(int(c))
            for c in seq.codes
        ]
    arr = _seq_array(seq)
    if arr.dtype.kind == "f":
        return [None if np.isnan(v) else float(v) for v in arr]
    if arr.dtype.kind in "iu":
        return [None if v < 0 else int(v) for v in arr]
    out = []
    for v in arr:
        if v is None or (isinstance(v, float) and math.isnan(v)):
            out.append(None)
        else:
            out.append(v)
    return out


def _relabel(codes: np.ndarray) -> np.ndarray:
    _, inv = np.unique(codes, return_inverse=True)
    return inv.astype(np.int64)


def _h(codes: np.ndarray) -> float:
    """Entropy in nats of compact non-negative codes (0*log 0 := 0)."""
    counts = np.bincount(codes)
    counts = counts[counts > 0]
    p = counts / codes.size
    return float(-(p * np.log(p)).sum())


def _radix(*code_arrays: np.ndarray) -> np.ndarray:
    """Joint state codes of several compact code arrays."""
    joint = code_arrays[0]
    for nxt in code_arrays[1:]:
        joint = joint * (int(nxt.max()) + 1) + nxt
    return joint


# ---------------------------------------------------------------------------
# estimators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ContingencyTable:
    """Joint state counts over positions where no constituent is missing.

    The auditable form of what every plug-in estimate in this module counts.
    """

    counts: dict
    total: int

    @classmethod
    def from_sequences(cls, *seqs) -> "ContingencyTable":
        if not seqs:
            raise DomainError("need at least one sequence")
        labeled = [_as_labels(s) for s in seqs]
        lengths = {len(lab) for lab in labeled}
        if len(lengths) != 1:
            raise DomainError(f"sequences have unequal lengths {sorted(lengths)}")
        counter: Counter = Counter(
            tup for tup in zip(*labeled) if all(v is not None for v in tup)
        )
        return cls(counts=dict(counter), total=sum(counter.values()))

    def entropy(self, base: float = math.e) -> float:
        if self.total == 0:
            raise DomainError("empty contingency table")
        p = np.array(list(self.counts.values()), dtype=float) / self.total
        h = float(-(p * np.log(p)).sum())
        return h if base == math.e else h / math.log(base)


def entropy(seq, base: float = math.e) -> float:
    """Plug-in entropy of the observed (non-missing) states, nats by default."""
    codes = _as_codes(seq)
    obs = codes[codes >= 0]
    if obs.size == 0:
        raise DomainError("entropy of an all-missing sequence is undefined")
    h = _h(_relabel(obs))
    return h if base == math.e else h / math.log(base)


def make_joint(seqs) -> list:
    """Position-wise tuple states over the product alphabet.

    A missing entry in any constituent makes the joint position missing
    (None).
    """
    seqs = list(seqs)
    if not seqs:
        raise DomainError("need at least one sequence")
    labeled = [_as_labels(s) for s in seqs]
    lengths = {len(lab) for lab in labeled}
    if len(lengths) != 1:
        raise DomainError(f"sequences have unequal lengths {sorted(lengths)}")
    return [
        None if any(v is None for v in tup) else tup
        for tup in zip(*labeled)
    ]


def _aligned_codes(*seqs) -> list[np.ndarray]:
    codes = [_as_codes(s) for s in seqs]
    sizes = {c.size for c in codes}
    if len(sizes) != 1:
        raise DomainError(f"sequences have unequal lengths {sorted(sizes)}")
    keep = codes[0] >= 0
    for c in codes[1:]:
        keep &= c >= 0
    if not keep.any():
        raise DomainError("no jointly complete positions")
    return [_relabel(c[keep]) for c in codes]


def mutual_information(x, y) -> float:
    """Plug-in I(x;y) = H(x) + H(y) - H(x,y) over pairwise-complete positions."""
    cx, cy = _aligned_codes(x, y)
    return _h(cx) + _h(cy) - _h(_radix(cx, cy))


def conditional_mi(x, y, z) -> float:
    """Plug-in I(x;y|z) = H(x,z) + H(y,z) - H(x,y,z) - H(z).

    Estimated over positions where all three sequences are observed.
    """
    cx, cy, cz = _aligned_codes(x, y, z)
    return (
        _h(_radix(cx, cz))
        + _h(_radix(cy, cz))
        - _h(_radix(cx, cy, cz))
        - _h(cz)
    )


def interaction_information(x, y, z) -> float:
    """Three-way interaction I(x;y) - I(x;y|z); negative values mark synergy.

    All terms are estimated over the jointly complete positions, which keeps
    the quantity symmetric in its three arguments.
    """
    cx, cy, cz = _aligned_codes(x, y, z)
    mi_xy = _h(cx) + _h(cy) - _h(_radix(cx, cy))
    cmi = (
        _h(_radix(cx, cz))
        + _h(_radix(cy, cz))
        - _h(_radix(cx, cy, cz))
        - _h(cz)
    )
    return mi_xy - cmi


# ---------------------------------------------------------------------------
# ordered-pair correlation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TauValue:
    """Ordered-pair concordance statistic and its raw counts."""

    tau: float
    concordant: int
    discordant: int
    m: int


def _count_pairs_brute(xs: np.ndarray, ys: np.ndarray) -> tuple[int, int]:
    """Direct O(n^2) ordered-pair counter."""
    if xs.size < 2:
        return 0, 0
    dx = np.sign(xs[:, None] - xs[None, :])
    dy = np.sign(ys[:, None] - ys[None, :])
    prod = dx * dy
    return int((prod > 0).sum()), int((prod < 0).sum())


def _inversions(a: np.ndarray) -> int:
    """Strict inversions (i < j with a[i] > a[j]) by divide and conquer."""
    n = a.size
    if n < 2:
        return 0
    if n <= 48:
        return int(np.triu(a[:, None] > a[None, :], 1).sum())
    mid = n // 2
    left, right = a[:mid], a[mid:]
    inv = _inversions(left) + _inversions(right)
    ls, rs = np.sort(left), np.sort(right)
    # per right element: how many left elements exceed it
    inv += int(ls.size * rs.size - np.searchsorted(ls, rs, side="right").sum())
    return inv


def _run_pair_sum(sorted_flat: np.ndarray) -> int:
    """Sum of t*(t-1)/2 over runs of equal values in a sorted array."""
    if sorted_flat.size == 0:
        return 0
    change = np.flatnonzero(np.diff(sorted_flat) != 0)
    starts = np.concatenate([[0], change + 1])
    ends = np.concatenate([change + 1, [sorted_flat.size]])
    t = ends - starts
    return int((t * (t - 1) // 2).sum())


def _count_pairs_mergesort(xs: np.ndarray, ys: np.ndarray) -> tuple[int, int]:
    """O(n log n) ordered-pair counter; exact for ties as well."""
    nc = xs.size
    if nc < 2:
        return 0, 0
    order = np.lexsort((ys, xs))
    xsort, ysort = xs[order], ys[order]
    # sorted by x then y, so tied-x pairs never count as inversions
    discordant_u = _inversions(ysort)
    n0 = nc * (nc - 1) // 2
    ties_x = _run_pair_sum(xsort)
    ties_y = _run_pair_sum(np.sort(ys))
    both = (np.diff(xsort) != 0) | (np.diff(ysort) != 0)
    ties_xy = _run_pair_sum(np.cumsum(np.concatenate([[1], both])))
    untied = n0 - ties_x - ties_y + ties_xy
    concordant_u = untied - discordant_u
    return 2 * concordant_u, 2 * discordant_u


def kendall_tau(x, y, method: str = "mergesort") -> TauValue:
    """Concordance statistic over all m = n*(n-1) ordered pairs.

    Pairs tied in either variable, or touching a missing value, enter
    neither the concordant nor the discordant count but stay in the m
    denominator.  `method` selects the counting kernel, "mergesort"
    (O(n log n)) or "brute" (O(n^2)); both return identical counts.
    """
    xv = _as_ordinal(x)
    yv = _as_ordinal(y)
    if xv.size != yv.size:
        raise DomainError(f"length mismatch: {xv.size} vs {yv.size}")
    n = xv.size
    if n < 2:
        raise DomainError(f"need at least 2 observations, got {n}")
    keep = ~(np.isnan(xv) | np.isnan(yv))
    xs, ys = xv[keep], yv[keep]
    if method == "mergesort":
        c, d = _count_pairs_mergesort(xs, ys)
    elif method == "brute":
        c, d = _count_pairs_brute(xs, ys)
    else:
        raise DomainError(f"unknown counting method {method!r}")
    m = n * (n - 1)
    return TauValue(tau=(c - d) / m, concordant=c, discordant=d, m=m)


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

def mi_from_tau(tau: float) -> float:
    """MI in nats of two pair-encoded tie-free variables with correlation tau.

    Evaluates 0.5*((1+tau)*log(1+tau) + (1-tau)*log(1-tau)); even in tau,
    zero at independence, and bounded by log 2 at tau = +/-1 (the analytic
    limit is returned at the endpoints).
    """
    t = float(tau)
    if not -1.0 <= t <= 1.0:
        raise DomainError(f"tau must lie in [-1, 1], got {tau}")
    return 0.5 * float(xlogy(1.0 + t, 1.0 + t) + xlogy(1.0 - t, 1.0 - t))


def mi_from_rho(rho: float) -> float:
    """Gaussian-model MI in nats from a correlation coefficient.

    Evaluates -0.5*log(1 - rho^2), which diverges as |rho| -> 1; the open
    interval is therefore enforced.
    """
    r = float(rho)
    if not -1.0 < r < 1.0:
        raise DomainError(f"rho must lie strictly inside (-1, 1), got {rho}")
    return -0.5 * math.log1p(-r * r)


class AurocResult(NamedTuple):
    """Cross-class exceedance rate and the matching rank-sum statistic."""

    auc: float
    positives: int
    negatives: int
    u_stat: float


def auroc(x, y, positive=None) -> AurocResult:
    """Fraction of (positive, negative) pairs whose positive x is larger.

    `y` must carry exactly two classes; `positive` picks which one is
    scored (default: the larger label).  Positions with missing x or y are
    dropped.  u_stat = positives*negatives*(1 - auc) counts the
    non-exceeding pairs.
    """
    xv = _as_ordinal(x)
    yarr = np.asarray(y)
    if xv.size != yarr.size:
        raise DomainError(f"length mismatch: {xv.size} vs {yarr.size}")
    ycodes = _as_codes(yarr)
    keep = ~np.isnan(xv) & (ycodes >= 0)
    xs = xv[keep]
    ys = yarr[keep]
    classes = sorted(set(_as_labels(ys)))
    if len(classes) != 2:
        raise DomainError(f"need exactly two classes, got {len(classes)}")
    if positive is None:
        positive = classes[-1]
    elif positive not in classes:
        raise DomainError(f"positive label {positive!r} not present")
    pos_mask = np.array([v == positive for v in _as_labels(ys)])
    xpos, xneg = xs[pos_mask], xs[~pos_mask]
    a, b = int(xpos.size), int(xneg.size)
    exceed = int((xpos[:, None] > xneg[None, :]).sum())
    return AurocResult(
        auc=exceed / (a * b),
        positives=a,
        negatives=b,
        u_stat=float(a * b - exceed),
    )


def mi_from_auroc(auc: float, positives: int, negatives: int) -> float:
    """MI in nats of a tie-free ordinal against a two-class label.

    Closed form (2ab / (n(n-1))) * (log 2 + A log A + (1-A) log(1-A)) with
    a, b the class sizes, n = a + b and A the cross-pair exceedance rate;
    symmetric under A <-> 1-A, with analytic limits at the endpoints.  For
    tie-free x this equals the plug-in MI of the pair encodings exactly.
    """
    a, b = int(positives), int(negatives)
    if a < 1 or b < 1:
        raise DomainError("both classes must be non-empty")
    av = float(auc)
    if not 0.0 <= av <= 1.0:
        raise DomainError(f"auc must lie in [0, 1], got {auc}")
    n = a + b
    term = math.log(2.0) + float(xlogy(av, av) + xlogy(1.0 - av, 1.0 - av))
    return (2.0 * a * b / (n * (n - 1))) * term
