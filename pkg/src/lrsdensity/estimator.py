"""scikit-learn style front end.

>>> est = PositivityDensity(epsilon="1/100").fit([([1, 1], [1, 1])])
>>> est.transform([([-1], [1])])  # [[lo, hi]] per sequence
array([[0.5, 0.5]])
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .algebraic import DEFAULT_BUDGET_BITS
from .density import DensityReport, approximate_density, monte_carlo_sequence_density
from .lrs import Lrs
from .normalize import DEFAULT_RELATION_BOUND
from .validation import (
    check_choice,
    check_epsilon,
    check_nonnegative_int,
    check_positive_int,
    check_sequences,
)


class PositivityDensity(TransformerMixin, BaseEstimator):
    """Density of {n : u_n > 0} for each input sequence.

    Parameters
    ----------
    method : "grid" or "monte-carlo"
        "grid" gives a certified interval of width at most 2 * epsilon.
    epsilon : rational (Fraction, int or "p/q" string)
    samples, seed : Monte Carlo sample count and seed
    relation_bound, budget_bits : passed to the normalization pipeline
    workers : threads for grid counting and sampling

    Inputs X are iterables of sequences: Lrs objects, (coeffs, init) pairs,
    {"coeffs", "init"} mappings, or loop program source text.

    Attributes after fit: reports_ (one DensityReport per fitted sequence),
    sequences_, n_sequences_.
    """

    def __init__(self, method="grid", epsilon="1/100", samples=10_000, seed=0,
                 relation_bound=DEFAULT_RELATION_BOUND, budget_bits=DEFAULT_BUDGET_BITS, workers=1):
        self.method = method
        self.epsilon = epsilon
        self.samples = samples
        self.seed = seed
        self.relation_bound = relation_bound
        self.budget_bits = budget_bits
        self.workers = workers

    def _validate_params(self):
        check_choice(self.method, "method", ("grid", "monte-carlo"))
        check_positive_int(self.relation_bound, "relation_bound")
        check_positive_int(self.budget_bits, "budget_bits")
        check_positive_int(self.workers, "workers")
        if self.method == "grid":
            return {"epsilon": check_epsilon(self.epsilon)}
        return {"samples": check_positive_int(self.samples, "samples"),
                "seed": check_nonnegative_int(self.seed, "seed")}

    def _report(self, seq: Lrs, opts) -> DensityReport:
        kw = dict(bound=self.relation_bound, budget=self.budget_bits, workers=self.workers)
        if self.method == "grid":
            return approximate_density(seq, opts["epsilon"], **kw)
        return monte_carlo_sequence_density(seq, opts["samples"], opts["seed"], **kw)

    def _reports(self, seqs):
        opts = self._validate_params()
        cache = getattr(self, "_cache", {})
        out = []
        for s in seqs:
            key = (s, tuple(sorted(opts.items())))
            if key not in cache:
                cache[key] = self._report(s, opts)
            out.append(cache[key])
        self._cache = cache
        return out

    def fit(self, X, y=None):
        """Computes a report for every sequence in X; y is ignored."""
        self._cache = {}
        seqs = check_sequences(X)
        self.reports_ = self._reports(seqs)
        self.sequences_ = seqs
        self.n_sequences_ = len(seqs)
        return self

    def report(self, X) -> list[DensityReport]:
        check_is_fitted(self, "reports_")
        return self._reports(check_sequences(X))

    def transform(self, X) -> np.ndarray:
        """(n, 2) float array of [lo, hi] (lo == hi for Monte Carlo estimates)."""
        return np.array([[float(r.lo), float(r.hi)] for r in self.report(X)], dtype=np.float64)

    def predict(self, X) -> np.ndarray:
        """Interval midpoints as floats."""
        return np.array([float(r.midpoint) for r in self.report(X)], dtype=np.float64)

    def predict_exact(self, X) -> list[Fraction | tuple[Fraction, Fraction]]:
        """Exact value when known, else the (lo, hi) pair."""
        return [r.value for r in self.report(X)]

    def __sklearn_tags__(self):
        tags = super().__sklearn_tags__()
        tags.input_tags.two_d_array = False
        tags.input_tags.string = True
        tags.requires_fit = True
        return tags
