"""Operator powers, polynomial multipliers, the heat semigroup, and norm sequences.

Everything here has a spectral route (multiplier on the transform side,
computed in log space so sigma^n growth never overflows) and, where the
input is symbolic, an exact physical route through the operator calculus.
Operator powers are powers of the inverse-matrix operator: the transform
turns that operator into multiplication by (i lam / b).
"""

import math
import warnings as _warnings
from dataclasses import dataclass

import numpy as np

from .errors import AccuracyWarning, ComputationError, ParameterError
from .quadrature import QuadratureRule, SampledFunction, lp_norm
from .specfun import kval, matval
from .symfun import SymExpr, apply_lcd, evaluate
from .transform import Spectrum, lcdt_forward, lcdt_inverse

__all__ = [
    "RealPolynomial",
    "NormSequence",
    "apply_power_spectral",
    "apply_poly_op",
    "heat_semigroup",
    "norm_sequence",
    "spectrum_of",
]

MAX_N_SPECTRAL = 60
MAX_N_SYMBOLIC = 30
SERIES_TAIL_TOL = 1e-12
# beyond this, float64 cancellation noise in the alternating heat series
# exceeds the 1e-6 agreement target: partial sums reach exp(q)
SERIES_Q_MAX = 21.0
EDGE_WARN_FRACTION = 1e-8


@dataclass(frozen=True)
class RealPolynomial:
    """Real polynomial by ascending coefficients."""

    coefficients: tuple

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coefficients)
        while len(coeffs) > 1 and coeffs[-1] == 0.0:
            coeffs = coeffs[:-1]
        if not coeffs:
            raise ParameterError("polynomial needs at least one coefficient")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def require_nonconstant(self):
        if self.degree < 1:
            raise ParameterError("polynomial domain requires a non-constant polynomial")

    def __call__(self, t):
        return np.polynomial.polynomial.polyval(t, self.coefficients)


@dataclass(frozen=True)
class NormSequence:
    """(n, log norm, norm^(1/n), norm_n / norm_(n-1)) diagnostics."""

    p: float
    path: str
    n: np.ndarray
    lognorm: np.ndarray
    root: np.ndarray
    ratio: np.ndarray

    @classmethod
    def from_lognorms(cls, p, path, lognorms) -> "NormSequence":
        lognorms = np.asarray(lognorms, dtype=np.float64)
        n = np.arange(lognorms.shape[0])
        with np.errstate(invalid="ignore", over="ignore"):
            root = np.exp(lognorms / np.maximum(n, 1))
            root[0] = np.nan
            d = np.diff(lognorms, prepend=np.nan)
            ratio = np.exp(d)
        both_zero = np.isneginf(lognorms) & np.isneginf(np.roll(lognorms, 1))
        ratio[both_zero] = 0.0
        root[np.isneginf(lognorms)] = 0.0
        root[0] = np.nan
        return cls(p=p, path=path, n=n, lognorm=lognorms, root=root, ratio=ratio)

    def is_zero(self) -> bool:
        return bool(np.all(np.isneginf(self.lognorm)))

    def to_csv_text(self) -> str:
        lines = ["n,lognorm,root,ratio"]
        for i in range(self.n.shape[0]):
            lines.append(
                f"{int(self.n[i])},{float(self.lognorm[i])!r},{float(self.root[i])!r},{float(self.ratio[i])!r}"
            )
        return "\n".join(lines) + "\n"

    def consistency_residual(self) -> float:
        """Max mismatch between stored root/ratio and the log-norm column."""
        res = 0.0
        for i in range(1, self.n.shape[0]):
            if np.isfinite(self.lognorm[i]):
                res = max(res, abs(math.log(self.root[i]) - self.lognorm[i] / self.n[i]))
                if np.isfinite(self.lognorm[i - 1]) and self.ratio[i] > 0:
                    res = max(res, abs(math.log(self.ratio[i]) - (self.lognorm[i] - self.lognorm[i - 1])))
        return res


def spectrum_of(f, k, M, lam_rule: QuadratureRule | None, x_rule: QuadratureRule | None = None) -> Spectrum:
    """Forward transform of f, or f itself when already frequency-side data."""
    if isinstance(f, Spectrum):
        return f
    if lam_rule is None:
        raise ParameterError("a frequency rule is required for physical-side input")
    return lcdt_forward(f, k, M, lam_rule, x_rule=x_rule)


def _resolve_x_rule(f, x_rule):
    if x_rule is not None:
        return x_rule
    if isinstance(f, SampledFunction):
        return f.rule
    raise ParameterError("x_rule is required when the input carries no physical grid")


def _log_abs(values):
    with np.errstate(divide="ignore"):
        return np.log(np.abs(values))


def _scaled_multiplier_inverse(g: Spectrum, log_mult, phase, x_rule):
    """Inverse transform of phase*exp(log_mult)*g, factored as scale * values."""
    logm = log_mult + _log_abs(g.values)
    mx = float(np.max(logm))
    if not np.isfinite(mx):
        return np.zeros(len(x_rule), dtype=np.complex128), -math.inf
    with np.errstate(invalid="ignore"):
        ang = np.exp(1j * np.angle(g.values))
    scaled = np.where(np.isneginf(logm), 0.0, np.exp(logm - mx)) * phase * ang
    edge = np.abs(scaled[np.abs(g.rule.nodes) >= 0.98 * g.rule.X])
    if edge.size and np.max(edge) > EDGE_WARN_FRACTION:
        _warnings.warn(
            "spectral multiplier is not negligible at the grid edge; "
            "operator power may be under-resolved",
            AccuracyWarning,
        )
    h = lcdt_inverse(Spectrum(g.rule, scaled, g.k, g.M, label=g.label), x_rule)
    return h.values, mx


def apply_power_spectral(f, k, M, n: int, lam_rule=None, x_rule=None) -> SampledFunction:
    """n-th power of the inverse-matrix operator via the (i lam/b)^n multiplier."""
    if n < 0:
        raise ParameterError("operator power must be >= 0")
    kk = kval(k)
    mm = matval(M)
    xr = _resolve_x_rule(f, x_rule)
    g = spectrum_of(f, kk, mm, lam_rule, x_rule=xr)
    mu = g.rule.nodes / mm.b
    log_mult = n * _log_abs(mu) if n else np.zeros_like(mu)
    phase = (1j * np.sign(mu)) ** n
    vals, mx = _scaled_multiplier_inverse(g, log_mult, phase, xr)
    out = vals * math.exp(mx) if np.isfinite(mx) else vals
    if not np.all(np.isfinite(out.real)):
        raise ComputationError("operator power overflowed; use norm_sequence for large n")
    return SampledFunction(xr, out, label=getattr(f, "label", ""))


def apply_poly_op(f, k, M, P: RealPolynomial, n: int, lam_rule=None, x_rule=None) -> SampledFunction:
    """P(i Lambda)^n realized as the spectral multiplier P(lam/b)^n."""
    P.require_nonconstant()
    if n < 0:
        raise ParameterError("operator power must be >= 0")
    kk = kval(k)
    mm = matval(M)
    xr = _resolve_x_rule(f, x_rule)
    g = spectrum_of(f, kk, mm, lam_rule, x_rule=xr)
    pvals = P(g.rule.nodes / mm.b)
    log_mult = n * _log_abs(pvals) if n else np.zeros_like(pvals)
    phase = np.sign(pvals) ** n if n else np.ones_like(pvals)
    vals, mx = _scaled_multiplier_inverse(g, log_mult, phase, xr)
    out = vals * math.exp(mx) if np.isfinite(mx) else vals
    return SampledFunction(xr, out, label=getattr(f, "label", ""))


def heat_series_terms_required(q: float) -> int:
    """Smallest truncation with certified factorial tail below 1e-12."""
    if q <= 0:
        return 1
    log_tail = 0.0
    t = 0
    while t < 100000:
        t += 1
        log_tail += math.log(q) - math.log(t)
        if q / (t + 2) < 1.0:
            slack = -math.log(1.0 - q / (t + 2))
            if log_tail + slack < math.log(SERIES_TAIL_TOL):
                return t
    raise ComputationError("heat series failed to certify a truncation")


def heat_semigroup(f, k, M, n: int, mode: str = "multiplier", series_terms: int | None = None,
                   lam_rule=None, x_rule=None) -> SampledFunction:
    """Heat flow at integer time n: spectral multiplier exp(-n lam^2/b^2).

    Series mode sums the certified truncation of sum_m n^m Delta^m f / m!
    physically, term by term, as an independent route to the same output.
    """
    if n < 0:
        raise ParameterError("heat time must be >= 0")
    if mode not in ("multiplier", "series"):
        raise ParameterError(f"unknown heat mode {mode!r}")
    kk = kval(k)
    mm = matval(M)
    xr = _resolve_x_rule(f, x_rule)
    g = spectrum_of(f, kk, mm, lam_rule, x_rule=xr)
    mu2 = (g.rule.nodes / mm.b) ** 2
    if mode == "multiplier":
        vals, mx = _scaled_multiplier_inverse(g, -float(n) * mu2, np.ones_like(mu2), xr)
        out = vals * math.exp(mx) if np.isfinite(mx) else vals
        return SampledFunction(xr, out, label=getattr(f, "label", ""))
    q = float(n) * float(np.max(mu2))
    if q > SERIES_Q_MAX:
        raise ParameterError(
            f"series mode needs n*(lam_max/b)^2 <= {SERIES_Q_MAX} to keep float64 "
            f"cancellation below tolerance; got {q:.2f} (shrink the frequency rule or n)"
        )
    required = heat_series_terms_required(q)
    if series_terms is None:
        series_terms = required
    elif series_terms < required:
        raise ParameterError(
            f"series truncation {series_terms} misses the certified tail bound; "
            f"at least {required} terms are required for this grid and n"
        )
    acc = np.zeros(len(xr), dtype=np.complex128)
    coeff = 1.0
    delta_mult = np.ones_like(mu2)
    for m in range(series_terms + 1):
        if m:
            coeff *= n / m
            delta_mult = delta_mult * (-mu2)
        term = lcdt_inverse(Spectrum(g.rule, delta_mult * g.values, kk, mm), xr)
        acc = acc + coeff * term.values
    return SampledFunction(xr, acc, label=getattr(f, "label", ""))


def norm_sequence(f, k, M, p: float, n_max: int, path: str = "spectral",
                  lam_rule=None, x_rule=None) -> NormSequence:
    """L^p norms of operator powers of f, accumulated in log space."""
    kk = kval(k)
    mm = matval(M)
    if path == "spectral":
        if n_max > MAX_N_SPECTRAL:
            raise ParameterError(f"spectral path supports n_max <= {MAX_N_SPECTRAL}")
        xr = None if (isinstance(f, Spectrum) and p == 2.0) else _resolve_x_rule(f, x_rule)
        g = spectrum_of(f, kk, mm, lam_rule, x_rule=xr)
        mu = g.rule.nodes / mm.b
        logmu = _log_abs(mu)
        lognorms = []
        if p == 2.0:
            base = 2.0 * _log_abs(g.values) + np.log(g.rule.weights)
            for n in range(n_max + 1):
                L = 2.0 * n * logmu + base if n else base
                mx = float(np.max(L))
                if not np.isfinite(mx):
                    lognorms.append(-math.inf)
                else:
                    lognorms.append(0.5 * (mx + math.log(float(np.sum(np.exp(L - mx))))))
        else:
            phase_base = 1j * np.sign(mu)
            for n in range(n_max + 1):
                vals, mx = _scaled_multiplier_inverse(
                    g, n * logmu if n else np.zeros_like(mu), phase_base**n, xr
                )
                if not np.isfinite(mx):
                    lognorms.append(-math.inf)
                    continue
                nrm = lp_norm(SampledFunction(xr, vals), p)
                lognorms.append(mx + math.log(nrm) if nrm > 0 else -math.inf)
        return NormSequence.from_lognorms(p, "spectral", lognorms)
    if path == "symbolic":
        if n_max > MAX_N_SYMBOLIC:
            raise ParameterError(f"symbolic path supports n_max <= {MAX_N_SYMBOLIC}")
        if not isinstance(f, SymExpr):
            raise ParameterError("the symbolic path needs a symbolic input")
        xr = _resolve_x_rule(f, x_rule)
        minv = mm.inverse()
        lognorms = []
        e = f
        for n in range(n_max + 1):
            if n:
                e = apply_lcd(kk, minv, e)
            nrm = lp_norm(SampledFunction(xr, evaluate(e, xr.nodes)), p)
            lognorms.append(math.log(nrm) if nrm > 0 else -math.inf)
        return NormSequence.from_lognorms(p, "symbolic", lognorms)
    raise ParameterError(f"unknown path {path!r}")
