"""Time-dependent Fourier multipliers built from the resonance-interval recursion.

The scalar weight w(t, iota) is assembled backward in time from t = 2|iota|:
on each critical interval around the times iota/ell the non-resonant branch
w_NR picks up an algebraic factor and the resonant branch w_R rides on top
of it, so that 1/w records the worst-case growth a mode with dominant
frequency iota can accumulate.  The mode-selected weight w_k switches to
the resonant branch only on the resonant interval matching the x-wavenumber
k.  A^sigma combines 1/w with a Gevrey exponential and a Sobolev bracket;
because sigma runs into the hundreds all norm computations are done in log
space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .lattice import Lattice, SpectralField, efloor, iota

__all__ = [
    "WeightParams",
    "lambda_t",
    "WeightTable",
    "weight_table",
    "critical_times",
    "w_nr",
    "w_r",
    "w_k",
    "b_multiplier",
    "a_multiplier",
    "log_a_multiplier",
    "LatticeWeights",
    "lattice_weights",
    "log_weighted_l2",
    "gevrey_norm",
    "gevrey_log_norm",
    "TotalGrowthReport",
    "total_growth_check",
    "RatioSweepReport",
    "ratio_lemma_sweep",
]

_DEFAULT_SIGMAS = (212.0, 182.0, 152.0, 122.0, 92.0, 62.0, 32.0)


@dataclass(frozen=True)
class WeightParams:
    """Constants of the multiplier machinery.

    ``c_star`` scales the per-interval growth exponent, ``s`` is the Gevrey
    index, ``lambda_inf``/``delta_tilde``/``a`` parametrize the decreasing
    radius lambda(t) = lambda_inf + delta_tilde/(1+t)^a, and ``sigmas`` is
    the descending Sobolev ladder sigma_1 > ... > sigma_7.
    """

    c_star: float = 1.0
    s: float = 1.0
    lambda_inf: float = 0.1
    delta_tilde: float = 0.05
    a: float = 0.1
    sigmas: tuple[float, ...] = _DEFAULT_SIGMAS

    def __post_init__(self):
        if self.c_star <= 0:
            raise ValueError("c_star must be positive")
        if not 0.5 < self.s <= 1.0:
            raise ValueError(f"s must lie in (1/2, 1], got {self.s}")
        if self.lambda_inf <= 0 or self.delta_tilde <= 0:
            raise ValueError("lambda_inf and delta_tilde must be positive")
        a_cap = min(self.s / 4.0, self.s - 0.5)
        if not 0.0 < self.a < a_cap:
            raise ValueError(f"a must lie in (0, {a_cap}), got {self.a}")
        if len(self.sigmas) != 7:
            raise ValueError("sigmas must be a descending ladder of seven values")
        if self.sigmas[-1] < 2.0:
            raise ValueError("the last sigma must be >= 2")
        gaps = [self.sigmas[i] - self.sigmas[i + 1] for i in range(6)]
        if any(g < 30.0 for g in gaps):
            raise ValueError("consecutive sigmas must differ by at least 30")

    @property
    def mu(self) -> float:
        return 4.0 * (1.0 + 2.0 * self.c_star)

    def sigma(self, i: int) -> float:
        """1-based accessor into the sigma ladder."""
        return self.sigmas[i - 1]


def lambda_t(t: float, p: WeightParams) -> float:
    """Shrinking Gevrey radius lambda(t) = lambda_inf + delta_tilde/(1+t)^a."""
    if t < 0:
        raise ValueError("lambda_t requires t >= 0")
    return p.lambda_inf + p.delta_tilde / (1.0 + t) ** p.a


def lambda_dot(t: float, p: WeightParams) -> float:
    return -p.a * p.delta_tilde / (1.0 + t) ** (p.a + 1.0)


class WeightTable:
    """Piecewise description of w_NR / w_R for one |iota| > 1 and one c_star.

    The recursion runs backward from t0 = 2*iota.  For ell = 1..E(sqrt(iota))
    the critical interval [t_ell, t_{ell-1}] splits at the peak p = iota/ell:

      right half [p, t_{ell-1}]: w_NR = ((ell^2/iota)(1 + b|t-p|))^c_star * w_NR(t_{ell-1})
      left half  [t_ell, p]:     w_NR = (1 + a|t-p|)^(-1-c_star) * w_NR(p)

    and w_R = (ell^2/iota)(1 + {b or a}|t-p|) * w_NR on the respective halves.
    Below t_E the weight is frozen.  The interval with index ell is resonant
    when 2*sqrt(iota) <= t_ell.
    """

    def __init__(self, iota_abs: float, c_star: float):
        if iota_abs <= 1.0:
            raise ValueError("weight tables are only built for |iota| > 1")
        I = float(iota_abs)
        self.iota = I
        self.c_star = float(c_star)
        E = efloor(math.sqrt(I))
        self.ell_max = E

        # Breakpoints t_ell and peaks p_ell, ell = 1..E.
        self.t_ell = np.empty(E + 1)
        self.t_ell[0] = 2.0 * I
        ells = np.arange(1, E + 1, dtype=float)
        self.t_ell[1:] = I / ells - I / (2.0 * ells * (ells + 1.0))
        self.peaks = I / ells

        self.b_ell = np.empty(E + 1)
        self.a_ell = np.empty(E + 1)
        self.b_ell[0] = self.a_ell[0] = np.nan
        for ell in range(1, E + 1):
            decr = 1.0 - ell * ell / I
            self.b_ell[ell] = (1.0 - 1.0 / I) if ell == 1 else (2.0 * (ell - 1.0) / ell) * decr
            self.a_ell[ell] = (2.0 * (ell + 1.0) / ell) * decr

        # Backward sweep for the anchor values of log w_NR.  1/w grows like
        # exp(mu/2 sqrt(iota)), which overflows float64 well before
        # iota = 1e4 at larger c_star, so logs are the primary representation.
        self.lv_break = np.empty(E + 1)   # log w_NR at t_ell
        self.lv_peak = np.empty(E + 1)    # log w_NR at iota/ell
        self.lv_break[0] = 0.0
        self.lv_peak[0] = np.nan
        for ell in range(1, E + 1):
            self.lv_peak[ell] = self.c_star * math.log(ell * ell / I) + self.lv_break[ell - 1]
            depth = 1.0 + self.a_ell[ell] * (self.peaks[ell - 1] - self.t_ell[ell])
            self.lv_break[ell] = -(1.0 + self.c_star) * math.log(depth) + self.lv_peak[ell]

        self.log_floor = self.lv_break[E]
        two_sqrt = 2.0 * math.sqrt(I)
        self.resonant = np.zeros(E + 1, dtype=bool)
        self.resonant[1:] = self.t_ell[1:] >= two_sqrt

    @property
    def floor_value(self) -> float:
        return math.exp(self.log_floor)

    def interval_index(self, t: float) -> int:
        """Index ell with t in [t_ell, t_{ell-1}); 0 when t is outside all intervals.

        A t that lands exactly on an interior breakpoint belongs to the
        earlier-time interval; the piecewise values agree there anyway.
        """
        if t >= self.t_ell[0] or t < self.t_ell[self.ell_max]:
            return 0
        lo, hi = 1, self.ell_max
        while lo < hi:
            mid = (lo + hi) // 2
            if t > self.t_ell[mid]:
                hi = mid
            else:
                lo = mid + 1
        return lo

    def log_wnr(self, t: float) -> float:
        if t >= self.t_ell[0]:
            return 0.0
        if t <= self.t_ell[self.ell_max]:
            return self.log_floor
        ell = self.interval_index(t)
        p = self.peaks[ell - 1]
        if t >= p:
            base = (ell * ell / self.iota) * (1.0 + self.b_ell[ell] * (t - p))
            return self.c_star * math.log(base) + self.lv_break[ell - 1]
        return -(1.0 + self.c_star) * math.log(1.0 + self.a_ell[ell] * (p - t)) + self.lv_peak[ell]

    def log_wr(self, t: float) -> float:
        """Resonant branch; coincides with w_NR outside the critical intervals."""
        ell = self.interval_index(t)
        if ell == 0:
            return self.log_wnr(t)
        p = self.peaks[ell - 1]
        coef = self.b_ell[ell] if t >= p else self.a_ell[ell]
        return (math.log(ell * ell / self.iota)
                + math.log(1.0 + coef * abs(t - p)) + self.log_wnr(t))

    def wnr(self, t: float) -> float:
        return math.exp(self.log_wnr(t))

    def wr(self, t: float) -> float:
        return math.exp(self.log_wr(t))

    def resonant_interval(self, t: float) -> int:
        """Resonant interval index containing t, or 0 if none."""
        ell = self.interval_index(t)
        if ell and self.resonant[ell]:
            return ell
        return 0

    def piece_bounds(self, t: float) -> tuple[float, float]:
        """Bounds of the smooth piece (half-interval) containing t."""
        if t >= self.t_ell[0]:
            return self.t_ell[0], math.inf
        if t <= self.t_ell[self.ell_max]:
            return 0.0, self.t_ell[self.ell_max]
        ell = self.interval_index(t)
        p = self.peaks[ell - 1]
        if t >= p:
            return p, self.t_ell[ell - 1]
        return self.t_ell[ell], p

    def continuity_defect(self) -> float:
        """Largest relative mismatch of adjacent piece formulas at the breakpoints.

        Computed on log w, where |delta log w| equals the relative jump of w
        to leading order.
        """
        worst = 0.0
        for ell in range(1, self.ell_max + 1):
            p = self.peaks[ell - 1]
            top = self.t_ell[ell - 1]
            bot = self.t_ell[ell]
            scale = math.log(ell * ell / self.iota)
            anchor_above = self.lv_break[ell - 1]
            # right-half formula at the top endpoint vs the anchor above it
            right_at_top = self.c_star * (scale + math.log(1.0 + self.b_ell[ell] * (top - p)))
            worst = max(worst, abs(right_at_top))
            # left/right formulas at the peak
            worst = max(worst, abs(self.c_star * scale + anchor_above - self.lv_peak[ell]))
            # left-half formula at the bottom endpoint vs the anchor below
            ldepth = math.log(1.0 + self.a_ell[ell] * (p - bot))
            left_at_bot = -(1.0 + self.c_star) * ldepth + self.lv_peak[ell]
            worst = max(worst, abs(left_at_bot - self.lv_break[ell]))
            # resonant branch meets w_NR at both interval endpoints
            wr_top = scale + math.log(1.0 + self.b_ell[ell] * (top - p)) + right_at_top
            worst = max(worst, abs(wr_top))
            wr_bot = scale + ldepth + left_at_bot
            worst = max(worst, abs(wr_bot - self.lv_break[ell]))
        return worst


@lru_cache(maxsize=16384)
def weight_table(iota_abs: float, c_star: float) -> WeightTable:
    return WeightTable(iota_abs, c_star)


def critical_times(iota_val: float, p: WeightParams | None = None) -> WeightTable | None:
    """Interval table for |iota| > 1; None when |iota| <= 1 (weight identically 1)."""
    c_star = p.c_star if p is not None else 1.0
    if abs(iota_val) <= 1.0:
        return None
    return weight_table(abs(float(iota_val)), c_star)


def w_nr(t: float, iota_val: float, p: WeightParams) -> float:
    if abs(iota_val) <= 1.0:
        return 1.0
    return weight_table(abs(float(iota_val)), p.c_star).wnr(t)


def w_r(t: float, iota_val: float, p: WeightParams) -> float:
    if abs(iota_val) <= 1.0:
        return 1.0
    return weight_table(abs(float(iota_val)), p.c_star).wr(t)


def log_w_k(t: float, k: int, eta: float, alpha: float, p: WeightParams) -> float:
    """log of the mode-selected weight.

    The resonant branch requires k and iota to share a sign and |k| to equal
    the index of the resonant interval containing t; in particular k = 0
    always selects w_NR.
    """
    iv = iota(k, eta, alpha)
    if abs(iv) <= 1.0:
        return 0.0
    table = weight_table(abs(float(iv)), p.c_star)
    if k != 0 and k * iv > 0:
        ell = table.resonant_interval(t)
        if ell and ell == abs(k):
            return table.log_wr(t)
    return table.log_wnr(t)


def w_k(t: float, k: int, eta: float, alpha: float, p: WeightParams) -> float:
    """Mode-selected weight: w_R on the resonant interval matching k, w_NR elsewhere."""
    return math.exp(log_w_k(t, k, eta, alpha, p))


def b_multiplier(eta, alpha):
    """Anisotropic zero-mode factor sqrt(1 + |eta| + alpha^2)."""
    out = np.sqrt(1.0 + np.abs(eta) + np.asarray(alpha, dtype=float) ** 2)
    return out if isinstance(out, np.ndarray) and out.ndim else float(out)


def log_a_multiplier(sigma: float, t: float, k: int, eta: float, alpha: float,
                     p: WeightParams) -> float:
    """log of A^sigma_k = exp(lambda(t)|f|_1^s) <f>^sigma / w_k."""
    l1 = abs(k) + abs(eta) + abs(alpha)
    br2 = 1.0 + k * k + eta * eta + alpha * alpha
    return (lambda_t(t, p) * l1 ** p.s + 0.5 * sigma * math.log(br2)
            - log_w_k(t, k, eta, alpha, p))


def a_multiplier(sigma: float, t: float, k: int, eta: float, alpha: float,
                 p: WeightParams) -> float:
    return math.exp(log_a_multiplier(sigma, t, k, eta, alpha, p))


class LatticeWeights:
    """Vectorized w_k evaluation over a full lattice.

    Lattice points are grouped by |iota|; each group shares one scalar
    weight table, so an evaluation at time t costs one table lookup per
    distinct |iota| plus flat array writes.
    """

    def __init__(self, lattice: Lattice, params: WeightParams):
        self.lattice = lattice
        self.params = params
        iv = lattice.iota_vals.ravel()
        kk = np.broadcast_to(lattice.kx, lattice.shape).ravel()
        self._abs_k = np.abs(kk).astype(int)
        self._sign_ok = kk * iv > 0
        abs_iota = np.abs(iv)
        self._vals, self._inverse = np.unique(abs_iota, return_inverse=True)
        self._groups = [np.nonzero(self._inverse == i)[0] for i in range(len(self._vals))]

    def log_w(self, t: float) -> np.ndarray:
        out = np.zeros(self.lattice.size)
        for gi, val in enumerate(self._vals):
            if val <= 1.0:
                continue
            idx = self._groups[gi]
            table = weight_table(float(val), self.params.c_star)
            out[idx] = table.log_wnr(t)
            ell = table.resonant_interval(t)
            if ell:
                res = idx[(self._abs_k[idx] == ell) & self._sign_ok[idx]]
                if res.size:
                    out[res] = table.log_wr(t)
        return out.reshape(self.lattice.shape)

    def w(self, t: float) -> np.ndarray:
        return np.exp(self.log_w(t))

    def log_j(self, t: float) -> np.ndarray:
        return -self.log_w(t)

    def dlogw_dt(self, t: float) -> np.ndarray:
        """One-sided difference of log w_k, snapped inside the smooth piece.

        Nonnegative by construction on [t_E, 2 iota] where w is nondecreasing;
        zero on the frozen and trivial regions.
        """
        out = np.zeros(self.lattice.size)
        h0 = 1e-4 * max(1.0, t)
        for gi, val in enumerate(self._vals):
            if val <= 1.0:
                continue
            idx = self._groups[gi]
            table = weight_table(float(val), self.params.c_star)
            lo, hi = table.piece_bounds(t)
            if not math.isfinite(hi):          # t above 2 iota: w constant 1
                continue
            if hi <= table.t_ell[table.ell_max]:  # frozen region
                continue
            h = min(h0, 0.25 * (hi - lo))
            if h <= 0:
                continue
            t1 = min(max(t, lo + h), hi)
            t0 = t1 - h
            d_nr = max(0.0, (table.log_wnr(t1) - table.log_wnr(t0)) / h)
            ell = table.resonant_interval(t)
            if ell:
                res_mask = (self._abs_k[idx] == ell) & self._sign_ok[idx]
                d_r = max(0.0, (table.log_wr(t1) - table.log_wr(t0)) / h)
                out[idx] = np.where(res_mask, d_r, d_nr)
            else:
                out[idx] = d_nr
        return out.reshape(self.lattice.shape)


@lru_cache(maxsize=8)
def lattice_weights(lattice: Lattice, params: WeightParams) -> LatticeWeights:
    return LatticeWeights(lattice, params)


def log_weighted_l2(lattice: Lattice, coeffs: np.ndarray, logw: np.ndarray,
                     mask: np.ndarray | None = None) -> float:
    """log of sqrt(delta_eta * sum |exp(logw) c|^2), stable for huge weights."""
    mag = np.abs(coeffs)
    if mask is not None:
        mag = np.where(mask, mag, 0.0)
    nonzero = mag > 0
    if not np.any(nonzero):
        return -math.inf
    with np.errstate(divide="ignore"):
        m = np.where(nonzero, np.log(np.where(nonzero, mag, 1.0)) + logw, -math.inf)
    top = float(np.max(m))
    if not math.isfinite(top):
        return -math.inf
    s = float(np.sum(np.exp(2.0 * (m[nonzero] - top))))
    return top + 0.5 * (math.log(s) + math.log(lattice.delta_eta))


def gevrey_log_norm(fieldv: SpectralField, sigma: float, t: float, p: WeightParams,
                    use_j: bool = False, use_b: bool = False,
                    mask: np.ndarray | None = None) -> float:
    """log of the Gevrey-Sobolev norm; -inf for the zero field."""
    lat = fieldv.lattice
    logw = lambda_t(t, p) * lat.l1 ** p.s + sigma * lat.log_brackets
    if use_j:
        logw = logw + lattice_weights(lat, p).log_j(t)
    if use_b:
        logw = logw + 0.5 * np.log(1.0 + np.abs(lat.eta) + lat.alpha**2)
    return log_weighted_l2(lat, fieldv.coeffs, logw, mask)


def gevrey_norm(fieldv: SpectralField, sigma: float, t: float, p: WeightParams,
                use_j: bool = False, use_b: bool = False,
                mask: np.ndarray | None = None) -> float:
    ln = gevrey_log_norm(fieldv, sigma, t, p, use_j, use_b, mask)
    if ln == -math.inf:
        return 0.0
    return math.exp(ln) if ln < 709.0 else math.inf


@dataclass(frozen=True)
class TotalGrowthReport:
    """Smallest K with 1/w(0, iota) <= K exp(mu/2 sqrt(iota)) over a iota sweep."""

    c_star: float
    mu: float
    iota_max: float
    constant: float
    worst_iota: float
    passed: bool

    def __bool__(self) -> bool:
        return self.passed


def total_growth_check(iota_max: float, p: WeightParams, n_grid: int = 400,
                       k_cap: float = 10.0) -> TotalGrowthReport:
    """Sweep the total-growth bound 1/w(0,iota) <= K e^{(mu/2) sqrt(iota)}.

    Uses a log grid on (1, iota_max] plus the integers below 100 where the
    interval structure changes fastest.
    """
    if iota_max <= 1.0:
        raise ValueError("iota_max must exceed 1")
    grid = set(np.geomspace(1.001, iota_max, n_grid).tolist())
    grid.update(float(i) for i in range(2, min(101, int(iota_max) + 1)))
    grid.update([float(iota_max)])
    mu = p.mu
    worst_log_k, worst_iota = -math.inf, 0.0
    for iv in sorted(grid):
        if iv <= 1.0:
            continue
        log_growth = -weight_table(iv, p.c_star).log_floor
        log_k = log_growth - 0.5 * mu * math.sqrt(iv)
        if log_k > worst_log_k:
            worst_log_k, worst_iota = log_k, iv
    worst_k = math.exp(worst_log_k) if worst_log_k < 700.0 else math.inf
    return TotalGrowthReport(p.c_star, mu, iota_max, worst_k, worst_iota,
                             worst_k <= k_cap)


@dataclass
class RatioSweepReport:
    """Empirical supremum of lhs/rhs for one of the multiplier-ratio estimates."""

    lemma: str
    samples_requested: int
    samples_used: int
    empirical_constant: float
    worst_tuple: tuple = field(default=())

    def csv_row(self) -> list:
        return [self.lemma, self.samples_used, f"{self.empirical_constant:.6e}",
                " ".join(str(x) for x in self.worst_tuple)]


def _random_frequency(rng: np.random.Generator, delta_eta: float = 0.25):
    k = int(rng.integers(-40, 41))
    j = int(rng.integers(-160, 161))
    alpha = int(rng.integers(-40, 41))
    return k, delta_eta * j, alpha


def _random_pair(rng: np.random.Generator, delta_eta: float = 0.25):
    """Frequency pair; half the draws are near-diagonal so that the
    low-separation support conditions of the ratio estimates get exercised."""
    f2 = _random_frequency(rng, delta_eta)
    if rng.uniform() < 0.5:
        f1 = (f2[0] + int(rng.integers(-3, 4)),
              f2[1] + delta_eta * int(rng.integers(-12, 13)),
              f2[2] + int(rng.integers(-3, 4)))
    else:
        f1 = _random_frequency(rng, delta_eta)
    return f1, f2


def ratio_lemma_sweep(lemma: str, sample_count: int, p: WeightParams,
                      seed: int = 0) -> RatioSweepReport:
    """Randomized sweep probing one of the weight-ratio estimates.

    ``rNR``:       w_NR(t,i1)/w_NR(t,i2) <= C exp(mu |i1-i2|^(1/2)).
    ``ratioJ``:    J_k/J_l <= C (indicator-selected factor) exp(2 mu |df|^(1/2)), t > 10.
    ``shortTime``: |J_k/J_l - 1| <= C <df> / (sqrt|i1| + sqrt|i2|) exp(3 mu |df|^(1/2))
                   for t <= min(sqrt|i1|, sqrt|i2|)/2.

    Inadmissible tuples are skipped; the empirical constant is the largest
    lhs/rhs over admissible samples with the implicit constant set to 1.
    """
    if lemma not in ("rNR", "ratioJ", "shortTime"):
        raise ValueError(f"unknown lemma sweep {lemma!r}")
    rng = np.random.default_rng(seed)
    mu = p.mu
    sup_log, worst, used = -math.inf, (), 0

    for _ in range(sample_count):
        f1, f2 = _random_pair(rng)
        i1 = iota(*f1)
        i2 = iota(*f2)
        df = (abs(f1[0] - f2[0]) + abs(f1[1] - f2[1]) + abs(f1[2] - f2[2]))

        if lemma == "rNR":
            t = float(rng.uniform(0.0, 2.0 * max(abs(i1), abs(i2), 1.0) + 5.0))
            log_lhs = _log_wnr_val(t, i1, p) - _log_wnr_val(t, i2, p)
            log_rhs = mu * math.sqrt(df)
        elif lemma == "ratioJ":
            t = float(rng.uniform(10.0, 2.0 * max(abs(i1), abs(i2), 6.0)))
            if t <= 10.0:
                continue
            # J_k / J_l = w_l / w_k
            log_lhs = (log_w_k(t, f2[0], f2[1], f2[2], p)
                       - log_w_k(t, f1[0], f1[1], f1[2], p))
            k, l = f1[0], f2[0]
            in1 = _in_resonant(t, k, i1, p)
            in2 = _in_resonant(t, l, i2, p)
            if in1 and not in2 and k != l:
                log_factor = math.log(abs(i1) / (k * k * (1.0 + abs(t - i1 / k))))
            elif not in1 and in2:
                log_factor = math.log(l * l * (1.0 + abs(t - i2 / l)) / abs(i2))
            else:
                l1f2 = abs(f2[0]) + abs(f2[1]) + abs(f2[2])
                if df > (3.0 / 16.0) * l1f2:
                    continue  # outside the lemma's support
                log_factor = 0.0
            log_rhs = log_factor + 2.0 * mu * math.sqrt(df)
        else:  # shortTime
            cap = 0.5 * min(math.sqrt(abs(i1)), math.sqrt(abs(i2)))
            if cap <= 0:
                continue
            t = float(rng.uniform(0.0, cap))
            diff = abs(math.expm1(log_w_k(t, f2[0], f2[1], f2[2], p)
                                  - log_w_k(t, f1[0], f1[1], f1[2], p)))
            if diff == 0.0:
                used += 1
                continue
            log_lhs = math.log(diff)
            br = math.sqrt(1.0 + df * df)
            log_rhs = (math.log(br / (math.sqrt(abs(i1)) + math.sqrt(abs(i2))))
                       + 3.0 * mu * math.sqrt(df))

        used += 1
        log_ratio = log_lhs - log_rhs
        if log_ratio > sup_log:
            sup_log, worst = log_ratio, (t, *f1, *f2)

    sup = math.exp(sup_log) if sup_log < 700.0 else math.inf
    return RatioSweepReport(lemma, sample_count, used, sup, worst)


def _log_wnr_val(t: float, iota_val: float, p: WeightParams) -> float:
    if abs(iota_val) <= 1.0:
        return 0.0
    return weight_table(abs(float(iota_val)), p.c_star).log_wnr(t)


def _in_resonant(t: float, k: int, iota_val: float, p: WeightParams) -> bool:
    if k == 0 or abs(iota_val) <= 1.0 or k * iota_val <= 0:
        return False
    table = weight_table(abs(float(iota_val)), p.c_star)
    ell = table.resonant_interval(t)
    return bool(ell) and ell == abs(k)
