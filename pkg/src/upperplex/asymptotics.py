"""Predicted exponents, constants and regimes for a parameter vector alpha.

Exponents are extended reals: alpha_i = inf gives beta_i = -inf.  Values of
beta within ``TOL`` of an integer are treated as boundary cases, for which
no predictions are made.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial, floor, inf

from .errors import RegimeError
from .sampler import ModelParams

TOL = 1e-9


def _eq(a: float, b: float) -> bool:
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= TOL


def omega_function(kind: str = "ln"):
    """Witness sequence omega(n) -> inf used to make a.a.s. bounds concrete.

    ``ln``, ``loglog`` or ``pow:c`` (n**c).
    """
    if kind == "ln":
        return lambda n: math.log(n)
    if kind == "loglog":
        return lambda n: math.log(math.log(n)) if n > math.e else 1.0
    if kind.startswith("pow:"):
        c = float(kind[4:])
        if c <= 0:
            raise ValueError("pow exponent must be positive")
        return lambda n: float(n) ** c
    raise ValueError(f"unknown omega function {kind!r}")


@dataclass(frozen=True)
class AsymptoticProfile:
    r: int
    alpha: tuple[float, ...]
    beta_i: tuple[float, ...]
    beta: float
    regime: str
    ell: int | None
    gamma: dict[int, float] = field(default_factory=dict)
    nu: dict[int, float] = field(default_factory=dict)
    ell_prime: int | None = None
    two_beta_floor: int | None = None
    d: Fraction | None = None
    D: dict[int, Fraction] = field(default_factory=dict)
    e: dict[int, float] = field(default_factory=dict)
    stratum: tuple[int, ...] = ()
    note: str = ""

    def as_dict(self) -> dict:
        def num(x):
            return x if math.isfinite(x) else ("inf" if x > 0 else "-inf")

        return {
            "r": self.r,
            "alpha": [num(a) for a in self.alpha],
            "beta_i": [num(b) for b in self.beta_i],
            "beta": num(self.beta),
            "regime": self.regime,
            "ell": self.ell,
            "gamma": {str(k): num(v) for k, v in self.gamma.items()},
            "nu": {str(k): num(v) for k, v in self.nu.items()},
            "ell_prime": self.ell_prime,
            "floor_2beta": self.two_beta_floor,
            "d": None if self.d is None else str(self.d),
            "D": {str(k): str(v) for k, v in self.D.items()},
            "e": {str(k): num(v) for k, v in self.e.items()},
            "stratum": list(self.stratum),
            "note": self.note,
        }


def _regime(beta: float, r: int) -> tuple[str, str]:
    if beta == -inf:
        return "degenerate", "all exponents infinite: X is empty"
    if beta < -TOL:
        return "U_minus", ""
    if abs(beta - round(beta)) <= TOL:
        if abs(beta - (r + 1)) <= TOL:
            return "boundary", "Y is the full r-skeleton"
        return "boundary", "integer beta: no prediction"
    return "U_ell", ""


def asymptotic_profile(params: ModelParams) -> AsymptoticProfile:
    r = params.r
    alpha = params.alpha
    beta_i = tuple(-inf if a == inf else i + 1 - a for i, a in enumerate(alpha))
    beta = max(beta_i)
    regime, note = _regime(beta, r)
    stratum = tuple(i for i, b in enumerate(beta_i) if _eq(b, beta)) if beta > -inf else ()
    if regime != "U_ell":
        return AsymptoticProfile(r, alpha, beta_i, beta, regime, None,
                                 stratum=stratum, note=note)

    ell = floor(beta)
    gamma = {k: max(beta_i[k:]) for k in range(ell, r + 1)}
    nu = {k: 2 * g - k for k, g in gamma.items()}
    ell_prime = max(k for k, v in nu.items() if v >= 0)
    d = sum((Fraction(1, (i + 1) * factorial(ell) * factorial(i - ell)) for i in stratum),
            Fraction(0))
    D = {}
    for k, g in gamma.items():
        D[k] = sum((Fraction(1, factorial(k + 1) * factorial(i - k))
                    for i in range(k, r + 1) if g > -inf and _eq(beta_i[i], g)),
                   Fraction(0))
    e = {k: gamma[k] - k for k in gamma if k > ell}
    return AsymptoticProfile(
        r, alpha, beta_i, beta, regime, ell, gamma, nu, ell_prime,
        floor(2 * beta + TOL), d, D, e, stratum, note,
    )


@dataclass
class Predictions:
    n: int
    f: dict[int, float | str]
    b_ell: float
    betti_bounds: dict[int, float | str]
    expected_g: tuple[float, ...]
    g_prime: float
    omega: float

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "f": {str(k): v for k, v in self.f.items()},
            "b_ell": self.b_ell,
            "betti": {str(k): v for k, v in self.betti_bounds.items()},
            "expected_g": list(self.expected_g),
            "g_prime": self.g_prime,
            "omega": self.omega,
        }


def predicted_counts(profile: AsymptoticProfile, n: int, omega: str = "ln") -> Predictions:
    """Leading-order predictions at a concrete n.

    f_k for k < ell is the full count; for k >= ell it is D_k n^gamma_k,
    ``"O(omega)"`` when gamma_k = 0 and 0 when gamma_k < 0.  Betti numbers
    above ell are bounded by omega(n) n^nu_k up to ell_prime and predicted 0
    elsewhere (with b_ell = d n^beta).
    """
    if profile.regime != "U_ell":
        raise RegimeError(f"no predictions in regime {profile.regime}")
    ell, r = profile.ell, profile.r
    w = omega_function(omega)(n)
    f: dict[int, float | str] = {k: float(comb(n + 1, k + 1)) for k in range(ell)}
    for k in range(ell, r + 1):
        g = profile.gamma[k]
        if g > TOL:
            f[k] = float(profile.D[k]) * n ** g
        elif _eq(g, 0.0):
            f[k] = "O(omega)"
        else:
            f[k] = 0.0
    b_ell = float(profile.d) * n ** profile.beta
    bounds: dict[int, float | str] = {}
    for k in range(r + 1):
        if k == ell:
            bounds[k] = b_ell
        elif ell < k <= profile.ell_prime:
            bounds[k] = w * n ** profile.nu[k]
        else:
            bounds[k] = 0.0
    alpha = profile.alpha
    expected_g = tuple(0.0 if a == inf else comb(n + 1, i + 1) * float(n) ** -a
                       for i, a in enumerate(alpha))
    return Predictions(n, f, b_ell, bounds, expected_g, b_ell, w)


def exponent_law_check(profile: AsymptoticProfile) -> list[str]:
    """Failed exponent laws as human-readable strings; empty means all hold."""
    if profile.regime != "U_ell":
        return []
    fails = []
    beta, ell, r = profile.beta, profile.ell, profile.r
    nu, gamma, e = profile.nu, profile.gamma, profile.e
    if not _eq(gamma[ell], beta):
        fails.append(f"gamma_ell={gamma[ell]} != beta={beta}")
    if any(i < ell for i in profile.stratum):
        fails.append(f"stratum {profile.stratum} has an index below ell={ell}")
    if not all(g < k + 1 for k, g in gamma.items()):
        fails.append("gamma_k < k+1 violated")
    if ell + 1 <= r and not nu[ell + 1] < beta:
        fails.append(f"nu_(ell+1)={nu[ell + 1]} >= beta")
    for k in range(ell, r):
        if not nu[k + 1] <= nu[k] - 1 + TOL:
            fails.append(f"nu_{k + 1}={nu[k + 1]} > nu_{k} - 1")
    top = min(r, profile.two_beta_floor)
    if not ell <= profile.ell_prime <= top <= 2 * ell + 1:
        fails.append(f"ell'={profile.ell_prime} outside [{ell}, min(r, floor 2beta)={top}]")
    if ell + 1 <= r and not e[ell + 1] < 0:
        fails.append(f"e_(ell+1)={e[ell + 1]} >= 0")
    for k in range(ell + 1, r):
        if not e[k + 1] <= e[k] - 1 + TOL:
            fails.append(f"e_{k + 1} > e_{k} - 1")
    if profile.d > profile.D[ell] or ((profile.d == profile.D[ell]) != (profile.stratum == (ell,))):
        fails.append("d <= D_ell with equality iff stratum == {ell} violated")
    return fails
