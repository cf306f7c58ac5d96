"""Fully analytic path for constant coefficients a(x) = a0.

Three pieces: the closed-form fundamental pair, the first integral
E = p^2 + a0 q^2 - c/q^2 obtained by multiplying the equation by y' and
integrating, and the closed form of z = y^2, which satisfies the forced
linear oscillator z'' + 4 a0 z = 2E with z(x0) = q^2, z'(x0) = 2 p q.

Hyperbolic quantities are evaluated in the exponential basis (coefficients
on e^{k dx} and e^{-k dx} formed once from the initial data) instead of
cosh/sinh combinations; that keeps decay-dominated solutions, where the
cosh and sinh parts cancel, accurate in relative terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import SingularOrInvalidError
from .linode import FundamentalPairState
from .problem import SolutionSample

#: Below this magnitude a0 is treated as exactly zero; the oscillatory and
#: hyperbolic formulas lose all significant digits before this point.
FLAT_THRESHOLD = 1e-13


def energy_constant(a0: float, c: float, q: float, p: float) -> float:
    """First-integral value E = p^2 + a0 q^2 - c/q^2 (requires q != 0)."""
    return p * p + a0 * q * q - c / (q * q)


class ClosedFormPair:
    """Evaluable closed-form fundamental pair for constant a0.

    With dx = x - x0:

    * a0 > 0, w = sqrt(a0):   u = q cos(w dx) + (p/w) sin(w dx),
      v = sin(w dx)/(q w)
    * a0 = 0:                 u = q + p dx, v = dx/q
    * a0 < 0, k = sqrt(-a0):  u = q cosh(k dx) + (p/k) sinh(k dx),
      v = sinh(k dx)/(q k)
    """

    def __init__(self, a0: float, q: float, p: float, x0: float):
        self.a0 = float(a0)
        self.q = float(q)
        self.p = float(p)
        self.x0 = float(x0)
        if abs(a0) < FLAT_THRESHOLD:
            self.kind = "flat"
            self.omega = 0.0
        elif a0 > 0:
            self.kind = "oscillatory"
            self.omega = math.sqrt(a0)
        else:
            self.kind = "hyperbolic"
            self.omega = math.sqrt(-a0)
            k = self.omega
            # exponential-basis coefficients for u
            self._au = 0.5 * (q + p / k)
            self._bu = 0.5 * (q - p / k)

    def state(self, x: float) -> FundamentalPairState:
        dx = x - self.x0
        q, p, w = self.q, self.p, self.omega
        if self.kind == "flat":
            return FundamentalPairState(
                x=x, u=q + p * dx, du=p, v=dx / q, dv=1.0 / q
            )
        if self.kind == "oscillatory":
            cos_ = math.cos(w * dx)
            sin_ = math.sin(w * dx)
            return FundamentalPairState(
                x=x,
                u=q * cos_ + (p / w) * sin_,
                du=-q * w * sin_ + p * cos_,
                v=sin_ / (q * w),
                dv=cos_ / q,
            )
        ep = math.exp(w * dx)
        em = math.exp(-w * dx)
        return FundamentalPairState(
            x=x,
            u=self._au * ep + self._bu * em,
            du=w * (self._au * ep - self._bu * em),
            v=(ep - em) / (2.0 * q * w),
            dv=(ep + em) / (2.0 * q),
        )

    def factors(self, x: float, c: float) -> tuple[float, float]:
        """(u - sqrt(c) v, u + sqrt(c) v) for c > 0, evaluated stably.

        Each factor solves the linear pair equation itself, so its zeros
        are the singular points of the composed solution.
        """
        if c <= 0:
            raise ValueError("factors are defined for c > 0 only")
        s = math.sqrt(c)
        dx = x - self.x0
        q, p, w = self.q, self.p, self.omega
        m_minus = p - s / q
        m_plus = p + s / q
        if self.kind == "flat":
            return q + m_minus * dx, q + m_plus * dx
        if self.kind == "oscillatory":
            cos_ = math.cos(w * dx)
            sin_ = math.sin(w * dx)
            return (
                q * cos_ + (m_minus / w) * sin_,
                q * cos_ + (m_plus / w) * sin_,
            )
        ep = math.exp(w * dx)
        em = math.exp(-w * dx)
        w_minus = 0.5 * (q + m_minus / w) * ep + 0.5 * (q - m_minus / w) * em
        w_plus = 0.5 * (q + m_plus / w) * ep + 0.5 * (q - m_plus / w) * em
        return w_minus, w_plus

    def discriminant(self, x: float, c: float) -> float:
        """u^2 - c v^2, factored for c > 0 so no catastrophic subtraction
        occurs; a plain positive sum for c < 0."""
        if c > 0:
            w_minus, w_plus = self.factors(x, c)
            return w_minus * w_plus
        st = self.state(x)
        return st.u * st.u + (-c) * st.v * st.v


def closed_form_pair(a0: float, q: float, p: float, x0: float) -> ClosedFormPair:
    """Analytic fundamental pair with the standard initial data."""
    return ClosedFormPair(a0, q, p, x0)


@dataclass(frozen=True)
class ZClosedForm:
    """Closed form of z(x) = y(x)^2 for constant a0.

    kind 'oscillatory' (a0 > 0):  z = mean + cos_amp cos(2 w dx) + sin_amp sin(2 w dx)
    kind 'hyperbolic'  (a0 < 0):  z = mean + cos_amp cosh(2 k dx) + sin_amp sinh(2 k dx)
    kind 'flat'        (a0 = 0):  z = z0 + z1 dx + z2 dx^2

    All three satisfy z'' + 4 a0 z = 2 E with z(x0) = q^2, z'(x0) = 2 p q.
    """

    a0: float
    energy: float
    x0: float
    kind: str
    mean: float = 0.0
    cos_amp: float = 0.0
    sin_amp: float = 0.0
    z0: float = 0.0
    z1: float = 0.0
    z2: float = 0.0

    @property
    def omega(self) -> float:
        return math.sqrt(abs(self.a0)) if self.kind != "flat" else 0.0

    def value(self, x: float) -> float:
        dx = x - self.x0
        if self.kind == "flat":
            return self.z0 + dx * (self.z1 + dx * self.z2)
        w2 = 2.0 * self.omega
        if self.kind == "oscillatory":
            return (self.mean + self.cos_amp * math.cos(w2 * dx)
                    + self.sin_amp * math.sin(w2 * dx))
        p_amp = 0.5 * (self.cos_amp + self.sin_amp)
        m_amp = 0.5 * (self.cos_amp - self.sin_amp)
        return self.mean + p_amp * math.exp(w2 * dx) + m_amp * math.exp(-w2 * dx)

    def deriv(self, x: float) -> float:
        dx = x - self.x0
        if self.kind == "flat":
            return self.z1 + 2.0 * self.z2 * dx
        w2 = 2.0 * self.omega
        if self.kind == "oscillatory":
            return w2 * (-self.cos_amp * math.sin(w2 * dx)
                         + self.sin_amp * math.cos(w2 * dx))
        p_amp = 0.5 * (self.cos_amp + self.sin_amp)
        m_amp = 0.5 * (self.cos_amp - self.sin_amp)
        return w2 * (p_amp * math.exp(w2 * dx) - m_amp * math.exp(-w2 * dx))

    def second_deriv(self, x: float) -> float:
        if self.kind == "flat":
            return 2.0 * self.z2
        # z'' = 2E - 4 a0 z, evaluated directly from the modal form
        return -4.0 * self.a0 * (self.value(x) - self.mean)


def z_closed_form(a0: float, c: float, q: float, p: float,
                  x0: float) -> ZClosedForm:
    """Solve z'' + 4 a0 z = 2E, z(x0) = q^2, z'(x0) = 2 p q in closed form."""
    energy = energy_constant(a0, c, q, p)
    if abs(a0) < FLAT_THRESHOLD:
        return ZClosedForm(
            a0=0.0, energy=energy, x0=x0, kind="flat",
            z0=q * q, z1=2.0 * p * q, z2=energy,
        )
    mean = energy / (2.0 * a0)
    cos_amp = q * q - mean
    root = math.sqrt(abs(a0))
    sin_amp = p * q / root
    kind = "oscillatory" if a0 > 0 else "hyperbolic"
    return ZClosedForm(
        a0=a0, energy=energy, x0=x0, kind=kind,
        mean=mean, cos_amp=cos_amp, sin_amp=sin_amp,
    )


def y_from_z(zf: ZClosedForm, branch_sign: float, x: float) -> SolutionSample:
    """y = branch_sign sqrt(z(x)) with dy = z'(x)/(2y)."""
    z = zf.value(x)
    if z <= 0.0:
        raise SingularOrInvalidError(x, z)
    y = branch_sign * math.sqrt(z)
    return SolutionSample(x=x, y=y, dy=zf.deriv(x) / (2.0 * y),
                          method="closed_form")


def pair_z_consistency(a0: float, c: float, q: float, p: float, x0: float,
                       xs) -> float:
    """max over the grid of |u^2 - c v^2 - z(x)|; analytically zero."""
    pair = closed_form_pair(a0, q, p, x0)
    zf = z_closed_form(a0, c, q, p, x0)
    worst = 0.0
    for x in xs:
        st = pair.state(x)
        lhs = st.u * st.u - c * st.v * st.v
        deviation = abs(lhs - zf.value(x))
        if deviation > worst:
            worst = deviation
    return worst
