"""Complete elliptic integral K and Jacobi sn/cn/dn via the AGM.

All functions take the *parameter* m (the quantity multiplying sin^2 in
the integrand), not the modulus.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["DomainError", "agm", "elliptic_K", "jacobi"]


class DomainError(ValueError):
    pass


def agm(a: float, b: float, tol: float = 1e-16) -> float:
    for _ in range(64):
        if abs(a - b) <= tol * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return 0.5 * (a + b)


def elliptic_K(param: float) -> float:
    """``K(r) = int_0^{pi/2} (1 - r sin^2 s)^{-1/2} ds`` for ``0 <= r < 1``."""
    if not 0.0 <= param < 1.0:
        raise DomainError(f"K(r) requires 0 <= r < 1, got {param!r}")
    return math.pi / (2.0 * agm(1.0, math.sqrt(1.0 - param)))


def _agm_sequence(param: float) -> tuple[list[float], list[float]]:
    a, b, c = 1.0, math.sqrt(1.0 - param), math.sqrt(param)
    As, Cs = [a], [c]
    while abs(c) > 1e-17 and len(As) < 40:
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        As.append(a)
        Cs.append(c)
    return As, Cs


def jacobi(u, param: float):
    """Return ``(sn, cn, dn, nd)`` at ``u`` for parameter ``0 <= param <= 1``.

    Descending AGM (Landen) scheme: run the AGM to convergence, set
    ``phi_N = 2^N a_N u`` and recur ``phi_{n-1} = (phi_n + asin(c_n/a_n sin phi_n))/2``.
    """
    if not 0.0 <= param <= 1.0:
        raise DomainError(f"Jacobi functions need 0 <= param <= 1, got {param!r}")
    u = np.asarray(u, dtype=float)
    if param == 0.0:
        sn, cn, dn = np.sin(u), np.cos(u), np.ones_like(u)
        return sn, cn, dn, 1.0 / dn
    if param == 1.0:
        sech = 1.0 / np.cosh(u)
        return np.tanh(u), sech, sech, np.cosh(u)

    # reduce into one period [-2K, 2K) to keep phi_N moderate
    K = elliptic_K(param)
    u = u - 4.0 * K * np.floor((u + 2.0 * K) / (4.0 * K))

    As, Cs = _agm_sequence(param)
    n = len(As) - 1
    phi = (2.0 ** n) * As[n] * u
    for j in range(n, 0, -1):
        phi = 0.5 * (phi + np.arcsin(np.clip(Cs[j] / As[j] * np.sin(phi), -1.0, 1.0)))
    sn = np.sin(phi)
    cn = np.cos(phi)
    # 1 - m sn^2 = cn^2 + (1 - m) sn^2 avoids cancellation when sn ~ 1 and m ~ 1;
    # the cn/cos(phi_1 - phi_0) form loses ~3 digits
    dn = np.sqrt(cn * cn + (1.0 - param) * sn * sn)
    return sn, cn, dn, 1.0 / dn
