"""Certified backward orbits.

Points that leave a contracting block near 0 and land near 1 are roots of
Artin-Schreier type equations; their expansions have exponents piling up
below a finite bound, so no truncated series hits them.  They are handled
here by existence instead of by value.

Starting from an exact point ``t_E`` at step ``E``, each step back picks an
approximate preimage ``z_j`` (near 0 or near 1 as the itinerary demands)
and the smallest radius ``s_j`` such that the image of ``D(z_j, s_j)``
under ``phi_a`` contains ``D(z_(j+1), s_(j+1))``.  Since images of disks
are disks, every link holds a genuine preimage, and the chain describes a
genuine orbit ``zeta_0, ..., zeta_E = t_E`` with ``zeta_j`` in ``D(z_j, s_j)``.
The checkpoint values carry ``s_j`` as their precision, so any valuation
read off them is a valuation of the true orbit.
"""

from dataclasses import dataclass
from fractions import Fraction

from .diskcalc import image_radius, taylor_shift
from .errors import PrecisionExhausted
from .family import phi, preimage_near_one, preimage_small
from .puiseux import PuiseuxNumber, window

__all__ = ["Checkpoint", "CHAIN_WINDOW", "itinerary_pattern", "backward_chain", "phi_coeffs"]

# Relative window for chain arithmetic.  The certified radii sit within a
# couple of units of each point's valuation, so more digits buy nothing.
CHAIN_WINDOW = Fraction(16)


@dataclass(frozen=True)
class Checkpoint:
    step: int
    symbol: str
    value: PuiseuxNumber

    @property
    def radius_val(self):
        return self.value.prec


def itinerary_pattern(m, M, stages):
    """Block symbols of steps ``0 .. N_I - 1``: ``m_0`` zeros, ``M_1`` ones, ..."""
    out = []
    for i in range(stages + 1):
        if i >= 1:
            out.extend("1" * M[i - 1])
        out.extend("0" * m[i])
    return "".join(out)


def phi_coeffs(a):
    f = a.field
    cs = [PuiseuxNumber.zero(f)] * (f.p + 2)
    cs[f.p] = a
    cs[f.p + 1] = 1 - a
    return cs


def _link_radius(a, z, t, rho):
    """Smallest disk about ``z`` whose image covers ``D(t, rho)``."""
    res = phi(a, z) - t
    need = res.val_floor()
    if rho is not None:
        need = rho if need is None else min(need, rho)
    if need is None:
        return None
    g = taylor_shift(phi_coeffs(a), z)
    cands = [(need - gj.val()) / j for j, gj in enumerate(g) if j >= 1 and gj.val() is not None]
    if not cands:
        raise PrecisionExhausted("no Taylor coefficient of phi is known at the checkpoint")
    s = max(cands)
    rv, _ = image_radius(g, s)
    if rv > need:
        raise PrecisionExhausted("could not certify a backward link")
    return s


def backward_chain(a, target, step, symbols, chain_window=CHAIN_WINDOW):
    """Checkpoints for steps ``0 .. step`` ending at the exact point ``target``.

    ``symbols[j]`` selects the branch at step ``j``: ``"0"`` for the preimage
    near 0 and ``"1"`` for the one near 1.
    """
    if len(symbols) < step:
        raise ValueError("need a symbol for every step before the target")
    out = [None] * (step + 1)
    out[step] = Checkpoint(step, "*", target)
    with window(chain_window):
        aw = a.rewindow()
        t = target.rewindow()
        rho = None if target.prec is None else target.prec
        for j in range(step - 1, -1, -1):
            sym = symbols[j]
            if sym == "0":
                z, _ = preimage_small(aw, t, rho)
            else:
                z, _ = preimage_near_one(aw, t)
            s = _link_radius(aw, z, t, rho)
            z = z if s is None else z.truncate(s)
            out[j] = Checkpoint(j, sym, z)
            t, rho = z.exact(), s
    return out
