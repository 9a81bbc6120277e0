"""Jet containers: a point together with function value and partials.

Fields may be scalars or equally-shaped numpy arrays; all residual
evaluators broadcast over them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class Jet:
    """Second-order jet of a value function V(l, h, t)."""

    l: object
    h: object
    t: object
    V: object
    V_l: object
    V_h: object
    V_t: object
    V_ll: object
    V_lh: object
    V_hh: object

    def admissible(self) -> bool:
        """Strategy extraction requires V_l > 0 and V_ll < 0."""
        return bool(np.all(np.asarray(self.V_l) > 0)
                    and np.all(np.asarray(self.V_ll) < 0))


@dataclass
class WJet:
    """Second-order jet of a reduced surface W(z, h)."""

    z: object
    h: object
    W: object
    W_z: object
    W_h: object
    W_zz: object
    W_zh: object
    W_hh: object

    def admissible(self) -> bool:
        return bool(np.all(np.asarray(self.W_z) > 0)
                    and np.all(np.asarray(self.W_zz) < 0))


@dataclass
class PsiJet:
    """First-order-in-t, second-order-in-h jet of psi(h, t)."""

    h: object
    t: object
    psi: object
    psi_h: object
    psi_t: object
    psi_hh: object
