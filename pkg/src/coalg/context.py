"""Model contexts: variable layouts shared by all symbolic values.

A context fixes the ordered tuple of commuting symbols (positions, the
radical r, Laurent phase units, spectral L, parameters), which symbols are
differentiation directions, how many Clifford generators exist, and whether
formal spectral shift generators are allowed.  Every polynomial, coefficient
function and operator carries a reference to its context; mixing contexts
raises ContextMismatch.

Modes
-----
cartesian  quantum, N positions x1..xN with radical r (r^2 = sum xi^2)
radial     quantum, single free variable r plus the spectral symbol L and
           formal shift generators
reduced    quantum, bipolar half-chart: r1, r2 with radical r
           (r^2 = r1^2 + r2^2), phase units w1 = e^{i phi1/2}, w2 = e^{i phi2/2}
           (Laurent), sector labels l1, l2, four Clifford generators
classical  commuting phase space x1..xN, p1..pN with radical r and the
           angular-magnitude symbol L
polar      commuting coefficients in a single radial variable (used by the
           two-variable polar Hamiltonian templates)

All contexts share the parameter tail (hbar, kappa, mu, delta, mutilde); the
winding ratio beta is bound to an exact rational per context.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

from .errors import ContextMismatch, IndexRange
from .scalars import mpq

PARAM_TAIL = ("hbar", "kappa", "mu", "delta", "mutilde")


@dataclass(frozen=True)
class Symbol:
    """A named commuting symbol with its role in the context."""

    name: str
    kind: str  # position | radical | momentum | phase | spectral | sector | parameter


class ModelContext:
    """Immutable description of the symbol universe for one model."""

    __slots__ = (
        "mode", "N", "beta", "var_names", "index", "radical_index",
        "position_indices", "laurent_indices", "signed_indices",
        "deriv_dirs", "deriv_specs",
        "gamma_count", "shift_allowed", "symbols",
        "_factors", "_factor_ids", "_factor_pows", "_rad_pows", "_lock",
        "_cache",
    )

    def __init__(self, mode, N, beta, var_names, radical_index,
                 position_indices, laurent_indices, deriv_specs,
                 gamma_count, shift_allowed, symbols):
        self.mode = mode
        self.N = N
        self.beta = mpq(beta)
        if self.beta <= 0:
            raise ValueError("beta must be a positive rational")
        self.var_names = tuple(var_names)
        self.index = {n: i for i, n in enumerate(self.var_names)}
        self.radical_index = radical_index
        self.position_indices = tuple(position_indices)
        self.laurent_indices = frozenset(laurent_indices)
        # symbols whose exponents may go negative: phase units, and the
        # radical r (a unit in the localised coefficient ring)
        signed = set(laurent_indices)
        if radical_index is not None:
            signed.add(radical_index)
        self.signed_indices = frozenset(signed)
        # deriv_specs: name -> ("var", var_index) or ("phase", laurent_index)
        self.deriv_specs = dict(deriv_specs)
        self.deriv_dirs = tuple(self.deriv_specs)
        self.gamma_count = gamma_count
        self.shift_allowed = shift_allowed
        self.symbols = tuple(symbols)
        self._factors = []          # fid -> monic Poly
        self._factor_ids = {}       # poly key -> fid
        self._factor_pows = {}      # (fid, k) -> Poly
        self._rad_pows = {}         # k -> Poly (radical square powers)
        self._lock = threading.Lock()
        self._cache = {}            # shared memo space for catalog builders

    # -- introspection ---------------------------------------------------------

    @property
    def beta_num(self):
        return int(self.beta.numerator)

    @property
    def beta_den(self):
        return int(self.beta.denominator)

    def var(self, name):
        try:
            return self.index[name]
        except KeyError:
            raise KeyError("unknown symbol %r in %s context" % (name, self.mode))

    def nvars(self):
        return len(self.var_names)

    def require(self, other):
        if self is not other:
            raise ContextMismatch(
                "operands built over different contexts (%s vs %s)"
                % (self.mode, getattr(other, "mode", "?")))

    def require_mode(self, *modes):
        if self.mode not in modes:
            from .errors import ModeMismatch
            raise ModeMismatch("operation requires mode in %r, context is %s"
                               % (modes, self.mode))

    def __repr__(self):
        return "<ModelContext %s N=%d beta=%s>" % (self.mode, self.N, self.beta)


def _symbols_for(names, kinds):
    return tuple(Symbol(n, k) for n, k in zip(names, kinds))


def cartesian_ctx(N, beta=1):
    """Quantum cartesian context with N positions and the radical r."""
    if not 1 <= N <= 4:
        raise IndexRange("cartesian contexts support 1 <= N <= 4, got %d" % N)
    xs = tuple("x%d" % i for i in range(1, N + 1))
    names = xs + ("r",) + PARAM_TAIL
    kinds = ("position",) * N + ("radical",) + ("parameter",) * len(PARAM_TAIL)
    deriv = {x: ("var", i) for i, x in enumerate(xs)}
    return ModelContext("cartesian", N, beta, names, N, range(N), (),
                        deriv, N, False, _symbols_for(names, kinds))


def radial_ctx(beta=1):
    """Quantum radial context: free r, spectral symbol L, shift generators."""
    names = ("r", "L") + PARAM_TAIL
    kinds = ("position", "spectral") + ("parameter",) * len(PARAM_TAIL)
    deriv = {"r": ("var", 0)}
    return ModelContext("radial", 1, beta, names, None, (0,), (),
                        deriv, 0, True, _symbols_for(names, kinds))


def reduced_ctx(beta=1):
    """Bipolar half-chart context for the 4D -> 2D reduction."""
    names = ("r1", "r2", "r", "w1", "w2", "l1", "l2") + PARAM_TAIL
    kinds = ("position", "position", "radical", "phase", "phase",
             "sector", "sector") + ("parameter",) * len(PARAM_TAIL)
    deriv = {
        "r1": ("var", 0),
        "r2": ("var", 1),
        "phi1": ("phase", 3),
        "phi2": ("phase", 4),
    }
    return ModelContext("reduced", 2, beta, names, 2, (0, 1), (3, 4),
                        deriv, 4, False, _symbols_for(names, kinds))


def classical_ctx(N, beta=1):
    """Commuting phase-space context with radical r and angular symbol L."""
    if not 1 <= N <= 4:
        raise IndexRange("classical contexts support 1 <= N <= 4, got %d" % N)
    xs = tuple("x%d" % i for i in range(1, N + 1))
    ps = tuple("p%d" % i for i in range(1, N + 1))
    names = xs + ("r",) + ps + ("L",) + PARAM_TAIL
    kinds = (("position",) * N + ("radical",) + ("momentum",) * N
             + ("spectral",) + ("parameter",) * len(PARAM_TAIL))
    deriv = {x: ("var", i) for i, x in enumerate(xs)}
    deriv.update({p: ("var", N + 1 + i) for i, p in enumerate(ps)})
    return ModelContext("classical", N, beta, names, N, range(N), (),
                        deriv, 0, False, _symbols_for(names, kinds))


def polar_ctx(beta=1):
    """Scalar coefficient context in one radial variable with sector labels."""
    names = ("r", "l1", "l2") + PARAM_TAIL
    kinds = ("position", "sector", "sector") + ("parameter",) * len(PARAM_TAIL)
    deriv = {"r": ("var", 0)}
    return ModelContext("polar", 1, beta, names, None, (0,), (),
                        deriv, 0, False, _symbols_for(names, kinds))
