"""Weight modules: classical, one-parameter and interpolating, finite or windowed Verma.

Everything is written in the basis m_j (j >= 0) of weight n - 2j with

    X- m_j = m_{j+1},   X+ m_j = [j] [n - j + 1] m_{j-1},

where [a] is the bracket of the module's kind.  Matrices are sparse dicts
(row, col) -> entry; the action on m_j is column j.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .qnumbers import classical_qnum_h, interp_qnum
from .series import BiSeries, USeries

KINDS = ("classical", "one-param-h", "one-param-rh'", "interpolating")


class ModuleError(ValueError):
    pass


def bracket(kind: str, a: int, g: int = 1, order: int = 6, r: int = 1):
    """The quantum number [a] used by modules of ``kind``."""
    if kind == "classical":
        return Fraction(a)
    if kind == "one-param-h":
        return classical_qnum_h(a, order, "h")
    if kind == "one-param-rh'":
        return classical_qnum_h(a, order, "h'", scale=r)
    if kind == "interpolating":
        return interp_qnum(a, g, order).series
    raise ModuleError(f"unknown module kind {kind!r}; choose from {KINDS}")


def ring_one(kind: str, order: int):
    if kind == "classical":
        return Fraction(1)
    if kind == "one-param-h":
        return USeries.constant(order, Fraction(1), "h")
    if kind == "one-param-rh'":
        return USeries.constant(order, Fraction(1), "h'")
    return BiSeries.constant(order, Fraction(1))


# ----------------------------------------------------------------------
# sparse matrices


def _acc(out: dict, key, v):
    w = out.get(key)
    w = v if w is None else w + v
    if w:
        out[key] = w
    else:
        out.pop(key, None)


def mat_mul(A: dict, B: dict) -> dict:
    by_row: dict = {}
    for (k, j), b in B.items():
        by_row.setdefault(k, []).append((j, b))
    out: dict = {}
    for (i, k), a in A.items():
        for j, b in by_row.get(k, ()):
            _acc(out, (i, j), a * b)
    return out


def mat_add(A: dict, B: dict, scale=1) -> dict:
    out = dict(A)
    for key, b in B.items():
        _acc(out, key, b * scale if scale != 1 else b)
    return out


def mat_sub(A: dict, B: dict) -> dict:
    return mat_add(A, B, -1)


def mat_scale(A: dict, c) -> dict:
    return {k: v * c for k, v in A.items() if v * c}


def mat_power(A: dict, k: int, one_diag: dict) -> dict:
    out = one_diag
    for _ in range(k):
        out = mat_mul(A, out)
    return out


def commutator(A: dict, B: dict) -> dict:
    return mat_sub(mat_mul(A, B), mat_mul(B, A))


# ----------------------------------------------------------------------


@dataclass
class WeightModule:
    kind: str
    n: int
    g: int
    order: int
    size: int
    verma: bool
    Xp: dict
    Xm: dict
    H: dict
    C: dict
    r: int = 1
    meta: dict = field(default_factory=dict)

    @property
    def weights(self) -> list:
        return [self.n - 2 * j for j in range(self.size)]

    @property
    def window(self) -> int:
        return self.size - 1

    def bracket(self, a: int):
        return bracket(self.kind, a, self.g, self.order, self.r)

    def one(self):
        return ring_one(self.kind, self.order)

    def identity(self) -> dict:
        one = self.one()
        return {(j, j): one for j in range(self.size)}

    def matrices(self) -> dict:
        return {"X+": self.Xp, "X-": self.Xm, "H": self.H, "C": self.C}

    def same_action(self, other: "WeightModule") -> bool:
        return self.size == other.size and all(
            _mat_equal(a, b) for a, b in zip(self.matrices().values(), other.matrices().values())
        )


def _mat_equal(A: dict, B: dict) -> bool:
    return not {k: v for k, v in mat_sub(A, B).items() if v}


def default_window(n: int, g: int) -> int:
    return max(2 * n + 4, 4 * g + 4)


def build_module(kind: str, n: int, g: int = 1, order: int = 6, window: int | None = None, r: int = 1, verma: bool = False) -> WeightModule:
    """L(n)-type module (``verma=False``) or M(n) windowed at ``window``."""
    if kind not in KINDS:
        raise ModuleError(f"unknown module kind {kind!r}; choose from {KINDS}")
    if not verma:
        if n < 0:
            raise ModuleError(f"finite modules need n >= 0, got {n}")
        J = n
    else:
        J = default_window(n, g) if window is None else window
        if J < 1:
            raise ModuleError(f"Verma window must be >= 1, got {J}")
    size = J + 1
    one = ring_one(kind, order)
    Xp, Xm, H, C = {}, {}, {}, {}
    casimir = (n + 1) ** 2
    for j in range(size):
        H[(j, j)] = one * (n - 2 * j)
        C[(j, j)] = one * casimir
        if j + 1 < size:
            Xm[(j + 1, j)] = one
        if j >= 1:
            v = bracket(kind, j, g, order, r) * bracket(kind, n - j + 1, g, order, r)
            if v:
                Xp[(j - 1, j)] = v
    mod = WeightModule(kind, n, g, order, size, verma, Xp, Xm, H, C, r)
    _check_structure(mod)
    return mod


def _check_structure(mod: WeightModule):
    for (i, j) in mod.H:
        if i != j:
            raise ModuleError("H is not diagonal")
    for (i, j) in mod.Xp:
        if i != j - 1:
            raise ModuleError("X+ does not raise the weight by 2")
    for (i, j) in mod.Xm:
        if i != j + 1:
            raise ModuleError("X- does not lower the weight by 2")


# ----------------------------------------------------------------------


@dataclass
class ModuleReport:
    label: str
    residuals: dict  # check name -> {column: residual}

    @property
    def ok(self) -> bool:
        return not any(self.residuals.values())

    def failures(self) -> dict:
        return {k: v for k, v in self.residuals.items() if v}


def _nonzero_columns(M: dict, cols) -> dict:
    out = {}
    for (i, j), v in M.items():
        if j in cols and v:
            out.setdefault(j, []).append((i, v))
    return out


def scalar_weights(n: int, j: int, sign: int, root_sign: int = 1) -> tuple:
    """Eigenvalues of H_1^sign and H_{-1}^sign on m_j, sqrt(C) = root_sign (n + 1)."""
    s = root_sign * (n + 1)
    w = n - 2 * j
    return tuple(Fraction(s + e * w - sign * e, 2) for e in (1, -1))


def check_module_relations(mod: WeightModule, root_sign: int = 1, guard: int | None = None) -> ModuleReport:
    """Residuals of [H, X+-] = +-2 X+-, [C, .] = 0 and X+-X-+ = prod_e [H_e^+-]'."""
    if mod.verma:
        guard = mod.g if guard is None else guard
        cols = set(range(mod.size - guard))
    else:
        cols = set(range(mod.size))
    res = {
        "[H,X+]-2X+": _nonzero_columns(mat_sub(commutator(mod.H, mod.Xp), mat_scale(mod.Xp, 2)), cols),
        "[H,X-]+2X-": _nonzero_columns(mat_add(commutator(mod.H, mod.Xm), mat_scale(mod.Xm, 2)), cols),
        "[C,X+]": _nonzero_columns(commutator(mod.C, mod.Xp), cols),
        "[C,X-]": _nonzero_columns(commutator(mod.C, mod.Xm), cols),
        "[C,H]": _nonzero_columns(commutator(mod.C, mod.H), cols),
    }
    for sign, (A, B), tag in ((1, (mod.Xp, mod.Xm), "X+X-"), (-1, (mod.Xm, mod.Xp), "X-X+")):
        rhs = {}
        for j in cols:
            ha, hb = scalar_weights(mod.n, j, sign, root_sign)
            if ha.denominator != 1 or hb.denominator != 1:
                raise ModuleError(f"non-integral H_e eigenvalue at j={j}")
            v = mod.bracket(int(ha)) * mod.bracket(int(hb))
            if v:
                rhs[(j, j)] = v
        res[tag] = _nonzero_columns(mat_sub(mat_mul(A, B), rhs), cols)
    return ModuleReport(f"{mod.kind}{' Verma' if mod.verma else ''}(n={mod.n}, g={mod.g})", res)


def casimir_scalar(mod: WeightModule):
    """The common diagonal entry of C, checked to be a multiple of the identity."""
    diag = [mod.C.get((j, j)) for j in range(mod.size)]
    off = [k for k, v in mod.C.items() if k[0] != k[1] and v]
    if off or any(d is None or d != diag[0] for d in diag):
        raise ModuleError("C is not scalar")
    return diag[0]


# ----------------------------------------------------------------------


def _map_module(mod: WeightModule, kind: str, f: Callable, r: int = 1) -> WeightModule:
    mats = []
    for M in (mod.Xp, mod.Xm, mod.H, mod.C):
        mats.append({k: v for k, v in ((k, f(v)) for k, v in M.items()) if v})
    return WeightModule(kind, mod.n, mod.g, mod.order, mod.size, mod.verma, *mats, r=r)


def limit_maps(mod: WeightModule) -> tuple:
    """(h' = 0 slice as a one-param-h module, h = 0 slice as a one-param-rh' module with r = 1)."""
    if mod.kind != "interpolating":
        raise ModuleError(f"limit maps need an interpolating module, got {mod.kind!r}")
    return (
        _map_module(mod, "one-param-h", BiSeries.at_hp_zero),
        _map_module(mod, "one-param-rh'", BiSeries.at_h_zero),
    )


def classical_limit(mod: WeightModule) -> WeightModule:
    """Set every deformation parameter to zero."""
    return _map_module(mod, "classical", lambda v: Fraction(v.constant_term()) if hasattr(v, "constant_term") else v)


def restrict(mod: WeightModule, indices: list, kind: str | None = None, n: int | None = None, verma: bool | None = None) -> WeightModule:
    """Compress to the basis vectors ``indices`` (in order), dropping everything else."""
    pos = {j: p for p, j in enumerate(indices)}
    mats = []
    for M in (mod.Xp, mod.Xm, mod.H, mod.C):
        mats.append({(pos[i], pos[j]): v for (i, j), v in M.items() if i in pos and j in pos})
    return WeightModule(
        kind or mod.kind,
        mod.n if n is None else n,
        mod.g,
        mod.order,
        len(indices),
        mod.verma if verma is None else verma,
        *mats,
        r=mod.r,
    )


@dataclass
class SubQuotient:
    submodule: WeightModule
    quotient: WeightModule
    stable: bool


def submodule_quotient(verma: WeightModule, n: int | None = None) -> SubQuotient:
    """Split M(n) along the span of m_{n+1}, m_{n+2}, ..."""
    if not verma.verma:
        raise ModuleError("submodule_quotient needs a Verma module")
    n = verma.n if n is None else n
    if n < 0 or n != verma.n:
        raise ModuleError(f"need n in N matching the module, got {n}")
    if verma.window <= n + 1:
        raise ModuleError(f"window {verma.window} too small for n={n}; need > {n + 1}")
    inside = set(range(n + 1, verma.size))
    stable = all(
        i in inside for M in (verma.Xp, verma.Xm, verma.H, verma.C) for (i, j), v in M.items() if j in inside and v
    )
    quotient = restrict(verma, list(range(n + 1)), verma=False)
    sub = restrict(verma, sorted(inside), n=-n - 2)
    return SubQuotient(sub, quotient, stable)


# ----------------------------------------------------------------------


class Character:
    """Finite weight -> multiplicity map."""

    __slots__ = ("mult",)

    def __init__(self, mult=None):
        self.mult = {w: m for w, m in (mult or {}).items() if m}

    @classmethod
    def from_weights(cls, weights) -> "Character":
        out: dict = {}
        for w in weights:
            out[w] = out.get(w, 0) + 1
        return cls(out)

    def __add__(self, other):
        out = dict(self.mult)
        for w, m in other.mult.items():
            out[w] = out.get(w, 0) + m
        return Character(out)

    def __eq__(self, other):
        return isinstance(other, Character) and self.mult == other.mult

    __hash__ = None

    def fold(self, g: int) -> "Character":
        """e^m -> e^(m/g) if g | m, else 0."""
        return Character({w // g: m for w, m in self.mult.items() if w % g == 0})

    def to_json(self):
        return [[w, m] for w, m in sorted(self.mult.items(), reverse=True)]

    def __repr__(self):
        if not self.mult:
            return "0"
        return " + ".join(f"{m if m != 1 else ''}e^{w}" for w, m in sorted(self.mult.items(), reverse=True))


def character(mod: WeightModule, weight_of: Callable | None = None) -> Character:
    if mod.verma:
        raise ModuleError("characters are only defined here for finite modules")
    if weight_of is None:
        return Character.from_weights(mod.weights)
    return Character.from_weights(weight_of(j) for j in range(mod.size))
