"""Finite-dimensional strategies and the optimality conditions they must meet.

A strategy is a family ``E[x, a]`` of ``m x m`` complex matrices (a PVM when
every element is a projection, a POVM when they are merely positive). Its
density is ``p(a, b | x, y) = Re tr_m(E[x, a] E[y, b])`` with the normalised
trace ``tr_m = Tr / m``.

Optimality checks
-----------------
For a question ``x`` the losing probability depends on ``E[x, :]`` only
through ``sum_a tr_m(E[x, a] Q[x, a])`` where, over the null set ``N``,

    Q[x, a] = sum_{y != x, b} (pi(x, y) [(x,y,a,b) in N] + pi(y, x) [(y,x,b,a) in N]) E[y, b].

Write ``Omega_x = sum_a E[x, a] Q[x, a]``. An optimal PVM satisfies

* ``Omega_x`` is Hermitian (first-order condition);
* ``E_a (Q_b - Q_a) E_a + (delta_a - delta_b) E_a >= 0`` for ``a != b``, with
  ``delta_a = pi(x, x) rule(x, x, a, a)`` (exchange inequality);
* if every diagonal answer pair ``(x, x, a, a)`` wins:
  ``Q_b - Omega_x >= 0`` and ``(Q_b - Omega_x) E_b = 0 = E_b (Q_b - Omega_x)``,
  and summing over ``b``: ``sum_b Q_b - k Omega_x >= 0``.

The inequalities are oriented for ``Q`` built from the *null* set, as
defined above; they are the losing-set mirror image of the winning-set
statements (``Q^win_a = c_x I - Q_a`` with ``c_x`` independent of ``a``).

Residual norms reported by the checkers are normalised Frobenius norms
``sqrt(tr_m(X^* X))``; PSD tests report the smallest eigenvalue.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .games import GameInstance

FAMILY_TOL = 1e-9
CHECK_TOL = 1e-8
FD_STEP = 1e-5


class InvariantError(ValueError):
    """A strategy object violates the invariants of its type."""


def _herm(x: np.ndarray) -> np.ndarray:
    return 0.5 * (x + x.conj().swapaxes(-1, -2))


def tau_norm(x: np.ndarray) -> float:
    """Normalised Frobenius norm ``sqrt(tr_m(X^* X))``."""
    x = np.asarray(x)
    return float(np.linalg.norm(x) / np.sqrt(x.shape[-1]))


def _as_family_array(e) -> np.ndarray:
    e = np.asarray(e, dtype=np.complex128)
    if e.ndim != 4 or e.shape[2] != e.shape[3]:
        raise InvariantError(f"expected an (n, k, m, m) array, got shape {e.shape}")
    if min(e.shape) == 0:
        raise InvariantError("empty family")
    if not np.all(np.isfinite(e)):
        raise InvariantError("family has non-finite entries")
    return e


def _check_resolution(e: np.ndarray, tol: float) -> None:
    m = e.shape[2]
    eye = np.eye(m)
    herm_err = np.linalg.norm(e - e.conj().swapaxes(-1, -2), axis=(-1, -2)).max()
    if herm_err > tol:
        raise InvariantError(f"element not Hermitian (error {herm_err:.3e})")
    sum_err = np.linalg.norm(e.sum(axis=1) - eye, axis=(-1, -2)).max()
    if sum_err > tol:
        raise InvariantError(f"elements of a question do not sum to I (error {sum_err:.3e})")


@dataclass(frozen=True, eq=False)
class PovmFamily:
    """``e[x, a]``: positive ``m x m`` matrices summing to ``I`` for every ``x``."""

    e: np.ndarray

    def __post_init__(self):
        e = _as_family_array(self.e)
        _check_resolution(e, FAMILY_TOL)
        for x, a in np.ndindex(*e.shape[:2]):
            lmin = linalg.hermitian_lambda_min(e[x, a])
            if lmin < -FAMILY_TOL:
                raise InvariantError(f"element ({x}, {a}) not PSD (lambda_min {lmin:.3e})")
        e = e.copy()
        e.setflags(write=False)
        object.__setattr__(self, "e", e)

    @property
    def n(self) -> int:
        return self.e.shape[0]

    @property
    def k(self) -> int:
        return self.e.shape[1]

    @property
    def m(self) -> int:
        return self.e.shape[2]

    def is_projective(self, tol: float = FAMILY_TOL) -> bool:
        e = self.e
        return bool(np.linalg.norm(e @ e - e, axis=(-1, -2)).max() <= tol)


class PvmFamily(PovmFamily):
    """A POVM family whose elements are all orthogonal projections."""

    def __post_init__(self):
        e = _as_family_array(self.e)
        _check_resolution(e, FAMILY_TOL)
        err = np.linalg.norm(e @ e - e, axis=(-1, -2)).max()
        if err > FAMILY_TOL:
            raise InvariantError(f"element is not a projection (error {err:.3e})")
        e = e.copy()
        e.setflags(write=False)
        object.__setattr__(self, "e", e)

    @classmethod
    def from_assignment(cls, f, k: int) -> "PvmFamily":
        """One-dimensional PVM of the deterministic strategy ``x -> f[x]``."""
        f = np.asarray(f, dtype=np.int64)
        e = np.zeros((f.size, k, 1, 1), dtype=np.complex128)
        e[np.arange(f.size), f, 0, 0] = 1.0
        return cls(e)


@dataclass(frozen=True, eq=False)
class Density:
    """Conditional distribution stored as ``p[x, y, a, b] = p(a, b | x, y)``."""

    p: np.ndarray
    tol: float = field(default=FAMILY_TOL, compare=False)

    def __post_init__(self):
        p = np.asarray(self.p, dtype=np.float64)
        if p.ndim != 4:
            raise InvariantError(f"density must be 4-dimensional, got shape {p.shape}")
        tol = self.tol
        if np.any(p < -tol):
            raise InvariantError("density has negative entries")
        norm_err = np.abs(p.sum(axis=(2, 3)) - 1.0).max()
        if norm_err > tol:
            raise InvariantError(f"density not normalised (error {norm_err:.3e})")
        alice = p.sum(axis=3)  # [x, y, a]
        bob = p.sum(axis=2)  # [x, y, b]
        ns = max(
            np.abs(alice - alice[:, :1, :]).max(),
            np.abs(bob - bob[:1, :, :]).max(),
        )
        if ns > tol:
            raise InvariantError(f"density is signalling (error {ns:.3e})")
        p = p.copy()
        p.setflags(write=False)
        object.__setattr__(self, "p", p)

    @property
    def shape(self):
        return self.p.shape

    def is_synchronous(self, tol: float = FAMILY_TOL) -> bool:
        n_x, n_y, k_a, k_b = self.p.shape
        if n_x != n_y or k_a != k_b:
            return False
        diag = self.p[np.arange(n_x), np.arange(n_x)]
        off = ~np.eye(k_a, dtype=bool)
        return bool(np.all(np.abs(diag[:, off]) <= tol))

    def is_symmetric(self, tol: float = FAMILY_TOL) -> bool:
        """``p(a, b | x, y) == p(b, a | y, x)``."""
        p = self.p
        return p.shape == p.transpose(1, 0, 3, 2).shape and bool(
            np.abs(p - p.transpose(1, 0, 3, 2)).max() <= tol
        )


def density_from_pvm(fam: PovmFamily) -> Density:
    """``p(a, b | x, y) = Re tr_m(E[x, a] E[y, b])``."""
    e = fam.e
    p = np.einsum("xaij,ybji->xyab", e, e).real / fam.m
    return Density(np.where(np.abs(p) < 1e-15, 0.0, p))


def deterministic_density(f_a, f_b, k_a: int, k_b: int) -> Density:
    f_a = np.asarray(f_a, dtype=np.int64)
    f_b = np.asarray(f_b, dtype=np.int64)
    p = np.zeros((f_a.size, f_b.size, k_a, k_b))
    p[np.arange(f_a.size)[:, None], np.arange(f_b.size)[None, :], f_a[:, None], f_b[None, :]] = 1.0
    return Density(p)


def uniform_sync_density(n: int, c: int) -> Density:
    """``1/c^2`` for ``x != y``; ``1/c`` on ``x = y, a = b``; 0 on ``x = y, a != b``."""
    if n < 1 or c < 1:
        raise ValueError("need n, c >= 1")
    p = np.full((n, n, c, c), 1.0 / c**2)
    idx = np.arange(n)
    p[idx, idx] = np.eye(c) / c
    return Density(p)


def shared_randomness_mixture(n: int, c: int, cap: int = 1 << 16) -> Density:
    """Average of the deterministic synchronous densities over all colourings.

    Sampling a tuple ``(a_1, ..., a_n)`` uniformly and answering ``a_x``
    realises :func:`uniform_sync_density` as a classical synchronous strategy.
    """
    if c**n > cap:
        raise ValueError(f"{c}^{n} tuples exceeds cap {cap}")
    acc = np.zeros((n, n, c, c))
    for t in itertools.product(range(c), repeat=n):
        acc += deterministic_density(t, t, c, c).p
    return Density(acc / c**n)


def abelian_uniform_family(n: int, c: int, cap: int = 256) -> PvmFamily:
    """Diagonal PVM in dimension ``c^n``: ``E[x, a]`` projects onto tuples with entry ``x`` equal to ``a``."""
    m = c**n
    if m > cap:
        raise ValueError(f"dimension {m} exceeds cap {cap}")
    tuples = np.array(list(itertools.product(range(c), repeat=n))).reshape(m, n)
    e = np.zeros((n, c, m, m), dtype=np.complex128)
    diag = np.arange(m)
    for x in range(n):
        for a in range(c):
            e[x, a, diag, diag] = (tuples[:, x] == a).astype(float)
    return PvmFamily(e)


def game_value(inst: GameInstance, p: Density) -> float:
    """``sum pi(x, y) rule(x, y, a, b) p(a, b | x, y)``."""
    if p.shape != inst.game.shape:
        raise ValueError(f"density shape {p.shape} does not match game shape {inst.game.shape}")
    return float(np.sum(inst.weights() * p.p))


# -- optimality conditions -------------------------------------------------


def _square_fam_check(inst: GameInstance, fam: PovmFamily) -> None:
    g = inst.game
    if not g.is_square:
        raise ValueError(f"optimality conditions need a square game, got shape {g.shape}")
    if (fam.n, fam.k) != (g.n_a, g.k_a):
        raise ValueError(
            f"family has {fam.n} questions x {fam.k} answers, game has {g.n_a} x {g.k_a}"
        )


def null_coefficients(inst: GameInstance) -> np.ndarray:
    """``c[x, a, y, b]`` with ``Q[x, a] = sum_{y, b} c[x, a, y, b] E[y, b]``."""
    pi = inst.prior.pi
    lose = 1.0 - inst.game.rule.astype(np.float64)  # [x, y, a, b]
    first = pi[:, :, None, None] * lose  # (x, y, a, b) in N
    second = (pi[:, :, None, None] * lose).transpose(1, 0, 3, 2)  # (y, x, b, a) in N
    c = (first + second).transpose(0, 2, 1, 3).copy()  # [x, a, y, b]
    n = pi.shape[0]
    c[np.arange(n), :, np.arange(n), :] = 0.0
    return c


def q_operators(inst: GameInstance, fam: PovmFamily) -> np.ndarray:
    """``Q[x, a]`` as an ``(n, k, m, m)`` array, prior factors included."""
    _square_fam_check(inst, fam)
    return np.einsum("xayb,ybij->xaij", null_coefficients(inst), fam.e)


def omega_operators(inst: GameInstance, fam: PovmFamily, q=None) -> np.ndarray:
    """``Omega[x] = sum_a E[x, a] Q[x, a]``."""
    q = q_operators(inst, fam) if q is None else q
    return np.einsum("xaij,xajk->xik", fam.e, q)


def losing_probability(inst: GameInstance, fam: PovmFamily) -> float:
    """``sum_N pi(x, y) tr_m(E[x, a] E[y, b])``."""
    pi = inst.prior.pi
    lose = 1.0 - inst.game.rule
    t = np.einsum("xaij,ybji->xyab", fam.e, fam.e).real / fam.m
    return float(np.sum(pi[:, :, None, None] * lose * t))


@dataclass(frozen=True)
class CheckResult:
    passed: bool
    value: float

    def __iter__(self):
        return iter((self.passed, self.value))


def check_first_order(inst: GameInstance, fam: PovmFamily, tol: float = CHECK_TOL) -> CheckResult:
    """``max_x || Omega_x - Omega_x^* ||``; passes iff at most ``tol``."""
    om = omega_operators(inst, fam)
    residual = max(tau_norm(w - w.conj().T) for w in om)
    return CheckResult(residual <= tol, residual)


def _deltas(inst: GameInstance) -> np.ndarray:
    g = inst.game
    n = g.n_a
    idx = np.arange(n)
    diag_rule = g.rule[idx, idx][:, np.arange(g.k_a), np.arange(g.k_a)]  # [x, a]
    return inst.prior.pi[idx, idx][:, None] * diag_rule


def check_exchange_inequality(
    inst: GameInstance, fam: PovmFamily, tol: float = CHECK_TOL
) -> CheckResult:
    """PSD test of ``E_a (Q_b - Q_a) E_a + (delta_a - delta_b) E_a`` for all ``x``, ``a != b``.

    ``value`` is the most negative eigenvalue encountered (or the smallest
    one, if none is negative).
    """
    q = q_operators(inst, fam)
    d = _deltas(inst)
    worst = np.inf
    for x in range(fam.n):
        for a in range(fam.k):
            ea = fam.e[x, a]
            for b in range(fam.k):
                if a == b:
                    continue
                m = ea @ (q[x, b] - q[x, a]) @ ea + (d[x, a] - d[x, b]) * ea
                worst = min(worst, linalg.hermitian_lambda_min(m))
    return CheckResult(worst >= -tol, float(worst))


@dataclass(frozen=True)
class PovmReport:
    passed: bool
    psd_passed: bool
    annihilation_passed: bool
    sum_passed: bool
    worst_psd: float
    worst_annihilation: float
    worst_sum: float
    per_question: tuple = ()

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "psd_passed": self.psd_passed,
            "annihilation_passed": self.annihilation_passed,
            "sum_passed": self.sum_passed,
            "worst_psd": self.worst_psd,
            "worst_annihilation": self.worst_annihilation,
            "worst_sum": self.worst_sum,
        }


def check_povm_conditions(
    inst: GameInstance, fam: PovmFamily, tol: float = CHECK_TOL
) -> PovmReport:
    """Second-order conditions of an optimal PVM for games winning every ``(x, x, a, a)``.

    For each ``(x, b)``: ``Q_b - Omega_x >= 0`` and
    ``(Q_b - Omega_x) E_b = 0 = E_b (Q_b - Omega_x)``. The summed form
    ``sum_b Q_b - k Omega_x >= 0`` is reported separately; for a colouring
    game with the uniform edge prior it reads
    ``Omega_x <= d_x / (k |E|) I`` (``|E|`` unordered).
    """
    _square_fam_check(inst, fam)
    g = inst.game
    idx = np.arange(g.n_a)
    diag = g.rule[idx, idx][:, np.arange(g.k_a), np.arange(g.k_a)]
    if not np.all(diag == 1):
        raise ValueError("conditions need rule(x, x, a, a) = 1 for every x and a")
    q = q_operators(inst, fam)
    om = _herm(omega_operators(inst, fam, q))
    worst_psd = worst_ann = worst_sum = np.inf
    ann_max = 0.0
    rows = []
    for x in range(fam.n):
        for b in range(fam.k):
            diff = _herm(q[x, b]) - om[x]
            lmin = linalg.hermitian_lambda_min(diff)
            ann = max(tau_norm(diff @ fam.e[x, b]), tau_norm(fam.e[x, b] @ diff))
            rows.append((x, b, lmin, ann))
            worst_psd = min(worst_psd, lmin)
            ann_max = max(ann_max, ann)
        s = _herm(q[x].sum(axis=0)) - fam.k * om[x]
        worst_sum = min(worst_sum, linalg.hermitian_lambda_min(s))
    worst_ann = ann_max
    psd_ok = worst_psd >= -tol
    ann_ok = worst_ann <= tol
    sum_ok = worst_sum >= -tol
    return PovmReport(
        passed=bool(psd_ok and ann_ok and sum_ok),
        psd_passed=bool(psd_ok),
        annihilation_passed=bool(ann_ok),
        sum_passed=bool(sum_ok),
        worst_psd=float(worst_psd),
        worst_annihilation=float(worst_ann),
        worst_sum=float(worst_sum),
        per_question=tuple(rows),
    )


def chsh_commutation_audit(fam: PovmFamily) -> float:
    """``|| [E[0, 0], E[1, 0]] ||`` (normalised Frobenius) for a two-question, two-answer family."""
    if (fam.n, fam.k) != (2, 2):
        raise ValueError(f"expected 2 questions x 2 answers, got {fam.n} x {fam.k}")
    p, q = fam.e[0, 0], fam.e[1, 0]
    return tau_norm(p @ q - q @ p)


# -- perturbations and random families ---------------------------------------


def _expm_ih(h: np.ndarray, r: float) -> np.ndarray:
    w, v = np.linalg.eigh(_herm(h))
    return (v * np.exp(1j * r * w)) @ v.conj().T


def perturb(fam: PovmFamily, x: int, h: np.ndarray, r: float) -> PovmFamily:
    """Conjugate question ``x`` by ``exp(i H r)``; other questions are untouched."""
    u = _expm_ih(h, r)
    e = np.array(fam.e)
    e[x] = u @ e[x] @ u.conj().T
    return type(fam)(e)


def loss_derivative(inst: GameInstance, fam: PovmFamily, x: int, h: np.ndarray) -> float:
    """Analytic derivative at 0 of the losing probability along :func:`perturb`: ``i tr_m(H (Omega_x - Omega_x^*))``."""
    w = omega_operators(inst, fam)[x]
    return float((1j * np.trace(h @ (w - w.conj().T)) / fam.m).real)


def loss_derivative_fd(
    inst: GameInstance, fam: PovmFamily, x: int, h: np.ndarray, step: float = FD_STEP
) -> float:
    """Central finite difference of the losing probability along :func:`perturb`."""
    up = losing_probability(inst, perturb(fam, x, h, step))
    down = losing_probability(inst, perturb(fam, x, h, -step))
    return (up - down) / (2.0 * step)


def random_unitary(rng: np.random.Generator, m: int) -> np.ndarray:
    z = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph[None, :]


def random_hermitian(rng: np.random.Generator, m: int) -> np.ndarray:
    z = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    return _herm(z)


def random_pvm(rng: np.random.Generator, n: int, k: int, m: int) -> PvmFamily:
    """Each question: a random 0/1 split of the basis, rotated by a random unitary."""
    e = np.zeros((n, k, m, m), dtype=np.complex128)
    for x in range(n):
        labels = rng.integers(0, k, size=m)
        u = random_unitary(rng, m)
        for a in range(k):
            d = (labels == a).astype(float)
            e[x, a] = (u * d[None, :]) @ u.conj().T
    e = _herm(e)
    return PvmFamily(e)


def random_povm(rng: np.random.Generator, n: int, k: int, m: int) -> PovmFamily:
    """``E_a = S^{-1/2} A_a S^{-1/2}`` for random positive ``A_a`` with sum ``S``."""
    e = np.zeros((n, k, m, m), dtype=np.complex128)
    for x in range(n):
        g = rng.standard_normal((k, m, m)) + 1j * rng.standard_normal((k, m, m))
        a = g @ g.conj().swapaxes(-1, -2)
        w, v = np.linalg.eigh(a.sum(axis=0))
        s = (v / np.sqrt(w)[None, :]) @ v.conj().T
        e[x] = _herm(s @ a @ s)
    return PovmFamily(e)


def family_from_projections(*cols) -> PvmFamily:
    """Two-outcome PVM from one projection per question: ``E[x] = (P_x, I - P_x)``."""
    ps = [np.asarray(p, dtype=np.complex128) for p in cols]
    m = ps[0].shape[0]
    e = np.array([[p, np.eye(m) - p] for p in ps])
    return PvmFamily(e)
