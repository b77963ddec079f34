"""Objectives on the unit hypercube.

Two concrete families are provided, non-concave quadratics and the softmax
extension of a DPP kernel, together with seeded generators, finite-difference
submodularity validators and a JSON instance format. ``BlackBoxObjective``
wraps any user function.

All objectives are immutable after construction, so evaluation and
differentiation may be called from several threads at once.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .exceptions import DimensionError, NotPositiveDefiniteError
from .rng import make_rng
from .validation import (
    check_index,
    check_point,
    check_points,
    check_positive,
    check_square_matrix,
)

FD_STEP = 1e-5
HESSIAN_STEP = 1e-4
SOFTMAX_LIPSCHITZ_PROBES = 200
SOFTMAX_LIPSCHITZ_HEADROOM = 1.2
_CHUNK = 512


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=np.float64, copy=True)
    arr.setflags(write=False)
    return arr


class Objective:
    """Base class for a function F: [0,1]^n -> R.

    Subclasses implement ``_eval``; everything else has a generic fallback
    built on it. ``lipschitz`` is the coordinate-wise Lipschitz constant C.
    """

    n: int
    lipschitz: float
    kind = "blackbox"

    def __call__(self, x) -> float:
        return self._eval(check_point(x, self.n))

    def _eval(self, x: np.ndarray) -> float:
        raise NotImplementedError

    def eval_many(self, points) -> np.ndarray:
        """Evaluate F on each row of an ``(m, n)`` array."""
        P = check_points(points, self.n)
        return np.array([self._eval(p) for p in P], dtype=np.float64)

    def eval_delta(self, x, steps) -> np.ndarray:
        """Return ``F(x + d) - F(x)`` for each row ``d`` of ``steps``.

        Families with structure override this with a cancellation-free form;
        finite-difference code goes through here.
        """
        x = check_point(x, self.n)
        D = np.atleast_2d(np.asarray(steps, dtype=np.float64))
        return self.eval_many(x + D) - self._eval(x)

    def eval_line(self, x, i: int, zs) -> np.ndarray:
        """Evaluate ``z -> F(z, x_{-i})`` at every ``z`` in ``zs``."""
        x = check_point(x, self.n, copy=True)
        i = check_index(i, self.n)
        zs = np.asarray(zs, dtype=np.float64)
        out = np.empty(zs.shape, dtype=np.float64)
        for k, z in enumerate(zs):
            x[i] = z
            out[k] = self._eval(x)
        return out

    @property
    def has_analytic_partial(self) -> bool:
        return type(self).partial is not Objective.partial

    def partial(self, x, i: int) -> float:
        """Finite-difference partial derivative along coordinate ``i``.

        Central differences with step 1e-5 where the box allows; otherwise a
        one-sided difference of the same step pointing into the box.
        """
        x = check_point(x, self.n)
        i = check_index(i, self.n)
        return _fd_partial(self, x, i)

    def gradient(self, x) -> np.ndarray:
        x = check_point(x, self.n)
        return np.array([self.partial(x, i) for i in range(self.n)])


def _fd_partial(obj: Objective, x: np.ndarray, i: int, step: float = FD_STEP) -> float:
    e = np.zeros(obj.n)
    lo, hi = x[i], 1.0 - x[i]
    if lo >= step and hi >= step:
        e[i] = step
        fwd, bwd = obj.eval_delta(x, np.stack([e, -e]))
        return float((fwd - bwd) / (2.0 * step))
    if hi >= step:
        e[i] = step
        return float(obj.eval_delta(x, e[None, :])[0] / step)
    e[i] = -step
    return float(-obj.eval_delta(x, e[None, :])[0] / step)


class BlackBoxObjective(Objective):
    """Wrap a user function ``func(x) -> float`` as an objective.

    Parameters
    ----------
    func : callable
        Maps a length-``n`` float array to a real number.
    n : int
    lipschitz : float
        Coordinate-wise Lipschitz bound C.
    partial : callable, optional
        ``partial(x, i) -> float``; finite differences are used when omitted.
    """

    def __init__(self, func, n: int, lipschitz: float, partial=None):
        if int(n) < 1:
            raise ValueError("n must be >= 1")
        self.n = int(n)
        self.lipschitz = check_positive(lipschitz, "lipschitz")
        self._func = func
        self._partial = partial

    def _eval(self, x):
        return float(self._func(x))

    @property
    def has_analytic_partial(self) -> bool:
        return self._partial is not None

    def partial(self, x, i):
        if self._partial is None:
            return super().partial(x, i)
        x = check_point(x, self.n)
        return float(self._partial(x, check_index(i, self.n)))


class QuadraticModel(Objective):
    """F(x) = 1/2 x^T H x + h^T x + c with symmetric H."""

    def __init__(self, H, h, c=0.0, *, variant: str | None = None, seed=None):
        H = check_square_matrix(H, "H")
        n = H.shape[0]
        if not np.array_equal(H, H.T):
            raise ValueError("H must be exactly symmetric")
        h = np.asarray(h, dtype=np.float64).reshape(-1)
        if h.shape != (n,):
            raise DimensionError(f"h must have length {n}, got {h.shape[0]}")
        self.n = n
        self.H = _frozen(H)
        self.h = _frozen(h)
        self.c = float(c)
        self.variant = variant
        self.seed = seed
        self.lipschitz = quadratic_lipschitz(self.H, self.h)

    @property
    def kind(self):
        return f"nqp-{self.variant}" if self.variant else "nqp"

    def _eval(self, x):
        return float(0.5 * x @ self.H @ x + self.h @ x + self.c)

    def eval_many(self, points):
        P = check_points(points, self.n)
        return 0.5 * np.einsum("ij,ij->i", P @ self.H, P) + P @ self.h + self.c

    def eval_delta(self, x, steps):
        x = check_point(x, self.n)
        D = np.atleast_2d(np.asarray(steps, dtype=np.float64))
        grad = self.H @ x + self.h
        return D @ grad + 0.5 * np.einsum("ij,ij->i", D @ self.H, D)

    def eval_line(self, x, i, zs):
        x = check_point(x, self.n, copy=True)
        i = check_index(i, self.n)
        zs = np.asarray(zs, dtype=np.float64)
        x[i] = 0.0
        base = self._eval(x)
        slope = self.H[i] @ x + self.h[i]
        return base + zs * slope + 0.5 * self.H[i, i] * zs * zs

    def partial(self, x, i):
        x = check_point(x, self.n)
        i = check_index(i, self.n)
        return float(self.H[i] @ x + self.h[i])

    def gradient(self, x):
        x = check_point(x, self.n)
        return self.H @ x + self.h


def quadratic_lipschitz(H, h) -> float:
    """C = max_i (|h_i| + sum_j |H_ij|), a bound on |dF/dx_i| over the box."""
    C = float(np.max(np.abs(h) + np.abs(H).sum(axis=1)))
    return C if C > 0 else 1.0


class SoftmaxModel(Objective):
    """Softmax extension F(x) = log det(diag(x)(L - I) + I).

    ``lipschitz`` defaults to 1.2 times the largest absolute partial seen on
    200 seeded uniform probes.
    """

    kind = "softmax"

    def __init__(self, L, eigenvalues=None, *, seed=None, lipschitz=None):
        L = check_square_matrix(L, "L")
        if not np.allclose(L, L.T, rtol=0, atol=1e-12):
            raise ValueError("L must be symmetric")
        L = 0.5 * (L + L.T)
        self.n = L.shape[0]
        self.L = _frozen(L)
        self._K = _frozen(L - np.eye(self.n))
        if eigenvalues is None:
            eigenvalues = np.linalg.eigvalsh(L)
        self.eigenvalues = _frozen(np.sort(np.asarray(eigenvalues, dtype=np.float64)))
        self.seed = seed
        if lipschitz is None:
            lipschitz = self._estimate_lipschitz()
        self.lipschitz = check_positive(lipschitz, "lipschitz")

    def _matrix(self, x):
        return x[:, None] * self._K + np.eye(self.n)

    def _logdet(self, M, x=None) -> float:
        sign, logdet = np.linalg.slogdet(M)
        if sign <= 0:
            raise NotPositiveDefiniteError(
                "softmax matrix not positive definite at x"
                + ("" if x is None else f" = {np.array2string(x, precision=6)}")
            )
        return float(logdet)

    def _eval(self, x):
        return self._logdet(self._matrix(x), x)

    def eval_many(self, points):
        P = check_points(points, self.n)
        out = np.empty(P.shape[0])
        eye = np.eye(self.n)
        for start in range(0, P.shape[0], _CHUNK):
            block = P[start:start + _CHUNK]
            sign, logdet = np.linalg.slogdet(block[:, :, None] * self._K + eye)
            if np.any(sign <= 0):
                raise NotPositiveDefiniteError("softmax matrix not positive definite at x")
            out[start:start + _CHUNK] = logdet
        return out

    def _gain_matrix(self, x):
        # (L - I) M^{-1}; its diagonal is the gradient of log det M.
        M = self._matrix(x)
        try:
            return np.linalg.solve(M.T, self._K.T).T
        except np.linalg.LinAlgError:
            raise NotPositiveDefiniteError("softmax matrix not positive definite at x") from None

    def eval_delta(self, x, steps):
        # F(x+d) - F(x) = log det(I_S + diag(d_S) W[S, S]) with W = (L-I) M^{-1},
        # S the support of d (Sylvester's determinant identity).
        x = check_point(x, self.n)
        D = np.atleast_2d(np.asarray(steps, dtype=np.float64))
        W = self._gain_matrix(x)
        out = np.empty(D.shape[0])
        for k, d in enumerate(D):
            S = np.flatnonzero(d)
            if S.size == 0:
                out[k] = 0.0
                continue
            B = np.eye(S.size) + d[S][:, None] * W[np.ix_(S, S)]
            out[k] = self._logdet(B)
        return out

    def eval_line(self, x, i, zs):
        # Row i of M depends affinely on x_i, hence so does det M.
        x = check_point(x, self.n, copy=True)
        i = check_index(i, self.n)
        zs = np.asarray(zs, dtype=np.float64)
        x[i] = 0.0
        l0 = self._eval(x)
        x[i] = 1.0
        l1 = self._eval(x)
        with np.errstate(divide="ignore"):
            return np.logaddexp(np.log1p(-zs) + l0, np.log(zs) + l1)

    def partial(self, x, i):
        x = check_point(x, self.n)
        i = check_index(i, self.n)
        M = self._matrix(x)
        e = np.zeros(self.n)
        e[i] = 1.0
        try:
            col = np.linalg.solve(M, e)
        except np.linalg.LinAlgError:
            raise NotPositiveDefiniteError("softmax matrix not positive definite at x") from None
        return float(self._K[i] @ col)

    def gradient(self, x):
        x = check_point(x, self.n)
        return np.diag(self._gain_matrix(x)).copy()

    def _estimate_lipschitz(self) -> float:
        rng = make_rng(0 if self.seed is None else self.seed)
        probes = rng.uniform(0.0, 1.0, size=(SOFTMAX_LIPSCHITZ_PROBES, self.n))
        worst = max(float(np.max(np.abs(self.gradient(p)))) for p in probes)
        return SOFTMAX_LIPSCHITZ_HEADROOM * max(worst, 1e-12)


def eval_quadratic(model: QuadraticModel, x) -> float:
    return model(x)


def eval_softmax(model: SoftmaxModel, x) -> float:
    return model(x)


def partial(obj: Objective, x, i: int) -> float:
    """dF/dx_i at ``x``: analytic where the family provides it."""
    return obj.partial(x, i)


def gen_nqp(n: int, seed: int, variant: str = "strong") -> QuadraticModel:
    """Random non-concave quadratic with F(0) + F(1) = 0.

    H has i.i.d. uniform[-1, 0] entries averaged with its transpose; the
    weak variant then redraws the diagonal from uniform[0, 1]. h is uniform
    on [0, 1]^n and c balances the two corners.
    """
    if variant not in ("strong", "weak"):
        raise ValueError(f"variant must be 'strong' or 'weak', got {variant!r}")
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = make_rng(seed)
    H = rng.uniform(-1.0, 0.0, size=(n, n))
    H = (H + H.T) / 2.0
    if variant == "weak":
        H[np.diag_indices(n)] = rng.uniform(0.0, 1.0, size=n)
    h = rng.uniform(0.0, 1.0, size=n)
    c = -(0.5 * H.sum() + h.sum()) / 2.0
    return QuadraticModel(H, h, c, variant=variant, seed=seed)


def gen_softmax(n: int, seed: int) -> SoftmaxModel:
    """Random softmax extension with eigenvalues e^u, u ~ uniform[-0.5, 1]."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = make_rng(seed)
    u = rng.uniform(-0.5, 1.0, size=n)
    eig = np.exp(u)
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    signs = np.sign(np.diag(R))
    signs[signs == 0] = 1.0
    V = Q * signs
    L = (V * eig) @ V.T
    L = 0.5 * (L + L.T)
    return SoftmaxModel(L, eig, seed=seed)


@dataclass(frozen=True)
class SubmodularityReport:
    passed: bool
    worst_violation: float
    variant: str
    probes: int
    tolerance: float


def estimate_hessian(obj: Objective, x, step: float = HESSIAN_STEP) -> np.ndarray:
    """Central second-difference Hessian of ``obj`` at an interior point."""
    x = check_point(x, obj.n)
    n = obj.n
    iu, ju = np.triu_indices(n, k=1)
    eye = np.eye(n) * step
    rows = [eye, -eye]
    if iu.size:
        a, b = eye[iu], eye[ju]
        rows += [a + b, a - b, -a + b, -a - b]
    deltas = obj.eval_delta(x, np.vstack(rows))
    plus, minus = deltas[:n], deltas[n:2 * n]
    Hs = np.empty((n, n))
    Hs[np.diag_indices(n)] = (plus + minus) / step**2
    if iu.size:
        m = iu.size
        pp, pm, mp, mm = (deltas[2 * n + k * m: 2 * n + (k + 1) * m] for k in range(4))
        off = (pp - pm - mp + mm) / (4.0 * step**2)
        Hs[iu, ju] = off
        Hs[ju, iu] = off
    return Hs


def validate_submodularity(obj: Objective, variant: str = "weak", probes: int = 5,
                           seed: int = 0) -> SubmodularityReport:
    """Check the Hessian sign pattern at random interior points.

    ``weak`` requires every off-diagonal entry <= tol, ``strong`` every entry,
    with tol = 1e-6 * max(1, C). ``worst_violation`` is the most positive
    checked entry (``-inf`` when no entry is checked, e.g. weak with n = 1).
    """
    if variant not in ("strong", "weak"):
        raise ValueError(f"variant must be 'strong' or 'weak', got {variant!r}")
    if probes < 1:
        raise ValueError("probes must be >= 1")
    tol = 1e-6 * max(1.0, obj.lipschitz)
    rng = make_rng(seed)
    step = HESSIAN_STEP
    mask = np.ones((obj.n, obj.n), dtype=bool)
    if variant == "weak":
        np.fill_diagonal(mask, False)
    worst = -np.inf
    for _ in range(probes):
        x = rng.uniform(step, 1.0 - step, size=obj.n)
        if mask.any():
            worst = max(worst, float(estimate_hessian(obj, x, step)[mask].max()))
    return SubmodularityReport(bool(worst <= tol), worst, variant, probes, tol)


def corner_sum(obj: Objective) -> float:
    """F(0) + F(1); the bi-greedy guarantees need this to be >= 0."""
    return obj(np.zeros(obj.n)) + obj(np.ones(obj.n))


# -- JSON instance format ---------------------------------------------------

def model_to_dict(model: Objective) -> dict:
    if isinstance(model, QuadraticModel):
        return {
            "kind": model.kind,
            "n": model.n,
            "seed": model.seed,
            "H": model.H.tolist(),
            "h": model.h.tolist(),
            "c": model.c,
        }
    if isinstance(model, SoftmaxModel):
        return {"kind": "softmax", "n": model.n, "seed": model.seed, "L": model.L.tolist()}
    raise TypeError(f"cannot serialize {type(model).__name__}")


def model_from_dict(data: dict) -> Objective:
    kind = data.get("kind")
    n = int(data["n"])
    if kind in ("nqp", "nqp-strong", "nqp-weak"):
        variant = kind.split("-", 1)[1] if "-" in kind else None
        model = QuadraticModel(data["H"], data["h"], data["c"], variant=variant,
                               seed=data.get("seed"))
    elif kind == "softmax":
        model = SoftmaxModel(data["L"], seed=data.get("seed"))
    else:
        raise ValueError(f"unknown instance kind {kind!r}")
    if model.n != n:
        raise DimensionError(f"instance declares n={n} but matrices are {model.n}x{model.n}")
    return model


def save_instance(model: Objective, path) -> None:
    # json writes floats with repr(), the shortest string that round-trips exactly.
    Path(path).write_text(json.dumps(model_to_dict(model)) + "\n")


def load_instance(path) -> Objective:
    return model_from_dict(json.loads(Path(path).read_text()))


def generate(family: str, n: int, seed: int) -> Objective:
    """Dispatch on the family names used by the harness and the CLI."""
    if family == "nqp-strong":
        return gen_nqp(n, seed, "strong")
    if family == "nqp-weak":
        return gen_nqp(n, seed, "weak")
    if family == "softmax":
        return gen_softmax(n, seed)
    raise ValueError(f"unknown family {family!r}")
