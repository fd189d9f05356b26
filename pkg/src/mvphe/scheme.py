"""The symmetric somewhat-homomorphic scheme: KeyGen, Encrypt, Decrypt,
homomorphic add and depth-1 multiply, and noise accounting.

A key fixes n secret evaluation points and the matrix G whose row i holds all
bounded-degree monomials evaluated at point i. Encrypting a bit m draws a
random polynomial f from the degree-<=r slice of the ideal and outputs

    c = (m * p) * 1 + G f + e   (mod q)

with e a structured noise vector. The secret vector s is orthogonal to every
evaluated ideal element, so <s, c> = m * sigma_s * p + <s2, e_tail> and
rounding recovers m.

In additive_only mode G has C(ell+r, r) columns; in mult_depth_1 mode the key
must annihilate products of two encryption polynomials (degree up to 2r), so
G is the degree-2r evaluation matrix with C(ell+2r, 2r) columns and s is
orthogonal to the evaluated degree-2r slice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dfield
from decimal import Decimal, InvalidOperation
from typing import Optional, Tuple

import numpy as np

from .errors import (
    DepthError,
    KeyGenError,
    ParameterInfeasibleError,
    UnsupportedOperationError,
)
from .field import FieldContext, round_nearest
from .linalg import MatrixFq, dot_mod, matmul_mod, rref, solve_head_for_orthogonality
from .mvpoly import IdealSpec, MonomialIndex, evaluation_matrix, ideal_truncated_basis, monomial_count
from .sampling import NoiseSpec, RandomStream, sample_noise_vector

MODE_ADDITIVE = "additive_only"
MODE_MULT = "mult_depth_1"

_POINT_ATTEMPTS = 64  # rejection budget: 64 candidate point sets of n points
_TAIL_ATTEMPTS = 64


def _to_decimal(x) -> Decimal:
    try:
        return Decimal(str(x))
    except InvalidOperation as exc:
        raise ValueError(f"not a decimal number: {x!r}") from exc


@dataclass
class SchemeParams:
    """Validated parameter set; alpha and epsilon are exact decimal strings."""

    lam: int
    q: int
    ell: int
    r: int
    n: int
    alpha: Decimal
    epsilon: Decimal
    mode: str
    ideal: IdealSpec
    headroom: float = 2.0
    literal_mult_noise: bool = False  # restore the wider noise support for experiments

    def __post_init__(self):
        self.alpha = _to_decimal(self.alpha)
        self.epsilon = _to_decimal(self.epsilon)
        self.validate()

    def validate(self):
        FieldContext(self.q)  # raises unless q is a prime < 2^31
        if self.q < 3:
            raise ValueError("q must be an odd prime >= 3")
        if self.mode not in (MODE_ADDITIVE, MODE_MULT):
            raise ValueError(f"mode must be {MODE_ADDITIVE} or {MODE_MULT}, got {self.mode!r}")
        if self.ell < 1 or self.r < 1:
            raise ValueError("need ell >= 1 and r >= 1")
        if not (0 < self.n < self.q):
            raise ValueError(f"need 0 < n < q, got n={self.n}, q={self.q}")
        if self.n > monomial_count(self.ell, self.enc_degree()):
            raise ValueError(
                f"n={self.n} exceeds the evaluation dimension "
                f"{monomial_count(self.ell, self.enc_degree())} for mode {self.mode}"
            )
        if float(self.alpha) < 0:
            raise ValueError("alpha must be >= 0")
        if not (0 < float(self.epsilon) < 1):
            raise ValueError("epsilon must lie in (0, 1)")
        if self.headroom < 1:
            raise ValueError("headroom must be >= 1")
        if self.ideal.ctx.q != self.q or self.ideal.ell != self.ell:
            raise ValueError("ideal generators must live over (ell, q)")
        if self.ideal.max_degree() > self.r:
            raise ValueError(
                f"generator degree {self.ideal.max_degree()} exceeds r={self.r}"
            )

    def enc_degree(self) -> int:
        """Degree bound of the key's evaluation matrix (2r in mult mode)."""
        return self.r if self.mode == MODE_ADDITIVE else 2 * self.r

    @property
    def alpha_f(self) -> float:
        return float(self.alpha)

    @property
    def epsilon_f(self) -> float:
        return float(self.epsilon)

    def ctx(self) -> FieldContext:
        return FieldContext(self.q)

    def canonical_dict(self) -> dict:
        gens = []
        for g in self.ideal.generators:
            gens.append([
                {"coeff": int(c), "exps": list(e)} for c, e in g.terms()
            ])
        d = {
            "lambda": self.lam,
            "q": self.q,
            "ell": self.ell,
            "r": self.r,
            "n": self.n,
            "alpha": str(self.alpha),
            "epsilon": str(self.epsilon),
            "mode": self.mode,
            "headroom": self.headroom,
            "ideal": gens,
        }
        if self.literal_mult_noise:
            d["literal_mult_noise"] = True
        return d


@dataclass
class Ciphertext:
    """A length-n vector over F_q plus homomorphic-operation counters."""

    c: np.ndarray
    q: int
    adds: int = 0
    mults: int = 0

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=np.int64) % self.q
        if self.adds < 0 or self.mults < 0:
            raise ValueError("operation counters must be nonnegative")

    @property
    def n(self) -> int:
        return len(self.c)


@dataclass
class EvalKey:
    """Public material for third-party multiplication: p^{-1} mod q."""

    q: int
    n: int
    p_inverse: int


@dataclass
class NoiseBudget:
    eps: float
    k: float
    eta: float
    predicted_std_fresh: float
    predicted_std_add: float
    predicted_std_mult: float


@dataclass
class SecretKey:
    params: SchemeParams
    points: np.ndarray          # n x ell
    G: np.ndarray               # n x N_mode evaluation matrix
    B_r: MatrixFq               # d_r x C(ell+r, r)
    B_2r: Optional[MatrixFq]    # d_2r x C(ell+2r, 2r), mult mode only
    d_r: int
    d_2r: Optional[int]
    s: np.ndarray               # length n, canonical residues
    p: int
    sigma_s: int                # positive integer, balanced sum of s entries
    _enc_basis: Optional[np.ndarray] = dfield(default=None, repr=False)

    @property
    def ctx(self) -> FieldContext:
        return self.params.ctx()

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def head_len(self) -> int:
        """Length of s1 = number of evaluated-basis dimensions."""
        return self.d_r if self.params.mode == MODE_ADDITIVE else self.d_2r

    @property
    def tail_len(self) -> int:
        return self.n - self.head_len

    @property
    def s2(self) -> np.ndarray:
        return self.s[self.head_len :]

    @property
    def s2_norm(self) -> float:
        return float(np.linalg.norm(self.ctx.balanced(self.s2)))

    def noise_support_len(self) -> int:
        if self.params.mode == MODE_ADDITIVE:
            return self.n - self.d_r
        if self.params.literal_mult_noise:
            return self.n - self.d_r  # the wider support; breaks correctness
        return self.n - self.d_2r

    def noise_spec(self) -> NoiseSpec:
        return NoiseSpec(self.params.alpha_f, self.params.q, self.noise_support_len())

    def enc_basis(self) -> np.ndarray:
        """B_r rows injected into the key's evaluation index (cached)."""
        if self._enc_basis is None:
            if self.params.mode == MODE_ADDITIVE:
                self._enc_basis = self.B_r.data
            else:
                src = MonomialIndex(self.params.ell, self.params.r)
                dst = MonomialIndex(self.params.ell, 2 * self.params.r)
                cols = [dst.position(e) for e in src.exponents]
                wide = np.zeros((self.d_r, dst.size), dtype=np.int64)
                wide[:, cols] = self.B_r.data
                self._enc_basis = wide
        return self._enc_basis

    def evaluated_basis(self) -> MatrixFq:
        """Rows span the evaluated ideal subspace the secret annihilates."""
        B = self.B_r if self.params.mode == MODE_ADDITIVE else self.B_2r
        return MatrixFq(matmul_mod(B.data, self.G.T, self.params.q), self.ctx)


def _mode_basis(params: SchemeParams) -> Tuple[MatrixFq, int, Optional[MatrixFq], Optional[int]]:
    B_r = ideal_truncated_basis(params.ideal, params.r)
    d_r = B_r.rows
    if params.mode == MODE_ADDITIVE:
        return B_r, d_r, None, None
    B_2r = ideal_truncated_basis(params.ideal, 2 * params.r)
    return B_r, d_r, B_2r, B_2r.rows


def keygen(params: SchemeParams, stream: RandomStream) -> SecretKey:
    """Generate a secret key, resampling points and tails until the rank and
    magnitude conditions hold.

    Raises KeyGenError (with the failing condition) when the retry budget is
    exhausted, and ParameterInfeasibleError when no plaintext scale p can fit
    below q/2.
    """
    ctx = params.ctx()
    q, n = params.q, params.n
    B_r, d_r, B_2r, d_2r = _mode_basis(params)
    head_len = d_r if params.mode == MODE_ADDITIVE else d_2r
    N_mode = monomial_count(params.ell, params.enc_degree())

    if not (head_len < n <= N_mode):
        raise KeyGenError(
            "dimension",
            f"need dim(ideal slice)={head_len} < n={n} <= {N_mode}",
        )

    eps = params.epsilon_f
    alpha_q = params.alpha_f * q
    h = float(params.headroom)
    # best case |s2| = 1: if even that cannot fit, no point set will help
    if math.floor(2.0 * h * alpha_q / math.sqrt(eps)) + 1 > (q // 2) / h:
        raise ParameterInfeasibleError(
            "scale",
            f"smallest admissible sigma_s*p exceeds floor(q/2)/h = {(q // 2) / h:.0f}",
        )

    enc_index = MonomialIndex(params.ell, params.enc_degree())
    r_index = MonomialIndex(params.ell, params.r)
    point_stream = stream.derive(0)
    tail_stream = stream.derive(1)
    failures = {"condition1": 0, "condition2": 0, "tail": 0}

    for _ in range(_POINT_ATTEMPTS):
        points = _sample_distinct_points(point_stream, q, n, params.ell)
        G = evaluation_matrix(enc_index, ctx, points)
        if rref(MatrixFq(G, ctx))[1] != n:
            failures["condition1"] += 1
            continue
        # the first d_r points must separate the degree-r ideal slice
        E_r = matmul_mod(B_r.data, evaluation_matrix(r_index, ctx, points[:d_r]).T, q)
        if rref(MatrixFq(E_r, ctx))[1] != d_r:
            failures["condition2"] += 1
            continue
        if params.mode == MODE_MULT:
            E_2r = matmul_mod(B_2r.data, G[:d_2r].T, q)
            if rref(MatrixFq(E_2r, ctx))[1] != d_2r:
                failures["condition2"] += 1
                continue

        B_mode = B_r if params.mode == MODE_ADDITIVE else B_2r
        V = MatrixFq(matmul_mod(B_mode.data, G.T, q), ctx)
        found = _choose_secret(params, V, head_len, n - head_len, tail_stream)
        if found is None:
            failures["tail"] += 1
            continue
        s, sigma, p = found
        return SecretKey(
            params=params,
            points=points,
            G=G,
            B_r=B_r,
            B_2r=B_2r,
            d_r=d_r,
            d_2r=d_2r,
            s=s,
            p=p,
            sigma_s=sigma,
        )

    worst = max(failures, key=failures.get)
    raise KeyGenError(
        worst,
        f"retry budget exhausted after {_POINT_ATTEMPTS} point sets ({failures})",
    )


def _sample_distinct_points(stream: RandomStream, q: int, n: int, ell: int) -> np.ndarray:
    points = np.zeros((n, ell), dtype=np.int64)
    seen = set()
    i = 0
    while i < n:
        cand = tuple(int(x) for x in stream.uniform_fq(q, size=ell))
        if cand in seen:
            continue
        seen.add(cand)
        points[i] = cand
        i += 1
    return points


def _choose_secret(
    params: SchemeParams,
    V: MatrixFq,
    head_len: int,
    tail_len: int,
    stream: RandomStream,
) -> Optional[Tuple[np.ndarray, int, int]]:
    """Pick s2, extend to s orthogonal to V, derive sigma_s and p."""
    ctx = V.ctx
    q = params.q
    eps = params.epsilon_f
    alpha_q = params.alpha_f * q
    h = float(params.headroom)

    for attempt in range(_TAIL_ATTEMPTS):
        if params.mode == MODE_ADDITIVE and attempt == 0:
            s2 = np.zeros(tail_len, dtype=np.int64)
            s2[-1] = 1  # the additive-only shortcut tail (0, ..., 0, 1)
        else:
            s2 = stream.ternary(tail_len)
            if not np.any(s2):
                continue
        s = solve_head_for_orthogonality(V, s2 % q, head_len)
        if s is None:
            return None  # inconsistent system: resample the points
        sigma = ctx.balanced(int(s.sum() % q))
        if sigma == 0:
            continue
        if sigma < 0:
            s = (-s) % q  # preserves orthogonality, flips the sum's sign
            sigma = -sigma
        norm_s2 = float(np.linalg.norm(ctx.balanced(s[head_len:])))
        eta = 2.0 * norm_s2 * h / math.sqrt(eps)
        p = math.floor(eta * alpha_q / sigma) + 1
        # the headroom multiplier also caps the message multiple so that
        # h plaintext units still land inside the balanced window
        if sigma * p * h <= q // 2:
            return s, sigma, p
    return None


def eval_key(sk: SecretKey) -> EvalKey:
    if sk.params.mode != MODE_MULT:
        raise UnsupportedOperationError("evaluation keys exist only in mult_depth_1 mode")
    return EvalKey(q=sk.params.q, n=sk.n, p_inverse=sk.ctx.inv(sk.p))


def encrypt_traced(
    sk: SecretKey, m: int, stream: RandomStream
) -> Tuple[Ciphertext, np.ndarray, np.ndarray]:
    """Encrypt and also return the sampled (embedded) f and noise vector e."""
    if m not in (0, 1):
        raise ValueError(f"plaintext must be a bit, got {m}")
    q = sk.params.q
    u = stream.uniform_fq(q, size=sk.d_r)
    f = matmul_mod(u.reshape(1, -1), sk.enc_basis(), q)[0]
    e = sample_noise_vector(stream, sk.noise_spec(), sk.n)
    c = (m * sk.p + matmul_mod(sk.G, f, q) + e) % q
    return Ciphertext(c, q), f, e


def encrypt(sk: SecretKey, m: int, stream: RandomStream) -> Ciphertext:
    return encrypt_traced(sk, m, stream)[0]


def decrypt(sk: SecretKey, ct: Ciphertext) -> int:
    t = sk.ctx.balanced(dot_mod(sk.s, ct.c, sk.params.q))
    return round_nearest(t, sk.sigma_s * sk.p) % 2


def hom_add(c1: Ciphertext, c2: Ciphertext) -> Ciphertext:
    if c1.q != c2.q or c1.n != c2.n:
        raise ValueError("ciphertexts must share one (n, q)")
    return Ciphertext(
        (c1.c + c2.c) % c1.q,
        c1.q,
        adds=max(c1.adds, c2.adds) + 1,
        mults=max(c1.mults, c2.mults),
    )


def hom_mult(c1: Ciphertext, c2: Ciphertext, ek: EvalKey) -> Ciphertext:
    if c1.q != c2.q or c1.n != c2.n:
        raise ValueError("ciphertexts must share one (n, q)")
    if c1.q != ek.q or c1.n != ek.n:
        raise ValueError("evaluation key does not match the ciphertexts")
    if c1.mults or c2.mults:
        raise DepthError("multiplication depth 1 already spent")
    prod = ek.p_inverse * (c1.c * c2.c % ek.q) % ek.q
    return Ciphertext(
        prod,
        ek.q,
        adds=max(c1.adds, c2.adds),
        mults=max(c1.mults, c2.mults) + 1,
    )


def noise_measure(sk: SecretKey, ct: Ciphertext, m: int) -> int:
    """balanced(<s, c> - m * sigma_s * p): the realized noise given the true
    message multiple m (0/1 fresh; up to the add count after additions)."""
    q = sk.params.q
    return sk.ctx.balanced((dot_mod(sk.s, ct.c, q) - m * sk.sigma_s * sk.p) % q)


def noise_budget(sk: SecretKey) -> NoiseBudget:
    eps = sk.params.epsilon_f
    alpha_q = sk.params.alpha_f * sk.params.q
    norm = sk.s2_norm
    eta = 2.0 * norm * float(sk.params.headroom) / math.sqrt(eps)
    if alpha_q == 0:
        k = math.inf
    else:
        k = sk.sigma_s * sk.p / (2.0 * norm * alpha_q)
    return NoiseBudget(
        eps=eps,
        k=k,
        eta=eta,
        predicted_std_fresh=norm * alpha_q,
        predicted_std_add=math.sqrt(2.0) * norm * alpha_q,
        predicted_std_mult=math.sqrt(2.0) * alpha_q + alpha_q**2 / math.sqrt(sk.p),
    )


def noise_bench(sk: SecretKey, trials: int, stream: RandomStream) -> dict:
    """Predicted vs measured noise and error rates for fresh/add/mult."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    budget = noise_budget(sk)
    is_mult = sk.params.mode == MODE_MULT
    ek = eval_key(sk) if is_mult else None

    fresh, added, multed = [], [], []
    fresh_err = add_err = mult_err = 0
    for i in range(trials):
        sub = stream.derive(i)
        m1, m2 = sub.coin(), sub.coin()
        ct1 = encrypt(sk, m1, sub.derive(0))
        ct2 = encrypt(sk, m2, sub.derive(1))
        fresh.append(noise_measure(sk, ct1, m1))
        fresh_err += decrypt(sk, ct1) != m1
        ca = hom_add(ct1, ct2)
        added.append(noise_measure(sk, ca, m1 + m2))
        add_err += decrypt(sk, ca) != (m1 + m2) % 2
        if is_mult:
            cm = hom_mult(ct1, ct2, ek)
            multed.append(noise_measure(sk, cm, m1 * m2))
            mult_err += decrypt(sk, cm) != m1 * m2

    def _std(xs):
        return float(np.std(np.asarray(xs, dtype=np.float64)))

    rows = {
        "fresh": {
            "predicted_std": budget.predicted_std_fresh,
            "measured_std": _std(fresh),
            "error_rate": fresh_err / trials,
        },
        "add": {
            "predicted_std": budget.predicted_std_add,
            "measured_std": _std(added),
            "error_rate": add_err / trials,
        },
    }
    if is_mult:
        rows["mult"] = {
            "predicted_std": budget.predicted_std_mult,
            "measured_std": _std(multed),
            "error_rate": mult_err / trials,
        }
    return rows


# ---------------------------------------------------------------------------
# structural (byte-free) encode/decode; file framing lives in files.py

def key_to_structural(sk: SecretKey) -> dict:
    d = {
        "points": sk.points.tolist(),
        "s": sk.s.tolist(),
        "p": sk.p,
        "sigma_s": sk.sigma_s,
        "B_r": sk.B_r.data.tolist(),
        "monomial_order": "grlex",
    }
    if sk.B_2r is not None:
        d["B_2r"] = sk.B_2r.data.tolist()
    return d


def key_from_structural(params: SchemeParams, d: dict) -> SecretKey:
    from .errors import FileFormatError

    ctx = params.ctx()
    q, n = params.q, params.n

    def _int_matrix(name, expect_cols=None):
        rows = d.get(name)
        if not isinstance(rows, list) or not rows:
            raise FileFormatError(name, "expected a nonempty list of rows")
        arr = np.asarray(rows, dtype=np.int64)
        if arr.ndim != 2:
            raise FileFormatError(name, "expected a rectangular matrix")
        if np.any(arr < 0) or np.any(arr >= q):
            raise FileFormatError(name, "entries must lie in [0, q)")
        if expect_cols is not None and arr.shape[1] != expect_cols:
            raise FileFormatError(name, f"expected {expect_cols} columns")
        return arr

    points = _int_matrix("points", expect_cols=params.ell)
    if points.shape[0] != n:
        raise FileFormatError("points", f"expected {n} points")
    s_raw = d.get("s")
    if not isinstance(s_raw, list) or len(s_raw) != n:
        raise FileFormatError("s", f"expected {n} integers")
    s = np.asarray(s_raw, dtype=np.int64)
    if np.any(s < 0) or np.any(s >= q):
        raise FileFormatError("s", "entries must lie in [0, q)")
    p = d.get("p")
    sigma = d.get("sigma_s")
    if not isinstance(p, int) or not (0 < p < q):
        raise FileFormatError("p", "expected an integer in (0, q)")
    if not isinstance(sigma, int) or not (0 < sigma <= q // 2):
        raise FileFormatError("sigma_s", "expected an integer in (0, q/2]")

    B_r = MatrixFq(_int_matrix("B_r", expect_cols=monomial_count(params.ell, params.r)), ctx)
    if B_r != ideal_truncated_basis(params.ideal, params.r):
        raise FileFormatError("B_r", "does not match the parameter ideal")
    B_2r = None
    d_2r = None
    if params.mode == MODE_MULT:
        B_2r = MatrixFq(
            _int_matrix("B_2r", expect_cols=monomial_count(params.ell, 2 * params.r)), ctx
        )
        if B_2r != ideal_truncated_basis(params.ideal, 2 * params.r):
            raise FileFormatError("B_2r", "does not match the parameter ideal")
        d_2r = B_2r.rows

    enc_index = MonomialIndex(params.ell, params.enc_degree())
    G = evaluation_matrix(enc_index, ctx, points)
    sk = SecretKey(
        params=params,
        points=points,
        G=G,
        B_r=B_r,
        B_2r=B_2r,
        d_r=B_r.rows,
        d_2r=d_2r,
        s=s,
        p=p,
        sigma_s=sigma,
    )
    if int(ctx.balanced(int(s.sum() % q))) != sigma:
        raise FileFormatError("sigma_s", "does not equal the balanced sum of s")
    if np.any(sk.evaluated_basis().matvec(s) != 0):
        raise FileFormatError("s", "not orthogonal to the evaluated ideal basis")
    return sk


def ciphertext_to_structural(ct: Ciphertext) -> dict:
    return {"c": ct.c.tolist(), "adds": ct.adds, "mults": ct.mults, "q": ct.q}


def ciphertext_from_structural(d: dict) -> Ciphertext:
    from .errors import FileFormatError

    q = d.get("q")
    if not isinstance(q, int) or q < 2:
        raise FileFormatError("q", "expected an integer modulus >= 2")
    c_raw = d.get("c")
    if not isinstance(c_raw, list) or not c_raw:
        raise FileFormatError("c", "expected a nonempty list of integers")
    c = np.asarray(c_raw, dtype=np.int64)
    if np.any(c < 0) or np.any(c >= q):
        raise FileFormatError("c", "entries must lie in [0, q)")
    adds, mults = d.get("adds"), d.get("mults")
    if not isinstance(adds, int) or adds < 0:
        raise FileFormatError("adds", "expected a nonnegative integer")
    if not isinstance(mults, int) or mults < 0:
        raise FileFormatError("mults", "expected a nonnegative integer")
    return Ciphertext(c, q, adds=adds, mults=mults)


def evalkey_to_structural(ek: EvalKey) -> dict:
    return {"q": ek.q, "n": ek.n, "p_inverse": ek.p_inverse}


def evalkey_from_structural(d: dict) -> EvalKey:
    from .errors import FileFormatError

    q, n, p_inv = d.get("q"), d.get("n"), d.get("p_inverse")
    if not isinstance(q, int) or q < 2:
        raise FileFormatError("q", "expected an integer modulus >= 2")
    if not isinstance(n, int) or n < 1:
        raise FileFormatError("n", "expected a positive integer")
    if not isinstance(p_inv, int) or not (0 < p_inv < q):
        raise FileFormatError("p_inverse", "expected an integer in (0, q)")
    return EvalKey(q=q, n=n, p_inverse=p_inv)
