"""Game-based security harness: hidden-subspace membership (HSM), decisional
LWE, and IND-CPA games, the two reduction adapters between them, and
Monte-Carlo advantage estimation.

Every game draws a hidden bit beta at initialization, serves Sample queries
freely (up to a cap), answers exactly one Challenge, and scores the
adversary's guess in Finalize. An adversary is any object with
``run(oracles, stream) -> guess_bit``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ProtocolViolationError
from .linalg import MatrixFq, dot_mod, matmul_mod, rank
from .sampling import NoiseSpec, RandomStream, sample_noise_vector
from .scheme import (
    Ciphertext,
    SchemeParams,
    SecretKey,
    encrypt,
    keygen,
)

SAMPLE_CAP = 4096


@dataclass
class SubspaceInstance:
    """An l-dimensional subspace of F_q^n plus the noise distribution."""

    n: int
    q: int
    basis: MatrixFq
    noise: NoiseSpec

    def __post_init__(self):
        if self.basis.cols != self.n:
            raise ValueError("basis width must equal n")
        l = self.basis.rows
        if not (1 <= l < self.n):
            raise ValueError(f"need 1 <= dim {l} < n {self.n}")
        if rank(self.basis) != l:
            raise ValueError("basis rows must be linearly independent")

    @property
    def dim(self) -> int:
        return self.basis.rows


@dataclass
class AdvantageEstimate:
    trials: int
    wins: int
    advantage: float
    ci_halfwidth: float

    @property
    def win_rate(self) -> float:
        return self.wins / self.trials


@dataclass
class Leak:
    """Out-of-band key material handed to harness-validation adversaries."""

    p: Optional[int] = None
    sk: Optional[SecretKey] = None
    s: Optional[np.ndarray] = None
    threshold: Optional[int] = None


class _OracleBase:
    """Hidden beta, one challenge, bounded samples, audit transcript."""

    def __init__(self, stream: RandomStream, force_beta=None, sample_cap=SAMPLE_CAP):
        self._stream = stream
        self.beta = int(force_beta) if force_beta is not None else stream.coin()
        self._challenged = False
        self._samples = 0
        self._cap = sample_cap
        self.audit = []
        self.leak: Optional[Leak] = None

    def _count_sample(self):
        self._samples += 1
        if self._samples > self._cap:
            raise ProtocolViolationError(f"sample cap {self._cap} exceeded")

    def _claim_challenge(self):
        if self._challenged:
            raise ProtocolViolationError("challenge may be called once per game")
        self._challenged = True

    def finalize(self, guess: int) -> bool:
        return int(guess) == self.beta


class HsmOracles(_OracleBase):
    def __init__(self, instance: SubspaceInstance, stream, force_beta=None,
                 sample_cap=SAMPLE_CAP):
        super().__init__(stream, force_beta, sample_cap)
        self.instance = instance
        self.n, self.q = instance.n, instance.q

    def _noisy_member(self):
        u = self._stream.uniform_fq(self.q, size=self.instance.dim)
        v = matmul_mod(u.reshape(1, -1), self.instance.basis.data, self.q)[0]
        e = sample_noise_vector(self._stream, self.instance.noise, self.n)
        return v, e, (v + e) % self.q

    def sample(self) -> np.ndarray:
        self._count_sample()
        v, e, out = self._noisy_member()
        self.audit.append(("sample", v, e, out))
        return out

    def challenge(self) -> np.ndarray:
        self._claim_challenge()
        if self.beta == 1:
            v, e, out = self._noisy_member()
        else:
            out = self._stream.uniform_fq(self.q, size=self.n)
            v, e = None, None
        self.audit.append(("challenge", v, e, out))
        return out


class DlweOracles(_OracleBase):
    def __init__(self, n: int, q: int, noise: NoiseSpec, stream, force_beta=None,
                 sample_cap=SAMPLE_CAP):
        super().__init__(stream, force_beta, sample_cap)
        self.n, self.q = n, q
        self.noise = NoiseSpec(noise.alpha, q, 1)
        self.secret = stream.uniform_fq(q, size=n)

    def _lwe_pair(self):
        a = self._stream.uniform_fq(self.q, size=self.n)
        e = int(sample_noise_vector(self._stream, self.noise, 1)[0])
        b = (dot_mod(a, self.secret, self.q) + e) % self.q
        return a, b

    def sample(self):
        self._count_sample()
        a, b = self._lwe_pair()
        self.audit.append(("sample", a, b))
        return a, b

    def challenge(self):
        self._claim_challenge()
        if self.beta == 1:
            a, b = self._lwe_pair()
        else:
            a = self._stream.uniform_fq(self.q, size=self.n)
            b = int(self._stream.uniform_fq(self.q))
        self.audit.append(("challenge", a, b))
        return a, b


class IndCpaOracles(_OracleBase):
    """Encrypt-zero oracle plus a one-shot left-right challenge."""

    def __init__(self, sk: SecretKey, stream, force_beta=None, sample_cap=SAMPLE_CAP):
        super().__init__(stream, force_beta, sample_cap)
        self.sk = sk
        self.n, self.q = sk.n, sk.params.q
        self.leak = Leak(p=sk.p, sk=sk, s=sk.s)

    def encrypt_zero(self) -> Ciphertext:
        self._count_sample()
        ct = encrypt(self.sk, 0, self._stream.derive(self._samples))
        self.audit.append(("encrypt_zero", ct.c))
        return ct

    def left_right(self, m0: int, m1: int) -> Ciphertext:
        self._claim_challenge()
        if m0 not in (0, 1) or m1 not in (0, 1):
            raise ValueError("challenge messages must be bits")
        if m0 != 0 and m1 != 0:
            raise ProtocolViolationError("one challenge message must be 0")
        m = (m0, m1)[self.beta]
        ct = encrypt(self.sk, m, self._stream.derive(SAMPLE_CAP + 1))
        self.audit.append(("left_right", m0, m1, ct.c))
        return ct


# ---------------------------------------------------------------------------
# games

def hsm_game(instance: SubspaceInstance, adversary, stream: RandomStream,
             force_beta=None, leak: Optional[Leak] = None) -> bool:
    oracles = HsmOracles(instance, stream.derive(0), force_beta)
    oracles.leak = leak
    guess = adversary.run(oracles, stream.derive(1))
    return oracles.finalize(guess)


def dlwe_game(n: int, q: int, noise: NoiseSpec, adversary, stream: RandomStream,
              force_beta=None, leak: Optional[Leak] = None) -> bool:
    oracles = DlweOracles(n, q, noise, stream.derive(0), force_beta)
    oracles.leak = leak
    guess = adversary.run(oracles, stream.derive(1))
    return oracles.finalize(guess)


def indcpa_game(params: SchemeParams, adversary, stream: RandomStream,
                force_beta=None, sk: Optional[SecretKey] = None) -> bool:
    if sk is None:
        sk = keygen(params, stream.derive(0))
    oracles = IndCpaOracles(sk, stream.derive(1), force_beta)
    guess = adversary.run(oracles, stream.derive(2))
    return oracles.finalize(guess)


# ---------------------------------------------------------------------------
# reduction adapters

class _HsmViewOfDlwe:
    """Presents DLWE oracles as an (n+1)-dimensional HSM instance by mapping
    each pair (a, b) to the vector (a, -b)."""

    def __init__(self, dlwe_oracles: DlweOracles):
        self._inner = dlwe_oracles
        self.n = dlwe_oracles.n + 1
        self.q = dlwe_oracles.q
        self.leak = dlwe_oracles.leak
        self.transcript = []

    def _convert(self, pair):
        a, b = pair
        vec = np.concatenate([a, [(-b) % self.q]]).astype(np.int64)
        self.transcript.append((a, b, vec))
        return vec

    def sample(self):
        return self._convert(self._inner.sample())

    def challenge(self):
        return self._convert(self._inner.challenge())


class Lemma1Adversary:
    """DLWE adversary built from an HSM adversary via the (a, -b) embedding."""

    def __init__(self, hsm_adversary):
        self.inner = hsm_adversary
        self.last_view: Optional[_HsmViewOfDlwe] = None

    def run(self, oracles: DlweOracles, stream: RandomStream) -> int:
        view = _HsmViewOfDlwe(oracles)
        self.last_view = view
        return self.inner.run(view, stream)


def lemma1_adapter(hsm_adversary) -> Lemma1Adversary:
    return Lemma1Adversary(hsm_adversary)


class _IndCpaViewOfHsm:
    """Simulates the IND-CPA oracles on top of an HSM instance: encryptions of
    zero come from Sample, and the left-right reply is Challenge plus the
    plaintext encoding p * m_gamma * 1."""

    def __init__(self, hsm_oracles: HsmOracles, p: int, gamma: int,
                 leak: Optional[Leak]):
        self._inner = hsm_oracles
        self.p = p
        self.gamma = gamma
        self.n, self.q = hsm_oracles.n, hsm_oracles.q
        self.leak = leak
        self.transcript = []

    def encrypt_zero(self) -> Ciphertext:
        v = self._inner.sample()
        self.transcript.append(("encrypt_zero", v, v))
        return Ciphertext(v, self.q)

    def left_right(self, m0: int, m1: int) -> Ciphertext:
        if m0 != 0 and m1 != 0:
            raise ProtocolViolationError("one challenge message must be 0")
        v = self._inner.challenge()
        m = (m0, m1)[self.gamma]
        c = (v + self.p * m) % self.q
        self.transcript.append(("left_right", v, c))
        return Ciphertext(c, self.q)


class Theorem1Adversary:
    """HSM adversary built from an IND-CPA adversary: simulate the IND-CPA
    game against the hidden subspace, answer 1 exactly when the inner
    adversary wins the simulation."""

    def __init__(self, indcpa_adversary, p: int, leak: Optional[Leak] = None):
        self.inner = indcpa_adversary
        self.p = p
        self.leak = leak
        self.last_view: Optional[_IndCpaViewOfHsm] = None

    def run(self, oracles: HsmOracles, stream: RandomStream) -> int:
        gamma = stream.coin()
        view = _IndCpaViewOfHsm(oracles, self.p, gamma, self.leak)
        self.last_view = view
        guess = self.inner.run(view, stream.derive(0))
        return 1 if guess == gamma else 0


def theorem1_adapter(indcpa_adversary, p: int, leak: Optional[Leak] = None) -> Theorem1Adversary:
    return Theorem1Adversary(indcpa_adversary, p, leak)


# ---------------------------------------------------------------------------
# instances and estimation

def uniform_subspace_instance(n: int, q: int, l: int, noise: NoiseSpec,
                              stream: RandomStream) -> SubspaceInstance:
    """A uniformly random l-dimensional subspace (synthetic HSM instances)."""
    from .field import FieldContext

    ctx = FieldContext(q)
    for _ in range(64):
        M = MatrixFq(stream.uniform_fq(q, size=(l, n)), ctx)
        if rank(M) == l:
            return SubspaceInstance(n=n, q=q, basis=M, noise=noise)
    raise RuntimeError("could not sample an independent basis")


def lwe_subspace_instance(s: np.ndarray, q: int, noise: NoiseSpec) -> SubspaceInstance:
    """The (s, 1)-orthogonal subspace of F_q^{n+1} with noise on the last
    coordinate only: rows (e_i, -s_i)."""
    from .field import FieldContext

    n = len(s)
    basis = np.hstack([np.eye(n, dtype=np.int64), (-s.reshape(-1, 1)) % q])
    return SubspaceInstance(
        n=n + 1, q=q, basis=MatrixFq(basis, FieldContext(q)),
        noise=NoiseSpec(noise.alpha, q, 1),
    )


def scheme_instance(sk: SecretKey) -> SubspaceInstance:
    """The scheme-induced instance: evaluated ideal subspace + scheme noise."""
    return SubspaceInstance(
        n=sk.n, q=sk.params.q, basis=sk.evaluated_basis(), noise=sk.noise_spec()
    )


def estimate_advantage(game_fn: Callable, adversary, trials: int,
                       stream: RandomStream) -> AdvantageEstimate:
    """Run independent games on derived streams and report |win rate - 1/2|
    with its normal-approximation 95% half-width."""
    if trials < 100:
        raise ValueError(f"need trials >= 100, got {trials}")
    wins = 0
    for i in range(trials):
        wins += bool(game_fn(adversary, stream.derive(i)))
    return AdvantageEstimate(
        trials=trials,
        wins=wins,
        advantage=abs(wins / trials - 0.5),
        ci_halfwidth=1.96 * (0.25 / trials) ** 0.5,
    )


def joint_ci(a: AdvantageEstimate, b: AdvantageEstimate) -> float:
    return (a.ci_halfwidth**2 + b.ci_halfwidth**2) ** 0.5


# ---------------------------------------------------------------------------
# paired reduction experiments (used by the CLI and the acceptance suite)

def lemma1_experiment(n: int, q: int, noise: NoiseSpec, hsm_adversary,
                      trials: int, stream: RandomStream) -> dict:
    """Win rates of an HSM adversary natively on fresh (s, 1)-perp instances
    versus wrapped as a DLWE adversary."""

    def native_game(adv, sub):
        s = sub.derive(0).uniform_fq(q, size=n)
        inst = lwe_subspace_instance(s, q, noise)
        return hsm_game(inst, adv, sub.derive(1))

    wrapped = lemma1_adapter(hsm_adversary)

    def dlwe_game_fn(adv, sub):
        return dlwe_game(n, q, noise, adv, sub)

    native = estimate_advantage(native_game, hsm_adversary, trials, stream.derive(0))
    reduced = estimate_advantage(dlwe_game_fn, wrapped, trials, stream.derive(1))
    return {"native_hsm": native, "wrapped_dlwe": reduced}


def theorem1_experiment(params: SchemeParams, indcpa_adversary, trials: int,
                        stream: RandomStream) -> dict:
    """Measured IND-CPA advantage of an adversary versus the HSM advantage of
    its wrapped form on scheme-induced instances (fresh key per game)."""

    def native_game(adv, sub):
        return indcpa_game(params, adv, sub)

    def wrapped_game(adv, sub):
        sk = keygen(params, sub.derive(0))
        inst = scheme_instance(sk)
        wrapped = theorem1_adapter(adv, p=sk.p, leak=Leak(p=sk.p, sk=sk, s=sk.s))
        return hsm_game(inst, wrapped, sub.derive(1))

    native = estimate_advantage(native_game, indcpa_adversary, trials, stream.derive(0))
    reduced = estimate_advantage(wrapped_game, indcpa_adversary, trials, stream.derive(1))
    return {"native_indcpa": native, "wrapped_hsm": reduced}
