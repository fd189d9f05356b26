"""Bit-exact JSON artifacts: parameter, key, ciphertext and eval-key files.

All files are canonical JSON (sorted keys, no whitespace) so identical inputs
produce byte-identical outputs. ``alpha`` and ``epsilon`` travel as decimal
strings; every array entry is an integer in [0, q). A params hash binds keys
and ciphertexts to the parameter set they were made under.
"""

from __future__ import annotations

import hashlib
import json
from decimal import Decimal, InvalidOperation
from pathlib import Path

from .errors import FileFormatError
from .field import FieldContext
from .mvpoly import IdealSpec, MonomialIndex, Polynomial
from .scheme import (
    Ciphertext,
    EvalKey,
    SchemeParams,
    SecretKey,
    ciphertext_from_structural,
    ciphertext_to_structural,
    evalkey_from_structural,
    evalkey_to_structural,
    key_from_structural,
    key_to_structural,
)

FILE_VERSION = 1


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def params_hash(params: SchemeParams) -> str:
    return hashlib.sha256(
        canonical_json(params.canonical_dict()).encode("utf-8")
    ).hexdigest()


def _require(d: dict, field: str, kind, optional=False):
    if field not in d:
        if optional:
            return None
        raise FileFormatError(field, "missing")
    v = d[field]
    if kind is int and isinstance(v, bool):
        raise FileFormatError(field, "expected an integer")
    if not isinstance(v, kind):
        raise FileFormatError(field, f"expected {getattr(kind, '__name__', kind)}")
    return v


def params_to_dict(params: SchemeParams, seed=None) -> dict:
    d = params.canonical_dict()
    if seed is not None:
        d["seed"] = int(seed)
    return d


def params_from_dict(d: dict) -> SchemeParams:
    if not isinstance(d, dict):
        raise FileFormatError("params", "expected a JSON object")
    lam = _require(d, "lambda", int)
    q = _require(d, "q", int)
    ell = _require(d, "ell", int)
    r = _require(d, "r", int)
    n = _require(d, "n", int)
    alpha = _require(d, "alpha", str)
    epsilon = _require(d, "epsilon", str)
    mode = _require(d, "mode", str)
    headroom = _require(d, "headroom", (int, float))
    ideal_raw = _require(d, "ideal", list)
    literal = d.get("literal_mult_noise", False)
    if not isinstance(literal, bool):
        raise FileFormatError("literal_mult_noise", "expected a boolean")
    for name, value in (("alpha", alpha), ("epsilon", epsilon)):
        try:
            Decimal(value)
        except InvalidOperation:
            raise FileFormatError(name, f"not a decimal string: {value!r}")

    try:
        ctx = FieldContext(q)
    except ValueError as exc:
        raise FileFormatError("q", str(exc))
    if ell < 1 or r < 1:
        raise FileFormatError("ell" if ell < 1 else "r", "must be >= 1")
    index = MonomialIndex(ell, r)
    generators = []
    for gi, terms in enumerate(ideal_raw):
        if not isinstance(terms, list) or not terms:
            raise FileFormatError("ideal", f"generator {gi} must be a nonempty term list")
        pairs = []
        for term in terms:
            if not isinstance(term, dict) or set(term) != {"coeff", "exps"}:
                raise FileFormatError("ideal", f"generator {gi}: terms need coeff and exps")
            coeff, exps = term["coeff"], term["exps"]
            if not isinstance(coeff, int) or not (0 <= coeff < q):
                raise FileFormatError("ideal", f"generator {gi}: coeff must be in [0, q)")
            if (
                not isinstance(exps, list)
                or len(exps) != ell
                or any(not isinstance(e, int) or e < 0 for e in exps)
            ):
                raise FileFormatError("ideal", f"generator {gi}: exps must be {ell} nonnegative ints")
            if sum(exps) > r:
                raise FileFormatError("ideal", f"generator {gi}: term degree exceeds r")
            pairs.append((coeff, exps))
        generators.append(Polynomial.from_terms(index, ctx, pairs))
    try:
        ideal = IdealSpec(generators)
        return SchemeParams(
            lam=lam, q=q, ell=ell, r=r, n=n, alpha=alpha, epsilon=epsilon,
            mode=mode, ideal=ideal, headroom=headroom, literal_mult_noise=literal,
        )
    except ValueError as exc:
        raise FileFormatError("params", str(exc))


def save_params(path, params: SchemeParams, seed=None):
    Path(path).write_text(canonical_json(params_to_dict(params, seed)))


def load_params(path) -> tuple:
    """Returns (SchemeParams, seed-or-None)."""
    d = _read_json(path)
    seed = d.pop("seed", None)
    if seed is not None and not isinstance(seed, int):
        raise FileFormatError("seed", "expected an integer")
    return params_from_dict(d), seed


def _read_json(path) -> dict:
    try:
        d = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FileFormatError("json", f"{path}: {exc}")
    if not isinstance(d, dict):
        raise FileFormatError("json", "top level must be an object")
    return d


def _check_version(d: dict):
    if d.get("version") != FILE_VERSION:
        raise FileFormatError("version", f"expected {FILE_VERSION}")


def save_key(path, sk: SecretKey):
    d = {
        "version": FILE_VERSION,
        "params": params_to_dict(sk.params),
        "params_hash": params_hash(sk.params),
    }
    d.update(key_to_structural(sk))
    Path(path).write_text(canonical_json(d))


def load_key(path) -> SecretKey:
    d = _read_json(path)
    _check_version(d)
    params = params_from_dict(_require(d, "params", dict))
    if d.get("params_hash") != params_hash(params):
        raise FileFormatError("params_hash", "does not match the embedded parameters")
    if d.get("monomial_order") != "grlex":
        raise FileFormatError("monomial_order", "unsupported monomial order")
    return key_from_structural(params, d)


def save_ciphertext(path, ct: Ciphertext, phash: str):
    d = {"version": FILE_VERSION, "params_hash": phash}
    d.update(ciphertext_to_structural(ct))
    Path(path).write_text(canonical_json(d))


def load_ciphertext(path) -> tuple:
    """Returns (Ciphertext, params_hash)."""
    d = _read_json(path)
    _check_version(d)
    phash = _require(d, "params_hash", str)
    return ciphertext_from_structural(d), phash


def save_evalkey(path, ek: EvalKey, phash: str):
    d = {"version": FILE_VERSION, "params_hash": phash}
    d.update(evalkey_to_structural(ek))
    Path(path).write_text(canonical_json(d))


def load_evalkey(path) -> tuple:
    """Returns (EvalKey, params_hash)."""
    d = _read_json(path)
    _check_version(d)
    phash = _require(d, "params_hash", str)
    return evalkey_from_structural(d), phash
