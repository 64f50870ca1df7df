"""Finite fields GF(p) and GF(p^d).

Elements are carried as integer *codes*: for a prime field the residue itself,
for an extension field the base-p number whose digits are the polynomial
coefficients (constant term first).  ``FieldCtx`` exposes fast operations on
codes, which is what the linear-algebra kernels use; ``FieldElem`` is the
user-facing wrapper with operator overloading.

Polynomials over a field are plain lists of codes, constant term first.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

import numpy as np

__all__ = [
    "FieldCtx",
    "FieldElem",
    "field_new",
    "find_irreducible",
    "is_irreducible",
    "arith",
    "extend_and_embed",
    "embedding_into",
    "is_prime",
    "next_prime",
]

_TABLE_LIMIT = 1 << 16


def is_prime(n: int) -> bool:
    """Deterministic primality test (exact below 2**64)."""
    from sympy import isprime

    return bool(isprime(int(n)))


def next_prime(n: int) -> int:
    """Smallest prime ``>= n``."""
    from sympy import nextprime

    n = int(n)
    return n if n >= 2 and is_prime(n) else int(nextprime(n))


def _prime_factors(n: int) -> list[int]:
    from sympy import primefactors

    return [int(q) for q in primefactors(n)]


def _as_rng(rng: int | np.random.Generator | None) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def _rand_below(rng: np.random.Generator, n: int) -> int:
    """Uniform integer in [0, n) for arbitrarily large ``n``."""
    if n <= (1 << 62):
        return int(rng.integers(0, n))
    bits = n.bit_length() + 64
    words = (bits + 31) // 32
    x = 0
    for w in rng.integers(0, 1 << 32, size=words, dtype=np.uint64):
        x = (x << 32) | int(w)
    return x % n


@dataclass(frozen=True)
class FieldCtx:
    """The field GF(p^d); ``modulus`` is monic of degree d, constant first.

    Two contexts are the same field iff ``(p, d, modulus)`` agree.
    """

    p: int
    d: int = 1
    modulus: tuple[int, ...] | None = None
    _impl: "_Impl" = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        p, d = int(self.p), int(self.d)
        if d < 1:
            raise ValueError(f"extension degree must be >= 1, got {d}")
        if p < 2 or p >= 1 << 64 or not is_prime(p):
            raise ValueError(f"characteristic {p} is not a prime below 2**64")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "d", d)
        if d == 1:
            if self.modulus is not None:
                object.__setattr__(self, "modulus", None)
        else:
            if self.modulus is None:
                raise ValueError("an extension field needs a modulus; use field_new to generate one")
            mod = tuple(int(c) % p for c in self.modulus)
            if len(mod) != d + 1 or mod[-1] != 1:
                raise ValueError(f"modulus must be monic of degree {d}")
            if not is_irreducible(list(mod), p):
                raise ValueError(f"modulus {list(mod)} is reducible over GF({p})")
            object.__setattr__(self, "modulus", mod)
        object.__setattr__(self, "_impl", _make_impl(p, d, self.modulus))

    # -- basic facts -----------------------------------------------------
    @property
    def order(self) -> int:
        return self.p**self.d

    @property
    def is_prime_field(self) -> bool:
        return self.d == 1

    def __str__(self) -> str:
        return f"GF({self.p})" if self.d == 1 else f"GF({self.p}^{self.d})"

    # -- code-level arithmetic (hot paths) --------------------------------
    def add(self, a: int, b: int) -> int:
        return self._impl.add(a, b)

    def sub(self, a: int, b: int) -> int:
        return self._impl.sub(a, b)

    def neg(self, a: int) -> int:
        return self._impl.sub(0, a)

    def mul(self, a: int, b: int) -> int:
        return self._impl.mul(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._impl.inv(a)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    # -- conversions -----------------------------------------------------
    def encode(self, coeffs: Sequence[int]) -> int:
        """Coefficient list (constant first) to code."""
        if len(coeffs) > self.d:
            raise ValueError(f"too many coefficients for {self}")
        code = 0
        for c in reversed(list(coeffs)):
            code = code * self.p + int(c) % self.p
        return code

    def decode(self, code: int) -> list[int]:
        """Code to a length-d coefficient list."""
        out = []
        for _ in range(self.d):
            code, r = divmod(code, self.p)
            out.append(r)
        return out

    def __call__(self, value: int | Sequence[int]) -> "FieldElem":
        """Element from an integer (reduced mod p) or a coefficient list."""
        if isinstance(value, FieldElem):
            if value.ctx != self:
                raise ValueError("element belongs to a different field")
            return value
        if isinstance(value, (int, np.integer)):
            return FieldElem(self, int(value) % self.p)
        return FieldElem(self, self.encode(value))

    def elem(self, code: int) -> "FieldElem":
        if not 0 <= code < self.order:
            raise ValueError(f"code {code} outside {self}")
        return FieldElem(self, int(code))

    def zero(self) -> "FieldElem":
        return FieldElem(self, 0)

    def one(self) -> "FieldElem":
        return FieldElem(self, 1)

    def elements(self) -> Iterator["FieldElem"]:
        for c in range(self.order):
            yield FieldElem(self, c)

    def random_code(self, rng: np.random.Generator) -> int:
        return _rand_below(rng, self.order)

    def random_codes(self, rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
        """Array of uniform random codes (int64 when they fit, else object)."""
        q = self.order
        if q <= (1 << 62):
            return rng.integers(0, q, size=shape, dtype=np.int64)
        flat = [_rand_below(rng, q) for _ in range(int(np.prod(shape, dtype=np.int64)))]
        return np.array(flat, dtype=object).reshape(shape)

    def to_json(self) -> dict:
        out: dict = {"p": self.p, "d": self.d}
        if self.modulus is not None:
            out["modulus"] = list(self.modulus)
        return out


# ---------------------------------------------------------------------------
# Implementations of code arithmetic


class _Impl:
    add: Callable[[int, int], int]
    sub: Callable[[int, int], int]
    mul: Callable[[int, int], int]
    inv: Callable[[int], int]


class _PrimeImpl(_Impl):
    def __init__(self, p: int) -> None:
        self.p = p

    def add(self, a: int, b: int) -> int:
        s = a + b
        return s - self.p if s >= self.p else s

    def sub(self, a: int, b: int) -> int:
        s = a - b
        return s + self.p if s < 0 else s

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def inv(self, a: int) -> int:
        return pow(a, -1, self.p)


class _Binary(_Impl):
    """GF(2^d) with codes as bit vectors."""

    def __init__(self, d: int, modulus: tuple[int, ...]) -> None:
        self.d = d
        self.mod = sum(c << i for i, c in enumerate(modulus))
        self.top = 1 << d

    def add(self, a: int, b: int) -> int:
        return a ^ b

    sub = add

    def mul(self, a: int, b: int) -> int:
        r = 0
        top, mod = self.top, self.mod
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if a & top:
                a ^= mod
        return r

    def inv(self, a: int) -> int:
        # extended Euclid on bit polynomials
        r0, r1, s0, s1 = self.mod, a, 0, 1
        while r1:
            shift = r0.bit_length() - r1.bit_length()
            if shift < 0:
                r0, r1, s0, s1 = r1, r0, s1, s0
                continue
            r0 ^= r1 << shift
            s0 ^= s1 << shift
            if r0.bit_length() < r1.bit_length():
                r0, r1, s0, s1 = r1, r0, s1, s0
        if r0 != 1:
            raise ZeroDivisionError("not invertible")
        return self._reduce(s0)

    def _reduce(self, a: int) -> int:
        while a.bit_length() > self.d:
            a ^= self.mod << (a.bit_length() - self.d - 1)
        return a


class _PolyImpl(_Impl):
    """GF(p^d) for odd p via digit lists."""

    def __init__(self, p: int, d: int, modulus: tuple[int, ...]) -> None:
        self.p, self.d, self.modulus = p, d, list(modulus)
        self.base = FieldCtx(p)

    def _dec(self, code: int) -> list[int]:
        out = []
        p = self.p
        for _ in range(self.d):
            code, r = divmod(code, p)
            out.append(r)
        return out

    def _enc(self, digits: Sequence[int]) -> int:
        code = 0
        for c in reversed(digits):
            code = code * self.p + c
        return code

    def add(self, a: int, b: int) -> int:
        p = self.p
        return self._enc([(x + y) % p for x, y in zip(self._dec(a), self._dec(b))])

    def sub(self, a: int, b: int) -> int:
        p = self.p
        return self._enc([(x - y) % p for x, y in zip(self._dec(a), self._dec(b))])

    def mul(self, a: int, b: int) -> int:
        prod = poly_mul(self.base, self._dec(a), self._dec(b))
        rem = poly_divmod(self.base, prod, self.modulus)[1]
        return self._enc(rem + [0] * (self.d - len(rem)))

    def inv(self, a: int) -> int:
        g, s = _poly_inv_mod(self.base, self._dec(a), self.modulus)
        return self._enc(s + [0] * (self.d - len(s)))


class _TableImpl(_Impl):
    """Small extension field with log/exp tables for multiplication."""

    def __init__(self, slow: _Impl, q: int, p: int) -> None:
        self.slow, self.q, self.p = slow, q, p
        gen = _find_generator(slow, q)
        exp = [0] * (2 * (q - 1))
        log = [0] * q
        x = 1
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            x = slow.mul(x, gen)
        for i in range(q - 1, 2 * (q - 1)):
            exp[i] = exp[i - (q - 1)]
        self.exp, self.log = exp, log
        self.add = slow.add
        self.sub = slow.sub

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def inv(self, a: int) -> int:
        return self.exp[(self.q - 1 - self.log[a]) % (self.q - 1)]


def _find_generator(impl: _Impl, q: int) -> int:
    factors = _prime_factors(q - 1)

    def power(a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = impl.mul(r, a)
            a = impl.mul(a, a)
            e >>= 1
        return r

    for g in range(2, q):
        if all(power(g, (q - 1) // f) != 1 for f in factors):
            return g
    return 1  # q == 2


@functools.lru_cache(maxsize=None)
def _make_impl(p: int, d: int, modulus: tuple[int, ...] | None) -> _Impl:
    if d == 1:
        return _PrimeImpl(p)
    assert modulus is not None
    slow: _Impl = _Binary(d, modulus) if p == 2 else _PolyImpl(p, d, modulus)
    if p**d <= _TABLE_LIMIT:
        return _TableImpl(slow, p**d, p)
    return slow


# ---------------------------------------------------------------------------
# Elements


@dataclass(frozen=True)
class FieldElem:
    """An element of ``ctx``; mixing elements of different fields raises."""

    ctx: FieldCtx
    code: int

    @property
    def coeffs(self) -> list[int]:
        return self.ctx.decode(self.code)

    def is_zero(self) -> bool:
        return self.code == 0

    def _other(self, other: object) -> int:
        if isinstance(other, FieldElem):
            if other.ctx != self.ctx:
                raise ValueError(f"field mismatch: {self.ctx} vs {other.ctx}")
            return other.code
        if isinstance(other, (int, np.integer)):
            return int(other) % self.ctx.p
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other: object) -> "FieldElem":
        return FieldElem(self.ctx, self.ctx.add(self.code, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other: object) -> "FieldElem":
        return FieldElem(self.ctx, self.ctx.sub(self.code, self._other(other)))

    def __rsub__(self, other: object) -> "FieldElem":
        return FieldElem(self.ctx, self.ctx.sub(self._other(other), self.code))

    def __mul__(self, other: object) -> "FieldElem":
        return FieldElem(self.ctx, self.ctx.mul(self.code, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> "FieldElem":
        return FieldElem(self.ctx, self.ctx.mul(self.code, self.ctx.inv(self._other(other))))

    def __neg__(self) -> "FieldElem":
        return FieldElem(self.ctx, self.ctx.neg(self.code))

    def __pow__(self, e: int) -> "FieldElem":
        return FieldElem(self.ctx, self.ctx.pow(self.code, int(e)))

    def inv(self) -> "FieldElem":
        return FieldElem(self.ctx, self.ctx.inv(self.code))

    def __repr__(self) -> str:
        if self.ctx.d == 1:
            return f"{self.code} in {self.ctx}"
        return f"{self.coeffs} in {self.ctx}"


def arith(op: str, a: FieldElem, b: FieldElem | int | None = None) -> FieldElem:
    """Apply ``op`` in {add, sub, mul, inv, pow}; ``b`` is an exponent for pow."""
    if op == "inv":
        return a.inv()
    if op == "pow":
        if not isinstance(b, (int, np.integer)):
            raise TypeError("pow needs an integer exponent")
        return a ** int(b)
    if not isinstance(b, FieldElem):
        raise TypeError(f"{op} needs two field elements")
    if a.ctx != b.ctx:
        raise ValueError(f"field mismatch: {a.ctx} vs {b.ctx}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# Polynomials over a field (lists of codes, constant first)


def poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_add(ctx: FieldCtx, a: Sequence[int], b: Sequence[int]) -> list[int]:
    n = max(len(a), len(b))
    out = [
        ctx.add(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)
    ]
    return poly_trim(out)


def poly_sub(ctx: FieldCtx, a: Sequence[int], b: Sequence[int]) -> list[int]:
    n = max(len(a), len(b))
    out = [
        ctx.sub(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)
    ]
    return poly_trim(out)


def poly_mul(ctx: FieldCtx, a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = ctx.add(out[i + j], ctx.mul(x, y))
    return poly_trim(out)


def poly_divmod(ctx: FieldCtx, a: Sequence[int], b: Sequence[int]) -> tuple[list[int], list[int]]:
    b = poly_trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = poly_trim(list(a))
    if len(rem) < len(b):
        return [], rem
    lead_inv = ctx.inv(b[-1])
    quot = [0] * (len(rem) - len(b) + 1)
    while len(rem) >= len(b):
        shift = len(rem) - len(b)
        c = ctx.mul(rem[-1], lead_inv)
        quot[shift] = c
        for i, y in enumerate(b):
            if y:
                rem[shift + i] = ctx.sub(rem[shift + i], ctx.mul(c, y))
        rem.pop()
        poly_trim(rem)
    return poly_trim(quot), rem


def poly_gcd(ctx: FieldCtx, a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Monic gcd."""
    a, b = poly_trim(list(a)), poly_trim(list(b))
    while b:
        a, b = b, poly_divmod(ctx, a, b)[1]
    if a:
        lead = ctx.inv(a[-1])
        a = [ctx.mul(c, lead) for c in a]
    return a


def poly_powmod(ctx: FieldCtx, a: Sequence[int], e: int, f: Sequence[int]) -> list[int]:
    result: list[int] = [1]
    base = poly_divmod(ctx, a, f)[1]
    while e:
        if e & 1:
            result = poly_divmod(ctx, poly_mul(ctx, result, base), f)[1]
        base = poly_divmod(ctx, poly_mul(ctx, base, base), f)[1]
        e >>= 1
    return result


def _poly_inv_mod(ctx: FieldCtx, a: Sequence[int], f: Sequence[int]) -> tuple[list[int], list[int]]:
    """Extended Euclid: returns (gcd, s) with s*a = gcd (mod f), gcd monic."""
    r0, r1 = poly_trim(list(f)), poly_trim(list(a))
    s0: list[int] = []
    s1: list[int] = [1]
    if not r1:
        raise ZeroDivisionError("inverse of zero")
    while r1:
        q, r = poly_divmod(ctx, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, poly_sub(ctx, s0, poly_mul(ctx, q, s1))
    if len(r0) != 1:
        raise ZeroDivisionError("not invertible modulo f")
    c = ctx.inv(r0[0])
    return [1], [ctx.mul(x, c) for x in s0]


def is_irreducible(f: Sequence[int], p: int) -> bool:
    """Irreducibility of a monic polynomial over GF(p) (constant first).

    f of degree d is irreducible iff x^(p^d) = x mod f and
    gcd(x^(p^(d/q)) - x, f) = 1 for every prime q dividing d.
    """
    base = FieldCtx(p)
    f = poly_trim([int(c) % p for c in f])
    d = len(f) - 1
    if d < 1:
        return False
    if d == 1:
        return True
    checkpoints = {d // q for q in _prime_factors(d)}
    x = [0, 1]
    h = x
    for i in range(1, d + 1):
        h = poly_powmod(base, h, p, f)
        if i in checkpoints:
            g = poly_gcd(base, poly_sub(base, h, x), f)
            if len(g) != 1:
                return False
    return poly_trim(list(h)) == x


def find_irreducible(p: int, d: int, rng: int | np.random.Generator | None = None) -> list[int]:
    """Random monic irreducible polynomial of degree ``d`` over GF(p)."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    gen = _as_rng(rng)
    if d == 1:
        return [_rand_below(gen, p), 1]
    while True:
        coeffs = [_rand_below(gen, p) for _ in range(d)]
        if coeffs[0] == 0:
            continue
        cand = coeffs + [1]
        if is_irreducible(cand, p):
            return cand


def field_new(
    p: int,
    d: int = 1,
    modulus: Sequence[int] | None = None,
    rng: int | np.random.Generator | None = None,
) -> FieldCtx:
    """Construct GF(p^d), generating an irreducible modulus when none is given."""
    if d < 1:
        raise ValueError(f"extension degree must be >= 1, got {d}")
    if not is_prime(p):
        raise ValueError(f"characteristic {p} is not prime")
    if d == 1:
        return FieldCtx(p)
    if modulus is None:
        modulus = find_irreducible(p, d, rng)
    return FieldCtx(p, d, tuple(modulus))


# ---------------------------------------------------------------------------
# Embeddings


Embedding = Callable[[FieldElem], FieldElem]


def _poly_eval(ctx: FieldCtx, coeffs: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = ctx.add(ctx.mul(acc, x), c)
    return acc


def _find_root(ext: FieldCtx, f: Sequence[int], rng: np.random.Generator) -> int:
    """A root in ``ext`` of a polynomial with coefficients in the prime field."""
    if ext.order <= _TABLE_LIMIT:
        for x in range(ext.order):
            if _poly_eval(ext, f, x) == 0:
                return x
        raise ValueError("polynomial has no root in the extension")
    g = poly_trim(list(f))
    q = ext.order
    while len(g) > 2:
        a = ext.random_code(rng)
        if ext.p == 2:
            # absolute trace of a*y splits g with probability ~1/2
            t = poly_divmod(ext, [0, a], g)[1]
            h = list(t)
            for _ in range(ext.d - 1):
                t = poly_divmod(ext, poly_mul(ext, t, t), g)[1]
                h = poly_add(ext, h, t)
        else:
            h = poly_sub(ext, poly_powmod(ext, [a, 1], (q - 1) // 2, g), [1])
        c = poly_gcd(ext, g, h)
        if 1 < len(c) < len(g):
            other = poly_divmod(ext, g, c)[0]
            g = c if len(c) <= len(other) else other
    lead_inv = ext.inv(g[1])
    return ext.neg(ext.mul(g[0], lead_inv))


def embedding_into(
    base: FieldCtx, ext: FieldCtx, rng: int | np.random.Generator | None = None
) -> Embedding:
    """Field homomorphism from ``base`` into ``ext`` (same characteristic, d | d')."""
    if base == ext:
        return lambda a: a
    if base.p != ext.p or ext.d % base.d:
        raise ValueError(f"{base} does not embed into {ext}")
    if base.d == 1:
        def embed_prime(a: FieldElem) -> FieldElem:
            if a.ctx != base:
                raise ValueError("element belongs to a different field")
            return FieldElem(ext, a.code)

        return embed_prime
    assert base.modulus is not None
    root = _find_root(ext, list(base.modulus), _as_rng(rng))
    powers = [1]
    for _ in range(base.d - 1):
        powers.append(ext.mul(powers[-1], root))

    @functools.lru_cache(maxsize=1 << 16)
    def image(code: int) -> int:
        acc = 0
        for c, pw in zip(base.decode(code), powers):
            if c:
                acc = ext.add(acc, ext.mul(c, pw))
        return acc

    def embed(a: FieldElem) -> FieldElem:
        if a.ctx != base:
            raise ValueError("element belongs to a different field")
        return FieldElem(ext, image(a.code))

    embed.code_map = image  # type: ignore[attr-defined]
    return embed


def extend_and_embed(
    base: FieldCtx, s: int, rng: int | np.random.Generator | None = None
) -> tuple[FieldCtx, Embedding]:
    """GF(p^(s*d)) together with an embedding of ``base`` into it."""
    if s < 1:
        raise ValueError("extension factor must be >= 1")
    if s == 1:
        return base, lambda a: a
    gen = _as_rng(rng)
    ext = field_new(base.p, base.d * s, rng=gen)
    return ext, embedding_into(base, ext, gen)


def code_map(embed: Embedding) -> Callable[[int], int]:
    """Code-level view of an embedding (identity or cached polynomial map)."""
    fn = getattr(embed, "code_map", None)
    return fn if fn is not None else (lambda c: c)
