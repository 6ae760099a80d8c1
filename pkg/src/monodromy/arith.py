"""Exact arithmetic in small finite fields and involutive coefficient algebras.

Fields F_{p^d} are realized with full lookup tables (add/mul/inv/frobenius)
indexed by integer element codes.  A code is the little-endian base-p value of
the coefficient vector of the residue polynomial, so code arithmetic is exact
and reproducible.  The coefficient algebra is either a field F_{q^2} with the
x -> x^q involution (unitary case) or a split product F_q x F_q with the swap
involution (linear case).  Algebra elements are plain tuples of component
codes; the `InvolutiveAlgebra` object owns all operations on them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
import sympy
from sympy import GF, Poly, Symbol
from sympy.polys.specialpolys import cyclotomic_poly

# Tables of size s x s are kept; beyond this the memory cost is unreasonable.
MAX_TABLE_ORDER = 6561


class FieldTooLargeError(ValueError):
    """The requested field exceeds the table-based size limit."""


class ZeroDivisorError(ZeroDivisionError):
    """Inversion of a non-unit; carries the offending split component."""

    def __init__(self, component: int):
        self.component = component
        super().__init__(f"non-unit: component {component} is zero")


class Case(str, Enum):
    UNITARY = "unitary"
    SPLIT = "split"


def _is_odd_prime(n: int) -> bool:
    return n >= 3 and n % 2 == 1 and sympy.isprime(n)


def ord_mod(p: int, l: int) -> int:
    """Least f >= 1 with p**f == 1 mod l, for distinct odd primes p, l."""
    if not _is_odd_prime(p) or not _is_odd_prime(l):
        raise ValueError(f"expected odd primes, got p={p}, l={l}")
    if p == l:
        raise ValueError("p and l must be distinct")
    f, acc = 1, p % l
    while acc != 1:
        acc = (acc * p) % l
        f += 1
    assert (l - 1) % f == 0
    return f


@dataclass(frozen=True)
class SplittingData:
    """How the prime p splits under the l-th cyclotomic extension."""

    p: int
    l: int
    f: int
    case: Case
    q: int
    paper_case: Case

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "l": self.l,
            "f": self.f,
            "case": self.case.value,
            "q": self.q,
            "paper_case": self.paper_case.value,
        }


def splitting_data(p: int, l: int) -> SplittingData:
    """Classify (p, l) as unitary (inert) or split and compute q.

    The working criterion is group-theoretic: the case is unitary iff -1 lies
    in the subgroup generated by p mod l, i.e. iff f = ord(p mod l) is even.
    The parity phrase from the source convention ("(l-1)/f odd") is computed
    separately and reported as `paper_case`; the two disagree for some
    parameters (e.g. l=13, p = -1 mod 13) and the disagreement is surfaced,
    not resolved silently.
    """
    f = ord_mod(p, l)
    unitary = f % 2 == 0
    if unitary:
        # -1 is the unique order-2 element of (Z/l)^*, so it lies in <p>
        # exactly when the subgroup order f is even.
        assert pow(p, f // 2, l) == l - 1
    case = Case.UNITARY if unitary else Case.SPLIT
    paper_case = Case.UNITARY if ((l - 1) // f) % 2 == 1 else Case.SPLIT
    q = p ** (f // 2) if unitary else p**f
    return SplittingData(p=p, l=l, f=f, case=case, q=q, paper_case=paper_case)


def cyclotomic_factor_degrees(p: int, l: int) -> list[int]:
    """Degrees of the irreducible factors of the l-th cyclotomic poly mod p."""
    x = Symbol("x")
    poly = Poly(cyclotomic_poly(l, x), x, domain=GF(p, symmetric=False))
    _, factors = poly.factor_list()
    degs = []
    for fac, mult in factors:
        degs.extend([fac.degree()] * mult)
    return sorted(degs)


def _cyclotomic_moduli(p: int, l: int) -> list[tuple[int, ...]]:
    """Monic irreducible factors of the l-th cyclotomic poly mod p.

    Returned as ascending little-endian coefficient tuples (constant first,
    leading 1 included), so [0] is the lexicographically least factor.
    """
    x = Symbol("x")
    poly = Poly(cyclotomic_poly(l, x), x, domain=GF(p, symmetric=False))
    _, factors = poly.factor_list()
    mods = []
    for fac, _ in factors:
        coeffs = [int(c) % p for c in reversed(fac.all_coeffs())]
        mods.append(tuple(coeffs))
    mods.sort(key=lambda c: tuple(reversed(c[:-1])))
    return mods


class Fq:
    """Table-backed finite field F_{p^d} with elements as integer codes."""

    def __init__(self, p: int, modulus: tuple[int, ...] | None = None):
        """`modulus` is the little-endian monic modulus (length d+1); omit it
        for the prime field itself."""
        self.p = p
        if modulus is None:
            modulus = (0, 1)  # x, i.e. F_p itself
        if modulus[-1] != 1:
            raise ValueError("modulus must be monic")
        self.modulus = tuple(c % p for c in modulus[:-1]) + (1,)
        self.degree = len(modulus) - 1
        self.order = p**self.degree
        if self.order > MAX_TABLE_ORDER:
            raise FieldTooLargeError(
                f"F_{p}^{self.degree} has order {self.order} > {MAX_TABLE_ORDER}"
            )
        self._build_tables()

    # -- construction ------------------------------------------------------

    def _poly_mul(self, a: list[int], b: list[int]) -> list[int]:
        p, d = self.p, self.degree
        prod = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] = (prod[i + j] + ai * bj) % p
        # reduce by the monic modulus
        red = [-c % p for c in self.modulus[:-1]]
        for i in range(len(prod) - 1, d - 1, -1):
            c = prod[i]
            if c:
                for j, rj in enumerate(red):
                    prod[i - d + j] = (prod[i - d + j] + c * rj) % p
            prod[i] = 0
        return prod[:d]

    def _code(self, digits) -> int:
        c = 0
        for dig in reversed(list(digits)):
            c = c * self.p + int(dig)
        return c

    def digits(self, code: int) -> list[int]:
        out = []
        for _ in range(self.degree):
            out.append(code % self.p)
            code //= self.p
        return out

    def _build_tables(self):
        p, d, s = self.p, self.degree, self.order
        dig = np.zeros((s, d), dtype=np.int64)
        tmp = np.arange(s)
        for i in range(d):
            dig[:, i] = tmp % p
            tmp //= p
        self._dig = dig
        weights = p ** np.arange(d)
        self.add = ((dig[:, None, :] + dig[None, :, :]) % p @ weights).astype(
            np.int32
        )
        self.neg = (((-dig) % p) @ weights).astype(np.int32)

        # discrete-log tables off a primitive element
        g = self._find_generator()
        self.generator = g
        exp = np.zeros(s - 1, dtype=np.int32)
        log = np.zeros(s, dtype=np.int64)
        acc = 1
        cur = [1] + [0] * (d - 1)
        gd = self.digits(g)
        for k in range(s - 1):
            code = self._code(cur)
            exp[k] = code
            log[code] = k
            cur = self._poly_mul(cur, gd)
        self._exp, self._log = exp, log

        ii, jj = np.meshgrid(np.arange(s), np.arange(s), indexing="ij")
        mul = np.zeros((s, s), dtype=np.int64)
        nz = (ii > 0) & (jj > 0)
        mul[nz] = exp[(log[ii[nz]] + log[jj[nz]]) % (s - 1)]
        self.mul = mul.astype(np.int32)
        inv = np.zeros(s, dtype=np.int32)
        inv[1:] = exp[(-log[1:]) % (s - 1)]
        self.inv_table = inv

    def _find_generator(self) -> int:
        s = self.order
        factors = list(sympy.factorint(s - 1))
        for g in range(1, s):
            gd = self.digits(g)
            if all(
                self._pow_poly(gd, (s - 1) // r) != [1] + [0] * (self.degree - 1)
                for r in factors
            ):
                return g
        raise AssertionError("no generator found")

    def _pow_poly(self, base: list[int], e: int) -> list[int]:
        result = [1] + [0] * (self.degree - 1)
        while e:
            if e & 1:
                result = self._poly_mul(result, base)
            base = self._poly_mul(base, base)
            e >>= 1
        return result

    # -- scalar ops --------------------------------------------------------

    def mul2(self, a: int, b: int) -> int:
        return int(self.mul[a, b])

    def add2(self, a: int, b: int) -> int:
        return int(self.add[a, b])

    def sub(self, a: int, b: int) -> int:
        return int(self.add[a, self.neg[b]])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inversion of 0")
        return int(self.inv_table[a])

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("inversion of 0")
            return 1 if e == 0 else 0
        k = int(self._log[a])
        return int(self._exp[(k * e) % (self.order - 1)])

    def elem_order(self, a: int) -> int:
        if a == 0:
            raise ValueError("0 has no multiplicative order")
        n = self.order - 1
        k = int(self._log[a])
        import math

        return n // math.gcd(n, k)

    def frobenius(self, a: int, times: int = 1) -> int:
        return self.pow(a, self.p**times)


# -- the involutive algebra ------------------------------------------------

AlgElem = tuple[int, ...]  # one component code (unitary) or two (split)


class InvolutiveAlgebra:
    """E_q: either F_{q^2} with x -> x^q, or F_q x F_q with swap.

    Elements are tuples of component codes.  All operations are pure; the
    object is immutable after construction and safe to share between threads.
    """

    def __init__(self, sd: SplittingData, field: Fq, zeta: AlgElem):
        self.sd = sd
        self.kind = sd.case
        self.p = sd.p
        self.l = sd.l
        self.q = sd.q
        self.ncomp = 1 if sd.case is Case.UNITARY else 2
        # component field: F_{q^2} (unitary) or F_q (split)
        self.field = field
        self.zeta = zeta
        # F_p-dimension of the algebra and of the fixed field
        self.dim = self.ncomp * field.degree
        self.fixed_dim = field.degree // 2 if self.ncomp == 1 else field.degree
        self._check()

    def _check(self):
        assert self.involve(self.involve(self.zeta)) == self.zeta
        assert self.power(self.zeta, self.l) == self.one
        assert self.zeta != self.one
        if self.kind is Case.UNITARY:
            assert (self.q + 1) % self.l == 0
            assert self.norm(self.zeta) == self.one
        else:
            assert (self.q - 1) % self.l == 0

    # -- element constructors ---------------------------------------------

    @property
    def one(self) -> AlgElem:
        return (1,) * self.ncomp

    @property
    def zero(self) -> AlgElem:
        return (0,) * self.ncomp

    def scalar(self, c: int) -> AlgElem:
        """Embed an integer (via F_p) diagonally."""
        return (c % self.p,) * self.ncomp

    def elements(self):
        """All elements, in code order (small algebras only)."""
        ranges = [range(self.field.order)] * self.ncomp
        return itertools.product(*ranges)

    def random(self, rng) -> AlgElem:
        return tuple(rng.randrange(self.field.order) for _ in range(self.ncomp))

    def random_unit(self, rng) -> AlgElem:
        return tuple(rng.randrange(1, self.field.order) for _ in range(self.ncomp))

    # -- ring operations ---------------------------------------------------

    def add(self, x: AlgElem, y: AlgElem) -> AlgElem:
        F = self.field
        return tuple(F.add2(a, b) for a, b in zip(x, y))

    def sub(self, x: AlgElem, y: AlgElem) -> AlgElem:
        F = self.field
        return tuple(F.sub(a, b) for a, b in zip(x, y))

    def neg(self, x: AlgElem) -> AlgElem:
        F = self.field
        return tuple(int(F.neg[a]) for a in x)

    def mul(self, x: AlgElem, y: AlgElem) -> AlgElem:
        F = self.field
        return tuple(F.mul2(a, b) for a, b in zip(x, y))

    def invert(self, x: AlgElem) -> AlgElem:
        for c, a in enumerate(x):
            if a == 0:
                raise ZeroDivisorError(c)
        F = self.field
        return tuple(F.inv(a) for a in x)

    def power(self, x: AlgElem, e: int) -> AlgElem:
        if e < 0:
            return self.power(self.invert(x), -e)
        F = self.field
        return tuple(F.pow(a, e) for a in x)

    def is_unit(self, x: AlgElem) -> bool:
        return all(a != 0 for a in x)

    # -- involution and derived maps --------------------------------------

    def involve(self, x: AlgElem) -> AlgElem:
        if self.kind is Case.UNITARY:
            return (self.field.pow(x[0], self.q),)
        return (x[1], x[0])

    def norm(self, x: AlgElem) -> AlgElem:
        return self.mul(x, self.involve(x))

    def trace(self, x: AlgElem) -> AlgElem:
        return self.add(x, self.involve(x))

    def is_fixed(self, x: AlgElem) -> bool:
        return self.involve(x) == x

    def is_imaginary(self, x: AlgElem) -> bool:
        return self.involve(x) == self.neg(x)

    # -- roots of unity ----------------------------------------------------

    def roots_of_unity(self) -> list[AlgElem]:
        """The l distinct l-th roots of unity, as powers of zeta."""
        return [self.power(self.zeta, k) for k in range(self.l)]

    # -- F_p-linear structure (for the form solver) ------------------------

    def to_fp_vector(self, x: AlgElem) -> list[int]:
        out = []
        for a in x:
            out.extend(self.field.digits(a))
        return out

    def from_fp_vector(self, v) -> AlgElem:
        d = self.field.degree
        out = []
        for c in range(self.ncomp):
            out.append(self.field._code(v[c * d : (c + 1) * d]))
        return tuple(out)

    @lru_cache(maxsize=None)
    def mult_matrix(self, x: AlgElem):
        """F_p-matrix of multiplication by x, acting on fp-vectors."""
        D = self.dim
        M = np.zeros((D, D), dtype=np.int64)
        for j in range(D):
            e = [0] * D
            e[j] = 1
            M[:, j] = self.to_fp_vector(self.mul(x, self.from_fp_vector(e)))
        return M

    @lru_cache(maxsize=1)
    def involve_matrix(self):
        D = self.dim
        M = np.zeros((D, D), dtype=np.int64)
        for j in range(D):
            e = [0] * D
            e[j] = 1
            M[:, j] = self.to_fp_vector(self.involve(self.from_fp_vector(e)))
        return M

    # -- serialization -----------------------------------------------------

    def elem_to_digits(self, x: AlgElem) -> list[list[int]]:
        """Little-endian base-p coefficient vectors, one per component."""
        return [self.field.digits(a) for a in x]

    def to_dict(self) -> dict:
        return {
            **self.sd.to_dict(),
            "modulus": list(self.field.modulus),
            "zeta": self.elem_to_digits(self.zeta),
        }

    def __repr__(self):
        if self.kind is Case.UNITARY:
            return f"InvolutiveAlgebra(unitary, F_{self.q}^2, l={self.l})"
        return f"InvolutiveAlgebra(split, F_{self.q} x F_{self.q}, l={self.l})"


@lru_cache(maxsize=None)
def build_algebra(p: int, l: int) -> InvolutiveAlgebra:
    """Construct E_q for the pair (p, l), deterministically.

    The component field is presented as F_p[x]/(m) where m is the
    lexicographically least monic irreducible factor of the l-th cyclotomic
    polynomial mod p (all factors have degree f).  With that choice the class
    of x is itself a primitive l-th root of unity; zeta is fixed as the least
    element code of multiplicative order l.
    """
    sd = splitting_data(p, l)
    mods = _cyclotomic_moduli(p, l)
    deg = len(mods[0]) - 1
    assert deg == sd.f
    if sd.case is Case.UNITARY:
        field = Fq(p, mods[0])
        z = _least_root_of_unity(field, l)
        zeta: AlgElem = (z,)
    else:
        field = Fq(p, mods[0]) if sd.f > 1 else Fq(p)
        z = _least_root_of_unity(field, l)
        # the involution swaps the two primes above p, and conjugation sends
        # a root of unity to its inverse, so the components must carry
        # mutually inverse roots; (z, z) would be involution-fixed and no
        # invariant pairing could exist
        zeta = (z, field.pow(z, l - 1))
    return InvolutiveAlgebra(sd, field, zeta)


def build_algebra_sd(sd: SplittingData) -> InvolutiveAlgebra:
    return build_algebra(sd.p, sd.l)


def _least_root_of_unity(field: Fq, l: int) -> int:
    assert (field.order - 1) % l == 0
    for z in range(2, field.order):
        if field.pow(z, l) == 1:
            return z
    raise AssertionError("no l-th root of unity found")
