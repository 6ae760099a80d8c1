"""The colored specialized reduced Gassner representation and its invariants.

A braid word on n+1 strands evaluates to a `ColoredElement`: an n x n matrix
over the coefficient algebra together with a permutation of the n+1 color
slots.  Matrices over the algebra are stored per component ("AMat" = one
`linalg.Mat` per algebra component), so the split case is just two parallel
matrices over F_q.

The single-crossing matrix is the square root of the generator-square block
[[T_i(1-T_{i+1}), T_i T_{i+1}, 1-T_i]] (middle row on basis slots i-1, i, i+1),
validated by the reproduction tests, not assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import linalg
from .arith import AlgElem, Case, Fq, InvolutiveAlgebra
from .braid import BraidWord, half_twist
from .linalg import Echelon, Mat, fp_nullspace

AMat = tuple[Mat, ...]  # one component matrix per algebra component
AVec = tuple[AlgElem, ...]  # vector of algebra elements


@lru_cache(maxsize=None)
def prime_field(p: int) -> Fq:
    return Fq(p)


@dataclass(frozen=True)
class GassnerContext:
    algebra: InvolutiveAlgebra
    kvec: tuple[int, ...]

    def __post_init__(self):
        l = self.algebra.l
        if len(self.kvec) < 3:
            raise ValueError("need at least 3 colors (n >= 2)")
        if any(not 1 <= k <= l - 1 for k in self.kvec):
            raise ValueError(f"monodromy exponents must lie in 1..{l - 1}")

    @property
    def n(self) -> int:
        return len(self.kvec) - 1

    @property
    def colors(self) -> tuple[AlgElem, ...]:
        a = self.algebra
        return tuple(a.power(a.zeta, k) for k in self.kvec)

    @property
    def degenerate(self) -> bool:
        return sum(self.kvec) % self.algebra.l == 0

    def color_product(self) -> AlgElem:
        a = self.algebra
        return a.power(a.zeta, sum(self.kvec) % a.l)


def context(p: int, l: int, kvec) -> GassnerContext:
    from .arith import build_algebra

    return GassnerContext(build_algebra(p, l), tuple(kvec))


# -- algebra-matrix helpers -------------------------------------------------


def amat_identity(alg: InvolutiveAlgebra, n: int) -> AMat:
    return tuple(linalg.identity(n) for _ in range(alg.ncomp))


def amat_mul(alg: InvolutiveAlgebra, A: AMat, B: AMat) -> AMat:
    F = alg.field
    return tuple(linalg.mat_mul(F, a, b) for a, b in zip(A, B))


def amat_entry(A: AMat, i: int, j: int) -> AlgElem:
    return tuple(comp[i][j] for comp in A)


def amat_from_entries(alg: InvolutiveAlgebra, rows) -> AMat:
    n = len(rows)
    m = len(rows[0])
    return tuple(
        tuple(tuple(rows[i][j][c] for j in range(m)) for i in range(n))
        for c in range(alg.ncomp)
    )


def amat_involve_transpose(alg: InvolutiveAlgebra, A: AMat) -> AMat:
    n = len(A[0])
    rows = [
        [alg.involve(amat_entry(A, j, i)) for j in range(n)] for i in range(n)
    ]
    return amat_from_entries(alg, rows)


def amat_det(alg: InvolutiveAlgebra, A: AMat) -> AlgElem:
    return tuple(linalg.det(alg.field, comp) for comp in A)


def amat_vec(alg: InvolutiveAlgebra, A: AMat, v: AVec) -> AVec:
    F = alg.field
    comps = [
        linalg.mat_vec(F, comp, tuple(x[c] for x in v))
        for c, comp in enumerate(A)
    ]
    return tuple(
        tuple(comps[c][i] for c in range(alg.ncomp)) for i in range(len(v))
    )


def avec_is_zero(v: AVec) -> bool:
    return all(all(a == 0 for a in x) for x in v)


# -- colored elements -------------------------------------------------------


@dataclass(frozen=True)
class ColoredElement:
    algebra: InvolutiveAlgebra
    colors_in: tuple[AlgElem, ...]
    perm: tuple[int, ...]  # colors_out[i] = colors_in[perm[i]]
    comps: AMat

    @property
    def n(self) -> int:
        return len(self.colors_in) - 1

    @property
    def colors_out(self) -> tuple[AlgElem, ...]:
        return tuple(self.colors_in[i] for i in self.perm)

    def is_pure(self) -> bool:
        return all(v == i for i, v in enumerate(self.perm))

    def mul(self, other: "ColoredElement") -> "ColoredElement":
        """Left-to-right composition; other must start at our output colors."""
        if other.colors_in != self.colors_out:
            raise ValueError("color mismatch in colored composition")
        perm = tuple(self.perm[j] for j in other.perm)
        return ColoredElement(
            self.algebra,
            self.colors_in,
            perm,
            amat_mul(self.algebra, self.comps, other.comps),
        )

    def det(self) -> AlgElem:
        return amat_det(self.algebra, self.comps)

    def entry(self, i: int, j: int) -> AlgElem:
        return amat_entry(self.comps, i, j)

    def to_rows(self) -> list[list[AlgElem]]:
        n = self.n
        return [[self.entry(i, j) for j in range(n)] for i in range(n)]


def _crossing_rows(alg, n, i, sign, x):
    """Rows of the single-crossing matrix (identity except row i)."""
    rows = [
        [alg.one if r == c else alg.zero for c in range(n)] for r in range(n)
    ]
    if sign > 0:
        entries = {i - 1: x, i: alg.neg(x), i + 1: alg.one}
    else:
        xinv = alg.invert(x)
        entries = {i - 1: alg.one, i: alg.neg(xinv), i + 1: xinv}
    row = [alg.zero] * n
    for c, val in entries.items():
        if 0 <= c < n:
            row[c] = val
    rows[i] = row
    return rows


def generator_matrix(i: int, colors, alg: InvolutiveAlgebra, sign: int = 1):
    """Colored single crossing sigma_i^{sign} applied at the given colors."""
    n = len(colors) - 1
    if not 0 <= i <= n - 1:
        raise IndexError(f"generator index {i} out of range")
    # a positive crossing consumes the color in slot i; a negative crossing
    # consumes the color arriving there (currently in slot i+1)
    x = colors[i] if sign > 0 else colors[i + 1]
    if not alg.is_unit(x):
        raise ValueError("colors must be units")
    rows = _crossing_rows(alg, n, i, sign, x)
    perm = list(range(n + 1))
    perm[i], perm[i + 1] = perm[i + 1], perm[i]
    return ColoredElement(alg, tuple(colors), tuple(perm), amat_from_entries(alg, rows))


def evaluate_word(w: BraidWord, ctx: GassnerContext) -> ColoredElement:
    if w.strand_count != ctx.n + 1:
        raise ValueError(
            f"word is on {w.strand_count} strands, context has {ctx.n + 1}"
        )
    alg = ctx.algebra
    acc = ColoredElement(
        alg, ctx.colors, tuple(range(ctx.n + 1)), amat_identity(alg, ctx.n)
    )
    for idx, sign in w.letters:
        step = generator_matrix(idx, acc.colors_out, alg, sign)
        acc = acc.mul(step)
    return acc


def generator_square(i: int, ctx: GassnerContext) -> ColoredElement:
    w = BraidWord.from_letters(ctx.n + 1, [(i, 1), (i, 1)])
    return evaluate_word(w, ctx)


def square_formula_matrix(i: int, ctx: GassnerContext) -> AMat:
    """The displayed generator-square matrix, built directly from the colors."""
    alg = ctx.algebra
    n = ctx.n
    t_i, t_ip1 = ctx.colors[i], ctx.colors[i + 1]
    rows = [
        [alg.one if r == c else alg.zero for c in range(n)] for r in range(n)
    ]
    entries = {
        i - 1: alg.mul(t_i, alg.sub(alg.one, t_ip1)),
        i: alg.mul(t_i, t_ip1),
        i + 1: alg.sub(alg.one, t_i),
    }
    row = [alg.zero] * n
    for c, val in entries.items():
        if 0 <= c < n:
            row[c] = val
    rows[i] = row
    return amat_from_entries(alg, rows)


# -- invariant form ---------------------------------------------------------


class FormSolverError(RuntimeError):
    """The invariant-form solution space has unexpected dimension."""


@dataclass(frozen=True)
class HermitianForm:
    ctx: GassnerContext
    gram: AMat
    rank: int
    kernel: tuple[AVec, ...]  # right-kernel basis, as algebra vectors

    @property
    def degenerate(self) -> bool:
        return self.rank < self.ctx.n


def _pure_generators(ctx: GassnerContext) -> list[AMat]:
    return [generator_square(i, ctx).comps for i in range(ctx.n)]


def invariant_form(ctx: GassnerContext) -> HermitianForm:
    """Solve involve-transpose(M) G M = G over all generator squares, within
    skew-hermitian matrices, as a prime-field linear system."""
    alg = ctx.algebra
    n, D, p = ctx.n, alg.dim, alg.p
    nunk = n * n * D

    def gcols(i, j):
        base = (i * n + j) * D
        return slice(base, base + D)

    blocks = []
    for M in _pure_generators(ctx):
        E = np.zeros((nunk, nunk), dtype=np.int64)
        for i in range(n):
            for j in range(n):
                rows = gcols(i, j)
                for k in range(n):
                    a = alg.involve(amat_entry(M, k, i))
                    for m in range(n):
                        b = amat_entry(M, m, j)
                        ab = alg.mul(a, b)
                        if ab != alg.zero:
                            E[rows, gcols(k, m)] += alg.mult_matrix(ab)
                E[rows, gcols(i, j)] -= np.eye(D, dtype=np.int64)
        blocks.append(E % p)
    # skew-hermitian constraint: involve(G_ji) + G_ij = 0
    J = alg.involve_matrix()
    S = np.zeros((nunk, nunk), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            S[gcols(i, j), gcols(i, j)] += np.eye(D, dtype=np.int64)
            S[gcols(i, j), gcols(j, i)] += J
    blocks.append(S % p)

    basis = fp_nullspace(p, np.vstack(blocks))
    if len(basis) != alg.fixed_dim:
        raise FormSolverError(
            f"invariant-form space has F_p-dimension {len(basis)}, "
            f"expected {alg.fixed_dim}"
        )
    coords = basis[0]
    rows = [
        [alg.from_fp_vector(coords[(i * n + j) * D : (i * n + j + 1) * D]) for j in range(n)]
        for i in range(n)
    ]
    gram = amat_from_entries(alg, rows)

    F = alg.field
    ranks = {linalg.rank(F, comp) for comp in gram}
    if len(ranks) != 1:
        raise FormSolverError(f"component ranks disagree: {ranks}")
    rank = ranks.pop()
    if rank not in (n - 1, n):
        raise FormSolverError(f"form rank {rank} outside {{n-1, n}}")
    kernels = [linalg.nullspace(F, comp) for comp in gram]
    kernel = tuple(
        tuple(tuple(kc[d][i] for kc in kernels) for i in range(n))
        for d in range(len(kernels[0]))
    )
    return HermitianForm(ctx=ctx, gram=gram, rank=rank, kernel=kernel)


def kernel_closed_form(ctx: GassnerContext) -> AVec:
    """((1 - t_0), (1 - t_0 t_1), ..., (1 - t_0...t_{n-1}))."""
    alg = ctx.algebra
    out = []
    acc = alg.one
    for i in range(ctx.n):
        acc = alg.mul(acc, ctx.colors[i])
        out.append(alg.sub(alg.one, acc))
    return tuple(out)


# -- invariant vectors and spinning ----------------------------------------


@dataclass(frozen=True)
class InvariantSpace:
    ctx: GassnerContext
    basis: tuple[AVec, ...]  # common fixed vectors, per algebra component

    @property
    def dim(self) -> int:
        return len(self.basis)


def invariant_vectors(ctx: GassnerContext) -> InvariantSpace:
    alg = ctx.algebra
    F = alg.field
    n = ctx.n
    gens = _pure_generators(ctx)
    per_comp = []
    for c in range(alg.ncomp):
        stacked = []
        for M in gens:
            delta = linalg.mat_sub(F, M[c], linalg.identity(n))
            stacked.extend(delta)
        per_comp.append(linalg.nullspace(F, tuple(stacked)))
    dims = {len(b) for b in per_comp}
    assert len(dims) == 1, "invariant dimensions disagree across components"
    dim = dims.pop()
    basis = tuple(
        tuple(tuple(per_comp[c][d][i] for c in range(alg.ncomp)) for i in range(n))
        for d in range(dim)
    )
    return InvariantSpace(ctx=ctx, basis=basis)


def spin_span(ctx: GassnerContext, v: AVec, mode: str = "algebra"):
    """Smallest generator-stable subspace containing v.

    mode="algebra": closure over the algebra, returned as per-component
    dimensions (they can differ only transiently; both are reported).
    mode="prime_field": closure of the F_p-span inside the restriction of
    scalars; returns a single dimension out of n * dim_Fp(algebra).
    """
    if avec_is_zero(v):
        raise ValueError("cannot spin the zero vector")
    alg = ctx.algebra
    F = alg.field
    n = ctx.n
    gens = _pure_generators(ctx)
    gens = gens + [
        tuple(linalg.mat_inv(F, comp) for comp in M) for M in gens
    ]
    if mode == "algebra":
        dims = []
        for c in range(alg.ncomp):
            ech = Echelon(F, n)
            frontier = [tuple(x[c] for x in v)]
            ech.add(frontier[0])
            while frontier:
                w = frontier.pop()
                for M in gens:
                    img = linalg.mat_vec(F, M[c], w)
                    if ech.add(img):
                        frontier.append(img)
            dims.append(ech.dim)
        return tuple(dims)
    if mode == "prime_field":
        Fp = prime_field(alg.p)
        D = alg.dim
        ech = Echelon(Fp, n * D)

        def to_coords(w: AVec):
            out = []
            for x in w:
                out.extend(alg.to_fp_vector(x))
            return out

        def from_coords(cs) -> AVec:
            return tuple(
                alg.from_fp_vector(cs[i * D : (i + 1) * D]) for i in range(n)
            )

        seeds = [v] + [
            tuple(alg.mul(alg.scalar(c), x) for x in v) for c in range(2, alg.p)
        ]
        frontier = []
        for s in seeds:
            if ech.add(to_coords(s)):
                frontier.append(s)
        # F_p-span closure: apply generators, and algebra scalars are not
        # F_p-linear combinations, so only the matrices act here
        while frontier:
            w = frontier.pop()
            for M in gens:
                img = amat_vec(alg, M, w)
                if ech.add(to_coords(img)):
                    frontier.append(img)
        return ech.dim
    raise ValueError(f"unknown mode {mode!r}")


# -- transvections ----------------------------------------------------------


@dataclass(frozen=True)
class Transvection:
    algebra: InvolutiveAlgebra
    direction: AVec  # spans image(T - 1), per-component normalization free
    row: AVec  # T = 1 + direction . row^t
    matrix: AMat


def is_transvection(M: AMat, alg: InvolutiveAlgebra) -> Transvection | None:
    """Direction and functional when rank(M-1)=1 and (M-1)^2=0 per component."""
    F = alg.field
    n = len(M[0])
    dirs, rows = [], []
    for comp in M:
        N = linalg.mat_sub(F, comp, linalg.identity(n))
        if linalg.rank(F, N) != 1:
            return None
        NN = linalg.mat_mul(F, N, N)
        if any(any(x for x in r) for r in NN):
            return None
        j0 = next(j for j in range(n) if any(N[i][j] for i in range(n)))
        v = tuple(N[i][j0] for i in range(n))
        i0 = next(i for i in range(n) if v[i])
        vinv = F.inv(v[i0])
        r = tuple(F.mul2(vinv, N[i0][j]) for j in range(n))
        dirs.append(v)
        rows.append(r)
    direction = tuple(
        tuple(dirs[c][i] for c in range(alg.ncomp)) for i in range(n)
    )
    row = tuple(tuple(rows[c][j] for c in range(alg.ncomp)) for j in range(n))
    return Transvection(algebra=alg, direction=direction, row=row, matrix=M)


def proportional(alg: InvolutiveAlgebra, u: AVec, v: AVec) -> bool:
    """Componentwise: u = c.v for unit scalars c (possibly different per
    component)."""
    F = alg.field
    for c in range(alg.ncomp):
        uc = [x[c] for x in u]
        vc = [x[c] for x in v]
        i0 = next((i for i, x in enumerate(vc) if x), None)
        if i0 is None:
            return all(x == 0 for x in uc)
        if uc[i0] == 0:
            return False
        scale = F.mul2(uc[i0], F.inv(vc[i0]))
        if any(F.mul2(scale, x) != y for x, y in zip(vc, uc)):
            return False
    return True


# -- the commutator construction -------------------------------------------


@dataclass(frozen=True)
class CommutatorReport:
    ctx: GassnerContext
    transvection: Transvection
    direction_spans_kernel: bool
    xi_eps2: AlgElem
    xi_formula: AlgElem
    xi_matches: bool
    shifted_xi: AlgElem
    shifted_formula: AlgElem
    shifted_matches: bool
    alternative_reading_trivial: bool
    findings: tuple[str, ...]


def prop21_commutator(ctx: GassnerContext) -> CommutatorReport:
    """Evaluate [sigma_0^2, HT^2] where HT is the half twist on the strands
    away from strand 0, at product-one colors with 1 - t_0 a unit."""
    alg = ctx.algebra
    n = ctx.n
    if ctx.color_product() != alg.one:
        raise ValueError("requires product-one colors (sum k_i = 0 mod l)")
    if not alg.is_unit(alg.sub(alg.one, ctx.colors[0])):
        raise ValueError("requires 1 - t_0 to be a unit")

    strands = n + 1
    a = BraidWord.from_letters(strands, [(0, 1), (0, 1)])
    delta = half_twist(1, n - 1, strands)
    b = delta.concat(delta)
    comm = a.concat(b).concat(a.invert()).concat(b.invert())
    img = evaluate_word(comm, ctx)
    assert img.is_pure()

    findings: list[str] = []
    T = is_transvection(img.comps, alg)
    if T is None:
        raise RuntimeError(
            "commutator is not a transvection at these parameters "
            "(nontriviality claim fails)"
        )
    kv = kernel_closed_form(ctx)
    spans = proportional(alg, T.direction, kv)

    # functional normalized against the closed-form kernel vector; the
    # literal reading evaluates it at basis index 2, the shifted reading
    # (all indices down by one relative to the quoted convention) at index 1
    def quoted(i: int, j: int) -> AlgElem:
        t_i, t_j = ctx.colors[i], ctx.colors[j]
        return alg.mul(alg.invert(alg.mul(t_i, t_j)), alg.sub(alg.one, t_i))

    xi = _functional_against(alg, img.comps, kv, index=2)
    formula = quoted(1, 2)
    matches = xi == formula
    shifted_xi = _functional_against(alg, img.comps, kv, index=1)
    shifted_formula = quoted(0, 1)
    shifted_matches = shifted_xi == shifted_formula
    if not matches:
        findings.append(
            f"literal xi(eps_2) = {xi} differs from quoted value {formula}; "
            f"index-shifted reading matches: {shifted_matches}"
        )

    # alternative half-twist reading: include strand 0; the full twist square
    # is central, so the commutator collapses
    delta_all = half_twist(0, n - 1, strands)
    b_all = delta_all.concat(delta_all)
    comm_all = a.concat(b_all).concat(a.invert()).concat(b_all.invert())
    img_all = evaluate_word(comm_all, ctx)
    alt_trivial = img_all.comps == amat_identity(alg, n)
    if not alt_trivial:
        findings.append("full-range half twist commutator is not trivial")

    return CommutatorReport(
        ctx=ctx,
        transvection=T,
        direction_spans_kernel=spans,
        xi_eps2=xi,
        xi_formula=formula,
        xi_matches=matches,
        shifted_xi=shifted_xi,
        shifted_formula=shifted_formula,
        shifted_matches=shifted_matches,
        alternative_reading_trivial=alt_trivial,
        findings=tuple(findings),
    )


def _functional_against(
    alg: InvolutiveAlgebra, M: AMat, v: AVec, index: int
) -> AlgElem:
    """With T - 1 = v . r^t exactly (v the given normalization), return
    r[index]."""
    F = alg.field
    n = len(M[0])
    out = []
    for c, comp in enumerate(M):
        N = linalg.mat_sub(F, comp, linalg.identity(n))
        vc = [x[c] for x in v]
        i0 = next(i for i in range(n) if vc[i])
        r = [F.mul2(F.inv(vc[i0]), N[i0][j]) for j in range(n)]
        # consistency: N must equal outer(vc, r)
        for i in range(n):
            for j in range(n):
                if N[i][j] != F.mul2(vc[i], r[j]):
                    raise RuntimeError("matrix is not a transvection along v")
        out.append(r[index])
    return tuple(out)


# -- determinants -----------------------------------------------------------


def determinant_subgroup(ctx: GassnerContext) -> list[AlgElem]:
    """Multiplicative closure of the generator-square determinants; a subgroup
    of mu_l, so either trivial or all of it."""
    alg = ctx.algebra
    dets = []
    for i in range(ctx.n):
        d = amat_det(alg, generator_square(i, ctx).comps)
        expected = alg.mul(ctx.colors[i], ctx.colors[i + 1])
        assert d == expected, f"det(sigma_{i}^2) != t_{i} t_{i + 1}"
        dets.append(d)
    if all(d == alg.one for d in dets):
        return [alg.one]
    return alg.roots_of_unity()
