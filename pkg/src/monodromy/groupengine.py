"""Exact order, membership, and closure for matrix groups over small fields.

Two engines back every group-order claim:

* `enumerate_closure` - breadth-first closure with exact element counting,
  for groups that fit in memory;
* `StabilizerChain` - randomized Schreier-Sims on the natural action on
  column vectors, followed by a deterministic verification pass in which
  every Schreier generator is sifted to the identity (batched with numpy).

Matrices are numpy arrays of field element codes; all field arithmetic goes
through the lookup tables of `arith.Fq`.  Split-case groups are reduced to
their first component once the dual-determination identity (the second
component is determined by the first through the invariant pairing) has been
asserted; degenerate split groups act on the direct sum instead.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import linalg
from .arith import Case, Fq, InvolutiveAlgebra
from .braid import pure_generator
from .gassner import (
    AMat,
    GassnerContext,
    HermitianForm,
    amat_involve_transpose,
    evaluate_word,
)

MAX_POINT_SPACE = 1 << 24


class EngineCapacityError(RuntimeError):
    """The natural point space or element cap is too large for this engine."""


# -- batched field-matrix operations ----------------------------------------


class Ops:
    """Vectorized matrix arithmetic over one table-backed field."""

    def __init__(self, F: Fq, dim: int):
        self.F = F
        self.dim = dim
        self.space = F.order**dim
        self.weights = (F.order ** np.arange(dim)).astype(np.int64)

    def identity(self) -> np.ndarray:
        return np.eye(self.dim, dtype=np.int16)

    def from_rows(self, rows) -> np.ndarray:
        return np.array(rows, dtype=np.int16)

    def _fold_add(self, T: np.ndarray, axis: int) -> np.ndarray:
        add = self.F.add
        out = np.take(T, 0, axis=axis)
        for j in range(1, T.shape[axis]):
            out = add[out, np.take(T, j, axis=axis)]
        return out

    def mm(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """Matrix product; leading batch dimensions broadcast."""
        T = self.F.mul[A[..., :, :, None], B[..., None, :, :]]
        return self._fold_add(T, T.ndim - 2).astype(np.int16)

    def mv(self, A: np.ndarray, V: np.ndarray) -> np.ndarray:
        """A (m,m) or (N,m,m) applied to V (m,) or (N,m)."""
        T = self.F.mul[A, V[..., None, :]]
        return self._fold_add(T, T.ndim - 1).astype(np.int16)

    def inv(self, A: np.ndarray) -> np.ndarray:
        M = linalg.mat_inv(self.F, tuple(tuple(int(x) for x in r) for r in A))
        return self.from_rows(M)

    def encode(self, V: np.ndarray) -> np.ndarray:
        return (V.astype(np.int64) @ self.weights).astype(np.int64)

    def decode(self, codes: np.ndarray) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64)
        out = np.empty(codes.shape + (self.dim,), dtype=np.int16)
        for i in range(self.dim):
            out[..., i] = codes % self.F.order
            codes = codes // self.F.order
        return out


@dataclass(frozen=True)
class MatrixGroup:
    field: Fq
    dim: int
    gens: tuple[np.ndarray, ...]

    def __post_init__(self):
        for g in self.gens:
            if g.shape != (self.dim, self.dim):
                raise ValueError("generator dimension mismatch")


def amat_component(M: AMat, comp: int) -> np.ndarray:
    return np.array(M[comp], dtype=np.int16)


def amat_pair_blockdiag(M: AMat) -> np.ndarray:
    A, B = (np.array(c, dtype=np.int16) for c in M)
    n = A.shape[0]
    out = np.zeros((2 * n, 2 * n), dtype=np.int16)
    out[:n, :n] = A
    out[n:, n:] = B
    return out


# -- monodromy image groups -------------------------------------------------


def monodromy_generator_words(n: int):
    return [pure_generator(i, j, n) for i in range(n + 1) for j in range(i + 1, n + 1)]


def assert_dual_determination(
    ctx: GassnerContext, form: HermitianForm, mats: list[AMat]
) -> None:
    """Split case, nondegenerate form: the second component of each generator
    must equal transpose(G1 M1^{-1} G1^{-1}) for the component-1 Gram G1."""
    alg = ctx.algebra
    F = alg.field
    G1 = form.gram[0]
    G1i = linalg.mat_inv(F, G1)
    for M in mats:
        M1, M2 = M
        pred = linalg.transpose(
            linalg.mat_mul(F, linalg.mat_mul(F, G1, linalg.mat_inv(F, M1)), G1i)
        )
        if M2 != pred:
            raise AssertionError(
                "dual-determination identity failed; split reduction invalid"
            )


def image_group(ctx: GassnerContext, form: HermitianForm | None = None) -> MatrixGroup:
    """The monodromy image on pure-braid generators, as a matrix group over a
    single finite field (with the split-case reduction applied)."""
    alg = ctx.algebra
    mats = [
        evaluate_word(w, ctx).comps for w in monodromy_generator_words(ctx.n)
    ]
    if alg.ncomp == 1:
        gens = tuple(amat_component(M, 0) for M in mats)
        return MatrixGroup(field=alg.field, dim=ctx.n, gens=gens)
    if form is None:
        from .gassner import invariant_form

        form = invariant_form(ctx)
    if form.degenerate:
        gens = tuple(amat_pair_blockdiag(M) for M in mats)
        return MatrixGroup(field=alg.field, dim=2 * ctx.n, gens=gens)
    assert_dual_determination(ctx, form, mats)
    gens = tuple(amat_component(M, 0) for M in mats)
    return MatrixGroup(field=alg.field, dim=ctx.n, gens=gens)


# -- closure enumeration ----------------------------------------------------


@dataclass(frozen=True)
class ClosureResult:
    size: int | None
    overflow: bool
    cap: int

    @property
    def exact(self) -> bool:
        return not self.overflow


class _Packer:
    """Pack flattened code matrices into fixed-width uint64 limb rows."""

    def __init__(self, order: int, nentries: int):
        per = 1
        while order ** (per + 1) < 2**63:
            per += 1
        self.per = per
        self.order = order
        self.nlimbs = -(-nentries // per)
        self.nentries = nentries
        self.dtype = np.dtype([(f"l{i}", "<u8") for i in range(self.nlimbs)])

    def pack(self, flat: np.ndarray) -> np.ndarray:
        N = flat.shape[0]
        out = np.zeros((N, self.nlimbs), dtype=np.uint64)
        for i in range(self.nentries):
            limb = i // self.per
            out[:, limb] = out[:, limb] * np.uint64(self.order) + flat[
                :, i
            ].astype(np.uint64)
        return out.view(self.dtype).reshape(N)


def enumerate_closure(group: MatrixGroup, cap: int) -> ClosureResult:
    """Exact size of the generated group by breadth-first closure, or an
    overflow marker once more than `cap` elements have been seen."""
    ops = Ops(group.field, group.dim)
    m = group.dim
    packer = _Packer(group.field.order, m * m)
    gens = [g for g in group.gens]

    frontier = np.eye(m, dtype=np.int16)[None, :, :]
    keys = packer.pack(frontier.reshape(1, -1))
    S = np.sort(keys)
    while len(frontier):
        cands = []
        for g in gens:
            cands.append(ops.mm(frontier, g))
        cand = np.concatenate(cands, axis=0)
        ckeys = packer.pack(cand.reshape(cand.shape[0], -1))
        ckeys, idx = np.unique(ckeys, return_index=True)
        pos = np.searchsorted(S, ckeys)
        pos_clip = np.minimum(pos, len(S) - 1)
        new_mask = S[pos_clip] != ckeys
        frontier = cand[idx[new_mask]]
        if len(frontier):
            S = np.sort(np.concatenate([S, ckeys[new_mask]]))
            if len(S) > cap:
                return ClosureResult(size=None, overflow=True, cap=cap)
    return ClosureResult(size=int(len(S)), overflow=False, cap=cap)


# -- stabilizer chain -------------------------------------------------------


@dataclass
class _Level:
    base: np.ndarray  # base vector (m,)
    gens: list[tuple[np.ndarray, np.ndarray]] = dc_field(default_factory=list)
    orbit: np.ndarray | None = None  # encoded points, discovery order
    pos: np.ndarray | None = None  # point code -> orbit index, -1 outside
    reps: np.ndarray | None = None  # reps[k] maps base -> orbit[k]
    inv_reps: np.ndarray | None = None


class VerificationError(RuntimeError):
    pass


class StabilizerChain:
    """Base and strong generating set for a `MatrixGroup`.

    Built by randomized Schreier-Sims (product-replacement random elements,
    seeded), then verified deterministically: every Schreier generator of
    every level is sifted through the rest of the chain and must reach the
    identity.  Verification failures feed the offending residue back in as a
    new strong generator and the pass is repeated.
    """

    POOL_SIZE = 10
    WARMUP = 50
    CONSECUTIVE_TRIVIAL = 16
    CHUNK = 1 << 17

    def __init__(self, group: MatrixGroup, seed: int = 0, verify: bool = True):
        self.group = group
        self.ops = Ops(group.field, group.dim)
        if self.ops.space > MAX_POINT_SPACE:
            raise EngineCapacityError(
                f"point space {group.field.order}^{group.dim} exceeds limit"
            )
        self.rng = random.Random(seed)
        self.levels: list[_Level] = []
        self._build()
        if verify:
            self._verify_loop()

    # -- construction ------------------------------------------------------

    def _build(self):
        gens = [g for g in self.group.gens if not self._is_identity(g)]
        if not gens:
            return
        first = self._pick_first_base(gens)
        self.levels.append(_Level(base=first))
        for g in gens:
            self._add_generator(g, 0)
        self._random_phase(gens)

    def _is_identity(self, g: np.ndarray) -> bool:
        return bool(np.array_equal(g, np.eye(self.group.dim, dtype=g.dtype)))

    def _pick_first_base(self, gens) -> np.ndarray:
        m = self.group.dim
        best, best_count = 0, -1
        for i in range(m):
            e = np.zeros(m, dtype=np.int16)
            e[i] = 1
            count = sum(
                1 for g in gens if not np.array_equal(self.ops.mv(g, e), e)
            )
            if count > best_count:
                best, best_count = i, count
        e = np.zeros(m, dtype=np.int16)
        e[best] = 1
        return e

    def _moved_vector(self, g: np.ndarray) -> np.ndarray:
        m = self.group.dim
        for i in range(m):
            e = np.zeros(m, dtype=np.int16)
            e[i] = 1
            if not np.array_equal(self.ops.mv(g, e), e):
                return e
        raise AssertionError("identity passed to _moved_vector")

    def _add_generator(self, g: np.ndarray, level: int):
        """Install g as a strong generator entering at `level` (it fixes all
        base points above); extends the orbits of levels 0..level."""
        gi = self.ops.inv(g)
        if level == len(self.levels):
            self.levels.append(_Level(base=self._moved_vector(g)))
        self.levels[level].gens.append((g, gi))
        for i in range(level + 1):
            self._extend_orbit(i, (g, gi))

    def _level_gens(self, i: int):
        out = []
        for j in range(i, len(self.levels)):
            out.extend(self.levels[j].gens)
        return out

    def _extend_orbit(self, i: int, new_gen):
        lev = self.levels[i]
        ops = self.ops
        if lev.orbit is None:
            enc = ops.encode(lev.base[None, :])
            lev.orbit = enc.copy()
            lev.pos = np.full(ops.space, -1, dtype=np.int64)
            lev.pos[enc[0]] = 0
            lev.reps = np.eye(self.group.dim, dtype=np.int16)[None, :, :]
            lev.inv_reps = lev.reps.copy()
            self._bfs(i, np.array([0], dtype=np.int64), self._level_gens(i))
            return
        # existing orbit: apply only the new generator everywhere, then close
        # the newly reached points under the full generator set
        newly = self._apply_gens(
            i, np.arange(len(lev.orbit), dtype=np.int64), [new_gen]
        )
        self._bfs(i, newly, self._level_gens(i))

    def _bfs(self, i: int, frontier: np.ndarray, gens):
        while len(frontier):
            frontier = self._apply_gens(i, frontier, gens)

    def _apply_gens(self, i: int, frontier_idx: np.ndarray, gens) -> np.ndarray:
        """One BFS expansion step; returns orbit indices of new points."""
        lev = self.levels[i]
        ops = self.ops
        new_indices = []
        for start in range(0, len(frontier_idx), self.CHUNK):
            chunk = frontier_idx[start : start + self.CHUNK]
            vecs = ops.decode(lev.orbit[chunk])
            for g, gi in gens:
                imgs = ops.mv(g, vecs)
                enc = ops.encode(imgs)
                mask = lev.pos[enc] < 0
                if not mask.any():
                    continue
                # first occurrence wins within the batch
                enc_new, first = np.unique(enc[mask], return_index=True)
                src = chunk[mask][first]
                base_idx = len(lev.orbit)
                lev.orbit = np.concatenate([lev.orbit, enc_new])
                lev.pos[enc_new] = np.arange(
                    base_idx, base_idx + len(enc_new), dtype=np.int64
                )
                # rep[g.u] = g . rep[u], inv_rep[g.u] = inv_rep[u] . g^{-1}
                new_reps = ops.mm(g.astype(np.int16), lev.reps[src])
                new_inv = ops.mm(lev.inv_reps[src], gi.astype(np.int16))
                lev.reps = np.concatenate([lev.reps, new_reps])
                lev.inv_reps = np.concatenate([lev.inv_reps, new_inv])
                new_indices.append(
                    np.arange(base_idx, base_idx + len(enc_new), dtype=np.int64)
                )
        if new_indices:
            return np.concatenate(new_indices)
        return np.array([], dtype=np.int64)

    # -- random phase ------------------------------------------------------

    def _random_phase(self, gens):
        pool = [gens[i % len(gens)].copy() for i in range(self.POOL_SIZE)]

        def step():
            a = self.rng.randrange(len(pool))
            b = self.rng.randrange(len(pool))
            while b == a:
                b = self.rng.randrange(len(pool))
            if self.rng.random() < 0.5:
                pool[a] = self.ops.mm(pool[a], pool[b])
            else:
                pool[a] = self.ops.mm(pool[a], self.ops.inv(pool[b]))
            return pool[a]

        for _ in range(self.WARMUP):
            step()
        trivial = 0
        while trivial < self.CONSECUTIVE_TRIVIAL:
            r = step()
            level, residue = self.sift(r)
            if residue is None:
                trivial += 1
            else:
                trivial = 0
                self._add_generator(residue, level)

    # -- sifting and queries ----------------------------------------------

    def sift(self, M: np.ndarray):
        """Returns (level, residue) where residue is None when M sifts to the
        identity; otherwise `level` is where sifting stopped."""
        ops = self.ops
        cur = M.astype(np.int16)
        for i, lev in enumerate(self.levels):
            img = ops.mv(cur, lev.base)
            code = int(ops.encode(img[None, :])[0])
            k = int(lev.pos[code]) if lev.pos is not None else -1
            if k < 0:
                return i, cur
            cur = ops.mm(lev.inv_reps[k], cur)
        if self._is_identity(cur):
            return len(self.levels), None
        return len(self.levels), cur

    @property
    def order(self) -> int:
        out = 1
        for lev in self.levels:
            out *= len(lev.orbit) if lev.orbit is not None else 1
        return out

    def contains(self, M: np.ndarray) -> bool:
        if M.shape != (self.group.dim, self.group.dim):
            raise ValueError("dimension mismatch")
        _, residue = self.sift(M)
        return residue is None

    def base_points(self) -> list[np.ndarray]:
        return [lev.base for lev in self.levels]

    def summary(self) -> dict:
        return {
            "base_length": len(self.levels),
            "orbit_sizes": [
                int(len(lev.orbit)) if lev.orbit is not None else 0
                for lev in self.levels
            ],
            "strong_generators": sum(len(lev.gens) for lev in self.levels),
            "order": str(self.order),
        }

    # -- deterministic verification ----------------------------------------

    def _verify_loop(self, max_rounds: int = 30):
        for _ in range(max_rounds):
            offender = self._verify_once()
            if offender is None:
                return
            level, residue = self.sift(offender)
            if residue is None:
                raise VerificationError(
                    "verification reported an offender that sifts cleanly"
                )
            self._add_generator(residue, level)
        raise VerificationError("verification did not stabilize")

    def _verify_once(self) -> np.ndarray | None:
        """Batched check that every Schreier generator sifts to identity;
        returns a non-sifting Schreier generator, or None when clean."""
        ops = self.ops
        for i in reversed(range(len(self.levels))):
            lev = self.levels[i]
            if lev.orbit is None:
                continue
            for g, gi in self._level_gens(i):
                for start in range(0, len(lev.orbit), self.CHUNK):
                    sl = slice(start, start + self.CHUNK)
                    vecs = ops.decode(lev.orbit[sl])
                    enc = ops.encode(ops.mv(g, vecs))
                    idx = lev.pos[enc]
                    if (idx < 0).any():
                        # orbit not closed under its own generator: impossible
                        raise VerificationError("orbit closure violated")
                    Q = ops.mm(
                        lev.inv_reps[idx], ops.mm(g.astype(np.int16), lev.reps[sl])
                    )
                    bad = self._batch_sift_below(Q, i + 1)
                    if bad is not None:
                        return bad
        return None

    def _batch_sift_below(self, Q: np.ndarray, start_level: int):
        ops = self.ops
        alive = Q
        for j in range(start_level, len(self.levels)):
            lev = self.levels[j]
            img = ops.mv(alive, lev.base)
            enc = ops.encode(img)
            idx = lev.pos[enc]
            missing = idx < 0
            if missing.any():
                return alive[int(np.argmax(missing))]
            alive = ops.mm(lev.inv_reps[idx], alive)
        eye = np.eye(self.group.dim, dtype=np.int16)
        bad = ~np.all(alive == eye, axis=(1, 2))
        if bad.any():
            return alive[int(np.argmax(bad))]
        return None


def bsgs_order(group: MatrixGroup, seed: int = 0) -> int:
    """Exact order via a verified stabilizer chain; deterministic per seed."""
    return StabilizerChain(group, seed=seed).order


def membership(chain: StabilizerChain, M: np.ndarray) -> bool:
    return chain.contains(M)


# -- radical containment ----------------------------------------------------


@dataclass(frozen=True)
class RadicalContainmentReport:
    total: int
    contained: int
    full_radical: bool
    graph_pattern: bool
    findings: tuple[str, ...]


def radical_containment(
    ctx: GassnerContext,
    form: HermitianForm,
    chain: StabilizerChain,
    limit: int | None = None,
) -> RadicalContainmentReport:
    """Test membership of the full transvection radical of a degenerate form
    in the monodromy image chain (exhaustive when the functional space is
    small).  In the split case the containment set is additionally checked
    against the graph-of-an-isomorphism pattern: every component-1 functional
    appearing with exactly one component-2 partner."""
    from .unitary import radical_transvections

    alg = ctx.algebra
    rad = radical_transvections(form)
    total = 0
    contained = 0
    contained_pairs: set[tuple] = set()
    findings: list[str] = []
    for M in rad.enumerate(limit=limit):
        total += 1
        if alg.ncomp == 1:
            mat = amat_component(M, 0)
        else:
            mat = amat_pair_blockdiag(M)
        ok = chain.contains(mat)
        if ok:
            contained += 1
            if alg.ncomp == 2:
                contained_pairs.add((M[0], M[1]))
    full = contained == total
    graph = False
    if alg.ncomp == 2 and not full and contained_pairs:
        firsts = [a for a, _ in contained_pairs]
        graph = len(firsts) == len(set(firsts)) and len(contained_pairs) ** 2 == total
        if graph:
            findings.append(
                "containment set matches the graph-of-an-isomorphism pattern"
            )
    if not full and not graph:
        findings.append(
            f"radical only partially contained: {contained}/{total}"
        )
    return RadicalContainmentReport(
        total=total,
        contained=contained,
        full_radical=full,
        graph_pattern=graph,
        findings=tuple(findings),
    )
