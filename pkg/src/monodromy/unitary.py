"""Hermitian-space utilities: classical group orders, predicted image targets,
the extension-matrix commutator identities, norm-equation solving, the
degenerate-subsequence search, and the unipotent radical of a degenerate form.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import linalg
from .arith import AlgElem, Case, InvolutiveAlgebra, SplittingData
from .gassner import (
    AMat,
    AVec,
    HermitianForm,
    amat_from_entries,
    amat_identity,
    is_transvection,
)


def classical_group_order(kind: str, m: int, q: int) -> int:
    """|SL(m,q)| or |SU(m,q)| by the standard product formulas."""
    if m < 1 or q < 2:
        raise ValueError(f"invalid parameters kind={kind}, m={m}, q={q}")
    order = q ** (m * (m - 1) // 2)
    if kind == "SL":
        for i in range(2, m + 1):
            order *= q**i - 1
    elif kind == "SU":
        for i in range(2, m + 1):
            order *= q**i - (-1) ** i
    elif kind == "Sp":
        # diagnostic only: never expected for these images
        if m % 2:
            raise ValueError("Sp needs even dimension")
        order = q ** ((m // 2) ** 2)
        for i in range(1, m // 2 + 1):
            order *= q ** (2 * i) - 1
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return order


@dataclass(frozen=True)
class ExpectedImage:
    """The predicted monodromy image: determinant-mu_l cover of SU or SL."""

    kind: str  # "SlU" or "SlL"
    dim: int
    q: int
    l: int
    order: int
    hypothesis_certificate: tuple[int, ...] | None
    hypothesis_note: str

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "dim": self.dim,
            "q": self.q,
            "l": self.l,
            "order": str(self.order),
            "hypothesis_certificate": (
                list(self.hypothesis_certificate)
                if self.hypothesis_certificate is not None
                else None
            ),
            "hypothesis_note": self.hypothesis_note,
        }


def expected_image(sd: SplittingData, kvec) -> ExpectedImage:
    kvec = tuple(kvec)
    l = sd.l
    if any(not 1 <= k <= l - 1 for k in kvec):
        raise ValueError(f"monodromy exponents must lie in 1..{l - 1}")
    if sum(kvec) % l == 0:
        raise ValueError(
            "degenerate parameters (sum k_i = 0 mod l); the full-image "
            "prediction applies to the nondegenerate form"
        )
    n = len(kvec) - 1
    cert = find_degenerate_subsequence(kvec, l)
    if n >= l + 1:
        note = f"n = {n} >= l + 1 = {l + 1}"
    elif cert is not None:
        note = f"product-one subsequence certificate at indices {cert}"
    else:
        note = (
            "hypotheses not certified: n < l + 1 and no product-one "
            "subsequence found"
        )
    if sd.case is Case.UNITARY:
        kind, base = "SlU", classical_group_order("SU", n, sd.q)
    else:
        kind, base = "SlL", classical_group_order("SL", n, sd.q)
    return ExpectedImage(
        kind=kind,
        dim=n,
        q=sd.q,
        l=l,
        order=base * l,
        hypothesis_certificate=cert,
        hypothesis_note=note,
    )


# -- norm equation ----------------------------------------------------------


def solve_norm_equation(alg: InvolutiveAlgebra, xi: AlgElem) -> AlgElem:
    """Least eta (by component code) with norm(xi)/4 + norm(eta) = 1, for an
    imaginary xi in a unitary-case algebra."""
    if alg.kind is not Case.UNITARY:
        raise ValueError("norm equation construction needs the unitary case")
    if not alg.is_imaginary(xi):
        raise ValueError("xi must be imaginary (involve(xi) = -xi)")
    quarter = alg.invert(alg.scalar(4))
    target = alg.sub(alg.one, alg.mul(quarter, alg.norm(xi)))
    for code in range(alg.field.order):
        eta = (code,)
        if alg.norm(eta) == target:
            return eta
    raise AssertionError("norm map failed to be surjective; arithmetic bug")


# -- extension matrices -----------------------------------------------------


@dataclass(frozen=True)
class ExtensionMatrix:
    """Unipotent lift with top row (1, conj(alpha), lam), last column
    (lam, alpha, 1), identity in the middle block."""

    alg: InvolutiveAlgebra
    alpha: tuple[AlgElem, ...]  # alpha_2 .. alpha_m
    lam: AlgElem

    @property
    def dim(self) -> int:
        return len(self.alpha) + 2

    def matrix(self) -> AMat:
        alg = self.alg
        m = self.dim
        rows = [
            [alg.one if r == c else alg.zero for c in range(m)]
            for r in range(m)
        ]
        for t, a in enumerate(self.alpha):
            rows[0][1 + t] = alg.involve(a)
            rows[1 + t][m - 1] = a
        rows[0][m - 1] = self.lam
        return amat_from_entries(alg, rows)


def _hermitian_model_gram(alg: InvolutiveAlgebra, m: int) -> AMat:
    """Gram of the reference hermitian form: identity middle block,
    pairing 1 between the kernel direction (first) and the lift (last)."""
    rows = [
        [alg.one if (0 < r == c < m - 1) else alg.zero for c in range(m)]
        for r in range(m)
    ]
    rows[0][m - 1] = alg.one
    rows[m - 1][0] = alg.one
    return amat_from_entries(alg, rows)


def unitarity_defect(alg: InvolutiveAlgebra, T: ExtensionMatrix) -> AlgElem:
    """The scalar constraint linking lam to the alpha norms:
    lam + conj(lam) + sum alpha_i conj(alpha_i), zero iff T is an isometry of
    the reference hermitian form."""
    s = alg.trace(T.lam)
    for a in T.alpha:
        s = alg.add(s, alg.norm(a))
    return s


def random_extension_matrix(
    alg: InvolutiveAlgebra, m: int, rng: random.Random, normalized: bool = True
) -> ExtensionMatrix:
    """Random isometric extension matrix; with `normalized` the alpha vector
    has sum-of-norms exactly 1 (built via the norm equation)."""
    if m <= 2:
        raise ValueError("need dimension m > 2")
    nalpha = m - 2
    while True:
        tail = [alg.random(rng) for _ in range(nalpha - 1)]
        target = alg.one if normalized else alg.norm(alg.random(rng))
        for a in tail:
            target = alg.sub(target, alg.norm(a))
        head = _solve_norm_value(alg, target, rng)
        if head is not None:
            alpha = [head] + tail
            break
    # lam + conj(lam) = -sum norms; split lam into a fixed part and a free
    # imaginary part
    s = alg.zero
    for a in alpha:
        s = alg.add(s, alg.norm(a))
    half = alg.invert(alg.scalar(2))
    lam = alg.mul(half, alg.neg(s))
    lam = alg.add(lam, _random_imaginary(alg, rng))
    T = ExtensionMatrix(alg=alg, alpha=tuple(alpha), lam=lam)
    assert unitarity_defect(alg, T) == alg.zero
    return T


def _solve_norm_value(alg, target, rng) -> AlgElem | None:
    order = alg.field.order
    start = rng.randrange(order)
    for off in range(order):
        cand = ((start + off) % order,)
        if alg.norm(cand) == target:
            return cand
    return None


def _random_imaginary(alg: InvolutiveAlgebra, rng) -> AlgElem:
    while True:
        x = alg.random(rng)
        mu = alg.sub(x, alg.involve(x))  # x - conj(x) is always imaginary
        return mu


def imaginary_elements(alg: InvolutiveAlgebra) -> list[AlgElem]:
    return [x for x in map(lambda c: (c,), range(alg.field.order)) if alg.is_imaginary(x)]


@dataclass(frozen=True)
class ExtensionIdentityReport:
    trials: int
    commutator_identity_holds: int
    commutator_entry_always_imaginary: bool
    inverse_display_matches: int
    inverse_display_matches_normalized: int
    findings: tuple[str, ...]


def verify_extension_identities(
    alg: InvolutiveAlgebra, m: int, trials: int, seed: int = 0
) -> ExtensionIdentityReport:
    """Check the displayed inverse and commutator identities on random
    isometric extension matrices."""
    if alg.kind is not Case.UNITARY:
        raise ValueError("extension identities are checked in the unitary case")
    if m <= 2:
        raise ValueError("need dimension m > 2")
    rng = random.Random(seed)
    F = alg.field
    comm_ok = 0
    imag_ok = True
    inv_ok = 0
    inv_norm_ok = 0
    findings: list[str] = []
    for _ in range(trials):
        T1 = random_extension_matrix(alg, m, rng)
        T2 = random_extension_matrix(alg, m, rng)
        A, B = T1.matrix(), T2.matrix()
        Ainv = tuple(linalg.mat_inv(F, comp) for comp in A)
        Binv = tuple(linalg.mat_inv(F, comp) for comp in B)
        from .gassner import amat_mul

        comm = amat_mul(alg, amat_mul(alg, A, B), amat_mul(alg, Ainv, Binv))
        # predicted: elementary with top-right sum(conj(a) b - a conj(b))
        entry = alg.zero
        for a, b in zip(T1.alpha, T2.alpha):
            entry = alg.add(entry, alg.mul(alg.involve(a), b))
            entry = alg.sub(entry, alg.mul(a, alg.involve(b)))
        predicted = _elementary(alg, m, entry)
        if comm == predicted:
            comm_ok += 1
        if not alg.is_imaginary(entry):
            imag_ok = False
        # displayed inverse: top-right entry "1 - lam"
        shown = alg.sub(alg.one, T1.lam)
        true_tr = tuple(comp[0][m - 1] for comp in Ainv)
        norms = alg.zero
        for a in T1.alpha:
            norms = alg.add(norms, alg.norm(a))
        if true_tr == shown:
            inv_ok += 1
        if true_tr == alg.sub(norms, T1.lam):
            inv_norm_ok += 1
    if comm_ok != trials:
        findings.append(f"commutator identity failed in {trials - comm_ok} trials")
    if not imag_ok:
        findings.append("commutator top-right entry was not always imaginary")
    if inv_ok != trials:
        findings.append(
            "displayed inverse entry '1 - lam' holds only under the "
            "sum-of-norms = 1 normalization; true entry is "
            "sum(norm(alpha)) - lam"
        )
    return ExtensionIdentityReport(
        trials=trials,
        commutator_identity_holds=comm_ok,
        commutator_entry_always_imaginary=imag_ok,
        inverse_display_matches=inv_ok,
        inverse_display_matches_normalized=inv_norm_ok,
        findings=tuple(findings),
    )


def _elementary(alg: InvolutiveAlgebra, m: int, entry: AlgElem) -> AMat:
    rows = [
        [alg.one if r == c else alg.zero for c in range(m)] for r in range(m)
    ]
    rows[0][m - 1] = entry
    return amat_from_entries(alg, rows)


def realize_imaginary_scalar(
    alg: InvolutiveAlgebra, xi: AlgElem
) -> tuple[tuple[AlgElem, ...], tuple[AlgElem, ...]]:
    """Alpha and beta tails whose commutator entry is exactly xi:
    alpha = (-xi/2, eta, 0, ...), beta = (1, 0, ...)."""
    if not alg.is_imaginary(xi):
        raise ValueError("xi must be imaginary")
    eta = solve_norm_equation(alg, xi)
    half = alg.invert(alg.scalar(2))
    alpha = (alg.neg(alg.mul(half, xi)), eta)
    beta = (alg.one, alg.zero)
    return alpha, beta


# -- the pigeonhole subsequence procedure -----------------------------------


def find_degenerate_subsequence(kvec, d: int) -> tuple[int, ...] | None:
    """Proper subsequence of length >= 3 with sum = 0 mod d, avoiding value 0,
    found by the block-sort + prefix-sum pigeonhole procedure; None when the
    procedure finds no collision (e.g. the extremal family (1,...,1, d-1))."""
    kvec = tuple(k % d for k in kvec)
    if any(k == 0 for k in kvec):
        raise ValueError("entries must be nonzero mod d")

    # sort into blocks of equal values, remembering original positions
    order = sorted(range(len(kvec)), key=lambda i: (kvec[i], i))
    vals = [kvec[i] for i in order]

    def result(sorted_positions) -> tuple[int, ...] | None:
        idx = tuple(sorted(order[s] for s in sorted_positions))
        if len(idx) < 3 or sum(kvec[i] for i in idx) % d != 0:
            return None
        if len(idx) > len(kvec):
            return None
        return idx

    # prefix sums s_0 = 0, s_1 = v_0, ... over at most d+2 entries
    limit = min(len(vals), d + 1)
    prefix = [0]
    for v in vals[:limit]:
        prefix.append((prefix[-1] + v) % d)
    pairs = _collision_pairs(prefix)
    if not pairs:
        return None
    (i, j) = pairs[0]
    if len(pairs) == 1:
        if j - i >= 3:
            return result(range(i, j))
        return None
    (k, l) = pairs[1]
    if j - i >= 3:
        return result(range(i, j))
    if l - k >= 3:
        return result(range(k, l))
    # both collisions have width 2
    if k >= j:
        return result(list(range(i, j)) + list(range(k, l)))
    # k < j = i + 2 and pairs distinct forces k = i + 1, so the repeated
    # value is the order-2 element (even d only); pigeonhole in mu_d / {+-1}
    assert k == i + 1 and l == k + 2
    two_v = (vals[i] + vals[i + 1]) % d
    assert two_v == 0 or d % 2 == 0
    rest = [s for s in range(len(vals)) if s not in (i, i + 1, i + 2)]
    half = [0]
    for s in rest[: d - 2]:
        half.append((half[-1] + vals[s]) % d)
    # find i' < j' with partial sum in {0, d/2}
    for jp in range(1, len(half)):
        for ip in range(jp):
            diff = (half[jp] - half[ip]) % d
            seg = rest[ip:jp]
            if diff == 0 and len(seg) >= 1:
                return result(seg + [i + 1, i + 2])
            if d % 2 == 0 and diff == d // 2:
                return result(seg + [i, i + 1, i + 2])
    return None


def _collision_pairs(prefix) -> list[tuple[int, int]]:
    """Up to two distinct index pairs (i < j) with equal prefix sums, scanning
    for the tightest collisions first."""
    pairs = []
    seen: dict[int, int] = {}
    for j, s in enumerate(prefix):
        if s in seen:
            pairs.append((seen[s], j))
            if len(pairs) == 2:
                return pairs
        seen[s] = j
    # a second pass widens the search beyond first-collision bookkeeping
    if len(pairs) == 1:
        (i0, j0) = pairs[0]
        for j in range(len(prefix)):
            for i in range(j):
                if prefix[i] == prefix[j] and (i, j) != (i0, j0):
                    pairs.append((i, j))
                    return pairs
    return pairs


# -- the unipotent radical --------------------------------------------------


class NondegenerateFormError(ValueError):
    pass


@dataclass(frozen=True)
class RadicalDescription:
    """Transvections along the kernel direction of a corank-1 form."""

    form: HermitianForm
    direction: AVec

    @property
    def alg(self) -> InvolutiveAlgebra:
        return self.form.ctx.algebra

    def element(self, row: AVec) -> AMat:
        """1 + direction . row^t; row must kill the direction."""
        alg = self.alg
        n = self.form.ctx.n
        acc = alg.zero
        for r, v in zip(row, self.direction):
            acc = alg.add(acc, alg.mul(r, v))
        if acc != alg.zero:
            raise ValueError("functional must vanish on the direction")
        rows = [
            [
                alg.add(
                    alg.one if i == j else alg.zero,
                    alg.mul(self.direction[i], row[j]),
                )
                for j in range(n)
            ]
            for i in range(n)
        ]
        return amat_from_entries(alg, rows)

    def functional_basis(self) -> list[AVec]:
        """Rows spanning {r : r . direction = 0}, per component combined."""
        alg = self.alg
        F = alg.field
        n = self.form.ctx.n
        per_comp = []
        for c in range(alg.ncomp):
            vc = tuple(x[c] for x in self.direction)
            per_comp.append(linalg.nullspace(F, (vc,)))
        # componentwise independent: cross-combine basis slots
        dims = {len(b) for b in per_comp}
        assert dims == {n - 1}
        basis = []
        for d in range(n - 1):
            basis.append(
                tuple(
                    tuple(per_comp[c][d][j] for c in range(alg.ncomp))
                    for j in range(n)
                )
            )
        return basis

    def enumerate(self, limit: int | None = None):
        """All radical elements (exhaustive over functional coefficients);
        componentwise independent coefficients in the split case."""
        alg = self.alg
        F = alg.field
        basis = self.functional_basis()
        import itertools

        coeff_space = itertools.product(
            *(alg.elements() for _ in range(len(basis)))
        )
        count = 0
        n = self.form.ctx.n
        for coeffs in coeff_space:
            row = tuple(alg.zero for _ in range(n))
            for c, b in zip(coeffs, basis):
                row = tuple(
                    alg.add(r, alg.mul(c, x)) for r, x in zip(row, b)
                )
            yield self.element(row)
            count += 1
            if limit is not None and count >= limit:
                return

    def contains(self, M: AMat) -> bool:
        alg = self.alg
        n = self.form.ctx.n
        if M == amat_identity(alg, n):
            return True
        T = is_transvection(M, alg)
        if T is None:
            return False
        from .gassner import proportional

        return proportional(alg, T.direction, self.direction)


def radical_transvections(form: HermitianForm) -> RadicalDescription:
    if form.rank != form.ctx.n - 1:
        raise NondegenerateFormError(
            "unipotent radical needs a corank-1 form"
        )
    assert len(form.kernel) == 1
    return RadicalDescription(form=form, direction=form.kernel[0])
