"""Braid words on n+1 strands and the specific words the verification needs.

Generators are sigma_0 .. sigma_{n-1}, sigma_i crossing strands i and i+1.
A letter is stored as a (index, sign) pair; the text format is whitespace
separated signed indices ("0 0" for sigma_0^2, "-1" for sigma_1 inverse, with
"-0" accepted for the inverse of sigma_0).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce


@dataclass(frozen=True)
class StrandPermutation:
    """Permutation of strand positions; image[i] is where strand at slot i goes."""

    image: tuple[int, ...]

    @staticmethod
    def identity(n_strands: int) -> "StrandPermutation":
        return StrandPermutation(tuple(range(n_strands)))

    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self.image))

    def then(self, other: "StrandPermutation") -> "StrandPermutation":
        """Apply self first, then other (left-to-right composition)."""
        return StrandPermutation(tuple(other.image[v] for v in self.image))


@dataclass(frozen=True)
class BraidWord:
    strand_count: int
    letters: tuple[tuple[int, int], ...]  # (generator index, +1 or -1)

    def __post_init__(self):
        for idx, sign in self.letters:
            if not 0 <= idx <= self.strand_count - 2:
                raise ValueError(
                    f"generator index {idx} out of range for "
                    f"{self.strand_count} strands"
                )
            if sign not in (1, -1):
                raise ValueError(f"bad sign {sign}")

    @staticmethod
    def from_letters(n_strands: int, letters) -> "BraidWord":
        return BraidWord(n_strands, tuple((i, s) for i, s in letters))

    @staticmethod
    def identity(n_strands: int) -> "BraidWord":
        return BraidWord(n_strands, ())

    @staticmethod
    def generator(n_strands: int, i: int, sign: int = 1) -> "BraidWord":
        return BraidWord(n_strands, ((i, sign),))

    # -- text format -------------------------------------------------------

    @staticmethod
    def parse(n_strands: int, text: str) -> "BraidWord":
        letters = []
        for tok in text.split():
            sign = -1 if tok.startswith("-") else 1
            idx = int(tok.lstrip("+-"))
            letters.append((idx, sign))
        return BraidWord(n_strands, tuple(letters))

    def to_text(self) -> str:
        return " ".join(
            ("-" if s < 0 else "") + str(i) for i, s in self.letters
        )

    # -- group operations --------------------------------------------------

    def concat(self, other: "BraidWord") -> "BraidWord":
        if other.strand_count != self.strand_count:
            raise ValueError("strand count mismatch")
        return BraidWord(self.strand_count, self.letters + other.letters)

    def invert(self) -> "BraidWord":
        return BraidWord(
            self.strand_count,
            tuple((i, -s) for i, s in reversed(self.letters)),
        )

    def power(self, e: int) -> "BraidWord":
        base = self if e >= 0 else self.invert()
        return reduce(
            BraidWord.concat,
            [base] * abs(e),
            BraidWord.identity(self.strand_count),
        )

    def free_reduce(self) -> "BraidWord":
        """Cancel adjacent sigma_i sigma_i^{-1} pairs to a fixed point."""
        stack: list[tuple[int, int]] = []
        for let in self.letters:
            if stack and stack[-1][0] == let[0] and stack[-1][1] == -let[1]:
                stack.pop()
            else:
                stack.append(let)
        return BraidWord(self.strand_count, tuple(stack))

    # -- permutation quotient ---------------------------------------------

    def underlying_permutation(self) -> StrandPermutation:
        image = list(range(self.strand_count))
        # left-to-right application: each letter swaps slots i, i+1
        inv = list(range(self.strand_count))  # slot -> strand there
        for i, _ in self.letters:
            inv[i], inv[i + 1] = inv[i + 1], inv[i]
        for slot, strand in enumerate(inv):
            image[strand] = slot
        return StrandPermutation(tuple(image))

    def is_pure(self) -> bool:
        return self.underlying_permutation().is_identity()


def pure_generator(i: int, j: int, n: int) -> BraidWord:
    """Standard pure-braid generator linking strands i < j on n+1 strands:
    (sigma_{j-1} ... sigma_{i+1}) sigma_i^2 (sigma_{j-1} ... sigma_{i+1})^{-1}.
    """
    if not 0 <= i < j <= n:
        raise ValueError(f"need 0 <= i < j <= n, got ({i}, {j}, {n})")
    strands = n + 1
    conj = BraidWord.from_letters(strands, [(k, 1) for k in range(j - 1, i, -1)])
    core = BraidWord.from_letters(strands, [(i, 1), (i, 1)])
    return conj.concat(core).concat(conj.invert())


def half_twist(first: int, last: int, n_strands: int) -> BraidWord:
    """Cascading half twist on the generator range [first, last]:
    (sigma_first ... sigma_last)(sigma_first ... sigma_{last-1}) ... sigma_first.
    Its square is a pure braid.
    """
    if not 0 <= first <= last <= n_strands - 2:
        raise ValueError(
            f"need 0 <= first <= last <= {n_strands - 2}, got ({first}, {last})"
        )
    letters = []
    for top in range(last, first - 1, -1):
        letters.extend((k, 1) for k in range(first, top + 1))
    return BraidWord.from_letters(n_strands, letters)
