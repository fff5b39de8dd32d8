"""Word algebra for the group <a, b | a^2 = b^3 = 1> and its subgroups.

Normal forms alternate between the letter ``a`` and a power of ``b``,
written ``b`` or ``B`` (= b^2 = b^{-1}).  The index-six subgroup
(trivial image in Z2 x Z3) is free of rank two, generated by

    g1 = b a b^2 a       g2 = b^2 a b a

F2 words are reduced letter sequences over {g1, g1^{-1}, g2, g2^{-1}},
encoded as the integers 0, 1, 2, 3 in that order (inverse = index ^ 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

G1, G1_INV, G2, G2_INV = 0, 1, 2, 3
F2_LETTER_NAMES = ("x", "X", "y", "Y")

_A = "a"
_B = "b"
_B2 = "B"


@dataclass(frozen=True)
class ModWord:
    """Normal-form word: alternating syllables over {a} and {b, B}."""

    syllables: tuple[str, ...] = ()

    def __post_init__(self):
        prev = None
        for s in self.syllables:
            if s not in (_A, _B, _B2):
                raise ValueError(f"invalid syllable {s!r}")
            if prev == _A and s == _A:
                raise ValueError("two consecutive 'a' syllables")
            if prev in (_B, _B2) and s in (_B, _B2):
                raise ValueError("two consecutive b-syllables")
            prev = s

    def __str__(self):
        return "".join(self.syllables) if self.syllables else "e"

    def __len__(self):
        return len(self.syllables)

    @property
    def is_identity(self) -> bool:
        return not self.syllables


def _tokenize(raw) -> list[str]:
    """Accept a string over a/b/B (with optional b^2, b², b^-1, b⁻¹ forms)
    or any iterable of such tokens, and emit canonical a/b/B tokens."""
    if isinstance(raw, ModWord):
        return list(raw.syllables)
    if isinstance(raw, str):
        s = raw.replace("b²", "B").replace("b⁻¹", "B").replace("b^2", "B")
        s = s.replace("b^-1", "B").replace("b-1", "B")
        tokens = [ch for ch in s if not ch.isspace()]
    else:
        tokens = list(raw)
    for t in tokens:
        if t not in (_A, _B, _B2):
            raise ValueError(f"invalid token {t!r}; alphabet is a, b, B (= b^2)")
    return tokens


def normalize(raw) -> ModWord:
    """Reduce a raw word over {a, b, B} to normal form using a^2 = b^3 = 1."""
    stack: list[str] = []
    for tok in _tokenize(raw):
        if tok == _A:
            if stack and stack[-1] == _A:
                stack.pop()
            else:
                stack.append(_A)
        else:
            k = 1 if tok == _B else 2
            if stack and stack[-1] in (_B, _B2):
                k = (k + (1 if stack.pop() == _B else 2)) % 3
            if k == 1:
                stack.append(_B)
            elif k == 2:
                stack.append(_B2)
    return ModWord(tuple(stack))


def mod_mul(w1: ModWord, w2: ModWord) -> ModWord:
    return normalize(w1.syllables + w2.syllables)


def mod_inverse(w: ModWord) -> ModWord:
    inv = {_A: _A, _B: _B2, _B2: _B}
    return ModWord(tuple(inv[s] for s in reversed(w.syllables)))


def mod_cyclic_reduce(w: ModWord) -> ModWord:
    """Strip matching first/last syllables; helper for conjugacy-invariant
    eigenvalue diagnostics."""
    syll = list(w.syllables)
    while len(syll) >= 2:
        first, last = syll[0], syll[-1]
        if first == _A and last == _A:
            syll = syll[1:-1]
        elif first in (_B, _B2) and last in (_B, _B2):
            k = (1 if last == _B else 2) + (1 if first == _B else 2)
            syll = syll[1:-1]
            k %= 3
            if k:
                syll.insert(0, _B if k == 1 else _B2)
            # a merged b-power may expose new matching ends; loop continues
        else:
            break
        # re-normalize interior in case the strip created adjacencies
        syll = list(normalize(syll).syllables)
    return ModWord(tuple(syll))


def parity_abelianization(w: ModWord) -> tuple[int, int]:
    """Exponent sums modulo (2, 3); (0, *) detects the index-two subgroup,
    (0, 0) the free rank-two subgroup."""
    na = sum(1 for s in w.syllables if s == _A)
    nb = sum(1 if s == _B else 2 for s in w.syllables if s != _A)
    return na % 2, nb % 3


@dataclass(frozen=True)
class F2Word:
    """Reduced word in the free generators g1 = baBa and g2 = Baba."""

    letters: tuple[int, ...] = ()

    def __post_init__(self):
        prev = None
        for k in self.letters:
            if k not in (G1, G1_INV, G2, G2_INV):
                raise ValueError(f"invalid letter {k!r}")
            if prev is not None and prev ^ 1 == k:
                raise ValueError("word is not reduced")
            prev = k

    def __str__(self):
        return "".join(F2_LETTER_NAMES[k] for k in self.letters) if self.letters else "e"

    def __len__(self):
        return len(self.letters)


def f2_from_string(s: str) -> F2Word:
    lookup = {name: k for k, name in enumerate(F2_LETTER_NAMES)}
    if s == "e":
        return F2Word()
    return F2Word(tuple(lookup[ch] for ch in s))


def f2_mul(w1: F2Word, w2: F2Word) -> F2Word:
    out = list(w1.letters)
    for k in w2.letters:
        if out and out[-1] ^ 1 == k:
            out.pop()
        else:
            out.append(k)
    return F2Word(tuple(out))


def f2_inverse(w: F2Word) -> F2Word:
    return F2Word(tuple(k ^ 1 for k in reversed(w.letters)))


_F2_SUBSTITUTION = {
    G1: (_B, _A, _B2, _A),      # b a b^2 a
    G1_INV: (_A, _B, _A, _B2),  # (b a b^2 a)^{-1}
    G2: (_B2, _A, _B, _A),      # b^2 a b a
    G2_INV: (_A, _B2, _A, _B),  # (b^2 a b a)^{-1}
}


def f2_to_mod(w: F2Word) -> ModWord:
    """Substitution homomorphism into the ambient group, then normalize."""
    tokens: list[str] = []
    for k in w.letters:
        tokens.extend(_F2_SUBSTITUTION[k])
    return normalize(tokens)


def enumerate_f2(max_len: int) -> Iterator[F2Word]:
    """All reduced words of length 1..max_len, shorter first, each length in
    lexicographic order on (g1, g1^{-1}, g2, g2^{-1})."""
    if max_len < 0:
        raise ValueError("max_len must be >= 0")
    level: list[tuple[int, ...]] = [()]
    for _ in range(max_len):
        nxt: list[tuple[int, ...]] = []
        for w in level:
            for k in (G1, G1_INV, G2, G2_INV):
                if w and w[-1] ^ 1 == k:
                    continue
                nw = w + (k,)
                nxt.append(nw)
                yield F2Word(nw)
        level = nxt


def f2_count(length: int) -> int:
    """Number of reduced words of exactly this length: 4 * 3^(k-1)."""
    if length <= 0:
        return 1 if length == 0 else 0
    return 4 * 3 ** (length - 1)


def _philox(seed: int, counter: int = 0) -> np.random.Generator:
    """Counter-based generator so scans are reproducible and shardable."""
    return np.random.Generator(np.random.Philox(key=np.uint64(seed), counter=np.uint64(counter)))


def random_f2_word(length: int, rng: np.random.Generator) -> F2Word:
    """One uniformly random reduced word of the given length."""
    letters: list[int] = []
    for _ in range(length):
        if not letters:
            letters.append(int(rng.integers(4)))
        else:
            options = [k for k in (G1, G1_INV, G2, G2_INV) if k != letters[-1] ^ 1]
            letters.append(options[int(rng.integers(3))])
    return F2Word(tuple(letters))


def random_f2_geodesic(length: int, seed: int) -> list[F2Word]:
    """Prefixes w_0 = e, w_1, ..., w_length of one reduced word: a discrete
    geodesic through the identity, reproducible from the seed."""
    if length < 0:
        raise ValueError("length must be >= 0")
    word = random_f2_word(length, _philox(seed))
    return [F2Word(word.letters[:n]) for n in range(length + 1)]


def constant_generator_geodesic(letter: int, length: int) -> list[F2Word]:
    """Prefixes of the cyclic geodesic along a single generator."""
    if letter not in (G1, G1_INV, G2, G2_INV):
        raise ValueError(f"invalid letter {letter!r}")
    return [F2Word((letter,) * n) for n in range(length + 1)]
