"""Britton reduction over abstract oracles and the tower of extensions.

The engine is generic: a base word-problem oracle plus an associated pair
(membership tests returning a certificate, and transport maps realizing
the associated isomorphism as words) yield a complete word-problem oracle
for the extension.  It is instantiated twice, for

    <h> x B --(stable s, h^2 <-> ha)--> G --(stable t, identity on h^2)--> E.

Convention: a pinch t^-1 z t with z in the left associated subgroup is
replaced by its right transport, and t z t^-1 with z in the right subgroup
by its left transport.  Since the associated isomorphisms here are the
obvious ones, the stable-letter orientation is immaterial for triviality,
but the engine fixes this convention for deterministic reduced forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Protocol

from .baumslag import (
    eval_b,
    eval_base,
    member_A,
    member_H2,
    member_HA,
)
from .presentations import ABC, ABCH, ABCHS
from .words import (
    Alphabet,
    Word,
    concat,
    free_reduce,
    invert,
    render_word,
)

DEFAULT_BUDGET = 10_000


class BudgetExceededError(RuntimeError):
    """A word grew past the configured letter budget during reduction."""


class GroupOracle(Protocol):
    """A total triviality predicate on words over a fixed alphabet."""

    alphabet: Alphabet

    def is_trivial(self, w: Word) -> bool: ...


@dataclass(frozen=True)
class BOracle:
    """Word problem of B via the exact GF(2) module model."""

    alphabet: Alphabet = ABC

    def is_trivial(self, w: Word) -> bool:
        return eval_b(w).is_identity()


@dataclass(frozen=True)
class ZxBOracle:
    """Word problem of the direct product <h> x B."""

    alphabet: Alphabet = ABCH

    def is_trivial(self, w: Word) -> bool:
        return eval_base(w).is_identity()


@dataclass(frozen=True)
class AssociatedPair:
    """Membership and transport data for the two associated subgroups.

    Membership functions take a word over the base alphabet and return a
    certificate (None for non-members); transports turn a certificate into
    a canonical word over the base alphabet representing the image under
    the associated isomorphism.
    """

    member_left: Callable[[Word], Optional[object]]
    member_right: Callable[[Word], Optional[object]]
    transport_left_to_right: Callable[[object], Word]
    transport_right_to_left: Callable[[object], Word]


@dataclass(frozen=True)
class BrittonWord:
    """Alternating form g0 t^e1 g1 ... t^ek gk with stable-free parts g_i."""

    head: Word
    tail: tuple[tuple[int, Word], ...] = ()

    @property
    def stable_count(self) -> int:
        return len(self.tail)

    def render(self, stable: str) -> str:
        parts = [render_word(self.head)]
        for eps, g in self.tail:
            parts.append(stable if eps > 0 else stable + "^-1")
            parts.append(render_word(g))
        return " . ".join(parts)


def split(w: Word, base_alphabet: Alphabet, stable_index: int) -> BrittonWord:
    """Parse a word into alternating form; base letters keep their indices.

    The stable letter must be the last letter of the extended alphabet so
    that base parts are words over the base alphabet unchanged.
    """
    if stable_index != base_alphabet.arity:
        raise ValueError("stable letter must follow the base alphabet")
    head_letters: list = []
    tail: list[tuple[int, Word]] = []
    current: list = head_letters
    for idx, sign in w.letters:
        if idx == stable_index:
            current = []
            tail.append((sign, current))
        else:
            current.append((idx, sign))
    head = free_reduce(Word(base_alphabet, tuple(head_letters)))
    return BrittonWord(
        head,
        tuple(
            (eps, free_reduce(Word(base_alphabet, tuple(letters))))
            for eps, letters in tail
        ),
    )


def britton_reduce(
    bw: BrittonWord,
    pair: AssociatedPair,
    *,
    strategy: str = "leftmost",
    budget: int = DEFAULT_BUDGET,
) -> BrittonWord:
    """Remove pinches to a fixed point.

    Each step removes exactly two stable letters, so the loop terminates in
    at most stable_count/2 steps.  With strategy "leftmost" the leftmost
    pinch is rewritten first; "rightmost" is provided to check that the
    verdict is order-independent.
    """
    if strategy not in ("leftmost", "rightmost"):
        raise ValueError(f"unknown strategy {strategy!r}")
    eps = [e for e, _ in bw.tail]
    parts = [bw.head] + [g for _, g in bw.tail]
    while True:
        k = len(eps)
        positions = range(1, k)
        if strategy == "rightmost":
            positions = range(k - 1, 0, -1)
        for j in positions:
            if eps[j - 1] != -eps[j]:
                continue
            if eps[j - 1] < 0:
                cert = pair.member_left(parts[j])
                if cert is None:
                    continue
                replacement = pair.transport_left_to_right(cert)
            else:
                cert = pair.member_right(parts[j])
                if cert is None:
                    continue
                replacement = pair.transport_right_to_left(cert)
            merged = free_reduce(concat(parts[j - 1], replacement, parts[j + 1]))
            if len(merged) > budget:
                raise BudgetExceededError(
                    f"base part grew to {len(merged)} letters (budget {budget})"
                )
            parts[j - 1 : j + 2] = [merged]
            del eps[j - 1 : j + 1]
            break
        else:
            return BrittonWord(parts[0], tuple(zip(eps, parts[1:])))


class HnnOracle:
    """Word-problem oracle for an extension by a commuting stable letter.

    Immutable after construction; the optional triviality cache is
    transparent (verdicts are identical with caching disabled).
    """

    def __init__(
        self,
        base: GroupOracle,
        pair: AssociatedPair,
        stable: str,
        *,
        budget: int = DEFAULT_BUDGET,
        cache: bool = True,
    ):
        self.base = base
        self.pair = pair
        self.stable = stable
        self.alphabet = base.alphabet.extend(stable)
        self.stable_index = base.alphabet.arity
        self.budget = budget
        self._cache: Optional[dict[tuple, bool]] = {} if cache else None

    def reduce(self, w: Word, *, strategy: str = "leftmost") -> BrittonWord:
        if len(w) > self.budget:
            raise BudgetExceededError(
                f"input word has {len(w)} letters (budget {self.budget})"
            )
        bw = split(free_reduce(w), self.base.alphabet, self.stable_index)
        return britton_reduce(bw, self.pair, strategy=strategy, budget=self.budget)

    def is_trivial(self, w: Word, *, strategy: str = "leftmost") -> bool:
        key = None
        if self._cache is not None and strategy == "leftmost":
            key = free_reduce(w).letters
            cached = self._cache.get(key)
            if cached is not None:
                return cached
        bw = self.reduce(w, strategy=strategy)
        verdict = bw.stable_count == 0 and self.base.is_trivial(bw.head)
        if key is not None:
            self._cache[key] = verdict
        return verdict


# ---------------------------------------------------------------------------
# The tower: G over <h> x B, then E over G.
# ---------------------------------------------------------------------------


def _h_power(alphabet: Alphabet, k: int) -> Word:
    h_idx = alphabet.index("h")
    sign = 1 if k >= 0 else -1
    return Word(alphabet, ((h_idx, sign),) * abs(k))


def _ha_power(alphabet: Alphabet, k: int) -> Word:
    # (ha)^k = h^k a^(k mod 2): h central, a^2 = 1.
    letters = list(_h_power(alphabet, k).letters)
    if k % 2:
        letters.append((alphabet.index("a"), 1))
    return Word(alphabet, tuple(letters))


def g_pair() -> AssociatedPair:
    """h^2 on the left, ha on the right, matched exponentwise."""
    return AssociatedPair(
        member_left=lambda w: member_H2(eval_base(w)),
        member_right=lambda w: member_HA(eval_base(w)),
        transport_left_to_right=lambda k: _ha_power(ABCH, k),
        transport_right_to_left=lambda k: _h_power(ABCH, 2 * k),
    )


@lru_cache(maxsize=None)
def g_oracle(budget: int = DEFAULT_BUDGET) -> HnnOracle:
    """The word-problem oracle for G (alphabet a, b, c, h, s)."""
    return HnnOracle(ZxBOracle(), g_pair(), "s", budget=budget)


def member_H2_in_G(
    w: Word, oracle: Optional[HnnOracle] = None
) -> Optional[int]:
    """k such that w = h^{2k} in G, if any.

    A reduced form retaining stable letters lies outside the base group,
    hence outside <h^2>; otherwise membership is decided in <h> x B.
    """
    oracle = oracle or g_oracle()
    bw = oracle.reduce(w)
    if bw.stable_count:
        return None
    return member_H2(eval_base(bw.head))


def member_HA_in_G(
    w: Word, oracle: Optional[HnnOracle] = None
) -> Optional[int]:
    """k such that w = (ha)^k in G, if any."""
    oracle = oracle or g_oracle()
    bw = oracle.reduce(w)
    if bw.stable_count:
        return None
    return member_HA(eval_base(bw.head))


def member_A_in_G(w: Word, oracle: Optional[HnnOracle] = None) -> bool:
    """Membership in the subgroup generated by h and the a^{b^i}."""
    oracle = oracle or g_oracle()
    bw = oracle.reduce(w)
    if bw.stable_count:
        return False
    return member_A(eval_base(bw.head))


def e_pair(budget: int = DEFAULT_BUDGET) -> AssociatedPair:
    """<h^2> on both sides with the identity isomorphism."""
    oracle = g_oracle(budget)

    def member(w: Word) -> Optional[int]:
        return member_H2_in_G(w, oracle)

    def transport(k: int) -> Word:
        return _h_power(ABCHS, 2 * k)

    return AssociatedPair(member, member, transport, transport)


@lru_cache(maxsize=None)
def e_oracle(budget: int = DEFAULT_BUDGET) -> HnnOracle:
    """The word-problem oracle for E (alphabet a, b, c, h, s, t)."""
    return HnnOracle(g_oracle(budget), e_pair(budget), "t", budget=budget)


def oracle_for(name: str, budget: int = DEFAULT_BUDGET) -> GroupOracle:
    if name == "B":
        return BOracle()
    if name == "ZxB":
        return ZxBOracle()
    if name == "G":
        return g_oracle(budget)
    if name == "E":
        return e_oracle(budget)
    raise KeyError(f"no built-in oracle named {name!r}")


# ---------------------------------------------------------------------------
# Subgroup handles.
# ---------------------------------------------------------------------------


class UndecidableSpecError(ValueError):
    """Membership for an arbitrary generator list is not provided."""


@dataclass(frozen=True)
class SubgroupHandle:
    """A total membership predicate on words over the ambient alphabet."""

    label: str
    contains: Callable[[Word], bool]

    def __call__(self, w: Word) -> bool:
        return self.contains(w)


def handle_H2(oracle: Optional[HnnOracle] = None) -> SubgroupHandle:
    oracle = oracle or g_oracle()
    return SubgroupHandle("H2", lambda w: member_H2_in_G(w, oracle) is not None)


def handle_HA(oracle: Optional[HnnOracle] = None) -> SubgroupHandle:
    oracle = oracle or g_oracle()
    return SubgroupHandle("HA", lambda w: member_HA_in_G(w, oracle) is not None)


def handle_A(oracle: Optional[HnnOracle] = None) -> SubgroupHandle:
    oracle = oracle or g_oracle()
    return SubgroupHandle("A", lambda w: member_A_in_G(w, oracle))


def conjugate_handle(g: Word, inner: SubgroupHandle) -> SubgroupHandle:
    """The handle for g H g^-1: z is a member iff g^-1 z g is in H."""
    g_inv = invert(g)

    def contains(z: Word) -> bool:
        return inner.contains(free_reduce(concat(g_inv, z, g)))

    return SubgroupHandle(f"conj({render_word(g)}, {inner.label})", contains)


def handle_for(name: str, oracle: Optional[HnnOracle] = None) -> SubgroupHandle:
    if name == "H2":
        return handle_H2(oracle)
    if name == "HA":
        return handle_HA(oracle)
    if name == "A":
        return handle_A(oracle)
    raise UndecidableSpecError(
        f"no membership procedure for subgroup {name!r}; only H2, HA, A and "
        "their conjugates are decidable here"
    )
