"""Event universe with controllability, observability and coordination attributes."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable


def _fs(items: Iterable[str] | None) -> frozenset[str]:
    return frozenset(items or ())


@dataclass(frozen=True)
class EventTable:
    """Global event set plus the attribute subsets used by every check.

    Only the controllable and observable subsets are stored; the uncontrollable
    and unobservable sets are always derived from them.
    """

    events: tuple[str, ...]
    controllable: frozenset[str] = field(default_factory=frozenset)
    observable: frozenset[str] = field(default_factory=frozenset)
    alphabet1: frozenset[str] = field(default_factory=frozenset)
    alphabet2: frozenset[str] = field(default_factory=frozenset)
    alphabet_k: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        object.__setattr__(self, "events", tuple(sorted(set(self.events))))
        for name in ("controllable", "observable", "alphabet1", "alphabet2", "alphabet_k"):
            object.__setattr__(self, name, _fs(getattr(self, name)))
        universe = set(self.events)
        for name in ("controllable", "observable", "alphabet1", "alphabet2", "alphabet_k"):
            extra = getattr(self, name) - universe
            if extra:
                raise ValueError(f"{name} contains unknown events: {sorted(extra)}")

    @classmethod
    def build(
        cls,
        events: Iterable[str],
        controllable: Iterable[str] | None = None,
        observable: Iterable[str] | None = None,
        alphabet1: Iterable[str] | None = None,
        alphabet2: Iterable[str] | None = None,
        alphabet_k: Iterable[str] | None = None,
    ) -> EventTable:
        return cls(
            tuple(events),
            _fs(controllable),
            _fs(observable),
            _fs(alphabet1),
            _fs(alphabet2),
            _fs(alphabet_k),
        )

    @property
    def universe(self) -> frozenset[str]:
        return frozenset(self.events)

    @property
    def uncontrollable(self) -> frozenset[str]:
        return self.universe - self.controllable

    @property
    def unobservable(self) -> frozenset[str]:
        return self.universe - self.observable

    def component(self, part: str) -> frozenset[str]:
        """Alphabet of a coordination component: ``"1"``, ``"2"``, ``"k"``, ``"1+k"`` or ``"2+k"``."""
        if part == "1":
            return self.alphabet1
        if part == "2":
            return self.alphabet2
        if part == "k":
            return self.alphabet_k
        if part == "1+k":
            return self.alphabet1 | self.alphabet_k
        if part == "2+k":
            return self.alphabet2 | self.alphabet_k
        raise ValueError(f"unknown component {part!r}")

    def uncontrollable_in(self, part: str) -> frozenset[str]:
        return self.component(part) & self.uncontrollable

    def controllable_in(self, part: str) -> frozenset[str]:
        return self.component(part) & self.controllable

    def observable_in(self, part: str) -> frozenset[str]:
        return self.component(part) & self.observable

    def with_alphabet_k(self, alphabet_k: Iterable[str]) -> EventTable:
        return replace(self, alphabet_k=_fs(alphabet_k))

    def check_coordination(self) -> None:
        """Raise ``ValueError`` unless Σ1 ∪ Σ2 = Σ and Σ1 ∩ Σ2 ⊆ Σk ⊆ Σ1 ∪ Σ2."""
        both = self.alphabet1 | self.alphabet2
        if both != self.universe:
            raise ValueError(
                f"alphabet1 ∪ alphabet2 must equal the event set; missing {sorted(self.universe - both)}"
            )
        shared = self.alphabet1 & self.alphabet2
        if not shared <= self.alphabet_k:
            raise ValueError(
                f"shared events {sorted(shared - self.alphabet_k)} are missing from the coordinator alphabet"
            )
        if not self.alphabet_k <= both:
            raise ValueError(f"coordinator alphabet has foreign events {sorted(self.alphabet_k - both)}")
