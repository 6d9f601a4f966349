"""Verdicts and counterexample witnesses returned by every decision procedure."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

Word = tuple[str, ...]


def fmt_word(word: Word | None) -> str:
    if word is None:
        return "-"
    return " ".join(word) if word else "ε"


@dataclass(frozen=True)
class Witness:
    """A word, or an observation-equal pair ``(s, s')`` with an event, falsifying a property.

    For controllability the witness is ``word=s`` with ``sigma=u``; for the
    observability family it is ``s``, ``s_prime`` and ``sigma``.
    """

    kind: str
    word: Word | None = None
    s: Word | None = None
    s_prime: Word | None = None
    sigma: str | None = None
    note: str = ""

    @classmethod
    def of_word(cls, word, note: str = "", sigma: str | None = None) -> Witness:
        return cls("word", word=tuple(word), sigma=sigma, note=note)

    @classmethod
    def of_pair(cls, s, s_prime, sigma: str, note: str = "") -> Witness:
        return cls("pair", s=tuple(s), s_prime=tuple(s_prime), sigma=sigma, note=note)

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"kind": self.kind}
        if self.word is not None:
            out["word"] = list(self.word)
        if self.s is not None:
            out["s"] = list(self.s)
        if self.s_prime is not None:
            out["s_prime"] = list(self.s_prime)
        if self.sigma is not None:
            out["sigma"] = self.sigma
        if self.note:
            out["note"] = self.note
        return out

    def __str__(self) -> str:
        if self.kind == "pair":
            return f"(s={fmt_word(self.s)}, s'={fmt_word(self.s_prime)}, σ={self.sigma})"
        if self.sigma is not None:
            return f"(s={fmt_word(self.word)}, σ={self.sigma})"
        return fmt_word(self.word)


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: Witness | None = None
    name: str = ""

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"name": self.name, "verdict": self.holds}
        if self.witness is not None:
            out["witness"] = self.witness.to_dict()
        return out


@dataclass(frozen=True)
class CompositeVerdict:
    """Conjunction of named component verdicts (conditional properties, supervisor existence)."""

    parts: Mapping[str, Verdict] = field(default_factory=dict)
    name: str = ""

    @property
    def holds(self) -> bool:
        return all(v.holds for v in self.parts.values())

    def __bool__(self) -> bool:
        return self.holds

    def __getitem__(self, key: str) -> Verdict:
        return self.parts[key]

    @property
    def failed(self) -> list[str]:
        return [k for k, v in self.parts.items() if not v.holds]

    @property
    def witness(self) -> Witness | None:
        for v in self.parts.values():
            if not v.holds:
                return v.witness
        return None

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "verdict": self.holds,
            "parts": [dict(v.to_dict(), name=k) for k, v in self.parts.items()],
        }
