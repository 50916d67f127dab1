"""Sign patterns of the first partials and the corner rule they imply."""

from __future__ import annotations

from dataclasses import dataclass

_DELTA = {"PP": 1, "NN": 1, "NP": -1, "PN": -1}


@dataclass(frozen=True)
class SignCase:
    """Signs of (fx, fy) on the domain: P positive, N negative.

    ``delta`` is +1 when both partials share a sign, -1 otherwise.
    """

    case: str

    def __post_init__(self):
        if self.case not in _DELTA:
            raise ValueError(f"unknown sign case {self.case!r}")

    @property
    def delta(self) -> int:
        return _DELTA[self.case]

    @property
    def sx(self) -> int:
        return 1 if self.case[0] == "P" else -1

    @property
    def sy(self) -> int:
        return 1 if self.case[1] == "P" else -1

    @classmethod
    def from_signs(cls, sx: int, sy: int) -> "SignCase":
        return cls(("P" if sx > 0 else "N") + ("P" if sy > 0 else "N"))

    def min_corner(self, xlo, xhi, ylo, yhi):
        """Corner where f is smallest when f is monotone with these signs."""
        return (xlo if self.sx > 0 else xhi), (ylo if self.sy > 0 else yhi)

    def max_corner(self, xlo, xhi, ylo, yhi):
        return (xhi if self.sx > 0 else xlo), (yhi if self.sy > 0 else ylo)

    def __str__(self) -> str:
        return self.case


PP, NN, NP, PN = (SignCase(c) for c in ("PP", "NN", "NP", "PN"))
ALL_CASES = (PP, NN, NP, PN)
