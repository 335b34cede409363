from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class ClassTag(str, Enum):
    S = "S"
    S_STAR = "S_star"
    S_STAR_ORDER = "S_star_order"
    K = "K"
    U = "U"
    G = "G"
    M_ALPHA = "M_alpha"


class MembershipStatus(str, Enum):
    MEMBER = "member"
    NON_MEMBER = "non-member"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class ClassLabel:
    """
    A class of normalized analytic functions, optionally with its parameter
    (order of starlikeness, or the alpha of the alpha-convex class)
    """

    tag: ClassTag
    alpha: float | None = None

    def __post_init__(self):
        if self.tag is ClassTag.S_STAR_ORDER:
            if self.alpha is None or not 0.0 <= self.alpha < 1.0:
                raise ValueError(f"starlikeness order must lie in [0, 1), got {self.alpha}")
        elif self.tag is ClassTag.M_ALPHA:
            if self.alpha is None:
                raise ValueError("M_alpha needs alpha")
        elif self.alpha is not None:
            raise ValueError(f"{self.tag.value} takes no parameter")

    @classmethod
    def parse(cls, text: str, alpha: float | None = None) -> "ClassLabel":
        """
        Parse labels such as ``S_star``, ``S_star_order(0.5)``, ``M_alpha(-1)``
        """
        text = text.strip()
        if "(" in text and text.endswith(")"):
            name, arg = text[:-1].split("(", 1)
            alpha = float(arg)
        else:
            name = text
        try:
            tag = ClassTag(name)
        except ValueError as exc:
            raise ValueError(f"unknown class label {text!r}") from exc
        return cls(tag, alpha)

    def __str__(self) -> str:
        if self.alpha is None:
            return self.tag.value
        return f"{self.tag.value}({self.alpha:g})"


S = ClassLabel(ClassTag.S)
S_STAR = ClassLabel(ClassTag.S_STAR)
S_STAR_HALF = ClassLabel(ClassTag.S_STAR_ORDER, 0.5)
K = ClassLabel(ClassTag.K)
U = ClassLabel(ClassTag.U)
G = ClassLabel(ClassTag.G)
M_MINUS_ONE = ClassLabel(ClassTag.M_ALPHA, -1.0)


@dataclass(frozen=True)
class Membership:
    label: ClassLabel
    status: MembershipStatus
    provenance: str

    def to_dict(self) -> dict:
        return {"label": str(self.label), "status": self.status.value, "provenance": self.provenance}
