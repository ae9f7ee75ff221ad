"""Verdict values shared by the solver and the classifier."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Tuple


class Status(str, Enum):
    HOLDS = 'Holds'
    FAILS = 'Fails'
    UNDETERMINED = 'Undetermined'


class Property(str, Enum):
    GH_X = 'GH(X)'
    GH_P = 'GH(P)'
    GH_X0 = 'GH(X0)'
    GS_X = 'GS(X)'
    GS_P = 'GS(P)'
    GS_X0 = 'GS(X0)'
    AGH_X = 'AGH(X)'
    AGH_P = 'AGH(P)'
    AGH_X0 = 'AGH(X0)'


@dataclass(frozen=True)
class Reason:
    tag: str
    certificate: str = ''

    def to_dict(self) -> Dict[str, str]:
        return {'tag': self.tag, 'certificate': self.certificate}


@dataclass(frozen=True)
class Verdict:
    property: str
    status: Status
    reasons: Tuple[Reason, ...] = field(default_factory=tuple)
    certificates: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'property': str(self.property.value if isinstance(self.property, Enum) else self.property),
            'status': self.status.value,
            'reasons': [r.to_dict() for r in self.reasons],
            'certificates': sorted(self.certificates),
        }


def exit_code(statuses) -> int:
    """0 when everything holds, 1 on any failure, 2 when only undetermined remain."""
    statuses = list(statuses)
    if any(s is Status.FAILS for s in statuses):
        return 1
    if any(s is Status.UNDETERMINED for s in statuses):
        return 2
    return 0
