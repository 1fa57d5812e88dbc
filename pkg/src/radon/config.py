"""Dimension bookkeeping for transforms between affine Grassmannians."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional

from numerics.errors import DomainError

STRICT = 'strict'
SPECIAL = 'special'


class ExistenceMethod(Enum):
    ANALYTIC = 'analytic-exponent'
    NUMERIC = 'numeric-growth'


@dataclass(frozen=True)
class GrassmannConfig:
    """Dimensions of R^k_{p,q}: j = p+q, k = p+l, ℓ = n-k-q.

    Strict mode needs p, q, l > 0.  Special mode admits one zero among
    p (Gonzalez), q (inclusion) and l (the mirror of inclusion, reached by
    swapping the roles of q and l).
    """
    n: int
    p: int
    q: int
    l: int
    mode: str = STRICT
    j: int = field(init=False)
    k: int = field(init=False)
    ell: int = field(init=False)

    def __post_init__(self):
        for name in ('n', 'p', 'q', 'l'):
            value = getattr(self, name)
            if int(value) != value:
                raise DomainError(f"{name} must be an integer, got {value!r}")
            object.__setattr__(self, name, int(value))
        if self.n < 2:
            raise DomainError(f"n must be at least 2, got {self.n}")
        if min(self.p, self.q, self.l) < 0:
            raise DomainError(f"p, q, l must be nonnegative, got ({self.p}, {self.q}, {self.l})")
        if not self.p + self.q + self.l < self.n:
            raise DomainError(f"need p+q+l < n, got p+q+l={self.p + self.q + self.l}, n={self.n}")
        zeros = [name for name in ('p', 'q', 'l') if getattr(self, name) == 0]
        if self.mode == STRICT:
            if zeros:
                raise DomainError(f"strict mode needs p, q, l > 0; zero: {', '.join(zeros)} "
                                  f"(use mode='special')")
        elif self.mode == SPECIAL:
            if len(zeros) > 1:
                raise DomainError(f"special mode allows one zero among p, q, l; "
                                  f"zero: {', '.join(zeros)}")
        else:
            raise DomainError(f"unknown mode {self.mode!r}; use 'strict' or 'special'")
        object.__setattr__(self, 'j', self.p + self.q)
        object.__setattr__(self, 'k', self.p + self.l)
        object.__setattr__(self, 'ell', self.n - self.p - self.l - self.q)

    @classmethod
    def create(cls, n: int, p: int, q: int, l: int) -> 'GrassmannConfig':
        """Strict config when possible, special mode otherwise."""
        mode = STRICT if min(p, q, l) > 0 else SPECIAL
        return cls(n, p, q, l, mode)

    def swapped(self) -> 'GrassmannConfig':
        """(n, p, l, q): the config whose forward transform is our dual one."""
        return GrassmannConfig(self.n, self.p, self.l, self.q, self.mode)

    @property
    def special_case(self) -> Optional[str]:
        if self.p == 0:
            return 'gonzalez'
        if self.q == 0:
            return 'inclusion'
        if self.l == 0:
            return 'dual-inclusion'
        return None

    def as_dict(self) -> Dict:
        return {'n': self.n, 'p': self.p, 'q': self.q, 'l': self.l, 'j': self.j,
                'k': self.k, 'ell': self.ell, 'mode': self.mode,
                'special_case': self.special_case}

    def __str__(self) -> str:
        return f"(n={self.n}, p={self.p}, q={self.q}, l={self.l})"


@dataclass(frozen=True)
class ExistenceVerdict:
    """Outcome of the head and tail integrability tests for one profile."""
    head_ok: bool
    tail_ok: bool
    method: ExistenceMethod
    side: str = 'forward'
    messages: List[str] = field(default_factory=list, compare=False)

    @property
    def ok(self) -> bool:
        return self.head_ok and self.tail_ok

    def as_dict(self) -> Dict:
        return {'head_ok': self.head_ok, 'tail_ok': self.tail_ok, 'ok': self.ok,
                'method': self.method.value, 'side': self.side,
                'messages': list(self.messages)}
