"""Textual group specifications and the named constructions.

Grammar::

    spec   := atom | "prod(" spec "," spec ")"
    atom   := ("cyclic" | "dihedral" | "sym" | "alt" | "psl2") ":" uint
            | "perm:" uint ":" cycles
    cycles := generator (";" generator)*      e.g. (0 1 2 3 4);(0 1)

Points are 0-based and ``dihedral:n`` has order ``2n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .group import DEFAULT_ORDER_CAP, FiniteGroup, direct_product, generate_group
from .perm import Permutation

NAMED_KINDS = ("cyclic", "dihedral", "sym", "alt", "psl2")


class SpecError(ValueError):
    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (at byte {offset})"
        super().__init__(message)
        self.offset = offset


@dataclass(frozen=True)
class Named:
    kind: str
    n: int

    def __str__(self) -> str:
        return f"{self.kind}:{self.n}"


@dataclass(frozen=True)
class PermSpec:
    degree: int
    generators: tuple[Permutation, ...]

    def __str__(self) -> str:
        return f"perm:{self.degree}:" + ";".join(g.cycle_string() for g in self.generators)


@dataclass(frozen=True)
class Product:
    left: "GroupSpec"
    right: "GroupSpec"

    def __str__(self) -> str:
        return f"prod({self.left},{self.right})"


GroupSpec = Union[Named, PermSpec, Product]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


def _check_named(kind: str, n: int, offset: int) -> None:
    minimum = {"cyclic": 1, "dihedral": 2, "sym": 1, "alt": 1, "psl2": 5}[kind]
    if n < minimum:
        raise SpecError(f"{kind}:{n} needs n >= {minimum}", offset)
    if kind == "psl2" and not is_prime(n):
        raise SpecError(f"psl2:{n} needs a prime", offset)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str) -> SpecError:
        return SpecError(message, len(self.text[:self.pos].encode()))

    def peek(self) -> str:
        return self.text[self.pos:self.pos + 1]

    def ws(self) -> None:
        while self.peek().isspace():
            self.pos += 1

    def expect(self, token: str) -> None:
        if not self.text.startswith(token, self.pos):
            raise self.error(f"expected {token!r}")
        self.pos += len(token)

    def uint(self) -> int:
        start = self.pos
        while self.peek().isdigit():
            self.pos += 1
        if start == self.pos:
            raise self.error("expected unsigned integer")
        return int(self.text[start:self.pos])

    def word(self) -> str:
        start = self.pos
        while self.peek().isalnum():
            self.pos += 1
        return self.text[start:self.pos]

    def spec(self) -> GroupSpec:
        self.ws()
        start = self.pos
        if self.text.startswith("prod(", self.pos):
            self.pos += len("prod(")
            left = self.spec()
            self.ws()
            self.expect(",")
            right = self.spec()
            self.ws()
            self.expect(")")
            return Product(left, right)
        kind = self.word()
        if kind == "perm":
            self.expect(":")
            degree = self.uint()
            if degree < 1:
                raise self.error("degree must be positive")
            self.expect(":")
            return PermSpec(degree, self.cycles(degree))
        if kind not in NAMED_KINDS:
            self.pos = start
            raise self.error(f"unknown group kind {kind!r}")
        self.expect(":")
        n = self.uint()
        _check_named(kind, n, start)
        return Named(kind, n)

    def cycles(self, degree: int) -> tuple[Permutation, ...]:
        gens = [self.generator(degree)]
        self.ws()
        while self.peek() == ";":
            self.pos += 1
            self.ws()
            gens.append(self.generator(degree))
            self.ws()
        return tuple(gens)

    def generator(self, degree: int) -> Permutation:
        start = self.pos
        cycles = []
        while self.peek() == "(":
            close = self.text.find(")", self.pos)
            if close < 0:
                raise self.error("unclosed cycle")
            body = self.text[self.pos + 1:close].split()
            if not all(tok.isdigit() for tok in body):
                raise self.error("cycle points must be unsigned integers")
            cycles.append([int(tok) for tok in body])
            self.pos = close + 1
            if self.text[self.pos:].lstrip().startswith("("):
                self.ws()
        if not cycles:
            raise self.error("expected a generator in cycle notation")
        try:
            return Permutation.from_cycles(degree, cycles)
        except ValueError as exc:
            self.pos = start
            raise self.error(str(exc)) from None


def parse_group_spec(text: str) -> GroupSpec:
    parser = _Parser(text)
    spec = parser.spec()
    parser.ws()
    if parser.pos != len(parser.text):
        raise parser.error("trailing input")
    return spec


def canonical(spec: GroupSpec | str) -> str:
    if isinstance(spec, str):
        spec = parse_group_spec(spec)
    return str(spec)


def _cycle(points: list[int], degree: int) -> Permutation:
    return Permutation.from_cycles(degree, [points])


def _named_generators(kind: str, n: int) -> tuple[int, list[Permutation]]:
    if kind == "cyclic":
        return n, ([_cycle(list(range(n)), n)] if n > 1 else [])
    if kind == "dihedral":
        if n == 2:
            return 4, [Permutation.from_cycles(4, [[0, 1], [2, 3]]),
                       Permutation.from_cycles(4, [[0, 2], [1, 3]])]
        return n, [_cycle(list(range(n)), n),
                   Permutation(tuple((-i) % n for i in range(n)))]
    if kind == "sym":
        if n == 1:
            return 1, []
        gens = [_cycle(list(range(n)), n)] if n > 2 else []
        return n, gens + [_cycle([0, 1], n)]
    if kind == "alt":
        if n < 3:
            return max(n, 1), []
        return n, [_cycle([0, 1, i], n) for i in range(2, n)]
    if kind == "psl2":
        p = n
        shift = Permutation(tuple((x + 1) % p for x in range(p)) + (p,))
        # x -> -1/x with infinity stored as point p
        images = [p] + [(-pow(x, -1, p)) % p for x in range(1, p)] + [0]
        return p + 1, [shift, Permutation(tuple(images))]
    raise SpecError(f"unknown group kind {kind!r}")


def make_named(spec: GroupSpec | str, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Build the permutation group described by ``spec``."""
    if isinstance(spec, str):
        spec = parse_group_spec(spec)
    name = str(spec)
    if isinstance(spec, Product):
        a = make_named(spec.left, order_cap)
        b = make_named(spec.right, order_cap)
        g = direct_product(a, b, order_cap=order_cap)
        g.name = name
        return g
    if isinstance(spec, PermSpec):
        return generate_group(spec.degree, spec.generators, order_cap=order_cap, name=name)
    _check_named(spec.kind, spec.n, 0)
    degree, gens = _named_generators(spec.kind, spec.n)
    return generate_group(degree, gens, order_cap=order_cap, name=name)
