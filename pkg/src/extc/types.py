"""The type language and its lattice: subtyping, precision, fits, join and meet."""
from __future__ import annotations

from dataclasses import dataclass

_KEY_KINDS = ("atom", "boolean", "integer")


@dataclass(frozen=True)
class MapKey:
    """A map key: an atom, a boolean or an integer literal.

    Booleans must not be conflated with the integers 0/1 (Python's bool is an
    int), so the kind tag takes part in identity and ordering.
    """

    kind: str
    value: object

    def __post_init__(self):
        if self.kind not in _KEY_KINDS:
            raise ValueError(f"bad map key kind: {self.kind!r}")

    @classmethod
    def atom(cls, name: str) -> "MapKey":
        return cls("atom", name)

    @classmethod
    def boolean(cls, value: bool) -> "MapKey":
        return cls("boolean", bool(value))

    @classmethod
    def integer(cls, value: int) -> "MapKey":
        return cls("integer", int(value))

    def sort_key(self):
        return (_KEY_KINDS.index(self.kind), str(self.value) if self.kind == "atom" else self.value)

    def __str__(self) -> str:
        if self.kind == "atom":
            return f":{self.value}"
        if self.kind == "boolean":
            return "true" if self.value else "false"
        return str(self.value)


class Type:
    """Base class of all types; concrete variants are frozen dataclasses."""

    __slots__ = ()


@dataclass(frozen=True)
class NoneType(Type):
    def __str__(self) -> str:
        return "none"


@dataclass(frozen=True)
class TermType(Type):
    def __str__(self) -> str:
        return "term"


@dataclass(frozen=True)
class AnyType(Type):
    def __str__(self) -> str:
        return "any"


@dataclass(frozen=True)
class IntegerType(Type):
    def __str__(self) -> str:
        return "integer"


@dataclass(frozen=True)
class FloatType(Type):
    def __str__(self) -> str:
        return "float"


@dataclass(frozen=True)
class BooleanType(Type):
    def __str__(self) -> str:
        return "boolean"


@dataclass(frozen=True)
class StringType(Type):
    def __str__(self) -> str:
        return "string"


@dataclass(frozen=True)
class AtomType(Type):
    def __str__(self) -> str:
        return "atom"


@dataclass(frozen=True)
class AtomLiteralType(Type):
    """A singleton type: the atom `:name` inhabited only by itself."""

    name: str

    def __str__(self) -> str:
        return f":{self.name}"


@dataclass(frozen=True)
class ListType(Type):
    element: Type

    def __str__(self) -> str:
        return f"[{self.element}]"


@dataclass(frozen=True)
class TupleType(Type):
    items: tuple[Type, ...]

    def __str__(self) -> str:
        return "{" + ", ".join(str(t) for t in self.items) + "}"


@dataclass(frozen=True, init=False)
class MapType(Type):
    """A record-like map type; keys are normalized so equality ignores order."""

    entries: tuple[tuple[MapKey, Type], ...]

    def __init__(self, entries):
        if isinstance(entries, dict):
            entries = entries.items()
        pairs = tuple(sorted(entries, key=lambda kv: kv[0].sort_key()))
        seen = set()
        for key, _ in pairs:
            if key in seen:
                raise ValueError(f"duplicate map key {key}")
            seen.add(key)
        object.__setattr__(self, "entries", pairs)

    def keys(self) -> tuple[MapKey, ...]:
        return tuple(k for k, _ in self.entries)

    def get(self, key: MapKey) -> Type | None:
        for k, t in self.entries:
            if k == key:
                return t
        return None

    def __str__(self) -> str:
        return "%{" + ", ".join(f"{k} => {t}" for k, t in self.entries) + "}"


@dataclass(frozen=True)
class FunctionType(Type):
    params: tuple[Type, ...]
    result: Type

    def __str__(self) -> str:
        args = ", ".join(str(t) for t in self.params)
        return f"({args}) -> {self.result}"


NONE = NoneType()
TERM = TermType()
ANY = AnyType()
INTEGER = IntegerType()
FLOAT = FloatType()
BOOLEAN = BooleanType()
STRING = StringType()
ATOM = AtomType()

BASE_TYPE_NAMES = {
    "none": NONE,
    "term": TERM,
    "any": ANY,
    "integer": INTEGER,
    "float": FLOAT,
    "boolean": BOOLEAN,
    "string": STRING,
    "atom": ATOM,
}


def literal_type(lit) -> Type:
    """Type of a literal: numbers, strings and booleans get their base type,
    atoms are singleton types."""
    from . import syntax

    if isinstance(lit, syntax.IntLit):
        return INTEGER
    if isinstance(lit, syntax.FloatLit):
        return FLOAT
    if isinstance(lit, syntax.StringLit):
        return STRING
    if isinstance(lit, syntax.BoolLit):
        return BOOLEAN
    if isinstance(lit, syntax.AtomLit):
        return AtomLiteralType(lit.name)
    raise TypeError(f"not a literal: {lit!r}")


def key_type(key: MapKey) -> Type:
    if key.kind == "atom":
        return AtomLiteralType(key.value)
    if key.kind == "boolean":
        return BOOLEAN
    return INTEGER


def is_subtype(t: Type, u: Type) -> bool:
    """Structural subtyping.

    `none` is the bottom and `term` the top; `any` is below `term` and above
    `none` like every type, but otherwise relates only to itself.
    """
    if t == u:
        return True
    if isinstance(t, NoneType):
        return True
    if isinstance(u, TermType):
        return True
    if isinstance(t, AnyType) or isinstance(u, AnyType):
        return False
    if isinstance(t, IntegerType) and isinstance(u, FloatType):
        return True
    if isinstance(t, AtomLiteralType) and isinstance(u, AtomType):
        return True
    if isinstance(t, ListType) and isinstance(u, ListType):
        return is_subtype(t.element, u.element)
    if isinstance(t, TupleType) and isinstance(u, TupleType):
        return len(t.items) == len(u.items) and all(
            is_subtype(a, b) for a, b in zip(t.items, u.items)
        )
    if isinstance(t, MapType) and isinstance(u, MapType):
        # Width subtyping: the supertype may expose fewer keys.
        for key, value_u in u.entries:
            value_t = t.get(key)
            if value_t is None or not is_subtype(value_t, value_u):
                return False
        return True
    if isinstance(t, FunctionType) and isinstance(u, FunctionType):
        if len(t.params) != len(u.params):
            return False
        return all(is_subtype(up, tp) for up, tp in zip(u.params, t.params)) and is_subtype(
            t.result, u.result
        )
    return False


def is_more_precise(u: Type, t: Type) -> bool:
    """Precision: u refines occurrences of `any` in t. Covariant everywhere."""
    if u == t:
        return True
    if isinstance(t, AnyType):
        return True
    if isinstance(u, ListType) and isinstance(t, ListType):
        return is_more_precise(u.element, t.element)
    if isinstance(u, TupleType) and isinstance(t, TupleType):
        return len(u.items) == len(t.items) and all(
            is_more_precise(a, b) for a, b in zip(u.items, t.items)
        )
    if isinstance(u, MapType) and isinstance(t, MapType):
        if u.keys() != t.keys():
            return False
        return all(is_more_precise(a, b) for (_, a), (_, b) in zip(u.entries, t.entries))
    if isinstance(u, FunctionType) and isinstance(t, FunctionType):
        if len(u.params) != len(t.params):
            return False
        return all(is_more_precise(a, b) for a, b in zip(u.params, t.params)) and is_more_precise(
            u.result, t.result
        )
    return False


def fits(t: Type, u: Type) -> bool:
    """Whether a value of type t is acceptable where u is expected.

    This is the single compatibility relation used at every expected-type
    position: plain subtyping on static types, with `any` accepted in either
    role (upcast into an unknown position, downcast out of one).
    """
    if isinstance(t, (NoneType, AnyType)) or isinstance(u, (TermType, AnyType)):
        return True
    if t == u:
        return True
    if isinstance(t, IntegerType) and isinstance(u, FloatType):
        return True
    if isinstance(t, AtomLiteralType) and isinstance(u, AtomType):
        return True
    if isinstance(t, ListType) and isinstance(u, ListType):
        return fits(t.element, u.element)
    if isinstance(t, TupleType) and isinstance(u, TupleType):
        return len(t.items) == len(u.items) and all(
            fits(a, b) for a, b in zip(t.items, u.items)
        )
    if isinstance(t, MapType) and isinstance(u, MapType):
        for key, value_u in u.entries:
            value_t = t.get(key)
            if value_t is None or not fits(value_t, value_u):
                return False
        return True
    if isinstance(t, FunctionType) and isinstance(u, FunctionType):
        if len(t.params) != len(u.params):
            return False
        return all(fits(up, tp) for up, tp in zip(u.params, t.params)) and fits(
            t.result, u.result
        )
    return False


def join(t: Type, u: Type) -> Type:
    """Least upper bound under subtyping; `any` joins by materializing to the
    other side, so a gradual branch never widens a static one."""
    if t == u:
        return t
    if isinstance(t, NoneType):
        return u
    if isinstance(u, NoneType):
        return t
    if isinstance(t, TermType) or isinstance(u, TermType):
        return TERM
    if isinstance(t, AnyType):
        return u
    if isinstance(u, AnyType):
        return t
    if isinstance(t, (IntegerType, FloatType)) and isinstance(u, (IntegerType, FloatType)):
        return FLOAT
    if isinstance(t, (AtomType, AtomLiteralType)) and isinstance(u, (AtomType, AtomLiteralType)):
        return ATOM
    if isinstance(t, ListType) and isinstance(u, ListType):
        return ListType(join(t.element, u.element))
    if isinstance(t, TupleType) and isinstance(u, TupleType) and len(t.items) == len(u.items):
        return TupleType(tuple(join(a, b) for a, b in zip(t.items, u.items)))
    if isinstance(t, MapType) and isinstance(u, MapType):
        shared = [k for k in t.keys() if u.get(k) is not None]
        return MapType([(k, join(t.get(k), u.get(k))) for k in shared])
    if isinstance(t, FunctionType) and isinstance(u, FunctionType) and len(t.params) == len(u.params):
        params = tuple(meet(a, b) for a, b in zip(t.params, u.params))
        return FunctionType(params, join(t.result, u.result))
    return TERM


def meet(t: Type, u: Type) -> Type:
    """Greatest lower bound under subtyping; dual of join."""
    if t == u:
        return t
    if isinstance(t, TermType):
        return u
    if isinstance(u, TermType):
        return t
    if isinstance(t, NoneType) or isinstance(u, NoneType):
        return NONE
    if isinstance(t, AnyType):
        return u
    if isinstance(u, AnyType):
        return t
    if isinstance(t, (IntegerType, FloatType)) and isinstance(u, (IntegerType, FloatType)):
        return INTEGER
    if isinstance(t, AtomType) and isinstance(u, AtomLiteralType):
        return u
    if isinstance(t, AtomLiteralType) and isinstance(u, AtomType):
        return t
    if isinstance(t, ListType) and isinstance(u, ListType):
        return ListType(meet(t.element, u.element))
    if isinstance(t, TupleType) and isinstance(u, TupleType) and len(t.items) == len(u.items):
        return TupleType(tuple(meet(a, b) for a, b in zip(t.items, u.items)))
    if isinstance(t, MapType) and isinstance(u, MapType):
        entries = []
        for key, value in t.entries:
            other = u.get(key)
            entries.append((key, value if other is None else meet(value, other)))
        for key, value in u.entries:
            if t.get(key) is None:
                entries.append((key, value))
        return MapType(entries)
    if isinstance(t, FunctionType) and isinstance(u, FunctionType) and len(t.params) == len(u.params):
        params = tuple(join(a, b) for a, b in zip(t.params, u.params))
        return FunctionType(params, meet(t.result, u.result))
    return NONE
