"""Semantic types of the target logic, signatures, and first-order type unification.

Types are immutable and hashable.  `Truth` is the proposition type; `Base`
names come from a declared signature; `TyVar` only appears inside lexicon
schemes and intermediate parse states, never in a finished sentence meaning.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class SemType:
    """Base class for semantic types."""

    __slots__ = ()

    def is_ground(self) -> bool:
        return not free_tyvars(self)


@dataclass(frozen=True, slots=True)
class Truth(SemType):
    def __repr__(self):
        return "Truth"


@dataclass(frozen=True, slots=True)
class Base(SemType):
    name: str

    def __repr__(self):
        return f"Base({self.name!r})"


@dataclass(frozen=True, slots=True)
class Arrow(SemType):
    dom: SemType
    cod: SemType


@dataclass(frozen=True, slots=True)
class Prod(SemType):
    left: SemType
    right: SemType


@dataclass(frozen=True, slots=True)
class TyVar(SemType):
    name: str

    def __repr__(self):
        return f"TyVar({self.name!r})"


TRUTH = Truth()


def arrows(doms: list[SemType], cod: SemType) -> SemType:
    """Right-nested arrow type doms[0] -> ... -> doms[-1] -> cod."""
    ty = cod
    for d in reversed(doms):
        ty = Arrow(d, ty)
    return ty


def free_tyvars(ty: SemType) -> set[str]:
    match ty:
        case TyVar(name):
            return {name}
        case Arrow(dom, cod):
            return free_tyvars(dom) | free_tyvars(cod)
        case Prod(left, right):
            return free_tyvars(left) | free_tyvars(right)
        case _:
            return set()


class UnifyError(Exception):
    """Base class for type-unification failures."""


class Clash(UnifyError):
    def __init__(self, a: SemType, b: SemType):
        self.a, self.b = a, b
        super().__init__(f"cannot unify {a} with {b}")


class OccursCheck(UnifyError):
    def __init__(self, var: str, ty: SemType):
        self.var, self.ty = var, ty
        super().__init__(f"occurs check: {var} in {ty}")


# A TypeSubst is a plain dict mapping TyVar names to types.  All exported
# operations keep it idempotent: no TyVar in the range maps further.
TypeSubst = dict


def apply_subst_type(subst: TypeSubst, ty: SemType) -> SemType:
    match ty:
        case TyVar(name):
            return subst.get(name, ty)
        case Arrow(dom, cod):
            return Arrow(apply_subst_type(subst, dom), apply_subst_type(subst, cod))
        case Prod(left, right):
            return Prod(apply_subst_type(subst, left), apply_subst_type(subst, right))
        case _:
            return ty


def unify_types(a: SemType, b: SemType, subst: TypeSubst) -> TypeSubst:
    """Most general extension of `subst` equating `a` and `b`.

    First-order unification with occurs check.  Raises Clash or OccursCheck;
    the input dict is never mutated.
    """
    out = dict(subst)
    _unify(apply_subst_type(out, a), apply_subst_type(out, b), out)
    return out


def _bind(name: str, ty: SemType, subst: TypeSubst) -> None:
    if isinstance(ty, TyVar) and ty.name == name:
        return
    if name in free_tyvars(ty):
        raise OccursCheck(name, ty)
    # Keep the substitution idempotent: fold the new binding into every range
    # entry before recording it.
    one = {name: ty}
    for k in subst:
        subst[k] = apply_subst_type(one, subst[k])
    subst[name] = ty


def _unify(a: SemType, b: SemType, subst: TypeSubst) -> None:
    a = apply_subst_type(subst, a)
    b = apply_subst_type(subst, b)
    if a == b:
        return
    if isinstance(a, TyVar):
        _bind(a.name, b, subst)
        return
    if isinstance(b, TyVar):
        _bind(b.name, a, subst)
        return
    if isinstance(a, Arrow) and isinstance(b, Arrow):
        _unify(a.dom, b.dom, subst)
        _unify(a.cod, b.cod, subst)
        return
    if isinstance(a, Prod) and isinstance(b, Prod):
        _unify(a.left, b.left, subst)
        _unify(a.right, b.right, subst)
        return
    raise Clash(a, b)


class SignatureConflict(Exception):
    def __init__(self, name: str, old, new):
        self.name = name
        super().__init__(f"conflicting declarations for {name!r}: {old} vs {new}")


@dataclass
class Signature:
    """Declared base-type names and typed constants of the target logic."""

    types: set[str] = field(default_factory=set)
    constants: dict[str, SemType] = field(default_factory=dict)

    def declare_type(self, name: str) -> None:
        self.types.add(name)

    def declare_constant(self, name: str, ty: SemType) -> None:
        old = self.constants.get(name)
        if old is not None and old != ty:
            raise SignatureConflict(name, old, ty)
        self.constants[name] = ty

    def merge(self, other: "Signature") -> "Signature":
        merged = Signature(set(self.types), dict(self.constants))
        for name in other.types:
            merged.declare_type(name)
        for name, ty in other.constants.items():
            merged.declare_constant(name, ty)
        return merged

    def resolves(self, name: str, ty: SemType) -> bool:
        """True if `name : ty` is this signature's constant or a nat numeral."""
        if name.isdigit():
            return ty == Base("nat")
        return self.constants.get(name) == ty
