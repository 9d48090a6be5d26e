"""Grammatical categories, their semantic-type interpretation, and the
pointwise-lifting structure used for coordination.

Slash direction is purely syntactic: `interp` erases it.  `A / B` seeks a B
on its right; `A \\ B` seeks an A on its left.
"""

from __future__ import annotations

from dataclasses import dataclass

from .semtypes import (
    TRUTH,
    Arrow,
    SemType,
    TypeSubst,
    apply_subst_type,
    arrows,
    free_tyvars,
    unify_types,
)
from .terms import And, App, Lam, Or, Term, Var


class Cat:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class S(Cat):
    def __repr__(self):
        return "S"


@dataclass(frozen=True, slots=True)
class NP(Cat):
    index: SemType


@dataclass(frozen=True, slots=True)
class ADJ(Cat):
    index: SemType


@dataclass(frozen=True, slots=True)
class CN(Cat):
    index: SemType


@dataclass(frozen=True, slots=True)
class PP(Cat):
    prep: str
    index: SemType


@dataclass(frozen=True, slots=True)
class RSlash(Cat):
    """result / arg: seeks `arg` on the right, forms `result`."""

    result: Cat
    arg: Cat


@dataclass(frozen=True, slots=True)
class LSlash(Cat):
    """arg \\ result: seeks `arg` on the left, forms `result`."""

    arg: Cat
    result: Cat


def interp(cat: Cat) -> SemType:
    """The semantic type of a category; both slashes become arrows."""
    match cat:
        case S():
            return TRUTH
        case NP(index) | PP(_, index):
            return index
        case ADJ(index) | CN(index):
            return Arrow(index, TRUTH)
        case RSlash(result, arg):
            return Arrow(interp(arg), interp(result))
        case LSlash(arg, result):
            return Arrow(interp(arg), interp(result))
    raise TypeError(f"not a category: {cat!r}")


@dataclass(frozen=True)
class LiftSpec:
    """How far a category sits above Truth: the argument types to peel off."""

    arg_types: tuple[SemType, ...]

    @property
    def depth(self) -> int:
        return len(self.arg_types)


def prop_like(cat: Cat) -> LiftSpec | None:
    """The lifting spec of a truth-valued category, or None.

    S is the base; ADJ and CN are one level up (predicates); a slash category
    is Prop-like when its result is, adding its argument's semantic type.
    """
    match cat:
        case S():
            return LiftSpec(())
        case ADJ(index) | CN(index):
            return LiftSpec((index,))
        case RSlash(result, arg) | LSlash(arg, result):
            inner = prop_like(result)
            if inner is None:
                return None
            return LiftSpec((interp(arg),) + inner.arg_types)
        case _:
            return None


def lifted_type(spec: LiftSpec) -> SemType:
    return arrows(list(spec.arg_types), TRUTH)


def lift_op(op: str, spec: LiftSpec) -> Term:
    """The binary operation `op` ("and" | "or") lifted pointwise under
    `spec.depth` abstractions: e.g. depth 1 gives \\P. \\Q. \\x. P x /\\ Q x.
    """
    node = {"and": And, "or": Or}[op]
    lifted = lifted_type(spec)
    xs = [Var(f"x{i}", ty) for i, ty in enumerate(spec.arg_types)]
    p, q = Var("P", lifted), Var("Q", lifted)

    def applied(f: Term) -> Term:
        for x in xs:
            f = App(f, x)
        return f

    body: Term = node(applied(p), applied(q))
    for x in reversed(xs):
        body = Lam(x.name, x.ty, body)
    return Lam(p.name, lifted, Lam(q.name, lifted, body))


class CatClash(Exception):
    def __init__(self, a: Cat, b: Cat):
        self.a, self.b = a, b
        super().__init__(f"cannot unify categories {a} and {b}")


def unify_cats(a: Cat, b: Cat, subst: TypeSubst) -> TypeSubst:
    """Extend `subst` so the two categories match constructor-by-constructor,
    unifying indices.  PP prepositions must be equal identifiers.
    """
    if type(a) is not type(b):
        raise CatClash(a, b)
    match a:
        case S():
            return dict(subst)
        case NP(_) | ADJ(_) | CN(_):
            return unify_types(a.index, b.index, subst)
        case PP(prep, index):
            if prep != b.prep:
                raise CatClash(a, b)
            return unify_types(index, b.index, subst)
        case RSlash(result, arg):
            subst = unify_cats(result, b.result, subst)
            return unify_cats(arg, b.arg, subst)
        case LSlash(arg, result):
            subst = unify_cats(arg, b.arg, subst)
            return unify_cats(result, b.result, subst)
    raise TypeError(f"not a category: {a!r}")


def apply_subst_cat(subst: TypeSubst, cat: Cat) -> Cat:
    match cat:
        case S():
            return cat
        case NP(index):
            return NP(apply_subst_type(subst, index))
        case ADJ(index):
            return ADJ(apply_subst_type(subst, index))
        case CN(index):
            return CN(apply_subst_type(subst, index))
        case PP(prep, index):
            return PP(prep, apply_subst_type(subst, index))
        case RSlash(result, arg):
            return RSlash(apply_subst_cat(subst, result), apply_subst_cat(subst, arg))
        case LSlash(arg, result):
            return LSlash(apply_subst_cat(subst, arg), apply_subst_cat(subst, result))
    raise TypeError(f"not a category: {cat!r}")


def cat_tyvars(cat: Cat) -> set[str]:
    match cat:
        case S():
            return set()
        case NP(index) | ADJ(index) | CN(index) | PP(_, index):
            return free_tyvars(index)
        case RSlash(result, arg) | LSlash(arg, result):
            return cat_tyvars(result) | cat_tyvars(arg)
    raise TypeError(f"not a category: {cat!r}")


def cat_is_ground(cat: Cat) -> bool:
    return not cat_tyvars(cat)
