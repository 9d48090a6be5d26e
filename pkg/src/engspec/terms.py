"""Typed lambda terms: type checking, normalization, simplification, alpha-equivalence.

The term language is simply typed with declared constants.  Quantifiers and
connectives are primitive nodes so printed forms match the usual theorem
statement shapes.  Binder names carry no semantic weight; `alpha_eq` is the
identity of record.

All well-typed terms strongly normalize (simply-typed discipline), so
`beta_normalize` is total.  Pairs reduce by projection: fst (a, b) --> a.
"""

from __future__ import annotations

from dataclasses import dataclass

from .semtypes import (
    TRUTH,
    Arrow,
    Base,
    Prod,
    SemType,
    Signature,
    TypeSubst,
    Truth,
    TyVar,
    apply_subst_type,
)


class Term:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Var(Term):
    name: str
    ty: SemType


@dataclass(frozen=True, slots=True)
class Const(Term):
    name: str
    ty: SemType


@dataclass(frozen=True, slots=True)
class Lam(Term):
    var: str
    var_ty: SemType
    body: Term


@dataclass(frozen=True, slots=True)
class App(Term):
    fn: Term
    arg: Term


@dataclass(frozen=True, slots=True)
class ForAll(Term):
    var: str
    var_ty: SemType
    body: Term


@dataclass(frozen=True, slots=True)
class Exists(Term):
    var: str
    var_ty: SemType
    body: Term


@dataclass(frozen=True, slots=True)
class And(Term):
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Or(Term):
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Implies(Term):
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Not(Term):
    body: Term


@dataclass(frozen=True, slots=True)
class Eq(Term):
    ty: SemType
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class TruthLit(Term):
    value: bool


@dataclass(frozen=True, slots=True)
class Pair(Term):
    left: Term
    right: Term


@dataclass(frozen=True, slots=True)
class Fst(Term):
    body: Term


@dataclass(frozen=True, slots=True)
class Snd(Term):
    body: Term


TRUE = TruthLit(True)
FALSE = TruthLit(False)

_BINDERS = (Lam, ForAll, Exists)
_CONNECTIVES = (And, Or, Implies)


class IllTyped(Exception):
    """Raised by type_of; pinpoints the first failing subterm."""

    def __init__(self, path: tuple[str, ...], expected, found):
        self.path = path
        self.expected = expected
        self.found = found
        at = ".".join(path) if path else "<root>"
        super().__init__(f"ill-typed at {at}: expected {expected}, found {found}")


def type_of(term: Term, sig: Signature | None = None,
            env: dict[str, SemType] | None = None,
            _path: tuple[str, ...] = ()) -> SemType:
    """The unique type of `term`, or IllTyped.

    Free variables must carry their type annotations.  When `sig` is given,
    every constant must resolve in it with the exact recorded type (decimal
    numerals are implicitly nat).
    """
    env = env or {}

    def go(t: Term, env: dict[str, SemType], path: tuple[str, ...]) -> SemType:
        match t:
            case Var(name, ty):
                bound = env.get(name)
                if bound is not None and bound != ty:
                    raise IllTyped(path, bound, ty)
                return ty
            case Const(name, ty):
                if sig is not None and not sig.resolves(name, ty):
                    raise IllTyped(path, f"declared constant {name!r}", ty)
                return ty
            case Lam(var, var_ty, body):
                return Arrow(var_ty, go(body, {**env, var: var_ty}, path + ("body",)))
            case App(fn, arg):
                fn_ty = go(fn, env, path + ("fn",))
                arg_ty = go(arg, env, path + ("arg",))
                if not isinstance(fn_ty, Arrow):
                    raise IllTyped(path + ("fn",), "a function type", fn_ty)
                if fn_ty.dom != arg_ty:
                    raise IllTyped(path + ("arg",), fn_ty.dom, arg_ty)
                return fn_ty.cod
            case ForAll(var, var_ty, body) | Exists(var, var_ty, body):
                body_ty = go(body, {**env, var: var_ty}, path + ("body",))
                if body_ty != TRUTH:
                    raise IllTyped(path + ("body",), TRUTH, body_ty)
                return TRUTH
            case And(l, r) | Or(l, r) | Implies(l, r):
                for side, sub in (("left", l), ("right", r)):
                    sub_ty = go(sub, env, path + (side,))
                    if sub_ty != TRUTH:
                        raise IllTyped(path + (side,), TRUTH, sub_ty)
                return TRUTH
            case Not(body):
                body_ty = go(body, env, path + ("body",))
                if body_ty != TRUTH:
                    raise IllTyped(path + ("body",), TRUTH, body_ty)
                return TRUTH
            case Eq(ty, l, r):
                for side, sub in (("left", l), ("right", r)):
                    sub_ty = go(sub, env, path + (side,))
                    if sub_ty != ty:
                        raise IllTyped(path + (side,), ty, sub_ty)
                return TRUTH
            case TruthLit(_):
                return TRUTH
            case Pair(l, r):
                return Prod(go(l, env, path + ("left",)),
                            go(r, env, path + ("right",)))
            case Fst(body):
                body_ty = go(body, env, path + ("body",))
                if not isinstance(body_ty, Prod):
                    raise IllTyped(path + ("body",), "a product type", body_ty)
                return body_ty.left
            case Snd(body):
                body_ty = go(body, env, path + ("body",))
                if not isinstance(body_ty, Prod):
                    raise IllTyped(path + ("body",), "a product type", body_ty)
                return body_ty.right
        raise IllTyped(path, "a term", t)

    return go(term, env, _path)


def free_vars(term: Term) -> set[str]:
    match term:
        case Var(name, _):
            return {name}
        case Const(_, _) | TruthLit(_):
            return set()
        case Lam(var, _, body) | ForAll(var, _, body) | Exists(var, _, body):
            return free_vars(body) - {var}
        case App(fn, arg):
            return free_vars(fn) | free_vars(arg)
        case And(l, r) | Or(l, r) | Implies(l, r) | Pair(l, r):
            return free_vars(l) | free_vars(r)
        case Eq(_, l, r):
            return free_vars(l) | free_vars(r)
        case Not(body) | Fst(body) | Snd(body):
            return free_vars(body)
    raise TypeError(f"not a term: {term!r}")


def term_tyvars(term: Term) -> set[str]:
    """All TyVar names occurring in any type annotation inside `term`."""
    from .semtypes import free_tyvars

    out: set[str] = set()

    def go(t: Term) -> None:
        match t:
            case Var(_, ty) | Const(_, ty):
                out.update(free_tyvars(ty))
            case Lam(_, ty, body) | ForAll(_, ty, body) | Exists(_, ty, body):
                out.update(free_tyvars(ty))
                go(body)
            case App(fn, arg):
                go(fn), go(arg)
            case And(l, r) | Or(l, r) | Implies(l, r) | Pair(l, r):
                go(l), go(r)
            case Eq(ty, l, r):
                out.update(free_tyvars(ty))
                go(l), go(r)
            case Not(body) | Fst(body) | Snd(body):
                go(body)
            case TruthLit(_):
                pass

    go(term)
    return out


def apply_subst_term(subst: TypeSubst, term: Term) -> Term:
    """Replace bound TyVars inside every type annotation of `term`."""
    ap = lambda ty: apply_subst_type(subst, ty)
    match term:
        case Var(name, ty):
            return Var(name, ap(ty))
        case Const(name, ty):
            return Const(name, ap(ty))
        case Lam(var, ty, body):
            return Lam(var, ap(ty), apply_subst_term(subst, body))
        case ForAll(var, ty, body):
            return ForAll(var, ap(ty), apply_subst_term(subst, body))
        case Exists(var, ty, body):
            return Exists(var, ap(ty), apply_subst_term(subst, body))
        case App(fn, arg):
            return App(apply_subst_term(subst, fn), apply_subst_term(subst, arg))
        case And(l, r):
            return And(apply_subst_term(subst, l), apply_subst_term(subst, r))
        case Or(l, r):
            return Or(apply_subst_term(subst, l), apply_subst_term(subst, r))
        case Implies(l, r):
            return Implies(apply_subst_term(subst, l), apply_subst_term(subst, r))
        case Not(body):
            return Not(apply_subst_term(subst, body))
        case Eq(ty, l, r):
            return Eq(ap(ty), apply_subst_term(subst, l), apply_subst_term(subst, r))
        case TruthLit(_):
            return term
        case Pair(l, r):
            return Pair(apply_subst_term(subst, l), apply_subst_term(subst, r))
        case Fst(body):
            return Fst(apply_subst_term(subst, body))
        case Snd(body):
            return Snd(apply_subst_term(subst, body))
    raise TypeError(f"not a term: {term!r}")


def _fresh_name(base: str, avoid: set[str]) -> str:
    if base not in avoid:
        return base
    i = 1
    while f"{base}{i}" in avoid:
        i += 1
    return f"{base}{i}"


def rebind(term, var: str, var_ty: SemType, body: Term):
    """Rebuild a binder node of the same kind."""
    return type(term)(var, var_ty, body)


def substitute(body: Term, var: str, value: Term) -> Term:
    """Capture-avoiding substitution body[var := value]."""
    value_fvs = free_vars(value)

    def go(t: Term) -> Term:
        match t:
            case Var(name, _):
                return value if name == var else t
            case Const(_, _) | TruthLit(_):
                return t
            case Lam(v, ty, b) | ForAll(v, ty, b) | Exists(v, ty, b):
                if v == var:
                    return t
                if v in value_fvs and var in free_vars(b):
                    fresh = _fresh_name(v, value_fvs | free_vars(b) | {var})
                    b = substitute(b, v, Var(fresh, ty))
                    v = fresh
                return rebind(t, v, ty, go(b))
            case App(fn, arg):
                return App(go(fn), go(arg))
            case And(l, r):
                return And(go(l), go(r))
            case Or(l, r):
                return Or(go(l), go(r))
            case Implies(l, r):
                return Implies(go(l), go(r))
            case Not(b):
                return Not(go(b))
            case Eq(ty, l, r):
                return Eq(ty, go(l), go(r))
            case Pair(l, r):
                return Pair(go(l), go(r))
            case Fst(b):
                return Fst(go(b))
            case Snd(b):
                return Snd(go(b))
        raise TypeError(f"not a term: {t!r}")

    return go(body)


def _map_children(t: Term, f) -> Term:
    match t:
        case Var(_, _) | Const(_, _) | TruthLit(_):
            return t
        case Lam(v, ty, b) | ForAll(v, ty, b) | Exists(v, ty, b):
            return rebind(t, v, ty, f(b))
        case App(fn, arg):
            return App(f(fn), f(arg))
        case And(l, r):
            return And(f(l), f(r))
        case Or(l, r):
            return Or(f(l), f(r))
        case Implies(l, r):
            return Implies(f(l), f(r))
        case Not(b):
            return Not(f(b))
        case Eq(ty, l, r):
            return Eq(ty, f(l), f(r))
        case Pair(l, r):
            return Pair(f(l), f(r))
        case Fst(b):
            return Fst(f(b))
        case Snd(b):
            return Snd(f(b))
    raise TypeError(f"not a term: {t!r}")


def _contract(t: Term, eta: bool):
    """One-step contraction at the root, or None."""
    match t:
        case App(Lam(var, _, body), arg):
            return substitute(body, var, arg)
        case Fst(Pair(l, _)):
            return l
        case Snd(Pair(_, r)):
            return r
        case Lam(var, _, App(fn, Var(name, _))) if eta and name == var and var not in free_vars(fn):
            return fn
    return None


def _step_outermost(t: Term, eta: bool):
    red = _contract(t, eta)
    if red is not None:
        return red
    match t:
        case Var(_, _) | Const(_, _) | TruthLit(_):
            return None
        case Lam(v, ty, b) | ForAll(v, ty, b) | Exists(v, ty, b):
            nb = _step_outermost(b, eta)
            return None if nb is None else rebind(t, v, ty, nb)
        case _:
            # Left-to-right over the remaining binary/unary nodes.
            fields = t.__slots__
            vals = [getattr(t, f) for f in fields]
            for i, v in enumerate(vals):
                if isinstance(v, Term):
                    nv = _step_outermost(v, eta)
                    if nv is not None:
                        vals[i] = nv
                        return type(t)(*vals)
            return None


def beta_normalize(term: Term, eta: bool = False) -> Term:
    """Full beta (and pair-projection) normal form via leftmost-outermost
    reduction.  Eta-reduction only when `eta` is set; it changes printed forms.
    """
    while True:
        stepped = _step_outermost(term, eta)
        if stepped is None:
            return term
        term = stepped


def beta_normalize_innermost(term: Term, eta: bool = False) -> Term:
    """Applicative-order normalization; used to cross-check confluence."""

    def go(t: Term) -> Term:
        t = _map_children(t, go)
        red = _contract(t, eta)
        while red is not None:
            t = go(red)
            red = _contract(t, eta)
        return t

    return go(term)


def simplify(term: Term) -> Term:
    """Eliminate trivial True guards, to fixpoint.

    Exactly three rules: True -> P ==> P; True /\\ P ==> P; P /\\ True ==> P.
    Input should be beta-normal; the result stays beta-normal and keeps its
    type (the rules only drop Truth-typed conjuncts/antecedents).
    """

    def go(t: Term) -> Term:
        t = _map_children(t, go)
        match t:
            case Implies(TruthLit(True), p):
                return go(p)
            case And(TruthLit(True), p):
                return go(p)
            case And(p, TruthLit(True)):
                return go(p)
        return t

    return go(term)


def alpha_eq(a: Term, b: Term) -> bool:
    """Equality up to consistent bound-variable renaming."""

    def go(x: Term, y: Term, ex: dict[str, int], ey: dict[str, int], depth: int) -> bool:
        if type(x) is not type(y):
            return False
        match x:
            case Var(name, ty):
                dx, dy = ex.get(name), ey.get(y.name)
                if dx is None and dy is None:
                    return name == y.name and ty == y.ty
                return dx == dy
            case Const(name, ty):
                return name == y.name and ty == y.ty
            case Lam(v, ty, body) | ForAll(v, ty, body) | Exists(v, ty, body):
                if ty != y.var_ty:
                    return False
                return go(body, y.body,
                          {**ex, v: depth}, {**ey, y.var: depth}, depth + 1)
            case App(fn, arg):
                return go(fn, y.fn, ex, ey, depth) and go(arg, y.arg, ex, ey, depth)
            case And(l, r) | Or(l, r) | Implies(l, r) | Pair(l, r):
                return go(l, y.left, ex, ey, depth) and go(r, y.right, ex, ey, depth)
            case Eq(ty, l, r):
                return ty == y.ty and go(l, y.left, ex, ey, depth) and go(r, y.right, ex, ey, depth)
            case Not(body) | Fst(body) | Snd(body):
                return go(body, y.body, ex, ey, depth)
            case TruthLit(v):
                return v == y.value
        raise TypeError(f"not a term: {x!r}")

    return go(a, b, {}, {}, 0)


def canonical_key(term: Term) -> str:
    """A string equal for alpha-equivalent terms; used for hashing/dedup."""

    def ty_key(ty: SemType) -> str:
        match ty:
            case Truth():
                return "P"
            case Base(name):
                return f"b:{name}"
            case TyVar(name):
                return f"t:{name}"
            case Arrow(d, c):
                return f"({ty_key(d)}>{ty_key(c)})"
            case Prod(l, r):
                return f"({ty_key(l)}*{ty_key(r)})"
        raise TypeError(f"not a type: {ty!r}")

    def go(t: Term, env: dict[str, int], depth: int) -> str:
        match t:
            case Var(name, ty):
                if name in env:
                    return f"#{env[name]}"
                return f"v:{name}:{ty_key(ty)}"
            case Const(name, ty):
                return f"c:{name}:{ty_key(ty)}"
            case Lam(v, ty, body):
                return f"(L{ty_key(ty)}.{go(body, {**env, v: depth}, depth + 1)})"
            case ForAll(v, ty, body):
                return f"(A{ty_key(ty)}.{go(body, {**env, v: depth}, depth + 1)})"
            case Exists(v, ty, body):
                return f"(E{ty_key(ty)}.{go(body, {**env, v: depth}, depth + 1)})"
            case App(fn, arg):
                return f"({go(fn, env, depth)} {go(arg, env, depth)})"
            case And(l, r):
                return f"(&{go(l, env, depth)}{go(r, env, depth)})"
            case Or(l, r):
                return f"(|{go(l, env, depth)}{go(r, env, depth)})"
            case Implies(l, r):
                return f"(>{go(l, env, depth)}{go(r, env, depth)})"
            case Not(body):
                return f"(~{go(body, env, depth)})"
            case Eq(ty, l, r):
                return f"(={ty_key(ty)}:{go(l, env, depth)}{go(r, env, depth)})"
            case TruthLit(v):
                return "T" if v else "F"
            case Pair(l, r):
                return f"(,{go(l, env, depth)}{go(r, env, depth)})"
            case Fst(body):
                return f"(fst {go(body, env, depth)})"
            case Snd(body):
                return f"(snd {go(body, env, depth)})"
        raise TypeError(f"not a term: {t!r}")

    return go(term, {}, 0)
