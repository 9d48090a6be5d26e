"""Surface syntax for types, categories, and terms, plus the matching printers.

This is the single text format used by lexicon files, corpus files,
certificates, and the plain emitter:

  types       nat, nat -> nat, (nat -> Prop) -> Prop, nat * nat, Prop
  categories  S, NP<nat>, PP<of, nat>, (NP<T> \\ S) / ADJ<T>   (slashes left-assoc)
  terms       \\a. \\n. (a n), forall x:nat. (even x) -> (odd x),
              exists y:nat. y = 4, p /\\ q, p \\/ q, ~p, (a, b), fst p, true

Operator precedence in terms, loosest to tightest:
  binders (bodies extend right), ->, \\/, /\\, ~, =, application.

Quantifier binders require a type annotation.  Lambda binders may omit it
only where an expected type is known (lexicon entries are checked against
the interpretation of their category).
"""

from __future__ import annotations

import re

from . import grammar as G
from . import terms as T
from .semtypes import TRUTH, Arrow, Base, Prod, SemType, Signature, Truth, TyVar


class SurfaceError(Exception):
    """Syntax or elaboration error in surface text."""

    def __init__(self, message: str, source: str | None = None, pos: int | None = None):
        self.source = source
        self.pos = pos
        if source is not None and pos is not None:
            message = f"{message} (at {pos!r} in {source!r})"
        super().__init__(message)


_TOKEN_RE = {
    "term": re.compile(
        r"\s*(?:(?P<op>->|/\\|\\/|[()=~\\.:,])|(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*))"
    ),
    "type": re.compile(
        r"\s*(?:(?P<op>->|[()*])|(?P<ident>[A-Za-z_][A-Za-z0-9_]*))"
    ),
    "cat": re.compile(
        r"\s*(?:(?P<op>[()<>,/\\])|(?P<typetok>->|\*)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*))"
    ),
}


def _lex(src: str, mode: str) -> list[tuple[str, str, int]]:
    """Tokens as (kind, text, position); kind is 'op', 'num' or 'ident'."""
    pattern = _TOKEN_RE[mode]
    out = []
    pos = 0
    while pos < len(src):
        m = pattern.match(src, pos)
        if m is None:
            if src[pos:].strip() == "":
                break
            raise SurfaceError("unexpected character", src, pos)
        kind = m.lastgroup
        text = m.group(kind)
        if kind == "typetok":
            kind = "op"
        out.append((kind, text, m.start(kind)))
        pos = m.end()
    out.append(("eof", "", len(src)))
    return out


class _Cursor:
    def __init__(self, tokens, src):
        self.tokens = tokens
        self.src = src
        self.i = 0

    def peek(self) -> tuple[str, str]:
        kind, text, _ = self.tokens[self.i]
        return kind, text

    def next(self) -> tuple[str, str]:
        kind, text, _ = self.tokens[self.i]
        if kind != "eof":
            self.i += 1
        return kind, text

    def expect(self, text: str) -> None:
        kind, got, pos = self.tokens[self.i]
        if got != text or kind == "eof":
            raise SurfaceError(f"expected {text!r}, got {got or 'end of input'!r}", self.src, pos)
        self.i += 1

    def at(self, text: str) -> bool:
        return self.peek()[1] == text and self.peek()[0] != "eof"

    def done(self) -> bool:
        return self.peek()[0] == "eof"

    def fail(self, msg: str):
        raise SurfaceError(msg, self.src, self.tokens[self.i][2])


# ---------------------------------------------------------------------------
# Types


def parse_type(src: str, tyvars: set[str] = frozenset(), types: set[str] = frozenset(),
               allow_hole: bool = False) -> SemType:
    cur = _Cursor(_lex(src, "type"), src)
    ty = _parse_type(cur, tyvars, types, allow_hole)
    if not cur.done():
        cur.fail("trailing input after type")
    return ty


def _parse_type(cur: _Cursor, tyvars, types, allow_hole) -> SemType:
    left = _parse_prod(cur, tyvars, types, allow_hole)
    if cur.at("->"):
        cur.next()
        return Arrow(left, _parse_type(cur, tyvars, types, allow_hole))
    return left


def _parse_prod(cur: _Cursor, tyvars, types, allow_hole) -> SemType:
    left = _parse_type_atom(cur, tyvars, types, allow_hole)
    while cur.at("*"):
        cur.next()
        left = Prod(left, _parse_type_atom(cur, tyvars, types, allow_hole))
    return left


def _parse_type_atom(cur: _Cursor, tyvars, types, allow_hole) -> SemType:
    kind, text = cur.peek()
    if text == "(":
        cur.next()
        ty = _parse_type(cur, tyvars, types, allow_hole)
        cur.expect(")")
        return ty
    if kind != "ident":
        cur.fail("expected a type")
    cur.next()
    if text == "Prop":
        return TRUTH
    if text in tyvars or (allow_hole and text == "_"):
        return TyVar(text)
    if text in types:
        return Base(text)
    cur.fail(f"unknown type name {text!r} (not a declared type or type variable)")


def print_type(ty: SemType, prec: int = 0) -> str:
    match ty:
        case Truth():
            return "Prop"
        case Base(name) | TyVar(name):
            return name
        case Arrow(dom, cod):
            s = f"{print_type(dom, 2)} -> {print_type(cod, 1)}"
            return f"({s})" if prec > 1 else s
        case Prod(left, right):
            s = f"{print_type(left, 2)} * {print_type(right, 3)}"
            return f"({s})" if prec > 2 else s
    raise TypeError(f"not a type: {ty!r}")


# ---------------------------------------------------------------------------
# Categories

_CAT_HEADS = ("NP", "ADJ", "CN")

# Macros map a name to a category template with TyVar('_') as the index hole.
CatMacros = dict


def parse_cat(src: str, tyvars: set[str] = frozenset(), types: set[str] = frozenset(),
              macros: CatMacros | None = None, allow_hole: bool = False) -> G.Cat:
    cur = _Cursor(_lex(src, "cat"), src)
    cat = _parse_cat(cur, tyvars, types, macros or {}, allow_hole)
    if not cur.done():
        cur.fail("trailing input after category")
    return cat


def _parse_cat(cur: _Cursor, tyvars, types, macros, allow_hole) -> G.Cat:
    left = _parse_cat_atom(cur, tyvars, types, macros, allow_hole)
    while cur.at("/") or cur.at("\\"):
        _, op = cur.next()
        right = _parse_cat_atom(cur, tyvars, types, macros, allow_hole)
        left = G.RSlash(left, right) if op == "/" else G.LSlash(left, right)
    return left


def _parse_cat_index(cur: _Cursor, tyvars, types, allow_hole) -> SemType:
    # Re-lex the index span as a type: collect tokens until the matching '>'.
    depth = 0
    parts = []
    while True:
        kind, text = cur.peek()
        if kind == "eof":
            cur.fail("unterminated category index")
        if text == "<":
            depth += 1
        elif text == ">":
            if depth == 0:
                break
            depth -= 1
        cur.next()
        parts.append(text)
    return parse_type(" ".join(parts), tyvars, types, allow_hole)


def _parse_cat_atom(cur: _Cursor, tyvars, types, macros, allow_hole) -> G.Cat:
    kind, text = cur.peek()
    if text == "(":
        cur.next()
        cat = _parse_cat(cur, tyvars, types, macros, allow_hole)
        cur.expect(")")
        return cat
    if kind != "ident":
        cur.fail("expected a category")
    cur.next()
    if text == "S":
        return G.S()
    if text in _CAT_HEADS:
        cur.expect("<")
        index = _parse_cat_index(cur, tyvars, types, allow_hole)
        cur.expect(">")
        return {"NP": G.NP, "ADJ": G.ADJ, "CN": G.CN}[text](index)
    if text == "PP":
        cur.expect("<")
        pkind, prep = cur.next()
        if pkind != "ident":
            cur.fail("expected a preposition identifier")
        cur.expect(",")
        index = _parse_cat_index(cur, tyvars, types, allow_hole)
        cur.expect(">")
        return G.PP(prep, index)
    if text in macros:
        cur.expect("<")
        index = _parse_cat_index(cur, tyvars, types, allow_hole)
        cur.expect(">")
        return G.apply_subst_cat({"_": index}, macros[text])
    cur.fail(f"unknown category head {text!r}")


def print_cat(cat: G.Cat, prec: int = 0) -> str:
    match cat:
        case G.S():
            return "S"
        case G.NP(index):
            return f"NP<{print_type(index)}>"
        case G.ADJ(index):
            return f"ADJ<{print_type(index)}>"
        case G.CN(index):
            return f"CN<{print_type(index)}>"
        case G.PP(prep, index):
            return f"PP<{prep}, {print_type(index)}>"
        case G.RSlash(result, arg):
            s = f"{print_cat(result, 1)} / {print_cat(arg, 2)}"
            return f"({s})" if prec > 1 else s
        case G.LSlash(arg, result):
            s = f"{print_cat(arg, 1)} \\ {print_cat(result, 2)}"
            return f"({s})" if prec > 1 else s
    raise TypeError(f"not a category: {cat!r}")


# ---------------------------------------------------------------------------
# Terms

_TERM_KEYWORDS = {"forall", "exists", "true", "false", "fst", "snd"}


def parse_term(src: str, tyvars: set[str] = frozenset(), types: set[str] = frozenset()) -> T.Term:
    """Parse without elaboration; lambda binder types may be None."""
    cur = _Cursor(_lex(src, "term"), src)
    t = _parse_term(cur, tyvars, types)
    if not cur.done():
        cur.fail("trailing input after term")
    return t


def _at_binder(cur: _Cursor) -> bool:
    _, text = cur.peek()
    return text in ("\\", "forall", "exists")


def _parse_term(cur: _Cursor, tyvars, types) -> T.Term:
    if cur.at("\\"):
        cur.next()
        kind, name = cur.next()
        if kind != "ident":
            cur.fail("expected a binder name")
        ty = None
        if cur.at(":"):
            cur.next()
            ty = _parse_embedded_type(cur, tyvars, types)
        cur.expect(".")
        return T.Lam(name, ty, _parse_term(cur, tyvars, types))
    if cur.at("forall") or cur.at("exists"):
        _, word = cur.next()
        kind, name = cur.next()
        if kind != "ident":
            cur.fail("expected a binder name")
        cur.expect(":")
        ty = _parse_embedded_type(cur, tyvars, types)
        cur.expect(".")
        body = _parse_term(cur, tyvars, types)
        node = T.ForAll if word == "forall" else T.Exists
        return node(name, ty, body)
    return _parse_implies(cur, tyvars, types)


def _parse_embedded_type(cur: _Cursor, tyvars, types) -> SemType:
    # Types inside terms stop at '.' (end of a binder annotation).
    parts = []
    depth = 0
    while True:
        kind, text = cur.peek()
        if kind == "eof" or (depth == 0 and text == "."):
            break
        if text == "(":
            depth += 1
        elif text == ")":
            if depth == 0:
                break
            depth -= 1
        cur.next()
        parts.append(text)
    if not parts:
        cur.fail("expected a type annotation")
    return parse_type(" ".join(parts), tyvars, types)


def _rhs(cur: _Cursor, tyvars, types, level_fn):
    if _at_binder(cur):
        return _parse_term(cur, tyvars, types)
    return level_fn(cur, tyvars, types)


def _parse_implies(cur, tyvars, types) -> T.Term:
    left = _parse_or(cur, tyvars, types)
    if cur.at("->"):
        cur.next()
        return T.Implies(left, _rhs(cur, tyvars, types, _parse_implies))
    return left


def _parse_or(cur, tyvars, types) -> T.Term:
    left = _parse_and(cur, tyvars, types)
    if cur.at("\\/"):
        cur.next()
        return T.Or(left, _rhs(cur, tyvars, types, _parse_or))
    return left


def _parse_and(cur, tyvars, types) -> T.Term:
    left = _parse_not(cur, tyvars, types)
    if cur.at("/\\"):
        cur.next()
        return T.And(left, _rhs(cur, tyvars, types, _parse_and))
    return left


def _parse_not(cur, tyvars, types) -> T.Term:
    if cur.at("~"):
        cur.next()
        return T.Not(_parse_not(cur, tyvars, types))
    return _parse_eq(cur, tyvars, types)


def _parse_eq(cur, tyvars, types) -> T.Term:
    left = _parse_app(cur, tyvars, types)
    if cur.at("="):
        cur.next()
        right = _parse_app(cur, tyvars, types)
        # The Eq type annotation is filled during elaboration.
        return T.Eq(None, left, right)
    return left


def _parse_app(cur, tyvars, types) -> T.Term:
    t = _parse_atom(cur, tyvars, types)
    while True:
        kind, text = cur.peek()
        if text == "(" or kind in ("num", "ident"):
            t = T.App(t, _parse_atom(cur, tyvars, types))
        else:
            return t


def _parse_atom(cur, tyvars, types) -> T.Term:
    kind, text = cur.peek()
    if text == "(":
        cur.next()
        inner = _parse_term(cur, tyvars, types)
        if cur.at(","):
            cur.next()
            second = _parse_term(cur, tyvars, types)
            cur.expect(")")
            return T.Pair(inner, second)
        cur.expect(")")
        return inner
    if kind == "num":
        cur.next()
        return T.Const(text, Base("nat"))
    if kind != "ident":
        cur.fail("expected a term")
    cur.next()
    if text == "true":
        return T.TruthLit(True)
    if text == "false":
        return T.TruthLit(False)
    if text == "fst":
        return T.Fst(_parse_atom(cur, tyvars, types))
    if text == "snd":
        return T.Snd(_parse_atom(cur, tyvars, types))
    # Names are resolved (Var vs Const) during elaboration.
    return T.Var(text, None)


# ---------------------------------------------------------------------------
# Elaboration: resolve names, fill binder types, check against expectations.


def elaborate(term: T.Term, sig: Signature, expected: SemType | None = None,
              env: dict[str, SemType] | None = None) -> T.Term:
    """Resolve identifiers against `sig`, fill in omitted lambda binder types
    (possible only in checking mode), and verify the typing throughout.
    Returns the fully annotated term; its type_of equals `expected` if given.
    """
    env = dict(env or {})

    def resolve_leaf(t: T.Term, env) -> tuple[T.Term, SemType]:
        name = t.name
        if name in env:
            return T.Var(name, env[name]), env[name]
        if name in sig.constants:
            return T.Const(name, sig.constants[name]), sig.constants[name]
        if name.isdigit():
            if "nat" not in sig.types:
                raise SurfaceError(f"numeral {name!r} needs a declared type 'nat'")
            return T.Const(name, Base("nat")), Base("nat")
        raise SurfaceError(f"unknown identifier {name!r}")

    def synth(t: T.Term, env) -> tuple[T.Term, SemType]:
        match t:
            case T.Var(_, _) | T.Const(_, _):
                return resolve_leaf(t, env)
            case T.Lam(v, ty, body):
                if ty is None:
                    raise SurfaceError(f"binder {v!r} needs a type annotation here")
                body2, body_ty = synth(body, {**env, v: ty})
                return T.Lam(v, ty, body2), Arrow(ty, body_ty)
            case T.App(fn, arg):
                fn2, fn_ty = synth(fn, env)
                if not isinstance(fn_ty, Arrow):
                    raise SurfaceError(f"applied non-function of type {print_type(fn_ty)}")
                arg2 = check(arg, fn_ty.dom, env)
                return T.App(fn2, arg2), fn_ty.cod
            case T.ForAll(v, ty, body) | T.Exists(v, ty, body):
                body2 = check(body, TRUTH, {**env, v: ty})
                return T.rebind(t, v, ty, body2), TRUTH
            case T.And(l, r) | T.Or(l, r) | T.Implies(l, r):
                l2 = check(l, TRUTH, env)
                r2 = check(r, TRUTH, env)
                return type(t)(l2, r2), TRUTH
            case T.Not(body):
                return T.Not(check(body, TRUTH, env)), TRUTH
            case T.Eq(_, l, r):
                l2, lty = synth(l, env)
                r2 = check(r, lty, env)
                return T.Eq(lty, l2, r2), TRUTH
            case T.TruthLit(_):
                return t, TRUTH
            case T.Pair(l, r):
                l2, lty = synth(l, env)
                r2, rty = synth(r, env)
                return T.Pair(l2, r2), Prod(lty, rty)
            case T.Fst(body):
                body2, ty = synth(body, env)
                if not isinstance(ty, Prod):
                    raise SurfaceError(f"fst of non-pair of type {print_type(ty)}")
                return T.Fst(body2), ty.left
            case T.Snd(body):
                body2, ty = synth(body, env)
                if not isinstance(ty, Prod):
                    raise SurfaceError(f"snd of non-pair of type {print_type(ty)}")
                return T.Snd(body2), ty.right
        raise SurfaceError(f"cannot elaborate {t!r}")

    def check(t: T.Term, want: SemType, env) -> T.Term:
        match t:
            case T.Lam(v, ty, body):
                if not isinstance(want, Arrow):
                    raise SurfaceError(
                        f"lambda where a {print_type(want)} is expected")
                if ty is None:
                    ty = want.dom
                elif ty != want.dom:
                    raise SurfaceError(
                        f"binder {v!r} annotated {print_type(ty)}, expected {print_type(want.dom)}")
                return T.Lam(v, ty, check(body, want.cod, {**env, v: ty}))
            case T.Pair(l, r) if isinstance(want, Prod):
                return T.Pair(check(l, want.left, env), check(r, want.right, env))
            case _:
                t2, got = synth(t, env)
                if got != want:
                    raise SurfaceError(
                        f"expected {print_type(want)}, found {print_type(got)}")
                return t2

    if expected is None:
        return synth(term, env)[0]
    return check(term, expected, env)


def parse_and_elaborate(src: str, sig: Signature, expected: SemType | None = None,
                        tyvars: set[str] = frozenset(),
                        env: dict[str, SemType] | None = None) -> T.Term:
    raw = parse_term(src, tyvars=tyvars, types=set(sig.types))
    return elaborate(raw, sig, expected=expected, env=env)


def print_term(term: T.Term, prec: int = 0) -> str:
    """The plain surface rendering; re-parsing gives back an alpha-equal term."""

    def rhs(t: T.Term, level: int) -> str:
        if isinstance(t, (T.Lam, T.ForAll, T.Exists)):
            return print_term(t, 0)
        return print_term(t, level)

    match term:
        case T.Var(name, _) | T.Const(name, _):
            return name
        case T.Lam(v, ty, body):
            ann = f":{print_type(ty)}" if ty is not None else ""
            s = f"\\{v}{ann}. {print_term(body, 0)}"
            return f"({s})" if prec > 0 else s
        case T.ForAll(v, ty, body):
            s = f"forall {v}:{print_type(ty)}. {print_term(body, 0)}"
            return f"({s})" if prec > 0 else s
        case T.Exists(v, ty, body):
            s = f"exists {v}:{print_type(ty)}. {print_term(body, 0)}"
            return f"({s})" if prec > 0 else s
        case T.Implies(l, r):
            s = f"{print_term(l, 2)} -> {rhs(r, 1)}"
            return f"({s})" if prec > 1 else s
        case T.Or(l, r):
            s = f"{print_term(l, 3)} \\/ {rhs(r, 2)}"
            return f"({s})" if prec > 2 else s
        case T.And(l, r):
            s = f"{print_term(l, 4)} /\\ {rhs(r, 3)}"
            return f"({s})" if prec > 3 else s
        case T.Not(body):
            s = f"~{print_term(body, 4)}"
            return f"({s})" if prec > 4 else s
        case T.Eq(_, l, r):
            s = f"{print_term(l, 6)} = {print_term(r, 6)}"
            return f"({s})" if prec > 5 else s
        case T.App(fn, arg):
            s = f"{print_term(fn, 6)} {print_term(arg, 7)}"
            return f"({s})" if prec > 6 else s
        case T.Fst(body):
            s = f"fst {print_term(body, 7)}"
            return f"({s})" if prec > 6 else s
        case T.Snd(body):
            s = f"snd {print_term(body, 7)}"
            return f"({s})" if prec > 6 else s
        case T.TruthLit(v):
            return "true" if v else "false"
        case T.Pair(l, r):
            return f"({print_term(l, 0)}, {print_term(r, 0)})"
    raise TypeError(f"not a term: {term!r}")
