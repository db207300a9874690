"""Text formats: group spec files, the equation language, semilinear sets.

Group files hold one definition per statement (a statement may continue
over several lines while braces are open); ``#`` starts a comment::

    group C2 = finite { table = [[0,1],[1,0]] identity = 0 names = [e, t] }
    group a = integers
    group D = vc { quotient = C2 eps = {t: -1} cocycle = {} generators = {t = (t, 0), h = (e, 1)} }
    group F = free_product(a, D)

Equations mirror ``a_1 g_1^x_1 ... a_n g_n^x_n = 1``::

    (a b)^x1 * b^-1 a^-1 ^x2 = 1

Juxtaposed atoms multiply into a word, ``word ^ var`` makes a
variable-bearing term, and ``*`` separates terms.  ``^-x`` inverts the base.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any

from expeq.groups import (
    FiniteGroup,
    FreeProduct,
    Group,
    IntegerGroup,
    InvalidGroupSpec,
    VirtuallyCyclicGroup,
)
from expeq.semilinear import ZLinearSet, ZSemilinearSet
from expeq.solvers.equation import ExponentialEquation


class ParseError(ValueError):
    def __init__(self, message: str, pos: int | None = None, text: str | None = None):
        where = ""
        if pos is not None and text is not None:
            where = f" at column {pos + 1}:\n  {text}\n  {' ' * pos}^"
        super().__init__(message + where)
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>[-^*=(),:{}\[\]]))")


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "name" or "op"
    text: str
    start: int
    end: int


def tokenize(text: str) -> list[Token]:
    out = []
    i = 0
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        m = _TOKEN.match(text, i)
        if not m or m.end() == i:
            raise ParseError(f"unexpected character {text[i]!r}", i, text)
        kind = m.lastgroup
        start = m.start(kind)
        out.append(Token(kind, m.group(kind), start, m.end()))
        i = m.end()
    return out


class _Stream:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    def peek(self, k: int = 0) -> Token | None:
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else None

    def next(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", len(self.text), self.text)
        self.i += 1
        return tok

    def at(self, text: str, k: int = 0) -> bool:
        tok = self.peek(k)
        return tok is not None and tok.kind == "op" and tok.text == text

    def expect(self, text: str) -> Token:
        tok = self.next()
        if tok.text != text:
            raise ParseError(f"expected {text!r}, found {tok.text!r}", tok.start, self.text)
        return tok

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.peek()
        pos = tok.start if tok else len(self.text)
        return ParseError(message, pos, self.text)

    def done(self) -> bool:
        return self.i >= len(self.toks)


# --- generic values in group files -----------------------------------------


def _value(s: _Stream) -> Any:
    tok = s.next()
    if tok.kind == "int":
        return int(tok.text)
    if tok.kind == "name":
        return tok.text
    if tok.text == "-":
        nxt = s.next()
        if nxt.kind != "int":
            raise s.error("expected an integer after '-'", nxt)
        return -int(nxt.text)
    if tok.text == "[":
        items = []
        while not s.at("]"):
            items.append(_value(s))
            if s.at(","):
                s.next()
        s.expect("]")
        return items
    if tok.text == "(":
        items = []
        while not s.at(")"):
            items.append(_value(s))
            if s.at(","):
                s.next()
        s.expect(")")
        return tuple(items)
    if tok.text == "{":
        out = {}
        while not s.at("}"):
            key = _value(s)
            sep = s.next()
            if sep.text not in (":", "="):
                raise s.error("expected ':' or '='", sep)
            out[key] = _value(s)
            if s.at(","):
                s.next()
        s.expect("}")
        return out
    raise s.error(f"unexpected {tok.text!r}", tok)


def _statements(text: str) -> list[tuple[int, str]]:
    out, buf, depth, start = [], [], 0, 0
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0]
        if not line.strip() and not buf:
            continue
        if not buf:
            start = lineno
        buf.append(line)
        depth += line.count("{") + line.count("[") + line.count("(")
        depth -= line.count("}") + line.count("]") + line.count(")")
        if depth <= 0:
            out.append((start, " ".join(buf)))
            buf, depth = [], 0
    if buf:
        out.append((start, " ".join(buf)))
    return out


def _resolve_q(Q: FiniteGroup, v) -> int:
    if isinstance(v, int):
        return v
    if v in Q.names:
        return Q.names.index(v)
    raise ValueError(f"{v!r} is not an element of {Q.name}")


def parse_group_file(text: str, validate: bool = True) -> dict[str, Group]:
    """Parse every ``group`` statement; later statements may refer to earlier names."""
    groups: dict[str, Group] = {}
    for lineno, stmt in _statements(text):
        try:
            s = _Stream(stmt)
            kw = s.next()
            if kw.text != "group":
                raise s.error("statements start with 'group'", kw)
            name_tok = s.next()
            if name_tok.kind != "name":
                raise s.error("expected a group name", name_tok)
            name = name_tok.text
            s.expect("=")
            kind = s.next().text
            groups[name] = _build(kind, name, s, groups, validate)
            if not s.done():
                raise s.error("trailing input")
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
        except (ValueError, KeyError) as exc:
            if isinstance(exc, InvalidGroupSpec):
                raise
            raise ParseError(f"line {lineno}: {exc}") from None
    return groups


def _build(kind: str, name: str, s: _Stream, groups: dict[str, Group], validate: bool) -> Group:
    body = _value(s) if kind != "free_product" and s.at("{") else {}
    if kind == "finite":
        names = body.get("names")
        return FiniteGroup(body["table"], body.get("identity", 0),
                           [str(x) for x in names] if names else None, name, validate=validate)
    if kind == "integers":
        return IntegerGroup(name, body.get("generator"))
    if kind == "vc":
        Q = groups.get(body.get("quotient"))
        if not isinstance(Q, FiniteGroup):
            raise ValueError(f"vc group {name} needs a finite quotient defined earlier")
        eps = {_resolve_q(Q, k): v for k, v in body.get("eps", {}).items()}
        cocycle = {(_resolve_q(Q, k[0]), _resolve_q(Q, k[1])): v for k, v in body.get("cocycle", {}).items()}
        gens = {g: (_resolve_q(Q, v[0]), int(v[1])) for g, v in body.get("generators", {}).items()}
        return VirtuallyCyclicGroup(Q, eps, cocycle, name, gens, validate=validate)
    if kind == "free_product":
        args = _value(s)
        if not isinstance(args, tuple):
            args = (args,)
        factors = []
        for a in args:
            if a not in groups:
                raise ValueError(f"unknown group {a!r}")
            factors.append(groups[a])
        fp = FreeProduct(factors, name)
        _symbols(fp)  # reject clashing generator names early
        return fp
    raise ValueError(f"unknown group kind {kind!r}")


# --- equations -------------------------------------------------------------


def _symbols(G: Group) -> dict[str, Any]:
    if isinstance(G, IntegerGroup):
        return {G.generator: 1}
    if isinstance(G, FiniteGroup):
        return {nm: i for i, nm in enumerate(G.names)}
    if isinstance(G, VirtuallyCyclicGroup):
        return dict(G.generators)
    if isinstance(G, FreeProduct):
        table: dict[str, Any] = {}
        for lam, f in enumerate(G.factors):
            for sym, x in _symbols(f).items():
                if sym in table:
                    raise ValueError(f"generator {sym!r} appears in more than one factor of {G.name}")
                table[sym] = G.syllable(lam, x)
        return table
    raise TypeError(type(G).__name__)


def _vc_factor(G: Group, name: str):
    if isinstance(G, VirtuallyCyclicGroup) and G.name == name:
        return G, None
    if isinstance(G, FreeProduct):
        for lam, f in enumerate(G.factors):
            if isinstance(f, VirtuallyCyclicGroup) and f.name == name:
                return f, lam
    return None, None


class _EquationParser:
    def __init__(self, text: str, G: Group):
        self.s = _Stream(text)
        self.G = G
        self.symbols = _symbols(G)

    def _int(self) -> int:
        s = self.s
        neg = False
        if s.at("-"):
            s.next()
            neg = True
        tok = s.next()
        if tok.kind != "int":
            raise s.error("expected an integer", tok)
        return -int(tok.text) if neg else int(tok.text)

    def _pair(self, vc: VirtuallyCyclicGroup, lam: int | None):
        s = self.s
        s.expect("(")
        tok = s.peek()
        if tok is not None and tok.kind == "name":
            s.next()
            try:
                q = _resolve_q(vc.quotient, tok.text)
            except ValueError as exc:
                raise s.error(str(exc), tok) from None
        else:
            q = self._int()
        s.expect(",")
        m = self._int()
        s.expect(")")
        if not vc.quotient.contains(q):
            raise s.error(f"{q} is not an element of {vc.quotient.name}")
        x = (q, m)
        return x if lam is None else self.G.syllable(lam, x)

    def _is_exponent_int(self) -> bool:
        s = self.s
        if not s.at("^"):
            return False
        nxt = s.peek(1)
        if nxt is not None and nxt.kind == "int":
            return True
        nxt2 = s.peek(2)
        return s.at("-", 1) and nxt2 is not None and nxt2.kind == "int"

    def _atom(self):
        s, G = self.s, self.G
        tok = s.peek()
        if tok is None:
            raise s.error("expected a word")
        if tok.kind == "int" and tok.text == "1":
            s.next()
            x = G.identity
        elif tok.kind == "name":
            if s.at("(", 1) and _vc_factor(G, tok.text)[0] is not None:
                s.next()
                vc, lam = _vc_factor(G, tok.text)
                x = self._pair(vc, lam)
            elif tok.text in self.symbols:
                s.next()
                x = self.symbols[tok.text]
            else:
                raise s.error(f"unknown symbol {tok.text!r}", tok)
        elif tok.text == "(":
            if isinstance(G, VirtuallyCyclicGroup) and self._looks_like_pair():
                x = self._pair(G, None)
            else:
                s.next()
                x = self._word()
                s.expect(")")
        else:
            raise s.error(f"unexpected {tok.text!r}", tok)
        last = s.peek(-1)
        if self._is_exponent_int():
            s.next()
            k = self._int()
            x = G.pow(x, k)
            last = s.peek(-1)
            if s.at("^") and s.peek().start == last.end:
                raise s.error("nested exponent: put the variable exponent on its own")
        return x

    def _looks_like_pair(self) -> bool:
        s = self.s
        depth, j = 0, 0
        while True:
            tok = s.peek(j)
            if tok is None:
                return False
            if tok.text == "(":
                depth += 1
            elif tok.text == ")":
                depth -= 1
                if depth == 0:
                    return False
            elif tok.text == "," and depth == 1:
                return True
            j += 1

    def _word(self):
        s, G = self.s, self.G
        x = G.identity
        seen = False
        while True:
            tok = s.peek()
            if tok is None or (tok.kind == "op" and tok.text in ("*", "=", ")", "^")):
                break
            x = G.mul(x, self._atom())
            seen = True
        if not seen:
            raise s.error("expected a word")
        return x

    def parse(self) -> ExponentialEquation:
        s, G = self.s, self.G
        if s.done() or s.at("="):
            raise s.error("empty left side")
        coeffs, bases, names = [], [], []
        pending = G.identity
        while True:
            word = self._word()
            if s.at("^"):
                s.next()
                neg = False
                if s.at("-"):
                    s.next()
                    neg = True
                var = s.next()
                if var.kind != "name":
                    raise s.error("expected a variable name after '^'", var)
                if var.text in names:
                    raise s.error(f"repeated variable {var.text!r}", var)
                coeffs.append(pending)
                bases.append(G.inv(word) if neg else word)
                names.append(var.text)
                pending = G.identity
                if s.at("^"):
                    raise s.error("nested exponent")
            else:
                pending = G.mul(pending, word)
            if s.at("*"):
                s.next()
                continue
            break
        eq_tok = s.next()
        if eq_tok.text != "=":
            raise s.error(f"expected '=' or '*', found {eq_tok.text!r}", eq_tok)
        one = s.next()
        if one.text != "1":
            raise s.error("right side must be 1", one)
        if not s.done():
            raise s.error("trailing input")
        if not bases:
            raise ParseError("equation has no variables", 0, s.text)
        # a trailing constant c: W c = 1  <=>  c W = 1
        coeffs[0] = G.mul(pending, coeffs[0])
        return ExponentialEquation(G, tuple(coeffs), tuple(bases), tuple(names))


def parse_equation(text: str, group: Group) -> ExponentialEquation:
    return _EquationParser(text, group).parse()


def parse_solution(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace("(", "").replace(")", "").split(",") if x.strip())
    except ValueError:
        raise ParseError(f"cannot parse integer vector {text!r}") from None


def parse_box(text: str, n: int) -> list[tuple[int, int]]:
    """``lo:hi,lo:hi,...``; a single interval is repeated for every variable."""
    out = []
    for part in text.split(","):
        try:
            lo, hi = part.split(":")
            out.append((int(lo), int(hi)))
        except ValueError:
            raise ParseError(f"cannot parse box interval {part!r}") from None
    if len(out) == 1:
        out = out * n
    if len(out) != n:
        raise ParseError(f"box has {len(out)} intervals for {n} variables")
    return out


# --- semilinear text -------------------------------------------------------

_PIECE = re.compile(r"^base\s*\(([^)]*)\)((?:\s*\+\s*Z\*\([^)]*\))*)\s*$")
_PERIOD = re.compile(r"Z\*\(([^)]*)\)")


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",") if x.strip())


def parse_semilinear(text: str, dimension: int | None = None) -> ZSemilinearSet:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if lines == ["EMPTY"]:
        if dimension is None:
            raise ParseError("EMPTY needs an explicit dimension")
        return ZSemilinearSet.empty(dimension)
    pieces = []
    for ln in lines:
        m = _PIECE.match(ln)
        if not m:
            raise ParseError(f"cannot parse piece {ln!r}")
        base = _ints(m.group(1))
        periods = tuple(_ints(p) for p in _PERIOD.findall(m.group(2)))
        pieces.append(ZLinearSet(len(base), base, periods))
    dim = dimension if dimension is not None else (pieces[0].dimension if pieces else 0)
    return ZSemilinearSet(dim, tuple(pieces))
