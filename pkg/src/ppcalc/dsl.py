"""Text syntax for pp formulas.

    formula := "true" | [ "E" ident+ "." ] eq { "&" eq }
    eq      := side "=" side
    side    := ["-"] term { ("+" | "-") term } | "0"
    term    := [scalar "*"] ident ["*" scalar]
    scalar  := integer | "e" integer

Free variables are x1, x2, ... (a bare ``x`` means x1); bound variables are
the identifiers declared after ``E``.  Right formulas take trailing scalars,
left formulas leading ones, bimodule formulas may use both.

>>> from ppcalc.rings import INTEGERS
>>> phi = parse("E y . x1 - y*2 = 0", INTEGERS)
>>> phi.A, phi.B
(((1,),), ((-2,),))
>>> to_text(phi)
'E z1 . x1 - z1*2 = 0'
"""

from __future__ import annotations

import re

from .errors import PpSyntaxError, UnknownScalar
from .formulas import BimodPpFormula, PpFormula, make_formula
from .rings import Ring

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[.=&+\-*|]))")


def _tokenize(text: str):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PpSyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastgroup)
        out.append((m.lastgroup, m.group(m.lastgroup), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


def _scalar_value(ring: Ring, tok, sign: int = 1):
    kind, val, pos = tok
    if kind == "num":
        return ring.from_int(sign * int(val))
    if kind == "ident" and re.fullmatch(r"e\d+", val):
        idx = int(val[1:])
        if not ring.is_finite or not ring.contains(idx):
            raise UnknownScalar(f"no ring element {val} in {ring.name}", pos)
        return ring.neg(idx) if sign < 0 else idx
    raise PpSyntaxError(f"expected a scalar, got {val!r}", pos)


def _is_scalar(tok) -> bool:
    kind, val, _ = tok
    return kind == "num" or (kind == "ident" and re.fullmatch(r"e\d+", val) is not None)


class _Parser:
    def __init__(self, text, left_ring: Ring | None, right_ring: Ring | None):
        self.toks = _tokenize(text)
        self.i = 0
        self.left_ring = left_ring
        self.right_ring = right_ring

    def peek(self, k=0):
        return self.toks[self.i + k]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, kind, val=None):
        tok = self.take()
        if tok[0] != kind or (val is not None and tok[1] != val):
            want = val or kind
            raise PpSyntaxError(f"expected {want!r}, got {tok[1] or 'end of input'!r}", tok[2])
        return tok

    def variable(self, tok):
        kind, val, pos = tok
        if kind != "ident" or _is_scalar(tok):
            raise PpSyntaxError(f"expected a variable, got {val or 'end of input'!r}", pos)
        if val in self.bound:
            return ("b", self.bound[val])
        m = re.fullmatch(r"x(\d*)", val)
        if m:
            idx = int(m.group(1) or 1)
            if idx < 1:
                raise PpSyntaxError("free variables are numbered from x1", pos)
            return ("f", idx - 1)
        raise PpSyntaxError(f"undeclared variable {val!r}", pos)

    def term(self, sign):
        """Returns (var, left scalar, right scalar)."""
        lsc = rsc = None
        if _is_scalar(self.peek()) and self.peek(1)[1] == "*":
            if self.left_ring is None:
                raise PpSyntaxError("leading scalars are not allowed for right formulas", self.peek()[2])
            lsc = _scalar_value(self.left_ring, self.take(), sign)
            sign = 1
            self.expect("op", "*")
        var = self.variable(self.take())
        if self.peek()[1] == "*":
            self.take()
            if self.right_ring is None:
                raise PpSyntaxError("trailing scalars are not allowed for left formulas", self.peek()[2])
            rsc = _scalar_value(self.right_ring, self.take(), sign)
            sign = 1
        if sign < 0:
            if self.left_ring is not None and lsc is None and self.right_ring is None:
                lsc = self.left_ring.neg(self.left_ring.one)
            elif self.right_ring is not None and rsc is None:
                rsc = self.right_ring.neg(self.right_ring.one)
            else:
                lsc = self.left_ring.neg(self.left_ring.one)
        return var, lsc, rsc

    def side(self, outer_sign):
        terms = []
        tok = self.peek()
        if tok[0] == "num" and tok[1] == "0" and self.peek(1)[1] != "*":
            self.take()
            return terms
        sign = 1
        if tok[1] in "+-" and tok[0] == "op":
            self.take()
            sign = -1 if tok[1] == "-" else 1
        terms.append(self.term(sign * outer_sign))
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            terms.append(self.term((-1 if op == "-" else 1) * outer_sign))
        return terms

    def formula(self):
        self.bound = {}
        if self.peek()[1] == "true" and self.peek(1)[0] == "end":
            self.take()
            return []
        if self.peek()[1] == "E" and self.peek()[0] == "ident":
            self.take()
            names = []
            while self.peek()[0] == "ident":
                tok = self.take()
                if re.fullmatch(r"x\d*", tok[1]) or _is_scalar(tok) or tok[1] in self.bound:
                    raise PpSyntaxError(f"bad bound variable name {tok[1]!r}", tok[2])
                self.bound[tok[1]] = len(self.bound)
                names.append(tok[1])
            if not names:
                raise PpSyntaxError("'E' must be followed by variable names", self.peek()[2])
            self.expect("op", ".")
        eqs = []
        while True:
            lhs = self.side(1)
            self.expect("op", "=")
            rhs = self.side(-1)
            eqs.append(lhs + rhs)
            if self.peek()[1] == "&":
                self.take()
                continue
            self.expect("end")
            return eqs


def _one_sided(text: str, ring: Ring, side: str):
    if side == "right":
        p = _Parser(text, None, ring)
    else:
        p = _Parser(text, ring, None)
    eqs = p.formula()
    return eqs, len(p.bound)


def parse(text: str, ring: Ring, side: str = "right", n: int | None = None, partition=None) -> PpFormula:
    eqs, t = _one_sided(text, ring, side)
    maxfree = max((v[1] + 1 for eq in eqs for v, _, _ in eq if v[0] == "f"), default=0)
    if n is None:
        n = maxfree
    elif maxfree > n:
        raise PpSyntaxError(f"formula mentions x{maxfree} but n={n}")
    m = len(eqs)
    A = [[ring.zero] * m for _ in range(n)]
    B = [[ring.zero] * m for _ in range(t)]
    for j, eq in enumerate(eqs):
        for (kind, idx), lsc, rsc in eq:
            c = lsc if side == "left" else rsc
            if c is None:
                c = ring.one
            target = A if kind == "f" else B
            target[idx][j] = ring.add(target[idx][j], c)
    return make_formula(ring, side, A, B, n, m, partition)


def parse_bimod(text: str, left_ring: Ring, right_ring: Ring, n: int | None = None) -> BimodPpFormula:
    p = _Parser(text, left_ring, right_ring)
    eqs = p.formula()
    t = len(p.bound)
    maxfree = max((v[1] + 1 for eq in eqs for v, _, _ in eq if v[0] == "f"), default=0)
    n = maxfree if n is None else n
    out = []
    for eq in eqs:
        terms = []
        for (kind, idx), lsc, rsc in eq:
            var = idx if kind == "f" else n + idx
            terms.append((left_ring.one if lsc is None else lsc, var, right_ring.one if rsc is None else rsc))
        out.append(terms)
    return BimodPpFormula(left_ring, right_ring, n, t, out)


def scalar_text(ring: Ring, a) -> str:
    k = ring.symmetric_int(a) if ring.is_finite else a
    if k is None:
        return f"e{a}"
    return str(k)


def _signed(ring: Ring, a):
    """(negative?, text of |a|) with the unit printed as ''."""
    k = ring.symmetric_int(a) if ring.is_finite else a
    if k is None:
        return False, f"e{a}"
    neg = k < 0
    k = abs(k)
    return neg, ("" if k == 1 else str(k))


def _join(terms) -> str:
    if not terms:
        return "0"
    out = ""
    for i, (neg, body) in enumerate(terms):
        if i == 0:
            out = ("- " if neg else "") + body
        else:
            out += (" - " if neg else " + ") + body
    return out


def _var_name(v: int, n: int) -> str:
    return f"x{v + 1}" if v < n else f"z{v - n + 1}"


def to_text(phi: PpFormula) -> str:
    R = phi.ring
    if phi.m == 0:
        return "true" if phi.t == 0 else "E " + " ".join(f"z{k + 1}" for k in range(phi.t)) + " . true"
    eqs = []
    for j in range(phi.m):
        terms = []
        for v, c in enumerate(phi.column(j)):
            if c == R.zero:
                continue
            neg, body = _signed(R, c)
            name = _var_name(v, phi.n)
            if body == "":
                text = name
            elif phi.side == "right":
                text = f"{name}*{body}"
            else:
                text = f"{body}*{name}"
            terms.append((neg, text))
        eqs.append(_join(terms) + " = 0")
    body = " & ".join(eqs)
    if phi.t:
        body = "E " + " ".join(f"z{k + 1}" for k in range(phi.t)) + " . " + body
    return body


def bimod_to_text(beta: BimodPpFormula) -> str:
    R, S = beta.left_ring, beta.right_ring
    if not beta.equations:
        return "true"
    eqs = []
    for eq in beta.equations:
        terms = []
        for r, v, s in eq:
            rn, rb = _signed(R, r)
            sn, sb = _signed(S, s)
            name = _var_name(v, beta.n)
            text = (f"{rb}*" if rb else "") + name + (f"*{sb}" if sb else "")
            terms.append((rn != sn, text))
        eqs.append(_join(terms) + " = 0")
    body = " & ".join(eqs)
    if beta.t:
        body = "E " + " ".join(f"z{k + 1}" for k in range(beta.t)) + " . " + body
    return body
