"""Exact symbolic scalars: rational functions over Q extended by sin/cos/exp.

The value type is :class:`Expr`, a complex scalar stored as a pair of real
rational functions (re, im) in a set of generators.  Generators are either
named symbols (coordinates, parameters) or transcendental atoms sin(u),
cos(u), exp(u) whose argument u is itself a real rational function.
Polynomial and rational subexpressions are kept in a unique canonical form
(sorted monomials, reduced fractions, gcd-cancelled numerator/denominator),
so equality of canonical forms decides rational identities exactly.
Identities that mix transcendental atoms fall back to evaluation at random
rational points; see :func:`is_zero`.

Everything in this module is immutable after construction and all
operations are pure functions.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

import mpmath


class SymbolicError(Exception):
    """Malformed symbolic operation (division by zero, bad power, ...)."""


class ZeroTestInconclusive(SymbolicError):
    """The randomized zero test could not decide; distinct from True/False."""


_FUNCTIONS = ("sin", "cos", "exp")

# ---------------------------------------------------------------------------
# generators and monomials

class Generator:
    """A polynomial-ring generator: a named symbol or a function atom."""

    __slots__ = ("kind", "name", "arg", "key")

    def __init__(self, kind, name, arg=None):
        self.kind = kind          # "sym" | "fn"
        self.name = name
        self.arg = arg            # RationalFn for fn atoms, else None
        if kind == "sym":
            self.key = "s:" + name
        else:
            self.key = "f:" + name + ":" + str(arg)

    def __eq__(self, other):
        return isinstance(other, Generator) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __lt__(self, other):
        return self.key < other.key

    def __repr__(self):
        return f"Generator({self.key})"


# A monomial is a tuple of (Generator, exponent) pairs sorted by generator
# key, exponents > 0.  A Poly is a dict {monomial: Fraction} with no zero
# coefficients.  The empty monomial () is the constant term.

_ONE_MONO = ()


def _mono_mul(m1, m2):
    if not m1:
        return m2
    if not m2:
        return m1
    acc = {}
    for g, e in m1:
        acc[g] = acc.get(g, 0) + e
    for g, e in m2:
        acc[g] = acc.get(g, 0) + e
    return tuple(sorted(((g, e) for g, e in acc.items() if e), key=lambda p: p[0].key))


def _mono_degree(m):
    return sum(e for _, e in m)


def _mono_sort_key(m):
    # graded, then lexicographic on (generator key, exponent); used for
    # deterministic printing and for picking a distinguished leading term
    return (_mono_degree(m), tuple((g.key, e) for g, e in m))


# ---------------------------------------------------------------------------
# polynomial arithmetic

_P_ZERO = {}


def _p_const(c):
    c = Fraction(c)
    return {_ONE_MONO: c} if c else {}


_P_ONE = _p_const(1)


def _p_is_const(p):
    return not p or (len(p) == 1 and _ONE_MONO in p)


def _p_add(a, b):
    if not a:
        return b
    if not b:
        return a
    out = dict(a)
    for m, c in b.items():
        s = out.get(m, 0) + c
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


def _p_neg(a):
    return {m: -c for m, c in a.items()}


def _p_sub(a, b):
    return _p_add(a, _p_neg(b))


def _p_mul(a, b):
    if not a or not b:
        return {}
    if _p_is_const(a):
        c = a[_ONE_MONO]
        return {m: c * v for m, v in b.items()}
    if _p_is_const(b):
        c = b[_ONE_MONO]
        return {m: c * v for m, v in a.items()}
    out = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = _mono_mul(m1, m2)
            s = out.get(m, 0) + c1 * c2
            if s:
                out[m] = s
            else:
                out.pop(m, None)
    return out


def _p_pow(a, n):
    out = _P_ONE
    base = a
    while n:
        if n & 1:
            out = _p_mul(out, base)
        base = _p_mul(base, base) if n > 1 else base
        n >>= 1
    return out


def _p_gens(p):
    gens = set()
    for m in p:
        for g, _ in m:
            gens.add(g)
    return gens


# --- univariate view (main generator g, coefficients are Polys) -----------

def _p_to_univ(p, g):
    u = {}
    for m, c in p.items():
        e = 0
        rest = []
        for gen, exp in m:
            if gen == g:
                e = exp
            else:
                rest.append((gen, exp))
        coeff = u.setdefault(e, {})
        rm = tuple(rest)
        s = coeff.get(rm, 0) + c
        if s:
            coeff[rm] = s
        else:
            coeff.pop(rm, None)
    return {e: coeff for e, coeff in u.items() if coeff}


def _univ_to_p(u, g):
    out = {}
    for e, coeff in u.items():
        gm = ((g, e),) if e else ()
        for m, c in coeff.items():
            mm = _mono_mul(gm, m)
            s = out.get(mm, 0) + c
            if s:
                out[mm] = s
            else:
                out.pop(mm, None)
    return out


def _p_div_exact(a, b):
    """Exact multivariate division a/b; returns None if b does not divide a."""
    if not b:
        raise SymbolicError("polynomial division by zero")
    if not a:
        return {}
    if _p_is_const(b):
        c = b[_ONE_MONO]
        return {m: v / c for m, v in a.items()}
    g = min(_p_gens(b))
    ua, ub = _p_to_univ(a, g), _p_to_univ(b, g)
    db = max(ub)
    lb = ub[db]
    quot = {}
    rem = ua
    while rem:
        dr = max(rem)
        if dr < db:
            return None
        qc = _p_div_exact(rem[dr], lb)
        if qc is None:
            return None
        quot[dr - db] = qc
        # rem -= qc * x^(dr-db) * b
        for e, coeff in ub.items():
            t = _p_mul(qc, coeff)
            tgt = dr - db + e
            cur = rem.get(tgt, {})
            new = _p_sub(cur, t)
            if new:
                rem[tgt] = new
            else:
                rem.pop(tgt, None)
    return _univ_to_p(quot, g)


def _p_normalize_assoc(p):
    """Scale by a positive rational so coefficients are coprime integers and
    the leading (print-order) coefficient is positive."""
    if not p:
        return p
    lcm = 1
    for c in p.values():
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    g = 0
    for c in p.values():
        g = math.gcd(g, abs(c.numerator * (lcm // c.denominator)))
    scale = Fraction(lcm, g)
    lead = max(p, key=_mono_sort_key)
    if p[lead] < 0:
        scale = -scale
    return {m: c * scale for m, c in p.items()}


def _u_content(u):
    cont = {}
    for coeff in u.values():
        cont = _p_gcd(cont, coeff)
        if _p_is_const(cont) and cont:
            return _P_ONE
    return cont


def _u_primitive(u):
    cont = _u_content(u)
    if cont == _P_ONE:
        return u
    return {e: _p_div_exact(c, cont) for e, c in u.items()}


def _u_prem_step(f, g_u, g):
    """One pseudo-reduction pass: returns r with deg_g r < deg_g(g_u)."""
    dg = max(g_u)
    lg = g_u[dg]
    r = f
    while r and max(r) >= dg:
        dr = max(r)
        lr = r[dr]
        # r <- lg*r - lr*x^(dr-dg)*g_u
        new = {}
        for e, c in r.items():
            new[e] = _p_mul(lg, c)
        for e, c in g_u.items():
            tgt = dr - dg + e
            t = _p_mul(lr, c)
            cur = new.get(tgt, {})
            d = _p_sub(cur, t)
            if d:
                new[tgt] = d
            else:
                new.pop(tgt, None)
        r = {e: c for e, c in new.items() if c}
    return r


def _p_gcd(a, b):
    """Multivariate gcd over Q via primitive pseudo-remainder sequences.

    Returns the gcd normalized to coprime integer coefficients with a
    positive leading coefficient; the gcd of constants is 1.
    """
    if not a:
        return _p_normalize_assoc(b)
    if not b:
        return _p_normalize_assoc(a)
    if _p_is_const(a) or _p_is_const(b):
        return _P_ONE
    gens = sorted(_p_gens(a) | _p_gens(b))
    g = gens[0]
    ua, ub = _p_to_univ(a, g), _p_to_univ(b, g)
    cont_a = _u_content(ua)
    cont_b = _u_content(ub)
    cont = _p_gcd(cont_a, cont_b)
    pa = _u_primitive(ua)
    pb = _u_primitive(ub)
    f, h = (pa, pb) if max(pa) >= max(pb) else (pb, pa)
    while h:
        if max(h) == 0:
            # primitive and constant in g: gcd in g-direction is trivial
            return _p_normalize_assoc(cont)
        r = _u_prem_step(f, h, g)
        f, h = h, _u_primitive({e: c for e, c in r.items() if c}) if r else {}
    prim = _univ_to_p(f, g)
    return _p_normalize_assoc(_p_mul(cont, prim))


# ---------------------------------------------------------------------------
# rational functions (normalized num/den pairs)

class RationalFn:
    """A real rational function in the generators, in canonical form."""

    __slots__ = ("num", "den", "_str", "_hash")

    def __init__(self, num, den, _normalized=False):
        if not _normalized:
            raise SymbolicError("use _rf_make to build RationalFn")
        self.num = num
        self.den = den
        self._str = None
        self._hash = None

    def __eq__(self, other):
        return (
            isinstance(other, RationalFn)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(str(self))
        return self._hash

    def __str__(self):
        if self._str is None:
            self._str = _rf_str(self)
        return self._str

    def __repr__(self):
        return f"RationalFn({self})"


def _rf_make(num, den):
    if not den:
        raise SymbolicError("division by zero expression")
    if not num:
        return _RF_ZERO if _RF_ZERO is not None else RationalFn({}, _P_ONE, _normalized=True)
    if _p_is_const(den):
        c = den[_ONE_MONO]
        num = {m: v / c for m, v in num.items()}
        return RationalFn(num, _P_ONE, _normalized=True)
    g = _p_gcd(num, den)
    if g != _P_ONE:
        num = _p_div_exact(num, g)
        den = _p_div_exact(den, g)
        if _p_is_const(den):
            c = den[_ONE_MONO]
            num = {m: v / c for m, v in num.items()}
            return RationalFn(num, _P_ONE, _normalized=True)
    nden = _p_normalize_assoc(den)
    m0 = next(iter(den))
    r = nden[m0] / den[m0]
    num = {m: v * r for m, v in num.items()}
    return RationalFn(num, nden, _normalized=True)


_RF_ZERO = None
_RF_ZERO = _rf_make({}, _P_ONE)
_RF_ONE = _rf_make(_P_ONE, _P_ONE)


def _rf_const(c):
    return _rf_make(_p_const(c), _P_ONE)


def _rf_add(x, y):
    if not x.num:
        return y
    if not y.num:
        return x
    if x.den == y.den:
        return _rf_make(_p_add(x.num, y.num), x.den)
    if x.den == _P_ONE and y.den == _P_ONE:
        return _rf_make(_p_add(x.num, y.num), _P_ONE)
    g = _p_gcd(x.den, y.den)
    if g == _P_ONE:
        num = _p_add(_p_mul(x.num, y.den), _p_mul(y.num, x.den))
        return _rf_make(num, _p_mul(x.den, y.den))
    xco = _p_div_exact(y.den, g)
    yco = _p_div_exact(x.den, g)
    num = _p_add(_p_mul(x.num, xco), _p_mul(y.num, yco))
    return _rf_make(num, _p_mul(x.den, xco))


def _rf_neg(x):
    if not x.num:
        return x
    return RationalFn(_p_neg(x.num), x.den, _normalized=True)


def _rf_sub(x, y):
    return _rf_add(x, _rf_neg(y))


def _rf_mul(x, y):
    if not x.num or not y.num:
        return _RF_ZERO
    return _rf_make(_p_mul(x.num, y.num), _p_mul(x.den, y.den))


def _rf_inv(x):
    if not x.num:
        raise SymbolicError("division by zero expression")
    return _rf_make(x.den, x.num)


def _rf_div(x, y):
    return _rf_mul(x, _rf_inv(y))


def _rf_is_zero(x):
    return not x.num


def _rf_is_const(x):
    return _p_is_const(x.num) and x.den == _P_ONE


def _rf_gens(x):
    return _p_gens(x.num) | _p_gens(x.den)


def _fn_derivative(g):
    """Derivative of the atom g with respect to its own argument, as a Poly."""
    if g.name == "sin":
        return {((Generator("fn", "cos", g.arg), 1),): Fraction(1)}
    if g.name == "cos":
        return {((Generator("fn", "sin", g.arg), 1),): Fraction(-1)}
    return {((g, 1),): Fraction(1)}  # exp


def _mono_diff(m, c, x):
    """Derivative of c*m with respect to symbol name x, as a RationalFn."""
    total = _RF_ZERO
    for idx, (g, e) in enumerate(m):
        if g.kind == "sym":
            if g.name != x:
                continue
            rest = m[:idx] + ((g, e - 1),) if e > 1 else m[:idx]
            rest = rest + m[idx + 1:]
            rest = tuple(sorted(rest, key=lambda p: p[0].key))
            term = _rf_make({rest: c * e}, _P_ONE)
            total = _rf_add(total, term)
        else:
            darg = _rf_diff(g.arg, x)
            if _rf_is_zero(darg):
                continue
            rest = m[:idx] + ((g, e - 1),) if e > 1 else m[:idx]
            rest = rest + m[idx + 1:]
            rest = tuple(sorted(rest, key=lambda p: p[0].key))
            piece = _rf_make(_p_mul({rest: c * e}, _fn_derivative(g)), _P_ONE)
            total = _rf_add(total, _rf_mul(piece, darg))
    return total


def _p_diff(p, x):
    """Derivative of a Poly by symbol name x; a RationalFn in general
    (atom arguments may carry denominators)."""
    poly_part = {}
    rf_part = _RF_ZERO
    for m, c in p.items():
        simple = True
        for g, _ in m:
            if g.kind == "fn" and x in _rf_free_syms(g.arg):
                simple = False
                break
        if simple:
            for idx, (g, e) in enumerate(m):
                if g.kind == "sym" and g.name == x:
                    rest = m[:idx] + ((g, e - 1),) if e > 1 else m[:idx]
                    rest = rest + m[idx + 1:]
                    rest = tuple(sorted(rest, key=lambda pr: pr[0].key))
                    s = poly_part.get(rest, 0) + c * e
                    if s:
                        poly_part[rest] = s
                    else:
                        poly_part.pop(rest, None)
        else:
            rf_part = _rf_add(rf_part, _mono_diff(m, c, x))
    if poly_part:
        rf_part = _rf_add(rf_part, _rf_make(poly_part, _P_ONE))
    return rf_part


def _rf_diff(x_rf, x):
    if x not in _rf_free_syms(x_rf):
        return _RF_ZERO
    dn = _p_diff(x_rf.num, x)
    if x_rf.den == _P_ONE:
        return dn
    dd = _p_diff(x_rf.den, x)
    num_rf = _rf_sub(
        _rf_mul(dn, _rf_make(x_rf.den, _P_ONE)),
        _rf_mul(dd, _rf_make(x_rf.num, _P_ONE)),
    )
    return _rf_mul(num_rf, _rf_inv(_rf_make(_p_mul(x_rf.den, x_rf.den), _P_ONE)))


def _rf_free_syms(x):
    out = set()
    stack = [x]
    while stack:
        rf = stack.pop()
        for g in _rf_gens(rf):
            if g.kind == "sym":
                out.add(g.name)
            else:
                stack.append(g.arg)
    return out


# ---------------------------------------------------------------------------
# printing

def _coeff_str(c):
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _gen_str(g):
    if g.kind == "sym":
        return g.name
    return f"{g.name}({g.arg})"


def _p_str(p):
    if not p:
        return "0"
    terms = sorted(p.items(), key=lambda kv: _mono_sort_key(kv[0]), reverse=True)
    pieces = []
    for m, c in terms:
        factors = []
        for g, e in m:
            s = _gen_str(g)
            factors.append(s if e == 1 else f"{s}^{e}")
        mag = abs(c)
        if not factors:
            body = _coeff_str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = _coeff_str(mag) + "*" + "*".join(factors)
        if not pieces:
            pieces.append(("-" if c < 0 else "") + body)
        else:
            pieces.append((" - " if c < 0 else " + ") + body)
    return "".join(pieces)


def _rf_str(rf):
    ns = _p_str(rf.num)
    if rf.den == _P_ONE:
        return ns
    if len(rf.num) > 1 or ns.startswith("-"):
        ns = f"({ns})"
    return f"{ns}/({_p_str(rf.den)})"


# ---------------------------------------------------------------------------
# complex expressions

class Expr:
    """Exact complex scalar: a pair of real rational functions (re, im).

    Supports +, -, *, / and integer powers, exact differentiation by symbol
    name, simultaneous substitution and conjugation.  Structural equality
    (``==``) compares canonical forms; semantic vanishing is :func:`is_zero`.
    """

    __slots__ = ("rre", "rim")

    def __init__(self, rre, rim=None):
        self.rre = rre
        self.rim = rim if rim is not None else _RF_ZERO

    # -- construction helpers ------------------------------------------------

    @staticmethod
    def of(value):
        if isinstance(value, Expr):
            return value
        if isinstance(value, (int, Fraction)):
            return Expr(_rf_const(value))
        raise SymbolicError(f"cannot interpret {value!r} as an expression")

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, (Expr, int, Fraction)):
            return NotImplemented
        other = Expr.of(other)
        return Expr(_rf_add(self.rre, other.rre), _rf_add(self.rim, other.rim))

    __radd__ = __add__

    def __neg__(self):
        return Expr(_rf_neg(self.rre), _rf_neg(self.rim))

    def __sub__(self, other):
        if not isinstance(other, (Expr, int, Fraction)):
            return NotImplemented
        return self + (-Expr.of(other))

    def __rsub__(self, other):
        return Expr.of(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, (Expr, int, Fraction)):
            return NotImplemented
        other = Expr.of(other)
        a, b, c, d = self.rre, self.rim, other.rre, other.rim
        re = _rf_sub(_rf_mul(a, c), _rf_mul(b, d))
        im = _rf_add(_rf_mul(a, d), _rf_mul(b, c))
        return Expr(re, im)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, (Expr, int, Fraction)):
            return NotImplemented
        other = Expr.of(other)
        c, d = other.rre, other.rim
        if _rf_is_zero(d):
            if _rf_is_zero(c):
                raise SymbolicError("division by zero expression")
            inv = _rf_inv(c)
            return Expr(_rf_mul(self.rre, inv), _rf_mul(self.rim, inv))
        norm = _rf_add(_rf_mul(c, c), _rf_mul(d, d))
        return (self * other.conjugate()) * Expr(_rf_inv(norm))

    def __rtruediv__(self, other):
        return Expr.of(other) / self

    def __pow__(self, n):
        if not isinstance(n, int):
            raise SymbolicError("only integer powers are supported")
        if n < 0:
            return (Expr(_RF_ONE) / self) ** (-n)
        out = Expr(_RF_ONE)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    # -- structure -----------------------------------------------------------

    def conjugate(self):
        return Expr(self.rre, _rf_neg(self.rim))

    @property
    def re(self):
        return Expr(self.rre)

    @property
    def im(self):
        return Expr(self.rim)

    def is_structurally_zero(self):
        return _rf_is_zero(self.rre) and _rf_is_zero(self.rim)

    def is_real(self):
        return _rf_is_zero(self.rim)

    def is_imaginary(self):
        return _rf_is_zero(self.rre)

    def is_rational_constant(self):
        return _rf_is_const(self.rre) and _rf_is_zero(self.rim)

    def as_fraction(self):
        if not self.is_rational_constant():
            raise SymbolicError(f"{self} is not a rational constant")
        return self.rre.num.get(_ONE_MONO, Fraction(0))

    def free_symbols(self):
        return _rf_free_syms(self.rre) | _rf_free_syms(self.rim)

    def has_function_atoms(self):
        return any(g.kind == "fn" for g in _rf_gens(self.rre) | _rf_gens(self.rim))

    # -- calculus ------------------------------------------------------------

    def diff(self, name):
        """Exact partial derivative with respect to the symbol ``name``."""
        if isinstance(name, Expr):
            name = _symbol_name_of(name)
        return Expr(_rf_diff(self.rre, name), _rf_diff(self.rim, name))

    def subs(self, bindings):
        """Simultaneous substitution symbol name -> Expr, then canonicalize."""
        norm = {}
        for k, v in bindings.items():
            key = k if isinstance(k, str) else _symbol_name_of(k)
            norm[key] = Expr.of(v)
        if not norm or not (set(norm) & self.free_symbols()):
            return self
        return _rf_subs(self.rre, norm) + Expr(_RF_ZERO, _RF_ONE) * _rf_subs(self.rim, norm)

    # -- misc ----------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, (Expr, int, Fraction)):
            return NotImplemented
        other = Expr.of(other)
        return self.rre == other.rre and self.rim == other.rim

    def __hash__(self):
        return hash((self.rre, self.rim))

    def __str__(self):
        rs, is_ = self.rre, self.rim
        if _rf_is_zero(is_):
            return str(rs)
        im_str = _imaginary_part_str(is_)
        if _rf_is_zero(rs):
            return im_str
        if im_str.startswith("-"):
            return f"{rs} - {im_str[1:]}"
        return f"{rs} + {im_str}"

    def __repr__(self):
        return f"Expr({self})"


def _imaginary_part_str(rf):
    if rf == _RF_ONE:
        return "i"
    if rf == _rf_neg(_RF_ONE):
        return "-i"
    s = str(rf)
    neg = s.startswith("-")
    if neg:
        s = s[1:]
    if " + " in s or " - " in s:
        s = f"({s})"
    return ("-" if neg else "") + f"i*{s}"


def _symbol_name_of(e):
    rf = e.rre
    if not _rf_is_zero(e.rim) or rf.den != _P_ONE or len(rf.num) != 1:
        raise SymbolicError(f"{e} is not a plain symbol")
    m, c = next(iter(rf.num.items()))
    if c != 1 or len(m) != 1 or m[0][1] != 1 or m[0][0].kind != "sym":
        raise SymbolicError(f"{e} is not a plain symbol")
    return m[0][0].name


def _rf_subs(rf, bindings):
    if not (set(bindings) & _rf_free_syms(rf)):
        return Expr(rf)
    num = _p_eval_expr(rf.num, bindings)
    if rf.den == _P_ONE:
        return num
    den = _p_eval_expr(rf.den, bindings)
    return num / den


def _p_eval_expr(p, bindings):
    total = Expr(_RF_ZERO)
    for m, c in p.items():
        term = Expr(_rf_const(c))
        for g, e in m:
            if g.kind == "sym":
                val = bindings.get(g.name)
                if val is None:
                    val = symbol(g.name)
            else:
                val = _apply_function(g.name, _rf_subs(g.arg, bindings))
            term = term * val ** e
        total = total + term
    return total


# ---------------------------------------------------------------------------
# public constructors

def symbol(name):
    """The real symbol ``name`` as an expression."""
    g = Generator("sym", name)
    return Expr(_rf_make({((g, 1),): Fraction(1)}, _P_ONE))


def rational(num, den=1):
    return Expr(_rf_const(Fraction(num, den)))


I = Expr(_RF_ZERO, _RF_ONE)


def _apply_function(fname, arg):
    arg = Expr.of(arg)
    if fname == "exp":
        if arg.is_real():
            return Expr(_atom_rf("exp", arg.rre))
        # exp(a+ib) = exp(a)(cos b + i sin b), keeping atoms real-argument
        ea = Expr(_atom_rf("exp", arg.rre))
        cb = Expr(_atom_rf("cos", arg.rim))
        sb = Expr(_atom_rf("sin", arg.rim))
        return ea * (cb + I * sb)
    if not arg.is_real():
        raise SymbolicError(f"{fname} of a non-real argument is not supported")
    return Expr(_atom_rf(fname, arg.rre))


def _atom_rf(fname, arg_rf):
    if _rf_is_zero(arg_rf):
        if fname == "sin":
            return _RF_ZERO
        return _RF_ONE  # cos(0) = exp(0) = 1
    g = Generator("fn", fname, arg_rf)
    return _rf_make({((g, 1),): Fraction(1)}, _P_ONE)


def sin(arg):
    return _apply_function("sin", arg)


def cos(arg):
    return _apply_function("cos", arg)


def exp(arg):
    return _apply_function("exp", arg)


# ---------------------------------------------------------------------------
# zero testing

_DEFAULT_SEED = 0x5EAF
_EVAL_DPS = 60
_ZERO_TOL = mpmath.mpf(10) ** -40
_POLE_TOL = mpmath.mpf(10) ** -30


class _PoleHit(Exception):
    pass


def _p_eval_num(p, assign):
    total = mpmath.mpf(0)
    for m, c in p.items():
        t = mpmath.mpf(c.numerator) / c.denominator
        for g, e in m:
            t *= _gen_eval_num(g, assign) ** e
        total += t
    return total


def _gen_eval_num(g, assign):
    if g.kind == "sym":
        return assign[g.name]
    v = _rf_eval_num(g.arg, assign)
    if g.name == "sin":
        return mpmath.sin(v)
    if g.name == "cos":
        return mpmath.cos(v)
    return mpmath.exp(v)


def _rf_eval_num(rf, assign):
    num = _p_eval_num(rf.num, assign)
    if rf.den == _P_ONE:
        return num
    den = _p_eval_num(rf.den, assign)
    if abs(den) < _POLE_TOL:
        raise _PoleHit()
    return num / den


def random_rational(rng, max_num=12, max_den=7):
    n = rng.randint(-max_num, max_num)
    d = rng.randint(1, max_den)
    return Fraction(n, d)


def is_zero(e, *, samples=16, rng=None, max_retries=48):
    """Sound three-valued zero test.

    Returns True iff the canonical form is 0, or (for expressions containing
    transcendental atoms) iff ``samples`` evaluations at random rational
    points all vanish numerically.  Returns False on a canonical nonzero
    rational form or any nonzero evaluation.  Raises
    :class:`ZeroTestInconclusive` when evaluation keeps hitting poles.
    """
    e = Expr.of(e)
    if e.is_structurally_zero():
        return True
    if not e.has_function_atoms():
        return False  # nonzero canonical rational function
    if rng is None:
        rng = random.Random(_DEFAULT_SEED)
    names = sorted(e.free_symbols())
    done = 0
    retries = 0
    with mpmath.workdps(_EVAL_DPS):
        while done < samples:
            assign = {}
            for n in names:
                q = random_rational(rng)
                assign[n] = mpmath.mpf(q.numerator) / q.denominator
            try:
                re_v = _rf_eval_num(e.rre, assign)
                im_v = _rf_eval_num(e.rim, assign)
            except _PoleHit:
                retries += 1
                if retries > max_retries:
                    raise ZeroTestInconclusive(
                        f"zero test for {e} kept hitting poles "
                        f"({max_retries} resamples)"
                    )
                continue
            if abs(re_v) > _ZERO_TOL or abs(im_v) > _ZERO_TOL:
                return False
            done += 1
    return True


def equal(a, b, **kw):
    """Semantic equality through the zero test."""
    return is_zero(Expr.of(a) - Expr.of(b), **kw)


ZERO = rational(0)
ONE = rational(1)
