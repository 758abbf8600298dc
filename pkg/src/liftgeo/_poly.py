"""Exact multivariate polynomial and rational-function arithmetic.

Engine behind expression normalization: every symbolic expression reduces
to a quotient of polynomials over "atoms" (opaque indeterminates such as
coordinates, named constants, abstract-function derivatives and built-in
function applications). Atoms are hashable, totally ordered keys supplied
by the caller; coefficients are exact ``fractions.Fraction`` values.

A polynomial is a dict mapping monomials to nonzero coefficients. A
monomial is a sorted tuple of ``(atom, exponent)`` pairs with strictly
positive integer exponents; the empty tuple is the constant monomial.

A fraction is a ``(num, den)`` pair reduced to canonical form: gcd one,
denominator an integer-primitive polynomial with positive leading
coefficient. Canonical form makes structural equality decide semantic
equality of rational functions in the atoms.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _igcd
from typing import Iterable

Mono = tuple
Poly = dict

_ZERO = Fraction(0)
_ONE = Fraction(1)
M_ONE: Mono = ()


def p_zero() -> Poly:
    return {}


def p_one() -> Poly:
    return {M_ONE: _ONE}


def p_const(c: Fraction) -> Poly:
    return {M_ONE: c} if c else {}


def p_atom(atom) -> Poly:
    return {((atom, 1),): _ONE}


def p_is_zero(p: Poly) -> bool:
    return not p


def p_is_const(p: Poly) -> bool:
    return not p or (len(p) == 1 and M_ONE in p)


def p_const_value(p: Poly) -> Fraction:
    return p.get(M_ONE, _ZERO)


def mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for atom, e in b:
        n = d.get(atom, 0) + e
        if n:
            d[atom] = n
        else:
            del d[atom]
    return tuple(sorted(d.items()))


def mono_div(a: Mono, b: Mono) -> Mono:
    """Divide monomial a by b (exponents may not go negative)."""
    d = dict(a)
    for atom, e in b:
        n = d.get(atom, 0) - e
        if n < 0:
            raise ArithmeticError("monomial division is not exact")
        if n:
            d[atom] = n
        else:
            del d[atom]
    return tuple(sorted(d.items()))


def p_add(a: Poly, b: Poly) -> Poly:
    if not a:
        return dict(b)
    if not b:
        return dict(a)
    r = dict(a)
    for m, c in b.items():
        s = r.get(m, _ZERO) + c
        if s:
            r[m] = s
        else:
            r.pop(m, None)
    return r


def p_neg(a: Poly) -> Poly:
    return {m: -c for m, c in a.items()}


def p_sub(a: Poly, b: Poly) -> Poly:
    return p_add(a, p_neg(b))


def p_scale(a: Poly, c: Fraction) -> Poly:
    if not c:
        return {}
    return {m: v * c for m, v in a.items()}


def p_mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return {}
    r: Poly = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = mono_mul(ma, mb)
            s = r.get(m, _ZERO) + ca * cb
            if s:
                r[m] = s
            else:
                r.pop(m, None)
    return r


def p_pow(a: Poly, n: int) -> Poly:
    if n < 0:
        raise ArithmeticError("negative power of a polynomial")
    result = p_one()
    base = a
    while n:
        if n & 1:
            result = p_mul(result, base)
        base = p_mul(base, base) if n > 1 else base
        n >>= 1
    return result


def p_atoms(a: Poly) -> set:
    s = set()
    for m in a:
        for atom, _e in m:
            s.add(atom)
    return s


# ---------------------------------------------------------------------------
# gcd machinery (for canonical fraction reduction)

def _to_dense(a: Poly, x) -> list:
    """Coefficients of a as a polynomial in x; index = power of x."""
    deg = 0
    for m in a:
        for atom, e in m:
            if atom == x and e > deg:
                deg = e
    coeffs: list = [p_zero() for _ in range(deg + 1)]
    for m, c in a.items():
        e = 0
        rest = []
        for atom, k in m:
            if atom == x:
                e = k
            else:
                rest.append((atom, k))
        rm = tuple(rest)
        s = coeffs[e].get(rm, _ZERO) + c
        if s:
            coeffs[e][rm] = s
        else:
            coeffs[e].pop(rm, None)
    return coeffs


def _from_dense(coeffs: list, x) -> Poly:
    r: Poly = {}
    for e, p in enumerate(coeffs):
        xm: Mono = (((x, e),) if e else M_ONE)
        for m, c in p.items():
            mm = mono_mul(m, xm)
            s = r.get(mm, _ZERO) + c
            if s:
                r[mm] = s
            else:
                r.pop(mm, None)
    return r


def _trim(coeffs: list) -> list:
    while coeffs and p_is_zero(coeffs[-1]):
        coeffs.pop()
    return coeffs


def p_exact_div(a: Poly, b: Poly) -> Poly:
    """Exact polynomial division; raises ArithmeticError when not exact."""
    if p_is_zero(b):
        raise ZeroDivisionError("polynomial division by zero")
    if p_is_zero(a):
        return {}
    if p_is_const(b):
        return p_scale(a, _ONE / p_const_value(b))
    x = max(p_atoms(b))
    A = _trim(_to_dense(a, x))
    B = _trim(_to_dense(b, x))
    if len(A) < len(B):
        raise ArithmeticError("not divisible")
    lead_b = B[-1]
    q: list = [p_zero() for _ in range(len(A) - len(B) + 1)]
    while A:
        if len(A) < len(B):
            raise ArithmeticError("not divisible")
        qc = p_exact_div(A[-1], lead_b)
        shift = len(A) - len(B)
        q[shift] = qc
        for i, bc in enumerate(B):
            A[i + shift] = p_sub(A[i + shift], p_mul(qc, bc))
        if not p_is_zero(A[-1]):
            raise ArithmeticError("not divisible")
        _trim(A)
    return _from_dense(q, x)


def _prem(A: list, B: list) -> list:
    """Pseudo-remainder of dense coefficient lists (main variable implicit)."""
    A = list(A)
    d_b = len(B) - 1
    lead_b = B[-1]
    while A and len(A) - 1 >= d_b:
        lead = A[-1]
        shift = len(A) - 1 - d_b
        A = [p_mul(lead_b, c) for c in A]
        for i, bc in enumerate(B):
            A[i + shift] = p_sub(A[i + shift], p_mul(lead, bc))
        _trim(A)
    return A


def _int_content(a: Poly) -> int:
    g = 0
    for c in a.values():
        g = _igcd(g, abs(c.numerator))
        if g == 1:
            break
    return g or 1


def _to_integer(a: Poly) -> Poly:
    """Scale to integer coefficients (gcd is only defined up to units)."""
    l = 1
    for c in a.values():
        d = c.denominator
        l = l * d // _igcd(l, d)
    return p_scale(a, Fraction(l)) if l != 1 else dict(a)


def _leading_sign(a: Poly) -> int:
    return 1 if a[max(a)] > 0 else -1


def p_primitive(a: Poly) -> Poly:
    """Integer-primitive form with positive leading coefficient."""
    if p_is_zero(a):
        return {}
    a = _to_integer(a)
    g = Fraction(_int_content(a) * _leading_sign(a))
    return p_scale(a, _ONE / g)


def _gcd_list(polys: Iterable[Poly]) -> Poly:
    g = p_zero()
    for p in polys:
        if p_is_zero(p):
            continue
        g = p if p_is_zero(g) else _gcd_int(g, p)
        if p_is_const(g):
            break
    return g


def _content_in(a: Poly, x) -> Poly:
    return _gcd_list(c for c in _to_dense(a, x) if not p_is_zero(c))


def _gcd_int(a: Poly, b: Poly) -> Poly:
    """gcd of two nonzero integer-coefficient polynomials (primitive result)."""
    if p_is_const(a) or p_is_const(b):
        g = _igcd(_int_content(a), _int_content(b))
        return p_const(Fraction(g))
    atoms_a = p_atoms(a)
    atoms_b = p_atoms(b)
    x = max(atoms_a | atoms_b)
    if x not in atoms_a:
        return _gcd_int(a, _content_in(b, x))
    if x not in atoms_b:
        return _gcd_int(_content_in(a, x), b)
    A = _trim(_to_dense(a, x))
    B = _trim(_to_dense(b, x))
    cont_a = _gcd_list(c for c in A if not p_is_zero(c))
    cont_b = _gcd_list(c for c in B if not p_is_zero(c))
    cont = _gcd_int(cont_a, cont_b)
    A = [p_exact_div(c, cont_a) if not p_is_zero(c) else c for c in A]
    B = [p_exact_div(c, cont_b) if not p_is_zero(c) else c for c in B]
    if len(A) < len(B):
        A, B = B, A
    while True:
        R = _prem(A, B)
        if not R:
            g = _from_dense(B, x)
            break
        cont_r = _gcd_list(c for c in R if not p_is_zero(c))
        R = [p_exact_div(c, cont_r) if not p_is_zero(c) else c for c in R]
        A, B = B, R
        if len(B) == 1:
            # remainder degenerated to a unit in x: the polys are coprime in x
            g = p_one()
            break
    g = p_primitive(g)
    return p_primitive(p_mul(cont, g))


def p_gcd(a: Poly, b: Poly) -> Poly:
    if p_is_zero(a):
        return p_primitive(b)
    if p_is_zero(b):
        return p_primitive(a)
    return _gcd_int(_to_integer(a), _to_integer(b))


# ---------------------------------------------------------------------------
# canonical fractions

def _mono_content(p: Poly) -> dict:
    """Per-atom minimum exponent over all monomials (atoms present in all)."""
    it = iter(p)
    content = dict(next(it))
    for m in it:
        if not content:
            break
        d = dict(m)
        for atom in list(content):
            e = d.get(atom, 0)
            if e:
                if e < content[atom]:
                    content[atom] = e
            else:
                del content[atom]
    return content


def _strip_mono(p: Poly, shared: Mono) -> Poly:
    return {mono_div(m, shared): c for m, c in p.items()}


def f_make(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    """Reduce num/den to canonical form."""
    if p_is_zero(den):
        raise ZeroDivisionError("zero denominator")
    if p_is_zero(num):
        return {}, p_one()
    # cancel shared monomial content first (covers all pure-monomial cases)
    cn = _mono_content(num)
    cd = _mono_content(den)
    shared = tuple(sorted(
        (atom, min(e, cd[atom])) for atom, e in cn.items() if atom in cd
    ))
    if shared:
        num = _strip_mono(num, shared)
        den = _strip_mono(den, shared)
    if p_is_const(den):
        return p_scale(num, _ONE / p_const_value(den)), p_one()
    if len(den) > 1:
        g = p_gcd(num, den)
        if not p_is_const(g):
            num = p_exact_div(num, g)
            den = p_exact_div(den, g)
            if p_is_const(den):
                return p_scale(num, _ONE / p_const_value(den)), p_one()
    # scale so den is integer-primitive with positive leading coefficient
    den_int = _to_integer(den)
    scale = den_int[max(den_int)] / den[max(den)]
    g = Fraction(_int_content(den_int) * _leading_sign(den_int))
    scale = scale / g
    return p_scale(num, scale), p_scale(den, scale)


def f_add(a, b):
    n1, d1 = a
    n2, d2 = b
    if d1 == d2:
        return f_make(p_add(n1, n2), d1)
    return f_make(p_add(p_mul(n1, d2), p_mul(n2, d1)), p_mul(d1, d2))


def f_neg(a):
    n, d = a
    return p_neg(n), d


def f_mul(a, b):
    n1, d1 = a
    n2, d2 = b
    return f_make(p_mul(n1, n2), p_mul(d1, d2))


def f_pow(a, n: int):
    num, den = a
    if n == 0:
        return p_one(), p_one()
    if n < 0:
        if p_is_zero(num):
            raise ZeroDivisionError("division by an identically zero expression")
        num, den = den, num
        n = -n
    return f_make(p_pow(num, n), p_pow(den, n))


F_ZERO = (p_zero(), p_one())
F_ONE = (p_one(), p_one())
