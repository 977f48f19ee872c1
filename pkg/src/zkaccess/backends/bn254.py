"""alt_bn128 (BN254) curve arithmetic and the optimal ate pairing.

Everything is tuple-based over gmpy2 integers; no field-element classes.
Tower: Fp2 = Fp[u]/(u^2+1), Fp6 = Fp2[v]/(v^3 - xi) with xi = 9+u,
Fp12 = Fp6[w]/(w^2 - v).  G1 is y^2 = x^3 + 3 over Fp; G2 lives on the
D-type sextic twist y^2 = x^3 + 3/xi over Fp2, with untwist
(x, y) -> (x*w^2, y*w^3) into E(Fp12).

Points are affine pairs (or Fp2-pairs) with ``None`` as infinity;
Jacobian triples are used internally where it matters for speed.
"""

from __future__ import annotations

import gmpy2

from ..fieldmath import ATE_LOOP_COUNT, P, R, mpz

# -- base field ---------------------------------------------------------------

def fp_inv(a):
    return gmpy2.invert(a, P)


# -- Fp2 ----------------------------------------------------------------------

FP2_ZERO = (mpz(0), mpz(0))
FP2_ONE = (mpz(1), mpz(0))
XI = (mpz(9), mpz(1))  # non-residue defining the sextic twist


def fp2_add(a, b):
    return ((a[0] + b[0]) % P, (a[1] + b[1]) % P)


def fp2_sub(a, b):
    return ((a[0] - b[0]) % P, (a[1] - b[1]) % P)


def fp2_neg(a):
    return ((-a[0]) % P, (-a[1]) % P)


def fp2_conj(a):
    return (a[0], (-a[1]) % P)


def fp2_mul(a, b):
    a0, a1 = a
    b0, b1 = b
    t0 = a0 * b0
    t1 = a1 * b1
    return ((t0 - t1) % P, ((a0 + a1) * (b0 + b1) - t0 - t1) % P)


def fp2_sqr(a):
    a0, a1 = a
    return ((a0 + a1) * (a0 - a1) % P, (2 * a0 * a1) % P)


def fp2_scale(a, k):
    return ((a[0] * k) % P, (a[1] * k) % P)


def fp2_inv(a):
    a0, a1 = a
    norm_inv = gmpy2.invert(a0 * a0 + a1 * a1, P)
    return ((a0 * norm_inv) % P, (-a1 * norm_inv) % P)


def fp2_mul_xi(a):
    # (a0 + a1 u) * (9 + u) = (9 a0 - a1) + (a0 + 9 a1) u
    a0, a1 = a
    return ((9 * a0 - a1) % P, (a0 + 9 * a1) % P)


def fp2_pow(a, e):
    result = FP2_ONE
    base = a
    e = int(e)
    while e:
        if e & 1:
            result = fp2_mul(result, base)
        base = fp2_sqr(base)
        e >>= 1
    return result


# -- Fp6 ----------------------------------------------------------------------

FP6_ZERO = (FP2_ZERO, FP2_ZERO, FP2_ZERO)
FP6_ONE = (FP2_ONE, FP2_ZERO, FP2_ZERO)


def fp6_add(a, b):
    return (fp2_add(a[0], b[0]), fp2_add(a[1], b[1]), fp2_add(a[2], b[2]))


def fp6_sub(a, b):
    return (fp2_sub(a[0], b[0]), fp2_sub(a[1], b[1]), fp2_sub(a[2], b[2]))


def fp6_neg(a):
    return (fp2_neg(a[0]), fp2_neg(a[1]), fp2_neg(a[2]))


def fp6_mul(a, b):
    a0, a1, a2 = a
    b0, b1, b2 = b
    t0 = fp2_mul(a0, b0)
    t1 = fp2_mul(a1, b1)
    t2 = fp2_mul(a2, b2)
    c0 = fp2_add(t0, fp2_mul_xi(fp2_sub(fp2_mul(fp2_add(a1, a2), fp2_add(b1, b2)), fp2_add(t1, t2))))
    c1 = fp2_add(fp2_sub(fp2_mul(fp2_add(a0, a1), fp2_add(b0, b1)), fp2_add(t0, t1)), fp2_mul_xi(t2))
    c2 = fp2_add(fp2_sub(fp2_mul(fp2_add(a0, a2), fp2_add(b0, b2)), fp2_add(t0, t2)), t1)
    return (c0, c1, c2)


def fp6_sqr(a):
    return fp6_mul(a, a)


def fp6_mul_v(a):
    # (c0 + c1 v + c2 v^2) * v = xi c2 + c0 v + c1 v^2
    return (fp2_mul_xi(a[2]), a[0], a[1])


def fp6_inv(a):
    a0, a1, a2 = a
    c0 = fp2_sub(fp2_sqr(a0), fp2_mul_xi(fp2_mul(a1, a2)))
    c1 = fp2_sub(fp2_mul_xi(fp2_sqr(a2)), fp2_mul(a0, a1))
    c2 = fp2_sub(fp2_sqr(a1), fp2_mul(a0, a2))
    t = fp2_add(
        fp2_mul_xi(fp2_add(fp2_mul(a2, c1), fp2_mul(a1, c2))),
        fp2_mul(a0, c0),
    )
    t_inv = fp2_inv(t)
    return (fp2_mul(c0, t_inv), fp2_mul(c1, t_inv), fp2_mul(c2, t_inv))


# -- Fp12 ---------------------------------------------------------------------

FP12_ONE = (FP6_ONE, FP6_ZERO)


def fp12_mul(a, b):
    a0, a1 = a
    b0, b1 = b
    t0 = fp6_mul(a0, b0)
    t1 = fp6_mul(a1, b1)
    c1 = fp6_sub(fp6_mul(fp6_add(a0, a1), fp6_add(b0, b1)), fp6_add(t0, t1))
    return (fp6_add(t0, fp6_mul_v(t1)), c1)


def fp12_sqr(a):
    a0, a1 = a
    t = fp6_mul(a0, a1)
    c0 = fp6_sub(
        fp6_mul(fp6_add(a0, a1), fp6_add(a0, fp6_mul_v(a1))),
        fp6_add(t, fp6_mul_v(t)),
    )
    return (c0, fp6_add(t, t))


def fp12_conj(a):
    return (a[0], fp6_neg(a[1]))


def fp12_inv(a):
    a0, a1 = a
    t = fp6_inv(fp6_sub(fp6_sqr(a0), fp6_mul_v(fp6_sqr(a1))))
    return (fp6_mul(a0, t), fp6_neg(fp6_mul(a1, t)))


def fp12_pow(a, e):
    result = FP12_ONE
    base = a
    e = int(e)
    while e:
        if e & 1:
            result = fp12_mul(result, base)
        base = fp12_sqr(base)
        e >>= 1
    return result


def fp12_mul_sparse(f, c0, c1, c3):
    """Multiply f by the line element c0 + c1*w + c3*v*w (c0,c1,c3 in Fp2)."""
    f0, f1 = f
    g0 = (c0, FP2_ZERO, FP2_ZERO)
    g1 = (c1, c3, FP2_ZERO)
    t0 = fp6_mul(f0, g0)
    t1 = fp6_mul(f1, g1)
    c1_out = fp6_sub(fp6_mul(fp6_add(f0, f1), fp6_add(g0, g1)), fp6_add(t0, t1))
    return (fp6_add(t0, fp6_mul_v(t1)), c1_out)


# Frobenius coefficients: w^(p^i - 1) factors per tower slot.
_G1C = fp2_pow(XI, (P - 1) // 6)            # xi^((p-1)/6)
_FROB_W = _G1C                               # w^p = FROB_W * w
_FROB_V1 = fp2_pow(XI, (P - 1) // 3)         # v^p = FROB_V1 * v
_FROB_V2 = fp2_pow(XI, 2 * (P - 1) // 3)     # (v^2)^p = FROB_V2 * v^2
_TWIST_FROB_X = fp2_pow(XI, (P - 1) // 3)
_TWIST_FROB_Y = fp2_pow(XI, (P - 1) // 2)
# pi^2 acts on the twist by scalar factors in Fp.
_TWIST_FROB2_X = fp2_pow(XI, (P * P - 1) // 3)[0]
_TWIST_FROB2_Y = fp2_pow(XI, (P * P - 1) // 2)[0]


def fp6_frobenius(a):
    return (
        fp2_conj(a[0]),
        fp2_mul(fp2_conj(a[1]), _FROB_V1),
        fp2_mul(fp2_conj(a[2]), _FROB_V2),
    )


def fp12_frobenius(a):
    a0, a1 = a
    h = fp6_frobenius(a1)
    return (
        fp6_frobenius(a0),
        (fp2_mul(h[0], _FROB_W), fp2_mul(h[1], _FROB_W), fp2_mul(h[2], _FROB_W)),
    )


# -- G1 -----------------------------------------------------------------------

G1_B = mpz(3)
G1_GEN = (mpz(1), mpz(2))


def g1_is_on_curve(pt) -> bool:
    if pt is None:
        return True
    x, y = pt
    if not (0 <= x < P and 0 <= y < P):
        return False
    return (y * y - x * x * x - G1_B) % P == 0


def g1_neg(pt):
    if pt is None:
        return None
    return (pt[0], (-pt[1]) % P)


def g1_add(p1, p2):
    if p1 is None:
        return p2
    if p2 is None:
        return p1
    x1, y1 = p1
    x2, y2 = p2
    if x1 == x2:
        if (y1 + y2) % P == 0:
            return None
        lam = (3 * x1 * x1) * fp_inv(2 * y1) % P
    else:
        lam = (y2 - y1) * fp_inv(x2 - x1) % P
    x3 = (lam * lam - x1 - x2) % P
    return (x3, (lam * (x1 - x3) - y1) % P)


def g1_double_jac(X1, Y1, Z1):
    # dbl-2009-l: 2M + 5S for a = 0 curves
    A = (X1 * X1) % P
    B = (Y1 * Y1) % P
    C = (B * B) % P
    D = (2 * ((X1 + B) * (X1 + B) - A - C)) % P
    E = (3 * A) % P
    F = (E * E) % P
    X3 = (F - 2 * D) % P
    Y3 = (E * (D - X3) - 8 * C) % P
    Z3 = (2 * Y1 * Z1) % P
    return X3, Y3, Z3


def g1_madd_jac(X1, Y1, Z1, x2, y2):
    # madd-2007-bl: mixed Jacobian + affine
    if Z1 == 0:
        return x2, y2, mpz(1)
    Z1Z1 = (Z1 * Z1) % P
    U2 = (x2 * Z1Z1) % P
    S2 = (y2 * Z1 * Z1Z1) % P
    H = (U2 - X1) % P
    r = (2 * (S2 - Y1)) % P
    if H == 0:
        if r == 0:
            return g1_double_jac(X1, Y1, Z1)
        return mpz(0), mpz(1), mpz(0)
    HH = (H * H) % P
    I = (4 * HH) % P
    J = (H * I) % P
    V = (X1 * I) % P
    X3 = (r * r - J - 2 * V) % P
    Y3 = (r * (V - X3) - 2 * Y1 * J) % P
    Z3 = ((Z1 + H) * (Z1 + H) - Z1Z1 - HH) % P
    return X3, Y3, Z3


def g1_add_jac(p1, p2):
    X1, Y1, Z1 = p1
    X2, Y2, Z2 = p2
    if Z1 == 0:
        return p2
    if Z2 == 0:
        return p1
    Z1Z1 = (Z1 * Z1) % P
    Z2Z2 = (Z2 * Z2) % P
    U1 = (X1 * Z2Z2) % P
    U2 = (X2 * Z1Z1) % P
    S1 = (Y1 * Z2 * Z2Z2) % P
    S2 = (Y2 * Z1 * Z1Z1) % P
    H = (U2 - U1) % P
    r = (2 * (S2 - S1)) % P
    if H == 0:
        if r == 0:
            return g1_double_jac(X1, Y1, Z1)
        return (mpz(0), mpz(1), mpz(0))
    I = (4 * H * H) % P
    J = (H * I) % P
    V = (U1 * I) % P
    X3 = (r * r - J - 2 * V) % P
    Y3 = (r * (V - X3) - 2 * S1 * J) % P
    Z3 = ((Z1 + Z2) * (Z1 + Z2) - Z1Z1 - Z2Z2) % P
    Z3 = (Z3 * H) % P
    return X3, Y3, Z3


def g1_jac_to_affine(pt):
    X, Y, Z = pt
    if Z == 0:
        return None
    zi = fp_inv(Z)
    zi2 = (zi * zi) % P
    return ((X * zi2) % P, (Y * zi2 * zi) % P)


def g1_scalar_mul(pt, k):
    k = int(k) % int(R)
    if k == 0 or pt is None:
        return None
    acc = (mpz(0), mpz(1), mpz(0))
    x, y = pt
    for bit in bin(k)[2:]:
        acc = g1_double_jac(*acc)
        if bit == "1":
            acc = g1_madd_jac(*acc, x, y)
    return g1_jac_to_affine(acc)


def g1_batch_jac_to_affine(points):
    """Normalize many Jacobian points with one field inversion."""
    nonzero = [(i, pt) for i, pt in enumerate(points) if pt[2] != 0]
    out = [None] * len(points)
    if not nonzero:
        return out
    zs = [pt[2] for _, pt in nonzero]
    prefix = [mpz(1)] * (len(zs) + 1)
    for i, z in enumerate(zs):
        prefix[i + 1] = (prefix[i] * z) % P
    acc = fp_inv(prefix[-1])
    invs = [mpz(0)] * len(zs)
    for i in range(len(zs) - 1, -1, -1):
        invs[i] = (prefix[i] * acc) % P
        acc = (acc * zs[i]) % P
    for (i, (X, Y, _)), zi in zip(nonzero, invs):
        zi2 = (zi * zi) % P
        out[i] = ((X * zi2) % P, (Y * zi2 * zi) % P)
    return out


# -- G2 (on the twist, coordinates in Fp2) -------------------------------------

G2_B = fp2_mul(( G1_B, mpz(0) ), fp2_inv(XI))
G2_GEN = (
    (
        mpz(10857046999023057135944570762232829481370756359578518086990519993285655852781),
        mpz(11559732032986387107991004021392285783925812861821192530917403151452391805634),
    ),
    (
        mpz(8495653923123431417604973247489272438418190587263600148770280649306958101930),
        mpz(4082367875863433681332203403145435568316851327593401208105741076214120093531),
    ),
)


def g2_is_on_curve(pt) -> bool:
    if pt is None:
        return True
    x, y = pt
    if not all(0 <= c < P for c in (*x, *y)):
        return False
    lhs = fp2_sqr(y)
    rhs = fp2_add(fp2_mul(fp2_sqr(x), x), G2_B)
    return lhs == rhs


def g2_neg(pt):
    if pt is None:
        return None
    return (pt[0], fp2_neg(pt[1]))


def g2_add(p1, p2):
    if p1 is None:
        return p2
    if p2 is None:
        return p1
    x1, y1 = p1
    x2, y2 = p2
    if x1 == x2:
        if fp2_add(y1, y2) == FP2_ZERO:
            return None
        lam = fp2_mul(fp2_scale(fp2_sqr(x1), 3), fp2_inv(fp2_scale(y1, 2)))
    else:
        lam = fp2_mul(fp2_sub(y2, y1), fp2_inv(fp2_sub(x2, x1)))
    x3 = fp2_sub(fp2_sub(fp2_sqr(lam), x1), x2)
    return (x3, fp2_sub(fp2_mul(lam, fp2_sub(x1, x3)), y1))


def g2_scalar_mul(pt, k):
    k = int(k) % int(R)
    if k == 0 or pt is None:
        return None
    acc = None
    for bit in bin(k)[2:]:
        acc = g2_add(acc, acc)
        if bit == "1":
            acc = g2_add(acc, pt)
    return acc


def g2_in_subgroup(pt) -> bool:
    """Prime-order check: the twist has a large cofactor, so multiply by the
    full group order without reducing the scalar."""
    if pt is None:
        return True
    if not g2_is_on_curve(pt):
        return False
    acc = None
    for bit in bin(int(R))[2:]:
        acc = g2_add(acc, acc)
        if bit == "1":
            acc = g2_add(acc, pt)
    return acc is None


def g2_frobenius(pt):
    if pt is None:
        return None
    x, y = pt
    return (
        fp2_mul(fp2_conj(x), _TWIST_FROB_X),
        fp2_mul(fp2_conj(y), _TWIST_FROB_Y),
    )


def g2_frobenius2(pt):
    if pt is None:
        return None
    x, y = pt
    return (fp2_scale(x, _TWIST_FROB2_X), fp2_scale(y, _TWIST_FROB2_Y))


# -- pairing ------------------------------------------------------------------

def _naf(n: int):
    digits = []
    while n:
        if n & 1:
            d = 2 - (n % 4)
            n -= d
        else:
            d = 0
        digits.append(d)
        n >>= 1
    return digits


_ATE_NAF = _naf(int(ATE_LOOP_COUNT))[::-1][1:]


def _line_double(t, p):
    """Line through T,T on the twist, evaluated at P in G1; returns (coeffs, 2T)."""
    x, y = t
    xp, yp = p
    lam = fp2_mul(fp2_scale(fp2_sqr(x), 3), fp2_inv(fp2_scale(y, 2)))
    x3 = fp2_sub(fp2_sqr(lam), fp2_scale(x, 2))
    y3 = fp2_sub(fp2_mul(lam, fp2_sub(x, x3)), y)
    c0 = (yp, mpz(0))
    c1 = fp2_scale(fp2_neg(lam), xp)
    c3 = fp2_sub(fp2_mul(lam, x), y)
    return (c0, c1, c3), (x3, y3)


def _line_add(t, q, p):
    """Line through T,Q on the twist, evaluated at P in G1; returns (coeffs, T+Q)."""
    xt, yt = t
    xq, yq = q
    xp, yp = p
    lam = fp2_mul(fp2_sub(yt, yq), fp2_inv(fp2_sub(xt, xq)))
    x3 = fp2_sub(fp2_sub(fp2_sqr(lam), xt), xq)
    y3 = fp2_sub(fp2_mul(lam, fp2_sub(xt, x3)), yt)
    c0 = (yp, mpz(0))
    c1 = fp2_scale(fp2_neg(lam), xp)
    c3 = fp2_sub(fp2_mul(lam, xq), yq)
    return (c0, c1, c3), (x3, y3)


def miller_loop(pairs):
    """Product of Miller functions over a list of (G1 affine, G2 affine) pairs."""
    live = [(p, q) for p, q in pairs if p is not None and q is not None]
    f = FP12_ONE
    if not live:
        return f
    ts = [q for _, q in live]
    for digit in _ATE_NAF:
        f = fp12_sqr(f)
        for i, (p, q) in enumerate(live):
            coeffs, ts[i] = _line_double(ts[i], p)
            f = fp12_mul_sparse(f, *coeffs)
        if digit:
            for i, (p, q) in enumerate(live):
                qq = q if digit == 1 else g2_neg(q)
                coeffs, ts[i] = _line_add(ts[i], qq, p)
                f = fp12_mul_sparse(f, *coeffs)
    for i, (p, q) in enumerate(live):
        q1 = g2_frobenius(q)
        coeffs, ts[i] = _line_add(ts[i], q1, p)
        f = fp12_mul_sparse(f, *coeffs)
        q2 = g2_neg(g2_frobenius2(q))
        coeffs, ts[i] = _line_add(ts[i], q2, p)
        f = fp12_mul_sparse(f, *coeffs)
    return f


_HARD_EXPONENT = (P ** 4 - P ** 2 + 1) // R


def final_exponentiation(f):
    # easy part: f^((p^6 - 1)(p^2 + 1))
    t = fp12_mul(fp12_conj(f), fp12_inv(f))
    t = fp12_mul(fp12_frobenius(fp12_frobenius(t)), t)
    # hard part: direct square-and-multiply by (p^4 - p^2 + 1)/r
    return fp12_pow(t, _HARD_EXPONENT)


def pairing(p, q):
    """Reduced optimal ate pairing e(P, Q) for P in G1, Q in G2 (twist coords)."""
    if p is None or q is None:
        return FP12_ONE
    return final_exponentiation(miller_loop([(p, q)]))


def pairing_product_is_one(pairs) -> bool:
    """Check prod e(P_i, Q_i) == 1 with a shared final exponentiation."""
    return final_exponentiation(miller_loop(pairs)) == FP12_ONE


# -- serialization --------------------------------------------------------------

G1_BYTES = 64
G2_BYTES = 128


def g1_to_bytes(pt) -> bytes:
    if pt is None:
        return b"\x00" * G1_BYTES
    return int(pt[0]).to_bytes(32, "big") + int(pt[1]).to_bytes(32, "big")


def g1_from_bytes(data: bytes):
    if len(data) != G1_BYTES:
        raise ValueError("G1 point must be 64 bytes")
    if data == b"\x00" * G1_BYTES:
        return None
    x = mpz(int.from_bytes(data[:32], "big"))
    y = mpz(int.from_bytes(data[32:], "big"))
    pt = (x, y)
    if not g1_is_on_curve(pt):
        raise ValueError("G1 point not on curve")
    return pt


def g2_to_bytes(pt) -> bytes:
    if pt is None:
        return b"\x00" * G2_BYTES
    (x0, x1), (y0, y1) = pt
    return b"".join(int(c).to_bytes(32, "big") for c in (x0, x1, y0, y1))


def g2_from_bytes(data: bytes, subgroup_check: bool = False):
    if len(data) != G2_BYTES:
        raise ValueError("G2 point must be 128 bytes")
    if data == b"\x00" * G2_BYTES:
        return None
    c = [mpz(int.from_bytes(data[i * 32:(i + 1) * 32], "big")) for i in range(4)]
    pt = ((c[0], c[1]), (c[2], c[3]))
    if not g2_is_on_curve(pt):
        raise ValueError("G2 point not on curve")
    if subgroup_check and not g2_in_subgroup(pt):
        raise ValueError("G2 point not in the prime-order subgroup")
    return pt
