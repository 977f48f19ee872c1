"""Pairing-based proving backend (Groth16 construction over alt_bn128).

Keys come from a single-party local setup: this process samples the
toxic scalars itself, so anyone who observed them could forge proofs.
That is acceptable for a prototype and loudly NOT acceptable for
production use; a real deployment needs a multi-party ceremony.

The prover is tuned for interactive latency in pure Python:

* per-wire/basis points carry precomputed 2^(8w) window tables, so every
  multi-scalar multiplication becomes one bucket pass over byte digits;
* the two multiplications that do not depend on earlier results (the H
  polynomial and the G2 side of B) can run on a forked worker process.

Proofs are 3 curve points; verification is a 4-way pairing product.
"""

from __future__ import annotations

import hashlib
import multiprocessing
import os
import secrets
from dataclasses import dataclass

import gmpy2

from ..circuit import ConstraintSystem
from ..errors import MalformedProof, UnsatisfiedWitness
from ..fieldmath import R, mpz
from . import bn254 as ec
from .bn254 import P

# -- deterministic scalar sampling -------------------------------------------

def scalar_stream(seed: bytes, label: bytes):
    """Yield field elements from SHA-256 in counter mode (setup only)."""
    counter = 0
    while True:
        block = hashlib.sha256(
            b"zkaccess/groth16\x00" + label + b"\x00" + seed + counter.to_bytes(8, "big")
        ).digest()
        block += hashlib.sha256(block).digest()
        yield mpz(int.from_bytes(block[:48], "big")) % R
        counter += 1


def _random_scalar():
    return mpz(secrets.randbits(384)) % R


# -- FFT over the scalar field -------------------------------------------------

_GENERATOR = mpz(5)  # multiplicative generator of F_R, drives the coset shift
_TWO_ADICITY = 28

_root_cache: dict = {}


def _root_of_unity(size: int):
    cached = _root_cache.get(size)
    if cached is None:
        assert size & (size - 1) == 0 and size <= 1 << _TWO_ADICITY
        cached = gmpy2.powmod(_GENERATOR, (R - 1) // size, R)
        _root_cache[size] = cached
    return cached


def _fft(values, root):
    n = len(values)
    a = list(values)
    j = 0
    for i in range(1, n):
        bit = n >> 1
        while j & bit:
            j ^= bit
            bit >>= 1
        j |= bit
        if i < j:
            a[i], a[j] = a[j], a[i]
    length = 2
    while length <= n:
        step = gmpy2.powmod(root, n // length, R)
        half = length >> 1
        for start in range(0, n, length):
            w = mpz(1)
            for k in range(start, start + half):
                u = a[k]
                v = a[k + half] * w % R
                a[k] = (u + v) % R
                a[k + half] = (u - v) % R
                w = w * step % R
        length <<= 1
    return a


def _ifft(values, root):
    n = len(values)
    inv_n = gmpy2.invert(mpz(n), R)
    out = _fft(values, gmpy2.invert(root, R))
    return [x * inv_n % R for x in out]


# -- fixed-base MSM with window tables -----------------------------------------

_WINDOWS = 32  # 256-bit scalars in byte digits


def build_g1_tables(bases):
    """Per-base window tables [2^(8w) * base] as affine points; None rows kept."""
    tables = [None if b is None else [] for b in bases]
    jacs = [None if b is None else (b[0], b[1], mpz(1)) for b in bases]
    for w in range(_WINDOWS):
        live = [(i, j) for i, j in enumerate(jacs) if j is not None]
        affine = ec.g1_batch_jac_to_affine([j for _, j in live])
        for (i, _), aff in zip(live, affine):
            tables[i].append(aff)
        if w == _WINDOWS - 1:
            break
        for i, j in live:
            X, Y, Z = j
            for _ in range(8):
                X, Y, Z = ec.g1_double_jac(X, Y, Z)
            jacs[i] = (X, Y, Z)
    return tables


def msm_g1_tabled(tables, scalars):
    """Sum of scalar[i] * base[i] using precomputed tables; Jacobian result."""
    buckets = [None] * 256
    for tbl, s in zip(tables, scalars):
        s = int(s)
        if s == 0 or tbl is None:
            continue
        w = 0
        while s:
            d = s & 255
            if d:
                pt = tbl[w]
                b = buckets[d]
                if b is None:
                    buckets[d] = (pt[0], pt[1], mpz(1))
                else:
                    # inlined mixed add (madd-2007-bl), hot path
                    X1, Y1, Z1 = b
                    x2, y2 = pt
                    Z1Z1 = Z1 * Z1 % P
                    U2 = x2 * Z1Z1 % P
                    S2 = y2 * Z1 % P * Z1Z1 % P
                    H = (U2 - X1) % P
                    r2 = (2 * (S2 - Y1)) % P
                    if H == 0:
                        buckets[d] = (
                            ec.g1_double_jac(X1, Y1, Z1) if r2 == 0
                            else (mpz(0), mpz(1), mpz(0))
                        )
                    else:
                        HH = H * H % P
                        I = 4 * HH % P
                        J = H * I % P
                        V = X1 * I % P
                        X3 = (r2 * r2 - J - 2 * V) % P
                        buckets[d] = (
                            X3,
                            (r2 * (V - X3) - 2 * Y1 * J) % P,
                            ((Z1 + H) * (Z1 + H) - Z1Z1 - HH) % P,
                        )
            s >>= 8
            w += 1
    acc = None
    total = None
    for d in range(255, 0, -1):
        b = buckets[d]
        if b is not None:
            acc = b if acc is None else ec.g1_add_jac(acc, b)
        if acc is not None:
            total = acc if total is None else ec.g1_add_jac(total, acc)
    return total


def _g2_madd(acc, pt):
    """Mixed Jacobian+affine addition over Fp2, component-inlined hot path."""
    if acc is None:
        return (pt[0], pt[1], ec.FP2_ONE)
    (X10, X11), (Y10, Y11), (Z10, Z11) = acc
    (x20, x21), (y20, y21) = pt
    # Z1Z1 = Z1^2
    zz0 = (Z10 + Z11) * (Z10 - Z11) % P
    zz1 = 2 * Z10 * Z11 % P
    # U2 = x2 * Z1Z1
    t0 = x20 * zz0
    t1 = x21 * zz1
    u20 = (t0 - t1) % P
    u21 = ((x20 + x21) * (zz0 + zz1) - t0 - t1) % P
    # S2 = y2 * Z1 * Z1Z1
    t0 = y20 * Z10
    t1 = y21 * Z11
    s0 = (t0 - t1) % P
    s1 = ((y20 + y21) * (Z10 + Z11) - t0 - t1) % P
    t0 = s0 * zz0
    t1 = s1 * zz1
    s20 = (t0 - t1) % P
    s21 = ((s0 + s1) * (zz0 + zz1) - t0 - t1) % P
    # H = U2 - X1 ; r = 2 (S2 - Y1)
    h0 = (u20 - X10) % P
    h1 = (u21 - X11) % P
    r0 = 2 * (s20 - Y10) % P
    r1 = 2 * (s21 - Y11) % P
    if h0 == 0 and h1 == 0:
        if r0 == 0 and r1 == 0:
            return _g2_double_jac(acc)
        return None
    hh0 = (h0 + h1) * (h0 - h1) % P
    hh1 = 2 * h0 * h1 % P
    i0 = 4 * hh0 % P
    i1 = 4 * hh1 % P
    t0 = h0 * i0
    t1 = h1 * i1
    j0 = (t0 - t1) % P
    j1 = ((h0 + h1) * (i0 + i1) - t0 - t1) % P
    t0 = X10 * i0
    t1 = X11 * i1
    v0 = (t0 - t1) % P
    v1 = ((X10 + X11) * (i0 + i1) - t0 - t1) % P
    rr0 = (r0 + r1) * (r0 - r1) % P
    rr1 = 2 * r0 * r1 % P
    X30 = (rr0 - j0 - 2 * v0) % P
    X31 = (rr1 - j1 - 2 * v1) % P
    w0 = (v0 - X30) % P
    w1 = (v1 - X31) % P
    t0 = r0 * w0
    t1 = r1 * w1
    a0 = (t0 - t1) % P
    a1 = ((r0 + r1) * (w0 + w1) - t0 - t1) % P
    t0 = Y10 * j0
    t1 = Y11 * j1
    b0 = (t0 - t1) % P
    b1 = ((Y10 + Y11) * (j0 + j1) - t0 - t1) % P
    Y30 = (a0 - 2 * b0) % P
    Y31 = (a1 - 2 * b1) % P
    zh0 = (Z10 + h0) % P
    zh1 = (Z11 + h1) % P
    Z30 = ((zh0 + zh1) * (zh0 - zh1) - zz0 - hh0) % P
    Z31 = (2 * zh0 * zh1 - zz1 - hh1) % P
    return ((X30, X31), (Y30, Y31), (Z30, Z31))


def _g2_double_jac(pt):
    (X0, X1), (Y0, Y1), (Z0, Z1) = pt
    a0 = (X0 + X1) * (X0 - X1) % P
    a1 = 2 * X0 * X1 % P
    b0 = (Y0 + Y1) * (Y0 - Y1) % P
    b1 = 2 * Y0 * Y1 % P
    c0 = (b0 + b1) * (b0 - b1) % P
    c1 = 2 * b0 * b1 % P
    xb0 = (X0 + b0) % P
    xb1 = (X1 + b1) % P
    d0 = 2 * ((xb0 + xb1) * (xb0 - xb1) - a0 - c0) % P
    d1 = 2 * (2 * xb0 * xb1 - a1 - c1) % P
    e0 = 3 * a0 % P
    e1 = 3 * a1 % P
    f0 = (e0 + e1) * (e0 - e1) % P
    f1 = 2 * e0 * e1 % P
    X30 = (f0 - 2 * d0) % P
    X31 = (f1 - 2 * d1) % P
    w0 = (d0 - X30) % P
    w1 = (d1 - X31) % P
    t0 = e0 * w0
    t1 = e1 * w1
    Y30 = (t0 - t1 - 8 * c0) % P
    Y31 = ((e0 + e1) * (w0 + w1) - t0 - t1 - 8 * c1) % P
    t0 = Y0 * Z0
    t1 = Y1 * Z1
    Z30 = 2 * (t0 - t1) % P
    Z31 = 2 * ((Y0 + Y1) * (Z0 + Z1) - t0 - t1) % P
    return ((X30, X31), (Y30, Y31), (Z30, Z31))


def _g2_jac_to_affine(pt):
    if pt is None:
        return None
    X, Y, Z = pt
    if Z == ec.FP2_ZERO:
        return None
    zi = ec.fp2_inv(Z)
    zi2 = ec.fp2_sqr(zi)
    return (ec.fp2_mul(X, zi2), ec.fp2_mul(Y, ec.fp2_mul(zi2, zi)))


def build_g2_tables(bases):
    tables = [None if b is None else [] for b in bases]
    jacs = [None if b is None else (b[0], b[1], ec.FP2_ONE) for b in bases]
    for w in range(_WINDOWS):
        for i, j in enumerate(jacs):
            if j is None:
                continue
            tables[i].append(_g2_jac_to_affine(j))
            if w < _WINDOWS - 1:
                cur = j
                for _ in range(8):
                    cur = _g2_double_jac(cur)
                jacs[i] = cur
    return tables


def msm_g2_tabled(tables, scalars):
    buckets = [None] * 256
    for tbl, s in zip(tables, scalars):
        s = int(s)
        if s == 0 or tbl is None:
            continue
        w = 0
        while s:
            d = s & 255
            if d:
                buckets[d] = _g2_madd(buckets[d], tbl[w])
            s >>= 8
            w += 1
    acc = None
    total = None

    def jadd(a, b):
        if a is None:
            return b
        if b is None:
            return a
        # general Jacobian-Jacobian add via affine fallback (rare path)
        return _g2_madd(a, _g2_jac_to_affine(b))

    for d in range(255, 0, -1):
        b = buckets[d]
        if b is not None:
            acc = jadd(acc, b)
        if acc is not None:
            total = jadd(total, acc)
    return _g2_jac_to_affine(total) if total is not None else None


# -- key material ---------------------------------------------------------------

@dataclass
class Groth16ProvingKey:
    bit_width: int
    alpha1: tuple
    beta1: tuple
    delta1: tuple
    beta2: tuple
    delta2: tuple
    a_query: list      # per wire, G1 (None when the polynomial is zero)
    b1_query: list     # per wire, G1
    b2_query: list     # per wire, G2
    l_query: list      # per private wire, G1
    h_query: list      # per H coefficient, G1
    domain_size: int


@dataclass
class Groth16VerificationKey:
    bit_width: int
    alpha1: tuple
    beta2: tuple
    gamma2: tuple
    delta2: tuple
    ic: list           # per public wire (const first), G1


def _lagrange_at(tau, size: int):
    """Values L_i(tau) over the radix-2 domain, one batch inversion."""
    root = _root_of_unity(size)
    z_tau = (gmpy2.powmod(tau, size, R) - 1) % R
    if z_tau == 0:
        raise ValueError("trusted-setup point landed in the domain; reseed")
    omega_i = [mpz(1)] * size
    for i in range(1, size):
        omega_i[i] = omega_i[i - 1] * root % R
    denominators = [(tau - w) % R for w in omega_i]
    prefix = [mpz(1)] * (size + 1)
    for i, d in enumerate(denominators):
        prefix[i + 1] = prefix[i] * d % R
    acc = gmpy2.invert(prefix[size], R)
    inv = [mpz(0)] * size
    for i in range(size - 1, -1, -1):
        inv[i] = prefix[i] * acc % R
        acc = acc * denominators[i] % R
    scale = z_tau * gmpy2.invert(mpz(size), R) % R
    return [scale * omega_i[i] % R * inv[i] % R for i in range(size)]


def groth16_setup(cs: ConstraintSystem, seed: bytes | None = None):
    """Single-party key generation (insecure for production by design)."""
    if seed is None:
        seed = secrets.token_bytes(32)
    draw = scalar_stream(seed, b"setup")
    tau = alpha = beta = gamma = delta = None
    while True:
        tau, alpha, beta, gamma, delta = (next(draw) for _ in range(5))
        if all(x != 0 for x in (tau, alpha, beta, gamma, delta)):
            try:
                size = 1 << (len(cs.constraints) - 1).bit_length()
                lagrange = _lagrange_at(tau, size)
                break
            except ValueError:
                continue

    n_wires = cs.num_wires
    a_tau = [mpz(0)] * n_wires
    b_tau = [mpz(0)] * n_wires
    c_tau = [mpz(0)] * n_wires
    for i, (fa, fb, fc) in enumerate(cs.constraints):
        li = lagrange[i]
        for wire, coeff in fa:
            a_tau[wire] = (a_tau[wire] + li * coeff) % R
        for wire, coeff in fb:
            b_tau[wire] = (b_tau[wire] + li * coeff) % R
        for wire, coeff in fc:
            c_tau[wire] = (c_tau[wire] + li * coeff) % R

    g1, g2 = ec.G1_GEN, ec.G2_GEN
    gamma_inv = gmpy2.invert(gamma, R)
    delta_inv = gmpy2.invert(delta, R)
    n_public = 1 + len(cs.public_indices)

    def g1_mul(k):
        return ec.g1_scalar_mul(g1, k)

    def g2_mul(k):
        return ec.g2_scalar_mul(g2, k)

    a_query = [g1_mul(a_tau[m]) for m in range(n_wires)]
    b1_query = [g1_mul(b_tau[m]) for m in range(n_wires)]
    b2_query = [g2_mul(b_tau[m]) for m in range(n_wires)]
    l_query = [
        g1_mul((beta * a_tau[m] + alpha * b_tau[m] + c_tau[m]) % R * delta_inv % R)
        for m in range(n_public, n_wires)
    ]
    ic = [
        g1_mul((beta * a_tau[m] + alpha * b_tau[m] + c_tau[m]) % R * gamma_inv % R)
        for m in range(n_public)
    ]
    z_tau = (gmpy2.powmod(tau, size, R) - 1) % R
    tau_pow = mpz(1)
    h_query = []
    for _ in range(size - 1):
        h_query.append(g1_mul(tau_pow * z_tau % R * delta_inv % R))
        tau_pow = tau_pow * tau % R

    pk = Groth16ProvingKey(
        bit_width=cs.bit_width,
        alpha1=g1_mul(alpha), beta1=g1_mul(beta), delta1=g1_mul(delta),
        beta2=g2_mul(beta), delta2=g2_mul(delta),
        a_query=a_query, b1_query=b1_query, b2_query=b2_query,
        l_query=l_query, h_query=h_query, domain_size=size,
    )
    vk = Groth16VerificationKey(
        bit_width=cs.bit_width,
        alpha1=pk.alpha1, beta2=pk.beta2,
        gamma2=g2_mul(gamma), delta2=pk.delta2, ic=ic,
    )
    return pk, vk


# -- prover ---------------------------------------------------------------------

_worker_tables = None


def _worker_init():
    pass


def _worker_msm(args):
    kind, scalars = args
    l_tables, b2_tables = _worker_tables
    if kind == "l+b2":
        l_scalars, b2_scalars = scalars
        l_part = msm_g1_tabled(l_tables, l_scalars)
        b2_part = msm_g2_tabled(b2_tables, b2_scalars)
        l_aff = ec.g1_jac_to_affine(l_part) if l_part is not None else None
        return (
            ec.g1_to_bytes(l_aff),
            ec.g2_to_bytes(b2_part),
        )
    raise ValueError(kind)


class ProverContext:
    """Precomputed tables plus an optional forked helper process."""

    def __init__(self, pk: Groth16ProvingKey, cs: ConstraintSystem,
                 parallel: bool | None = None):
        self.pk = pk
        self.cs = cs
        n_public = 1 + len(cs.public_indices)
        self.n_public = n_public
        self.a_tables = build_g1_tables(pk.a_query + [pk.delta1])
        self.b1_tables = build_g1_tables(pk.b1_query + [pk.delta1])
        self.l_tables = build_g1_tables(pk.l_query + [pk.delta1])
        self.h_tables = build_g1_tables(pk.h_query)
        self.b2_tables = build_g2_tables(pk.b2_query + [pk.delta2])
        if parallel is None:
            parallel = (
                os.environ.get("ZKACCESS_PROVE_SERIAL") != "1"
                and hasattr(os, "fork")
                and (os.cpu_count() or 1) >= 2
            )
        self._pool = None
        if parallel:
            global _worker_tables
            _worker_tables = (self.l_tables, self.b2_tables)
            ctx = multiprocessing.get_context("fork")
            self._pool = ctx.Pool(1, initializer=_worker_init)

    def close(self):
        if self._pool is not None:
            self._pool.terminate()
            self._pool = None

    def __del__(self):
        try:
            self.close()
        except Exception:
            pass

    def prove(self, statement, witness):
        cs, pk = self.cs, self.pk
        statement.validate()
        witness.validate(cs.bit_width)
        values = cs.assignment(statement, witness)
        evals = cs.eval_constraints(values)
        if not all((a * b - c) % R == 0 for a, b, c in evals):
            raise UnsatisfiedWitness("witness does not satisfy the circuit")

        size = pk.domain_size
        root = _root_of_unity(size)
        pad = size - len(evals)
        aw = [e[0] for e in evals] + [mpz(0)] * pad
        bw = [e[1] for e in evals] + [mpz(0)] * pad
        cw = [e[2] for e in evals] + [mpz(0)] * pad

        r = _random_scalar()
        s = _random_scalar()
        wv = values
        priv_scalars = wv[self.n_public:] + [(-r * s) % R]
        b2_scalars = wv + [s]

        # The worker's half (private-wire sum and the G2 side of B) only
        # needs the witness, so it is dispatched before the FFT work.
        async_result = None
        if self._pool is not None:
            async_result = self._pool.apply_async(
                _worker_msm, (("l+b2", (priv_scalars, b2_scalars)),)
            )

        # H(X) = (A(X)B(X) - C(X)) / Z(X) via one coset evaluation.
        coeff_a = _ifft(aw, root)
        coeff_b = _ifft(bw, root)
        coeff_c = _ifft(cw, root)
        shift = _GENERATOR
        shifts = [mpz(1)] * size
        for i in range(1, size):
            shifts[i] = shifts[i - 1] * shift % R
        ca = _fft([c * k % R for c, k in zip(coeff_a, shifts)], root)
        cb = _fft([c * k % R for c, k in zip(coeff_b, shifts)], root)
        cc = _fft([c * k % R for c, k in zip(coeff_c, shifts)], root)
        z_inv = gmpy2.invert((gmpy2.powmod(shift, size, R) - 1) % R, R)
        h_evals = [(a * b - c) % R * z_inv % R for a, b, c in zip(ca, cb, cc)]
        inv_shifts_root = gmpy2.invert(shift, R)
        inv_shifts = [mpz(1)] * size
        for i in range(1, size):
            inv_shifts[i] = inv_shifts[i - 1] * inv_shifts_root % R
        h_coeffs = [c * k % R for c, k in zip(_ifft(h_evals, root), inv_shifts)]
        h_scalars = h_coeffs[: size - 1]

        a_jac = msm_g1_tabled(self.a_tables, wv + [r])
        a_point = ec.g1_add(ec.g1_jac_to_affine(a_jac) if a_jac else None, pk.alpha1)

        b1_jac = msm_g1_tabled(self.b1_tables, wv + [s])
        b1_point = ec.g1_add(ec.g1_jac_to_affine(b1_jac) if b1_jac else None, pk.beta1)

        h_jac = msm_g1_tabled(self.h_tables, h_scalars)
        h_point = ec.g1_jac_to_affine(h_jac) if h_jac else None

        if async_result is not None:
            l_bytes, b2_bytes = async_result.get()
            c_point = ec.g1_from_bytes(l_bytes)
            b2_msm = ec.g2_from_bytes(b2_bytes)
        else:
            l_jac = msm_g1_tabled(self.l_tables, priv_scalars)
            c_point = ec.g1_jac_to_affine(l_jac) if l_jac else None
            b2_msm = msm_g2_tabled(self.b2_tables, b2_scalars)

        b2_point = ec.g2_add(b2_msm, pk.beta2)
        c_point = ec.g1_add(c_point, h_point)
        c_point = ec.g1_add(c_point, ec.g1_scalar_mul(a_point, s))
        c_point = ec.g1_add(c_point, ec.g1_scalar_mul(b1_point, r))
        return a_point, b2_point, c_point


def groth16_verify(vk: Groth16VerificationKey, public_inputs, proof_points) -> bool:
    a_point, b_point, c_point = proof_points
    if a_point is None or b_point is None or c_point is None:
        return False
    if not (ec.g1_is_on_curve(a_point) and ec.g1_is_on_curve(c_point)):
        raise MalformedProof("proof point off curve")
    if not ec.g2_in_subgroup(b_point):
        raise MalformedProof("proof B point outside G2")
    if len(public_inputs) != len(vk.ic) - 1:
        return False
    vk_x = vk.ic[0]
    for value, base in zip(public_inputs, vk.ic[1:]):
        vk_x = ec.g1_add(vk_x, ec.g1_scalar_mul(base, value))
    return ec.pairing_product_is_one(
        [
            (ec.g1_neg(a_point), b_point),
            (vk.alpha1, vk.beta2),
            (vk_x, vk.gamma2),
            (c_point, vk.delta2),
        ]
    )


# -- point (de)serialization for key files ---------------------------------------

def _write_g1_list(points) -> bytes:
    out = [len(points).to_bytes(4, "big")]
    out += [ec.g1_to_bytes(p) for p in points]
    return b"".join(out)


def _write_g2_list(points) -> bytes:
    out = [len(points).to_bytes(4, "big")]
    out += [ec.g2_to_bytes(p) for p in points]
    return b"".join(out)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise ValueError("truncated key material")
        chunk = self.data[self.pos:self.pos + n]
        self.pos += n
        return chunk

    def u32(self) -> int:
        return int.from_bytes(self.take(4), "big")

    def g1_list(self):
        return [ec.g1_from_bytes(self.take(ec.G1_BYTES)) for _ in range(self.u32())]

    def g2_list(self):
        return [ec.g2_from_bytes(self.take(ec.G2_BYTES)) for _ in range(self.u32())]


def serialize_pk(pk: Groth16ProvingKey) -> bytes:
    head = pk.bit_width.to_bytes(2, "big") + pk.domain_size.to_bytes(4, "big")
    return b"".join(
        [
            head,
            ec.g1_to_bytes(pk.alpha1), ec.g1_to_bytes(pk.beta1), ec.g1_to_bytes(pk.delta1),
            ec.g2_to_bytes(pk.beta2), ec.g2_to_bytes(pk.delta2),
            _write_g1_list(pk.a_query), _write_g1_list(pk.b1_query),
            _write_g2_list(pk.b2_query), _write_g1_list(pk.l_query),
            _write_g1_list(pk.h_query),
        ]
    )


def deserialize_pk(data: bytes) -> Groth16ProvingKey:
    rd = _Reader(data)
    bit_width = int.from_bytes(rd.take(2), "big")
    domain_size = int.from_bytes(rd.take(4), "big")
    return Groth16ProvingKey(
        bit_width=bit_width,
        alpha1=ec.g1_from_bytes(rd.take(ec.G1_BYTES)),
        beta1=ec.g1_from_bytes(rd.take(ec.G1_BYTES)),
        delta1=ec.g1_from_bytes(rd.take(ec.G1_BYTES)),
        beta2=ec.g2_from_bytes(rd.take(ec.G2_BYTES)),
        delta2=ec.g2_from_bytes(rd.take(ec.G2_BYTES)),
        a_query=rd.g1_list(), b1_query=rd.g1_list(),
        b2_query=rd.g2_list(), l_query=rd.g1_list(), h_query=rd.g1_list(),
        domain_size=domain_size,
    )


def serialize_vk(vk: Groth16VerificationKey) -> bytes:
    return b"".join(
        [
            vk.bit_width.to_bytes(2, "big"),
            ec.g1_to_bytes(vk.alpha1),
            ec.g2_to_bytes(vk.beta2), ec.g2_to_bytes(vk.gamma2), ec.g2_to_bytes(vk.delta2),
            _write_g1_list(vk.ic),
        ]
    )


def deserialize_vk(data: bytes) -> Groth16VerificationKey:
    rd = _Reader(data)
    return Groth16VerificationKey(
        bit_width=int.from_bytes(rd.take(2), "big"),
        alpha1=ec.g1_from_bytes(rd.take(ec.G1_BYTES)),
        beta2=ec.g2_from_bytes(rd.take(ec.G2_BYTES)),
        gamma2=ec.g2_from_bytes(rd.take(ec.G2_BYTES)),
        delta2=ec.g2_from_bytes(rd.take(ec.G2_BYTES)),
        ic=rd.g1_list(),
    )
