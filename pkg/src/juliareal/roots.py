"""Complex root extraction and exact real-root counting.

Float side: closed forms for degrees <= 3, simultaneous Aberth-Ehrlich
iteration with Newton polishing above that.  The batched entry point solves
p(X) = t for a whole vector of targets at once, which is what backward-orbit
expansion and critical-interval cross-checks need.

Exact side: Sturm chains and Yun square-free decomposition over Fractions.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .poly import Polynomial

# default realness tolerance (relative)
REALNESS_TOL = 1e-9
# float-domain root clustering radius (relative)
CLUSTER_TOL = 1e-6

_ABERTH_MAX_ITER = 120
_POLISH_STEPS = 4


class RootFindingError(RuntimeError):
    """Non-convergence; carries the best iterate found."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


# ---------------------------------------------------------------------------
# batched solvers: coefficient matrix C has shape (B, d+1), ascending powers
# ---------------------------------------------------------------------------

def _horner_many(C, z):
    d = C.shape[1] - 1
    p = np.broadcast_to(C[:, -1:], z.shape).astype(complex).copy()
    dp = np.zeros_like(z)
    for i in range(d - 1, -1, -1):
        dp = dp * z + p
        p = p * z + C[:, i:i + 1]
    return p, dp


def _quadratic_batch(C):
    c0, c1, c2 = C[:, 0], C[:, 1], C[:, 2]
    s = np.sqrt((c1 * c1 - 4 * c2 * c0).astype(complex))
    cs = np.where(np.real(np.conj(c1) * s) >= 0, s, -s)
    t = -(c1 + cs) / 2
    r1 = t / c2
    with np.errstate(divide="ignore", invalid="ignore"):
        r2 = np.where(t != 0, c0 / np.where(t != 0, t, 1), 0)
    return np.stack([r1, r2], axis=1)


_CUBE_ROOTS_OF_UNITY = np.exp(2j * np.pi * np.arange(3) / 3)


def _cubic_batch(C):
    c3 = C[:, 3]
    b = C[:, 2] / c3
    c = C[:, 1] / c3
    d = C[:, 0] / c3
    shift = b / 3
    p = c - b * b / 3
    q = 2 * b**3 / 27 - b * c / 3 + d
    s = np.sqrt((q * q / 4 + p**3 / 27).astype(complex))
    u3a = -q / 2 + s
    u3b = -q / 2 - s
    u3 = np.where(np.abs(u3a) >= np.abs(u3b), u3a, u3b)
    u = u3.astype(complex) ** (1.0 / 3.0)
    w = u[:, None] * _CUBE_ROOTS_OF_UNITY[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        y = np.where(np.abs(w) > 0, w - p[:, None] / np.where(np.abs(w) > 0, 3 * w, 1), 0)
    return y - shift[:, None]


def _fujiwara_radius(C):
    d = C.shape[1] - 1
    lead = C[:, -1:]
    ratios = np.abs(C[:, :-1] / lead)
    k = d - np.arange(d)
    with np.errstate(divide="ignore"):
        r = ratios ** (1.0 / k)
    return 2.0 * np.maximum(r.max(axis=1), 1e-30)


def _aberth_batch(C):
    B, dp1 = C.shape
    d = dp1 - 1
    R = _fujiwara_radius(C)
    angles = 2 * np.pi * (np.arange(d) + 0.37) / d + 0.61
    radii = 0.9 * (1.0 + 0.08 * np.arange(d) / max(d - 1, 1))
    z = R[:, None] * radii[None, :] * np.exp(1j * angles)[None, :]
    tol = 1e-14
    for _ in range(_ABERTH_MAX_ITER):
        p, dpv = _horner_many(C, z)
        bad = dpv == 0
        if bad.any():
            dpv = np.where(bad, 1e-30, dpv)
        N = p / dpv
        diffs = z[:, :, None] - z[:, None, :]
        np.einsum("bii->bi", diffs)[:] = np.inf
        S = (1.0 / diffs).sum(axis=2)
        w = N / (1.0 - N * S)
        w = np.where(np.isfinite(w), w, N)
        z = z - w
        if (np.abs(w) <= tol * (1.0 + np.abs(z))).all():
            break
    return z


def _polish_batch(C, z, steps=_POLISH_STEPS):
    # Residual-monotone Newton: near multiple roots p/p' is noise over noise
    # and an unguarded step can wander by O(1e-2), so a step is kept only
    # where it actually shrinks |p|.
    best = z
    best_res = np.abs(_horner_many(C, z)[0])
    for _ in range(steps):
        p, dpv = _horner_many(C, z)
        bad = dpv == 0
        if bad.any():
            dpv = np.where(bad, 1, dpv)
        step = np.where(bad, 0, p / dpv)
        step = np.where(np.abs(step) < 1.0 + np.abs(z), step, 0)
        z = z - step
        res = np.abs(_horner_many(C, z)[0])
        improved = res < best_res
        best = np.where(improved, z, best)
        best_res = np.where(improved, res, best_res)
    return best


def roots_shifted(p: Polynomial, targets):
    """Roots of p(X) - t for every t in targets; shape (len(targets), deg)."""
    t = np.asarray(targets, dtype=complex).ravel()
    d = p.degree
    if d < 1:
        raise ValueError("degree >= 1 required")
    C = np.tile(np.array([complex(c) for c in p.coeffs]), (t.size, 1))
    C[:, 0] -= t
    if d == 1:
        return (-C[:, 0] / C[:, 1])[:, None]
    if d == 2:
        z = _quadratic_batch(C)
    elif d == 3:
        z = _cubic_batch(C)
    else:
        z = _aberth_batch(C)
    return _polish_batch(C, z)


def _residual_ok(C, z):
    p, _ = _horner_many(C, z)
    maxc = np.abs(C).max(axis=1, keepdims=True)
    d = C.shape[1] - 1
    thresh = 1e-8 * maxc * np.maximum(1.0, np.abs(z)) ** d
    return (np.abs(p) <= thresh).all(), float(np.abs(p).max())


def _pair_conjugates(roots):
    """Symmetrize the root multiset of a real polynomial under conjugation."""
    im = roots.imag
    scale = 1.0 + np.abs(roots).max()
    tiny = 1e-13 * scale
    pos = sorted((z for z in roots if z.imag > tiny), key=lambda z: (z.real, z.imag))
    neg = sorted((z.conjugate() for z in roots if z.imag < -tiny),
                 key=lambda z: (z.real, z.imag))
    if len(pos) != len(neg):
        return roots
    out = [z for z in roots if abs(z.imag) <= tiny]
    for a, b in zip(pos, neg):
        u = (a + b) / 2
        out.extend([u, u.conjugate()])
    del im
    return np.array(out, dtype=complex)


def complex_roots(p: Polynomial):
    """All deg(p) complex roots with multiplicity, polished.

    Conjugate pairing is enforced for real input.  Raises RootFindingError if
    residuals stay above 1e-8 relative to the coefficient scale.
    """
    d = p.degree
    if d < 1:
        raise ValueError("degree >= 1 required")
    z = roots_shifted(p, [0.0])[0]
    C = np.array([[complex(c) for c in p.coeffs]])
    ok, res = _residual_ok(C, z[None, :])
    if not ok:
        raise RootFindingError(
            f"root polishing stalled (max residual {res:.3e})", best=z)
    if all(float(complex(c).imag) == 0.0 for c in p.coeffs):
        z = _pair_conjugates(z)
    return np.sort_complex(z)


# ---------------------------------------------------------------------------
# real roots with multiplicities (float domain)
# ---------------------------------------------------------------------------

def _res_tol(p, x):
    maxc = max(abs(complex(c)) for c in p.coeffs)
    return 1e-8 * maxc * max(1.0, abs(x)) ** p.degree


def _modified_newton(p, dp, x, m, steps=12):
    # p is float-noise-limited near multiple roots; keep the best iterate
    best, best_res = x, abs(p(x))
    for _ in range(steps):
        dv = dp(x)
        if dv == 0:
            break
        step = m * p(x) / dv
        if abs(step) > 1.0 + abs(x):
            break
        x = x - step
        res = abs(p(x))
        if res < best_res:
            best, best_res = x, res
        if abs(step) <= 1e-15 * (1.0 + abs(x)):
            break
    return best


def _chain_clusters(values, tol):
    """Agglomerative 1-D/complex clustering with chaining threshold tol."""
    order = np.argsort(values.real, kind="stable")
    clusters = []
    for idx in order:
        z = values[idx]
        if clusters and min(abs(z - w) for w in clusters[-1]) <= tol:
            clusters[-1].append(z)
        else:
            clusters.append([z])
    return clusters


def real_roots_ex(p: Polynomial, realness_tol=REALNESS_TOL):
    """Distinct real roots with multiplicities, plus a marginality flag.

    Clusters within 1e-6 (relative) are merged as multiple roots and refined
    with multiplicity-corrected Newton; near-real clusters that refine onto
    the axis are accepted too (this recovers e.g. triple roots whose float
    images scatter ~eps^(1/3) off the axis).
    """
    q = p.to_float()
    dq = q.derivative()
    roots = complex_roots(q)
    scale = 1.0 + float(np.abs(roots).max())
    accepted = []   # (center: complex, mult)
    leftovers = []  # clusters that stayed off-axis
    marginal = False
    for cluster in _chain_clusters(roots, CLUSTER_TOL * scale):
        m = len(cluster)
        center = sum(cluster) / m
        if m >= 2:
            center = _modified_newton(q, dq, center, m)
        if abs(center.imag) <= (realness_tol if m == 1 else 1e-6) * (1.0 + abs(center)):
            accepted.append((center, m))
            if m == 1 and abs(center.imag) > 0.1 * realness_tol * (1.0 + abs(center)):
                marginal = True
        else:
            leftovers.append((center, m))
    # Second pass: multiple roots scatter ~eps^(1/m), well past the 1e-6
    # cluster radius.  Regroup off-axis leftovers (optionally absorbing an
    # adjacent accepted root) at a wider radius and re-refine with the
    # combined multiplicity; accept only if the result lands on the axis with
    # a small residual.
    out = []
    if leftovers:
        pool = [(c, m, True) for c, m in accepted] + [(c, m, False) for c, m in leftovers]
        vals = np.array([c for c, m, _ in pool])
        for g in _chain_clusters(vals, 1e-4 * scale):
            idxs = sorted({int(np.argmin(np.abs(vals - z))) for z in g})
            members = [pool[i] for i in idxs]
            if all(real for _, _, real in members):
                out.extend((float(c.real), m) for c, m, _ in members)
                continue
            m = sum(mm for _, mm, _ in members)
            center = _modified_newton(q, dq, sum(c for c, _, _ in members) / len(members), m)
            if (m >= 2 and abs(center.imag) <= 1e-6 * (1.0 + abs(center))
                    and abs(q(center)) <= _res_tol(q, center)):
                out.append((float(center.real), m))
                marginal = True
            else:
                # genuinely nonreal: keep only the real members
                out.extend((float(c.real), mm) for c, mm, real in members if real)
    else:
        out = [(float(c.real), m) for c, m in accepted]
    out.sort()
    return out, marginal


def real_roots(p: Polynomial, realness_tol=REALNESS_TOL):
    return real_roots_ex(p, realness_tol)[0]


def all_roots_real(p: Polynomial, tol=REALNESS_TOL):
    """True iff every root is real within tol (exact Sturm path for exact input)."""
    if p.is_exact:
        return real_count_with_multiplicity(p) == p.degree
    roots = complex_roots(p)
    return bool((np.abs(roots.imag) <= tol * (1.0 + np.abs(roots))).all())


def all_real_shifted(p: Polynomial, targets, tol=1e-6):
    """Vectorized all_roots_real(p - t) over a target vector (float domain).

    Degrees 2 and 3 go through the discriminant sign, higher degrees through
    the batched solver.
    """
    t = np.asarray(targets, dtype=float).ravel()
    d = p.degree
    c = [float(x) for x in p.coeffs]
    if d == 2:
        disc = c[1] * c[1] - 4 * c[2] * (c[0] - t)
        floor = tol * np.maximum(1.0, np.abs(c[1] * c[1]) + np.abs(4 * c[2] * (c[0] - t)))
        return disc >= -floor
    if d == 3:
        a3, a2, a1 = c[3], c[2], c[1]
        a0 = c[0] - t
        disc = (18 * a3 * a2 * a1 * a0 - 4 * a2**3 * a0 + a2**2 * a1**2
                - 4 * a3 * a1**3 - 27 * a3**2 * a0**2)
        mag = (np.abs(18 * a3 * a2 * a1 * a0) + np.abs(4 * a2**3 * a0)
               + a2**2 * a1**2 + np.abs(4 * a3 * a1**3) + 27 * a3**2 * a0**2)
        return disc >= -tol * np.maximum(1.0, mag)
    z = roots_shifted(p, t)
    return (np.abs(z.imag) <= tol * (1.0 + np.abs(z))).all(axis=1)


# ---------------------------------------------------------------------------
# exact real-root counting (Sturm + Yun)
# ---------------------------------------------------------------------------

def _sign(x):
    return (x > 0) - (x < 0)


def _sturm_chain(p: Polynomial):
    chain = [p, p.derivative().to_exact()]
    while chain[-1].degree > 0:
        rem = chain[-2].divmod_exact(chain[-1])[1]
        if rem.is_zero:
            break
        chain.append(-rem)
    return chain


def _variations(signs):
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _variations_at(chain, x):
    return _variations([_sign(q(x)) for q in chain])


def _variations_at_inf(chain, positive):
    signs = []
    for q in chain:
        s = _sign(q.lead)
        if not positive and q.degree % 2 == 1:
            s = -s
        signs.append(s)
    return _variations(signs)


def square_free_part(p: Polynomial):
    p = p.to_exact()
    g = p.gcd_exact(p.derivative().to_exact())
    if g.degree == 0:
        return p
    return p.divmod_exact(g)[0]


def real_root_count(p: Polynomial, lo=None, hi=None):
    """Exact count of distinct real roots, whole line or closed interval [lo, hi]."""
    p = p.to_exact()
    if p.degree == 0:
        return 0
    sf = square_free_part(p)
    if sf.degree == 0:
        return 0
    chain = _sturm_chain(sf)
    if lo is None and hi is None:
        return _variations_at_inf(chain, False) - _variations_at_inf(chain, True)
    lo = Fraction(lo)
    hi = Fraction(hi)
    if lo > hi:
        raise ValueError("empty interval")
    count = _variations_at(chain, lo) - _variations_at(chain, hi)
    if sf(lo) == 0:
        count += 1
    return count


def square_free_decomposition(p: Polynomial):
    """Yun's algorithm: returns [(q_i, i)] with p = lead * prod q_i^i, q_i monic."""
    p = p.to_exact()
    if p.degree == 0:
        return []
    lead = p.lead
    p = Polynomial([c / lead for c in p.coeffs])
    dp = p.derivative()
    g = p.gcd_exact(dp)
    out = []
    if g.degree == 0:
        return [(p, 1)]
    b = p.divmod_exact(g)[0]
    c = dp.divmod_exact(g)[0]
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        a = b.gcd_exact(d)
        if a.degree > 0:
            out.append((a, i))
        b = b.divmod_exact(a)[0]
        c = d.divmod_exact(a)[0]
        d = c - b.derivative()
        i += 1
    return out


def real_count_with_multiplicity(p: Polynomial):
    """Number of real roots counted with multiplicity (exact)."""
    return sum(m * real_root_count(q) for q, m in square_free_decomposition(p))
