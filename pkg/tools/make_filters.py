"""Generate orthonormal QMF low-pass filter tables (Daubechies and Symlet families).

Uses spectral factorization of the Daubechies half-band polynomial at 60-digit
precision.  db filters take the minimum-phase root selection; sym filters pick
the root selection minimizing the phase nonlinearity of the transfer function.
The emitted table is pasted into ``src/biaswave/filters.py``.

Run:  python3 tools/make_filters.py
"""

import mpmath as mp

mp.mp.dps = 60


def polymul(a, b):
    out = [mp.mpf(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def halfband_roots(n):
    """Roots of z^(n-1) * P((2 - z - 1/z)/4), P the Daubechies polynomial."""
    # A(z) = -(z - 1)^2 / 4, so z^(n-1) P(u) = sum_k c_k A^k z^(n-1-k)
    c = [mp.binomial(n - 1 + k, k) for k in range(n)]
    q = [mp.mpf(0)] * (2 * n - 1)
    for k in range(n):
        ak = [mp.mpf(1)]
        for _ in range(k):
            ak = polymul(ak, [mp.mpf(-0.25), mp.mpf(0.5), mp.mpf(-0.25)])
        for i, coef in enumerate(ak):
            q[(n - 1 - k) + i] += c[k] * coef
    # strip leading zeros (degree is 2n-2 for n >= 2)
    coeffs = list(reversed(q))
    while abs(coeffs[0]) < mp.mpf(10) ** (-50):
        coeffs = coeffs[1:]
    return mp.polyroots(coeffs, maxsteps=200, extraprec=200)


def root_units(roots):
    """Group the inside-unit-circle roots into conjugate units."""
    inside = [r for r in roots if abs(r) < 1]
    units = []
    used = [False] * len(inside)
    for i, r in enumerate(inside):
        if used[i]:
            continue
        if abs(mp.im(r)) < mp.mpf(10) ** (-40):
            units.append([mp.re(r)])
            used[i] = True
        else:
            for j in range(i + 1, len(inside)):
                if not used[j] and abs(inside[j] - mp.conj(r)) < mp.mpf(10) ** (-30):
                    units.append([r, inside[j]])
                    used[i] = used[j] = True
                    break
    return units


def filter_from_selection(n, units, flags):
    """Low-pass filter for a choice of inside (0) or reciprocal (1) roots."""
    b = [mp.mpf(1)]
    for unit, flag in zip(units, flags):
        for r in unit:
            rr = 1 / r if flag else r
            b = polymul(b, [-rr, mp.mpf(1)])
    b = [mp.re(x) for x in b]
    poly = [mp.mpf(1)]
    for _ in range(n):
        poly = polymul(poly, [mp.mpf(0.5), mp.mpf(0.5)])
    h = polymul(poly, b)
    s = sum(h)
    return [x * mp.sqrt(2) / s for x in h]


def phase_nonlinearity(h, ngrid=512):
    """Max deviation of the transfer-function phase from its linear trend."""
    phases = []
    prev = mp.mpf(0)
    offset = mp.mpf(0)
    for i in range(1, ngrid):
        w = mp.pi * i / ngrid
        m0 = sum(hk * mp.e ** (-1j * w * k) for k, hk in enumerate(h))
        p = mp.arg(m0)
        while p + offset - prev > mp.pi:
            offset -= 2 * mp.pi
        while p + offset - prev < -mp.pi:
            offset += 2 * mp.pi
        p = p + offset
        phases.append((w, p))
        prev = p
    slope = phases[-1][1] / phases[-1][0]
    return max(abs(p - slope * w) for w, p in phases)


def check_qmf(h):
    n2 = len(h)
    assert abs(sum(h) - mp.sqrt(2)) < mp.mpf(10) ** (-40)
    for m in range(n2 // 2):
        acc = sum(h[k] * h[k + 2 * m] for k in range(n2 - 2 * m))
        target = 1 if m == 0 else 0
        assert abs(acc - target) < mp.mpf(10) ** (-35), (m, acc)


def make_db(n):
    units = root_units(halfband_roots(n))
    h = filter_from_selection(n, units, [0] * len(units))
    check_qmf(h)
    return h


def make_sym(n):
    units = root_units(halfband_roots(n))
    best = None
    for mask in range(2 ** len(units)):
        flags = [(mask >> i) & 1 for i in range(len(units))]
        h = filter_from_selection(n, units, flags)
        nl = phase_nonlinearity(h)
        if best is None or nl < best[0]:
            best = (nl, h)
    h = best[1]
    check_qmf(h)
    return h


def main():
    entries = [("haar", 1, [mp.mpf(1) / mp.sqrt(2)] * 2)]
    for n in range(2, 11):
        entries.append((f"db{n}", n, make_db(n)))
    for n in range(4, 11):
        entries.append((f"sym{n}", n, make_sym(n)))
    for name, n, h in entries:
        print(f'    "{name}": (')
        print(f"        {n},")
        print("        [")
        # energy-front orientation, matching the published db convention
        for x in reversed(h):
            print(f"            {mp.nstr(x, 17)},")
        print("        ],")
        print("    ),")


if __name__ == "__main__":
    main()
