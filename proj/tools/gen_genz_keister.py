#!/usr/bin/env python3
"""Regenerate data/genz_keister.txt.

Builds the nested 1-3-9-19-35 Kronrod-Patterson extensions of Gauss-Hermite
rules for the standard normal measure in 80-digit arithmetic. Each extension
adds the p nodes that maximize polynomial exactness given the previous rule,
so the resulting rule is unique. Weights come from the moment system of the
full node set.
"""
import sys
import mpmath as mp

mp.mp.dps = 80

ADDED = [1, 2, 6, 10, 16]


def moment(j):
    if j % 2:
        return mp.mpf(0)
    return mp.fac2(j - 1) if j > 0 else mp.mpf(1)


def poly_from_roots(roots):
    coeffs = [mp.mpf(1)]  # ascending powers
    for r in roots:
        nxt = [mp.mpf(0)] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i + 1] += c
            nxt[i] -= r * c
        coeffs = nxt
    return coeffs


def extend(nodes, p):
    base = poly_from_roots(nodes)
    # monic E(x) = x^p + sum_{i<p} e_i x^i with  E[base * E * x^j] = 0, j < p
    def wm(k):  # E[base(x) x^k]
        return mp.fsum(c * moment(i + k) for i, c in enumerate(base))
    a = mp.matrix(p, p)
    b = mp.matrix(p, 1)
    for j in range(p):
        for i in range(p):
            a[j, i] = wm(i + j)
        b[j] = -wm(p + j)
    e = mp.lu_solve(a, b)
    coeffs = [e[i] for i in range(p)] + [mp.mpf(1)]
    roots = mp.polyroots(list(reversed(coeffs)), maxsteps=2000, extraprec=400)
    for r in roots:
        if abs(mp.im(r)) > mp.mpf(10) ** -40:
            raise RuntimeError("complex extension node")
    return [mp.re(r) for r in roots]


def weights(nodes):
    n = len(nodes)
    a = mp.matrix(n, n)
    b = mp.matrix(n, 1)
    for j in range(n):
        for i in range(n):
            a[j, i] = nodes[i] ** j
        b[j] = moment(j)
    w = mp.lu_solve(a, b)
    return [w[i] for i in range(n)]


def degree(nodes, w, limit=80):
    d = 0
    while d < limit:
        q = mp.fsum(wi * x ** (d + 1) for x, wi in zip(nodes, w))
        if abs(q - moment(d + 1)) > mp.mpf(10) ** -30 * max(1, moment(d + 1)):
            break
        d += 1
    return d


def main(out):
    nodes = []
    lines = ["# nested Genz-Keister (Kronrod-Patterson) rules for the standard normal measure",
             "# record: cardinality exactness_degree, then one 'node weight' pair per line"]
    for level, p in enumerate(ADDED):
        if level == 0:
            nodes = [mp.mpf(0)]
        else:
            nodes = nodes + extend(nodes, p)
        nodes = sorted(nodes)
        w = weights(nodes)
        deg = degree(nodes, w)
        lines.append(f"{len(nodes)} {deg}")
        for x, wi in zip(nodes, w):
            lines.append(f"{mp.nstr(x, 20, min_fixed=-1, max_fixed=1)} {mp.nstr(wi, 20, min_fixed=-1, max_fixed=1)}")
    with open(out, "w") as f:
        f.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/genz_keister.txt")
