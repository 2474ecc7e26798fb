"""Greedy separated sets and the counting bounds that certify them.

Builds maximal separated subsets of the dual group under the set-sup
chordal metric and compares their cardinality against the volume and
roots-counting lower bounds.
"""
import itertools
import math

from kronset import Character, CharacterSet, GroupSpec, alpha
from kronset.diagnostics import (
    maximal_separated_set,
    pisier_report,
    roots_count_bound,
    sup_chordal_distance,
    volume_bound,
)

# --- the standard basis of Z2^d ----------------------------------------------
# Any two distinct dual points differ in some coordinate, so some basis
# character separates them at full chordal distance 2: the greedy net swallows
# the whole group.
for d in (2, 3, 4):
    g = GroupSpec(0, (2,) * d)
    F = CharacterSet(g, tuple(
        Character(g, (), tuple(1 if i == j else 0 for i in range(d)))
        for j in range(d)
    ))
    S = maximal_separated_set(F, epsilon=1.0)
    rep = pisier_report(F, S)
    print(f"Z2^{d}: |S| = {rep.cardinality} of {S.universe_size},"
          f" rate = {rep.rate}, condition met: {rep.condition_met}")

    dists = {
        round(sup_chordal_distance(F, x, y), 12)
        for x, y in itertools.combinations(S.points, 2)
    }
    print("   pairwise distances:", sorted(dists))

    # the covering bound: with kappa_upper + eps < 2 the net cannot be small
    kappa_up = alpha(F, max_order=8).kappa[1]
    eps = (2.0 - kappa_up) / 2.0
    eta, bound = volume_bound(kappa_up + eps, d)
    print(f"   kappa_upper = {kappa_up:.4f}, volume bound = {bound:.2f},"
          f" satisfied: {rep.cardinality >= bound}")

# --- a torus example ---------------------------------------------------------
# On Z the dual is the circle; a grid discretization stands in for it.
F = CharacterSet.of_integers([1])
S = maximal_separated_set(F, epsilon=math.sqrt(2), grid_cells=4)
print("\ncircle net at eps = sqrt(2):", [round(p.torus_angles[0], 4) for p in S.points])

# --- the roots-counting bound ------------------------------------------------
for n in (2, 3, 4):
    print(f"roots-count bound, n={n}, |F|=3:", roots_count_bound(n, 3))
