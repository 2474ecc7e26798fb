"""Arithmetic diagnostics: quasi-independence, pair sums, classification.

Shows the signed-relation search (direct and meet-in-the-middle), pair-sum
coincidence counting, and how certified chordal brackets turn into
sufficient interpolation flags.
"""
from kronset import CharacterSet, alpha, alpha_n
from kronset.diagnostics import (
    b2_coincidences,
    classify,
    quasi_independent,
    roots_threshold,
)

# --- quasi-independence -------------------------------------------------------
for entries in ([1, 2], [1, 2, 3], [1, 2, 4, 8], [3, 5, 7, 11, 13]):
    E = CharacterSet.of_integers(entries)
    flag, witness = quasi_independent(E)
    print(f"{entries}: quasi-independent = {flag}", end="")
    print(f", witness {witness}" if witness else "")

# a larger instance goes through the meet-in-the-middle route automatically
E = CharacterSet.of_integers([3, 7, 12, 20, 33, 54, 88, 143, 232, 376, 609, 985])
flag, witness = quasi_independent(E)
print("12-element lacunary-ish set:", flag, witness)

# --- pair-sum coincidences ------------------------------------------------------
for entries in ([1, 2, 3], [1, 2, 3, 4], [1, 2, 4, 8]):
    count, quads = b2_coincidences(CharacterSet.of_integers(entries))
    print(f"{entries}: {count} coincidences")
    for g1, g2, g3, g4 in quads:
        print(f"   {g1.free_coords[0]} + {g2.free_coords[0]}"
              f" = {g3.free_coords[0]} + {g4.free_coords[0]}")

# --- classification -------------------------------------------------------------
# Flags fire only when a certified upper bound clears its strict threshold.
E = CharacterSet.of_integers([1, 2])
res = alpha(E)
roots = [alpha_n(E, n) for n in (2, 3, 4)]
report = classify(E, res, roots)
print("\nset {1,2}:")
print("   kappa bracket:", report.kappa_bracket)
print("   discrete-measure route (kappa < sqrt 2):", report.i0_sufficient)
print("   interpolation route (kappa < 2):", report.sidon_by_kappa)
print("   roots route:", report.sidon_by_kappa_n, "fired at n =", report.fired_orders)
for n, lo, up in report.kappa_n_brackets:
    print(f"   kappa_{n} = [{lo:.4f}, {up:.4f}]  threshold {roots_threshold(n):.4f}")

# the identity character pushes kappa to the diameter: everything inconclusive
E0 = CharacterSet.of_integers([0, 1])
rep0 = classify(E0, alpha(E0, max_order=64), [alpha_n(E0, 2)])
print("\nset {0,1}: inconclusive =", rep0.inconclusive,
      "(kappa bracket", rep0.kappa_bracket, ")")
