# %% [markdown]
# # Hyperplane arrangements and their shifted poles
#
# A Pfaffian system lives on the complement of finitely many affine
# hyperplanes.  For a direction x each plane H that depends on x can be
# written as x = a_H(other variables), and two planes crossing in the
# directions (x, y) meet along a "cross pole" c_{HH'}.  This script builds the
# three-variable example arrangement and prints its data.

# %%
from pfaffml.arrangement import Arrangement, Hyperplane, cross_pole, cross_set, shifted_pole
from pfaffml.exact import LinPoly

x1, x2, x3 = (LinPoly.var(3, i) for i in range(3))
planes = {"H1": x1, "H2": x1 - x2, "H3": 2 * x1 + x2 + 3 * x3, "H4": x3 - 1}
H = {k: Hyperplane(p, k) for k, p in planes.items()}
A = Arrangement(3, tuple(H.values()))

# %% [markdown]
# Planes that move with x1, and where they sit along it:

# %%
for h in A.direction_set(0):
    print(h.label, "x1 =", shifted_pole(h, 0).pretty())

# %% [markdown]
# Cross poles for the pair of directions (x1, x2).  The value is `None` when
# the two planes never meet transversally in that pair.

# %%
for k in ("H1", "H2", "H3"):
    partners = cross_set(A, H[k], 0, 1)
    print(k, {p.label: cross_pole(H[k], p, 0, 1).pretty() for p in partners})

# %% [markdown]
# Arrangements round-trip through JSON with exact rational coefficients.

# %%
import json
print(json.dumps(A.to_json(), indent=1)[:300], "...")
assert Arrangement.from_json(A.to_json()) == A
