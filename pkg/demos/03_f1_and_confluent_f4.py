# %% [markdown]
# # Addition pipelines: Appell F1 and a confluent F4-type system
#
# Composing ML, an addition (shift of residues by scalars) and IML produces
# new integrable systems.  Shifting in x gives Appell's F1; shifting along y
# and transforming in y gives a rank-four system whose 6x6 intermediate
# has a two-dimensional invariant kernel.

# %%
from pfaffml.analysis import gauge_equivalent, is_irreducible
from pfaffml.corpus import builtin
from pfaffml.exact import Q
from pfaffml.transforms import addition, inverse_middle_laplace, middle_laplace

a1, a2, a3, beta = Q(1) / 2, Q(1) / 3, Q(1) / 5, Q(1) / 7
phi1 = middle_laplace(builtin("rank1").system, 0).system

# %%
f1 = inverse_middle_laplace(addition(phi1, 0, {"H1": -beta}), 0)
print("F1 rank", f1.rank)
for H in f1.system.planes:
    print(H.label, H.poly.pretty(f1.system.vars), f1.system.residues[H.label])
print("matches fixture:", gauge_equivalent(f1.system, builtin("f1").system).status)

# %%
shifted = addition(phi1, 1, {"H2": -a1 - a3, "H3": -a2 - a3})
cf4 = inverse_middle_laplace(shifted, 1)
print("unprojected rank", cf4.unprojected.N, "kernel dim", cf4.kernel.dim, "rank", cf4.rank)
print("matches fixture:", gauge_equivalent(cf4.system, builtin("cf4-bar").system).status)
print("6x6 intermediate reducible in y:", is_irreducible(cf4.unprojected, 1).status)
print("quotient irreducible in x:", is_irreducible(cf4.system, 0).status)
