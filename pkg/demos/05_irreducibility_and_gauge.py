# %% [markdown]
# # Irreducibility, gauge equivalence and the map phi
#
# Irreducibility in a direction is decided exactly: either the generated
# matrix algebra is all of Mat_N (absolutely irreducible), or an invariant
# subspace is exhibited.  Gauge equivalence solves the intertwiner equations
# and searches for an invertible element; when every intertwiner tried is
# singular the answer is "Inconclusive", never a guess.

# %%
from pfaffml.analysis import gauge_equivalent, is_irreducible, phi_map
from pfaffml.corpus import builtin
from pfaffml.exact import LinPoly, Q
from pfaffml.linalg import Matrix
from pfaffml.system import make_system

x = LinPoly.var(1, 0)
split = make_system(1, 2, None, {}, [(x, Matrix.diag([Q(1) / 2, Q(1) / 3])),
                                     (x - 1, Matrix.diag([Q(1) / 5, Q(1) / 7]))])
v = is_irreducible(split, 0)
print(v.status, "algebra dim", v.algebra_dim, "witness", v.witness)
print("phi1:", is_irreducible(builtin("phi1").system, 0).status)

# %%
a = make_system(1, 3, None, {}, [(x, Matrix.diag([1, 1, 2]))])
b = make_system(1, 3, None, {}, [(x, Matrix.diag([1, 2, 2]))])
# these are not conjugate, but every intertwiner is singular; the bounded
# search reports that honestly instead of claiming No
print("diag(1,1,2) vs diag(1,2,2):", gauge_equivalent(a, b).status)
P = Matrix([[1, 2, 0], [0, 1, 0], [1, 0, 1]])
print("conjugate copy:", gauge_equivalent(builtin("f1").system, builtin("f1").system.conjugate(P)).status)

# %% [markdown]
# The map phi ties a system to its middle Laplace transform; the report
# checks surjectivity, two descriptions of its kernel and intertwining.

# %%
phi, report, _ = phi_map(builtin("rank1").system, 0)
print(phi.shape, report.passed, "kernel dim", report.kernel_dim)
