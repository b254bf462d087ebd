# %% [markdown]
# # Middle Laplace transform: from a rank-one system to Humbert's Phi_1
#
# Start with the rank-one logarithmic system on C^2 with poles along
# x = 0, x = 1 and x = y.  Its middle Laplace transform in x is a rank-three
# system with an irregular (linear) part; it reproduces the Phi_1
# confluent hypergeometric system.

# %%
from pfaffml.analysis import check_integrability, is_irreducible, kernel_invariance
from pfaffml.corpus import builtin
from pfaffml.system import same_system
from pfaffml.transforms import inverse_middle_laplace, laplace, middle_laplace

seed = builtin("rank1").system
for H in seed.planes:
    print(H.label, H.poly.pretty(seed.vars), seed.residues[H.label])

# %% [markdown]
# The plain Laplace transform first; its x-kernel is trivial here, so the
# middle transform has the same rank.

# %%
lap = laplace(seed, 0)
print("rank", lap.rank, "kernel dim", lap.kernel.dim if lap.kernel else 0)
ml = middle_laplace(seed, 0)
out = ml.system
print("A_x =", out.A_lin[0], " A_xy =", out.quad(0, 1))
for H in out.planes:
    print(H.label, H.poly.pretty(out.vars), out.residues[H.label])

# %%
assert same_system(out, builtin("phi1").system)
assert check_integrability(out)
print("irreducible in x:", is_irreducible(out, 0).status)
print("kernel invariance:", kernel_invariance(seed, 0))

# %% [markdown]
# Going back with the inverse middle Laplace transform recovers the seed up
# to a constant gauge transformation.

# %%
from pfaffml.analysis import gauge_equivalent
back = inverse_middle_laplace(out, 0).system
res = gauge_equivalent(back, seed)
print(res.status, res.witness)
