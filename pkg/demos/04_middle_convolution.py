# %% [markdown]
# # Middle convolution, two ways
#
# The composite ML, addition, IML is a middle convolution mc_lambda.  For
# ordinary Fuchsian systems it agrees, up to gauge, with the classical
# Dettweiler-Reiter construction.  It is also additive in lambda and mc_0
# is the identity.

# %%
import random

from pfaffml.analysis import gauge_equivalent
from pfaffml.exact import LinPoly, Q
from pfaffml.linalg import Matrix
from pfaffml.samples import random_fuchsian
from pfaffml.system import make_system
from pfaffml.transforms import dr_middle_convolution, middle_convolution

x = LinPoly.var(1, 0)
a, b, beta = Q(1) / 2, Q(1) / 3, Q(1) / 5
gauss_seed = make_system(1, 1, None, {}, [(x, Matrix([[a]])), (x - 1, Matrix([[b]]))])

# %% [markdown]
# Convolving two rank-one poles gives the Gauss hypergeometric tuple.

# %%
dr = dr_middle_convolution(gauss_seed, beta).system
for H in dr.planes:
    print(H.poly.pretty(dr.vars), dr.residues[H.label])
mc = middle_convolution(gauss_seed, 0, {x: beta}).system
print("mc vs DR:", gauge_equivalent(mc, dr).status)

# %% [markdown]
# On random Fuchsian tuples with low-rank residues:

# %%
rng = random.Random(4)
for trial in range(5):
    s = random_fuchsian(rng, 2, 3, low_rank=0.5)
    out_dr = dr_middle_convolution(s, beta)
    out_mc = middle_convolution(s, 0, {x: beta})
    print(trial, "rank", out_dr.rank, gauge_equivalent(out_mc.system, out_dr.system).status)

# %% [markdown]
# Additivity: mc_lambda after mc_mu equals mc_{lambda+mu}.

# %%
lam, mu = {x: Q(1) / 3}, {x: Q(2) / 7}
two = middle_convolution(middle_convolution(gauss_seed, 0, mu).system, 0, lam).system
one = middle_convolution(gauss_seed, 0, {x: lam[x] + mu[x]}).system
print("additive:", gauge_equivalent(two, one).status)
print("mc_0 = id:", gauge_equivalent(middle_convolution(gauss_seed, 0, {}).system, gauss_seed).status)
