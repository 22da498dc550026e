"""Symbolic identities and their counting realization over a small grid."""

from unitary_motives import RealizationCtx, derive_main_identity, derive_proj_identity, make_field, realize, sweep, verify_identity

for n in (2, 3, 4):
    print(derive_main_identity(n).pretty())
print(derive_proj_identity(3).pretty())

ctx = RealizationCtx(make_field(5), 2, (1, 3, 4))
ident = derive_main_identity(3)
print("lhs realizes to", realize(ident.lhs, ctx), "rhs to", realize(ident.rhs, ctx))
print("breakdown:", verify_identity(ident, ctx).breakdown)

grid = {"p": [3, 5], "n": [2, 3], "b": ["square", "nonsquare"], "k": [1, 2]}
reports = sweep(grid, seed=0, jobs=2)
print(f"{sum(r.passed for r in reports)}/{len(reports)} sweep cells pass")
for r in reports[:4]:
    print(" ", r.identity, r.params, r.lhs, r.rhs, r.verdict)
