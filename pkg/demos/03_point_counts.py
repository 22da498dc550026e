"""Point counts of the varieties attached to a Hermitian space, with brute-force cross-checks."""

from unitary_motives import (
    EtaleAlgebra,
    HermitianDiag,
    ModuleSpec,
    count_hermitian_variety,
    count_proj_space,
    count_quadric,
    count_S,
    count_weil_proj,
    extend,
    make_field,
    trace_form,
)

F3 = make_field(3)
for b in (1, 2):
    L = EtaleAlgebra(F3, b)
    N = ModuleSpec(L, 2)
    h = HermitianDiag(L, (1, -1))
    print(f"--- F_3, b={b}, rank 2")
    print("  #P_F(N)  =", count_proj_space(4, F3))
    print("  #S(N)    =", count_S(N))
    print("  #P(N,L)  =", count_weil_proj(N))
    print("  #V(q_h)  =", count_quadric(trace_form(h)))
    print("  #V(h)    =", count_hermitian_variety(h))

# base change to F_9: the nonsplit algebra acquires a degenerate locus
N = ModuleSpec(EtaleAlgebra(F3, 2), 2)
print("#S(N) over F_9 for b=2:", count_S(N, extend(F3, 2)))

# parallel enumeration gives the same integer
h = HermitianDiag(EtaleAlgebra(make_field(7), 3), (1, 2, 4))
print("#V(h) over F_7, rank 3:", count_hermitian_variety(h, jobs=1), count_hermitian_variety(h, jobs=4))
