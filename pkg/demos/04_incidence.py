"""The incidence model behind the blow-up: fibers are projective lines."""

from unitary_motives import (
    EtaleAlgebra,
    HermitianDiag,
    ModuleSpec,
    count_blowup_formula,
    count_hermitian_variety,
    count_proj_space,
    count_quadric,
    count_S,
    enum_incidence_blowup,
    enum_span_incidence,
    make_field,
    span_map,
    trace_form,
)

F3 = make_field(3)
L = EtaleAlgebra(F3, 1)
N = ModuleSpec(L, 2)

res = enum_incidence_blowup(N)
print("unrestricted total:", res.total, "fiber histogram:", res.histogram(), "variance:", res.variance)
print("blow-up formula:   ", count_blowup_formula(count_proj_space(4, F3), count_S(N), 2, 3))

# restricting to the quadric V(q_h) keeps the fibers over V(h)
h = HermitianDiag(L, (1, -1, 1))
N3 = ModuleSpec(L, 3)
q = trace_form(h)
res = enum_incidence_blowup(N3, restrict_to=q)
print("restricted total:", res.total)
print("blow-up side:    ", count_blowup_formula(count_quadric(q), count_S(N3), 2, 3))
print("bundle side:     ", 4 * count_hermitian_variety(h))

# the span model handles the nonsplit case directly
hn = HermitianDiag(EtaleAlgebra(F3, 2), (1, 2, 2))
res = enum_span_incidence(ModuleSpec(hn.algebra, 3), restrict_to=trace_form(hn))
print("nonsplit restricted total:", res.total, "=", 4 * count_hermitian_variety(hn))

# the rational map sends a point outside S(N) to the L-line through it
print("span of (1,0,0,0):", span_map((1, 0, 0, 0), N))
