"""Diagonal Hermitian forms, their trace forms and isotropy."""

from fractions import Fraction

from unitary_motives import SIGN, EtaleAlgebra, HermitianDiag, QuadraticForm, hermitian_eval, is_isotropic_form, make_field, quad_eval, trace_form

F3 = make_field(3)
L = EtaleAlgebra(F3, 2)
h = HermitianDiag(L, (1, -1))

# h(x, x) always lands in F (the v-part vanishes)
x = [L.element(1, 1), L.element(0, 2)]
val = hermitian_eval(h, x, x)
print("h(x, x) =", (val.u, val.v))

# as an F-quadratic form on F^4 (coordinates u1, v1, u2, v2) h becomes <1,-b> (x) <a_i>
q = trace_form(h)
print("q_h coefficients:", q.coeffs)
print("q_h at the same vector:", quad_eval(q, [1, 1, 0, 2]))

# every form of dimension >= 3 over a finite field is isotropic
print("<1,1,1> over F_3 isotropic:", is_isotropic_form(QuadraticForm(F3, (1, 1, 1))))
print("<1,1> over F_3 isotropic:", is_isotropic_form(QuadraticForm(F3, (1, 1))))

# over the sign field only definiteness matters
hs = HermitianDiag(EtaleAlgebra(SIGN, -1), (1, Fraction(1, 2)))
print("sign mode q_h:", [str(c) for c in trace_form(hs).coeffs], "isotropic:", is_isotropic_form(trace_form(hs)))
