"""The Z / 2Z dichotomy for zero-cycles, in finite and sign mode."""

from fractions import Fraction

from unitary_motives import SIGN, EtaleAlgebra, HermitianDiag, QuadraticForm, a0, make_field, trace_form

F5 = make_field(5)
h = HermitianDiag(EtaleAlgebra(F5, 2), (1, 3))
r = a0(h)
print("finite:", r.group, "witness", r.witness, "| via q_h:", a0(trace_form(h)).group)

# binary forms can be anisotropic over a finite field
print("<1,2> over F_5:", a0(QuadraticForm(F5, (1, 2))).to_json())

# over the sign field the answer is 2Z exactly for definite trace forms
for b, coeffs in [(-1, (1, 1)), (-1, (1, -1)), (2, (1, 1)), (Fraction(-1, 3), (-2, -5))]:
    hs = HermitianDiag(EtaleAlgebra(SIGN, Fraction(b)), coeffs)
    res = a0(hs)
    print(f"b={b}, h={coeffs}: q_h={tuple(str(c) for c in res.form)} -> {res.group} ({res.certificate})")
