"""Odd finite fields, quadratic etale algebras and their splitting behaviour."""

import numpy as np

from unitary_motives import EtaleAlgebra, extend, is_split, make_field, sigma, split_idempotents

# F_9 is built as F_3[x]/(x^2 + 1); elements are integers c0 + 3*c1
F9 = make_field(3, 2)
print("F_9 modulus coefficients:", F9.modulus)
units = F9.elements()[1:]
print("x^8 for every unit of F_9:", set(int(F9.pow(int(x), 8)) for x in units))

# vectorized arithmetic works elementwise on arrays
a = np.arange(9)
print("a * a^-1 over F_9 (nonzero a):", F9.mul(a[1:], F9.inv(a[1:])))

# L = F_3[beta]/(beta^2 - b): split for b = 1, a field for b = 2
F3 = make_field(3)
for b in (1, 2):
    L = EtaleAlgebra(F3, b)
    print(f"b={b}: split={is_split(L)}")

L = EtaleAlgebra(F3, 1)
e1, e2 = split_idempotents(L)
print("idempotents:", (e1.u, e1.v), (e2.u, e2.v), " sigma(e1) == e2:", sigma(e1) == e2)

# the nonsplit algebra splits after the quadratic base change F_3 -> F_9
K = EtaleAlgebra(F3, 2)
for k in (1, 2, 3, 4):
    print(f"b=2 over F_(3^{k}): split={is_split(K.base_change(extend(F3, k)))}")
