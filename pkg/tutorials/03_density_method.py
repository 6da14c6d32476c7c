"""Exact corner densities by integrating the order polytope diagonal by diagonal."""
from fractions import Fraction

from perioda.tableaux import TableauShape, count_syt, corner_distribution_exact
from perioda.density import (decompose_diagonals, diagonal_chain, corner_density_polynomial,
                             entry_law_from_density, filament_constant_check,
                             filament_identity_holds, telescoping_check)

shape = TableauShape((3, 2, 2, 1))
dec = decompose_diagonals(shape)
print(dec.diagonals)
print(dec.cases)

# g_1, ..., g_M
for g in diagonal_chain(shape):
    print(g.arity, len(g.terms))

dens = corner_density_polynomial(shape)
print(dens.poly.coefficients())
print(dens.ext, count_syt(shape))

# the discrete corner law hidden in the density
print(entry_law_from_density(dens))
print(corner_distribution_exact(shape))

# the tree density is a multiple of the tableau density
chk = filament_constant_check(shape)
print(chk.constant, chk.proportional)
print([filament_identity_holds(shape, L) for L in range(5)])

# inverse sampling telescopes to the uniform density on the polytope
point = {(c, r): Fraction(c + 2 * r, 2 * shape.size + 2) for c, r in shape.cells()}
print(telescoping_check(shape, point))
