"""Frozen oracle values.

Computed once at 40 significant digits with mpmath (polylogarithms, zeta
values, ``nsum`` for lattice sums and tanh-sinh quadrature split at every
non-smooth point).  The library never produced these numbers; they are
checked against it.
"""

# pi^(3/2) zeta(3/2): Bose gas, Constant(1), s = 2, d = 3, mu = 0
RHO_C_BOSE_3D = 14.54656279231839961352987
# pi^(3/2) (1 - 2^(-1/2)) zeta(3/2): Fermi gas at mu = 0
RHO_FERMI_MU0_3D = 4.260589598914138555157243
# pi^(3/2): Boltzmann statistics at mu = 0
RHO_BOLTZMANN_MU0_3D = 5.568327996831707845284818
# pi^(3/2) Li_{3/2}(e^(-1/2))
RHO_BOSE_MU_M05_3D = 4.51307667685572065956739
# sqrt(pi) Li_{1/2}(e^(-1)), d = 1
RHO_BOSE_MU_M1_1D = 0.8969150346429655507488695
# -pi ln(1 - e^(-1)), d = 2
RHO_BOSE_MU_M1_2D = 1.440970467132286809343113
# Dirichlet box, d = 1, L = 10, mu = -0.5: L^-1 sum_n 1/(exp((pi n / L)^2 + 1/2) - 1)
BOX_D1_L10_MU_M05 = 0.2464512698132176093260166
# f = g = bump(0, 1.5) paired with the ZeroAt(1, 0.5, 2) kernel at q = 1, mu = 0
PAIR_ZEROAT_CENTRED_BUMP = 0.5248617598877900591487219
# f = g = bump(0, 1) paired with the Constant(1) kernel at q = 1, mu = 0
PAIR_CONSTANT_CENTRED_BUMP = 0.7902287829413473434031055
# L2 norm squared of bump(0, 1) in d = 3
L2_CENTRED_BUMP = 0.09610270992427033067686579
