"""The four-variable circulant latent family and its total-variation kernel."""

import numpy as np

from fmipsd import (diagonal_value, enumerate_full_joint, get_generator, kernel_matrix,
                    mi_matrix, paper_preset, psd_check)

fam = paper_preset()
tv = get_generator("tv")
print("rho_ij =\n", np.round(fam.gram(), 4))

K = kernel_matrix(tv, fam)
print("9 K =\n", np.round(9 * K, 6))
report = psd_check(K)
print("eigenvalues of K:", np.round(report.eigenvalues, 4))
print("witness:", np.round(report.witness, 4))

# the f-MI matrix of the family itself stays PSD: the diagonal d_a = 4/9 absorbs the dip
M = mi_matrix(enumerate_full_joint(fam), tv)
print("d_a =", diagonal_value(tv, fam.a), " lambda_min(M) =", psd_check(M).min_eigenvalue)
