"""f-MI matrices of a small joint distribution and their PSD verdicts."""

import numpy as np

from fmipsd import JointDistribution, get_generator, mi_matrix, psd_check

rng = np.random.default_rng(0)
table = rng.dirichlet(np.ones(8)).reshape(2, 2, 2)
j = JointDistribution(table)

for name in ("kl", "chi2", "js", "tv"):
    report = psd_check(mi_matrix(j, get_generator(name)))
    print(f"{name:>4}: lambda_min = {report.min_eigenvalue:+.4f}  psd = {report.psd}")

# small random laws rarely break PSD-ness; demos 03-06 construct families that do
