"""Replicating the family until its f-MI matrix turns indefinite."""

from fmipsd import (assemble_block, block_spectrum, delta_matrix, get_generator, kernel_matrix,
                    min_replicas_for_indefiniteness, paper_preset, psd_check)

fam = paper_preset()
for name in ("tv", "relu"):
    f = get_generator(name)
    K, D = kernel_matrix(f, fam), delta_matrix(f, fam)
    res = min_replicas_for_indefiniteness(K, D)
    print(f"{name}: R_min = {res.R} (Rayleigh bound {res.rayleigh_bound:.3f}), "
          f"witness form {res.quadratic_form:.5f}, certified = {res.certified}")

tv = get_generator("tv")
K, D = kernel_matrix(tv, fam), delta_matrix(tv, fam)
for R in (6, 7, 8, 9):
    full = psd_check(assemble_block(K, D, R)).min_eigenvalue
    fast = block_spectrum(K, D, R)[0]
    print(f"R = {R}: lambda_min {full:+.6f} (full), {fast:+.6f} (block formula)")
