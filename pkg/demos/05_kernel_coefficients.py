"""Kernel power-series coefficients are generator coefficients times a positive multiplier."""

from fmipsd import coefficient_table, get_generator, verify_T_positivity

report = verify_T_positivity(30)
print(f"T_m(a) > 0 on the grid: {report.all_positive} (min reduced value {report.min_reduced:.4f})")

for name in ("kl", "cosh"):
    table = coefficient_table(get_generator(name), 1 / 3, 8)
    print(f"\n{name} at a = 1/3 (agrees: {table.agrees()})")
    print("  m      T_m    predicted     fitted")
    for m in range(2, 9):
        print(f"  {m}  {table.T[m]:7.3f}  {table.predicted[m]:+.6e}  {table.empirical[m]:+.6e}")

tv = coefficient_table(get_generator("tv"), 1 / 3, 8)
print(f"\ntv: non-polynomial kernel = {tv.nonpolynomial} (residual {tv.residual:.2e})")
