"""Second order theory against simulation.

Three short numerical experiments:

1. variance curve of the type I process against its Monte Carlo
   estimate, showing the saturation at the large-time plateau;
2. noise autocovariance: exact values, the large-lag closed form and the
   empirical estimate from one long simulated series;
3. Welch periodogram of the simulated noise against the model spectral
   density, including the Von Karman flattening of the type II noise
   below omega = lambda.

Everything prints as aligned tables; no files are written.
"""

import numpy as np

from tflp import (
    CompoundPoisson, GaussianJumps, SampleGrid, TemperedParams,
    acvf_tfln1, acvf_tfln1_asymptotic, cov_tflp1, empirical_acvf,
    noise_path, periodogram, second_moment, simulate_ensemble,
    simulate_tflp1, simulate_tflp2, spec_density_tfln1, spec_density_tfln2,
    truncation_width, var_limit_tflp1,
)

driver = CompoundPoisson(intensity=2.0, jump_law=GaussianJumps(sigma=1.0))
EL2 = second_moment(driver)


def variance_curve():
    p = TemperedParams(0.25, 0.4)
    grid = SampleGrid(0.0, 16.0, 64)
    arr = simulate_ensemble("TFLP1", p, grid, driver, seed=1, n_paths=500,
                            trunc_width=truncation_width(p, 1e-8))
    print("type I variance: exact vs 500-path Monte Carlo "
          f"(plateau {EL2 * var_limit_tflp1(p):.4f})")
    print(f"{'t':>6} {'exact':>10} {'MC':>10}")
    for t in (0.5, 1.0, 2.0, 4.0, 8.0, 16.0):
        j = int(round(t / grid.dx))
        print(f"{t:6.1f} {EL2 * cov_tflp1(p, t, t):10.4f} "
              f"{arr[:, j].var():10.4f}")


def noise_autocovariance():
    p = TemperedParams(0.2, 0.3)
    N = 2 ** 16
    path = simulate_tflp1(p, SampleGrid(0.0, float(N), N), driver,
                          trunc_width=truncation_width(p, 1e-8),
                          seed=2, refine=1)
    est = empirical_acvf(noise_path(path).values, 40)
    print("\ntype I noise acvf: exact, large-lag form, empirical (N = 2^16)")
    print(f"{'h':>4} {'exact':>11} {'asymptotic':>11} {'empirical':>11}")
    for h in (0, 1, 2, 5, 10, 20, 40):
        exact = acvf_tfln1(p, h, EL2)
        asym = acvf_tfln1_asymptotic(p, h, EL2) if h > 0 else float("nan")
        print(f"{h:4d} {exact:11.5f} {asym:11.5f} {est[h]:11.5f}")


def spectra():
    N = 2 ** 17
    grid = SampleGrid(0.0, float(N), N)
    print("\nperiodogram vs model density (ratios near 1 mean agreement)")
    print("the model display is one side of the symmetric density, so the")
    print("folded density of the sampled series is twice the display (plus")
    print("aliasing near the Nyquist frequency, which the mid band avoids)")
    for kind, sim, dens, d, lam in (
            ("I", simulate_tflp1, spec_density_tfln1, 0.2, 0.3),
            ("II", simulate_tflp2, spec_density_tfln2, 0.35, 0.05)):
        p = TemperedParams(d, lam)
        path = sim(p, grid, driver, trunc_width=truncation_width(p, 1e-8),
                   seed=3, refine=1)
        om, pw = periodogram(noise_path(path).values, 4096)
        print(f"type {kind} noise, d = {d}, lambda = {lam}")
        print(f"{'omega':>9} {'2x model':>11} {'estimate':>11} {'ratio':>7}")
        for w in (0.05, 0.2, 0.5, 1.0):
            k = np.argmin(np.abs(om - w))
            # average a small band to tame periodogram noise
            band = slice(max(k - 8, 0), k + 9)
            model = 2.0 * EL2 * dens(p, om[k])
            est = pw[band].mean()
            print(f"{om[k]:9.4f} {model:11.5g} {est:11.5g} {est / model:7.2f}")


if __name__ == "__main__":
    variance_curve()
    noise_autocovariance()
    spectra()
