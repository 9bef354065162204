"""Randomized audit of every closed-form estimate behind the method.

Each theoretical bound (solution energy estimates, boundary traces,
Lipschitz constants of the input-output maps, the misfit and its
gradient, and the adjoint-solution bounds) is evaluated on randomized
admissible inputs and compared against its closed form.  The margins
show how conservative the theory is; violations would indicate bugs.
"""

from collections import defaultdict

from beamload import CoefficientSet, SpaceTimeGrid, verify_inequality_suite


def main():
    grid = SpaceTimeGrid(length=1.0, final_time=1.0, n_elements=32,
                         n_steps=256)
    coeffs = CoefficientSet.constant(grid, rho_A=1.0, mu=0.05, T_r=0.1,
                                     r=0.8, kappa=0.02)
    report = verify_inequality_suite(grid, coeffs, n_scenarios=10, seed=0)
    print(report.summary())

    tightest = defaultdict(lambda: 0.0)
    for row in report.rows:
        if row.rhs > 0:
            tightest[row.check] = max(tightest[row.check],
                                      row.lhs / row.rhs)
    print(f"\n{'check':<24} {'worst lhs/rhs':>14}")
    for name in sorted(tightest):
        print(f"{name:<24} {tightest[name]:>14.3e}")
    print("\nratios far below one are the slack the closed-form "
          "constants carry; the gradient Lipschitz bound in particular "
          "is orders of magnitude conservative, which is why the fixed "
          "theory-backed descent step is so small in practice.")


if __name__ == "__main__":
    main()
