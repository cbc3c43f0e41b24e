"""Evaluate the third-order equations each frame vector satisfies.

Every frame vector of a versor field solves a linear third-order ODE with
coefficients rational in the invariants; these hold identically, so their
residuals measure only numerical error. Dropping the zeroth-order term
characterizes helices: the reduced residual is small exactly when the
corresponding helix verdict is true, which is what the agreement table
cross-checks.
"""

from myller import OdeKind, characterization_check, evaluate_residual
from myller.presets import make_fixture

for name in ("slant", "nonhelix"):
    fx = make_fixture(name)
    print(f"{name}: full-equation residuals (exact-substitution mode)")
    for kind in OdeKind:
        if kind.name.endswith("REDUCED"):
            continue
        res = evaluate_residual(kind, fx.field, fx.alt, mode="exact")
        if res.degenerate:
            print(f"  {kind.name:12s} degenerate ({res.reason.split(':')[1].strip()})")
        else:
            print(f"  {kind.name:12s} normalized residual {res.normalized:.3e} "
                  f"on {res.valid_samples} samples")

    report = characterization_check(fx.field, fx.alt, tol=1e-3)
    print("  reduced-equation agreement with the classifier:")
    for check in report.checks:
        if check.skipped:
            print(f"    {check.kind.name:20s} skipped (degenerate)")
        else:
            print(f"    {check.kind.name:20s} small={str(check.small):5s} "
                  f"verdict={str(check.verdict):5s} agree={check.agree}")
    print(f"  all agree: {report.all_agree}")
    print()
