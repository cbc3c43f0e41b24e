"""Classify versor fields as xi1-helices, slant helices and Darboux helices.

The slant detector sigma = K1^2/(K1^2+K2^2)^(3/2) (K2/K1)' is constant
exactly on slant helices, where it equals cot(theta) against the fixed
axis; the Darboux detector p/q is its reciprocal, so the two verdicts
always coincide. The degenerate case q = 0 means the normalized Darboux
vector is itself fixed in space.
"""

from myller import classify, extract_alternative, extract_frenet
from myller.presets import make_fixture

for name in ("circular", "slant", "nonhelix"):
    fx = make_fixture(name)
    field = extract_frenet(fx.curve)
    alt = extract_alternative(field, field.tangent())
    rep = classify(field, alt, tol=1e-3)

    print(f"{name}:")
    print(f"  xi1-helix   {str(rep.xi1_helix):5s}  (K2/K1 rel dev {rep.xi1_stats.rel_dev:.2e})")
    print(f"  slant helix {str(rep.slant_helix):5s}  (sigma = {rep.slant_stats.mean:+.4f} "
          f"+- {rep.slant_stats.max_abs_dev:.2e})")
    if rep.darboux_degenerate:
        print("  Darboux     degenerate general helix: D is itself a fixed direction")
    else:
        print(f"  Darboux     {str(rep.darboux_helix):5s}  (p/q = {rep.darboux_stats.mean:+.4f})")
    print(f"  slant angle theta = {rep.theta:.4f} rad, axis drift {rep.axis_d_drift:.2e}")
    print(f"  axis direction at s0: {rep.axis_d.values[0].round(6)}")
    print()
