"""Orthogonality of symmetry sequences and decay of mixed integrals.

Pairs of transformation sequences are classified by which parameter
separates them. For a dilation sequence against a fixed profile the mixed
integral of |u_1|^2 |u_2|^2 decays, while the pure norms (alpha = 0 or 4)
are invariant.
"""

from nlw_strichartz import classify, mixed_l4_decay, parse_sequence
from nlw_strichartz.penrose import theta_field

pairs = [("ell=2^n", "ell=1", 16),
         ("lambda=2^n", "lambda=1", 16),
         ("ell=2^n", "ell=2^n, phi=1.0", 16),
         ("t=n", "t=0", 2000),
         ("lambda=2", "lambda=2; t=1", 32)]
for a, b, n_max in pairs:
    verdict = classify(parse_sequence(a), parse_sequence(b), n_max)
    print(f"{a!r:>14} vs {b!r:<18} -> {verdict.kind}")
print()

w = theta_field(0.0, 96)
a, b = parse_sequence("lambda=2^n"), parse_sequence("lambda=1")
for alpha in (0.0, 2.0, 4.0):
    dec = mixed_l4_decay(w, w, a, b, alpha, range(0, 9, 2))
    values = "  ".join(f"{v:.5f}" for v in dec.values)
    print(f"alpha={alpha:.0f}: {values}")
