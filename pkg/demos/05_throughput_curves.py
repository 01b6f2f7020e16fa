"""Average throughput vs average SNR: three routes for the (2,2) mode.

E ln(1 + gamma) is computed by the separable quadrature (with the
eigenvalue law integrated analytically), by the Meijer-G closed forms of
the weakest mode, and by Monte Carlo.  The optimized benchmark tracks the
compensated (1,1) mode closely from below 10 dB.  Equivalent CLI:
ris2x2 throughput --svg --out fig2.csv
"""

from ris2x2 import (
    ALT,
    Mode,
    channel_statistics,
    throughput,
    throughput_closed_r22,
    throughput_closed_r22_cmp,
    throughput_from_stats,
)

stats = channel_statistics(seed=42, trials=200_000, include_alt=True, workers=4)

print(f"{'snr_db':>6} {'route':28} {'nats/s/Hz':>12}")
for snr_db in (0, 10, 20):
    g = 10.0 ** (snr_db / 10.0)
    rows = [
        ("integral, plain (2,2)", throughput(Mode(2, 2, False), g)),
        ("closed form R22", throughput_closed_r22(g)),
        ("MC, plain (2,2)", throughput_from_stats(stats, Mode(2, 2, False), g).value),
        ("integral, comp (2,2)", throughput(Mode(2, 2, True), g)),
        ("closed form R22 comp", throughput_closed_r22_cmp(g)),
        ("MC, comp (2,2)", throughput_from_stats(stats, Mode(2, 2, True), g).value),
    ]
    for name, val in rows:
        print(f"{snr_db:6d} {name:28} {val:12.6f}")
    print()

print("optimized benchmark vs its compensated (1,1) lower bound:")
for snr_db in (0, 5, 10, 15):
    g = 10.0 ** (snr_db / 10.0)
    r_alt = throughput_from_stats(stats, ALT, g).value
    r_low = throughput(Mode(1, 1, True), g)
    print(f"  {snr_db:3d} dB: R_alt = {r_alt:.4f}, bound = {r_low:.4f}, gap = {r_alt - r_low:.4f}")
