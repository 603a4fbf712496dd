"""Print the maximum over r of each test on the ideal twin beam and IPS state,
plus a few noisy reference cases.

    python3 scripts/report_maxima.py
"""

import time
from dataclasses import replace

from cvbell.sweeps import SweepConfig, maximize_over_r

CASES = [
    ("dp twb ideal", SweepConfig("dp", "twb", J=1.6e-3)),
    ("dp ips ideal, tau=0.9999", SweepConfig("dp", "ips", J=1.6e-3, tau=0.9999)),
    ("dp twb gamma_t=0.01 N=0.2", SweepConfig("dp", "twb", J=1.6e-3, gamma_t=0.01, n_th=0.2)),
    ("dp ips gamma_t=0.01 N=0.2", SweepConfig("dp", "ips", J=1.6e-3, tau=0.9999, gamma_t=0.01, n_th=0.2)),
    ("hd ips ideal, tau=0.99", SweepConfig("hd", "ips", r_min=0.05, tau=0.99)),
    ("hd ips ideal, tau=0.99, eta_H=0.9", SweepConfig("hd", "ips", r_min=0.05, tau=0.99, eta_h=0.9)),
    ("ps ips ideal, tau=0.9999", SweepConfig("ps", "ips", r_min=0.05, r_max=5.0, tau=0.9999)),
    ("ps ips ideal, tau=0.8", SweepConfig("ps", "ips", r_min=0.05, r_max=5.0, tau=0.8)),
]


def main():
    print(f"{'case':36s} {'max B':>9s} {'at r':>8s} {'time':>7s}")
    for name, cfg in CASES:
        t0 = time.perf_counter()
        r_star, res = maximize_over_r(replace(cfg, r_step=0.01))
        print(f"{name:36s} {res.value:9.5f} {r_star:8.4f} {time.perf_counter() - t0:6.2f}s")


if __name__ == "__main__":
    main()
