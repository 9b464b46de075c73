"""
Pathloss curves of the highway channel model
============================================

Sweeps the line-of-sight and obstructed pathloss curves over distance,
marks the slope breakpoint, and saves the figure as
``pathloss_curves.png``.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from sidelink_sim import breakpoint_distance, pathloss_los, pathloss_nlos

FC_HZ = 5.9e9       # carrier frequency
H_VEHICLE = 1.5     # antenna height of a vehicle, meters
H_SITE = 35.0       # antenna height of a roadside site, meters

d = np.linspace(10.0, 2000.0, 1000)

los_db, _ = pathloss_los(d, H_VEHICLE, H_VEHICLE, FC_HZ)
nlos_db = pathloss_nlos(np.clip(d, 50.0, None), H_SITE, H_VEHICLE, FC_HZ)
d_bp = breakpoint_distance(H_VEHICLE, H_VEHICLE, FC_HZ)

print(f"breakpoint distance: {d_bp:.2f} m")
print(f"LOS pathloss at 100 m:  {pathloss_los(100.0, 1.5, 1.5, FC_HZ)[0]:.3f} dB")
print(f"LOS pathloss at 1 km:   {pathloss_los(1000.0, 1.5, 1.5, FC_HZ)[0]:.3f} dB")
print(f"NLOS pathloss at 100 m: {pathloss_nlos(100.0, H_SITE, 1.5, FC_HZ):.3f} dB")

fig, ax = plt.subplots(figsize=(7, 4.5))
ax.semilogx(d, los_db, label="line of sight (vehicle to vehicle)")
ax.semilogx(d, nlos_db, label="obstructed (site to vehicle)", ls="--")
ax.axvline(d_bp, color="gray", lw=0.8)
ax.annotate(f"breakpoint\n{d_bp:.1f} m", xy=(d_bp, 60.0),
            xytext=(d_bp * 1.25, 52.0), fontsize=9)
ax.set_xlabel("distance (m)")
ax.set_ylabel("pathloss (dB)")
ax.set_title("Pathloss at 5.9 GHz")
ax.grid(True, which="both", alpha=0.3)
ax.legend()
fig.tight_layout()
fig.savefig("pathloss_curves.png", dpi=150)
print("wrote pathloss_curves.png")
