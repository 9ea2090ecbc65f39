# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # The landing reward, band by band
#
# The reward that shapes the landing agent is a piecewise potential field
# around the pad center, squashed through tanh so every value lies in
# (-1, 1). Three bands, keyed on the distance d to the pad center:
#
# * **Far** (d >= 2 m): constant penalty tanh(gamma) — being lost is bad,
#   uniformly.
# * **Mid** (0.1 m <= d < 2 m): progress reward tanh(alpha * (prev_d - d)) —
#   pay for closing distance, charge for opening it, zero for hovering.
# * **Near** (d < 0.1 m): a quadratic attractive well plus safety penalties
#   (being below the pad top, hugging the pad edge) and a speed penalty that
#   charges lateral motion and climbing but lets descent go free.
#
# This script walks the field numerically and exports the same grid the CLI's
# `reward-surface` command writes.

# %%
import numpy as np

from padlander.reward import RewardConfig, compute_reward, reward_surface_grid

cfg = RewardConfig()
zero = np.zeros(3)

# %% [markdown]
# ## A radial walk toward the pad
#
# Approach along +x at a steady 0.05 m per control step and watch the bands
# hand off. In the Mid band the reward is a constant tanh(alpha * 0.05)
# because progress per step is constant; in the Near band the attractive
# well takes over and the total tightens toward 0 at the pad center.

# %%
d_prev = 2.6
for d in np.arange(2.55, -0.001, -0.05):
    b = compute_reward(np.array([max(d, 0.0), 0.0, 0.0]), zero, d_prev, None, False, False, cfg)
    if abs(d - round(d / 0.25) * 0.25) < 1e-9:  # print every 0.25 m
        print(f"d={max(d,0):5.2f} m  case={b.case_id.value:<4}  total={b.total:+.4f}")
    d_prev = max(d, 0.0)

# %% [markdown]
# ## What the safety and speed terms cost
#
# Same spot just above the pad center, different kinematic situations.

# %%
spot = np.array([0.0, 0.0, 0.05])
cases = [
    ("hovering, clean", zero, False, False),
    ("below the pad top", zero, True, False),
    ("hugging the pad edge", zero, False, True),
    ("sliding sideways 0.5 m/s", np.array([0.5, 0.0, 0.0]), False, False),
    ("climbing away 0.5 m/s", np.array([0.0, 0.0, 0.5]), False, False),
    ("descending 0.5 m/s", np.array([0.0, 0.0, -0.5]), False, False),
]
for label, vel, below, edge in cases:
    b = compute_reward(spot, vel, 0.05, None, below, edge, cfg)
    print(f"{label:<26} total={b.total:+.4f}  beta={b.beta_term:.2f}  delta={b.delta_term:+.3f}")

# %% [markdown]
# Note the last two rows: climbing is charged, descending is free. The agent
# is never punished for going down toward the pad — that asymmetry is what
# lets it commit to the final descent.

# %% [markdown]
# ## The full surface
#
# A coarse slice at pad height. The far plateau is the constant penalty;
# the ring between 0.1 m and 2 m is neutral at zero progress; the center
# holds the attractive well.

# %%
xs, ys, grid = reward_surface_grid(z_slice=0.0, xy_range=3.0, resolution=13, cfg=cfg)
for i, y in enumerate(ys):
    row = " ".join(f"{grid[i][j].total:+.2f}" for j in range(len(xs)))
    print(f"y={y:+.1f}  {row}")

# %% [markdown]
# The same grid at any resolution is available from the command line:
#
# ```
# padlander reward-surface --z 0.05 --range 3 --res 101 --out surface.csv
# ```
