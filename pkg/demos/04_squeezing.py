"""
Which prequantized balls squeeze into which
===========================================

Integer radii act as obstructions; below radius 1 every ball squeezes into
every other, and the construction iterates a fixed contraction.
"""

from contactforge.squeeze import iteration_plan, squeezing_verdict

# %%
# The verdict carries the branch it came from.
for R1, R2 in [(1.5, 0.9), (0.9, 0.5), (1.5, 1.2), (2.7, 1.9)]:
    print(f"B({R1}) into B({R2}): {squeezing_verdict(2, R1, R2)}")

# %%
# Each step maps radius ``v`` to ``v / (1 + gamma v)``.
N, traj = iteration_plan(0.9, 0.1, 1.0)
print(f"{N} steps:", " -> ".join(f"{v:.3f}" for v in traj))
