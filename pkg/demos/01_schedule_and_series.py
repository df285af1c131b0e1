"""
The C(s) schedule and the divergence series
===========================================

Builds the block schedule for the identity seed s_i = i, shows where the
Whitehead labels live in the tree, and checks that each scheduled block
adds exactly 1 to the series sum 2^-sigma_i.
"""

from bwcantor import Affine, NodeAddress, cs_spec, divergence_report, schedule, series_state, stage_labels

seed = Affine(1, 0)
spec = cs_spec(seed)

# three blocks: the third one's seed range has 2**(2**36 + 5) terms, so its
# end and sigma stay symbolic
for e in schedule(seed, 3).entries:
    print(f"block {e.block}: stage {e.stage}, seed terms {e.start}..{e.end}, sigma {e.sigma}")

# only scheduled stages carry labels; every other stage is all zeros
for i in (1, 2, 5, 6):
    print(i, stage_labels(spec, i))

# the two stage-1 tori get the first two seed terms
print([spec.label(NodeAddress((b,))) for b in (0, 1)])

# partial sums right before n_2 and n_3 are exactly 1 and 2
print(series_state(spec, 4).partial_sum, series_state(spec, 2**36 + 4).partial_sum)

verdict = divergence_report(spec)
print(verdict.kind, verdict.reason)
