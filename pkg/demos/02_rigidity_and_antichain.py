"""
Rigidity witnesses and almost disjoint seeds
============================================

Two points of C(s) are separated by the first scheduled stage past the bit
where their rays part.  Seeds that share only finitely many terms give
inequivalent Cantor sets, and the heap labels of tree rays are such a family.
"""

from bwcantor import (
    Affine,
    AntichainRay,
    RaySpec,
    antichain_common_count,
    antichain_terms,
    common_terms,
    cs_spec,
    inequivalence_certificate,
    parse_ray,
    replay_witness,
    rigidity_report,
    tails_equal_cs,
    whitehead_prefix,
)
from bwcantor.sequences import random_distinct_ray_pairs

seed = Affine(1, 0)
spec = cs_spec(seed)

a, b = parse_ray("(0)"), parse_ray("1(0)")
print(whitehead_prefix(spec, a, 5), whitehead_prefix(spec, b, 5))

verdict = tails_equal_cs(seed, a, b)
print(verdict.kind, verdict.witness)
print(replay_witness(seed, a, b, verdict.witness))

# a ray pair parting at bit 39 is separated at stage 2**36 + 5; the replay is structural
far_a, far_b = RaySpec((0,) * 39, (0,)), RaySpec((0,) * 39 + (1,), (0,))
print(replay_witness(seed, far_a, far_b, tails_equal_cs(seed, far_a, far_b).witness).mode)

report = rigidity_report(seed, random_distinct_ray_pairs(100, rng_seed=1))
print("rigidity sample ok:", report.ok, "gaps:", report.gaps)

# antichain seeds: heap labels along rays
zeros, ones = RaySpec.all_zeros(), RaySpec.all_ones()
print(antichain_terms(zeros, 6), antichain_terms(ones, 6), antichain_common_count(zeros, ones))

print(common_terms(Affine(3, 1), AntichainRay(zeros)))  # 4, 16, 64, ... are all 1 mod 3
print(inequivalence_certificate(Affine(2, 0), Affine(2, 1)).reason)
print(inequivalence_certificate(Affine(1, 0), Affine(2, 0)).reason)
