"""Measure n - t over random instances, against brute force where it is cheap.

The proven loss bound is a constant depending on k only, but it is far too
large to ever see.  Here we just count what the extractor leaves behind, with
and without the checked fallback that accepts an unrepaired matching whose
removal keeps every deficit inequality.
"""

from collections import Counter

from rainbow_bases import ExtractionConfig, InstanceSpec, brute_force_t, extract_all, gen_instance

for k in range(4):
    strict, loose, gap = Counter(), Counter(), Counter()
    for seed in range(40):
        n = 2 + seed % 4
        M, B = gen_instance(InstanceSpec(n, k, seed))
        a = extract_all(M, B)
        b = extract_all(M, B, ExtractionConfig(fallback=True))
        strict[a.b0_observed] += 1
        loose[b.b0_observed] += 1
        if k <= 2:
            gap[brute_force_t(M, B) - a.t] += 1
    print(f"k={k}  n-t strict {dict(sorted(strict.items()))}  with fallback {dict(sorted(loose.items()))}")
    if gap:
        print(f"      brute force minus extracted {dict(sorted(gap.items()))}")
