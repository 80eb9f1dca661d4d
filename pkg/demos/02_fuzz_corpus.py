#!/usr/bin/env python3
"""Generate a small corpus of random programs and look at its shape.

Every while loop carries a private ble-prefixed breaker variable whose bound
is conjoined with the guard, which is why raw samples essentially always
terminate.
"""
import statistics
import tempfile

from implang import FuzzConfig, generate_corpus, parse
from implang.metrics import profile

cfg = FuzzConfig()
print("statement probabilities:", cfg.probabilities)

with tempfile.TemporaryDirectory() as out:
    manifest = generate_corpus(cfg, count=20, seed=7, out_dir=out)
    print(f"accepted {manifest['count']} programs "
          f"from {manifest['raw_samples']} raw samples "
          f"(rejection rate {manifest['rejection_rate']:.3f})")

    profiles = []
    for entry in manifest["programs"]:
        source = open(f"{out}/{entry['name']}", encoding="utf-8").read()
        profiles.append(profile(parse(source)))

print("median lines of code:   ",
      statistics.median(p.loc for p in profiles))
print("median cyclomatic:      ",
      statistics.median(p.cc for p in profiles))
print("max loop nesting seen:  ",
      max(p.max_nested_loop for p in profiles))
print("max taken loop nesting: ",
      max(p.taken_loop_depth for p in profiles))
print("median trace length:    ",
      statistics.median(p.trace_length for p in profiles))
