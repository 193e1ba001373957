"""Build the audience-matching model and route a target user to a message.

Per profile feature, authors are clustered with 1-D k-means (silhouette
picks k; booleans bypass clustering); users with identical cluster tuples
form a group; a Gini tree over the groups defines the intervention bins.

Run:  python3 demos/03_audience_matching.py
"""

import numpy as np

from peernudge.datagen import make_author, make_message_pool
from peernudge.matching import FEATURE_ABBREVIATIONS, FEATURE_NAMES, GroupModel

pool = make_message_pool(n_authors=80, seed=11)
model = GroupModel.build(pool, seed=11)

print(f"pool: {len(pool)} former-smoker posts")
print("per-feature clusters:")
for name in FEATURE_NAMES:
    spec = model.feature_clusters[name]
    centroids = ", ".join(f"{c:.1f}" for c in spec.centroids)
    print(f"  {FEATURE_ABBREVIATIONS[name]:>3} {name:<24} {spec.kind:<9} "
          f"[{centroids}]")
print(f"-> {model.n_groups} groups, {model.n_bins} intervention bins")

# every author lands back in the bin holding their own message
violations = sum(model.assign_bin(m.author) != m.bin_id for m in pool)
print(f"re-mapping check: {violations} violations over {len(pool)} authors")

# --- route a fresh target ----------------------------------------------------
target = make_author(np.random.default_rng(99))
print("\ntarget profile:", target.to_dict())
for step in model.bin_path(target):
    direction = "<=" if step["went_left"] else "> "
    print(f"  {step['abbreviation']:>3} {direction} {step['threshold']:.1f}")
bin_id = model.assign_bin(target)
message = model.representative_for(target)
print(f"-> bin {bin_id}: {len(model.bins[bin_id]['message_ids'])} messages")
print(f"-> intervention: {message.text!r} (from {message.message_id})")
