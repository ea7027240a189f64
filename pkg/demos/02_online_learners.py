#!/usr/bin/env python3
# The six incremental classifiers share one contract: learn(x, y) one
# example at a time, predict(x) without side effects, admit new classes
# whenever they appear.

import numpy as np

from harstream.learners import ALGORITHM_TITLES, ALGORITHMS, create, load_model, save_model

rng = np.random.default_rng(4)
CORNERS = {0: np.zeros(4), 1: np.array([8.0, 8, 0, 0]), 2: np.array([0.0, 0, 8, 8])}

def point(label):
    return CORNERS[label] + rng.normal(0, 0.4, 4)

models = {algo: create(algo, n_features=4, seed=1) for algo in ALGORITHMS}

print("before any training, every model abstains:")
print({algo: m.predict(np.zeros(4)) for algo, m in models.items()})

# phase one: two classes only
for _ in range(60):
    y = int(rng.integers(0, 2))
    x = point(y)
    for m in models.values():
        m.learn(x, y)

probe = CORNERS[1] + 0.1
print("\nafter 60 examples of classes 0 and 1, predict near corner 1:")
for algo, m in models.items():
    label, scores = m.predict(probe)
    print(f"  {ALGORITHM_TITLES[algo]:<28} -> {label}  (score {scores[label]:.2f})")

# phase two: class 2 shows up mid-stream; no re-fit, no reconfiguration
for _ in range(50):
    x = point(2)
    for m in models.values():
        m.learn(x, 2)

print("\nclass 2 arrived mid-stream; predict near corner 2:")
for algo, m in models.items():
    print(f"  {ALGORITHM_TITLES[algo]:<28} -> {m.predict(CORNERS[2])[0]}")

# snapshots freeze the whole model state, RNG included
import tempfile, os
path = os.path.join(tempfile.mkdtemp(), "forest.model")
save_model(models["irf"], path)
clone = load_model(path)
probes = [point(y) for y in (0, 1, 2) for _ in range(5)]
same = all(clone.predict(p) == models["irf"].predict(p) for p in probes)
print(f"\nsnapshot round trip (irf): predictions identical = {same}")
print(f"examples seen: {models['irf'].examples_seen}")
