#!/usr/bin/env python3
# Record a scenario to CSV, stream it at a live WebSocket server, and
# check the wire predictions against the offline pipeline byte for byte.

import os
import tempfile

from harstream.evaluation import render_prediction_log, run_prequential
from harstream.learners import create
from harstream.pipeline import vectors_from_samples
from harstream.service import (ServiceConfig, prediction_log_from_events,
                               replay_csv, start_in_thread)
from harstream.synth import (generate, label_registry, rounds_scenario, record,
                             replay, well_separated_profiles)

profiles = well_separated_profiles()
samples = generate(profiles, rounds_scenario(3), seed=2)[:40 * 30]
csv_path = os.path.join(tempfile.mkdtemp(), "session.csv")
record(samples, csv_path)
print(f"recorded {len(samples)} samples ({len(samples) // 40} windows) to {csv_path}")

handle = start_in_thread(ServiceConfig(port=0))
print(f"server listening at {handle.url}")

events = replay_csv(handle.url, csv_path, algo="inb", seed=0, speed=0.0)
handle.stop()

kinds = {}
for e in events:
    kinds[e["type"]] = kinds.get(e["type"], 0) + 1
print(f"events from the wire: {kinds}")

final = [e for e in events if e.get("type") == "metrics" and e.get("final")][-1]
print(f"server-side tally: {final['correct']}/{final['evaluated']} correct, "
      f"accuracy {100 * final['accuracy']:.2f}%")

# the service normalizes features with a running z-score before the
# model sees them; vectors_from_samples(normalized=True) is that exact
# pipeline, so the two logs must match byte for byte
offline = run_prequential(
    vectors_from_samples(replay(csv_path, labels=label_registry(profiles)),
                         normalized=True),
    create("inb", 98, seed=0))
wire_log = prediction_log_from_events(events)
offline_log = render_prediction_log(offline.records)
print(f"wire log == offline log: {wire_log == offline_log}")
print("first line of both:")
print(" ", wire_log.splitlines()[0])
