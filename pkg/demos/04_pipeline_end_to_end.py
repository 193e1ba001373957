"""Drive the whole loop: scan, filter, classify, match, approve, post.

Everything runs in-process against a synthetic tweet fixture: a logistic
model is trained on the fly, the pipeline replays the fixture at a fast
tick, one candidate is approved and one rejected, and the audit trail plus
outbox are printed at the end.

Run:  python3 demos/04_pipeline_end_to_end.py
"""

import tempfile
from pathlib import Path

import numpy as np

from peernudge.audit import AuditLog
from peernudge.classifiers import LogisticRegression
from peernudge.datagen import (
    _NEUTRAL_TEMPLATES,
    _PRO_TEMPLATES,
    make_message_pool,
    make_tweet_stream,
    write_tweets_jsonl,
)
from peernudge.encoding import TextEncoder, load_keywords
from peernudge.matching import GroupModel
from peernudge.pipeline import Pipeline, Status, TweetClassifier
from peernudge.sources import JsonlOutboxSink, JsonlReplaySource

workdir = Path(tempfile.mkdtemp(prefix="peernudge-demo-"))

# --- train a quick classifier -------------------------------------------------
encoder = TextEncoder(max_len=80, feature_dim=128)
texts = list(_PRO_TEMPLATES) * 6 + list(_NEUTRAL_TEMPLATES) * 6
labels = np.array([1] * 30 + [0] * 30)
X = np.stack([encoder.encode(t).features for t in texts])
model = LogisticRegression(learning_rate=0.5, epochs=400).fit(X, labels)
classifier = TweetClassifier(model=model, encoder=encoder, model_type="logreg")
print(f"classifier trained; final log-likelihood {model.loglik_history[-1]:.2f}")

# --- assemble the pipeline ----------------------------------------------------
fixture = workdir / "tweets.jsonl"
write_tweets_jsonl(make_tweet_stream(80, seed=21), fixture)
group_model = GroupModel.build(make_message_pool(60, seed=21), seed=21)
outbox = JsonlOutboxSink(workdir / "outbox.jsonl")
pipeline = Pipeline(
    keywords=load_keywords(),
    classifier=classifier,
    group_model=group_model,
    source=JsonlReplaySource(fixture, batch_size=20),
    sink=outbox,
    threshold=0.5,
    audit_log=AuditLog(workdir / "audit.jsonl"),
)

pipeline.set_scanner(True)
while not pipeline.source.exhausted:
    pipeline.tick()

counts = pipeline.counts_by_status()
print(f"\nafter replay: {pipeline.counters['scanned']} scanned, "
      f"{pipeline.counters['matched']} keyword-matched")
for status, count in counts.items():
    if count:
        print(f"  {status:<24} {count}")

# --- operator decisions ---------------------------------------------------
awaiting = [p for p in pipeline.pendings.values()
            if p.status is Status.AWAITING_APPROVAL]
print(f"\noperator reviews {len(awaiting)} candidates:")
approved = pipeline.approve(awaiting[0].pending_id, "demo-operator")
print(f"  approved {approved.pending_id}: posting "
      f"{approved.proposed_message.text!r} to {approved.candidate.mention}")
rejected = pipeline.reject(awaiting[1].pending_id, "demo-operator")
print(f"  rejected {rejected.pending_id} "
      f"(confidence was {rejected.confidence:.2f})")

print(f"\noutbox deliveries: {len(outbox.read_all())}")
print("last audit events:")
for event in pipeline.audit.events[-6:]:
    print(f"  #{event.event_id:<4} {event.kind:<16} {event.payload}")
print(f"\nartifacts in {workdir}")
