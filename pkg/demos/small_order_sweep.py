"""Replay a few verification suites over the bundled groups of small order.

    python3 demos/small_order_sweep.py [MAX_ORDER]
"""
import sys

from fsubnormal.harness import load_corpus, run_suites

max_order = int(sys.argv[1]) if len(sys.argv) > 1 else 24
corpus, description = load_corpus()
corpus = [(n, G) for n, G in corpus if G.order <= max_order]
report = run_suites(["thm3.4", "prop1.3", "remark3.5", "lemma3.1"], corpus, description=description)
print(f"{len(corpus)} groups of order <= {max_order}")
for s in report.suites:
    c = s.counts
    print(f"{s.suite:10s} {s.description}")
    print(f"{'':10s} checked {c['checked']}, failed {c['failed']}, skipped {c['skipped']}, vacuous {c['vacuous']}")
for f in next(s for s in report.suites if s.suite == "lemma3.1").findings:
    print("minimal non-La(1), Frattini-free:", f)
sys.exit(0 if report.failed == 0 else 1)
