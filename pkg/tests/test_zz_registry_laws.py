"""Runs last: diagram laws over every certificate verified in this session."""

import laws


def test_every_certificate_folds_lawfully():
    seen = set()
    failures = []
    for c in laws.REGISTRY:
        key = (c.word, c.presentation, c.factors)
        if key in seen:
            continue
        seen.add(key)
        try:
            bad = laws.law_violations(c)
        except Exception as e:  # a certificate the builder rejects is itself a failure
            bad = [f"{type(e).__name__}: {e}"]
        if bad:
            failures.append((c.word, bad))
    ok = not failures
    if laws.RESULTS.get(5, (True, ""))[0]:
        laws.record(5, ok, laws.RESULTS.get(5, (True, ""))[1] + f"; suite registry: {len(seen)} distinct, {len(failures)} violations")
    assert ok, failures[:5]
