import os

from hypothesis import HealthCheck, settings

import dehnlab.certificates as _certs
import laws

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

_verify = _certs.verify


def _recording_verify(c):
    ok = _verify(c)
    # tampered certificates in negative tests are not part of the corpus
    if ok:
        laws.REGISTRY.append(c)
    return ok


# test modules import verify after this runs, so they all feed the registry
_certs.verify = _recording_verify


def pytest_terminal_summary(terminalreporter):
    if not laws.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(laws.RESULTS):
        ok, detail = laws.RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
