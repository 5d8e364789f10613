"""End-to-end acceptance checks, run through the verification harness.

The `paper` verification suite is computed once per session; each criterion then reports
one PASS/FAIL line (plus the individual checks under it) and fails if any of
its checks fail or it exceeds its runtime budget.  Criterion 3 compares
against the cobar complex with a fixed cell budget; bidegrees whose cobar
complex is larger than that budget count as failures, not as skips.
"""

import time

import pytest

from steenext.verify import Context, run

COBAR_CELLS = 500_000

# criterion -> (short title, runtime budget in seconds)
CRITERIA = {
    1: ("Hopf axioms and tau3 primitive", 60),
    2: ("Ext_B splits as Ext_A(2)[v3]", 600),
    3: ("resolution agrees with the cobar complex, t <= 24, f <= 8", 600),
    4: ("relations in Ext over A(2)", 600),
    5: ("M h1 and its restriction", 1800),
    6: ("M h1^6 relation", 7200),
    7: ("restriction of MP and the M^2 substitute", 7200),
    8: ("nonvanishing spot checks", 7200),
    9: ("determinism and robustness", 600),
}


def _report(title, outcomes, seconds, ok):
    status = "PASS" if ok else "FAIL"
    lines = [f"{status} {title} ({seconds:.0f}s)"]
    lines += [f"    {o.line()}" for o in outcomes]
    return "\n".join(lines)


@pytest.fixture(scope="module")
def paper():
    ctx = Context("paper", cobar_cells=COBAR_CELLS)
    outcomes = run("paper", ctx=ctx, out=None)
    return ctx, outcomes


@pytest.mark.slow
@pytest.mark.parametrize("criterion", sorted(CRITERIA))
def test_criterion(criterion, paper, capsys):
    _, outcomes = paper
    title, budget = CRITERIA[criterion]
    mine = [o for o in outcomes if o.criterion == criterion]
    assert mine, f"no checks registered for criterion {criterion}"
    seconds = sum(o.seconds for o in mine)
    ok = all(o.passed for o in mine) and seconds <= budget
    text = _report(f"criterion {criterion}: {title}", mine, seconds, ok)
    with capsys.disabled():
        print("\n" + text)
    assert all(o.passed for o in mine), text
    assert seconds <= budget, f"criterion {criterion} took {seconds:.0f}s, budget {budget}s"


@pytest.mark.slow
def test_extended_table_rows(paper, capsys):
    """Non-gating rows at stems 56, 60, 66 (A resolved to stem 66)."""
    base, _ = paper
    ctx = Context("extended")
    for name in ("B", "A2", "E-tau3"):
        ctx.ws.attach(name, base.ws.resolution(name))
    outcomes = run("extended", ctx=ctx, out=None)
    ok = all(o.passed for o in outcomes)
    text = _report("extended rows (non-gating)", outcomes, sum(o.seconds for o in outcomes), ok)
    with capsys.disabled():
        print("\n" + text)
    assert ok, text


@pytest.mark.slow
def test_quick_suite_within_five_minutes(capsys):
    t0 = time.time()
    outcomes = run("quick", ctx=Context("quick"), out=None)
    seconds = time.time() - t0
    ok = all(o.passed for o in outcomes) and seconds <= 300
    text = _report("quick suite", outcomes, seconds, ok)
    with capsys.disabled():
        print("\n" + text)
    assert ok, text
