"""Smoke test for the dyncolor_py extension: build it with `maturin develop`
(or `pip install ./crates/py`) and run `python crates/py/python/smoke_test.py`."""

import json

import dyncolor_py as dc


def main():
    eng = dc.Engine(200, 8, seed=7)
    assert eng.top_level == 4, eng.top_level
    events = dc.generate("churn:0.6", 200, 8, 20_000, seed=7)
    eng.apply(events)
    assert eng.conflicts() == [], "coloring is not proper"
    assert eng.audit() == []
    assert all(1 <= c <= 9 for c in eng.coloring())
    assert all(-1 <= l <= eng.top_level for l in eng.levels())
    assert dc.check_proper(eng.coloring(), eng.edges()) == []
    totals = eng.totals()
    assert totals["updates"] == 20_000

    try:
        u, v = eng.edges()[0]
        eng.insert(u, v)
    except dc.UpdateError:
        pass
    else:
        raise AssertionError("duplicate insertion accepted")

    text = dc.write_stream(200, 8, events[:500])
    n, delta, parsed = dc.parse_stream(text)
    assert (n, delta, parsed) == (200, 8, events[:500])

    report = json.loads(dc.run(text, seed=7, audit="every:100", baseline=True))
    assert report["audits"] == 5
    assert report["violations"]["improper"] == 0
    assert dc.run(text, seed=7) == dc.run(text, seed=7)
    print(f"ok: {eng!r}, {totals['recolors']} recolors, amortized {report['amortized']}")


if __name__ == "__main__":
    main()
