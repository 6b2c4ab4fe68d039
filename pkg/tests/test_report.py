import json
import math

import numpy as np
from hypothesis import given, strategies as st

from qkrylov.report import BOUND_FLOOR, FORMAT_VERSION, ExperimentReport, config_hash, to_jsonable


def test_jsonable_conversions():
    out = to_jsonable({"a": np.float64(0.5), "b": np.int64(3), "c": 1 + 2j, "d": np.array([1, 2]),
                       "e": float("nan"), "f": -math.inf, "g": np.bool_(True), "h": 3 ** 40})
    assert out == {"a": 0.5, "b": 3, "c": {"re": 1.0, "im": 2.0}, "d": [1, 2], "e": "nan",
                   "f": "-inf", "g": True, "h": str(3 ** 40)}
    json.dumps(out)


def test_bound_checks():
    rep = ExperimentReport("demo")
    ok = rep.check_bound(rep.add(measured_error=0.1, predicted_bound=0.2))
    edge = rep.check_bound(rep.add(measured_error=BOUND_FLOOR / 2, predicted_bound=0.0))
    bad = rep.check_bound(rep.add(measured_error=0.3, predicted_bound=0.2))
    rep.add(measured_error=5.0, predicted_bound=0.0)
    assert ok["bound_ok"] and edge["bound_ok"] and not bad["bound_ok"]
    assert len(rep.bound_rows()) == 3
    assert rep.failed_rows() == [bad]


def test_serialization_and_files(tmp_path):
    rep = ExperimentReport("demo", summary={"note": "x"})
    rep.add(k=1, value=0.25)
    rep.add(k=2, extra=1j)
    rep.curves["err"] = ([1, 2], [0.5, 0.25])
    written = rep.write(tmp_path)
    assert [p.name for p in written] == ["report.json", "report.csv", "err.dat"]
    data = json.loads((tmp_path / "report.json").read_text())
    assert data["format_version"] == FORMAT_VERSION and data["command"] == "demo"
    assert data["rows"][1]["extra"] == {"re": 0.0, "im": 1.0}
    lines = (tmp_path / "report.csv").read_text().splitlines()
    assert lines[0] == "k,value,extra"
    assert lines[1] == "1,0.25,"
    assert (tmp_path / "err.dat").read_text() == "1 0.5\n2 0.25\n"


def test_config_hash_ignores_key_order():
    assert config_hash({"a": 1, "b": 2.0}) == config_hash({"b": 2.0, "a": 1})
    assert config_hash({"a": 1}) != config_hash({"a": 2})
    assert len(config_hash({})) == 16


@given(st.lists(st.dictionaries(st.sampled_from(["x", "y", "z"]),
                                st.one_of(st.integers(-10, 10), st.floats(allow_nan=False), st.text(max_size=5)),
                                min_size=1), max_size=6))
def test_json_is_deterministic(rows):
    a, b = ExperimentReport("p"), ExperimentReport("p")
    for r in rows:
        a.add(**r)
        b.add(**dict(reversed(list(r.items()))))
    assert a.to_json() == b.to_json()
    json.loads(a.to_json())
