"""Smoke test for the sym2py extension: python python/smoke.py"""

import csv
import io
import json

import sym2py


def main():
    assert sym2py.cusp_dimension(12) == 1
    assert sym2py.cusp_dimension(14) == 0
    assert sym2py.cusp_dimension(24) == 2

    re, im = sym2py.dirichlet_l(-4, 0.5, 40)
    assert abs(float(re) - 0.667691) < 1e-5 and abs(float(im)) < 1e-30

    terms = sym2py.main_terms(20, 40)
    assert set(terms) == {"m1", "m_minus4", "m_minus3", "sum"}
    assert abs(float(terms["m1"]) + float(terms["m_minus4"]) + float(terms["m_minus3"]) - float(terms["sum"])) < 1e-12

    table = sym2py.moment(k_min=14, k_max=16, digits=30)
    rows = list(csv.DictReader(io.StringIO(table)))
    assert [r["k"] for r in rows] == ["14", "16"]
    assert all(r["status"] == "ok" and r["version"] == sym2py.__version__ for r in rows)

    report = json.loads(sym2py.verify("lemmas", format="json"))
    assert report["version"] == sym2py.__version__
    assert all(r["status"] == "pass" for r in report["rows"])

    for bad in (lambda: sym2py.moment(k_min=13, k_max=13), lambda: sym2py.verify("nonsense")):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    print(f"sym2py {sym2py.__version__}: ok")


if __name__ == "__main__":
    main()
