import copy
import json
from fractions import Fraction

import numpy as np
import pytest

from wandering.constructor import ConstructionCertificate
from wandering.errors import ItineraryBreak, RadiusBoundViolated
from wandering.family import derive_constants
from wandering.puiseux import PuiseuxNumber, T
from wandering.residue import get_field
from wandering.verifier import (OrbitData, check_hsia, check_itinerary, check_scaling,
                                valuation_profile, verify_certificate)

F2 = get_field(2)


def _tamper(cert, mutate):
    obj = json.loads(json.dumps(cert.to_json()))
    mutate(obj)
    return ConstructionCertificate.from_json(obj)


def test_profile_rows(desk_cert):
    consts = derive_constants(desk_cert.a0, 2)
    rows = valuation_profile(consts, desk_cert.plan)
    assert len(rows) == 48 and [r.step for r in rows] == list(range(48))
    assert rows[0].value == Fraction(127, 64)
    assert [r.value for r in rows[7:12]] == [10, 8, 6, 4, 2]
    assert rows[12].value == Fraction(2047, 1024)
    assert rows[47].value == 0


def test_report_contents(desk_cert):
    rep = desk_cert.verification
    assert rep["pass"] and rep["hsiaPass"] and rep["oracleAgreement"]
    assert rep["itinerary"] == "0" * 7 + "1" * 5 + "0" * 11 + "1" * 9 + "0" * 15
    radii = [Fraction(r["num"], r["den"]) for r in rep["radiusVals"]]
    assert radii[0] == 8
    assert radii[7] >= 18 and radii[12] >= 8 and radii[23] >= 26 and radii[32] >= 8
    assert [(d["i"], d["actual"]) for d in rep["denominatorChecks"]] == \
        [(0, 64), (1, 1024), (2, 16384)]


def test_all_zero_orbit_breaks_at_first_one(desk_cert):
    zeros = OrbitData(desk_cert.a0, [PuiseuxNumber.zero(F2, prec=40)] * 48, 0)
    with pytest.raises(ItineraryBreak) as exc:
        check_itinerary(zeros, desk_cert.plan)
    assert exc.value.index == 8


def test_disk_containing_one_is_caught():
    data = OrbitData(T(F2, -2), [1 + T(F2, 5)], 0)
    assert check_hsia(data, [Fraction(3)], 1) == (False, 0)
    assert check_hsia(data, [Fraction(6)], 1) == (True, None)


def test_wrong_parameter_breaks_itinerary(desk_cert):
    bad = _tamper(desk_cert, lambda o: o.update(aFinal=o["a0"]))
    with pytest.raises(ItineraryBreak):
        verify_certificate(bad)


def test_inflated_radius(desk_cert):
    bad = _tamper(desk_cert, lambda o: o["disk"].update(radiusVal={"num": 6, "den": 1}))
    with pytest.raises(RadiusBoundViolated) as exc:
        verify_certificate(bad)
    assert exc.value.index == 0


def test_larger_window_reproduces_valuations(desk_cert):
    r1 = verify_certificate(desk_cert)
    r2 = verify_certificate(desk_cert, window_val=128)
    assert r1.passed and r2.passed
    assert r1.valuation_data() == r2.valuation_data()


def test_scaling_spot_check(desk_cert):
    rng = np.random.default_rng(7)
    out = check_scaling(desk_cert, 1, 5, rng)
    assert len(out) >= 4 and all(g == d + 2 for d, g in out)
