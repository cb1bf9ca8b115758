import json

import pytest
from pydantic import ValidationError

from chipfiring_main import ChipFiringCalculator
from conftest import K4_REDUCED, RUNNING_CRITICALS, RUNNING_L, RUNNING_M, RUNNING_SUPERSTABLES
from dynamics import PolicyOrder
from errors import BoxTooLarge, IterationCapExceeded
from models_config import EngineConfig, JobDocument, load_engine_config
from pairing import ConfigS
from report_processor import ReportProcessor, format_rational


@pytest.fixture
def calculator():
    return ChipFiringCalculator.from_matrices(RUNNING_L, RUNNING_M)


def test_classify_report(calculator):
    report = calculator.classify()
    assert report["n"] == 3
    assert report["invariant_factors"] == [1, 1, 4]
    assert {tuple(c["critical"]) for c in report["classes"]} == RUNNING_CRITICALS
    energies = {tuple(c["superstable"]): c["energy_of_superstable"] for c in report["classes"]}
    assert energies[(1, 1, 1)] == "43/16"
    assert energies[(0, 0, 0)] == 0


def test_class_reports_are_cached(calculator):
    assert calculator.class_reports() is calculator.class_reports()
    assert {tuple(f) for f in calculator.superstables()["superstables"]} == RUNNING_SUPERSTABLES


def test_membership_report(calculator):
    report = calculator.membership([4, -1, 4])
    assert report["in_s_plus"] is True
    assert report["x"] == ["9/4", "1/4", "9/4"]


def test_caps_come_from_config():
    tight = EngineConfig(max_firings=2, box_cap=5)
    calculator = ChipFiringCalculator.from_matrices(RUNNING_L, RUNNING_M, tight)
    with pytest.raises(IterationCapExceeded):
        calculator.stabilize([14, 0, 14])
    with pytest.raises(BoxTooLarge):
        calculator.is_superstable([4, 0, 4])


def test_policy_comes_from_config():
    config = EngineConfig(default_policy=PolicyOrder.RANDOM, seed=7)
    calculator = ChipFiringCalculator.from_matrices(RUNNING_L, RUNNING_M, config)
    assert calculator.policy.seed == 7
    assert calculator.stabilize([14, 0, 14]).stable_config == ConfigS.of((4, 0, 4))


@pytest.mark.parametrize("pairing, expected_m", [
    ("classical", K4_REDUCED),
    ("identity", [[1, 0, 0], [0, 1, 0], [0, 0, 1]]),
])
def test_from_document_special_pairings(pairing, expected_m):
    document = JobDocument(L=K4_REDUCED, pairing=pairing)
    calculator = ChipFiringCalculator.from_document(document)
    assert [[int(v) for v in row] for row in calculator.pairing.M] == expected_m


def test_document_rejects_m_with_special_pairing():
    with pytest.raises(ValidationError):
        JobDocument(L=K4_REDUCED, M=K4_REDUCED, pairing="classical")


def test_engine_config_file(tmp_path):
    path = tmp_path / "engine.json"
    path.write_text(json.dumps({"det_cap": 50, "default_policy": "highest"}))
    config = load_engine_config(str(path))
    assert config.det_cap == 50
    assert config.default_policy == PolicyOrder.HIGHEST_INDEX
    assert config.max_firings == EngineConfig().max_firings


def test_engine_config_errors(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_engine_config(str(tmp_path / "missing.json"))
    path = tmp_path / "engine.json"
    path.write_text(json.dumps({"workers": 0}))
    with pytest.raises(ValidationError):
        load_engine_config(str(path))


def test_missing_default_config_gives_defaults(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert load_engine_config() == EngineConfig()


def test_format_rational():
    assert format_rational(4) == 4
    assert format_rational("6/4") == "3/2"


def test_text_rendering_of_matrices():
    text = ReportProcessor().to_text({"L": [[2, -1], [-1, 2]], "count": 3})
    assert text.splitlines()[0] == "L:"
    assert "count: 3" in text
