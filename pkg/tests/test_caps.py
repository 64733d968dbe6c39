import pytest

from medianbv import caps
from medianbv.errors import InvalidInput, SizeCapExceeded


def test_defaults():
    assert caps.get("subalgebras") == 12
    assert caps.get("median_axioms") == 64


def test_env_override(monkeypatch):
    monkeypatch.setenv(caps.ENV_VAR, "subalgebras=20, shadow=3")
    assert caps.get("subalgebras") == 20
    assert caps.get("shadow") == 3
    with pytest.raises(SizeCapExceeded):
        caps.require("shadow", 4)


def test_bad_env(monkeypatch):
    monkeypatch.setenv(caps.ENV_VAR, "nonsense")
    with pytest.raises(InvalidInput):
        caps.get("shadow")
    monkeypatch.setenv(caps.ENV_VAR, "unknown=3")
    with pytest.raises(InvalidInput):
        caps.get("shadow")


def test_override_context():
    with caps.override(subalgebras=30):
        assert caps.get("subalgebras") == 30
    assert caps.get("subalgebras") == 12


def test_unknown_cap():
    with pytest.raises(InvalidInput):
        caps.get("nope")
