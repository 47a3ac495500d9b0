"""Byte-exact golden tests for every API endpoint over the toy fixture.

Regenerate after an intentional wire change with:

    REGEN_GOLDEN=1 python3 -m pytest tests/test_golden.py

then review the diff before committing.
"""

from __future__ import annotations

import json
import os

import pytest
from fastapi.testclient import TestClient

from modeldiff.service import create_app
from tests.conftest import build_toy_dataset
from tests.wirecheck import GOLDEN_DIR, SEQUENCE, run_sequence

REGEN = os.environ.get("REGEN_GOLDEN") == "1"


@pytest.fixture(scope="module")
def exchange() -> dict[str, bytes]:
    client = TestClient(create_app(build_toy_dataset()))
    return dict(run_sequence(client))


@pytest.mark.parametrize("name", [name for name, *_ in SEQUENCE])
def test_golden_bytes(name: str, exchange: dict[str, bytes]):
    path = GOLDEN_DIR / f"{name}.json"
    body = exchange[name]
    json.loads(body)  # every payload must be valid JSON
    if REGEN:
        GOLDEN_DIR.mkdir(exist_ok=True)
        path.write_bytes(body)
        pytest.skip(f"regenerated {path.name}")
    assert path.exists(), f"golden file {path.name} missing; run with REGEN_GOLDEN=1"
    assert body == path.read_bytes()
