"""Scripted request sequence driving every API endpoint over the toy fixture.

The golden files under ``tests/golden/`` hold the exact response bytes; the
same sequence both regenerates and verifies them, so there is exactly one
definition of the exchange.
"""

from __future__ import annotations

from pathlib import Path

GOLDEN_DIR = Path(__file__).parent / "golden"

CELL_A = {
    "x_model": "M0",
    "y_model": "M1",
    "column": "A",
    "filter_mode": "ALL",
    "correctness": "any",
}

# (name, method, path, params-or-json-body)
SEQUENCE = [
    ("session", "GET", "/api/v1/session", {}),
    (
        "matrix",
        "GET",
        "/api/v1/matrix",
        {"session": "s1", "rows": "M0-vs-rest", "filter_mode": "ALL"},
    ),
    (
        "cell_points",
        "GET",
        "/api/v1/cell",
        {
            "session": "s1",
            "x_model": "M0",
            "y_model": "M1",
            "column": "A",
            "representation": "points",
        },
    ),
    (
        "cell_contours",
        "GET",
        "/api/v1/cell",
        {
            "session": "s1",
            "x_model": "M0",
            "y_model": "M1",
            "column": "A",
            "representation": "contours",
        },
    ),
    (
        "selection_post",
        "POST",
        "/api/v1/selection",
        {"session": "s1", "cell": CELL_A, "origin": {"type": "quadrant", "quadrant": 2}},
    ),
    ("selection_get", "GET", "/api/v1/selection/sel1", {"session": "s1"}),
    (
        "features",
        "GET",
        "/api/v1/features",
        {"session": "s1", "selection": "sel1", "top_k": 5, "sort_keys": "N"},
    ),
    (
        "divergence",
        "GET",
        "/api/v1/divergence",
        {"session": "s1", "selection": "sel1"},
    ),
    (
        "complementarity",
        "GET",
        "/api/v1/complementarity",
        {"session": "s1", "column": "A", "filter_mode": "ALL"},
    ),
    (
        "encoders",
        "POST",
        "/api/v1/encoders",
        {"session": "s1", "members_a": [1, 5], "members_b": [2, 4], "threshold": 0.0},
    ),
]


def run_sequence(client) -> list[tuple[str, bytes]]:
    """Replay the scripted exchange; returns (name, response bytes) per step."""
    out = []
    for name, method, path, payload in SEQUENCE:
        if method == "GET":
            response = client.get(path, params=payload)
        else:
            response = client.post(path, json=payload)
        assert response.status_code == 200, f"{name}: HTTP {response.status_code} {response.text}"
        out.append((name, response.content))
    return out
