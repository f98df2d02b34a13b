"""Shared fixtures: small images used across the suite."""

from __future__ import annotations

import json

import pytest

from digtopo.image import build_box, build_cycle, build_from_points, mask_from_points


@pytest.fixture
def seg():
    """Two-point interval [0,1] under c1."""
    return build_box([(0, 1)], 1)


@pytest.fixture
def path3():
    """Three-point interval [0,2] under c1."""
    return build_box([(0, 2)], 1)


@pytest.fixture
def square_c1():
    return build_box([(0, 2), (0, 2)], 1)


@pytest.fixture
def square_c2():
    return build_box([(0, 2), (0, 2)], 2)


@pytest.fixture
def corners_c2(square_c2):
    return mask_from_points(square_c2, [(0, 0), (0, 2), (2, 0), (2, 2)])


@pytest.fixture
def cycle8():
    img, indexing = build_cycle(8)
    return img


@pytest.fixture
def t_tree():
    """Four-point tree: path (0,0)-(1,0)-(2,0) with a hair at (1,1)."""
    return build_from_points([(0, 0), (1, 0), (2, 0), (1, 1)], 1)


@pytest.fixture
def write_json(tmp_path):
    """Write a JSON payload to a temp file and return its path as str."""

    def _write(name: str, payload) -> str:
        p = tmp_path / name
        p.write_text(json.dumps(payload))
        return str(p)

    return _write
