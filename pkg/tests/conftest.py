import pathlib

import pytest

from stratakit import groups

SPEC_DIR = pathlib.Path(__file__).resolve().parents[1] / "src" / "stratakit" / "specs"
ALL_SPEC_NAMES = ("example", "z2_line", "s1_plane", "z2z2_plane", "trivial",
                  "s1_weight2")


def spec_path(name):
    return SPEC_DIR / (name + ".json")


def spec_text(name):
    return spec_path(name).read_text(encoding="utf-8")


_cache = {}


def load(name):
    if name not in _cache:
        _cache[name] = groups.load_spec(spec_text(name))
    return _cache[name]


@pytest.fixture(scope="session")
def example_spec():
    return load("example")


@pytest.fixture(scope="session")
def weight2_spec():
    return load("s1_weight2")


@pytest.fixture(scope="session")
def z2z2_spec():
    return load("z2z2_plane")


@pytest.fixture(scope="session", params=ALL_SPEC_NAMES)
def any_spec(request):
    return load(request.param)
