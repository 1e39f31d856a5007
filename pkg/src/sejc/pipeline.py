"""End-to-end compilation of a workspace."""

from dataclasses import replace

from .frontend import load_workspace
from .java.printer import print_unit
from .posttrans import optimize_unit
from .testgen import generate_tests
from .translate import build_unit


def compile_world(world, guards=True, main_class="Main", tests=False, post=True):
    """JavaUnit for ``world``; post-translation passes run unless ``post`` is false."""
    unit = build_unit(world, guards, main_class)
    if post:
        unit = optimize_unit(unit)
    if tests:
        unit = replace(unit, test_class=generate_tests(world, unit, guards, main_class))
    return unit


def compile_file(path, guards=True, main_class="Main", tests=False, post=True, **load_kw):
    world = load_workspace(path, **load_kw)
    return world, compile_world(world, guards, main_class, tests, post)


def java_sources(unit):
    return print_unit(unit)
