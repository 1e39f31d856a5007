import pytest

from sejc.fuzz import MAX_DEPTH, generate_case, guard_ok, parse_case, pass_preservation, run_case
from sejc.reader import read_sexprs
from sejc.types import AV, value_has_type


def _depth(x):
    return 1 + max((_depth(y) for y in x), default=0) if isinstance(x, list) else 0


def test_generated_workspaces_parse_and_validate():
    for seed in range(20):
        case = generate_case(seed)
        world = parse_case(case, samples=50)
        assert len(case.calls) == 10
        assert all(fn in world.functions for fn, _ in case.calls)


def test_generation_is_deterministic():
    assert generate_case(5).source == generate_case(5).source
    assert generate_case(5).source != generate_case(6).source


def test_body_depth_bounded():
    for seed in range(30):
        for form in read_sexprs(generate_case(seed).source):
            if form[0].name == "DEFUN":
                # each generated level adds a few list levels of surface syntax
                assert _depth(form[-1]) <= 4 * (MAX_DEPTH + 1)


def test_calls_satisfy_guards_and_types():
    for seed in range(20):
        case = generate_case(seed)
        world = parse_case(case, validate=False)
        for fn, args in case.calls:
            assert guard_ok(world, fn, args)
            main = world.functions[fn].main_type
            assert all(t is AV or value_has_type(a, t) for a, t in zip(args, main.inputs))


@pytest.mark.parametrize("start", range(0, 40, 10))
def test_differential_sample(start):
    for seed in range(start, start + 10):
        report = run_case(seed)
        assert not report.failures, report.failures[:3]
        assert report.agree > 0


@pytest.mark.parametrize("start", range(0, 40, 10))
def test_pass_preservation_sample(start):
    for seed in range(start, start + 10):
        report = pass_preservation(seed)
        assert not report.failures, report.failures[:3]
