from biphoton.checks import ALL_CHECKS, run_all


def test_registry_has_at_least_twenty_invariants():
    assert len(ALL_CHECKS) >= 20


def test_names_are_unique_and_dotted():
    names = [name for name, _ in ALL_CHECKS]
    assert len(set(names)) == len(names)
    assert all("." in name for name in names)


def test_full_suite_passes():
    results = run_all()
    failures = [r for r in results if not r.passed]
    assert not failures, failures
