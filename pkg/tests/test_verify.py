import numpy as np

from cknlab.reporting import csv_text, json_text, ordered_map
from cknlab.verify import (
    run_estimates_suite,
    run_identities_suite,
    run_rigidity_suite,
    run_spectrum_suite,
)


class TestSuites:
    def test_identities_small_config(self):
        rep = run_identities_suite(n_fields=2, n_sphere_fields=10)
        assert rep["pass"] and rep["first_failure"] is None
        names = {c["identity"] for c in rep["checks"]}
        assert names == {
            "bochner_decomposition_vs_definition",
            "divergence_identity_bubble",
            "pressure_equation_bubble",
            "sphere_inequality_margin",
        }

    def test_estimates_rows_and_pass(self):
        rep, rows = run_estimates_suite()
        assert rep["pass"]
        lemmas = {r[0] for r in rows}
        assert {"superharmonic_bound", "weak_energy", "defect_vs_gradient",
                "finite_energy_tail", "localized_defect"} <= lemmas
        text = csv_text(["lemma", "params", "R", "lhs", "rhs",
                         "fitted_exponent", "bound", "pass"], rows)
        assert text.count("\n") == len(rows) + 1

    def test_rigidity_suite(self):
        rep = run_rigidity_suite(amplitudes=4)
        assert rep["pass"]
        assert all(c["matched"] == "4/4" for c in rep["checks"])

    def test_spectrum_suite(self):
        rep = run_spectrum_suite(N=1200)
        assert rep["pass"]
        gaps = [c["relative_gap"] for c in rep["checks"]
                if c["name"] == "threshold_crossing"]
        assert gaps and max(gaps) < 0.01

    def test_failure_is_named(self):
        rep = run_identities_suite(n_fields=1, n_sphere_fields=2,
                                   order_floor=99.0)  # unreachable floor
        assert not rep["pass"]
        assert rep["first_failure"] == "bochner_decomposition_vs_definition"


class TestDeterminism:
    def test_identities_reports_identical(self):
        a = json_text(run_identities_suite(seed=3, n_fields=2, n_sphere_fields=5))
        b = json_text(run_identities_suite(seed=3, n_fields=2, n_sphere_fields=5))
        assert a == b

    def test_seed_changes_fields(self):
        a = run_identities_suite(seed=3, n_fields=2, n_sphere_fields=5)
        b = run_identities_suite(seed=4, n_fields=2, n_sphere_fields=5)
        ma = a["checks"][-1]["min_margin"]
        mb = b["checks"][-1]["min_margin"]
        assert ma != mb

    def test_ordered_map_preserves_order(self):
        items = list(range(64))
        out = ordered_map(lambda x: x * x, items, max_workers=8)
        assert out == [x * x for x in items]
