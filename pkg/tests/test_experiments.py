"""Tests for pair generation, the success curve, IO formats, and the fixture suite."""

import pytest

from catalocc import (
    GenerationExhausted,
    Relation,
    majorizes_check,
    tensor_spectrum,
)
from catalocc.catalysis import locc_feasible
from catalocc.experiments import (
    CurvePoint,
    PairGenSpec,
    generate_catalyzable_pairs,
    load_pairs_jsonl,
    reference_suite,
    success_probability_curve,
    write_curve_csv,
    write_pairs_jsonl,
)


def small_spec(seed=101, count=40):
    return PairGenSpec(seed=seed, n=6, k=3, count=count)


class TestPairGenSpec:
    def test_rejects_k_not_below_n(self):
        with pytest.raises(ValueError):
            PairGenSpec(seed=1, n=4, k=4)

    def test_rejects_bad_count(self):
        with pytest.raises(ValueError):
            PairGenSpec(seed=1, count=0)

    def test_default_budget_scales_with_count(self):
        assert PairGenSpec(seed=1, count=5000).rejection_budget == 10_000_000
        assert PairGenSpec(seed=1, count=10, max_rejections=77).rejection_budget == 77


class TestGeneratePairs:
    def test_certificates_hold(self):
        pairs = generate_catalyzable_pairs(small_spec())
        assert len(pairs) == 40
        for query, witness in pairs:
            assert len(witness) == 3
            assert not locc_feasible(query)
            verdict = majorizes_check(
                tensor_spectrum(query.psi, witness),
                tensor_spectrum(query.phi, witness),
            )
            assert verdict.relation in (Relation.MAJORIZED_BY, Relation.EQUIVALENT)

    def test_deterministic(self):
        a = generate_catalyzable_pairs(small_spec())
        b = generate_catalyzable_pairs(small_spec())
        assert a == b

    def test_two_level_source_exhausts(self):
        # no standard catalyst exists for 2-dim sources; the rate guardrail
        # must abort instead of spinning
        spec = PairGenSpec(seed=3, n=2, k=1, count=5, max_rejections=300_000)
        with pytest.raises(GenerationExhausted):
            generate_catalyzable_pairs(spec)

    def test_budget_cap_raises(self):
        spec = PairGenSpec(seed=5, n=6, k=3, count=10_000, max_rejections=10_000)
        with pytest.raises(GenerationExhausted):
            generate_catalyzable_pairs(spec)


class TestSuccessCurve:
    def test_monotone_and_reasonable(self):
        pairs = generate_catalyzable_pairs(small_spec(seed=7, count=60))
        points = success_probability_curve(pairs, 3, (1, 5, 10, 25, 50, 100), seed=7)
        fractions = [p.success_fraction for p in points]
        assert fractions == sorted(fractions)
        assert all(0.0 <= f <= 1.0 for f in fractions)
        assert points[-1].success_fraction >= 0.9
        assert all(p.pairs == 60 and p.seed == 7 for p in points)

    def test_nested_budgets_match_separate_runs(self):
        pairs = generate_catalyzable_pairs(small_spec(seed=11, count=20))
        combined = success_probability_curve(pairs, 3, (5, 50), seed=11)
        alone = success_probability_curve(pairs, 3, (5,), seed=11)
        assert combined[0].success_fraction == alone[0].success_fraction

    def test_accepts_bare_queries(self):
        pairs = generate_catalyzable_pairs(small_spec(seed=13, count=10))
        queries = [q for q, _ in pairs]
        points = success_probability_curve(queries, 3, (10,), seed=13)
        assert len(points) == 1

    def test_workers_do_not_change_results(self):
        pairs = generate_catalyzable_pairs(small_spec(seed=17, count=30))
        seq = success_probability_curve(pairs, 3, (1, 10, 100), seed=17, workers=1)
        par = success_probability_curve(pairs, 3, (1, 10, 100), seed=17, workers=4)
        assert seq == par

    def test_single_pair_minimal_budget(self):
        pairs = generate_catalyzable_pairs(small_spec(seed=19, count=1))
        points = success_probability_curve(pairs, 3, (1,), seed=19)
        assert points[0].success_fraction in (0.0, 1.0)

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            success_probability_curve([], 3, (1,), seed=1)


class TestReferenceSuite:
    def test_all_fixtures_pass(self):
        report = reference_suite()
        for result in report.results:
            assert result.passed, f"{result.name}: {result.details}"
        assert report.passed
        assert len(report.results) >= 12
        assert report.failures == ()


class TestPairArchive:
    def test_round_trip_exact(self, tmp_path):
        pairs = generate_catalyzable_pairs(small_spec(seed=23, count=15))
        path = write_pairs_jsonl(tmp_path / "pairs.jsonl", pairs, seed=23)
        loaded = load_pairs_jsonl(path)
        assert len(loaded) == 15
        for (q1, w1), (q2, w2) in zip(pairs, loaded):
            assert q1.psi.coeffs == q2.psi.coeffs  # repr round-trip is exact
            assert q1.phi.coeffs == q2.phi.coeffs
            assert w1.coeffs == w2.coeffs

    def test_byte_identical_for_same_seed(self, tmp_path):
        pairs = generate_catalyzable_pairs(small_spec(seed=29, count=10))
        p1 = write_pairs_jsonl(tmp_path / "a.jsonl", pairs, seed=29)
        p2 = write_pairs_jsonl(tmp_path / "b.jsonl", pairs, seed=29)
        assert p1.read_bytes() == p2.read_bytes()

    def test_load_rejects_tampered_pair(self, tmp_path):
        pairs = generate_catalyzable_pairs(small_spec(seed=31, count=3))
        # swap psi and phi: the direct transformation becomes feasible or the
        # witness stops certifying; either way the certificate must fail
        broken = [(type(q)(q.phi, q.psi), w) for q, w in pairs]
        path = write_pairs_jsonl(tmp_path / "broken.jsonl", broken, seed=31)
        from catalocc import DomainError

        with pytest.raises(DomainError):
            load_pairs_jsonl(path)


class TestCurveCsv:
    def test_format(self, tmp_path):
        points = [
            CurvePoint(big_number=1, success_fraction=0.25, pairs=4, seed=9),
            CurvePoint(big_number=10, success_fraction=1.0, pairs=4, seed=9),
        ]
        path = write_curve_csv(tmp_path / "curve.csv", points)
        lines = path.read_text().splitlines()
        assert lines[0] == "M,success_fraction,pairs,seed"
        assert lines[1] == "1,0.25,4,9"
        assert lines[2] == "10,1.0,4,9"
