import hashlib
from importlib import resources

import numpy as np
import pytest

from monoplane import (
    WeightVector, cosine, count_errors, evaluate, load_published_table,
    load_published_weights, separability_probe, stability,
)
from monoplane.evaluation import (
    PUBLISHED_NAMES, paper_layout_numbering, perturbation_analysis,
    published_norms, run_mode,
)

from conftest import make_ls_patterns, xor_patterns

# the embedded tables are data assets; any edit must be deliberate
ASSET_SHA256 = {
    "w_train.txt": "4657bc50b690ad1d66156bc77dc3dbbdf42c1e3c92be9271ee0cf4930081f2c3",
    "w_test.txt": "30423c0247ffbf05b4e992033168a15e0a864fd46d7c1eaf035fd198cbc44f5a",
    "w_sonar.txt": "6624e92e9857ed1efb8a1b25ce2fd84274e3f963651daa933762596f51510c37",
    "table6.json": "861e1adfd02f5b3ec03a43cf6c4001ea778745b17778a9b8ef39de33df7925de",
}


class TestPublishedAssets:
    def test_checksums(self):
        for name, want in ASSET_SHA256.items():
            data = resources.files("monoplane.assets").joinpath(name).read_bytes()
            assert hashlib.sha256(data).hexdigest() == want, name

    def test_w_train_endpoints(self):
        w = load_published_weights("W_Train").vector
        assert len(w) == 61
        assert w.w[0] == pytest.approx(-0.0692)
        assert w.w[-1] == pytest.approx(0.0015)

    def test_w_test_endpoints(self):
        w = load_published_weights("W_Test").vector
        assert len(w) == 61
        assert w.w[0] == pytest.approx(-0.4035)

    def test_w_sonar_largest_entry(self):
        w = load_published_weights("W_Sonar").vector
        assert w.w[0] == pytest.approx(-0.0290)
        assert w.w[31] == pytest.approx(3.3527)
        assert np.argmax(np.abs(w.w)) == 31

    def test_unknown_name(self):
        with pytest.raises(KeyError):
            load_published_weights("W_Bogus")

    def test_norms_identify_the_normalization(self):
        """All three published vectors sit on ||w||^2 = N+1 = 61."""
        norms = published_norms()
        for name in PUBLISHED_NAMES:
            assert norms[name] == pytest.approx(np.sqrt(61), abs=2e-4)

    def test_table6_shape(self):
        t6 = load_published_table()
        assert len(t6["test_side"]) == 20
        assert len(t6["train_side"]) == 24
        assert t6["test_side"][0]["mu"] == 105
        assert t6["test_side"][0]["gamma_sonar"] == pytest.approx(2.09029e-3)
        assert sum(1 for r in t6["test_side"] if r["tau"] == -1) == 15
        assert sum(1 for r in t6["train_side"] if r["tau"] == +1) == 19


class TestEvaluate:
    def test_separator_yields_empty_report(self, fast_config):
        rng = np.random.default_rng(40)
        pats, true_w = make_ls_patterns(rng, n=30, dim=5)
        from monoplane import minimerror_train
        w, _ = minimerror_train(pats, fast_config)
        rep = evaluate(w, pats)
        assert rep.counts == (0, 0, 0)
        assert rep.records == []
        assert rep.error_fraction == 0.0

    def test_records_sorted_and_consistent(self):
        rng = np.random.default_rng(41)
        pats, _ = make_ls_patterns(rng, n=60, dim=6)
        w = WeightVector(rng.standard_normal(7))
        ref = WeightVector(rng.standard_normal(7))
        rep = evaluate(w, pats, reference=ref)
        assert rep.counts[0] == len(rep.records)
        assert rep.counts[0] == rep.counts[1] + rep.counts[2]
        mus = [r.mu for r in rep.records]
        assert mus == sorted(mus)
        for r in rep.records:
            p = next(p for p in pats if p.mu == r.mu)
            assert r.tau * r.field_value <= 0
            assert r.gamma_reference == pytest.approx(stability(ref, p))

    def test_error_fraction_one_decimal(self):
        rng = np.random.default_rng(42)
        pats, _ = make_ls_patterns(rng, n=104, dim=5)
        w = WeightVector(rng.standard_normal(6))
        rep = evaluate(w, pats)
        assert rep.error_fraction == round(100.0 * rep.counts[0] / 104, 1)

    def test_emitters_carry_identical_fields(self):
        rng = np.random.default_rng(43)
        pats, _ = make_ls_patterns(rng, n=20, dim=4)
        w = WeightVector(rng.standard_normal(5))
        rep = evaluate(w, pats)
        as_json = rep.to_json_dict()
        csv_text = rep.to_csv()
        txt = rep.to_text()
        assert len(as_json["records"]) == len(rep.records)
        assert csv_text.splitlines()[0] == "i,mu,field,gamma_reference,tau"
        assert len(csv_text.splitlines()) == 1 + len(rep.records)
        assert f"{rep.error_fraction:.1f}%" in txt


class TestCosine:
    def test_self_is_one(self):
        rng = np.random.default_rng(50)
        for _ in range(10):
            w = WeightVector(rng.standard_normal(61))
            assert cosine(w, w) == pytest.approx(1.0, abs=1e-12)

    def test_negation_is_minus_one(self):
        rng = np.random.default_rng(51)
        w = WeightVector(rng.standard_normal(61))
        assert cosine(w, WeightVector(-w.w)) == pytest.approx(-1.0, abs=1e-12)

    def test_raw_eq8_divides_by_squared_dimension(self):
        a = WeightVector(np.ones(61))
        b = WeightVector(np.ones(61))
        assert cosine(a, b, raw_eq8=True) == pytest.approx(61 / 61**2)
        assert cosine(a, b) == pytest.approx(1.0)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            cosine(WeightVector(np.ones(3)), WeightVector(np.ones(4)))

    def test_published_pairs_both_modes(self):
        """The two modes bracket the published Table 5 values but neither
        reproduces them; the verifier reports this rather than patching it."""
        ws = {n: load_published_weights(n).vector for n in PUBLISHED_NAMES}
        true_st = cosine(ws["W_Sonar"], ws["W_Train"])
        raw_st = cosine(ws["W_Sonar"], ws["W_Train"], raw_eq8=True)
        assert true_st == pytest.approx(0.36922, abs=1e-4)
        assert raw_st == pytest.approx(true_st * 61 / 61**2, rel=1e-3)


class TestProbe:
    def test_train_part_is_separable(self, train_std, separation_config,
                                     trained_train_separator):
        patterns, _ = train_std
        w, _ = trained_train_separator
        # reuse the session-trained separator as the probe's witness
        assert count_errors(w, patterns)[0] == 0
        assert min(stability(w, p) for p in patterns) > 0.0

    def test_xor_is_undetermined(self, fast_config):
        verdict = separability_probe(xor_patterns(), fast_config)
        assert not verdict.separable
        assert verdict.errors >= 1

    def test_certificate_soundness_on_toy(self, fast_config):
        rng = np.random.default_rng(60)
        pats, _ = make_ls_patterns(rng, n=25, dim=4)
        verdict = separability_probe(pats, fast_config)
        assert verdict.separable
        assert verdict.recheck(pats)

    def test_probe_rejects_empty(self, fast_config):
        with pytest.raises(ValueError):
            separability_probe([], fast_config)


class TestLayoutNumbering:
    def test_blocks_and_quotas(self, balanced_parts):
        train, test = balanced_parts
        layout = paper_layout_numbering(train, test)
        assert sorted(layout.values()) == list(range(1, 209))
        # mines of the learning part take 1..49, its rocks 50..104
        train_mines = sorted(p.mu for p in train if p.label == "M")
        assert [layout[m] for m in train_mines] == list(range(1, 50))
        train_rocks = sorted(p.mu for p in train if p.label == "R")
        assert [layout[m] for m in train_rocks] == list(range(50, 105))
        test_mines = sorted(p.mu for p in test if p.label == "M")
        assert [layout[m] for m in test_mines] == list(range(105, 167))
        test_rocks = sorted(p.mu for p in test if p.label == "R")
        assert [layout[m] for m in test_rocks] == list(range(167, 209))


class TestModeSweep:
    def test_run_mode_structure(self, balanced_parts):
        train, test = balanced_parts
        r = run_mode("part-std", "part", "std", train, test)
        assert r.counts_test_side[0] == len(r.mu_test_side)
        assert r.counts_train_side[0] == len(r.mu_train_side)
        assert r.counts_test_side[1] + r.counts_test_side[2] == r.counts_test_side[0]
        assert len(r.gamma_check["rows"]) == 44

    def test_perturbation_analysis_spread(self, balanced_parts):
        train, test = balanced_parts
        sens = perturbation_analysis(train, test, "part", "std", n_draws=20)
        for key in ("W_Train_on_test", "W_Test_on_train", "W_Sonar_on_all"):
            assert sens[key]["min"] <= sens[key]["max"]
