import numpy as np
import pytest

from secbio import metrics
from secbio.commit import (
    CommitTemplate,
    commit,
    decision_profile,
    open_commitment,
    sample_message,
    storage_bits,
)
from secbio.gf2 import LinearCode, bits, unpack
from secbio.presets import H1, random_code
from secbio.sketch import SketchSystem, distance_profile, enroll

CODE = LinearCode.from_h(H1)  # generator rows 1110, 1101


class TestCommit:
    def test_worked_example(self):
        template = commit(CODE, "1011", "10")
        assert list(template.bound) == [0, 1, 0, 1]

    def test_zero_message_stores_biometric(self):
        template = commit(CODE, "1011", "00")
        assert list(template.bound) == [1, 0, 1, 1]

    def test_codeword_biometric_self_cancels(self):
        a = CODE.encode("10")
        assert not np.any(commit(CODE, a, "10").bound)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            commit(CODE, "10110", "10")


class TestOpen:
    def test_noiseless_recovery(self):
        template = commit(CODE, "1011", "10")
        result = open_commitment(CODE, template, "1011", tau=0.0)
        assert result.accepted
        assert list(result.message) == [1, 0]

    def test_tied_decode_rejects(self):
        # weight-1 error landing midway between two codewords (d_min = 2)
        template = commit(CODE, "1011", "10")
        probe = bits("1011") ^ bits("0010")
        result = open_commitment(CODE, template, probe, tau=0.25)
        assert result.tied and not result.accepted

    def test_random_probe_acceptance_matches_sketch_far(self):
        # exhaust all 16 probes and compare against the sketch region
        tau = 0.0
        template = commit(CODE, "1011", "10")
        accepted = sum(
            open_commitment(CODE, template, unpack(d, 4), tau).accepted
            for d in range(16)
        )
        system = SketchSystem(code=CODE, tau=tau)
        profile = distance_profile(system, enroll(system, "1011"))
        far = metrics.far_exact(metrics.accept_mask(profile, 4, tau))
        assert accepted / 16 == far


class TestStorage:
    def test_commitment_vs_sketch(self):
        template = commit(CODE, "1011", "10")
        assert storage_bits(template) == 4
        sk = enroll(SketchSystem(code=CODE, tau=0.0), "1011")
        assert metrics.storage_bits(sk) == 2

    def test_trivial_code(self):
        trivial = LinearCode.from_h(np.zeros((0, 3), dtype=np.uint8))
        assert storage_bits(commit(trivial, "101", "101")) == 3

    def test_full_rank_code_stores_biometric(self):
        full = LinearCode.from_h(np.eye(3, dtype=np.uint8))
        template = commit(full, "101", bits("", 0))
        assert storage_bits(template) == 3
        assert list(template.bound) == [1, 0, 1]


class TestEquivalenceWithSketch:
    @pytest.mark.parametrize("n,m,seed", [(4, 2, 0), (6, 3, 1), (8, 3, 2)])
    def test_acceptance_sets_match_below_unique_radius(self, n, m, seed):
        code = LinearCode.from_h(H1) if (n, m) == (4, 2) else \
            random_code(n, m, seed)
        words = code.codewords()
        d_min = min(int(np.count_nonzero(w)) for w in words if np.any(w))
        tau = (d_min - 1) / (2 * n)  # strictly inside the unique radius
        system = SketchSystem(code=code, tau=tau)
        for a_int in range(1 << n):
            a = unpack(a_int, n)
            sk_profile = distance_profile(system, enroll(system, a))
            sk_mask = metrics.accept_mask(sk_profile, n, tau)
            cm_dist, cm_tie = decision_profile(code, commit(code, a, np.zeros(code.k, dtype=np.uint8)))
            cm_mask = metrics.accept_mask(cm_dist, n, tau, cm_tie)
            assert np.array_equal(sk_mask, cm_mask)

    def test_profile_independent_of_bound_message(self):
        for z_int in range(4):
            dist, tie = decision_profile(CODE, commit(CODE, "1011",
                                                      unpack(z_int, 2)))
            base_dist, base_tie = decision_profile(
                CODE, commit(CODE, "1011", "00"))
            assert np.array_equal(dist, base_dist)
            assert np.array_equal(tie, base_tie)

    def test_beyond_unique_radius_only_ties_differ(self):
        tau = 0.25  # radius 1 = d_min/2 for the worked code: ties possible
        system = SketchSystem(code=CODE, tau=tau)
        for a_int in range(16):
            a = unpack(a_int, 4)
            sk_mask = metrics.accept_mask(
                distance_profile(system, enroll(system, a)), 4, tau)
            cm_dist, cm_tie = decision_profile(CODE, commit(CODE, a, "00"))
            cm_mask = metrics.accept_mask(cm_dist, 4, tau, cm_tie)
            diff = np.nonzero(sk_mask != cm_mask)[0]
            assert np.all(cm_tie[diff])


class TestSecrecy:
    @pytest.mark.parametrize("n,m", [(4, 2), (6, 3)])
    def test_message_hidden_by_uniform_biometric(self, n, m):
        code = LinearCode.from_h(H1) if (n, m) == (4, 2) else \
            random_code(n, m, seed=3)
        assert metrics.mutual_information_bits(
            metrics.commit_secret_joint(code)) == pytest.approx(0.0, abs=1e-9)

    @pytest.mark.parametrize("n,m", [(4, 2), (6, 3)])
    def test_biometric_leakage_equals_m(self, n, m):
        code = LinearCode.from_h(H1) if (n, m) == (4, 2) else \
            random_code(n, m, seed=3)
        assert metrics.mutual_information_bits(
            metrics.commit_joint(code)) == pytest.approx(m, abs=1e-9)


def test_template_json_roundtrip():
    template = commit(CODE, "1011", "10")
    assert list(CommitTemplate.from_json(template.to_json()).bound) == [0, 1, 0, 1]


def test_sample_message_deterministic():
    z1 = sample_message(CODE, seed=5)
    z2 = sample_message(CODE, seed=5)
    assert z1.tolist() == z2.tolist()
    assert len(z1) == CODE.k
