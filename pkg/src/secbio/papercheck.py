"""Regression suite of exact, externally anchored values: the worked
three-system example, the leakage identities, the distortion counterexample,
and the homomorphic distance identity.  Every check is a finite exact
computation with zero tolerance."""

from __future__ import annotations

import numpy as np

from . import commit as commit_mod
from . import metrics, multisys, paillier, presets, sketch, smc
from .gf2 import LinearCode, bits, enumerate_coset


def _coset_set(code: LinearCode, syndrome) -> set[str]:
    return {"".join(map(str, row)) for row in enumerate_coset(code, syndrome)}


def build_checks(h1=None):
    """Named zero-tolerance checks.  h1 optionally overrides the first
    parity-check matrix (used for fault injection in tests)."""
    code1 = LinearCode.from_h(presets.H1 if h1 is None else h1)
    code2 = LinearCode.from_h(presets.H2)
    code3 = LinearCode.from_h(presets.H3)
    a = presets.ENROLLMENT
    deployment = presets.sidebar_deployment(h1)

    checks = []

    def check(name):
        def register(fn):
            checks.append((name, fn))
            return fn
        return register

    @check("sidebarB.syndrome")
    def _():
        return list(code1.syndrome(a)) == [1, 0]

    @check("sidebarB.syndrome2")
    def _():
        return list(code2.syndrome(a)) == [1, 1]

    @check("sidebarB.syndrome3")
    def _():
        return list(code3.syndrome(a)) == [0, 0]

    @check("sidebarB.codewords")
    def _():
        return _coset_set(code1, [0, 0]) == {"0000", "1110", "1101", "0011"}

    @check("sidebarB.coset")
    def _():
        return _coset_set(code1, [1, 0]) == {"1011", "0101", "0110", "1000"}

    @check("sidebarB.coset2")
    def _():
        return _coset_set(code2, [1, 1]) == {"1011", "0110", "1100", "0001"}

    @check("sidebarB.coset3")
    def _():
        return _coset_set(code3, [0, 0]) == {"0000", "1100", "1011", "0111"}

    @check("sidebarB.intersections")
    def _():
        sizes = [len(multisys.intersect_candidates(deployment, [0, i]))
                 for i in (0, 1, 2)]
        return sizes == [4, 2, 1]

    @check("sidebarB.cross_sar")
    def _():
        sars = [multisys.cross_sar(deployment, 0, t) for t in (0, 1, 2)]
        return sars == [1.0, 0.5, 0.25]

    @check("sidebarB.leakage_steps")
    def _():
        return multisys.cumulative_leakage(deployment, [0, 1, 2])[:2] == [2.0, 3.0] \
            and multisys.cumulative_leakage(deployment, [0, 2]) == [2.0, 4.0]

    @check("sidebarB.far")
    def _():
        system = sketch.SketchSystem(code=code3, tau=0.0)
        template = sketch.enroll(system, a)
        profile = sketch.distance_profile(system, template)
        return metrics.far_exact(metrics.accept_mask(profile, 4, 0.0)) == 0.25

    @check("sketch.leakage_equals_m")
    def _():
        return metrics.mutual_information_bits(metrics.sketch_joint(code1)) \
            == code1.m

    @check("sketch.sar_one_given_s")
    def _():
        system = sketch.SketchSystem(code=code1, tau=0.0)
        template = sketch.enroll(system, a)
        profile = sketch.distance_profile(system, template)
        mask = metrics.accept_mask(profile, 4, 0.0)
        members = enumerate_coset(code1, template.syndrome)
        return metrics.sar_exact(mask, metrics.coset_strategy(members)) == 1.0

    @check("sketch.sar_defaults_to_far")
    def _():
        system = sketch.SketchSystem(code=code1, tau=0.0)
        template = sketch.enroll(system, a)
        profile = sketch.distance_profile(system, template)
        mask = metrics.accept_mask(profile, 4, 0.0)
        return metrics.sar_exact(mask, metrics.uniform_strategy(4)) \
            == metrics.far_exact(mask)

    @check("twofactor.leakage_zero")
    def _():
        return metrics.mutual_information_bits(
            metrics.two_factor_sketch_joint(code1)) == 0.0

    @check("negation.leakage")
    def _():
        return metrics.mutual_information_bits(metrics.negation_joint(4)) == 3.0

    @check("negation.distortion")
    def _():
        return metrics.reconstruction_distortion(metrics.negation_joint(4), 4) \
            == 0.5

    @check("commit.storage")
    def _():
        z = bits("10")
        template = commit_mod.commit(code1, a, z)
        sk_template = sketch.enroll(sketch.SketchSystem(code=code1, tau=0.0), a)
        return (metrics.storage_bits(template) == 4
                and metrics.storage_bits(sk_template) == 2)

    @check("smc.homomorphic_add")
    def _():
        kp = paillier.from_primes(5, 7)
        c = paillier.add(kp.public, paillier.encrypt(kp.public, 3),
                         paillier.encrypt(kp.public, 4))
        return paillier.decrypt(kp, c) == 7

    @check("smc.distance_identity")
    def _():
        kp = paillier.from_primes(251, 257)
        template = smc.enroll_template(kp.public, bits("1011"))
        c = smc.encrypted_distance(template, bits("1101"))
        d_plain = int(np.count_nonzero(bits("1011") ^ bits("1101")))
        return paillier.decrypt(kp, c) == d_plain

    return checks


def run_paper_checks(h1=None):
    """Run every check; returns [(name, passed)] in registration order."""
    results = []
    for name, fn in build_checks(h1):
        try:
            passed = bool(fn())
        except Exception:
            passed = False
        results.append((name, passed))
    return results
