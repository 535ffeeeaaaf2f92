import pytest

from conftest import divisors, primes_for_width
from qmul import oracle
from qmul.ir import CircuitError, count_resources
from qmul.multipliers import (
    ModPParams,
    MultiplierKind,
    build_mod2n,
    build_mod2n_accumulator,
    build_modmultstep,
    build_modp,
    build_modp_step_accumulator,
    build_multiplier,
    build_schoolbook,
    build_schoolbook_accumulator,
    input_bound,
    multiplier_oracle,
    uncompute_garbage,
)
from qmul.simulate import run, run_batch, verify_exhaustive


class TestSchoolbook:
    def test_product_both_variants(self):
        for variant in ("classic", "addsub"):
            c = build_schoolbook(4, variant)
            out = run(c, {"x": 13, "y": 11})
            assert out["result"] == 143
            assert out["x"] == 13 and out["y"] == 11

    def test_counts_at_n4(self):
        assert count_resources(build_schoolbook(4, "classic")).counted_toffoli == 36
        assert count_resources(build_schoolbook(4, "addsub")).counted_toffoli == 35

    def test_cascade_intermediate_small_example(self):
        # n=2, x=1, y=2: contributions 2 and 8-4 give 6
        out = run(build_schoolbook_accumulator(2), {"x": 1, "y": 2})
        assert out["acc"] == 6

    def test_cascade_intermediate_identity_exhaustive(self):
        for n in (1, 2, 3, 4):
            c = build_schoolbook_accumulator(n)
            xs, ys, want = [], [], []
            for x in range(2 ** n):
                for y in range(2 ** n):
                    xs.append(x)
                    ys.append(y)
                    want.append(2 * x * y + 4 ** n - 2 ** n * (x + 1 + y) + y)
            out = run_batch(c, {"x": xs, "y": ys})
            assert out["acc"] == want

    def test_nonzero_result_register_rejected(self):
        c = build_schoolbook(3, "addsub")
        with pytest.raises(Exception):
            run(c, {"x": 1, "y": 1, "result": 5})


class TestMod2n:
    def test_product(self):
        for variant in ("classic", "addsub"):
            assert run(build_mod2n(4, variant),
                       {"x": 13, "y": 11})["result"] == 15

    def test_counts_at_n4(self):
        assert count_resources(build_mod2n(4, "classic")).counted_toffoli == 16
        assert count_resources(build_mod2n(4, "addsub")).counted_toffoli == 14

    def test_quarter_reduction_at_n6(self):
        classic = count_resources(build_mod2n(6, "classic")).counted_toffoli
        addsub = count_resources(build_mod2n(6, "addsub")).counted_toffoli
        assert (classic, addsub) == (36, 27)

    def test_cascade_intermediate_identity_exhaustive(self):
        for n in (1, 2, 3, 4):
            c = build_mod2n_accumulator(n)
            for x in range(2 ** n):
                for y in range(2 ** n):
                    out = run(c, {"x": x, "y": y})
                    want = (2 * x * y - 2 ** n * (x + 1 + y) + y) % 2 ** (n + 1)
                    assert out["acc"] == want


class TestModMultStep:
    PARAMS = ModPParams(13, 4, 2)

    def test_zero_window_on_zero_accumulator(self):
        for variant in ("classic", "addsub"):
            c = build_modmultstep(self.PARAMS, 0, variant)
            out = run(c, {"z": 0, "x_window": 0, "y": 9})
            assert out["result"] == 0
            assert out["garbage"] == 0

    def test_accumulation_before_reduction(self):
        out = run(build_modp_step_accumulator(self.PARAMS, 0, "classic"),
                  {"z": 5, "x_window": 3, "y": 7})
        assert out["acc"] == 5 + 3 * 7
        out = run(build_modp_step_accumulator(self.PARAMS, 0, "addsub"),
                  {"z": 5, "x_window": 3, "y": 7})
        assert out["acc"] == 2 * (5 + 3 * 7)

    def test_post_step_value_via_reduction_oracle(self):
        # m = (-26 * 13^-1) mod 4 = 2, so the step yields (26 + 26)/4 = 13
        ctx = oracle.MontgomeryContext(13, 4)
        want = oracle.montgomery_step(ctx, 26, 2)
        assert want == 13
        for variant in ("classic", "addsub"):
            out = run(build_modmultstep(self.PARAMS, 0, variant),
                      {"z": 5, "x_window": 3, "y": 7})
            assert out["result"] == want
            assert out["garbage"] == 26 % 4

    def test_step_matches_oracle_across_inputs(self):
        ctx = oracle.MontgomeryContext(13, 4)
        for variant in ("classic", "addsub"):
            c = build_modmultstep(self.PARAMS, 0, variant)
            for z in range(0, 26):
                for xw in range(4):
                    for y in range(13):
                        u = z + xw * y
                        out = run(c, {"z": z, "x_window": xw, "y": y})
                        assert out["result"] == oracle.montgomery_step(ctx, u, 2)

    def test_step_index_bounds(self):
        with pytest.raises(CircuitError):
            build_modmultstep(self.PARAMS, 5, "classic")


class TestModP:
    def test_montgomery_product_example(self):
        c = build_modp(ModPParams(13, 4, 2), "addsub")
        out = run(c, {"x": 3, "y": 5})
        assert out["result"] == 5  # 3*5*16^-1 mod 13
        assert out["x"] == 3 and out["y"] == 5

    def test_zero_factor(self):
        c = build_modp(ModPParams(13, 4, 2), "classic")
        for x in range(13):
            assert run(c, {"x": x, "y": 0})["result"] == 0

    def test_smallest_width(self):
        # n = 2 admits the single prime 3
        for w in (1, 2):
            for variant in ("classic", "addsub"):
                report = verify_exhaustive(f"modp-{variant}", 2, p=3, w=w)
                assert report.cases_run == 9
                assert report.passed

    def test_truncated_final_window(self):
        # w does not divide n: the last step consumes the leftover bits
        for (p, n, w) in ((19, 5, 2), (19, 5, 3), (19, 5, 4), (61, 6, 4)):
            ctx = oracle.MontgomeryContext(p, n)
            c = build_modp(ModPParams(p, n, w), "addsub")
            for x in range(0, p, 3):
                for y in range(0, p, 4):
                    want = oracle.montgomery_product(ctx, x, y)
                    assert run(c, {"x": x, "y": y})["result"] == want

    def test_garbage_width_is_window_bits_plus_flag(self):
        for (n, w) in ((4, 2), (5, 2), (6, 4)):
            p = primes_for_width(n)[0]
            c = build_modp(ModPParams(p, n, w), "classic")
            # one garbage qubit per consumed x bit, plus the final
            # comparison flag that cannot be uncomputed locally
            assert c.register("garbage").width == n + 1

    def test_parameter_validation(self):
        with pytest.raises(CircuitError):
            ModPParams(12, 4, 2)       # even modulus
        with pytest.raises(CircuitError):
            ModPParams(13, 4, 5)       # w > n
        with pytest.raises(CircuitError):
            ModPParams(7, 4, 2)        # p below 2^(n-1)
        with pytest.raises(CircuitError):
            ModPParams.create(15, 4, 2, strict=True)  # composite, strict

    def test_composite_modulus_warns_but_works(self):
        with pytest.warns(UserWarning):
            params = ModPParams.create(15, 4, 2)
        ctx = oracle.MontgomeryContext(15, 4)
        c = build_modp(params, "addsub")
        for x in range(0, 15, 2):
            for y in range(0, 15, 3):
                want = oracle.montgomery_product(ctx, x, y)
                assert run(c, {"x": x, "y": y})["result"] == want


class TestModPLedger:
    def test_per_step_quoted_charges(self):
        n, w = 8, 2
        params = ModPParams(251, n, w)
        for variant, cascade in (("classic", 2 * w * (n + 1)),
                                 ("addsub", w * (n + 1))):
            ledger = dict(count_resources(
                build_modp(params, variant)).block_ledger)
            for k in range(n // w):
                assert ledger[f"step[{k}]/cascade"] == cascade
                assert ledger[f"step[{k}]/lookup"] == 2 ** w
                assert ledger[f"step[{k}]/adder"] == n + w - 1
                assert ledger[f"step[{k}]/unlookup"] == pytest.approx(
                    3 * 2 ** (w / 2), abs=1e-9)
                if variant == "addsub":
                    assert ledger[f"step[{k}]/correction[0]"] == w - 1
                    assert ledger[f"step[{k}]/correction[1]"] == n + w
                    assert ledger[f"step[{k}]/correction[2]"] == n - 1
            assert ledger["reduction[0]"] == n
            assert ledger["reduction[1]"] == n

    def test_cascade_gate_counts(self):
        # classic cascade gates match the 2w(n+1) charge exactly; the
        # add-subtract cascade counts w(n+2) because the modulus headroom
        # bit widens each window by one (declared charge stays w(n+1))
        n, w = 6, 3
        params = ModPParams(37, n, w)
        for variant, per_step in (("classic", 2 * w * (n + 1)),
                                  ("addsub", w * (n + 2))):
            circuit = build_modp(params, variant)
            labels = circuit.gate_labels()
            counted = sum(
                g.counted_toffoli for g, lab in zip(circuit.gates, labels)
                if lab == "step[0]/cascade")
            assert counted == per_step


class TestUncomputeGarbage:
    PARAMS = ModPParams(13, 4, 2)

    def test_copy_and_clean(self):
        ctx = oracle.MontgomeryContext(13, 4)
        for variant in ("classic", "addsub"):
            c = uncompute_garbage(self.PARAMS, variant)
            out = run(c, {"x": 3, "y": 5})
            assert out["copy"] == oracle.montgomery_product(ctx, 3, 5)
            assert out["result"] == 0
            assert out["garbage"] == 0

    def test_zero_inputs(self):
        c = uncompute_garbage(self.PARAMS, "addsub")
        out = run(c, {"x": 0, "y": 0})
        assert out == {"x": 0, "y": 0, "result": 0, "garbage": 0, "copy": 0}

    def test_cost_doubles(self):
        for variant in ("classic", "addsub"):
            inner = count_resources(build_modp(self.PARAMS, variant))
            outer = count_resources(uncompute_garbage(self.PARAMS, variant))
            assert outer.counted_toffoli == 2 * inner.counted_toffoli
            assert outer.nominal_toffoli == pytest.approx(
                2 * inner.nominal_toffoli)


class TestCountExactness:
    FORMULAS = {
        MultiplierKind.SCHOOLBOOK_CLASSIC: lambda n: 2 * n * n + n,
        MultiplierKind.SCHOOLBOOK_ADDSUB: lambda n: n * n + 4 * n + 3,
        MultiplierKind.MOD2N_CLASSIC: lambda n: n * n,
        MultiplierKind.MOD2N_ADDSUB: lambda n: (n * n + 3 * n) // 2,
    }

    @pytest.mark.parametrize("kind", list(FORMULAS))
    def test_counted_equals_formula_sampled(self, kind):
        formula = self.FORMULAS[kind]
        for n in (2, 3, 5, 8, 13, 21, 34):
            rep = count_resources(build_multiplier(kind, n))
            assert rep.counted_toffoli == formula(n)
            assert rep.nominal_toffoli == formula(n)


class TestDifferential:
    @pytest.mark.parametrize("kind", [k for k in MultiplierKind
                                      if not k.is_modp])
    def test_exhaustive_small(self, kind):
        for n in (2, 3, 4):
            assert verify_exhaustive(kind.slug, n).passed

    def test_modp_exhaustive_one_config(self):
        report = verify_exhaustive("modp-addsub", 4, p=13, w=2)
        assert report.cases_run == 169
        assert report.passed

    def test_register_preservation_in_oracle_contract(self):
        # the verify oracle pins x and y outputs, so any clobbering of the
        # input registers counts as a mismatch; spot-check here directly
        for kind in MultiplierKind:
            p = 13 if kind.is_modp else None
            c = build_multiplier(kind, 4, p=p, w=2 if kind.is_modp else None)
            bound = input_bound(kind, 4, p)
            out = run(c, {"x": bound - 1, "y": bound - 2})
            assert out["x"] == bound - 1
            assert out["y"] == bound - 2
            assert out["result"] == multiplier_oracle(
                kind, 4, bound - 1, bound - 2, p=p)


class TestIrregularWidths:
    def test_plain_kinds_at_odd_widths(self):
        import random
        rng = random.Random(5)
        for kind in (K for K in MultiplierKind if not K.is_modp):
            for n in (7, 9, 12):
                c = build_multiplier(kind, n)
                xs = [rng.randrange(2 ** n) for _ in range(200)]
                ys = [rng.randrange(2 ** n) for _ in range(200)]
                out = run_batch(c, {"x": xs, "y": ys})
                for x, y, r in zip(xs, ys, out["result"]):
                    assert r == multiplier_oracle(kind, n, x, y)

    def test_modp_at_awkward_window_splits(self):
        import random
        rng = random.Random(6)
        for (n, w) in ((7, 2), (7, 3), (7, 5), (9, 4), (12, 5)):
            p = primes_for_width(n)[-1]
            ctx = oracle.MontgomeryContext(p, n)
            for variant in ("classic", "addsub"):
                c = build_modp(ModPParams(p, n, w), variant)
                xs = [rng.randrange(p) for _ in range(150)]
                ys = [rng.randrange(p) for _ in range(150)]
                out = run_batch(c, {"x": xs, "y": ys})
                for x, y, r in zip(xs, ys, out["result"]):
                    assert r == oracle.montgomery_product(ctx, x, y)


def test_kind_slugs_round_trip():
    for kind in MultiplierKind:
        assert MultiplierKind.from_slug(kind.slug) is kind
    with pytest.raises(ValueError):
        MultiplierKind.from_slug("karatsuba")
    assert MultiplierKind.MODP_ADDSUB.classic_counterpart() is \
        MultiplierKind.MODP_CLASSIC


def test_window_sizes_cover_all_x_bits():
    for n in (4, 5, 6, 7):
        for w in range(1, n + 1):
            p = primes_for_width(n)[-1]
            sizes = ModPParams(p, n, w).window_sizes()
            assert sum(sizes) == n
            assert all(1 <= s <= w for s in sizes)
            assert divisors(n)  # sanity on the helper
