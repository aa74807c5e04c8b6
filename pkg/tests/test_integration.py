"""Cross-module scenarios: cyclotomic weights through every engine, and
pipelines where pruning genuinely rewrites supports."""

from eoexact.classify import (
    AffineCertificate,
    ProductCertificate,
    dichotomy_verdict,
    membership_affine,
    membership_product,
)
from eoexact.grids import Grid, brute_force_partition
from eoexact.signatures import from_entries, gen_diseq, pin_signature
from eoexact.tractable import (
    eval_affine,
    eval_fpnp,
    eval_product,
    interpolate_delta,
    prune_effective,
)
from eoexact.values import ExactValue, I, ONE

V = ExactValue.rational
Z = ExactValue.zeta


def test_affine_engine_with_cyclotomic_scale():
    # class membership constrains value ratios, not the overall scale; a
    # third root of unity and i need a common ambient field, so the session
    # order is 12 (zeta_12^4 is the third root, zeta_12^3 is i)
    lam = Z(12, 4)
    f = from_entries(2, {"01": lam, "10": lam * I})
    assert isinstance(membership_affine(f), AffineCertificate)
    g = Grid.make([("v", f)], [((0, 0), (0, 1))])
    want = brute_force_partition(g)
    assert eval_affine(g) == want
    assert want == lam * (ONE + I)


def test_product_engine_with_cyclotomic_weights():
    f = gen_diseq("0101", Z(5, 1), Z(5, 4))
    g = Grid.make([("v", f)], [((0, 0), (0, 1)), ((0, 2), (0, 3))])
    want = brute_force_partition(g)
    assert eval_product(g) == want
    assert want == Z(5, 1) + Z(5, 4)


def test_interpolation_with_cyclotomic_base():
    f = gen_diseq("0101", 1, 1)
    grid = Grid.make([("f", f), ("d", pin_signature())],
                     [((1, 1), (0, 0)), ((1, 0), (0, 1)), ((0, 2), (0, 3))])
    x = V(2) * Z(8, 1)  # modulus 2: provably off the unit circle
    assert interpolate_delta(grid, x) == brute_force_partition(grid)


def test_pipeline_where_pruning_rewrites_supports():
    f = from_entries(4, {"1100": 1, "1010": 1, "1001": 2}, "mform")
    grid = Grid.make(
        [("a", f), ("b", f)],
        [((0, 0), (1, 1)), ((0, 1), (1, 0)), ((0, 2), (1, 2)), ((0, 3), (1, 3))])
    pruned = prune_effective(grid)
    assert set(pruned.signature_of(0).support_strings()) == {"1010", "1001"}
    assert set(pruned.signature_of(1).support_strings()) == {"1010", "1001"}
    # the pruned occurrences are product-class outright even though the
    # original support is not
    assert isinstance(membership_product(pruned.signature_of(0)), ProductCertificate)
    assert brute_force_partition(grid) == V(4)
    assert eval_fpnp(grid, "product") == V(4)


def test_classify_with_cyclotomic_values():
    f = gen_diseq("0101", 1, Z(8, 1))
    v = dichotomy_verdict([f])
    assert v.tractable
    assert "product" in v.classes
    assert "affine" not in v.classes  # zeta_8 ratio is not a power of i
