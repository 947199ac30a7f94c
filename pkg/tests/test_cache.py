from aluffi import GroebnerStore, Ideal, Verdict, atf_exact, polynomial_ring, using_store
from aluffi.blowup import clear_caches
from aluffi.cache import active_store, basis_key
from aluffi.families import monomial_curve

R, x, y, z = polynomial_ring("x y z")


def test_round_trip(tmp_path):
    store = GroebnerStore(tmp_path)
    gens = [x * z - y ** 2, x ** 3 - y * z]
    with using_store(store):
        first = Ideal(R, gens).groebner_basis()
        second = Ideal(R, gens).groebner_basis()
    assert first == second
    assert (store.hits, store.misses) == (1, 1)
    assert not list(tmp_path.glob("*.tmp"))
    assert active_store() is None


def test_rational_and_modular_coefficients_survive(tmp_path):
    F, a, b = polynomial_ring("a b", characteristic=7)
    store = GroebnerStore(tmp_path)
    cases = [(R, [R.parse("1/3*x - y"), R.parse("y^2 - 2/5*z")]), (F, [3 * a - b, b ** 2 - 2])]
    for ring, gens in cases:
        with using_store(store):
            cold = Ideal(ring, gens).groebner_basis()
            warm = Ideal(ring, gens).groebner_basis()
        assert cold == warm
    assert store.hits == 2


def test_keys_separate_rings_and_orders():
    gens = [x - y]
    lex = R.with_order("lex")
    Q = R.with_quotient([x * y])
    keys = {basis_key(R, gens, R.order), basis_key(lex, [g.embed(lex) for g in gens], lex.order),
            basis_key(Q, [g.embed(Q) for g in gens], Q.order)}
    assert len(keys) == 3


def test_corrupt_entry_is_a_miss(tmp_path):
    store = GroebnerStore(tmp_path)
    key = basis_key(R, [x], R.order)
    (tmp_path / f"{key}.json").write_text("{not json")
    with using_store(store):
        assert Ideal(R, [x]).groebner_basis() == [x]
    assert store.misses == 1


def test_cache_never_changes_verdicts(tmp_path):
    J, I = monomial_curve(1, 1)
    clear_caches()
    plain = atf_exact(J, I).verdict
    store = GroebnerStore(tmp_path)
    verdicts = []
    for _ in range(2):
        clear_caches()
        with using_store(store):
            verdicts.append(atf_exact(*monomial_curve(1, 1)).verdict)
    assert plain is verdicts[0] is verdicts[1] is Verdict.TRUE
    assert store.hits > 0
