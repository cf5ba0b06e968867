from zonalscheme import cache, symfunc
from zonalscheme.symfunc import alpha_kostka_matrix, clear_memo, zonal_character_table


def test_encode_decode_round_trip():
    m = zonal_character_table(5)
    blob = cache.encode(("zonal", 5), m)
    assert blob.startswith(b"ZSCACHE v1 key=zonal-5 sha256=")
    assert cache.decode(("zonal", 5), blob) == m
    assert cache.decode(("zonal", 6), blob) is None


def test_corruption_is_rejected():
    m = zonal_character_table(4)
    blob = bytearray(cache.encode(("zonal", 4), m))
    blob[-3] ^= 0xFF
    assert cache.decode(("zonal", 4), bytes(blob)) is None
    assert cache.decode(("zonal", 4), b"garbage") is None
    assert cache.decode(("zonal", 4), b"ZSCACHE v0 key=zonal-4 sha256=00\nxx") is None


def test_disk_cache_recomputes_corrupt_entries(tmp_path):
    store = cache.DiskCache(tmp_path)
    clear_memo()
    cache.install(store)
    try:
        first = alpha_kostka_matrix(6, 2)
        path = store.path(("alpha-kostka", 6, symfunc._frac(2)))
        assert path.exists()
        path.write_bytes(path.read_bytes()[:-10])
        clear_memo()
        again = alpha_kostka_matrix(6, 2)
        assert again == first
        assert cache.decode(("alpha-kostka", 6, symfunc._frac(2)), path.read_bytes()) == first
        clear_memo()
        hits = store.hits
        alpha_kostka_matrix(6, 2)
        assert store.hits == hits + 1
    finally:
        cache.install(None)
        clear_memo()


def test_unwritable_cache_is_harmless(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    store = cache.DiskCache(blocker / "sub")
    clear_memo()
    cache.install(store)
    try:
        assert zonal_character_table(3) is not None
    finally:
        cache.install(None)
        clear_memo()
