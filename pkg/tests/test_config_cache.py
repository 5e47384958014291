import pytest

from tlfusion import ConfigError
from tlfusion.cache import RecordCache, cache_key
from tlfusion.config import load_config


def test_defaults():
    cfg = load_config(None)
    assert cfg.backend == "modp" and cfg.format == "json"


def test_file_and_overrides(tmp_path):
    path = tmp_path / "c.ini"
    path.write_text("[field]\nbackend = exact\nseed = 4\n\n[params]\nz1 = 2\nz2 = -q*z1\n\n[run]\nradius = 9\n")
    cfg = load_config(str(path), {"seed": 7, "backend": None})
    assert (cfg.backend, cfg.seed, cfg.radius) == ("exact", 7, 9)
    f = cfg.field()
    assert f.z("z2") == -f.q * f.scalar(2)


@pytest.mark.parametrize("text,line", [("[field]\nbackend = nope\n", 2), ("[run]\n\nformat = xml\n", 3),
                                       ("[mystery]\nkey = 1\n", 2)])
def test_errors_carry_line_numbers(tmp_path, text, line):
    path = tmp_path / "c.ini"
    path.write_text(text)
    with pytest.raises(ConfigError, match=f"c.ini:{line}"):
        load_config(str(path))


def test_syntax_error(tmp_path):
    path = tmp_path / "c.ini"
    path.write_text("[field]\nbackend modp\n")
    with pytest.raises(ConfigError, match="line +2"):
        load_config(str(path))


def test_cache_key_is_content_addressed():
    a = cache_key("fuse", {"n1": 1, "j1": "1/2"}, {"backend": "modp", "seed": 0})
    b = cache_key("fuse", {"j1": "1/2", "n1": 1}, {"seed": 0, "backend": "modp"})
    c = cache_key("fuse", {"n1": 1, "j1": "1/2"}, {"backend": "modp", "seed": 1})
    assert a == b != c


def test_record_cache(tmp_path):
    cache = RecordCache(str(tmp_path))
    calls = []

    def compute():
        calls.append(1)
        return [{"x": 1}]
    assert cache.fetch("ab" * 32, compute) == ([{"x": 1}], False)
    assert cache.fetch("ab" * 32, compute) == ([{"x": 1}], True)
    assert len(calls) == 1
    assert RecordCache(None).fetch("k", compute) == ([{"x": 1}], False)
