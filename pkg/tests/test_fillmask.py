import json
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer

import pytest

from pertcheck.exceptions import ConfigError, NoCandidates, RemoteUnavailable
from pertcheck.fillmask import (
    MASK, FileProvider, LexiconProvider, MaskedQuery, RemoteProvider, fill, make_provider,
)


def test_query_text():
    q = MaskedQuery("The", "was good.", 1, {"Food"})
    assert q.text == f"The {MASK} was good."
    assert q.forbidden == {"food"}
    with pytest.raises(ValueError):
        MaskedQuery("a", "b", 0)


def test_lexicon_provider_word(lexicon):
    q = MaskedQuery("The", "were very successful.", 1, {"experiments"})
    res = fill(q, LexiconProvider(lexicon))
    cands = res.fills[0]
    assert res.provider_id == "lexicon"
    assert "experiments" not in cands and 1 <= len(cands) <= 10
    assert all(c.endswith("s") for c in cands)  # plural kept


def test_lexicon_provider_wh(lexicon):
    p = LexiconProvider(lexicon)
    who = p.fill(MaskedQuery("", "is the director of Titanic?", 1, {"who"})).fills[0]
    assert all(lexicon.gazetteer[n] in "MF" for n in who)
    where = p.fill(MaskedQuery("", "is the tower?", 1, {"where"})).fills[0]
    assert all(c.startswith("in ") for c in where)


def test_lexicon_provider_needs_one_seed(lexicon):
    with pytest.raises(NoCandidates):
        LexiconProvider(lexicon).fill(MaskedQuery("a", "b", 1, set()))
    with pytest.raises(NoCandidates):
        LexiconProvider(lexicon).fill(MaskedQuery("a", "b", 1, {"zzqxj"}))


def test_file_provider(tmp_path):
    path = tmp_path / "fills.jsonl"
    path.write_text(json.dumps({"sample_id": "s1", "template_id": "T", "fills": [["x", "y"], ["z"]]}) + "\n")
    p = FileProvider(path)
    q = MaskedQuery("a", "b", 1, {"x"})
    assert p.fill(q, ("s1", "T", 0)).fills == (("y",),)
    assert p.fill(q, ("s1", "T", 1)).fills == (("z",),)
    with pytest.raises(NoCandidates):
        p.fill(q, ("s1", "T", 2))
    with pytest.raises(NoCandidates):
        p.fill(q, ("s2", "T", 0))
    with pytest.raises(ConfigError):
        FileProvider(tmp_path / "missing.jsonl")


class _Handler(BaseHTTPRequestHandler):
    calls = []

    def do_POST(self):
        body = json.loads(self.rfile.read(int(self.headers["Content-Length"])))
        self.calls.append(body)
        data = json.dumps({"candidates": [["great", "fine", "good"]]}).encode()
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def log_message(self, *args):
        pass


@pytest.fixture
def server():
    httpd = HTTPServer(("127.0.0.1", 0), _Handler)
    t = threading.Thread(target=httpd.serve_forever, daemon=True)
    t.start()
    yield f"http://127.0.0.1:{httpd.server_port}"
    httpd.shutdown()
    httpd.server_close()


def test_remote_provider_protocol(server):
    _Handler.calls.clear()
    p = RemoteProvider(server, top_k=3)
    res = p.fill(MaskedQuery("It was", ".", 1, {"good"}))
    assert res.fills == (("great", "fine"),)
    assert _Handler.calls == [{"text": "It was <mask> .", "top_k": 3}]


def test_remote_provider_unreachable():
    p = RemoteProvider("http://127.0.0.1:9", timeout=0.2, retries=2, backoff=0.0)
    with pytest.raises(RemoteUnavailable):
        p.fill(MaskedQuery("a", "b", 1, {"c"}))


@pytest.mark.parametrize("url", ["", "ftp://x", "localhost:8000", "http://"])
def test_remote_provider_rejects_bad_url(url):
    with pytest.raises(ConfigError):
        RemoteProvider(url)


def test_make_provider(lexicon, tmp_path):
    assert isinstance(make_provider("lexicon", {"lexicon": lexicon}), LexiconProvider)
    with pytest.raises(ConfigError):
        make_provider("file", {})
    with pytest.raises(ConfigError):
        make_provider("oracle")
