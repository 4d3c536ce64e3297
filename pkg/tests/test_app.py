import io
import json

import pytest

from tame_eisenstein.app import (
    EigenvalueCache,
    FetchError,
    RunConfig,
    fetch_eigenvalues,
    main,
    run,
    x0_11_oracle_record,
)


def test_xi_command():
    report, code = run(["xi", "--k", "14", "--p", "5", "--N", "11"])
    assert code == 0 and report["schema_version"] == 1
    assert report["xi_prime_unit"] == {"value": True, "source": "computed"}
    assert report["gamma"]["value"] == 2


def test_weight_two_override_shows_merel_equivalence():
    report, code = run(["xi", "--k", "2", "--p", "5", "--N", "11", "--allow-weight-two"])
    assert code == 0 and report["merel_equivalence"]["value"]


def test_inadmissible_triple_is_a_structured_error(capsys):
    code = main(["xi", "--k", "16", "--p", "5", "--N", "11"])
    out = json.loads(capsys.readouterr().out)
    assert code == 2 and out["error"]["kind"] == "admissibility" and out["error"]["condition"]


def test_local_command(tmp_path):
    out = tmp_path / "local.json"
    report, code = run(["local", "--k", "10", "--p", "7", "--N", "29", "--out", str(out)])
    assert code == 0 and json.loads(out.read_text()) == report
    assert report["euler_characteristic"]["value"] == 0


def test_eis_verify_reports_the_sign_discrepancy():
    report, code = run(["eis-verify", "--k", "14", "--p", "5", "--N", "11", "--qprec", "80", "--primes", "2,3"])
    names = {r["name"]: r["passed"] for r in report["identities"]}
    assert names["X*E = X*E(1,<>) = X*E(<>,1)"] and names["E' Hecke relation"]
    assert not names["deformation Eisenstein eigenform"]
    assert code == 1


def test_hecke_demo():
    report, code = run(["hecke", "--k", "2", "--p", "5", "--N", "11"])
    assert code == 0
    assert report["index"]["agree"] and report["rank"]["value"] == 1
    assert all(r["mod25"]["value"] for r in report["x0_11"].values())


def _fake_response(payload):
    class Resp(io.BytesIO):
        def __enter__(self):
            return self

        def __exit__(self, *exc):
            return False

    return Resp(json.dumps(payload).encode())


def _lmfdb_payload():
    rec = x0_11_oracle_record(100)
    return {"data": [{"label": rec.label, "level": 11, "weight": 2, "dim": 1, "traces": rec.traces}]}


def test_fetch_caches_and_replays(tmp_path):
    calls = []

    def opener(url, timeout):
        calls.append(url)
        return _fake_response(_lmfdb_payload())

    config = RunConfig("fetch", cache_dir=str(tmp_path))
    first = fetch_eigenvalues(11, 2, config, opener=opener)
    snapshot = {p.name: p.read_bytes() for p in tmp_path.iterdir()}
    second = fetch_eigenvalues(11, 2, config, opener=opener)
    assert len(calls) == 1 and first == second
    assert first[0].a(2) == -2
    assert {p.name: p.read_bytes() for p in tmp_path.iterdir()} == snapshot
    offline = RunConfig("fetch", cache_dir=str(tmp_path), offline=True)
    assert fetch_eigenvalues(11, 2, offline)[0].traces == first[0].traces


def test_offline_cold_cache(tmp_path):
    with pytest.raises(FetchError) as err:
        fetch_eigenvalues(11, 2, RunConfig("fetch", cache_dir=str(tmp_path), offline=True))
    assert err.value.kind == "cache-miss"


def test_network_retries_then_fails(tmp_path):
    attempts = []

    def opener(url, timeout):
        attempts.append(url)
        raise OSError("unreachable")

    with pytest.raises(FetchError) as err:
        fetch_eigenvalues(11, 2, RunConfig("fetch", cache_dir=str(tmp_path)), opener=opener, backoff=0)
    assert err.value.kind == "network" and len(attempts) == 3


def test_schema_mismatch(tmp_path):
    def opener(url, timeout):
        return _fake_response({"rows": []})

    with pytest.raises(FetchError) as err:
        fetch_eigenvalues(11, 2, RunConfig("fetch", cache_dir=str(tmp_path)), opener=opener)
    assert err.value.kind == "schema"


def test_multiplicativity_is_checked(tmp_path):
    payload = _lmfdb_payload()
    payload["data"][0]["traces"][5] += 1  # a_6

    def opener(url, timeout):
        return _fake_response(payload)

    with pytest.raises(FetchError):
        fetch_eigenvalues(11, 2, RunConfig("fetch", cache_dir=str(tmp_path)), opener=opener)


def test_fetch_command_from_oracle_fixture(tmp_path):
    rec = x0_11_oracle_record(100)
    EigenvalueCache(tmp_path).store(11, 2, {"fixture": "eta-oracle"}, [rec])
    report, code = run(["fetch", "--N", "11", "--k", "2", "--offline", "--cache-dir", str(tmp_path)])
    assert code == 0 and report["eta_oracle_agrees"]["value"]
    assert report["records"][0]["source"] == "eta-oracle"
