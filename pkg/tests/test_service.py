from __future__ import annotations

import json
import os
import threading

import pytest
from fastapi.testclient import TestClient

from zkaccess import vault as vault_mod
from zkaccess.circuit import ADULT_THRESHOLD_DAYS
from zkaccess.errors import (
    InvalidDuration,
    NotFound,
    TransactionReverted,
    UnsatisfiedWitness,
)
from zkaccess.service import (
    LifecycleService,
    ServiceConfig,
    create_app,
    service_id_for,
)
from zkaccess.vault import date_to_days

OWNER = "0x" + "ab" * 20
CLOCK = 19_875 * 86_400  # 2024-06-01


def make_home(tmp_path, *, birth=(2000, 1, 1), backend="simulated",
              binding="bound", admin_endpoints=False) -> LifecycleService:
    home = str(tmp_path / "home")
    os.makedirs(home)
    with vault_mod.init_vault(os.path.join(home, "vault.json"), OWNER) as vlt:
        vlt.add_attribute("birthdate", date_to_days(*birth))
    config = ServiceConfig(
        backend=backend,
        admin=OWNER,
        predicates={"age18": {"threshold_days": ADULT_THRESHOLD_DAYS,
                              "binding": binding}},
        initial_clock=CLOCK,
        admin_endpoints=admin_endpoints,
    )
    svc = LifecycleService(home, config)
    svc.setup(seed=b"\x42" * 32)
    return svc


@pytest.fixture
def svc(tmp_path):
    return make_home(tmp_path)


# -- flows ----------------------------------------------------------------------

def test_flow_grant_active_one_day(svc):
    view = svc.flow_grant("tradebase", duration_s=86_400)
    assert view.state == "active"
    assert view.subject == OWNER
    assert view.expires_at == CLOCK + 86_400
    assert view.receipt["gas_used"] == 250_000


def test_flow_grant_underage_raises(tmp_path):
    svc = make_home(tmp_path, birth=(2010, 6, 1))
    with pytest.raises(UnsatisfiedWitness):
        svc.flow_grant("tradebase")
    assert svc.flow_status("tradebase").state == "none"


def test_flow_grant_zero_duration_rejected_before_proving(svc):
    with pytest.raises(InvalidDuration):
        svc.flow_grant("tradebase", duration_s=0)
    assert svc.chain.height == 1  # only the predicate registration landed


def test_flow_grant_missing_attribute(svc):
    with pytest.raises(NotFound):
        svc.flow_grant("tradebase", attribute="height")


def test_flow_status_transitions(svc):
    assert svc.flow_status("tradebase").state == "none"
    svc.flow_grant("tradebase", duration_s=1000)
    assert svc.flow_status("tradebase").state == "active"
    svc.advance_time(1000)
    view = svc.flow_status("tradebase")
    assert view.state == "expired"
    assert view.last_checked == CLOCK + 1000


def test_flow_status_unknown_subject(svc):
    view = svc.flow_status("tradebase", subject="0x" + "99" * 20)
    assert view.state == "none"
    assert view.expires_at is None


def test_flow_revoke_kill_switch(svc):
    svc.flow_grant("tradebase")
    receipt = svc.flow_revoke("tradebase")
    assert receipt["status"] == "success"
    assert svc.flow_status("tradebase").state == "none"
    with pytest.raises(TransactionReverted, match="NoActiveRecord"):
        svc.flow_revoke("tradebase")


def test_chain_persists_across_instances(svc):
    svc.flow_grant("tradebase")
    reloaded = LifecycleService(svc.home)
    assert reloaded.flow_status("tradebase").state == "active"


def test_service_id_is_stable_hash():
    a = service_id_for("tradebase")
    assert a == service_id_for("tradebase")
    assert a != service_id_for("other")


def test_gas_report_golden(svc):
    report = svc.gas_report("mainnet")
    assert report["grant_gas"] == 250_000
    assert report["grant_cost_usd"] == "15.0000"
    l2 = svc.gas_report("l2")
    assert float(l2["grant_cost_usd"]) < 0.50


# -- HTTP API ----------------------------------------------------------------------

@pytest.fixture
def client(svc):
    return TestClient(create_app(svc))


def test_http_grant_status_revoke(client):
    resp = client.post("/v1/grant", json={"service": "tradebase",
                                          "duration_s": 86_400})
    assert resp.status_code == 200
    body = resp.json()
    assert body["state"] == "active"
    assert body["subject"] == OWNER

    resp = client.get("/v1/status",
                      params={"service": "tradebase", "subject": OWNER})
    assert resp.json()["state"] == "active"

    resp = client.post("/v1/revoke", json={"service": "tradebase"})
    assert resp.status_code == 200
    assert resp.json()["receipt"]["status"] == "success"

    resp = client.get("/v1/status", params={"service": "tradebase"})
    assert resp.json()["state"] == "none"


def test_http_underage_maps_to_422(tmp_path):
    svc = make_home(tmp_path, birth=(2010, 6, 1))
    client = TestClient(create_app(svc))
    resp = client.post("/v1/grant", json={"service": "tradebase"})
    assert resp.status_code == 422
    assert resp.json()["error"] == "UnsatisfiedWitness"


def test_http_revoke_without_session_is_409(client):
    resp = client.post("/v1/revoke", json={"service": "tradebase"})
    assert resp.status_code == 409
    assert resp.json()["error"] == "NoActiveRecord"


def test_http_zero_duration_is_400(client):
    resp = client.post("/v1/grant", json={"service": "tradebase",
                                          "duration_s": 0})
    assert resp.status_code == 400
    assert resp.json()["error"].startswith("InvalidDuration")


def test_http_gas_decimal_strings(client):
    resp = client.get("/v1/gas", params={"network": "mainnet"})
    body = resp.json()
    assert body["grant_cost_usd"] == "15.0000"
    assert isinstance(body["grant_cost_usd"], str)
    assert body["gas_breakdown"]["grant"]["overhead_usd"] == "0.0000"
    assert client.get("/v1/gas", params={"network": "mars"}).status_code == 404


def test_http_admin_gated(client):
    resp = client.post("/v1/admin/advance_time", json={"seconds": 10})
    assert resp.status_code == 403


def test_http_admin_advance_when_enabled(tmp_path):
    svc = make_home(tmp_path, admin_endpoints=True)
    client = TestClient(create_app(svc))
    svc.flow_grant("tradebase", duration_s=100)
    resp = client.post("/v1/admin/advance_time", json={"seconds": 200})
    assert resp.status_code == 200
    assert client.get("/v1/status", params={"service": "tradebase"}
                      ).json()["state"] == "expired"
    resp = client.post("/v1/admin/advance_time", json={"seconds": 0})
    assert resp.status_code == 400


def test_http_healthz(client, svc):
    body = client.get("/v1/healthz").json()
    assert body["ok"] is True
    assert body["chain_height"] == svc.chain.height
    assert body["clock"] == svc.chain.clock
    assert body["poll_interval_s"] == svc.config.poll_interval_s


def test_witness_confinement_over_http(svc):
    """The attribute value and salt must never cross the HTTP boundary or
    reach chain state; scan every request, response and the full export."""
    vlt = vault_mod.open_vault(svc.vault_path)
    record = vlt.get_record("birthdate")
    secrets_plain = {
        str(record.value).encode(),
        f"{record.salt:032x}".encode(),
        str(record.salt).encode(),
        record.value.to_bytes(4, "big"),
        record.salt.to_bytes(16, "big"),
    }

    captured: list[bytes] = []
    client = TestClient(create_app(svc))
    requests = [
        ("POST", "/v1/grant", {"service": "tradebase", "duration_s": 3600}),
        ("GET", "/v1/status?service=tradebase", None),
        ("POST", "/v1/revoke", {"service": "tradebase"}),
        ("GET", "/v1/gas?network=l2", None),
        ("GET", "/v1/healthz", None),
    ]
    for method, url, body in requests:
        payload = b"" if body is None else json.dumps(body).encode()
        captured.append(payload)
        resp = client.request(method, url, content=payload or None,
                              headers={"content-type": "application/json"})
        captured.append(resp.content)
    captured.append(svc.chain.export_bytes())
    captured.append("\n".join(e.to_line() for e in svc.chain.event_log).encode())

    for blob in captured:
        for secret in secrets_plain:
            assert secret not in blob


def test_concurrent_status_reads_consistent(svc):
    svc.flow_grant("tradebase", duration_s=5000)
    results = []
    errors = []

    def poll():
        try:
            results.append(svc.flow_status("tradebase").state)
        except Exception as exc:  # noqa: BLE001
            errors.append(exc)

    threads = [threading.Thread(target=poll) for _ in range(16)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
    assert set(results) == {"active"}
