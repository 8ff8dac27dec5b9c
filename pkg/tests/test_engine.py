from __future__ import annotations

import random

import pytest

from cprsim.acl import parse_message
from cprsim.engine import EventLog, LogOrderError, Simulation, deliver, run_scenario, stream
from cprsim.protocols import ProtocolConfig
from cprsim.team import can_perform

ROSTER = ("physician", "assistant", "critical_care_nurse", "nurse", "respiratory_therapist")


def test_same_seed_same_transcript(bad):
    a = run_scenario(bad.replace(max_ticks=300), 17)
    b = run_scenario(bad.replace(max_ticks=300), 17)
    assert a.log.to_jsonl() == b.log.to_jsonl()
    assert a.to_json() == b.to_json()


def test_different_seeds_differ(bad):
    a = run_scenario(bad.replace(max_ticks=300), 1)
    b = run_scenario(bad.replace(max_ticks=300), 2)
    assert a.log.to_jsonl() != b.log.to_jsonl()


def test_streams_are_label_keyed():
    assert stream(3, "agent", "nurse").random() == stream(3, "agent", "nurse").random()
    assert stream(3, "agent", "nurse").random() != stream(3, "agent", "assistant").random()


def test_point_to_point_single_delivery():
    m = parse_message("request(physician, nurse, shock(nurse, patient))")
    ds = deliver(m, ROSTER, ProtocolConfig(), random.Random(0))
    assert [d.to for d in ds] == ["nurse"]


def test_broadcast_reaches_everyone_else():
    m = parse_message("inform(physician, all, fibrillation(patient))")
    ds = deliver(m, ROSTER, ProtocolConfig(), random.Random(0))
    assert len(ds) == 4 and "physician" not in {d.to for d in ds}


def test_log_rejects_time_travel():
    log = EventLog()
    log.append(5, "action")
    with pytest.raises(LogOrderError):
        log.append(4, "action")


def test_jsonl_round_trip(good):
    r = run_scenario("shock_episode", 0)
    assert EventLog.from_jsonl(r.log.to_jsonl()).records == r.log.records


@pytest.fixture(scope="module")
def noisy_runs(bad):
    cfg = bad.with_protocol(p_not_heard=0.2).replace(max_ticks=400)
    return [run_scenario(cfg, s) for s in range(6)]


def test_drops_recorded(noisy_runs):
    for r in noisy_runs:
        sent = {m["id"]: m for m in r.log.of_kind("message_sent")}
        deliveries = list(r.log.of_kind("delivery"))
        on_channel = {d["id"] for d in deliveries}
        addressed = sum(len(set(ROSTER) - {sent[i]["sender"]}) if sent[i]["receiver"] == "all" else 1 for i in on_channel)
        heard = sum(d["heard"] for d in deliveries)
        drops = [d for d in deliveries if not d["heard"]]
        assert all(d["reason"] == "not_heard" for d in drops)
        assert len(drops) == addressed - heard
        assert drops


def test_deliveries_follow_their_send(noisy_runs):
    for r in noisy_runs:
        sent_at: dict[int, int] = {}
        for rec in r.log.records:
            if rec["kind"] == "message_sent":
                sent_at[rec["id"]] = rec["tick"]
            elif rec["kind"] == "delivery":
                assert rec["id"] in sent_at
                # emitted at t, heard at t+1
                assert rec["tick"] == sent_at[rec["id"]] + 1


def test_ticks_non_decreasing(noisy_runs):
    for r in noisy_runs:
        ticks = [rec["tick"] for rec in r.log.records]
        assert ticks == sorted(ticks)


def test_gate_soundness(noisy_runs, bad):
    team = bad.team
    for r in noisy_runs:
        for a in r.log.of_kind("action"):
            cap = bad.act_capabilities.get(a["action"])
            if cap is not None:
                assert can_perform(team.role_of(a["agent"]), cap, team.matrix)


def test_checkback_gate_holds_without_skips(bad):
    cfg = bad.with_protocol(checkback_enabled=True, p_skip_confirmation=0.0).replace(max_ticks=600)
    for seed in range(6):
        r = run_scenario(cfg, seed)
        assert not [d for d in r.deviations if d.kind == "ActionWithoutConfirmation"]
        confirmed = {c["conversation"] for c in r.log.of_kind("checkback") if c["state"] == "confirmed"}
        sent = {m["id"]: m for m in r.log.of_kind("message_sent")}
        for a in r.log.of_kind("action"):
            src = sent.get(a["origin_msg"]) if a["origin_msg"] is not None else None
            if a["action"] in ("defibrillate", "inject_drug") and src is not None and src["performative"] == "request":
                assert src["id"] in confirmed


def test_skip_pathology_acts_without_confirmation(bad):
    cfg = bad.with_protocol(checkback_enabled=True, p_skip_confirmation=1.0).replace(max_ticks=600)
    kinds = [d.kind for s in range(6) for d in run_scenario(cfg, s).deviations]
    assert "ActionWithoutConfirmation" in kinds


def test_runs_end_by_max_ticks(good):
    r = run_scenario(good.replace(max_ticks=50), 0)
    assert r.reason == "max_ticks"
    assert r.patient.elapsed_ticks == 50
    assert r.log.records[-1]["kind"] == "run_end"


def test_default_budget_is_thirty_minutes(good):
    assert good.max_ticks == 1800
    r = run_scenario(good.with_protocol(), 3)
    assert r.patient.elapsed_ticks <= 1800


def test_adrenaline_order(good):
    r = run_scenario("adrenaline_episode", 0)
    texts = [m["text"] for m in r.log.of_kind("message_sent")]
    req = texts.index("request(physician, nurse, inject(nurse, adrenaline, 1mg))")
    agree = texts.index("agree(nurse, physician, inject(nurse, adrenaline, 1mg))")
    assert req < agree
    inject = [a for a in r.log.of_kind("action") if a["action"] == "inject_drug"]
    assert len(inject) == 1 and inject[0]["agent"] == "nurse"
    assert r.patient.adrenaline_mg == 1.0


def test_snapshots_on_interval(good):
    r = run_scenario(good.replace(max_ticks=100, snapshot_interval=25), 0)
    assert [s.tick for s in r.snapshots] == [0, 25, 50, 75]


def test_unknown_scenario_name():
    with pytest.raises(OSError):
        run_scenario("no_such_scenario", 0)


def test_simulation_exposes_minds(good):
    sim = Simulation(good, 0)
    assert tuple(sim.minds) == ROSTER
