"""
Mutual situation awareness
==========================

How much of the picture do the team members share, who is missing what, and
where do they disagree?
"""

# %%
from cprsim.acl import term
from cprsim.cognition import AgentMind, Source
from cprsim.msa import find_contradictions, snapshot

minds = {a: AgentMind(a, "nurse") for a in ("physician", "nurse", "critical_care_nurse")}
for a in minds:
    minds[a].add_belief(term("fibrillation", "patient"), True, Source.INITIAL, 0)
minds["physician"].add_belief(term("stable", "patient"), True, Source.INITIAL, 3)
minds["nurse"].add_belief(term("stable", "patient"), False, Source.INITIAL, 5)
minds["physician"].add_belief(term("charging", "defibrillator"), True, Source.INITIAL, 6)
minds["critical_care_nurse"].add_belief(term("charging", "defibrillator"), True, Source.INITIAL, 6)

s = snapshot(minds.values(), tick=6)
print("score:", round(s.score, 3))
print("nurse is missing:", sorted(str(p) for p, _ in s.per_agent_missing["nurse"]))
for c in find_contradictions(minds.values()):
    print("disagree on", c.proposition, "true:", c.holders_true, "false:", c.holders_false, "since t =", c.first_tick)

# %%
# Over a whole run, snapshots form a time series.
from cprsim.engine import run_scenario

for name in ("good", "bad"):
    r = run_scenario(name, seed=3)
    print(name, [round(x.score, 2) for x in r.snapshots[:8]])
