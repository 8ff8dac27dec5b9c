"""
A defibrillation episode
========================

With every communication technique on and a quiet room, the team runs the
shock with a closed confirmation loop and broadcast call-outs.
"""

# %%
from cprsim.engine import run_scenario

r = run_scenario("shock_episode", seed=0)
for rec in r.log.records:
    if rec["kind"] == "message_sent":
        print(f"t={rec['tick']:2d}  {rec['text']}")
    elif rec["kind"] == "action":
        print(f"t={rec['tick']:2d}      [{rec['agent']}] {rec['term']}")

# %%
print("shocks:", r.patient.shocks_given, "deviations:", r.deviations)
