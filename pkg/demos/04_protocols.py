"""
Communication techniques and a noisy room
=========================================

Checkback, call-outs and SBAR handoffs are switchable, and the channel can
drop, misaddress and garble messages.
"""

# %%
import random

from cprsim.acl import evolve, parse_message, parse_term
from cprsim.protocols import ProtocolConfig, apply_noise, build_sbar, open_checkback

# A checkback conversation closes when the responder confirms.
q = evolve(parse_message("query_if(physician, nurse, ready(nurse, shock(nurse, patient)))"), id=3)
conv = open_checkback(q, deadline=10)
conv.on_reply(parse_message("confirm(nurse, physician, ready(nurse, shock(nurse, patient)))"), tick=2)
print("checkback:", conv.state.value)

# %%
# The opening handoff as one structured message.
sbar = build_sbar(
    parse_term("cardiac_arrest(patient)"),
    parse_term("history(patient, age(50yr), chest_pain)"),
    parse_term("bls_given(patient, 3min, 4min)"),
    parse_term("start_acls(patient)"),
)
print(sbar.text())

# %%
# A broadcast "prepare to shock" in a loud room.
noisy = ProtocolConfig(p_not_heard=0.2, p_misaddress=0.5)
shout = parse_message("request(physician, all, shock(nurse, patient))")
for d in apply_noise(shout, ["assistant", "critical_care_nurse", "nurse", "respiratory_therapist"], noisy, random.Random(1)):
    print(f"{d.to:22s} heard={d.heard!s:5s} ambiguous={d.clarity.ambiguous_addressee}")
