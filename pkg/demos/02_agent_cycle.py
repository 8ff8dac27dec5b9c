"""
One agent's reasoning cycle
===========================

A clinical nurse hears a drug order, forms a desire, commits to the matching
plan and works through it one step per tick, pausing until the physician
confirms.
"""

# %%
from cprsim.acl import Message, evolve, parse_message, render_term
from cprsim.cognition import Action, deliberate, perceive, step, update_desires
from cprsim.engine import Simulation
from cprsim.scenario import load_scenario

nurse = Simulation(load_scenario("good"), seed=0).minds["nurse"]
update_desires(nurse, 0)
print("idle desires:", [render_term(g) for g in nurse.desires])


def show(out):
    if isinstance(out, Message):
        return "say " + out.text()
    if isinstance(out, Action):
        return "do  " + render_term(out.term)
    return "idle"


# %%
# Perception: the request becomes beliefs, and the beliefs produce a desire.
order = evolve(parse_message("request(physician, nurse, inject(nurse, adrenaline, 1mg))"), id=1)
delta = perceive(nurse, order, 1)
print("new beliefs:", [render_term(b.proposition) for b in delta.added])
print("new desires:", [(render_term(d.goal), d.priority) for d in delta.desires.added])

# %%
# Projection: the highest-priority desire becomes the intention.
print("intention:", render_term(deliberate(nurse, 1).goal))
for t in range(2, 7):
    print(t, show(step(nurse, t)))

# %%
# The confirmation arrives, and the injection goes ahead.
perceive(nurse, evolve(parse_message("confirm(physician, nurse, inject(nurse, adrenaline, 1mg))"), id=2), 7)
print(8, show(step(nurse, 8)))
