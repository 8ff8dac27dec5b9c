"""
Speech-act messages
===================

Messages are performatives over term trees, written as text and parsed back.
"""

# %%
# Parse and render: the textual form round-trips exactly.
from cprsim.acl import ParseError, match, parse_message, parse_term, render_message

m = parse_message("query_if(physician, nurse, ready(nurse, shock(nurse, patient)))")
print(m.performative.value, m.sender, "->", m.receiver)
print("content depth:", m.content.depth)
print(render_message(m))

# %%
# Malformed text reports where parsing stopped and what it expected there.
try:
    parse_message("inform(physician, all, fibrillation(patient)")
except ParseError as e:
    print(e)

# %%
# Patterns with ``?variables`` bind against ground terms; plan libraries use this.
print(match(parse_term("inject(?who, ?drug, ?dose)"), parse_term("inject(nurse, adrenaline, 1mg)")))
