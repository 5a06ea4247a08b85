"""The generic channel engine under the hood of the classical reductions.

Each edge i -> j of the walk graph carries an internal-space operator; one
step maps rho[j] to sum_i B[i,j] rho[i] B[i,j]^dagger.  Graph coherences die
after a single step, so states stay block diagonal.  Because every operator
of the linear walk is a scaled unitary, positions follow the classical chain
exactly while the internal state is just transported by an ordered unitary
product, staying pure forever.
"""

import math

import numpy as np

from oqwalk import channel as ch
from oqwalk import linear as lin
from oqwalk.linear import LinearWalkSpec, internal_state_at_node

X = np.array([[0, 1], [1, 0]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)

spec = LinearWalkSpec(5, 0.7, unitaries=(X, H, X @ H, H))
chan = lin.build_channel(spec)

report = ch.validate_channel(chan)
print(f"channel on {chan.node_count} nodes, internal dimension {chan.internal_dim}")
print(f"completeness check: ok = {report.ok}, "
      f"worst defect = {max(report.defects.values()):.2e}")

bad = ch.OqwChannel(5, 2, {**chan.transitions, (0, 1): 1.01 * chan.transitions[(0, 1)]})
bad_report = ch.validate_channel(bad)
print(f"scaling one operator by 1.01 is caught: ok = {bad_report.ok}, "
      f"defect at node 0 = {bad_report.defects[0]:.4f}")

print()
psi = np.array([0.6, 0.8])
state = ch.BlockState.localized(5, 0, psi)
p_classical = np.zeros(5)
p_classical[0] = 1.0
print("engine marginal vs classical chain:")
checkpoints = (1, 5, 25, 100)
for n in range(1, checkpoints[-1] + 1):
    state = ch.step(chan, state)
    p_classical = lin.markov_step(p_classical, spec.omega)
    if n in checkpoints:
        gap = np.abs(ch.position_marginal(state) - p_classical).max()
        print(f"  after {n:>3} steps: max gap {gap:.2e}, trace {state.total_trace():.15f}")

print()
print("internal blocks after 100 steps are the predicted unitary transports:")
for node in sorted(state.blocks):
    block = state.blocks[node]
    tr = float(np.trace(block).real)
    if tr < 1e-12:
        continue
    predicted = internal_state_at_node(spec, psi, node)
    gap = np.abs(block / tr - predicted).max()
    purity = float(np.trace((block / tr) @ (block / tr)).real)
    print(f"  node {node}: weight {tr:.4f}, purity {purity:.12f}, "
          f"prediction gap {gap:.2e}")
