#!/usr/bin/env python3
"""Canonical brackets, the consistency algorithm, and class-ification.

The consistency algorithm is the library's independent ground truth:
it never touches the extended symplectic matrices, yet on every model
here it spans exactly the same constraint surface as the chain.
"""

from pathlib import Path

from symchain import (
    classify,
    compare_spans,
    consistency_algorithm,
    derive_pairing,
    determinant,
    load_model,
    parse_expression,
    poisson_bracket,
    run_chain,
)

model = load_model(Path(__file__).resolve().parent.parent / "models" / "example2.model")
pairing = derive_pairing(model)

# -- brackets -----------------------------------------------------------

x = parse_expression("x", model.zeta)
p_x = parse_expression("p_x", model.zeta)
p_z = parse_expression("p_z", model.zeta)
print("{x, p_x} =", poisson_bracket(x, p_x, pairing))
print("{p_z, H_C} =", poisson_bracket(p_z, model.hamiltonian, pairing),
      " <- the consistency of the primary, i.e. the next constraint")
print()

# -- the consistency algorithm ------------------------------------------

oracle = consistency_algorithm(model)
print("consistency algorithm:")
for c in oracle.constraints:
    print(f"  level {c.level}: {c.raw}")
for mc in oracle.multiplier_conditions:
    print(f"  multiplier fixed: consistency of {mc.constraint.expr} "
          f"requires {mc.condition} = 0")
print()

# -- classification ------------------------------------------------------

cm = classify(oracle.constraints, pairing)
print("mutual-bracket matrix:")
print(cm.matrix)
print(f"rank {cm.rank}: all {cm.second_class_count} constraints are "
      f"second-class; det = {determinant(cm.matrix)}")
print()

# -- and the cross-check against the chain --------------------------------

report = run_chain(model)
print("chain vs oracle spans:", compare_spans(report, oracle.constraints).describe())
print("chain span fingerprint: ", report.span_fingerprint())
print("oracle span fingerprint:", oracle.span_fingerprint())
