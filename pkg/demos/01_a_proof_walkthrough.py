"""Walk through one polynomial's simplification proof, step by step.

Builds the two-product example from the package documentation and prints
the coarse and fine proofs side by side.
"""

from polyproof import COARSE, FINE, generate_proof
from polyproof.surface import Factor, InitialPoly, Product, raw_term
from polyproof.textio import ATOMIC_ENC, INFIX, serialize, tokens_to_str

# (2*x_2^2)*(3*x_2^1 + 4) + (5*x_1^2 + x_1^1*x_2^1)*(3*x_1^1)*(2)
poly = InitialPoly(
    (
        Product(
            (
                Factor((raw_term(2, [(2, 2)]),)),
                Factor((raw_term(3, [(2, 1)]), raw_term(4, []))),
            )
        ),
        Product(
            (
                Factor((raw_term(5, [(1, 2)]), raw_term(1, [(1, 1), (2, 1)]))),
                Factor((raw_term(3, [(1, 1)]),)),
                Factor((raw_term(2, []),)),
            )
        ),
    )
)


def show(state):
    return tokens_to_str(serialize(state, INFIX, ATOMIC_ENC))


for granularity in (COARSE, FINE):
    proof = generate_proof(poly, granularity)
    print(f"\n== {granularity} proof ({len(proof.steps)} steps) ==")
    print(f"  start    {show(proof.initial.to_state())}")
    for step in proof.steps:
        print(f"  {step.kind.value:<4} ->  {show(step.after)}")

print("\nBoth proofs end at the same normal form, the polynomial's unique endpoint.")
