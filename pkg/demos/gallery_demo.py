"""Run the worked-example verifications at desk scale.

Each report lists named checks with pass/fail status; informational rows
(like the ambiguous lacunary gap-bound readings) carry no verdict.
"""
from kronset.gallery import ExampleSpec, verify_example


def show(report):
    spec = report.example
    params = {k: v for k, v in vars(spec).items() if v and k != "kind"}
    print(f"\n=== {spec.kind} {params or ''} -> {'PASS' if report.passed else 'FAIL'}")
    for check in report.checks:
        mark = {True: "ok", False: "FAIL", None: "info"}[check.passed]
        print(f"  [{mark:4}] {check.name}: {check.relation}")
    for key, value in report.data.items():
        if not isinstance(value, (list, dict)):
            print(f"        {key} = {value}")


# the exact finite-group example: the obstruction target pins kappa at 2
show(verify_example(ExampleSpec.z2cube()))

# coset truncations: brackets grow with the truncation, capped by pi - pi/n
show(verify_example(ExampleSpec.coset(3, 5)))

# the paired set: both halves quasi-independent, the union not; the flip
# target's error climbs toward pi as more factors join
for big_n in (4, 8):
    show(verify_example(ExampleSpec.mixed(big_n)))

# a lacunary set: certified bracket plus both readings of the gap bound
show(verify_example(ExampleSpec.hadamard(4, 5), budget=10**8))
