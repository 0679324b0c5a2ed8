"""Acceptance suite.

Every criterion is exact (zero tolerance): the coefficient ring is exact, so
each check is a structural zero test.  One pass/fail line per criterion is
printed; run with `pytest tests/test_acceptance.py -v -s` to see them.
"""

from __future__ import annotations

import random
from pathlib import Path

import folicalc as fc
from folicalc import Expression

import randgen

SAMPLES = sorted((Path(__file__).resolve().parent.parent / "samples").glob("*.fol"))


def report(number: int, label: str, ok: bool, detail: str = ""):
    print(f"acceptance {number} ({label}): {'PASS' if ok else 'FAIL'}")
    assert ok, f"acceptance {number} ({label}) failed: {detail}"


def test_acceptance_1_leafwise_complex():
    # 1000 leafwise forms, every leaf dimension 1..4 and every form degree,
    # base dimension up to 5, coefficient degree up to 3: d~(d~phi) == 0.
    rng = random.Random(2026_01)
    failures = []
    for trial in range(1000):
        dim_leaf = 1 + trial % 4
        extra = rng.randint(0, 5 - dim_leaf)
        names = tuple(f"z{i + 1}" for i in range(dim_leaf + extra))
        chart = fc.AdaptedChart(names[:dim_leaf], names[dim_leaf:])
        degree = (trial // 4) % (dim_leaf + 1)
        phi = randgen.leafwise_form(rng, chart, degree=degree, coeff_degree=3)
        if not fc.leafwise_differential(fc.leafwise_differential(phi)).is_zero():
            failures.append(f"trial {trial}: {phi!r}")
    report(1, "leafwise complex d~^2 = 0", not failures, "; ".join(failures[:3]))


def test_acceptance_2_restriction_commutes():
    # 1000 exterior forms: restricting the differential equals differentiating
    # the restriction.
    rng = random.Random(2026_02)
    failures = []
    for trial in range(1000):
        chart = randgen.adapted_chart(rng)
        omega = randgen.exterior_form(rng, chart, coeff_degree=3)
        lhs = fc.restrict_form(fc.exterior_differential(omega))
        rhs = fc.leafwise_differential(fc.restrict_form(omega))
        if lhs != rhs:
            failures.append(f"trial {trial}: {omega!r}")
    report(2, "restriction commutes with d", not failures, "; ".join(failures[:3]))


def test_acceptance_3_round_trip_extension():
    # 1000 random triples, fibre-dependent connection coefficients of degree
    # <= 2, base-only splittings: restricting the extension recovers the input
    # exactly, and extending a connection's own restriction reproduces it.
    rng = random.Random(2026_03)
    failures = []
    for trial in range(1000):
        chart = randgen.bundle_chart(rng)
        a = randgen.leafwise_connection(rng, chart, coeff_degree=2)
        gamma = randgen.connection(rng, chart, coeff_degree=2)
        split = randgen.splitting(rng, chart.base, coeff_degree=2)
        if not fc.verify_extension(a, gamma, split):
            failures.append(f"trial {trial}: restriction mismatch")
        if fc.extend_connection(fc.restrict_connection(gamma), gamma, split) != gamma:
            failures.append(f"trial {trial}: reference not reproduced")
    report(3, "main round trip restrict(extend) = id", not failures, "; ".join(failures[:3]))


def test_acceptance_4_dependence_shape():
    # Extensions under two splittings agree on every leaf coefficient and
    # differ transversally exactly by -(B1-B2)[alpha][A] * Q[i][alpha].
    rng = random.Random(2026_04)
    failures = []
    for trial in range(300):
        chart = randgen.bundle_chart(rng)
        a = randgen.leafwise_connection(rng, chart, coeff_degree=2)
        gamma = randgen.connection(rng, chart, coeff_degree=2)
        first = randgen.splitting(rng, chart.base, coeff_degree=2)
        second = randgen.splitting(rng, chart.base, coeff_degree=2)
        delta = fc.extension_dependence(a, gamma, first, second)
        q = fc.connection_difference(a, fc.restrict_connection(gamma))
        for i in range(chart.fibre_dim):
            for alpha in range(chart.dim_leaf):
                if not delta.coefficient(i, alpha).is_zero():
                    failures.append(f"trial {trial}: leaf entry ({i},{alpha}) nonzero")
            for trans in range(chart.dim_leaf, chart.dim):
                expected = Expression.zero()
                for alpha in range(chart.dim_leaf):
                    weight = first.coefficient(alpha, trans) - second.coefficient(alpha, trans)
                    expected = expected - weight * q.coefficient(i, alpha)
                if delta.coefficient(i, trans) != expected:
                    failures.append(f"trial {trial}: transverse entry ({i},{trans})")
    report(4, "splitting dependence shape", not failures, "; ".join(failures[:3]))


def test_acceptance_5_leibniz_and_foliated_kernel():
    # 1000 random pairs for the graded Leibniz rule and 1000 random functions
    # for d~f = 0 <=> f is foliated.
    rng = random.Random(2026_05)
    failures = []
    for trial in range(1000):
        chart = randgen.adapted_chart(rng)
        a = randgen.leafwise_form(rng, chart, coeff_degree=2)
        b = randgen.leafwise_form(rng, chart, coeff_degree=2)
        signed = fc.wedge(a, fc.leafwise_differential(b))
        if a.degree % 2:
            signed = -signed
        lhs = fc.leafwise_differential(fc.wedge(a, b))
        rhs = fc.wedge(fc.leafwise_differential(a), b) + signed
        if lhs != rhs:
            failures.append(f"leibniz trial {trial}")
    for trial in range(1000):
        chart = randgen.adapted_chart(rng)
        # Mix functions of every flavour: general, transverse-only, constant.
        flavour = trial % 3
        if flavour == 0:
            f = randgen.expression(rng, chart.coords)
        elif flavour == 1:
            f = randgen.expression(rng, chart.transverse_coords)
        else:
            f = Expression.constant(randgen.rational(rng))
        kernel = fc.leafwise_differential(fc.LeafwiseForm.from_function(chart, f)).is_zero()
        if kernel != fc.is_foliated_function(f, chart):
            failures.append(f"foliated trial {trial}: {f}")
    report(5, "graded Leibniz and foliated kernel", not failures, "; ".join(failures[:3]))


def test_acceptance_6_flat_section_oracle():
    # Sections are flat for the connection built from their own leaf jets, and
    # bumping any single coefficient by +1 breaks flatness.
    rng = random.Random(2026_06)
    failures = []
    for trial in range(200):
        chart = randgen.bundle_chart(rng)
        section = randgen.section(rng, chart, coeff_degree=3)
        flat = fc.jet_section_as_connection(fc.jet_prolongation(section))
        if not fc.covariant_differential(flat, section).is_zero():
            failures.append(f"trial {trial}: jet connection not flat")
        fibre = rng.randrange(chart.fibre_dim)
        leaf = rng.randrange(chart.dim_leaf)
        perturbed_table = dict(flat.coefficients)
        perturbed_table[(fibre, leaf)] = (
            perturbed_table.get((fibre, leaf), Expression.zero()) + 1
        )
        perturbed = fc.LeafwiseConnection(chart, perturbed_table)
        if fc.covariant_differential(perturbed, section).is_zero():
            failures.append(f"trial {trial}: perturbation undetected")
    report(6, "flat-section oracle", not failures, "; ".join(failures[:3]))


def test_acceptance_7_worked_example_regression():
    # Hand-derived: Q = A, so the extension keeps A on the leaf block and
    # puts -B[z1][z3]*Q[u][z1] = -z2*u into the z3 slot.
    base = fc.AdaptedChart(("z1", "z2"), ("z3",))
    chart = fc.BundleChart(base, ("u",))
    u = Expression.variable("u")
    z2 = Expression.variable("z2")
    a = fc.LeafwiseConnection(chart, {("u", "z1"): u})
    split = fc.Splitting(base, {("z1", "z3"): z2})
    extended = fc.extend_connection(a, None, split)
    expected = fc.Connection(chart, {("u", "z1"): u, ("u", "z3"): -(z2 * u)})
    ok = extended == expected and fc.verify_extension(a, None, split)
    report(7, "worked example regression", ok, f"got {extended!r}")


def test_acceptance_8_parser_round_trip_and_fuzz():
    failures = []
    if not SAMPLES:
        failures.append("no shipped sample documents")
    for path in SAMPLES:
        doc = fc.parse_document(path.read_text(encoding="utf-8"))
        printed = fc.print_document(doc)
        if fc.parse_document(printed) != doc:
            failures.append(f"{path.name}: reparse differs")
        if fc.print_document(fc.parse_document(printed)) != printed:
            failures.append(f"{path.name}: printing not a fixpoint")
    rng = random.Random(2026_08)
    alphabet = "manifold burce{}[]()=+-*^/#\n\t z123456789_"
    for trial in range(100_000):
        if trial % 10 < 7:
            raw = rng.randbytes(rng.randint(0, 1024))
            text = raw.decode("utf-8", errors="replace")
        else:
            length = rng.randint(0, 1024)
            text = "".join(rng.choice(alphabet) for _ in range(length))
        try:
            result = fc.parse_document(text)
        except fc.ParseError as error:
            if error.line < 1 or error.column < 1:
                failures.append(f"trial {trial}: bad position")
        except Exception as error:  # noqa: BLE001 - any other escape is a crash
            failures.append(f"trial {trial}: {type(error).__name__}: {error}")
        else:
            if not isinstance(result, fc.Document):
                failures.append(f"trial {trial}: non-document result")
    report(8, "parser round trip and fuzz", not failures, "; ".join(failures[:3]))
