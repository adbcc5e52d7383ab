import pytest

from symchain import (
    Expression,
    FirstOrderModel,
    ModelFormatError,
    SecondOrderLagrangian,
    VarTable,
    legendre_transform,
    load_model,
    parse_expression,
    save_model,
)


def _second_order(coord_names, text):
    coords = VarTable(coord_names)
    table = SecondOrderLagrangian.full_table(coords)
    return SecondOrderLagrangian(coords, parse_expression(text, table))


def test_legendre_mechanical_fixture():
    m = legendre_transform(_second_order(["x", "y", "z"], "xdot*ydot - z*(x+y)"), name="example2")
    assert m.zeta.names == ("x", "y", "z", "p_x", "p_y", "p_z")
    assert str(m.hamiltonian) == "x*z + y*z + p_x*p_y"
    assert [str(e) for e in m.c] == ["p_x", "p_y", "p_z", "0", "0", "0"]
    assert [str(p) for p in m.primaries] == ["p_z"]
    assert m.phase.multiplier_names == ("lam1",)


def test_legendre_free_particle():
    m = legendre_transform(_second_order(["q"], "1/2*qdot^2"), name="free")
    assert str(m.hamiltonian) == "1/2*p_q^2"
    assert m.primaries == ()


def test_legendre_off_diagonal_hessian():
    # hand oracle: W = [[0,1],[1,0]], so v1 = p2, v2 = p1 and
    # H = p1*v1 + p2*v2 - v1*v2 = p1*p2
    m = legendre_transform(_second_order(["q1", "q2"], "q1dot*q2dot"), name="od")
    assert str(m.hamiltonian) == "p_q1*p_q2"
    assert m.primaries == ()


def test_legendre_reproduces_equations_of_motion():
    # with H from the transform, qdot_i = dH/dp_i must invert back to the
    # defining momentum relations at random points: check p_x = dL/dxdot
    # composed with v* is the identity on the solvable block
    m = legendre_transform(_second_order(["x", "y", "z"], "xdot*ydot - z*(x+y)"), name="ex")
    # dH/dp_x = p_y means xdot = p_y, and indeed p_x = dL/dxdot = ydot
    assert str(m.hamiltonian.differentiate("p_x")) == "p_y"
    assert str(m.hamiltonian.differentiate("p_y")) == "p_x"
    # the z-velocity never appears: dH/dp_z = 0
    assert m.hamiltonian.differentiate("p_z").is_zero()


def test_legendre_corank_counts_primaries():
    m = legendre_transform(
        _second_order(["a", "b", "cc"], "1/2*adot^2 + bdot*cc"), name="m"
    )
    # Hessian rank 1 over three velocities: two primaries
    assert len(m.primaries) == 2
    assert {str(p) for p in m.primaries} == {"-cc + p_b", "p_cc"}


def test_legendre_rejects_nonquadratic_and_nonconstant_hessian():
    with pytest.raises(ValueError):
        legendre_transform(_second_order(["q"], "qdot^3"))
    with pytest.raises(ValueError):
        legendre_transform(_second_order(["q"], "q*qdot^2"))


def test_total_hamiltonian_on_demand():
    m = legendre_transform(_second_order(["x", "y", "z"], "xdot*ydot - z*(x+y)"), name="ex")
    ht = m.total_hamiltonian()
    assert str(ht) == "x*z + y*z + p_x*p_y + p_z*lam1"
    assert str(ht.differentiate("p_z")) == "lam1"


def test_load_example2(models_dir, example2):
    expected = legendre_transform(
        _second_order(["x", "y", "z"], "xdot*ydot - z*(x+y)"), name="example2"
    )
    assert example2 == expected


def test_load_schwinger_n3(models_dir):
    m = load_model(models_dir / "schwinger_n3.model")
    assert len(m.zeta) == 18  # 3 fields + 3 momenta, 3 sites each
    assert len(m.primaries) == 3
    assert len(m.c) == 18


def test_save_load_roundtrip(tmp_path, example2, free_particle, models_dir):
    for m in (example2, free_particle, load_model(models_dir / "schwinger_n3.model")):
        path = tmp_path / f"{m.name}.model"
        save_model(m, path)
        assert load_model(path) == m


def test_load_rejects_duplicate_variables(tmp_path):
    p = tmp_path / "bad.model"
    p.write_text("model bad\nzeta x x\nc 0 0\nH 0\n")
    with pytest.raises(ModelFormatError) as err:
        load_model(p)
    assert err.value.line == 2


def test_load_rejects_mixed_forms(tmp_path):
    p = tmp_path / "bad.model"
    p.write_text("model bad\nvars x\nL 1/2*xdot^2\nH x\nc x 0\n")
    with pytest.raises(ModelFormatError):
        load_model(p)


def test_load_rejects_wrong_c_count(tmp_path):
    p = tmp_path / "bad.model"
    p.write_text("model bad\nzeta x p\nc 0\nH 0\n")
    with pytest.raises(ModelFormatError) as err:
        load_model(p)
    assert "2 entries" in str(err.value)


def test_load_reports_parse_position(tmp_path):
    p = tmp_path / "bad.model"
    p.write_text("model bad\nzeta x p\nc p 0\nH x + nope\n")
    with pytest.raises(ModelFormatError) as err:
        load_model(p)
    assert err.value.line == 4


def test_load_rejects_primary_in_second_order_form(tmp_path):
    p = tmp_path / "bad.model"
    p.write_text("model bad\nvars x\nL 1/2*xdot^2\nprimary x\n")
    with pytest.raises(ModelFormatError):
        load_model(p)


def test_model_invariants():
    zeta = VarTable(["q", "p"])
    q = Expression.variable(zeta, "q")
    p = Expression.variable(zeta, "p")
    zero = Expression.zero(zeta)
    vt1 = VarTable(["q"])
    q1 = Expression.variable(vt1, "q")
    with pytest.raises(ValueError):  # odd phase space
        FirstOrderModel("m", vt1, [q1], q1)
    with pytest.raises(ValueError):  # wrong c length
        FirstOrderModel("m", zeta, [p], zero)
    with pytest.raises(ValueError):  # zero primary
        FirstOrderModel("m", zeta, [p, zero], zero, [zero])
    with pytest.raises(ValueError):  # reserved names
        FirstOrderModel("m", VarTable(["q", "lam1"]), [q, zero], zero)
    # dependent primaries rejected
    zeta4 = VarTable(["q1", "q2", "p1", "p2"])
    p1 = Expression.variable(zeta4, "p1")
    zero4 = Expression.zero(zeta4)
    with pytest.raises(ValueError):
        FirstOrderModel(
            "m", zeta4, [p1, zero4, zero4, zero4], zero4, [p1, 2 * p1]
        )
