import json
import math
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from growthlab import cli, descriptors, funcat, points
from growthlab.errors import ParseError
from growthlab.report import FIXED_COLUMNS, GrowthReport


def run_cli(*argv, env=None, capsys=None):
    code = cli.main(list(argv))
    return code


@pytest.fixture
def epoch(monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "1700000000")


# --- descriptors -------------------------------------------------------------


@pytest.mark.parametrize(
    "text,kind",
    [
        ("exp", funcat.ExpPoly),
        ("sin:pi", funcat.Sine),
        ("sinc:2", funcat.Sinc),
        ("poly:1,0,-1", funcat.Polynomial),
        ("roots:1,2j", funcat.ZeroForm),
        ("ml:0.75", funcat.MittagLeffler),
        ("ml:0.5,2", funcat.MittagLeffler),
        ("rgamma", funcat.ReciprocalGamma),
        ("prod:exp*poly:1,1", funcat.Product),
        ("quot:poly:1,-1|poly:1,2", funcat.Quotient),
        ("catalog:sinc_pi", funcat.Sinc),
        ("const:2", funcat.Polynomial),
    ],
)
def test_descriptor_heads(text, kind):
    assert isinstance(descriptors.parse(text), kind)


@pytest.mark.parametrize("bad", ["", "nope", "poly:", "poly:1,x", "ml:1,2,3", "quot:exp", "exp:3", "catalog:zzz", "sin:1+"])
def test_descriptor_errors(bad):
    with pytest.raises(ParseError):
        descriptors.parse(bad)


def test_parse_number_pi():
    assert descriptors.parse_number("-pi") == -math.pi
    assert descriptors.parse_number("2*pi") == 2 * math.pi


def test_zeros_descriptor(tmp_path):
    path = tmp_path / "z.csv"
    path.write_text("re,im,multiplicity\n1,0,1\n-1,0,1\n")
    f = descriptors.parse(f"zeros:{path},q=1")
    assert f.genus == 1 and f.zero_set.total == 2
    assert descriptors.parse(f"zeros:{path},p=2.5").genus == 2
    with pytest.raises(ParseError):
        descriptors.parse(f"zeros:{path}")


# --- report ---------------------------------------------------------------------


def test_csv_schema_and_missing_values():
    rep = GrowthReport("exp", [1.0, 2.0], {"lnM": [1.0, 2.0], "C": [0.0, -0.0], "T": [np.nan, 0.5], "extra": [3, 4]})
    text = rep.to_csv()
    lines = text.splitlines()
    assert lines[0] == "r," + ",".join(FIXED_COLUMNS) + ",extra"
    assert lines[1] == "1,1,0,,,,,3"
    assert "nan" not in text.lower() and "-0" not in text
    back = GrowthReport.from_csv(text)
    assert back.column("lnM").tolist() == [1.0, 2.0]
    assert back.columns["B"] is None


def test_json_round_trip():
    rep = GrowthReport("exp", [0.5, 1.0], {"C": [0.1, np.inf]}, {"k": 1})
    data = json.loads(rep.to_json())
    assert data["schema_version"] == 1
    assert data["columns"]["C"] == [0.1, None]
    again = GrowthReport.from_dict(data)
    assert again.to_json() == rep.to_json()
    with pytest.raises(ValueError):
        GrowthReport("x", [1.0], {"C": [1.0, 2.0]})


def test_zero_csv_round_trip_idempotent(tmp_path):
    raw = "re,im,multiplicity\n2,0,1\n1,0,1\n1,0,2\n0,3,1\n"
    once = points.write_csv(points.read_csv(raw))
    assert points.write_csv(points.read_csv(once)) == once
    assert once.splitlines()[1] == "1.0,0.0,3"


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=1, max_size=8))
def test_csv_values_round_trip_exactly(vals):
    radii = np.arange(1, len(vals) + 1, dtype=float)
    rep = GrowthReport("x", radii, {"C": vals})
    back = GrowthReport.from_csv(rep.to_csv())
    assert back.column("C").tolist() == [v + 0.0 for v in vals]


# --- config ---------------------------------------------------------------------


def test_config_precedence(tmp_path, monkeypatch):
    cfgfile = tmp_path / "c.json"
    cfgfile.write_text(json.dumps({"grid": "0.5:5:4", "p": "3", "threads": 2}))
    monkeypatch.setenv(cli.THREADS_ENV, "7")
    args = cli.build_parser().parse_args(["characteristics", "exp", "--config", str(cfgfile), "--p", "2"])
    cfg = cli.effective_config(args)
    assert (cfg.r_min, cfg.r_max, cfg.per_decade) == (0.5, 5.0, 4)
    assert cfg.p == "2"  # flag beats file
    assert cfg.threads == 2  # file beats env
    args = cli.build_parser().parse_args(["characteristics", "exp"])
    assert cli.effective_config(args).threads == 7


def test_config_validation(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"colour": "red"}))
    with pytest.raises(ParseError):
        cli.load_config(str(bad))
    with pytest.raises(ParseError):
        cli.parse_grid("1")
    with pytest.raises(ParseError):
        cli.parse_p_policy("0.5")
    assert cli.parse_p_policy("optimal:2") == ("optimal", 2.0)
    with pytest.raises(ParseError):
        cli.RunConfig(r_min=0.0).validate()


# --- commands -------------------------------------------------------------------


def test_characteristics_exp(tmp_path, epoch):
    out = tmp_path / "exp.json"
    assert cli.main(["characteristics", "exp", "--grid", "1:10:1", "--format", "json", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["radii"] == [1.0, 10.0]
    assert data["columns"]["lnM"] == pytest.approx([1.0, 10.0], rel=1e-12)
    assert data["columns"]["C"] == pytest.approx([0.0, 0.0], abs=1e-12)
    assert data["columns"]["T"] == pytest.approx([1 / math.pi, 10 / math.pi], rel=1e-6)
    assert data["metadata"]["chain_ok"] is True
    assert data["metadata"]["timestamp"] == "2023-11-14T22:13:20Z"
    assert "threads" not in data["metadata"]["config"]


def test_characteristics_polynomial_and_quotient():
    cfg = cli.RunConfig(r_min=2.0, r_max=2.0)
    rep = cli.cmd_characteristics("poly:1,0,-1", cfg)
    assert rep.column("lnM")[0] == pytest.approx(math.log(5.0), rel=1e-12)
    rep = cli.cmd_characteristics("quot:poly:1,-1|poly:1,2", cli.RunConfig(r_min=1.5, r_max=1.5))
    assert rep.columns["lnM"] is None
    # T(F) - T(1/F) = ln|F(0)| = -ln 2
    inv = cli.cmd_characteristics("quot:poly:1,2|poly:1,-1", cli.RunConfig(r_min=1.5, r_max=1.5))
    assert rep.column("T")[0] - inv.column("T")[0] == pytest.approx(-math.log(2.0), abs=1e-6)


def test_determinism_across_threads(tmp_path, epoch):
    outs = []
    for n in ("1", "4"):
        out = tmp_path / f"t{n}.csv"
        assert cli.main(["characteristics", "sinc:pi", "--grid", "0.5:5:4", "--threads", n, "--out", str(out)]) == 0
        outs.append(out.read_bytes())
        out = tmp_path / f"t{n}.json"
        assert cli.main(["characteristics", "sinc:pi", "--grid", "0.5:5:4", "--threads", n, "--format", "json", "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[2] and outs[1] == outs[3]


def test_paley_table():
    text = cli.cmd_paley_table([1.0, 0.5, 0.25], cli.RunConfig())
    rows = [line.split(",") for line in text.splitlines()]
    assert rows[0] == ["rho", "P", "p", "P_quadrature", "rel_err"]
    assert float(rows[1][1]) == pytest.approx(math.pi) and float(rows[1][2]) == 2.0
    assert float(rows[2][1]) == pytest.approx(math.pi / 2) and float(rows[2][2]) == 1.0
    assert float(rows[3][1]) == pytest.approx(1.110721, abs=1e-6)


def test_bound_from_zero_file(tmp_path):
    path = tmp_path / "one.csv"
    path.write_text("re,im,multiplicity\n1,0,1\n")
    rep = cli.cmd_bound(cli.RunConfig(r_min=0.1, r_max=10.0, per_decade=4, p="1"), zeros=str(path))
    b = rep.column("bound_ln")
    assert np.all(np.diff(b) > 0)
    assert np.allclose(b, np.log1p(rep.radii), rtol=1e-12)
    assert rep.metadata["margin_ok"]


def test_bound_from_exp_function_is_zero():
    rep = cli.cmd_bound(cli.RunConfig(r_min=0.5, r_max=5.0, per_decade=2, p="2"), function="exp")
    assert np.allclose(rep.column("bound_ln"), 0.0, atol=1e-9)


def test_bound_from_characteristic_of_exp():
    rep = cli.cmd_bound(cli.RunConfig(r_min=1.0, r_max=10.0, per_decade=2, p="2"), t_of="exp")
    assert np.allclose(rep.column("bound_ln"), rep.radii, rtol=5e-4)


def test_bound_rejects_divergent_p():
    with pytest.raises(Exception) as exc:
        cli.cmd_bound(cli.RunConfig(r_min=1.0, r_max=10.0, per_decade=2, p="1"), function="sinc:pi")
    assert "p" in str(exc.value)


def test_product_family_report():
    rep = cli.cmd_product(cli.RunConfig(r_min=0.5, r_max=5.0, per_decade=2, p="2"), family="integers", cutoff=100.0)
    assert np.all(np.abs(rep.column("jensen_residual")) <= 1e-6)
    assert np.all(rep.column("lower_margin") >= -1e-6)
    assert rep.metadata["genus"] == 1


def test_jensen_command():
    rep = cli.cmd_jensen("roots:1,2j", cli.RunConfig(r_min=0.5, r_max=3.0, per_decade=4))
    assert np.all(np.abs(rep.column("jensen_residual")) <= 1e-6)


def test_errors_exit_2(capsys):
    assert cli.main(["characteristics", "bogus"]) == 2
    assert "error" in capsys.readouterr().err


def test_verify_paley_exit_codes(tmp_path, monkeypatch):
    out = tmp_path / "v.json"
    assert cli.main(["verify", "paley", "--out", str(out)]) == 0
    summary = json.loads(out.read_text())
    assert summary["passed"] and summary["first_failure"] is None
    from growthlab import verify

    def broken():
        return [verify.Check("always wrong", False, 1.0, 0.0)]

    monkeypatch.setitem(verify.SUITES, "paley", broken)
    assert cli.main(["verify", "paley", "--out", str(out)]) == 1
    assert json.loads(out.read_text())["first_failure"] == "paley: always wrong"


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "growthlab", "paley-table", "1"], capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.splitlines()[1].startswith("1,3.14159265358979")
