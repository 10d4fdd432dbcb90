import json

import pytest

from dofnet.cli import main
from dofnet.serialize import decode, loads


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_region_siso_x_published_rows(capsys):
    code, out, _ = run(capsys, "region", "--antennas", "1,1,1,1", "--messages", "X",
                       "--form", "published")
    assert code == 0
    assert "rhs 1,1,1,1,1,1,1,1" in out
    assert "inequalities: 8" in out


def test_region_siso_x_raw_includes_coop_row(capsys):
    code, out, _ = run(capsys, "region", "--antennas", "1,1,1,1", "--messages", "X", "--form", "raw")
    assert code == 0 and "inequalities: 9" in out and "[coop]" in out


def test_region_bc_pcr_published_has_four_rows(capsys):
    code, out, _ = run(capsys, "region", "--antennas", "3,2,2,2", "--messages", "BC-PCR",
                       "--form", "published")
    assert code == 0 and "inequalities: 4" in out
    code, out, _ = run(capsys, "region", "--antennas", "3,2,2,2", "--messages", "BC-PCR")
    assert "inequalities: 3" in out


def test_region_published_needs_name(capsys):
    code, _, err = run(capsys, "region", "--antennas", "1,1,1,1", "--messages", "11,22",
                       "--form", "published")
    assert code == 1 and "published" in err


@pytest.mark.parametrize("ant", ["1,1,1", "0,1,1,1", "a,b,c,d", "1.5,1,1,1"])
def test_invalid_antennas_is_usage_error(capsys, ant):
    code, _, err = run(capsys, "region", "--antennas", ant)
    assert code == 1 and "error" in err


@pytest.mark.parametrize("argv", [
    ["region"],
    ["region", "--antennas", "1,1,1,1", "--messages", "d33"],
    ["region", "--antennas", "1,1,1,1", "--trials", "0"],
    ["region", "--antennas", "1,1,1,1", "--rtol", "0.5"],
    ["region", "--antennas", "1,1,1,1", "--rtol", "0"],
    ["check", "--antennas", "1,1,1,1", "--messages", "X", "--dof", "1/0,0,0,0"],
    ["check", "--antennas", "1,1,1,1", "--messages", "X", "--dof", "1,0"],
    ["check", "--antennas", "1,1,1,1", "--messages", "X", "--dof", "d0=1"],
    ["vertices", "--messages", "X", "--sweep", "0"],
    ["demo-acs", "--antennas", "1,1,1,1", "--T", "0"],
])
def test_usage_errors_exit_one(capsys, argv):
    assert run(capsys, *argv)[0] == 1


def test_argparse_errors_exit_one(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["region", "--format", "xml"])
    assert exc.value.code == 1


def test_vertices_siso_x(capsys):
    code, out, _ = run(capsys, "vertices", "--antennas", "1,1,1,1", "--messages", "X")
    assert code == 0
    assert "1/3,1/3,1/3,1/3" in out
    assert "max denominator: 3" in out


def test_vertices_ic_three(capsys):
    code, out, _ = run(capsys, "vertices", "--antennas", "2,2,2,2", "--messages", "IC")
    assert "vertices: 3 " in out


def test_vertices_sweep_three_message_x(capsys):
    code, out, _ = run(capsys, "vertices", "--messages", "three-message-X", "--sweep", "3")
    assert code == 0 and "max denominator: 1" in out


def test_vertices_csv(capsys):
    code, out, _ = run(capsys, "vertices", "--antennas", "1,1,1,1", "--messages", "X",
                       "--format", "csv")
    lines = out.strip().splitlines()
    assert lines[0] == "d11,d21,d12,d22,denominator"
    assert "1/3,1/3,1/3,1/3,3" in lines


def test_check_in_with_witness(capsys):
    code, out, _ = run(capsys, "check", "--antennas", "3,3,3,3", "--messages", "X",
                       "--dof", "1,1,1,1")
    assert code == 0
    assert "outer region: in" in out and "achievable region: in" in out
    assert "A1=1" in out and "A2=1" in out


def test_check_out_names_inequality(capsys):
    code, out, _ = run(capsys, "check", "--antennas", "1,1,1,1", "--messages", "X",
                       "--dof", "1,1,1,1")
    assert code == 0
    assert "outer region: out" in out and "achievable region: out" in out
    assert "[rx1-tx1]" in out


def test_check_zero_and_keyed_dof(capsys):
    assert run(capsys, "check", "--antennas", "2,1,1,2", "--dof", "0,0,0,0,0,0,0,0,0")[0] == 0
    code, out, _ = run(capsys, "check", "--antennas", "1,1,1,1", "--dof", "d11=1/3,d0=1/3",
                       "--format", "json")
    doc = json.loads(out)
    assert doc["outer"] is True and doc["achievable"] is True


def test_check_explicit_list_uses_listed_order(capsys):
    code, out, _ = run(capsys, "check", "--antennas", "1,1,2,1", "--messages", "22,11",
                       "--dof", "0,2", "--format", "json")
    doc = json.loads(out)
    assert decode(doc["tuple"])["11"] == 2


def test_plan_verify_siso_acs(capsys):
    code, out, _ = run(capsys, "plan-verify", "--antennas", "1,1,1,1", "--messages", "X",
                       "--dof", "1/3,1/3,1/3,1/3")
    assert code == 0
    assert "T=3 ACS=yes" in out and "100/100 pass" in out


def test_plan_verify_integer(capsys):
    code, out, _ = run(capsys, "plan-verify", "--antennas", "3,3,3,3", "--messages", "X",
                       "--dof", "1,1,1,1")
    assert code == 0
    assert "T=1 ACS=no" in out and "100/100 pass" in out


def test_plan_verify_no_acs_fails(capsys):
    code, out, _ = run(capsys, "plan-verify", "--antennas", "1,1,1,1", "--messages", "X",
                       "--dof", "1/3,1/3,1/3,1/3", "--no-acs", "--trials", "10")
    assert code == 2
    assert "0/10 pass" in out and "failures:" in out


def test_plan_verify_rejects_outside(capsys):
    code, _, err = run(capsys, "plan-verify", "--antennas", "1,1,1,1", "--messages", "X",
                       "--dof", "1,1,1,1")
    assert code == 1 and "rx1-tx1" in err


def test_plan_verify_dump_and_output(capsys, tmp_path):
    dump, outp = tmp_path / "trial.json", tmp_path / "out.json"
    code, out, _ = run(capsys, "plan-verify", "--antennas", "1,1,1,1", "--messages", "X",
                       "--dof", "1/3,1/3,1/3,1/3", "--trials", "3", "--format", "json",
                       "--output", str(outp), "--dump", str(dump))
    assert code == 0 and out == ""
    doc = json.loads(outp.read_text())
    summary = decode(doc["summary"])
    assert summary.passes == 3
    ch, bf, rep = loads(dump.read_text())
    assert ch.form == "acs_extended" and rep.ok


def test_commands_are_deterministic(capsys):
    argv = ["plan-verify", "--antennas", "2,2,2,2", "--messages", "X",
            "--dof", "1/2,1/2,1/2,1/2", "--trials", "5", "--seed", "9", "--format", "json"]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_demo_acs_siso(capsys):
    code, out, _ = run(capsys, "demo-acs", "--antennas", "1,1,1,1", "--trials", "5")
    assert code == 0
    assert "containment and deficit >= 1 in 5/5" in out
    assert "all ranks full in 5/5" in out


def test_demo_acs_second_config(capsys, tmp_path):
    dump = tmp_path / "collapse.json"
    code, out, _ = run(capsys, "demo-acs", "--antennas", "1,3,2,2", "--trials", "3",
                       "--dump", str(dump))
    assert code == 0 and "in 3/3" in out
    assert loads(dump.read_text()).side == "2"


def test_demo_acs_not_required(capsys):
    code, out, _ = run(capsys, "demo-acs", "--antennas", "2,2,3,3")
    assert code == 1
    assert "ACS not required for this configuration" in out


def test_catalog_check(capsys):
    code, out, _ = run(capsys, "catalog-check", "--symmetric-max", "3", "--sweep-max", "2")
    assert code == 0 and "discrepancies: 0" in out


def test_sumdof(capsys):
    code, out, _ = run(capsys, "sumdof", "--antennas", "2,2,2,2", "--messages", "X")
    assert code == 0
    assert ": 8/3" in out and "agrees" in out
    code, out, _ = run(capsys, "sumdof", "--antennas", "2,2,2,2", "--messages", "cognitive-X",
                       "--format", "csv")
    assert out.splitlines()[1] == "3,3"


def test_region_json_roundtrips(capsys):
    code, out, _ = run(capsys, "region", "--antennas", "2,3,1,2", "--format", "json")
    poly = decode(json.loads(out))
    assert len(poly.inequalities) > 0 and poly.cfg.as_tuple() == (2, 3, 1, 2)
