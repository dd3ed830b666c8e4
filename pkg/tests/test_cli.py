from edotsp.cli import main
from edotsp.instance import unit_graph
from edotsp.mip import assignment_text, build_mip
from edotsp.tour import Tour


def test_run_prints_summary(tmp_path, capsys):
    code = main(["run", "--unit-graph", "10", "--mu", "4", "--k", "2", "--seeds", "0-1",
                 "--budget", "2000", "--out-dir", str(tmp_path)])
    assert code == 0
    out = capsys.readouterr().out
    assert out.startswith("# edotsp summary v1")
    assert (tmp_path / "edges").is_dir()


def test_constrained_without_optimum_fails(tmp_path, capsys):
    tsp = tmp_path / "t.tsp"
    tsp.write_text("NAME: t\nDIMENSION: 4\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n"
                   "1 0 0\n2 1 0\n3 1 1\n4 0 1\nEOF\n")
    assert main(["run", "--instance", str(tsp), "--mu", "2", "--alpha", "0.1"]) == 2
    assert "optimal tour" in capsys.readouterr().err


def test_mip_emit_and_ingest(tmp_path, capsys):
    lp = tmp_path / "m.lp"
    assert main(["run", "--unit-graph", "5", "--mu", "2", "--k", "2", "--emit-mip", str(lp)]) == 0
    assert lp.read_text().startswith("\\")
    g = unit_graph(5)
    sol = tmp_path / "sol.txt"
    m = build_mip(g, 2, 2)
    sol.write_text(assignment_text(m, [Tour.from_perm(range(5), g)] * 2))
    assert main(["run", "--unit-graph", "5", "--mu", "2", "--k", "2", "--ingest-solution", str(sol)]) == 0
    assert "C=2" in capsys.readouterr().out


def test_oracle_and_verify(capsys):
    assert main(["run", "--unit-graph", "5", "--mu", "2", "--k", "2", "--oracle"]) == 0
    assert "best_H=2.995732" in capsys.readouterr().out
    assert main(["verify", "--trials", "200"]) == 0
    out = capsys.readouterr().out
    assert "golden bounds: PASS" in out and "oracle agreement: PASS" in out


def test_sweep(tmp_path, capsys):
    spec = tmp_path / "s.txt"
    spec.write_text("unit_graph = 6\nmu = 2\nk = 2,3\nseeds = 0\nbudget = 500\n")
    assert main(["sweep", str(spec), "--out-dir", str(tmp_path / "o")]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 4
