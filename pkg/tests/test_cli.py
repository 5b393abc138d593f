"""End-to-end tests of the command-line interface and its exit codes."""

import subprocess
import sys

import numpy as np
import pytest

from gamemac import load_mac_file, mac_from_game, magic_square_game
from gamemac.cli import main


@pytest.fixture
def run(capsys):
    def invoke(*argv):
        code = main(list(argv))
        out = capsys.readouterr()
        return code, out.out, out.err

    return invoke


def write_game(tmp_path, text, name="game.txt"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


class TestOmega:
    def test_magicsquare_builtin(self, run):
        code, out, _ = run("omega", "magicsquare")
        assert code == 0
        assert "omega_U = 8/9" in out

    def test_chsh_builtin(self, run):
        code, out, _ = run("omega", "chsh")
        assert code == 0
        assert "omega_U = 3/4" in out

    def test_all_win_toy_file(self, run, tmp_path):
        lines = ["game 2 2 1 1"] + [f"{a} {b} 0 0" for a in range(2) for b in range(2)]
        path = write_game(tmp_path, "\n".join(lines) + "\n")
        code, out, _ = run("omega", path)
        assert code == 0
        assert "omega_U = 1/1" in out or "omega_U = 1 " in out

    def test_parse_error_exits_2(self, run, tmp_path):
        path = write_game(tmp_path, "junk\n")
        code, _, err = run("omega", path)
        assert code == 2
        assert err

    def test_missing_file_exits_2(self, run):
        code, _, err = run("omega", "/nonexistent/game.txt")
        assert code == 2

    def test_budget_exceeded_exits_3(self, run):
        code, _, err = run("omega", "magicsquare", "--budget", "10")
        assert code == 3
        assert "4096" in err  # required pair count carried in the message


class TestQuantumVerify:
    def test_magicsquare_passes(self, run):
        code, out, _ = run("quantum-verify", "magicsquare")
        assert code == 0
        rows = [ln.split() for ln in out.strip().splitlines()]
        assert len(rows) == 3 and all(len(r) == 3 for r in rows)
        values = np.array(rows, dtype=float)
        assert (values >= 1 - 1e-9).all()
        assert "1.000000000" in out

    def test_swapped_bob_fails_with_exit_1(self, run):
        code, out, err = run("quantum-verify", "magicsquare", "--swap-bob", "0", "2")
        assert code == 1
        values = np.array(
            [ln.split() for ln in out.strip().splitlines()], dtype=float
        )
        assert values.min() < 1 - 1e-9

    def test_loose_tolerance_flag(self, run):
        code, _, _ = run("quantum-verify", "magicsquare", "--tolerance", "1e-6")
        assert code == 0

    def test_unknown_builtin_exits_2(self, run):
        code, _, err = run("quantum-verify", "nosuchgame")
        assert code == 2


class TestSumrateBound:
    def test_magicsquare_headline(self, run):
        code, out, _ = run("sumrate-bound", "magicsquare")
        assert code == 0
        fields = dict(tok.split("=") for tok in out.split())
        assert float(fields["delta*"]) == pytest.approx(0.03299, abs=1e-3)
        assert float(fields["eps*"]) == pytest.approx(0.01040, abs=1e-4)
        assert float(fields["bound"]) == pytest.approx(3.13694, abs=1e-4)

    def test_supplied_omega_on_chsh(self, run):
        code, out, _ = run("sumrate-bound", "chsh", "--omega", "3/4")
        assert code == 0
        fields = dict(tok.split("=") for tok in out.split())
        assert float(fields["bound"]) < 2.0

    def test_omega_one_exits_4(self, run):
        code, _, err = run("sumrate-bound", "magicsquare", "--omega", "1/1")
        assert code == 4

    def test_bad_omega_exits_2(self, run):
        code, _, _ = run("sumrate-bound", "magicsquare", "--omega", "5/4")
        assert code == 2

    def test_curve_export(self, run, tmp_path):
        path = tmp_path / "ub.dat"
        code, _, _ = run(
            "sumrate-bound", "magicsquare", "--omega", "8/9", "--curve", str(path)
        )
        assert code == 0
        lines = path.read_text().splitlines()
        assert lines[0] == "d u"
        assert len(lines) > 100


class TestRegion:
    def test_chsh_game_file_and_builtin_agree(self, run, tmp_path):
        code1, out1, _ = run("region", "chsh", "--restarts", "3", "--seed", "5")
        assert code1 == 0
        assert "best sum rate" in out1

    def test_all_lose_game_writes_origin(self, run, tmp_path):
        lines = ["game 2 2 2 2"]  # no winning tuples at all
        path = write_game(tmp_path, "\n".join(lines) + "\n")
        out_path = tmp_path / "cap.dat"
        code, out, _ = run(
            "region", path, "--restarts", "2", "--seed", "0", "--out", str(out_path)
        )
        assert code == 0
        assert out_path.read_text() == "r1 r2\n0.000000 0.000000\n"

    def test_fixed_seed_is_byte_deterministic(self, run, tmp_path):
        f1, f2 = tmp_path / "a.dat", tmp_path / "b.dat"
        code1, out1, _ = run(
            "region", "chsh", "--restarts", "3", "--seed", "9", "--out", str(f1)
        )
        code2, out2, _ = run(
            "region", "chsh", "--restarts", "3", "--seed", "9", "--out", str(f2),
            "--threads", "3",
        )
        assert code1 == code2 == 0
        assert out1 == out2
        assert f1.read_bytes() == f2.read_bytes()

    def test_mac_file_input(self, run, tmp_path):
        mac = mac_from_game(magic_square_game())
        from gamemac import write_mac_file

        path = tmp_path / "ms.mac"
        write_mac_file(path, mac)
        code, out, _ = run("region", str(path), "--restarts", "2", "--seed", "0")
        assert code == 0

    def test_bad_header_exits_2(self, run, tmp_path):
        path = write_game(tmp_path, "nonsense 1 2\n")
        code, _, _ = run("region", path, "--restarts", "1")
        assert code == 2


class TestMacExport:
    def test_magicsquare_dimensions_and_round_trip(self, run, tmp_path):
        path = tmp_path / "ms.mac"
        code, out, _ = run("mac-export", "magicsquare", "--out", str(path))
        assert code == 0
        lines = path.read_text().splitlines()
        assert lines[0] == "mac 12 12 9"
        assert len(lines) == 1 + 144
        assert all(len(ln.split()) == 9 for ln in lines[1:])
        again = load_mac_file(path)
        assert (again.p == mac_from_game(magic_square_game()).p).all()

    def test_all_win_rows_are_point_masses(self, run, tmp_path):
        game_path = write_game(
            tmp_path,
            "game 2 2 1 1\n" + "\n".join(f"{a} {b} 0 0" for a in range(2) for b in range(2)) + "\n",
        )
        out_path = tmp_path / "toy.mac"
        code, _, _ = run("mac-export", game_path, "--out", out_path.as_posix())
        assert code == 0
        mac = load_mac_file(out_path)
        assert (mac.p.max(axis=2) == 1.0).all()

    def test_unwritable_path_exits_5(self, run):
        code, _, err = run("mac-export", "chsh", "--out", "/nonexistent/dir/x.mac")
        assert code == 5


class TestLsgRates:
    def test_perfect_strategy_rates(self, run):
        code, out, _ = run(
            "lsg-rates", "--m", "8", "--n", "8", "--pl", "0", "--fd", "0"
        )
        assert code == 0
        assert "R1 = 3.000000" in out
        assert "R2 = 3.000000" in out

    def test_derived_value(self, run):
        import math

        from gamemac import binary_entropy

        code, out, _ = run(
            "lsg-rates", "--m", "2", "--n", "2", "--pl", "0.1", "--fd", "0"
        )
        assert code == 0
        expected = 0.9 - 0.05 * math.log2(3) - binary_entropy(0.1)
        r1 = float(out.splitlines()[0].split("=")[1])
        assert r1 == pytest.approx(expected, abs=1e-6)

    def test_domain_error_exits_2(self, run):
        code, _, err = run("lsg-rates", "--m", "2", "--n", "2", "--pl", "1.5",
                           "--fd", "0")
        assert code == 2


class TestConsoleEntry:
    def test_module_invocation(self):
        proc = subprocess.run(
            [sys.executable, "-m", "gamemac", "omega", "chsh"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert "omega_U = 3/4" in proc.stdout

    def test_env_var_thread_default(self):
        proc = subprocess.run(
            [sys.executable, "-m", "gamemac", "omega", "chsh"],
            capture_output=True,
            text=True,
            env={"PATH": "/usr/bin:/bin", "GAMEMAC_THREADS": "2"},
        )
        assert proc.returncode == 0
