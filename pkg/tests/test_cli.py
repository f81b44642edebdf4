"""The command-line interface: subcommands, exit codes, output shapes."""

from stagkit.cli import main
from stagkit.grammar_io import load_tag


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestTransduce:
    def test_ambiguous_sentence(self, capsys):
        code, out, _ = run(
            capsys, "transduce", "-g", "blink.stag", "John intentionally blinked twice"
        )
        assert code == 0
        assert out.splitlines() == [
            "int(twice(blink(john)))",
            "twice(int(blink(john)))",
        ]

    def test_simple(self, capsys):
        code, out, _ = run(capsys, "transduce", "-g", "blink.stag", "John blinked")
        assert code == 0 and out.splitlines() == ["blink(john)"]

    def test_empty_result_exits_one(self, capsys):
        code, out, _ = run(capsys, "transduce", "-g", "blink.stag", "blinked John")
        assert code == 1 and out == ""


class TestParse:
    def test_counts_and_derivations(self, capsys):
        code, out, _ = run(
            capsys, "parse", "-g", "blink.stag", "John intentionally blinked twice"
        )
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "derivations: 1"
        assert "blink(" in lines[1]

    def test_empty_input_exits_one(self, capsys):
        code, out, _ = run(capsys, "parse", "-g", "blink.stag", "")
        assert code == 1
        assert out.splitlines()[0] == "derivations: 0"

    def test_std_vs_multi(self, capsys):
        multi = run(capsys, "parse", "-g", "blink.stag", "John blinked twice twice")
        std = run(
            capsys, "parse", "-g", "blink.stag", "-m", "std", "John blinked twice twice"
        )
        n_multi = int(multi[1].splitlines()[0].split()[-1])
        n_std = int(std[1].splitlines()[0].split()[-1])
        assert n_multi > n_std >= 1

    def test_parse_tag_document(self, capsys, tmp_path):
        path = tmp_path / "mono.tag"
        path.write_text("tag mono\ntree a (A x)\n", "utf-8")
        code, out, _ = run(capsys, "parse", "-g", str(path), "x")
        assert code == 0 and out.splitlines()[0] == "derivations: 1"


class TestEnumerate:
    def test_eight_natural_single_empty_pair(self, capsys):
        code, out, _ = run(
            capsys, "enumerate", "-g", "eight.stag", "--mode", "natural", "--bound", "10"
        )
        assert code == 0
        assert out.splitlines() == [" ||| "]

    def test_eight_rewriting(self, capsys):
        code, out, _ = run(
            capsys, "enumerate", "-g", "eight.stag", "--mode", "rewriting", "--bound", "4"
        )
        assert code == 0
        assert out.splitlines() == [
            " ||| ",
            "aabbccddeeffgghh ||| ",
            "abcdefgh ||| ",
        ]

    def test_blink_natural(self, capsys):
        code, out, _ = run(
            capsys, "enumerate", "-g", "blink.stag", "--mode", "natural", "--bound", "4"
        )
        assert code == 0
        lines = out.splitlines()
        assert "John intentionally blinked twice ||| int(twice(blink(john)))" in lines
        assert "John intentionally blinked twice ||| twice(int(blink(john)))" in lines


class TestRewrite:
    def test_plain(self, capsys):
        code, out, _ = run(capsys, "rewrite", "-g", "eight.stag", "--max-steps", "2")
        assert code == 0
        assert out.splitlines() == [" ||| ", "abcdefgh ||| "]

    def test_trace(self, capsys):
        code, out, _ = run(
            capsys, "rewrite", "-g", "eight.stag", "--max-steps", "2", "--trace"
        )
        assert code == 0
        assert "step 1: b1" in out and "step 2: b2" in out


class TestProject:
    def test_emits_loadable_tag_document(self, capsys):
        code, out, _ = run(capsys, "project", "-g", "eight.stag", "--side", "left")
        assert code == 0
        name, trees = load_tag(out)
        assert name == "eight.left"
        assert {t.name for t in trees} == {"a0", "b1", "b2"}

    def test_projected_language_matches_enumeration(self, capsys, tmp_path, blink):
        """Reloading the projected grammar and parsing reproduces the left
        strings of the bounded enumeration."""
        from stagkit.parsing import parse
        from stagkit.sync import enumerate_natural

        code, out, _ = run(capsys, "project", "-g", "blink.stag", "--side", "left")
        assert code == 0
        _, trees = load_tag(out)
        tmap = {t.name: t for t in trees}
        for left, _right in enumerate_natural(blink, 4):
            assert not parse(tmap, left.split()).is_empty, left


class TestToMctag:
    def test_emits_document(self, capsys):
        code, out, _ = run(capsys, "to-mctag", "-g", "blink.stag")
        assert code == 0
        assert out.startswith("mctag blink")
        assert "set blink" in out and "start (" in out


class TestRender:
    def test_pair(self, capsys):
        code, out, _ = run(capsys, "render", "-g", "blink.stag", "--what", "pair:blink")
        assert code == 0 and "links:" in out

    def test_pair_dot(self, capsys):
        code, out, _ = run(
            capsys, "render", "-g", "blink.stag", "--what", "pair:blink", "--dot"
        )
        assert code == 0 and out.startswith("digraph")

    def test_derivation_and_derived(self, capsys):
        code, out, _ = run(
            capsys, "render", "-g", "blink.stag", "--what", "derivation:John blinked"
        )
        assert code == 0 and "john" in out
        code, out, _ = run(
            capsys, "render", "-g", "blink.stag", "--what", "derived:John blinked"
        )
        assert code == 0 and "John" in out

    def test_unparseable_render_exits_one(self, capsys):
        code, _, err = run(
            capsys, "render", "-g", "blink.stag", "--what", "derivation:blinked John"
        )
        assert code == 1 and "no derivation" in err


class TestErrors:
    def test_usage_error_exits_two(self, capsys):
        assert run(capsys, "parse")[0] == 2
        assert run(capsys, "nonsense")[0] == 2

    def test_missing_grammar_exits_two(self, capsys):
        code, _, err = run(capsys, "parse", "-g", "missing.stag", "x")
        assert code == 2 and "missing.stag" in err

    def test_load_error_exits_two(self, capsys, tmp_path):
        path = tmp_path / "broken.stag"
        path.write_text("grammar g\npair p\n  left (A #1 x)\n  right (B y)\n", "utf-8")
        code, _, err = run(capsys, "transduce", "-g", str(path), "x")
        assert code == 2 and "error" in err

    def test_sync_command_rejects_tag_document(self, capsys, tmp_path):
        path = tmp_path / "mono.tag"
        path.write_text("tag mono\ntree a (A x)\n", "utf-8")
        code, _, err = run(capsys, "transduce", "-g", str(path), "x")
        assert code == 2
