"""
Tests for the verification management commands
"""

import tempfile
from io import StringIO
from pathlib import Path

from django.conf import settings
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase


def fixture(name):
    return str(Path(settings.DERHAM_FIXTURE_DIR) / f"{name}.json")


class VerificationCommandTests(SimpleTestCase):
    """Exit codes and console output"""

    def call(self, command, **options):
        out = StringIO()
        options.setdefault("degree", 1)
        options.setdefault("samples", 0)
        call_command(command, stdout=out, **options)
        return out.getvalue()

    def test_verify_success(self):
        """A passing run prints the success line"""
        output = self.call("verify", geometry=fixture("two_segments"))
        self.assertIn("checks passed", output)

    def test_failed_checks_exit_one(self):
        """Failures raise CommandError with return code 1"""
        with self.assertRaises(CommandError) as ctx:
            self.call("verify", geometry=fixture("missing_label"))
        self.assertEqual(ctx.exception.returncode, 1)

    def test_load_error_exits_two(self):
        """Unreadable geometry raises with return code 2"""
        with self.assertRaises(CommandError) as ctx:
            self.call("verify", geometry=fixture("malformed"))
        self.assertEqual(ctx.exception.returncode, 2)

    def test_bad_epsilon_exits_two(self):
        """Option errors use the load-error code"""
        with self.assertRaises(CommandError) as ctx:
            self.call("bounds", geometry=fixture("two_segments"), epsilon="0.25")
        self.assertEqual(ctx.exception.returncode, 2)

    def test_betti_summary(self):
        """betti prints each Betti tuple"""
        output = self.call("betti", geometry=fixture("three_triangles"))
        self.assertIn("betti.simplicial: (1, 0, 0)", output)
        self.assertIn("betti.nerve: (1, 0, 0)", output)

    def test_bounds_summary(self):
        """bounds prints the constants"""
        output = self.call("bounds", geometry=fixture("two_segments"), epsilon="1/4", samples=3)
        self.assertIn("16/3", output)
        self.assertIn("2/1", output)

    def test_render_writes_file(self):
        """render honours --svg"""
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp, "out.svg")
            self.call("render", geometry=fixture("three_triangles"), svg=str(path))
            self.assertIn('class="piece level-3"', path.read_text())
