import csv
import io
import json
import math
import tempfile
from pathlib import Path
from unittest.mock import patch

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings

from dppcount import settings as project_settings
from spectra.exceptions import InvalidArgument, NonContractiveOperator

from reports.forms import RunConfigForm
from reports.registry import parse_interval, parse_real_list, resolve_kernel
from reports.templatetags.report_extras import sigfig, signed
from reports.writers import render_csv, sig


def run(command, *args, **options):
    """Call a management command and return (stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    call_command(command, *args, stdout=out, stderr=err, **options)
    return out.getvalue(), err.getvalue()


def read_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


class RegistryTests(SimpleTestCase):
    def test_parse_interval(self):
        self.assertEqual(parse_interval("-5:12"), (-5.0, 12.0))
        self.assertEqual(parse_interval("-5:inf"), (-5.0, math.inf))
        for text in ("5", "5:1", "a:b", "1:2:3", "nan:1"):
            with self.assertRaises(InvalidArgument):
                parse_interval(text)

    def test_parse_real_list(self):
        self.assertEqual(parse_real_list("10,40,160"), [10.0, 40.0, 160.0])
        self.assertEqual(parse_real_list("10,"), [10.0])
        for text in ("", ",", "10,-1", "10,x"):
            with self.assertRaises(InvalidArgument):
                parse_real_list(text)

    def test_resolve_kernel(self):
        self.assertEqual(resolve_kernel("sine")[0].name, "sine")
        self.assertEqual(resolve_kernel("sine-minus")[0].name, "sine-minus")
        self.assertEqual(resolve_kernel("ginibre-disk")[1], "disk")
        self.assertEqual(resolve_kernel("airy-conditioned:2")[0].name, "airy|-2")
        self.assertEqual(resolve_kernel("sine-conditioned:0,3")[0].name, "sine|0|3")
        for identifier in ("cosine", "airy:1", "sine-conditioned:", "sine-conditioned:0,1,2"):
            with self.assertRaises(InvalidArgument):
                resolve_kernel(identifier)


class RunConfigFormTests(SimpleTestCase):
    def test_count_with_ensemble(self):
        form = RunConfigForm("count", data={"ensemble": "gue-bulk", "s": "10"})
        self.assertTrue(form.is_valid(), form.errors)
        config = form.to_config()
        self.assertEqual(config.s, 10.0)
        self.assertEqual(config.truncation, 12.0)
        self.assertEqual(config.output_format, "csv")
        self.assertIsNone(config.order)

    def test_count_needs_exactly_one_target(self):
        form = RunConfigForm("count", data={"s": "10"})
        self.assertFalse(form.is_valid())
        self.assertIn("exactly one", form.error_text())
        form = RunConfigForm("count", data={"kernel": "sine", "ensemble": "gue-bulk", "interval": "0:1"})
        self.assertFalse(form.is_valid())

    def test_count_rejects_negative_k(self):
        form = RunConfigForm("count", data={"ensemble": "gue-bulk", "s": "10", "k": "-1"})
        self.assertFalse(form.is_valid())
        self.assertIn("--k:", form.error_text())

    def test_order_bounds(self):
        for order in ("10", "2001"):
            form = RunConfigForm("eigs", data={"kernel": "sine", "interval": "0:1", "order": order})
            self.assertFalse(form.is_valid())

    def test_ginibre_needs_radius(self):
        form = RunConfigForm("eigs", data={"kernel": "ginibre-disk"})
        self.assertFalse(form.is_valid())
        self.assertIn("--radius", form.error_text())

    def test_spacing_range(self):
        form = RunConfigForm("spacing", data={"ensemble": "spacing-bulk", "k": "0", "smax": "6"})
        self.assertTrue(form.is_valid(), form.errors)
        config = form.to_config()
        self.assertEqual(config.srange, (0.0, 6.0))
        self.assertEqual(config.step, 0.02)
        form = RunConfigForm("spacing", data={"ensemble": "spacing-bulk", "k": "0"})
        self.assertFalse(form.is_valid())

    @override_settings(DPPCOUNT={"TRUNCATION": 9.0, "LOG_CONCAVITY_FLOOR": 1e-12, "SPACING_STEP": 0.1, "WORKERS": 4})
    def test_defaults_come_from_settings(self):
        form = RunConfigForm("lclt", data={"ensemble": "gue-bulk", "s": "10,40"})
        self.assertTrue(form.is_valid(), form.errors)
        config = form.to_config()
        self.assertEqual(config.truncation, 9.0)
        self.assertEqual(config.workers, 4)
        self.assertEqual(config.s_values, (10.0, 40.0))

    def test_project_settings_carry_no_web_options(self):
        for name in ("DEBUG", "ALLOWED_HOSTS", "LANGUAGE_CODE", "TIME_ZONE", "USE_TZ"):
            self.assertFalse(hasattr(project_settings, name), name)
        self.assertEqual(
            set(project_settings.DPPCOUNT),
            {"TRUNCATION", "LOG_CONCAVITY_FLOOR", "SPACING_STEP", "WORKERS"},
        )

    def test_text_format_only_for_reproduce(self):
        form = RunConfigForm("count", data={"ensemble": "gue-bulk", "s": "10", "format": "text"})
        self.assertFalse(form.is_valid())
        form = RunConfigForm("reproduce", data={"table": "table1"})
        self.assertTrue(form.is_valid(), form.errors)
        self.assertEqual(form.to_config().output_format, "text")


class ReportExtrasTests(SimpleTestCase):
    def test_sigfig(self):
        self.assertEqual(sigfig(0.52021), "0.5202")
        self.assertEqual(sigfig(0.000149), "0.000149")
        self.assertEqual(sigfig(None), "")
        self.assertEqual(sigfig("n/a"), "n/a")

    def test_signed(self):
        self.assertEqual(signed(3.14e-5), "+3.1e-05")
        self.assertEqual(signed(-0.002), "-2.0e-03")

    def test_sig(self):
        self.assertEqual(sig(0.123456789), 0.123457)
        self.assertEqual(sig(0.0), 0.0)
        self.assertEqual(sig(math.inf), math.inf)
        self.assertIsNone(sig(None))

    def test_render_csv_uses_lf(self):
        text = render_csv(["a", "b"], [[1, None], [2, 0.5]])
        self.assertEqual(text, "a,b\n1,\n2,0.5\n")


class EigsCommandTests(SimpleTestCase):
    def test_sine_trace(self):
        out, err = run("eigs", kernel="sine", interval="0:10", order="60")
        header, rows = read_csv(out)
        self.assertEqual(header, ["l", "lambda", "mu_l", "zero"])
        self.assertEqual(len(rows), 60)
        self.assertAlmostEqual(sum(float(r[1]) for r in rows), 10.0, delta=1e-9)
        self.assertIn("trace", err)

    def test_ginibre_leading_eigenvalue(self):
        out, _ = run("eigs", kernel="ginibre-disk", radius="2", format="json")
        payload = json.loads(out)
        self.assertAlmostEqual(payload["lambdas"][0], 0.9816843611, delta=1e-10)
        self.assertAlmostEqual(payload["mu"], 4.0, delta=1e-10)

    def test_airy_spectrum_in_unit_interval(self):
        out, _ = run("eigs", kernel="airy", interval="-5:12", format="json")
        payload = json.loads(out)
        self.assertTrue(all(0.0 <= v <= 1.0 for v in payload["lambdas"]))
        self.assertEqual(payload["region"], {"a": -5.0, "b": 12.0})
        self.assertTrue(all(z < 0 for z in payload["zeros"] if z is not None))

    def test_unknown_kernel_is_a_usage_error(self):
        with self.assertRaises(CommandError) as ctx:
            run("eigs", kernel="cosine", interval="0:1")
        self.assertEqual(ctx.exception.returncode, 2)

    def test_numerical_failure_exit_code(self):
        failure = NonContractiveOperator("eigenvalue 1.2 outside [0, 1]", excursion=0.2)
        with patch("reports.management.commands.eigs.nystrom_spectrum", side_effect=failure):
            with self.assertRaises(CommandError) as ctx:
                run("eigs", kernel="sine", interval="0:10")
        self.assertEqual(ctx.exception.returncode, 1)
        self.assertIn("NonContractiveOperator", str(ctx.exception))


class CountCommandTests(SimpleTestCase):
    def test_bulk_gue_row(self):
        out, err = run("count", ensemble="gue-bulk", s="10", format="json")
        payload = json.loads(out)
        self.assertAlmostEqual(payload["E"][10], 0.5202, delta=5e-4)
        self.assertAlmostEqual(payload["mu"], 10.0, delta=1e-6)
        self.assertTrue(payload["log_concave"])
        self.assertEqual(payload["metadata"]["truncation"], 12.0)
        for key in ("command", "kernel", "region", "order", "lambdas", "sigma2", "lclt_sup", "clt_sup"):
            self.assertIn(key, payload)
        self.assertIn("lclt_sup=", err)

    def test_gse_row(self):
        out, _ = run("count", ensemble="gse-bulk", s="10", k="10")
        header, rows = read_csv(out)
        self.assertEqual(header, ["k", "E", "gaussian", "difference"])
        self.assertEqual(len(rows), 1)
        self.assertAlmostEqual(float(rows[0][1]), 0.6307, delta=5e-4)

    def test_csv_matches_json(self):
        csv_out, _ = run("count", kernel="sine", interval="0:4")
        json_out, _ = run("count", kernel="sine", interval="0:4", format="json")
        _, rows = read_csv(csv_out)
        payload = json.loads(json_out)
        self.assertEqual([float(r[1]) for r in rows], payload["E"])

    def test_output_is_deterministic(self):
        first, _ = run("count", ensemble="gue-bulk", s="3")
        second, _ = run("count", ensemble="gue-bulk", s="3")
        self.assertEqual(first, second)
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "count.csv"
            out, _ = run("count", ensemble="gue-bulk", s="3", out=str(path))
            self.assertEqual(out, "")
            self.assertEqual(path.read_bytes(), first.encode("utf-8"))

    def test_negative_k_is_a_usage_error(self):
        with self.assertRaises(CommandError) as ctx:
            run("count", ensemble="gue-bulk", s="10", k="-1")
        self.assertEqual(ctx.exception.returncode, 2)


class SweepCommandTests(SimpleTestCase):
    def test_lclt_sweep_rows(self):
        out, _ = run("lclt", ensemble="gue-bulk", s="10,40")
        header, rows = read_csv(out)
        self.assertEqual(header, ["s", "mu", "sigma2", "lclt_sup", "clt_sup"])
        self.assertEqual([float(r[0]) for r in rows], [10.0, 40.0])
        self.assertGreater(float(rows[0][3]), float(rows[1][3]))

    def test_lclt_pool_keeps_order(self):
        serial, _ = run("lclt", ensemble="gse-bulk", s="10,4", workers="1")
        pooled, _ = run("lclt", ensemble="gse-bulk", s="10,4", workers="2")
        self.assertEqual(serial, pooled)

    def test_empty_s_list_is_a_usage_error(self):
        with self.assertRaises(CommandError) as ctx:
            run("lclt", ensemble="gue-bulk", s="")
        self.assertEqual(ctx.exception.returncode, 2)

    def test_spacing_bulk_normalisation(self):
        out, err = run("spacing", ensemble="spacing-bulk", k="0", smax="6", step="0.05", format="json")
        payload = json.loads(out)
        self.assertEqual(payload["s"][0], 0.0)
        self.assertEqual(payload["p"][0], 0.0)
        self.assertAlmostEqual(payload["integral"], 1.0, delta=2e-3)
        self.assertAlmostEqual(payload["first_moment"], 1.0, delta=5e-3)
        self.assertIn("integral=", err)

    def test_spacing_soft_column_is_positive(self):
        out, _ = run("spacing", ensemble="kth-largest-soft", k="0", srange="-4:4", step="0.5")
        _, rows = read_csv(out)
        self.assertEqual(len(rows), 17)
        self.assertTrue(all(float(r[1]) > 0.0 for r in rows))

    def test_spacing_soft_deep_right_tail_is_zero(self):
        out, _ = run("spacing", ensemble="kth-largest-soft", k="0", srange="-10:-6", step="1")
        _, rows = read_csv(out)
        self.assertEqual([float(r[0]) for r in rows], [-10.0, -9.0, -8.0, -7.0, -6.0])
        self.assertEqual([float(r[1]) for r in rows[:3]], [0.0, 0.0, 0.0])
        self.assertTrue(all(float(r[1]) > 0.0 for r in rows[3:]))

    def test_spacing_negative_k_is_a_usage_error(self):
        with self.assertRaises(CommandError) as ctx:
            run("spacing", ensemble="spacing-bulk", k="-1", smax="6")
        self.assertEqual(ctx.exception.returncode, 2)


class ReproduceCommandTests(SimpleTestCase):
    def test_table1_text(self):
        out, _ = run("reproduce", "table1")
        self.assertIn("Bulk GUE", out)
        self.assertIn("0.5202", out)
        self.assertEqual(out.count("\n10  "), 1)

    def test_table1_json(self):
        out, _ = run("reproduce", "table1", format="json")
        rows = json.loads(out)["blocks"][0]["rows"]
        self.assertEqual([r["k"] for r in rows], list(range(7, 14)))
        for row in rows:
            self.assertLessEqual(abs(row["deviation"]), 5e-4)

    def test_table2_csv(self):
        out, _ = run("reproduce", "table2", format="csv")
        header, rows = read_csv(out)
        self.assertEqual(header[:3], ["table", "row", "k"])
        self.assertEqual({r[1] for r in rows}, {"beta=1", "beta=4"})
        self.assertEqual(len(rows), 14)

    def test_softedge(self):
        out, _ = run("reproduce", "softedge", format="json")
        row = json.loads(out)["blocks"][0]["rows"][0]
        self.assertEqual(row["k"], 10)
        self.assertAlmostEqual(row["exact"], 0.6405, delta=5e-4)
        self.assertAlmostEqual(row["gaussian"], 0.649, delta=2e-3)

    def test_unknown_table(self):
        with self.assertRaises(CommandError):
            run("reproduce", "table3")
