"""CLI contract: exit codes, reproducible reports, read-only experiments.

Usage: test_cli.py <generec-cli> <work-dir>
"""
import hashlib
import json
import pathlib
import shutil
import subprocess
import sys
import unittest

CLI, WORK = pathlib.Path(sys.argv[1]), pathlib.Path(sys.argv[2])
CONFIG = {
    "synth": {"users_per_cluster": 3, "items_per_cluster": 10, "frames_per_item": 8, "width": 8, "height": 8,
              "exposures_per_user": 16},
    "scorer": {"epochs": 10},
    "experiment": {"runs": 2},
    "creation": {"num_frames": 4, "steps": 3},
}


def cli(*args, config=None):
    cmd = [str(CLI), *map(str, args)]
    if config is not None:
        cmd += ["--config", str(config)]
    return subprocess.run(cmd, capture_output=True, text=True)


def tree_digest(root):
    h = hashlib.sha256()
    for p in sorted(root.rglob("*")):
        if p.is_file():
            h.update(str(p.relative_to(root)).encode())
            h.update(p.read_bytes())
    return h.hexdigest()


class CliTest(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        shutil.rmtree(WORK, ignore_errors=True)
        WORK.mkdir(parents=True)
        cls.config = WORK / "config.json"
        cls.config.write_text(json.dumps(CONFIG))
        r = cli("synth", "--seed", 5, "--out", WORK / "data", config=cls.config)
        assert r.returncode == 0, r.stderr
        cls.manifest = WORK / "data" / "manifest.json"
        r = cli("train", cls.manifest, "--out", WORK / "scorer", config=cls.config)
        assert r.returncode == 0, r.stderr

    def test_synth_is_reproducible(self):
        for name in ("a", "b"):
            r = cli("synth", "--seed", 9, "--out", WORK / name, config=self.config)
            self.assertEqual(r.returncode, 0, r.stderr)
        self.assertEqual(tree_digest(WORK / "a"), tree_digest(WORK / "b"))
        r = cli("synth", "--seed", 10, "--out", WORK / "c", config=self.config)
        self.assertNotEqual(tree_digest(WORK / "a"), tree_digest(WORK / "c"))

    def test_experiments_are_reproducible_and_read_only(self):
        before = tree_digest(WORK / "data")
        for kind in ("thumbnail", "clip", "revise", "create"):
            reports = []
            for rep in ("1", "2"):
                out = WORK / f"{kind}{rep}.json"
                r = cli("exp", kind, self.manifest, "--scorer", WORK / "scorer", "--seed", 3, "--out", out,
                        config=self.config)
                self.assertEqual(r.returncode, 0, r.stderr)
                self.assertTrue(r.stdout.startswith("arm\tCosine@5"))
                reports.append(out.read_bytes())
            self.assertEqual(reports[0], reports[1], kind)
            self.assertEqual(json.loads(reports[0])["kind"], kind)
        self.assertEqual(before, tree_digest(WORK / "data"))

    def test_train_report(self):
        r = cli("train", self.manifest, "--out", WORK / "s2", config=self.config)
        self.assertEqual(r.returncode, 0, r.stderr)
        report = json.loads(r.stdout)
        self.assertIn("heldout_auc", report)
        self.assertTrue((WORK / "s2.grtf").exists() and (WORK / "s2.json").exists())

    def test_fvd(self):
        r = cli("fvd", self.manifest, WORK / "data" / "items")
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertLessEqual(json.loads(r.stdout)["fvd"], 1e-6)

    def test_exit_codes(self):
        bad = WORK / "bad.json"
        bad.write_text('{"synth": {"clusterz": 2}}')
        self.assertEqual(cli("synth", "--out", WORK / "x", config=bad).returncode, 2)
        self.assertEqual(cli("synth", "--out", WORK / "x", config=WORK / "missing.json").returncode, 2)
        self.assertEqual(cli("bogus").returncode, 2)
        self.assertEqual(cli("exp", "thumbnail", self.manifest).returncode, 2)  # no scorer
        self.assertEqual(cli("exp", "sideways", self.manifest, "--scorer", WORK / "scorer").returncode, 2)
        self.assertEqual(cli("train", WORK / "nowhere.json").returncode, 3)

        corrupt = WORK / "corrupt"
        shutil.copytree(WORK / "data", corrupt)
        tensor = next((corrupt / "items").glob("*.grtf"))
        tensor.write_bytes(b"XXXX" + tensor.read_bytes()[4:])
        r = cli("train", corrupt / "manifest.json")
        self.assertEqual(r.returncode, 3)
        self.assertIn(tensor.name, r.stderr)


if __name__ == "__main__":
    unittest.main(argv=[sys.argv[0]], verbosity=2)
