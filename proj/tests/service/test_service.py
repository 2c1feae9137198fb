"""End-to-end check of the HTTP service against the checked-in JSON schemas.

Usage: test_service.py <generec-cli> <schemas-dir> <work-dir>
"""
import base64
import json
import pathlib
import shutil
import signal
import subprocess
import sys
import unittest

import jsonschema
import referencing
import requests

CLI, SCHEMAS, WORK = (pathlib.Path(a) for a in sys.argv[1:4])
CONFIG = json.dumps({
    "synth": {"users_per_cluster": 4, "items_per_cluster": 15, "width": 8, "height": 8,
              "exposures_per_user": 24},
    "scorer": {"epochs": 20},
})


def load_registry():
    resources = []
    for path in SCHEMAS.glob("*.schema.json"):
        contents = json.loads(path.read_text())
        resources.append((path.name, referencing.Resource.from_contents(contents)))
    return referencing.Registry().with_resources(resources)


REGISTRY = load_registry()


def validate(name, body):
    schema = json.loads((SCHEMAS / f"{name}.schema.json").read_text())
    jsonschema.Draft202012Validator(schema, registry=REGISTRY).validate(body)


class ServiceTest(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        shutil.rmtree(WORK, ignore_errors=True)
        WORK.mkdir(parents=True)
        run = lambda *args: subprocess.run([str(CLI), *args, "--config", CONFIG], check=True,
                                           capture_output=True, text=True)
        run("synth", "--out", str(WORK / "data"))
        run("train", str(WORK / "data" / "manifest.json"), "--out", str(WORK / "scorer"))
        cls.proc = subprocess.Popen(
            [str(CLI), "serve", str(WORK / "data" / "manifest.json"), "--scorer", str(WORK / "scorer"),
             "--port", "0", "--session-dir", str(WORK / "sessions"), "--config", CONFIG],
            stdout=subprocess.PIPE, text=True)
        line = cls.proc.stdout.readline()
        if not line.startswith("listening on "):
            cls.proc.kill()
            raise RuntimeError(f"server did not start: {line!r}")
        cls.base = line.split()[-1].strip() + "/api"

    @classmethod
    def tearDownClass(cls):
        cls.proc.send_signal(signal.SIGINT)
        if cls.proc.wait(timeout=30) != 0:
            raise RuntimeError("server exited with an error")
        saved = list((WORK / "sessions").glob("*/session.json"))
        if not saved:
            raise RuntimeError("no sessions were saved on shutdown")

    def new_session(self, user="user0001"):
        r = requests.post(f"{self.base}/session", json={"user_id": user} if user else None)
        self.assertEqual(r.status_code, 200)
        validate("session", r.json())
        return r.json()["session_id"]

    def feed(self, sid, k=5):
        r = requests.get(f"{self.base}/session/{sid}/feed", params={"k": k})
        self.assertEqual(r.status_code, 200, r.text)
        validate("recommendation", r.json())
        return r.json()

    def feedback(self, sid, item, sig):
        return requests.post(f"{self.base}/session/{sid}/feedback", json={"item_id": item, "signal": sig})

    def test_fresh_feed(self):
        sid = self.new_session()
        body = self.feed(sid, 5)
        items = body["items"]
        self.assertEqual(len(items), 5)
        self.assertEqual(len({i["id"] for i in items}), 5)
        for item in items:
            self.assertEqual(item["provenance"], "human")
            thumb = item["thumbnail"]
            raw = base64.b64decode(thumb["data"])
            self.assertEqual(len(raw), thumb["width"] * thumb["height"] * 3)

    def test_generate_new(self):
        sid = self.new_session()
        r = requests.post(f"{self.base}/session/{sid}/instruction", json={"text": "GENERATE NEW"})
        self.assertEqual(r.status_code, 200, r.text)
        validate("recommendation", r.json())
        item = r.json()["items"][0]
        self.assertEqual(item["provenance"], "ai_created")
        self.assertTrue(item["watermarked"])
        self.assertTrue(item["check_report"]["pass"])

        frames = requests.get(f"{self.base}/item/{item['id']}/frames", params={"session": sid})
        self.assertEqual(frames.status_code, 200)
        validate("frames", frames.json())
        self.assertEqual(frames.json()["num_frames"], item["num_frames"])

    def test_dislike_streak(self):
        sid = self.new_session("user0005")
        items = self.feed(sid, 3)["items"]
        for item in items:
            r = self.feedback(sid, item["id"], "dislike")
            self.assertEqual(r.status_code, 200)
            validate("feedback", r.json())
        profile = requests.get(f"{self.base}/session/{sid}/profile").json()
        validate("profile", profile)
        self.assertEqual(profile["dislike_streak"], 3)
        body = self.feed(sid, 5)
        self.assertTrue(any(i["provenance"] != "human" for i in body["items"]))

    def test_parse_error(self):
        sid = self.new_session()
        r = requests.post(f"{self.base}/session/{sid}/instruction", json={"text": "EDIT"})
        self.assertEqual(r.status_code, 422)
        validate("error", r.json())
        self.assertEqual(r.json()["kind"], "MissingArgument")
        self.assertEqual(r.json()["offset"], 4)

    def test_error_statuses(self):
        sid = self.new_session()
        r = requests.get(f"{self.base}/session/nope/feed")
        self.assertEqual(r.status_code, 404)
        validate("error", r.json())
        self.assertEqual(requests.get(f"{self.base}/item/nope/frames").status_code, 404)
        r = self.feedback(sid, "item0000", "like")
        self.assertEqual(r.status_code, 409)
        validate("error", r.json())
        self.assertEqual(requests.post(f"{self.base}/session/{sid}/feedback", data="{").status_code, 400)
        self.assertEqual(requests.get(f"{self.base}/session/{sid}/feed", params={"k": "x"}).status_code, 400)

    def test_anonymous_profile(self):
        sid = self.new_session(None)
        profile = requests.get(f"{self.base}/session/{sid}/profile").json()
        validate("profile", profile)
        self.assertEqual(profile["preference"]["source"], "corpus_mean")
        self.feed(sid, 4)

    def test_likes_shift_the_profile(self):
        sid = self.new_session(None)
        first = self.feed(sid, 10)
        before = requests.get(f"{self.base}/session/{sid}/profile").json()["feed_cosine"]
        # Like the three reddest thumbnails of the first feed.
        def red(item):
            raw = base64.b64decode(item["thumbnail"]["data"])
            return sum(raw[0::3]) - sum(raw[1::3]) / 2 - sum(raw[2::3]) / 2
        for item in sorted(first["items"], key=red, reverse=True)[:3]:
            self.assertEqual(self.feedback(sid, item["id"], "like").status_code, 200)
        self.feed(sid, 5)
        profile = requests.get(f"{self.base}/session/{sid}/profile").json()
        self.assertEqual(profile["preference"]["source"], "history")
        self.assertGreater(profile["feed_cosine"], before)


if __name__ == "__main__":
    unittest.main(argv=[sys.argv[0]], verbosity=2)
