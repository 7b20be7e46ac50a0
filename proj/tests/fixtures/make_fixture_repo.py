#!/usr/bin/env python3
"""Builds the scripted history fixture and writes the expected ledger.

Usage: make_fixture_repo.py <target-dir>

The repository has 12 commits (one merge of a one-commit side branch), so the
first-parent chain from the snapshot holds 11 commits. Method identity is
tracked by the script itself, so the ledger does not depend on the tracer's
matching heuristics. Line diffs and edit distances use plain dynamic
programming, independent of the C++ code.
"""

import json
import os
import subprocess
import sys

WINDOW_DAYS = 365.25 * 5

HR_WORDS = ["error", "bug", "fix", "issue", "mistake", "incorrect", "fault", "defect", "flaw"]
HP_BUG_WORDS = ["error", "bug", "mistake", "incorrect", "fault", "defect", "flaw", "misfeature"]
HP_FIX_WORDS = ["fix", "address", "resolve"]


def lines(*rows):
    return "\n".join(rows)


ALPHA_1 = lines(
    "    public int alpha(int a, int b) {",
    "        int sum = a + b;",
    "        return sum * 2;",
    "    }")
ALPHA_2 = lines(
    "    public int alpha(int a, int b) {",
    "        if (a < 0) {",
    "            throw new IllegalArgumentException(\"negative\");",
    "        }",
    "        int sum = a + b;",
    "        return sum * 2;",
    "    }")
ALPHA_3 = lines(
    "    public int alphaRenamed(int a, int b) {",
    "        if (a < 0) {",
    "            throw new IllegalArgumentException(\"negative\");",
    "        }",
    "        int sum = a + b;",
    "        return sum * 3;",
    "    }")
BETA_1 = lines(
    "    static String beta(String s) {",
    "        String t = s.trim();",
    "        return t.toUpperCase();",
    "    }")
BETA_2 = lines(
    "    static String beta(String s) {",
    "        String t = s.trim();",
    "        // normalize case",
    "        return t.toUpperCase();",
    "    }")
BETA_3 = lines(
    "    static String beta(String s) {",
    "        String t = s.strip();",
    "        // normalize case",
    "        return t.toUpperCase();",
    "    }")
GAMMA_1 = lines(
    "    double gamma(double x) {",
    "        double y = x * x;",
    "        if (y > 100) {",
    "            y = 100;",
    "        }",
    "        return y;",
    "    }")
GAMMA_2 = GAMMA_1.replace("y > 100", "y >= 100")
GAMMA_3 = lines(
    "    double gamma(double x) {",
    "        double y = x * x;",
    "        if (y >= 100) {",
    "            y = 100;",
    "        }",
    "        y = y / 2;",
    "        return y;",
    "    }")
DELTA_1 = lines(
    "    long delta(long n) {",
    "        long r = 0;",
    "        for (long i = 0; i < n; i++) {",
    "            r += i;",
    "        }",
    "        return r;",
    "    }")
DELTA_2 = DELTA_1.replace("r += i;", "r += i * 2;")
DELTA_3 = DELTA_2.replace("for (long i = 0; i < n; i++)", "for (long i = 1; i <= n; i++)")
NAME_1 = lines(
    "    String name() {",
    "        return \"core\";",
    "    }")
EPSILON_1 = lines(
    "    int epsilon(int k) {",
    "        return k * k + 1;",
    "    }")
U1_1 = lines(
    "    static boolean u1(String text) {",
    "        return text != null && !text.isEmpty();",
    "    }")
U1_2 = U1_1.replace("isEmpty", "isBlank")
U2_1 = lines(
    "    static int u2(int[] values) {",
    "        int total = 0;",
    "        for (int v : values) {",
    "            total += v;",
    "        }",
    "        return total;",
    "    }")
U2_2 = U2_1.replace("total += v;", "total += Math.abs(v);")


def render(class_name, methods):
    body = "\n\n".join(text for _, text in methods)
    return f"package p;\n\nclass {class_name} {{\n\n{body}\n}}\n"


class Builder:
    def __init__(self, root):
        self.root = root
        self.env = dict(os.environ)
        self.env.update({
            "GIT_CONFIG_NOSYSTEM": "1",
            "HOME": root,
            "GIT_AUTHOR_NAME": "Fixture",
            "GIT_AUTHOR_EMAIL": "fixture@example.com",
            "GIT_COMMITTER_NAME": "Fixture",
            "GIT_COMMITTER_EMAIL": "fixture@example.com",
        })
        self.git("init", "-q", "-b", "master")
        self.git("config", "commit.gpgsign", "false")

    def git(self, *args, date=None):
        env = dict(self.env)
        if date:
            env["GIT_AUTHOR_DATE"] = date
            env["GIT_COMMITTER_DATE"] = date
        out = subprocess.run(["git", *args], cwd=self.root, env=env, check=True, capture_output=True, text=True)
        return out.stdout.strip()

    def write(self, files):
        for path, (cls, methods) in files.items():
            full = os.path.join(self.root, path)
            os.makedirs(os.path.dirname(full), exist_ok=True)
            with open(full, "w", encoding="utf-8") as f:
                f.write(render(cls, methods))

    def commit(self, message, date):
        self.git("add", "-A")
        self.git("commit", "-q", "-m", message, date=date)
        return self.git("rev-parse", "HEAD")


def epoch(date):
    from datetime import datetime
    return int(datetime.strptime(date, "%Y-%m-%dT%H:%M:%S%z").timestamp())


def lcs(a, b):
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b):
            cur.append(prev[j] + 1 if x == y else max(prev[j + 1], cur[j]))
        prev = cur
    return prev[-1]


def edit_distance(a, b):
    d = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(len(a) + 1):
        d[i][0] = i
    for j in range(len(b) + 1):
        d[0][j] = j
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            d[i][j] = min(d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (a[i - 1] != b[j - 1]))
    return d[len(a)][len(b)]


def words(message):
    out, cur = [], ""
    for ch in message.lower():
        if ch.isascii() and ch.isalnum():
            cur += ch
        elif cur:
            out.append(cur)
            cur = ""
    if cur:
        out.append(cur)
    return out


def any_prefix(tokens, stems):
    return any(t.startswith(s) for t in tokens for s in stems)


def main():
    root = os.path.abspath(sys.argv[1])
    os.makedirs(root, exist_ok=True)
    b = Builder(root)

    # Each master state maps key -> (path, text); keys are the script's own identities.
    core = [["alpha", ALPHA_1], ["beta", BETA_1], ["gamma", GAMMA_1], ["delta", DELTA_1], ["name", NAME_1]]
    util = [["u1", U1_1], ["u2", U2_1]]
    util_path = "src/p/Util.java"
    states = []  # (commit id, time, message, {key: (path, text)}) along the first-parent chain

    def state():
        s = {k: ("src/p/Core.java", t) for k, t in core}
        s.update({k: (util_path, t) for k, t in util})
        return s

    def set_text(table, key, text):
        for row in table:
            if row[0] == key:
                row[1] = text

    def commit(message, date):
        b.write({"src/p/Core.java": ("Core", core), util_path: ("Util", util)})
        sha = b.commit(message, date)
        states.append((sha, epoch(date), message, state()))
        return sha

    commit("Initial import", "2010-01-10T12:00:00+0000")
    set_text(core, "alpha", ALPHA_2)
    commit("Handle error case in alpha", "2010-06-01T12:00:00+0000")
    set_text(core, "beta", BETA_2)
    commit("Document beta", "2011-03-01T12:00:00+0000")
    set_text(core, "gamma", GAMMA_2)
    set_text(core, "delta", DELTA_2)
    set_text(util, "u1", U1_2)
    commit("Fix bug in parsing", "2011-08-01T12:00:00+0000")
    os.makedirs(os.path.join(root, "src/p/util"), exist_ok=True)
    b.git("mv", util_path, "src/p/util/Util.java")
    util_path = "src/p/util/Util.java"
    commit("Move Util into util package directory", "2012-02-01T12:00:00+0000")

    b.git("checkout", "-q", "-b", "side")
    set_text(util, "u2", U2_2)
    b.write({util_path: ("Util", util)})
    b.commit("Use absolute values in u2", "2012-05-01T12:00:00+0000")
    b.git("checkout", "-q", "master")
    set_text(util, "u2", U2_1)

    set_text(core, "beta", BETA_3)
    commit("Refactor beta", "2012-04-01T12:00:00+0000")
    date = "2012-06-01T12:00:00+0000"
    b.git("merge", "-q", "--no-ff", "-m", "Merge branch side", "side", date=date)
    set_text(util, "u2", U2_2)
    states.append((b.git("rev-parse", "HEAD"), epoch(date), "Merge branch side", state()))

    set_text(core, "alpha", ALPHA_3)
    commit("Rename alpha to alphaRenamed", "2013-01-01T12:00:00+0000")
    core[:] = [core[0], core[2], core[1], core[3], core[4]]
    commit("Reorder methods", "2013-06-01T12:00:00+0000")
    set_text(core, "delta", DELTA_3)
    commit("Fix bug in delta rounding", "2014-01-01T12:00:00+0000")
    set_text(core, "gamma", GAMMA_3)
    core.append(["epsilon", EPSILON_1])
    commit("Add epsilon and halve gamma", "2016-03-01T12:00:00+0000")

    # Derive histories from the known identities.
    snapshot_sha, snapshot_time, _, snapshot_state = states[-1]
    touched = {}
    per_method = {k: {"intro": None, "revisions": []} for k in snapshot_state}
    for idx, (sha, t, msg, st) in enumerate(states):
        prev = states[idx - 1][3] if idx > 0 else {}
        for key in per_method:
            if key not in st:
                continue
            if key not in prev:
                per_method[key]["intro"] = (sha, t)
            elif prev[key][1] != st[key][1]:
                old, new = prev[key][1], st[key][1]
                common = lcs(old.split("\n"), new.split("\n"))
                per_method[key]["revisions"].append({
                    "commit": sha, "time": t, "message": msg,
                    "added": len(new.split("\n")) - common,
                    "deleted": len(old.split("\n")) - common,
                    "editDistance": edit_distance(old, new),
                })
                touched[sha] = touched.get(sha, 0) + 1

    methods = []
    for key, (path, text) in sorted(snapshot_state.items()):
        h = per_method[key]
        intro_sha, intro_time = h["intro"]
        in_window = [r for r in h["revisions"] if (r["time"] - intro_time) / 86400.0 <= WINDOW_DAYS]
        hr = sum(1 for r in in_window if any_prefix(words(r["message"]), HR_WORDS))
        hp = sum(1 for r in in_window
                 if any_prefix(words(r["message"]), HP_BUG_WORDS) and any_prefix(words(r["message"]), HP_FIX_WORDS)
                 and touched[r["commit"]] == 1)
        header = text.split("\n")[0]
        name = header.split("(")[0].split()[-1]
        methods.append({
            "key": key,
            "path": path,
            "name": name,
            "introCommit": intro_sha,
            "ageKept": (snapshot_time - intro_time) / 86400.0 >= WINDOW_DAYS,
            "allRevisions": len(h["revisions"]),
            "revisionCommits": [r["commit"] for r in h["revisions"]],
            "indicators": {
                "revisions": len(in_window),
                "diffSize": sum(r["added"] + r["deleted"] for r in in_window),
                "additionOnly": sum(r["added"] for r in in_window),
                "editDistance": sum(r["editDistance"] for r in in_window),
            },
            "bugs": {"highRecall": hr, "highPrecision": hp},
        })

    ledger = {
        "snapshot": snapshot_sha,
        "snapshotTime": snapshot_time,
        "firstParentChain": [s[0] for s in reversed(states)],
        "totalCommits": int(b.git("rev-list", "--count", "--all")),
        "methods": methods,
    }
    with open(os.path.join(root, "..", os.path.basename(root) + ".ledger.json"), "w", encoding="utf-8") as f:
        json.dump(ledger, f, indent=2, sort_keys=True)


if __name__ == "__main__":
    main()
