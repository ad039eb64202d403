import json
import os
import subprocess
import sys
import tempfile

try:
    import jsonschema
except ImportError:
    print("jsonschema not available")
    sys.exit(77)

BIN = sys.argv[1]
failures = []


def run(*args):
    p = subprocess.run([BIN, *args], capture_output=True, text=True)
    return p.returncode, p.stdout, p.stderr


def check(cond, what):
    if not cond:
        failures.append(what)
        print("FAIL", what)


code, out, _ = run("--help-schema")
check(code == 0, "help-schema exit")
schemas = json.loads(out)


def validated(name, *args, expect=0):
    code, out, err = run(*args)
    check(code == expect, f"{' '.join(args)} exit {code} {err.strip()}")
    doc = json.loads(out)
    try:
        jsonschema.validate(doc, schemas[name])
    except jsonschema.ValidationError as e:
        check(False, f"{' '.join(args)} schema: {e.message}")
    return doc


doc = validated("verify", "verify", "--suite", "su2g", "--gamma", "sym")
check(all(r["verdict"] == "confirmed" for r in doc["results"]), "su2g all confirmed")
check(doc["summary"]["oracle_ok"], "su2g oracle")

doc = validated("verify", "verify", "--suite", "quadratic", "--gamma", "0.6")
check(all(r["oracle_ok"] for r in doc["results"]), "quadratic oracle_ok")
check(doc["manifest"]["parameters"]["gamma"].startswith("0.6"), "manifest gamma")

for args in (["verify", "--suite", "nosuch"], ["spectrum", "--m", "2", "--gamma", "1.2"],
             ["spectrum", "--m", "0"], ["expr", "[J0, "], ["spectrum", "--m", "2", "--gamma", "sym"],
             ["classify"], ["verify", "--suite", "su2g", "--gamma", "2"]):
    code, _, _ = run(*args)
    check(code == 2, f"{' '.join(args)} usage exit {code}")

doc = validated("spectrum", "spectrum", "--m", "2", "--gamma", "0.6")
vals = [e["value"] for e in doc["eigen"]]
check(all(abs(a - b) < 1e-12 for a, b in zip(vals, [0.8, 0.0, -0.8])), "m=2 values")
check(all(e["pt"]["label"] == "conforming" for e in doc["eigen"]), "m=2 conforming")

doc = validated("spectrum", "spectrum", "--m", "3", "--gamma", "0.6", "--exact")
vals = [e["value"] for e in doc["eigen"]]
check(all(abs(a - b) < 1e-12 for a, b in zip(vals, [1.2, 0.4, -0.4, -1.2])), "m=3 values")
check(all(e["pt"]["label"] == "breaking" for e in doc["eigen"]), "m=3 breaking")
check(all(e["exact"]["residual_zero"] for e in doc["eigen"]), "m=3 exact residuals")
check(doc["checks"]["exact_roots"], "m=3 exact roots")

code, out, _ = run("spectrum", "--m", "4", "--sweep", "0.05:0.95:19")
check(code == 0, "sweep exit")
rows = [l.split(",") for l in out.splitlines() if l and not l.startswith("#")][1:]
check(len(rows) == 19 * 5, "sweep rows")
for k in range(5):
    traj = [abs(float(r[3])) for r in rows if int(r[2]) == k]
    check(all(b <= a + 1e-15 for a, b in zip(traj, traj[1:])), f"trajectory {k} shrinks")

doc = validated("gershgorin", "gershgorin", "--m", "3", "--gamma", "0.2")
check(doc["disjoint"] and doc["per_disk"] == [1, 1, 1, 1], "m=3 gamma=0.2 disks")
doc = validated("gershgorin", "gershgorin", "--m", "3", "--gamma", "0.5")
check(not doc["disjoint"] and doc["contained"], "m=3 gamma=0.5 disks")

doc = validated("classify", "classify", "--m", "7", "--gamma", "0.4", "--seed", "9")
check(len(doc["states"]) == 8, "classify 8 states")
check(all(abs(s["ratio"][0] + 1) < 1e-9 for s in doc["states"]), "classify ratio -1")
check(doc["rescale_invariant"], "rescale invariance")

doc = validated("export-matrix", "export-matrix", "--m", "2", "--gamma", "0.6")
check(len(doc["entries"]) == 6, "export entries")
doc = validated("export-matrix", "export-matrix", "--instance", "su2g", "--expr", "[Jp, Jm]", "--bound", "3")
check(doc["rows"] > 0, "export instance matrix")

code, out, _ = run("expr", "--instance", "su2g", "[J0, Jp] - w0*Jp")
check(code == 0 and json.loads(out)["zero"], "ladder expression vanishes")
code, out, _ = run("expr", "{T1, T2}")
check(code == 0 and json.loads(out)["formula"] == "{T1, T2}", "anticommutator parses")
code, out, _ = run("expr", "Jp†", "--format", "text")
check(code == 0 and out.strip() == "Jp'", "dagger postfix")
code, _, _ = run("expr", "--instance", "su2g", "Zp")
check(code == 2, "unknown label rejected")

a = run("verify", "--suite", "su11m", "--no-timing")[1]
b = run("verify", "--suite", "su11m", "--no-timing")[1]
check(a == b, "verify deterministic")
a = run("spectrum", "--m", "5", "--gamma", "0.3", "--no-timing")[1]
b = run("spectrum", "--m", "5", "--gamma", "0.3", "--no-timing")[1]
check(a == b, "spectrum deterministic")

doc = validated("killing", "killing", "--p", "0", "--gamma", "0.6")
check(doc["pauli"]["signature"]["positive"] == 3, "killing pauli signature")
doc = validated("instance", "instance", "--name", "higgs")
check(len(doc["relations"]) > 0, "instance relations")
code, _, _ = run("instance", "--name", "nosuch")
check(code == 2, "unknown instance rejected")

with tempfile.TemporaryDirectory() as d:
    path = os.path.join(d, "r.json")
    code, out, _ = run("gershgorin", "--m", "4", "--gamma", "0.1", "--out", path)
    check(code == 0 and out == "", "out writes nothing to stdout")
    with open(path) as f:
        check(json.load(f)["disjoint"], "out file content")
    check(not os.path.exists(path + ".tmp"), "temporary removed")

print(f"{len(failures)} failures")
sys.exit(1 if failures else 0)
