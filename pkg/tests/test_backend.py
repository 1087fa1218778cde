import json
import os
import subprocess
import sys

import pytest

SCRIPT = """
import json, random
from katzflat import BACKEND, flat_basis, project
from katzflat.oracle import generate_problem, random_vector
out = {"backend": BACKEND, "frames": [], "projections": []}
for shape in [(1, 2, 4), (2, 2, 3)]:
    prob = generate_problem(*shape, seed=2)
    out["frames"].append(flat_basis(prob.connection).matrix().format())
    m = random_vector(prob.connection, random.Random(2))
    out["projections"].append(project(prob.connection, m).format())
print(json.dumps(out))
"""


def _run(backend):
    env = dict(os.environ, KATZFLAT_RATIONAL=backend)
    proc = subprocess.run([sys.executable, "-c", SCRIPT], env=env, capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return json.loads(proc.stdout)


def test_backends_agree_exactly():
    pytest.importorskip("gmpy2")
    fast, slow = _run("gmpy2"), _run("fraction")
    assert (fast["backend"], slow["backend"]) == ("gmpy2", "fraction")
    assert fast["frames"] == slow["frames"]
    assert fast["projections"] == slow["projections"]


def test_unknown_backend_is_rejected():
    env = dict(os.environ, KATZFLAT_RATIONAL="float")
    proc = subprocess.run([sys.executable, "-c", "import katzflat"], env=env,
                          capture_output=True, text=True)
    assert proc.returncode != 0
    assert "KATZFLAT_RATIONAL" in proc.stderr
