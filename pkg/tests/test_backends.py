import os
import subprocess
import sys

import numpy as np
import pytest

from dtmod import catalog_lookup
from dtmod import _kernels_py

compiled = pytest.importorskip("dtmod._kernels",
                               reason="extension not built in this install")

FNS = [
    catalog_lookup("poly", [0.3, -1.0, 0.0, 2.0, 0.5]),
    catalog_lookup("exp", [1.3]),
    catalog_lookup("abspow", [0.1, 3.5]),
    catalog_lookup("truncpow", [0.3, 4]),
]
X = np.linspace(-0.97, 0.97, 257)


@pytest.mark.parametrize("f", FNS, ids=lambda f: f.label)
def test_eval_agreement(f):
    a = compiled.eval_table(*f._table(), X)
    b = _kernels_py.eval_table(*f._table(), X)
    assert np.allclose(a, b, rtol=1e-13, atol=1e-13)


@pytest.mark.parametrize("f", FNS, ids=lambda f: f.label)
@pytest.mark.parametrize("phi_step", [False, True])
def test_diff_agreement(f, phi_step):
    for k in (1, 2, 3):
        a = compiled.diff_table(*f._table(), k, 0.07, X, phi_step)
        b = _kernels_py.diff_table(*f._table(), k, 0.07, X, phi_step)
        assert np.allclose(a, b, rtol=1e-12, atol=1e-14)


def test_phi_values_agreement():
    a = compiled.phi_values(X)
    b = _kernels_py.phi_values(X)
    assert np.allclose(a, b, rtol=0, atol=1e-16)


def test_backend_env_selects_python():
    code = ("import dtmod._backend as b;"
            "print(b.impl.__name__)")
    env = dict(os.environ, DTMOD_BACKEND="python")
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "dtmod._kernels_py"


def test_backend_env_rejects_unknown():
    env = dict(os.environ, DTMOD_BACKEND="turbo")
    out = subprocess.run([sys.executable, "-c", "import dtmod._backend"],
                         env=env, capture_output=True, text=True)
    assert out.returncode != 0
    assert "turbo" in out.stderr
